use std::sync::Arc;

use super::{FinCategory, Functor, MorId, ObjId};
use crate::error::{Error, Result};

/// `o` maps uniquely to every object.
pub fn is_initial(c: &FinCategory, o: ObjId) -> bool {
    c.objects().all(|x| c.hom(o, x).len() == 1)
}

/// Every object maps uniquely to `o`.
pub fn is_terminal(c: &FinCategory, o: ObjId) -> bool {
    c.objects().all(|x| c.hom(x, o).len() == 1)
}

/// Searches for an isomorphism of categories `a → b` by backtracking, first
/// over object bijections and then over hom-set bijections. `budget` bounds
/// the number of search nodes.
pub fn find_isomorphism(a: &Arc<FinCategory>, b: &Arc<FinCategory>, budget: u64) -> Result<Option<Functor>> {
    if a.num_objects() != b.num_objects() || a.num_morphisms() != b.num_morphisms() {
        return Ok(None);
    }
    let mut search = Search {
        a,
        b,
        nodes: 0,
        budget,
        obj: vec![usize::MAX; a.num_objects()],
        obj_used: vec![false; b.num_objects()],
        mor: vec![usize::MAX; a.num_morphisms()],
        mor_used: vec![false; b.num_morphisms()],
        as_composite: vec![Vec::new(); a.num_morphisms()],
    };
    for f in a.morphisms() {
        for &g in a.out_of(a.tgt(f)) {
            if let Some(h) = a.try_compose(g, f) {
                search.as_composite[h].push((g, f));
            }
        }
    }
    if !search.objects(0)? {
        return Ok(None);
    }
    Ok(Some(Functor::from_maps(a.clone(), b.clone(), search.obj, search.mor)))
}

struct Search<'a> {
    a: &'a FinCategory,
    b: &'a FinCategory,
    nodes: u64,
    budget: u64,
    obj: Vec<ObjId>,
    obj_used: Vec<bool>,
    mor: Vec<MorId>,
    mor_used: Vec<bool>,
    as_composite: Vec<Vec<(MorId, MorId)>>,
}

impl Search<'_> {
    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded(self.budget));
        }
        Ok(())
    }

    fn objects(&mut self, x: ObjId) -> Result<bool> {
        if x == self.a.num_objects() {
            return self.morphisms(0);
        }
        for y in self.b.objects() {
            if self.obj_used[y] {
                continue;
            }
            self.tick()?;
            let consistent = (0..x).chain(std::iter::once(x)).all(|z| {
                let fz = if z == x { y } else { self.obj[z] };
                self.a.hom(x, z).len() == self.b.hom(y, fz).len()
                    && self.a.hom(z, x).len() == self.b.hom(fz, y).len()
            });
            if !consistent {
                continue;
            }
            self.obj[x] = y;
            self.obj_used[y] = true;
            if self.objects(x + 1)? {
                return Ok(true);
            }
            self.obj_used[y] = false;
            self.obj[x] = usize::MAX;
        }
        Ok(false)
    }

    fn morphisms(&mut self, m: MorId) -> Result<bool> {
        if m == self.a.num_morphisms() {
            return Ok(true);
        }
        let (s, t) = (self.obj[self.a.src(m)], self.obj[self.a.tgt(m)]);
        let candidates: Vec<MorId> = if self.a.is_identity(m) {
            vec![self.b.identity(s)]
        } else {
            self.b.hom(s, t).to_vec()
        };
        for n in candidates {
            if self.mor_used[n] || (self.b.is_identity(n) && !self.a.is_identity(m)) {
                continue;
            }
            self.tick()?;
            self.mor[m] = n;
            self.mor_used[n] = true;
            if self.compatible(m) && self.morphisms(m + 1)? {
                return Ok(true);
            }
            self.mor_used[n] = false;
            self.mor[m] = usize::MAX;
        }
        Ok(false)
    }

    /// Every composite relation involving `m` whose three members are assigned holds.
    fn compatible(&self, m: MorId) -> bool {
        let set = |x: MorId| self.mor[x] != usize::MAX;
        let holds = |g: MorId, f: MorId, h: MorId| {
            !(set(g) && set(f) && set(h)) || self.b.try_compose(self.mor[g], self.mor[f]) == Some(self.mor[h])
        };
        let a = self.a;
        for &g in a.out_of(a.tgt(m)) {
            if let Some(h) = a.try_compose(g, m) {
                if !holds(g, m, h) {
                    return false;
                }
            }
        }
        for &f in a.into(a.src(m)) {
            if let Some(h) = a.try_compose(m, f) {
                if !holds(m, f, h) {
                    return false;
                }
            }
        }
        self.as_composite[m].iter().all(|&(g, f)| holds(g, f, m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{ordinal, poset_category, product_category, subset_poset};

    #[test]
    fn ordinal_isomorphic_to_relabelled_poset() {
        let a = Arc::new(ordinal(2));
        let b = Arc::new(poset_category(&["x", "y", "z"], &[("z", "y"), ("y", "x"), ("z", "x")]).unwrap());
        let f = find_isomorphism(&a, &b, 1_000).unwrap().unwrap();
        assert!(f.is_isomorphism());
        assert_eq!(b.object_id(f.obj(0)), "z");
    }

    #[test]
    fn non_isomorphic_same_counts() {
        // V shape versus Λ shape: both 3 objects, 5 morphisms
        let v = Arc::new(subset_poset(&["1", "2"], false));
        let l = Arc::new(poset_category(&["a", "b", "c"], &[("a", "b"), ("a", "c")]).unwrap());
        assert!(find_isomorphism(&v, &l, 10_000).unwrap().is_none());
    }

    #[test]
    fn product_associativity_up_to_iso() {
        let one = Arc::new(ordinal(1));
        let two = Arc::new(ordinal(2));
        let left = product_category(product_category(one.clone(), two.clone()).category, one.clone());
        let right = product_category(one.clone(), product_category(two, one).category);
        assert!(find_isomorphism(&left.category, &right.category, 1_000_000)
            .unwrap()
            .is_some());
    }

    #[test]
    fn budget_is_enforced() {
        let a = Arc::new(subset_poset(&["1", "2", "3"], false));
        assert!(matches!(find_isomorphism(&a, &a, 2), Err(Error::BudgetExceeded(2))));
    }

    #[test]
    fn initial_terminal() {
        let c = ordinal(3);
        assert!(is_initial(&c, 0));
        assert!(is_terminal(&c, 3));
        assert!(!is_initial(&c, 1));
    }
}

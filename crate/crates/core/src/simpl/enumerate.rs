use std::collections::HashMap;
use std::sync::Arc;

use super::{Simplex, SimplicialMap, SimplicialSet};
use crate::error::{Error, Result};

/// Families of maps `f_i : K_i → Z_i` commuting with given structure maps
/// `K_i → K_j` and `Z_i → Z_j` along each listed edge `(i, j)`.
pub struct NaturalMapProblem<'a> {
    pub sources: Vec<Arc<SimplicialSet>>,
    pub targets: Vec<Arc<SimplicialSet>>,
    pub edges: Vec<(usize, usize, &'a SimplicialMap, &'a SimplicialMap)>,
}

/// All simplicial maps `K → Z`.
pub fn enumerate_simplicial_maps(
    k: &Arc<SimplicialSet>,
    z: &Arc<SimplicialSet>,
    max_dim: usize,
    budget: u64,
) -> Result<Vec<SimplicialMap>> {
    let problem = NaturalMapProblem {
        sources: vec![k.clone()],
        targets: vec![z.clone()],
        edges: Vec::new(),
    };
    Ok(enumerate_natural_maps(&problem, max_dim, budget)?
        .into_iter()
        .map(|mut fam| fam.pop().unwrap())
        .collect())
}

#[derive(Clone, Copy)]
struct Var {
    slot: usize,
    dim: usize,
    index: usize,
}

/// Naturality constraint: `f_j(K(x)) = Z(f_i(x))` for one edge and one `x`.
struct Natural {
    edge: usize,
    x: Var,
    image_of_x: Simplex,
}

/// Backtracking over images of nondegenerate simplices, lowest dimension
/// first. Candidates for a simplex are the target simplices with the right
/// vertices; faces and naturality are checked as soon as both sides are known.
pub fn enumerate_natural_maps(
    problem: &NaturalMapProblem<'_>,
    max_dim: usize,
    budget: u64,
) -> Result<Vec<Vec<SimplicialMap>>> {
    let slots = problem.sources.len();
    let top = problem
        .sources
        .iter()
        .filter_map(|s| s.dim())
        .max();
    if let Some(d) = top {
        if d > max_dim {
            return Err(Error::DimensionCap { dim: d, cap: max_dim });
        }
    }
    let top = top.map_or(0, |d| d + 1);

    let mut vars: Vec<Var> = Vec::new();
    let mut position: Vec<Vec<Vec<usize>>> = vec![Vec::new(); slots];
    for dim in 0..top {
        for (slot, pos) in position.iter_mut().enumerate() {
            let n = problem.sources[slot].count(dim);
            pos.push((vars.len()..vars.len() + n).collect());
            for index in 0..n {
                vars.push(Var { slot, dim, index });
            }
        }
    }

    // constraints attached to the later of their two variables
    let mut naturals: Vec<Vec<Natural>> = (0..vars.len()).map(|_| Vec::new()).collect();
    for (e, &(i, j, kmap, _)) in problem.edges.iter().enumerate() {
        for dim in 0..top {
            for index in 0..problem.sources[i].count(dim) {
                let y = kmap.image(dim, index).clone();
                let a = position[i][dim][index];
                let b = position[j][y.base_dim][y.index];
                naturals[a.max(b)].push(Natural {
                    edge: e,
                    x: Var { slot: i, dim, index },
                    image_of_x: y,
                });
            }
        }
    }

    // target simplices grouped by vertex tuple, per slot and dimension
    let by_vertices: Vec<Vec<HashMap<Vec<usize>, Vec<Simplex>>>> = problem
        .targets
        .iter()
        .map(|z| {
            (0..top)
                .map(|n| {
                    let mut m: HashMap<Vec<usize>, Vec<Simplex>> = HashMap::new();
                    for s in z.all_simplices(n) {
                        m.entry(z.vertices(&s)).or_default().push(s);
                    }
                    m
                })
                .collect()
        })
        .collect();
    let source_vertices: Vec<Vec<usize>> = vars
        .iter()
        .map(|v| {
            let k = &problem.sources[v.slot];
            k.vertices(&Simplex::nondegenerate(v.dim, v.index))
        })
        .collect();

    let mut search = Search {
        problem,
        vars: &vars,
        naturals: &naturals,
        by_vertices: &by_vertices,
        source_vertices: &source_vertices,
        images: problem
            .sources
            .iter()
            .map(|k| (0..top).map(|n| vec![None; k.count(n)]).collect())
            .collect(),
        nodes: 0,
        budget,
        out: Vec::new(),
    };
    search.run(0)?;
    let out = search.out;
    Ok(out
        .into_iter()
        .map(|family| {
            family
                .into_iter()
                .enumerate()
                .map(|(slot, imgs)| {
                    let keep = problem.sources[slot].dim().map_or(0, |d| d + 1);
                    SimplicialMap::from_images(
                        problem.sources[slot].clone(),
                        problem.targets[slot].clone(),
                        imgs.into_iter().take(keep).collect(),
                    )
                })
                .collect()
        })
        .collect())
}

struct Search<'a> {
    problem: &'a NaturalMapProblem<'a>,
    vars: &'a [Var],
    naturals: &'a [Vec<Natural>],
    by_vertices: &'a [Vec<HashMap<Vec<usize>, Vec<Simplex>>>],
    source_vertices: &'a [Vec<usize>],
    images: Vec<Vec<Vec<Option<Simplex>>>>,
    nodes: u64,
    budget: u64,
    out: Vec<Vec<Vec<Vec<Simplex>>>>,
}

impl Search<'_> {
    /// Image of an arbitrary source simplex, when its base is assigned.
    fn image_of(&self, slot: usize, s: &Simplex) -> Option<Simplex> {
        let base = self.images[slot][s.base_dim][s.index].as_ref()?;
        Some(self.problem.targets[slot].act(base, &s.degeneracy))
    }

    fn run(&mut self, v: usize) -> Result<()> {
        if v == self.vars.len() {
            let family = self
                .images
                .iter()
                .map(|per| per.iter().map(|d| d.iter().map(|s| s.clone().unwrap()).collect()).collect())
                .collect();
            self.out.push(family);
            return Ok(());
        }
        let var = self.vars[v];
        let key: Vec<usize> = self.source_vertices[v]
            .iter()
            .map(|&u| self.images[var.slot][0][u].as_ref().map_or(usize::MAX, |s| s.index))
            .collect();
        let candidates: Vec<Simplex> = if var.dim == 0 {
            let z = &self.problem.targets[var.slot];
            (0..z.count(0)).map(|i| Simplex::nondegenerate(0, i)).collect()
        } else {
            self.by_vertices[var.slot][var.dim].get(&key).cloned().unwrap_or_default()
        };
        for cand in candidates {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::BudgetExceeded(self.budget));
            }
            self.images[var.slot][var.dim][var.index] = Some(cand.clone());
            if self.consistent(v, &cand) {
                self.run(v + 1)?;
            }
            self.images[var.slot][var.dim][var.index] = None;
        }
        Ok(())
    }

    fn consistent(&self, v: usize, cand: &Simplex) -> bool {
        let var = self.vars[v];
        let k = &self.problem.sources[var.slot];
        let z = &self.problem.targets[var.slot];
        if var.dim > 0 {
            let x = Simplex::nondegenerate(var.dim, var.index);
            for i in 0..=var.dim {
                let lhs = self.image_of(var.slot, &k.face(&x, i));
                if lhs.as_ref() != Some(&z.face(cand, i)) {
                    return false;
                }
            }
        }
        for c in &self.naturals[v] {
            let (_, j, _, zmap) = self.problem.edges[c.edge];
            let Some(fx) = self.images[c.x.slot][c.x.dim][c.x.index].as_ref() else {
                continue;
            };
            let lhs = self.image_of(j, &c.image_of_x);
            if lhs.as_ref() != Some(&zmap.apply(fx)) {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{ordinal, subset_poset, FinCategory};
    use crate::fincat::Functor;
    use crate::simpl::nerve;

    /// Brute force: every object map, every choice of morphism images.
    fn count_functors(c: &Arc<FinCategory>, d: &Arc<FinCategory>) -> usize {
        let (n, m) = (c.num_objects(), c.num_morphisms());
        let mut count = 0;
        let mut objs = vec![0; n];
        loop {
            let mut mors = vec![0; m];
            loop {
                let f = Functor::new(c.clone(), d.clone(), objs.clone(), mors.clone()).unwrap();
                if f.check().is_clean() {
                    count += 1;
                }
                if !odometer(&mut mors, d.num_morphisms()) {
                    break;
                }
            }
            if !odometer(&mut objs, d.num_objects()) {
                break;
            }
        }
        count
    }

    fn odometer(v: &mut [usize], base: usize) -> bool {
        for x in v.iter_mut() {
            *x += 1;
            if *x < base {
                return true;
            }
            *x = 0;
        }
        false
    }

    #[test]
    fn maps_from_point_are_vertices() {
        let z = nerve(&Arc::new(subset_poset(&["1", "2"], false))).unwrap().set;
        let pt = Arc::new(SimplicialSet::point());
        assert_eq!(enumerate_simplicial_maps(&pt, &z, 3, 1_000).unwrap().len(), 3);
    }

    #[test]
    fn maps_between_intervals() {
        let d1 = nerve(&Arc::new(ordinal(1))).unwrap().set;
        let maps = enumerate_simplicial_maps(&d1, &d1, 3, 1_000).unwrap();
        // monotone maps [1] → [1], counted by brute force
        let monotone = (0..2).flat_map(|a| (0..2).map(move |b| (a, b))).filter(|(a, b)| a <= b).count();
        assert_eq!(maps.len(), monotone);
        assert!(maps.iter().all(|m| m.check().is_clean()));
    }

    #[test]
    fn nerve_is_fully_faithful_on_fixture() {
        let c = Arc::new(subset_poset(&["1", "2"], false));
        let d = Arc::new(ordinal(1));
        let k = nerve(&c).unwrap().set;
        let z = nerve(&d).unwrap().set;
        let maps = enumerate_simplicial_maps(&k, &z, 3, 100_000).unwrap();
        assert_eq!(maps.len(), count_functors(&c, &d));
    }

    #[test]
    fn caps_and_budgets() {
        let k = nerve(&Arc::new(ordinal(2))).unwrap().set;
        assert!(matches!(
            enumerate_simplicial_maps(&k, &k, 1, 1_000),
            Err(Error::DimensionCap { dim: 2, cap: 1 })
        ));
        assert!(matches!(
            enumerate_simplicial_maps(&k, &k, 3, 2),
            Err(Error::BudgetExceeded(2))
        ));
        let empty = nerve(&Arc::new(FinCategory::empty())).unwrap().set;
        assert_eq!(enumerate_simplicial_maps(&empty, &k, 3, 10).unwrap().len(), 1);
    }
}

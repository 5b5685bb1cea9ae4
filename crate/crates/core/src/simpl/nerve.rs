use std::collections::HashMap;
use std::sync::Arc;

use super::{Simplex, SimplicialMap, SimplicialSet};
use crate::error::Result;
use crate::fincat::{FinCategory, Functor, MorId, ObjId};

/// The nerve of a loop-free category together with the chain behind every
/// nondegenerate simplex.
#[derive(Clone, Debug)]
pub struct Nerve {
    pub category: Arc<FinCategory>,
    pub set: Arc<SimplicialSet>,
    /// `chains[n][k]` for `n ≥ 1`: composable non-identity morphisms, first map first.
    chains: Vec<Vec<Vec<MorId>>>,
    index: Vec<HashMap<Vec<MorId>, usize>>,
}

impl Nerve {
    pub fn chain(&self, n: usize, k: usize) -> &[MorId] {
        &self.chains[n][k]
    }

    /// The simplex `(c_0 → c_1 → … → c_n)` for a chain that may contain
    /// identities; identities become degeneracies.
    pub fn simplex_of_chain(&self, start: ObjId, chain: &[MorId]) -> Simplex {
        let c = &self.category;
        let proper: Vec<MorId> = chain.iter().copied().filter(|&m| !c.is_identity(m)).collect();
        let mut degeneracy = Vec::with_capacity(chain.len() + 1);
        let mut count = 0;
        degeneracy.push(0);
        for &m in chain {
            if !c.is_identity(m) {
                count += 1;
            }
            degeneracy.push(count);
        }
        let index = if proper.is_empty() {
            start
        } else {
            self.index[proper.len()][&proper]
        };
        Simplex {
            base_dim: proper.len(),
            index,
            degeneracy,
        }
    }

    /// The first object of the `k`-th nondegenerate `n`-simplex.
    pub fn start(&self, n: usize, k: usize) -> ObjId {
        if n == 0 {
            k
        } else {
            self.category.src(self.chains[n][k][0])
        }
    }
}

/// `N(C)`; fails with a loop error if `C` has a cycle of non-identity maps.
pub fn nerve(c: &Arc<FinCategory>) -> Result<Nerve> {
    c.ensure_loop_free()?;
    let mut chains: Vec<Vec<Vec<MorId>>> = vec![Vec::new()];
    let mut labels: Vec<Vec<String>> = vec![c.object_ids().to_vec()];
    let first: Vec<Vec<MorId>> = c.morphisms().filter(|&m| !c.is_identity(m)).map(|m| vec![m]).collect();
    if !first.is_empty() {
        chains.push(first);
        loop {
            let last = chains.last().unwrap();
            let next: Vec<Vec<MorId>> = last
                .iter()
                .flat_map(|ch| {
                    let end = c.tgt(*ch.last().unwrap());
                    c.proper_out_of(end).map(move |g| {
                        let mut v = ch.clone();
                        v.push(g);
                        v
                    })
                })
                .collect();
            if next.is_empty() {
                break;
            }
            chains.push(next);
        }
    }
    let index: Vec<HashMap<Vec<MorId>, usize>> = chains
        .iter()
        .map(|per| per.iter().enumerate().map(|(k, ch)| (ch.clone(), k)).collect())
        .collect();
    for per in chains.iter().skip(1) {
        labels.push(
            per.iter()
                .map(|ch| {
                    let ids: Vec<&str> = ch.iter().map(|&m| c.morphism_id(m)).collect();
                    format!("[{}]", ids.join(";"))
                })
                .collect(),
        );
    }
    let mut faces: Vec<Vec<Vec<Simplex>>> = vec![vec![Vec::new(); c.num_objects()]];
    let partial = Nerve {
        category: c.clone(),
        set: Arc::new(SimplicialSet::default()),
        chains,
        index,
    };
    for n in 1..partial.chains.len() {
        let per: Vec<Vec<Simplex>> = partial.chains[n]
            .iter()
            .map(|ch| {
                if n == 1 {
                    let m = ch[0];
                    return vec![Simplex::nondegenerate(0, c.tgt(m)), Simplex::nondegenerate(0, c.src(m))];
                }
                (0..=n)
                    .map(|i| {
                        if i == 0 {
                            partial.simplex_of_chain(c.tgt(ch[0]), &ch[1..])
                        } else if i == n {
                            partial.simplex_of_chain(c.src(ch[0]), &ch[..n - 1])
                        } else {
                            let mut v = ch[..i - 1].to_vec();
                            v.push(c.compose(ch[i], ch[i - 1]));
                            v.extend_from_slice(&ch[i + 1..]);
                            partial.simplex_of_chain(c.src(ch[0]), &v)
                        }
                    })
                    .collect()
            })
            .collect();
        faces.push(per);
    }
    Ok(Nerve {
        set: Arc::new(SimplicialSet::from_raw(labels, faces)),
        ..partial
    })
}

/// `N(F)`: a chain maps to its image chain, with identities collapsed.
pub fn nerve_map(f: &Functor, source: &Nerve, target: &Nerve) -> SimplicialMap {
    let top = source.set.dim().map_or(0, |d| d + 1);
    let images = (0..top)
        .map(|n| {
            (0..source.set.count(n))
                .map(|k| {
                    if n == 0 {
                        Simplex::nondegenerate(0, f.obj(k))
                    } else {
                        let ch = source.chain(n, k);
                        let img: Vec<MorId> = ch.iter().map(|&m| f.mor(m)).collect();
                        target.simplex_of_chain(f.obj(source.start(n, k)), &img)
                    }
                })
                .collect()
        })
        .collect();
    SimplicialMap::from_images(source.set.clone(), target.set.clone(), images)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::fincat::{filtration, ordinal, subset_poset, MorphismRecord};

    #[test]
    fn nerves_of_small_categories() {
        let pt = nerve(&Arc::new(FinCategory::terminal())).unwrap();
        assert_eq!(pt.set.f_vector(), vec![1]);
        let d1 = nerve(&Arc::new(ordinal(1))).unwrap();
        assert_eq!(d1.set.f_vector(), vec![2, 1]);
        assert!(d1.set.validate().is_clean());
    }

    #[test]
    fn punctured_cube_f_vector() {
        let c = Arc::new(subset_poset(&["1", "2", "3"], false));
        // chains of strict inclusions among nonempty subsets, counted directly
        let masks: Vec<u32> = (1..8).collect();
        let lt = |a: u32, b: u32| a != b && a & !b == 0;
        let mut f1 = 0;
        let mut f2 = 0;
        for &a in &masks {
            for &b in &masks {
                if lt(a, b) {
                    f1 += 1;
                    f2 += masks.iter().filter(|&&c| lt(b, c)).count();
                }
            }
        }
        let n = nerve(&c).unwrap();
        assert_eq!(n.set.f_vector(), vec![7, f1, f2]);
        assert_eq!(n.set.f_vector(), vec![7, 12, 6]);
        assert!(n.set.validate().is_clean());
    }

    #[test]
    fn loopy_category_rejected() {
        let c = FinCategory::from_parts(
            vec!["x".into()],
            vec![
                MorphismRecord { id: "e".into(), src: 0, tgt: 0 },
                MorphismRecord { id: "t".into(), src: 0, tgt: 0 },
            ],
            vec![0],
            HashMap::from([((0, 0), 0), ((0, 1), 1), ((1, 0), 1), ((1, 1), 0)]),
        )
        .unwrap();
        assert!(matches!(nerve(&Arc::new(c)), Err(Error::LoopyCategory(_))));
    }

    #[test]
    fn nerve_maps() {
        let c = Arc::new(subset_poset(&["1", "2"], false));
        let nc = nerve(&c).unwrap();
        let id = nerve_map(&Functor::identity(c.clone()), &nc, &nc);
        assert_eq!(id, SimplicialMap::identity(nc.set.clone()));

        let pt = Arc::new(FinCategory::terminal());
        let npt = nerve(&pt).unwrap();
        let k = nerve_map(&Functor::to_terminal(c.clone(), pt.clone()), &nc, &npt);
        assert!(k.check().is_clean());
        assert_eq!(k, SimplicialMap::to_point(nc.set.clone(), npt.set.clone()));

        let (f0, incl) = filtration(&c, 0).unwrap();
        let nf0 = nerve(&f0).unwrap();
        let m = nerve_map(&incl, &nf0, &nc);
        assert!(m.check().is_clean());
        assert_eq!(m.image(0, 0), &Simplex::nondegenerate(0, c.object_index("{1,2}").unwrap()));
    }
}

//! The computable stand-in for weak equivalence: a bijection on path
//! components together with an acyclic algebraic mapping cone, which is the
//! same as an isomorphism on integral homology in every degree. This is a
//! necessary condition for a weak equivalence, not a sufficient one.

use std::collections::BTreeMap;

use serde::Serialize;

use super::homology::homology_of;
use super::{chain_complex, homology, ChainComplex, HomologyResult, Simplex, SimplicialMap, SimplicialSet, SparseMatrix};

/// Literal tag carried by every verdict derived from this module.
pub const PROXY_LABEL: &str = "homology proxy";

fn components(k: &SimplicialSet) -> (Vec<usize>, usize) {
    let n = k.count(0);
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    for e in 0..k.count(1) {
        let s = Simplex::nondegenerate(1, e);
        let (a, b) = (k.vertex(&s, 0), k.vertex(&s, 1));
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut label = vec![usize::MAX; n];
    let mut count = 0;
    let mut out = vec![0; n];
    for v in 0..n {
        let r = find(&mut parent, v);
        if label[r] == usize::MAX {
            label[r] = count;
            count += 1;
        }
        out[v] = label[r];
    }
    (out, count)
}

/// `π_0(f)` is a bijection.
pub fn pi0_bijection(f: &SimplicialMap) -> bool {
    let (src, ns) = components(f.source());
    let (tgt, nt) = components(f.target());
    if ns != nt {
        return false;
    }
    let mut image = vec![usize::MAX; ns];
    for v in 0..f.source().count(0) {
        let c = tgt[f.image(0, v).index];
        if image[src[v]] == usize::MAX {
            image[src[v]] = c;
        }
    }
    let mut hit = vec![false; nt];
    image.iter().all(|&c| c != usize::MAX && !std::mem::replace(&mut hit[c], true))
}

/// Matrix of the normalized chain map `f_# : C_n(K) → C_n(Z)`.
fn chain_map(f: &SimplicialMap, n: usize) -> SparseMatrix {
    let columns = (0..f.source().count(n))
        .map(|k| {
            let s = f.image(n, k);
            let mut col = BTreeMap::new();
            if s.is_nondegenerate() {
                col.insert(s.index, 1i64);
            }
            col
        })
        .collect();
    SparseMatrix::from_columns(f.target().count(n), columns)
}

/// Mapping cone `C_n = K_{n-1} ⊕ Z_n`, `∂(a, z) = (−∂a, f a + ∂z)`.
pub fn cone_complex(f: &SimplicialMap) -> ChainComplex {
    let ck = chain_complex(f.source());
    let cz = chain_complex(f.target());
    let rank = |cc: &ChainComplex, n: isize| -> usize {
        if n < 0 {
            0
        } else {
            cc.ranks.get(n as usize).copied().unwrap_or(0)
        }
    };
    let top = (ck.ranks.len() + 1).max(cz.ranks.len());
    let ranks: Vec<usize> = (0..top as isize).map(|n| rank(&ck, n - 1) + rank(&cz, n)).collect();
    let mut boundaries = vec![SparseMatrix::zero(0, ranks.first().copied().unwrap_or(0))];
    for n in 1..top {
        let kn1 = rank(&ck, n as isize - 1);
        let kn2 = rank(&ck, n as isize - 2);
        let mut columns: Vec<BTreeMap<usize, i64>> = Vec::with_capacity(ranks[n]);
        if kn1 > 0 {
            let fmat = chain_map(f, n - 1);
            for a in 0..kn1 {
                let mut col = BTreeMap::new();
                if n >= 2 {
                    for &(i, v) in &ck.boundaries[n - 1].columns[a] {
                        col.insert(i, -v);
                    }
                }
                for &(i, v) in &fmat.columns[a] {
                    *col.entry(kn2 + i).or_default() += v;
                }
                columns.push(col);
            }
        }
        for z in 0..rank(&cz, n as isize) {
            let mut col = BTreeMap::new();
            for &(i, v) in &cz.boundaries[n].columns[z] {
                col.insert(kn2 + i, v);
            }
            columns.push(col);
        }
        boundaries.push(SparseMatrix::from_columns(ranks[n - 1], columns));
    }
    ChainComplex { ranks, boundaries }
}

/// π_0 bijection and acyclic mapping cone.
pub fn is_homology_equivalence(f: &SimplicialMap) -> bool {
    pi0_bijection(f) && homology_of(&cone_complex(f)).is_acyclic()
}

/// Verdict of the homology proxy for one map, with its evidence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub method: &'static str,
    pub pi0_bijection: bool,
    pub cone_acyclic: bool,
    pub equivalence: bool,
}

impl EquivalenceReport {
    pub fn of(f: &SimplicialMap) -> Self {
        let pi0 = pi0_bijection(f);
        let cone = homology_of(&cone_complex(f)).is_acyclic();
        EquivalenceReport {
            method: PROXY_LABEL,
            pi0_bijection: pi0,
            cone_acyclic: cone,
            equivalence: pi0 && cone,
        }
    }
}

/// Chain-level data of `f` together with the homology of source, target and cone.
///
/// The matrices are those of `f_#` on normalized chains; the isomorphism
/// verdict is read off the cone rather than from matrices on homology bases.
#[derive(Clone, Debug, Serialize)]
pub struct InducedHomologyMap {
    pub method: &'static str,
    pub chain_maps: Vec<SparseMatrix>,
    pub source: HomologyResult,
    pub target: HomologyResult,
    pub cone: HomologyResult,
    pub pi0_bijection: bool,
    pub isomorphism: bool,
}

pub fn induced_homology_map(f: &SimplicialMap) -> InducedHomologyMap {
    let top = f.source().dim().map_or(0, |d| d + 1);
    let cone = homology_of(&cone_complex(f));
    let pi0 = pi0_bijection(f);
    InducedHomologyMap {
        method: PROXY_LABEL,
        chain_maps: (0..top).map(|n| chain_map(f, n)).collect(),
        source: homology(f.source()),
        target: homology(f.target()),
        isomorphism: pi0 && cone.is_acyclic(),
        cone,
        pi0_bijection: pi0,
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::fincat::{full_subcategory, ordinal, over_category, subset_poset, FinCategory, Functor};
    use crate::simpl::{nerve, nerve_map};

    #[test]
    fn boundary_of_triangle_is_a_circle() {
        let c = Arc::new(subset_poset(&["1", "2", "3"], false));
        let proper: Vec<usize> = c.objects().filter(|&o| c.object_id(o) != "{1,2,3}").collect();
        let (sub, _) = full_subcategory(&c, &proper);
        let h = homology(&nerve(&sub).unwrap().set);
        assert_eq!(h.betti, vec![1, 1]);
        assert!(!h.has_torsion());
        assert!(h.euler_consistent());
    }

    #[test]
    fn cones_are_points() {
        let c = Arc::new(subset_poset(&["1", "2", "3"], false));
        for o in c.objects() {
            let over = over_category(&c, o).unwrap();
            assert!(homology(&nerve(&over.category).unwrap().set).is_point());
        }
    }

    #[test]
    fn proxy_verdicts() {
        let sq = Arc::new(subset_poset(&["1", "2"], false));
        let n = nerve(&sq).unwrap();
        assert!(is_homology_equivalence(&SimplicialMap::identity(n.set.clone())));

        let pt = Arc::new(FinCategory::terminal());
        let npt = nerve(&pt).unwrap();
        let to_pt = nerve_map(&Functor::to_terminal(sq.clone(), pt.clone()), &n, &npt);
        assert!(is_homology_equivalence(&to_pt));

        let foot = Functor::new(pt.clone(), sq.clone(), vec![0], vec![sq.identity(0)]).unwrap();
        let f = nerve_map(&foot, &npt, &n);
        let report = induced_homology_map(&f);
        assert!(report.isomorphism);
        assert_eq!(report.method, PROXY_LABEL);

        // two points into an interval: π_0 fails
        let two = Arc::new(FinCategory::discrete(&["a", "b"]));
        let one = Arc::new(ordinal(1));
        let g = Functor::new(two.clone(), one.clone(), vec![0, 1], vec![one.identity(0), one.identity(1)]).unwrap();
        let r = EquivalenceReport::of(&nerve_map(&g, &nerve(&two).unwrap(), &nerve(&one).unwrap()));
        assert!(!r.pi0_bijection && !r.equivalence);
    }

    #[test]
    fn cone_squares_to_zero() {
        let sq = Arc::new(subset_poset(&["1", "2"], false));
        let n = nerve(&sq).unwrap();
        let cc = cone_complex(&SimplicialMap::identity(n.set.clone()));
        assert!(cc.squares_to_zero());
    }
}

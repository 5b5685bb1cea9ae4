//! Finite simplicial sets stored through their nondegenerate simplices.
//!
//! A general simplex is `x ∘ σ`: a nondegenerate simplex `x` of dimension `e`
//! and a monotone surjection `σ : [d] → [e]` (the Eilenberg–Zilber normal
//! form). Faces of nondegenerate simplices are stored in that form; every
//! other simplicial operator is derived from them.

mod enumerate;
mod equivalence;
mod homology;
mod map;
mod nerve;
mod product;

pub use enumerate::{enumerate_natural_maps, enumerate_simplicial_maps, NaturalMapProblem};
pub use equivalence::{
    cone_complex, induced_homology_map, is_homology_equivalence, pi0_bijection, EquivalenceReport,
    InducedHomologyMap, PROXY_LABEL,
};
pub use homology::{chain_complex, homology, smith_normal_form, ChainComplex, HomologyResult, SmithForm, SparseMatrix};
pub use map::SimplicialMap;
pub use nerve::{nerve, nerve_map, Nerve};
pub use product::{nerve_product_comparison, simplicial_product, SimplicialProduct};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::validation::{ValidationReport, Violation};

/// `x ∘ σ` with `x` the `index`-th nondegenerate simplex of dimension
/// `base_dim` and `σ = degeneracy` a monotone surjection onto `[base_dim]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Simplex {
    pub base_dim: usize,
    pub index: usize,
    pub degeneracy: Vec<usize>,
}

impl Simplex {
    pub fn nondegenerate(dim: usize, index: usize) -> Self {
        Simplex {
            base_dim: dim,
            index,
            degeneracy: (0..=dim).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.degeneracy.len() - 1
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.degeneracy.len() == self.base_dim + 1
    }
}

/// Coface map `δ_i : [n-1] → [n]` as a table.
pub fn coface(n: usize, i: usize) -> Vec<usize> {
    (0..n).map(|t| if t < i { t } else { t + 1 }).collect()
}

/// Codegeneracy `σ_j : [n+1] → [n]` as a table.
pub fn codegeneracy(n: usize, j: usize) -> Vec<usize> {
    (0..=n + 1).map(|t| if t <= j { t } else { t - 1 }).collect()
}

fn is_monotone_surjection(s: &[usize], onto: usize) -> bool {
    !s.is_empty()
        && s[0] == 0
        && s[s.len() - 1] == onto
        && s.windows(2).all(|w| w[1] == w[0] || w[1] == w[0] + 1)
}

/// A finite simplicial set.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SimplicialSet {
    labels: Vec<Vec<String>>,
    /// `faces[n][k][i]` is `d_i` of the `k`-th nondegenerate `n`-simplex.
    faces: Vec<Vec<Vec<Simplex>>>,
}

impl SimplicialSet {
    /// Checks shapes and normal forms; the simplicial identities are checked by
    /// [`SimplicialSet::validate`].
    pub fn new(labels: Vec<Vec<String>>, faces: Vec<Vec<Vec<Simplex>>>) -> Result<Self> {
        if labels.len() != faces.len() {
            return Err(Error::Malformed("one face table per dimension".into()));
        }
        for (n, per_dim) in faces.iter().enumerate() {
            if per_dim.len() != labels[n].len() {
                return Err(Error::Malformed(format!("face table of dimension {n} has the wrong length")));
            }
            for (k, fs) in per_dim.iter().enumerate() {
                let expected = if n == 0 { 0 } else { n + 1 };
                if fs.len() != expected {
                    return Err(Error::Malformed(format!("simplex `{}` has {} faces", labels[n][k], fs.len())));
                }
                for f in fs {
                    let ok = f.dim() + 1 == n
                        && f.base_dim < n
                        && f.index < labels[f.base_dim].len()
                        && is_monotone_surjection(&f.degeneracy, f.base_dim);
                    if !ok {
                        return Err(Error::Malformed(format!("bad face of simplex `{}`", labels[n][k])));
                    }
                }
            }
        }
        Ok(SimplicialSet { labels, faces })
    }

    pub(crate) fn from_raw(labels: Vec<Vec<String>>, faces: Vec<Vec<Vec<Simplex>>>) -> Self {
        SimplicialSet { labels, faces }
    }

    pub fn point() -> Self {
        SimplicialSet {
            labels: vec![vec!["*".into()]],
            faces: vec![vec![vec![]]],
        }
    }

    /// Top dimension with a nondegenerate simplex; `None` for the empty set.
    pub fn dim(&self) -> Option<usize> {
        (0..self.labels.len()).rev().find(|&n| !self.labels[n].is_empty())
    }

    pub fn is_empty(&self) -> bool {
        self.dim().is_none()
    }

    /// Number of nondegenerate `n`-simplices.
    pub fn count(&self, n: usize) -> usize {
        self.labels.get(n).map_or(0, Vec::len)
    }

    pub fn f_vector(&self) -> Vec<usize> {
        match self.dim() {
            Some(d) => (0..=d).map(|n| self.count(n)).collect(),
            None => Vec::new(),
        }
    }

    pub fn label(&self, n: usize, k: usize) -> &str {
        &self.labels[n][k]
    }

    pub fn labels(&self, n: usize) -> &[String] {
        self.labels.get(n).map_or(&[], Vec::as_slice)
    }

    pub fn stored_face(&self, n: usize, k: usize, i: usize) -> &Simplex {
        &self.faces[n][k][i]
    }

    /// `x ∘ θ` for the nondegenerate `x = (dim, index)` and any monotone
    /// `θ : [m] → [dim]`, in normal form.
    pub fn apply(&self, dim: usize, index: usize, theta: Vec<usize>) -> Simplex {
        let (mut d, mut idx, mut th) = (dim, index, theta);
        loop {
            let mut present = vec![false; d + 1];
            for &t in &th {
                present[t] = true;
            }
            let Some(j) = (0..=d).rev().find(|&j| !present[j]) else {
                return Simplex {
                    base_dim: d,
                    index: idx,
                    degeneracy: th,
                };
            };
            // θ = δ_j ∘ θ', and x ∘ δ_j is the stored face y ∘ r
            let face = &self.faces[d][idx][j];
            th = th
                .iter()
                .map(|&t| face.degeneracy[if t > j { t - 1 } else { t }])
                .collect();
            d = face.base_dim;
            idx = face.index;
        }
    }

    /// `s ∘ θ` for an arbitrary simplex `s`.
    pub fn act(&self, s: &Simplex, theta: &[usize]) -> Simplex {
        self.apply(s.base_dim, s.index, theta.iter().map(|&t| s.degeneracy[t]).collect())
    }

    pub fn face(&self, s: &Simplex, i: usize) -> Simplex {
        self.act(s, &coface(s.dim(), i))
    }

    pub fn degenerate(&self, s: &Simplex, j: usize) -> Simplex {
        self.act(s, &codegeneracy(s.dim(), j))
    }

    /// Index of the `v`-th vertex of `s`.
    pub fn vertex(&self, s: &Simplex, v: usize) -> usize {
        self.act(s, &[v]).index
    }

    pub fn vertices(&self, s: &Simplex) -> Vec<usize> {
        (0..=s.dim()).map(|v| self.vertex(s, v)).collect()
    }

    /// All `n`-simplices, degenerate ones included, in a fixed order.
    pub fn all_simplices(&self, n: usize) -> Vec<Simplex> {
        let mut out = Vec::new();
        for m in 0..=n.min(self.labels.len().saturating_sub(1)) {
            let surjections = monotone_surjections(n, m);
            for k in 0..self.count(m) {
                for s in &surjections {
                    out.push(Simplex {
                        base_dim: m,
                        index: k,
                        degeneracy: s.clone(),
                    });
                }
            }
        }
        out
    }

    /// Checks `d_i d_j = d_{j-1} d_i` for `i < j` on every nondegenerate simplex.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new("simplicial set");
        for n in 2..self.labels.len() {
            for k in 0..self.count(n) {
                let x = Simplex::nondegenerate(n, k);
                for j in 1..=n {
                    let dj = self.face(&x, j);
                    for i in 0..j {
                        let di = self.face(&x, i);
                        if self.face(&dj, i) != self.face(&di, j - 1) {
                            report.push(Violation::SimplicialIdentity {
                                simplex: self.labels[n][k].clone(),
                                i,
                                j,
                            });
                        }
                    }
                }
            }
        }
        report
    }
}

/// All monotone surjections `[n] → [m]`.
pub fn monotone_surjections(n: usize, m: usize) -> Vec<Vec<usize>> {
    if m > n {
        return Vec::new();
    }
    // choose which m of the n steps t → t+1 increase
    let mut out = Vec::new();
    let mut cur = vec![0usize];
    fn rec(n: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let last = *cur.last().unwrap();
        if cur.len() == n + 1 {
            if last == m {
                out.push(cur.clone());
            }
            return;
        }
        let remaining = n + 1 - cur.len();
        if last + remaining > m {
            cur.push(last);
            rec(n, m, cur, out);
            cur.pop();
        }
        if last < m {
            cur.push(last + 1);
            rec(n, m, cur, out);
            cur.pop();
        }
    }
    rec(n, m, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Δ^1 written out by hand.
    fn interval() -> SimplicialSet {
        SimplicialSet::new(
            vec![vec!["0".into(), "1".into()], vec!["01".into()]],
            vec![
                vec![vec![], vec![]],
                vec![vec![Simplex::nondegenerate(0, 1), Simplex::nondegenerate(0, 0)]],
            ],
        )
        .unwrap()
    }

    #[test]
    fn surjection_counts_are_binomial() {
        // surjections [n] → [m] correspond to m-subsets of the n steps
        assert_eq!(monotone_surjections(3, 1).len(), 3);
        assert_eq!(monotone_surjections(4, 2).len(), 6);
        assert_eq!(monotone_surjections(2, 2), vec![vec![0, 1, 2]]);
        assert!(monotone_surjections(1, 2).is_empty());
    }

    #[test]
    fn faces_of_degenerate_simplices() {
        let k = interval();
        let e = Simplex::nondegenerate(1, 0);
        let s0 = k.degenerate(&e, 0);
        assert_eq!(s0.degeneracy, vec![0, 0, 1]);
        // d_0 s_0 = d_1 s_0 = id, d_2 s_0 = s_0 d_1
        assert_eq!(k.face(&s0, 0), e);
        assert_eq!(k.face(&s0, 1), e);
        let v0 = Simplex::nondegenerate(0, 0);
        assert_eq!(k.face(&s0, 2), k.degenerate(&v0, 0));
        assert_eq!(k.vertices(&s0), vec![0, 0, 1]);
    }

    #[test]
    fn interval_is_valid() {
        let k = interval();
        assert!(k.validate().is_clean());
        assert_eq!(k.f_vector(), vec![2, 1]);
        // 2-simplices of Δ^1: s_0 e, s_1 e, and the two doubly degenerate vertices
        assert_eq!(k.all_simplices(2).len(), 4);
    }

    #[test]
    fn malformed_face_rejected() {
        let bad = SimplicialSet::new(
            vec![vec!["0".into()], vec!["e".into()]],
            vec![vec![vec![]], vec![vec![Simplex::nondegenerate(0, 3), Simplex::nondegenerate(0, 0)]]],
        );
        assert!(bad.is_err());
    }
}

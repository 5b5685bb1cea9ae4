use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::{Simplex, SimplicialSet};

/// Integer matrix stored by columns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    /// `columns[j]` lists `(row, value)` with nonzero values, sorted by row.
    pub columns: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    pub fn from_columns(rows: usize, columns: Vec<BTreeMap<usize, i64>>) -> Self {
        SparseMatrix {
            rows,
            cols: columns.len(),
            columns: columns
                .into_iter()
                .map(|c| c.into_iter().filter(|&(_, v)| v != 0).collect())
                .collect(),
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut m = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            for &(i, v) in col {
                m[i][j] = BigInt::from(v);
            }
        }
        m
    }

    /// `self · other`.
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        let columns = other
            .columns
            .iter()
            .map(|col| {
                let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
                for &(k, v) in col {
                    for &(i, w) in &self.columns[k] {
                        *acc.entry(i).or_default() += v * w;
                    }
                }
                acc
            })
            .collect();
        SparseMatrix::from_columns(self.rows, columns)
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    /// Rank and the invariant factors different from one.
    pub fn rank_and_torsion(&self) -> (usize, Vec<BigInt>) {
        eliminate(self)
    }
}

/// Normalized chains: one basis element per nondegenerate simplex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainComplex {
    pub ranks: Vec<usize>,
    /// `boundaries[n] : C_n → C_{n-1}`; `boundaries[0]` has no rows.
    pub boundaries: Vec<SparseMatrix>,
}

impl ChainComplex {
    /// `∂ ∘ ∂ = 0` in every degree.
    pub fn squares_to_zero(&self) -> bool {
        (2..self.boundaries.len()).all(|n| self.boundaries[n - 1].mul(&self.boundaries[n]).is_zero())
    }
}

pub fn chain_complex(k: &SimplicialSet) -> ChainComplex {
    let top = k.dim().map_or(0, |d| d + 1);
    let ranks: Vec<usize> = (0..top).map(|n| k.count(n)).collect();
    let mut boundaries = vec![SparseMatrix::zero(0, ranks.first().copied().unwrap_or(0))];
    for n in 1..top {
        let columns = (0..ranks[n])
            .map(|x| {
                let mut col: BTreeMap<usize, i64> = BTreeMap::new();
                for i in 0..=n {
                    let f = k.face(&Simplex::nondegenerate(n, x), i);
                    if f.is_nondegenerate() {
                        *col.entry(f.index).or_default() += if i % 2 == 0 { 1 } else { -1 };
                    }
                }
                col
            })
            .collect();
        boundaries.push(SparseMatrix::from_columns(ranks[n - 1], columns));
    }
    ChainComplex { ranks, boundaries }
}

fn serialize_torsion<S: Serializer>(t: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    #[serde(untagged)]
    enum Coef {
        Small(u64),
        Big(String),
    }
    let v: Vec<Vec<Coef>> = t
        .iter()
        .map(|row| {
            row.iter()
                .map(|c| c.to_u64().map_or_else(|| Coef::Big(c.to_string()), Coef::Small))
                .collect()
        })
        .collect();
    v.serialize(s)
}

/// Integral homology, degree by degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyResult {
    pub betti: Vec<usize>,
    #[serde(serialize_with = "serialize_torsion")]
    pub torsion: Vec<Vec<BigInt>>,
    pub f_vector: Vec<usize>,
    pub euler_characteristic: i64,
}

impl HomologyResult {
    pub fn euler_from_betti(&self) -> i64 {
        alternating(&self.betti)
    }

    pub fn euler_consistent(&self) -> bool {
        self.euler_from_betti() == self.euler_characteristic
    }

    pub fn has_torsion(&self) -> bool {
        self.torsion.iter().any(|t| !t.is_empty())
    }

    /// Homology of a point.
    pub fn is_point(&self) -> bool {
        self.betti.first() == Some(&1) && self.betti.iter().skip(1).all(|&b| b == 0) && !self.has_torsion()
    }

    pub fn is_acyclic(&self) -> bool {
        self.betti.iter().all(|&b| b == 0) && !self.has_torsion()
    }
}

fn alternating(v: &[usize]) -> i64 {
    v.iter()
        .enumerate()
        .map(|(n, &c)| if n % 2 == 0 { c as i64 } else { -(c as i64) })
        .sum()
}

pub fn homology(k: &SimplicialSet) -> HomologyResult {
    let mut h = homology_of(&chain_complex(k));
    h.f_vector = k.f_vector();
    h
}

/// Homology of an arbitrary complex; `f_vector` holds the chain ranks.
pub fn homology_of(cc: &ChainComplex) -> HomologyResult {
    let top = cc.ranks.len();
    let mut ranks = vec![0usize; top + 1];
    let mut factors = vec![Vec::new(); top + 1];
    for n in 1..top {
        let (r, t) = cc.boundaries[n].rank_and_torsion();
        ranks[n] = r;
        factors[n] = t;
    }
    let betti: Vec<usize> = (0..top).map(|n| cc.ranks[n] - ranks[n] - ranks[n + 1]).collect();
    let torsion: Vec<Vec<BigInt>> = (0..top).map(|n| factors[n + 1].clone()).collect();
    HomologyResult {
        betti,
        torsion,
        f_vector: cc.ranks.clone(),
        euler_characteristic: alternating(&cc.ranks),
    }
}

/// `D = U·M·V` with `U`, `V` unimodular and `D` diagonal, `d_1 | d_2 | …`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: Vec<Vec<BigInt>>,
    pub d: Vec<Vec<BigInt>>,
    pub v: Vec<Vec<BigInt>>,
}

impl SmithForm {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.len().min(self.d.first().map_or(0, Vec::len)))
            .map(|i| self.d[i][i].clone())
            .take_while(|x| !x.is_zero())
            .collect()
    }
}

pub fn smith_normal_form(m: &[Vec<BigInt>]) -> SmithForm {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut s = Snf {
        a: m.to_vec(),
        u: Some(identity(rows)),
        v: Some(identity(cols)),
    };
    s.run();
    SmithForm {
        u: s.u.unwrap(),
        d: s.a,
        v: s.v.unwrap(),
    }
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

struct Snf {
    a: Vec<Vec<BigInt>>,
    u: Option<Vec<Vec<BigInt>>>,
    v: Option<Vec<Vec<BigInt>>>,
}

impl Snf {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        if let Some(u) = &mut self.u {
            u.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in &mut self.a {
            row.swap(i, j);
        }
        if let Some(v) = &mut self.v {
            for row in v {
                row.swap(i, j);
            }
        }
    }

    /// row_i ← row_i − q·row_t
    fn row_sub(&mut self, i: usize, t: usize, q: &BigInt) {
        fn apply(m: &mut [Vec<BigInt>], i: usize, t: usize, q: &BigInt) {
            let src = m[t].clone();
            for (x, y) in m[i].iter_mut().zip(&src) {
                *x -= q * y;
            }
        }
        apply(&mut self.a, i, t, q);
        if let Some(u) = &mut self.u {
            apply(u, i, t, q);
        }
    }

    /// col_j ← col_j − q·col_t
    fn col_sub(&mut self, j: usize, t: usize, q: &BigInt) {
        fn apply(m: &mut [Vec<BigInt>], j: usize, t: usize, q: &BigInt) {
            for row in m {
                let y = row[t].clone();
                row[j] -= q * y;
            }
        }
        apply(&mut self.a, j, t, q);
        if let Some(v) = &mut self.v {
            apply(v, j, t, q);
        }
    }

    fn negate_row(&mut self, t: usize) {
        for x in &mut self.a[t] {
            *x = -&*x;
        }
        if let Some(u) = &mut self.u {
            for x in &mut u[t] {
                *x = -&*x;
            }
        }
    }

    fn run(&mut self) {
        let rows = self.a.len();
        let cols = self.a.first().map_or(0, Vec::len);
        let mut t = 0;
        while t < rows.min(cols) {
            // smallest nonzero entry of the trailing block; the first one wins ties
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = &self.a[i][j];
                    if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < self.a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { return };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            let p = self.a[t][t].clone();
            let mut clean = true;
            for i in t + 1..rows {
                if !self.a[i][t].is_zero() {
                    let q = &self.a[i][t] / &p;
                    self.row_sub(i, t, &q);
                    clean &= self.a[i][t].is_zero();
                }
            }
            for j in t + 1..cols {
                if !self.a[t][j].is_zero() {
                    let q = &self.a[t][j] / &p;
                    self.col_sub(j, t, &q);
                    clean &= self.a[t][j].is_zero();
                }
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&self.a[i][j] % &p).is_zero()));
            if let Some(i) = bad {
                // row_t += row_i brings a non-multiple into the pivot row
                self.row_sub(t, i, &BigInt::from(-1));
                continue;
            }
            if p.is_negative() {
                self.negate_row(t);
            }
            t += 1;
        }
    }
}

/// Rank and non-unit invariant factors: unit pivots are eliminated sparsely,
/// the remainder goes through a dense Smith normal form.
fn eliminate(m: &SparseMatrix) -> (usize, Vec<BigInt>) {
    let mut rows: Vec<BTreeMap<usize, i128>> = vec![BTreeMap::new(); m.rows];
    let mut cols: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m.cols];
    for (j, col) in m.columns.iter().enumerate() {
        for &(i, v) in col {
            rows[i].insert(j, v as i128);
            cols[j].insert(i);
        }
    }
    let mut rank = 0;
    let mut alive = vec![true; m.rows];
    let mut progress = true;
    while progress {
        progress = false;
        for r in 0..m.rows {
            if !alive[r] {
                continue;
            }
            let pivot = rows[r]
                .iter()
                .filter(|(_, v)| v.abs() == 1)
                .min_by_key(|(j, _)| (cols[**j].len(), **j))
                .map(|(&j, &v)| (j, v));
            let Some((j, v)) = pivot else { continue };
            let pivot_row = rows[r].clone();
            let others: Vec<usize> = cols[j].iter().copied().filter(|&r2| r2 != r).collect();
            for r2 in others {
                let c = rows[r2][&j] * v;
                for (&jj, &w) in &pivot_row {
                    let entry = rows[r2].entry(jj).or_insert(0);
                    let Some(x) = c.checked_mul(w).and_then(|cw| entry.checked_sub(cw)) else {
                        return dense_fallback(m);
                    };
                    *entry = x;
                    if x == 0 {
                        rows[r2].remove(&jj);
                        cols[jj].remove(&r2);
                    } else {
                        cols[jj].insert(r2);
                    }
                }
            }
            for &jj in pivot_row.keys() {
                cols[jj].remove(&r);
            }
            rows[r].clear();
            alive[r] = false;
            rank += 1;
            progress = true;
        }
    }
    let live_rows: Vec<usize> = (0..m.rows).filter(|&r| !rows[r].is_empty()).collect();
    let live_cols: Vec<usize> = (0..m.cols).filter(|&c| !cols[c].is_empty()).collect();
    if live_rows.is_empty() {
        return (rank, Vec::new());
    }
    let col_pos: BTreeMap<usize, usize> = live_cols.iter().enumerate().map(|(p, &c)| (c, p)).collect();
    let mut dense = vec![vec![BigInt::zero(); live_cols.len()]; live_rows.len()];
    for (p, &r) in live_rows.iter().enumerate() {
        for (&c, &v) in &rows[r] {
            dense[p][col_pos[&c]] = BigInt::from(v);
        }
    }
    let (r2, t) = dense_invariants(dense);
    (rank + r2, t)
}

fn dense_fallback(m: &SparseMatrix) -> (usize, Vec<BigInt>) {
    dense_invariants(m.to_dense())
}

fn dense_invariants(a: Vec<Vec<BigInt>>) -> (usize, Vec<BigInt>) {
    let mut s = Snf { a, u: None, v: None };
    s.run();
    let n = s.a.len().min(s.a.first().map_or(0, Vec::len));
    let diag: Vec<BigInt> = (0..n).map(|i| s.a[i][i].clone()).filter(|x| !x.is_zero()).collect();
    let rank = diag.len();
    let torsion = diag.into_iter().filter(|x| !x.is_one()).collect();
    (rank, torsion)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn matmul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
        let inner = b.len();
        let cols = b.first().map_or(0, Vec::len);
        a.iter()
            .map(|row| {
                (0..cols)
                    .map(|j| (0..inner).map(|k| &row[k] * &b[k][j]).sum())
                    .collect()
            })
            .collect()
    }

    #[test]
    fn two_by_two_example() {
        let m = big(&[&[2, 4], &[6, 8]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.diagonal(), vec![BigInt::from(2), BigInt::from(4)]);
        assert_eq!(matmul(&matmul(&s.u, &m), &s.v), s.d);
        // |det| = 8 is preserved
        let det = &s.d[0][0] * &s.d[1][1];
        assert_eq!(det, BigInt::from(8));
    }

    #[test]
    fn divisibility_chain() {
        let m = big(&[&[2, 0], &[0, 3]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
        assert_eq!(matmul(&matmul(&s.u, &m), &s.v), s.d);
    }

    #[test]
    fn sparse_rank_matches_dense() {
        let cols: Vec<BTreeMap<usize, i64>> = vec![
            BTreeMap::from([(0, 2), (1, 1)]),
            BTreeMap::from([(0, 4), (1, 2)]),
            BTreeMap::from([(2, 3)]),
        ];
        let m = SparseMatrix::from_columns(3, cols);
        assert_eq!(m.rank_and_torsion(), (2, vec![BigInt::from(3)]));
    }
}

//! Oracles shared by the integration tests. Nothing here calls into the
//! library's homology or nerve code; the point is to disagree with it if it
//! is wrong.
#![allow(dead_code)]

use std::path::PathBuf;

use holimcat::fincat::FinCategory;
use holimcat::io::{read_document, Document};
use num_rational::BigRational;
use num_traits::{One, Zero};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn fixture(name: &str) -> Document {
    read_document(&fixture_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Functors `[n] → C`, counted by walking the hom-sets.
pub fn count_strings(c: &FinCategory, n: usize) -> usize {
    let mut ending_at = vec![1usize; c.num_objects()];
    for _ in 0..n {
        let mut next = vec![0usize; c.num_objects()];
        for m in c.morphisms() {
            next[c.tgt(m)] += ending_at[c.src(m)];
        }
        ending_at = next;
    }
    ending_at.iter().sum()
}

/// Strict chains `x_0 < … < x_k` of a finite poset.
pub fn strict_chains(size: usize, lt: &dyn Fn(usize, usize) -> bool) -> Vec<Vec<Vec<usize>>> {
    let mut by_dim: Vec<Vec<Vec<usize>>> = vec![(0..size).map(|x| vec![x]).collect()];
    loop {
        let next: Vec<Vec<usize>> = by_dim
            .last()
            .unwrap()
            .iter()
            .flat_map(|ch| {
                let top = *ch.last().unwrap();
                (0..size).filter(move |&y| lt(top, y)).map(move |y| {
                    let mut c = ch.clone();
                    c.push(y);
                    c
                })
            })
            .collect();
        if next.is_empty() {
            return by_dim;
        }
        by_dim.push(next);
    }
}

fn rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let pivot = rows[r][c].clone();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone() / pivot.clone();
                for k in c..cols {
                    let d = rows[r][k].clone() * f.clone();
                    rows[i][k] -= d;
                }
            }
        }
        r += 1;
    }
    r
}

/// Rational Betti numbers of the order complex of a poset, trailing zeros cut.
pub fn poset_betti(size: usize, lt: &dyn Fn(usize, usize) -> bool) -> Vec<usize> {
    let chains = strict_chains(size, lt);
    let ranks: Vec<usize> = (1..chains.len())
        .map(|k| {
            let rows: Vec<Vec<BigRational>> = chains[k - 1]
                .iter()
                .map(|face| {
                    chains[k]
                        .iter()
                        .map(|s| {
                            let pos = (0..s.len()).find(|&j| {
                                let mut t = s.clone();
                                t.remove(j);
                                &t == face
                            });
                            match pos {
                                Some(j) if j % 2 == 0 => BigRational::one(),
                                Some(_) => -BigRational::one(),
                                None => BigRational::zero(),
                            }
                        })
                        .collect()
                })
                .collect();
            rank(rows)
        })
        .collect();
    let mut betti: Vec<usize> = (0..chains.len())
        .map(|k| {
            let out = if k == 0 { 0 } else { ranks[k - 1] };
            let inc = ranks.get(k).copied().unwrap_or(0);
            chains[k].len() - out - inc
        })
        .collect();
    while betti.len() > 1 && betti.last() == Some(&0) {
        betti.pop();
    }
    betti
}

/// Betti numbers with trailing zeros cut, for comparing with the oracle.
pub fn trimmed(betti: &[usize]) -> Vec<usize> {
    let mut b = betti.to_vec();
    while b.len() > 1 && b.last() == Some(&0) {
        b.pop();
    }
    b
}

/// Bitmask subset oracle for the union functor on `∏ P({i}_+)` minus tops.
///
/// Factor values: 0 = ∅, 1 = {i}, 2 = {+}. Returns the subsets `S ⊊ n_+`
/// whose candidate object (components `{i}`, `∅` or `{+}`) fails to be
/// initial in `S/U`, as masks with bit `i-1` for index `i` and bit `n` for `+`.
pub fn union_initial_failures(n: usize) -> Vec<u64> {
    let full = (1u64 << (n + 1)) - 1;
    let plus = 1u64 << n;
    let union = |v: &[u8]| -> u64 {
        v.iter().enumerate().fold(0, |acc, (i, &x)| match x {
            1 => acc | 1 << i,
            2 => acc | plus,
            _ => acc,
        })
    };
    let leq = |a: u8, b: u8| a == 0 || a == b;
    let tuples: Vec<Vec<u8>> = (0..3usize.pow(n as u32))
        .map(|mut k| {
            (0..n)
                .map(|_| {
                    let d = (k % 3) as u8;
                    k /= 3;
                    d
                })
                .collect()
        })
        .collect();
    (0..full)
        .filter(|&s| {
            let cand: Vec<u8> = (0..n)
                .map(|i| {
                    if s >> i & 1 == 1 {
                        1
                    } else if s & plus == 0 {
                        0
                    } else {
                        2
                    }
                })
                .collect();
            let in_slice = |v: &[u8]| s & !union(v) == 0;
            !(in_slice(&cand)
                && tuples
                    .iter()
                    .filter(|v| in_slice(v))
                    .all(|v| cand.iter().zip(v.iter()).all(|(&a, &b)| leq(a, b))))
        })
        .collect()
}

/// `λ/S` as a poset: tuples `V` with `V_i ⊆ {i,+}` nonempty and `λ(V) ⊆ S`,
/// where `λ(V) = n_+ \ ⋃ ({i}_+ \ V_i)`. Returns its rational Betti numbers.
pub fn lambda_slice_betti(n: usize, s: u64) -> Vec<usize> {
    let full = (1u64 << (n + 1)) - 1;
    let plus = 1u64 << n;
    // Factor masks: bit 0 = i, bit 1 = +.
    let lift = |i: usize, m: u64| ((m & 1) << i) | (((m >> 1) & 1) * plus);
    let lambda = |v: &[u64]| {
        let removed = v.iter().enumerate().fold(0, |acc, (i, &m)| acc | lift(i, 3 & !m));
        full & !removed
    };
    let objects: Vec<Vec<u64>> = (0..3usize.pow(n as u32))
        .map(|mut k| {
            (0..n)
                .map(|_| {
                    let d = (k % 3) as u64 + 1;
                    k /= 3;
                    d
                })
                .collect::<Vec<u64>>()
        })
        .filter(|v| lambda(v) & !s == 0)
        .collect();
    let lt = |a: usize, b: usize| {
        a != b && objects[a].iter().zip(&objects[b]).all(|(&x, &y)| x & !y == 0)
    };
    poset_betti(objects.len(), &lt)
}

/// Names a mask of `n_+` the way the library does: `{1,+}`.
pub fn cube_subset_name(n: usize, mask: u64) -> String {
    let mut parts: Vec<String> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| (i + 1).to_string()).collect();
    if mask >> n & 1 == 1 {
        parts.push("+".into());
    }
    format!("{{{}}}", parts.join(","))
}

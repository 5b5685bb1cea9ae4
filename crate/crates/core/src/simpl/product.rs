use std::collections::HashMap;
use std::sync::Arc;

use super::{Nerve, Simplex, SimplicialMap, SimplicialSet};
use crate::fincat::Product;

/// `K × L` with each nondegenerate simplex remembered as a pair of simplices.
#[derive(Clone, Debug)]
pub struct SimplicialProduct {
    pub set: Arc<SimplicialSet>,
    pub left: Arc<SimplicialSet>,
    pub right: Arc<SimplicialSet>,
    pairs: Vec<Vec<(Simplex, Simplex)>>,
    index: HashMap<(Simplex, Simplex), usize>,
}

impl SimplicialProduct {
    pub fn pair(&self, n: usize, k: usize) -> &(Simplex, Simplex) {
        &self.pairs[n][k]
    }

    /// The product simplex `(a, b)` in normal form: common degeneracies of
    /// `a` and `b` are factored out.
    pub fn normalize_pair(&self, a: &Simplex, b: &Simplex) -> Simplex {
        debug_assert_eq!(a.dim(), b.dim());
        let m = a.dim();
        let mut rho = vec![0usize; m + 1];
        let mut sa = vec![a.degeneracy[0]];
        let mut sb = vec![b.degeneracy[0]];
        for t in 0..m {
            let collapse = a.degeneracy[t] == a.degeneracy[t + 1] && b.degeneracy[t] == b.degeneracy[t + 1];
            rho[t + 1] = rho[t] + usize::from(!collapse);
            if !collapse {
                sa.push(a.degeneracy[t + 1]);
                sb.push(b.degeneracy[t + 1]);
            }
        }
        let key = (
            Simplex {
                base_dim: a.base_dim,
                index: a.index,
                degeneracy: sa,
            },
            Simplex {
                base_dim: b.base_dim,
                index: b.index,
                degeneracy: sb,
            },
        );
        let n = rho[m];
        Simplex {
            base_dim: n,
            index: self.index[&key],
            degeneracy: rho,
        }
    }

    /// `⟨f, g⟩ : A → K × L`.
    pub fn pair_map(&self, f: &SimplicialMap, g: &SimplicialMap) -> SimplicialMap {
        let images = f
            .images()
            .iter()
            .zip(g.images())
            .map(|(fs, gs)| fs.iter().zip(gs).map(|(a, b)| self.normalize_pair(a, b)).collect())
            .collect();
        SimplicialMap::from_images(f.source().clone(), self.set.clone(), images)
    }

    pub fn left_projection(&self) -> SimplicialMap {
        self.projection(true)
    }

    pub fn right_projection(&self) -> SimplicialMap {
        self.projection(false)
    }

    fn projection(&self, left: bool) -> SimplicialMap {
        let target = if left { &self.left } else { &self.right };
        let images = self
            .pairs
            .iter()
            .map(|per| per.iter().map(|(a, b)| if left { a.clone() } else { b.clone() }).collect())
            .collect();
        SimplicialMap::from_images(self.set.clone(), target.clone(), images)
    }

    /// `f × g : self → target`.
    pub fn product_map(&self, target: &SimplicialProduct, f: &SimplicialMap, g: &SimplicialMap) -> SimplicialMap {
        target.pair_map(&f.after(&self.left_projection()), &g.after(&self.right_projection()))
    }
}

/// Jointly injective pairs of surjections `[n] → [p]`, `[n] → [q]`, as lattice
/// paths from `(0,0)` to `(p,q)` with unit, horizontal or vertical steps.
fn shuffle_paths(p: usize, q: usize, n: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut out = Vec::new();
    fn rec(p: usize, q: usize, n: usize, a: &mut Vec<usize>, b: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, Vec<usize>)>) {
        let (x, y) = (*a.last().unwrap(), *b.last().unwrap());
        if a.len() == n + 1 {
            if x == p && y == q {
                out.push((a.clone(), b.clone()));
            }
            return;
        }
        for (dx, dy) in [(1, 0), (0, 1), (1, 1)] {
            if x + dx <= p && y + dy <= q {
                a.push(x + dx);
                b.push(y + dy);
                rec(p, q, n, a, b, out);
                a.pop();
                b.pop();
            }
        }
    }
    rec(p, q, n, &mut vec![0], &mut vec![0], &mut out);
    out
}

pub fn simplicial_product(k: &Arc<SimplicialSet>, l: &Arc<SimplicialSet>) -> SimplicialProduct {
    let (Some(dk), Some(dl)) = (k.dim(), l.dim()) else {
        return SimplicialProduct {
            set: Arc::new(SimplicialSet::default()),
            left: k.clone(),
            right: l.clone(),
            pairs: Vec::new(),
            index: HashMap::new(),
        };
    };
    let mut pairs: Vec<Vec<(Simplex, Simplex)>> = Vec::new();
    let mut labels: Vec<Vec<String>> = Vec::new();
    for n in 0..=dk + dl {
        let mut per = Vec::new();
        let mut lab = Vec::new();
        for p in 0..=dk.min(n) {
            for q in 0..=dl.min(n) {
                if p + q < n {
                    continue;
                }
                let paths = shuffle_paths(p, q, n);
                for x in 0..k.count(p) {
                    for y in 0..l.count(q) {
                        for (sa, sb) in &paths {
                            lab.push(format!(
                                "({}{},{}{})",
                                k.label(p, x),
                                degeneracy_tag(sa, p),
                                l.label(q, y),
                                degeneracy_tag(sb, q)
                            ));
                            per.push((
                                Simplex {
                                    base_dim: p,
                                    index: x,
                                    degeneracy: sa.clone(),
                                },
                                Simplex {
                                    base_dim: q,
                                    index: y,
                                    degeneracy: sb.clone(),
                                },
                            ));
                        }
                    }
                }
            }
        }
        pairs.push(per);
        labels.push(lab);
    }
    let index: HashMap<(Simplex, Simplex), usize> = pairs
        .iter()
        .flat_map(|per| per.iter().enumerate().map(|(i, pr)| (pr.clone(), i)))
        .collect();
    let mut product = SimplicialProduct {
        set: Arc::new(SimplicialSet::default()),
        left: k.clone(),
        right: l.clone(),
        pairs,
        index,
    };
    let faces: Vec<Vec<Vec<Simplex>>> = product
        .pairs
        .iter()
        .enumerate()
        .map(|(n, per)| {
            per.iter()
                .map(|(a, b)| {
                    if n == 0 {
                        return Vec::new();
                    }
                    (0..=n)
                        .map(|i| product.normalize_pair(&k.face(a, i), &l.face(b, i)))
                        .collect()
                })
                .collect()
        })
        .collect();
    product.set = Arc::new(SimplicialSet::from_raw(labels, faces));
    product
}

fn degeneracy_tag(s: &[usize], onto: usize) -> String {
    if s.len() == onto + 1 {
        String::new()
    } else {
        let parts: Vec<String> = s.iter().map(|v| v.to_string()).collect();
        format!("^{}", parts.join(""))
    }
}

/// The comparison `N(C × D) → NC × ND` induced by the two projections.
pub fn nerve_product_comparison(
    product: &Product,
    product_nerve: &Nerve,
    left: &Nerve,
    right: &Nerve,
    target: &SimplicialProduct,
) -> SimplicialMap {
    let p0 = super::nerve_map(&product.projection(0), product_nerve, left);
    let p1 = super::nerve_map(&product.projection(1), product_nerve, right);
    target.pair_map(&p0, &p1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{ordinal, product_category, subset_poset, FinCategory};
    use crate::simpl::nerve;

    #[test]
    fn square_of_intervals() {
        let d1 = nerve(&Arc::new(ordinal(1))).unwrap().set;
        let p = simplicial_product(&d1, &d1);
        assert_eq!(p.set.f_vector(), vec![4, 5, 2]);
        assert!(p.set.validate().is_clean());
        assert!(p.left_projection().check().is_clean());
    }

    #[test]
    fn product_with_point() {
        let c = nerve(&Arc::new(subset_poset(&["1", "2"], false))).unwrap().set;
        let pt = Arc::new(SimplicialSet::point());
        let p = simplicial_product(&c, &pt);
        assert_eq!(p.set.f_vector(), c.f_vector());
        assert!(p.left_projection().is_isomorphism());
    }

    #[test]
    fn nerve_of_product_is_product_of_nerves() {
        let cases = [
            (ordinal(1), ordinal(1)),
            (ordinal(2), ordinal(1)),
            (subset_poset(&["1", "2"], false), ordinal(1)),
            (FinCategory::terminal(), ordinal(2)),
        ];
        for (c, d) in cases {
            let (c, d) = (Arc::new(c), Arc::new(d));
            let prod = product_category(c.clone(), d.clone());
            let np = nerve(&prod.category).unwrap();
            let (nc, nd) = (nerve(&c).unwrap(), nerve(&d).unwrap());
            let target = simplicial_product(&nc.set, &nd.set);
            let cmp = nerve_product_comparison(&prod, &np, &nc, &nd, &target);
            assert!(cmp.is_isomorphism());
            assert!(cmp.inverse().unwrap().check().is_clean());
        }
    }
}

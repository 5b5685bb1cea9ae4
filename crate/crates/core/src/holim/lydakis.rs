use std::sync::Arc;

use serde::Serialize;

use super::csp::Budget;
use super::hom::{hom_category, DiagramHom};
use crate::error::{Error, Result};
use crate::fincat::{ordinal, Diagram, FinCategory, Functor, MorId, ObjId, Product};
use crate::simpl::{
    enumerate_natural_maps, nerve, nerve_map, nerve_product_comparison, simplicial_product, NaturalMapProblem, Nerve,
    SimplicialMap, SimplicialProduct,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LydakisDim {
    pub dim: usize,
    /// `n`-simplices of `N Hom(Y, X)`, degenerate ones included.
    pub chains: usize,
    /// Natural families `NY_i × Δ^n → NX_i`.
    pub maps: usize,
    pub injective: bool,
    pub bijective: bool,
    pub faces_compatible: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LydakisReport {
    pub dims: Vec<LydakisDim>,
    pub pass: bool,
}

/// All functors `[n] → C` as lists of `n` composable morphisms.
pub(crate) fn chains(c: &FinCategory, n: usize) -> Vec<(ObjId, Vec<MorId>)> {
    let mut out: Vec<(ObjId, Vec<MorId>)> = c.objects().map(|o| (o, Vec::new())).collect();
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|(start, path)| {
                let end = path.last().map_or(start, |&m| c.tgt(m));
                c.out_of(end).iter().map(move |&m| {
                    let mut p = path.clone();
                    p.push(m);
                    (start, p)
                })
            })
            .collect();
    }
    out
}

fn ordinal_map(from: &Arc<FinCategory>, to: &Arc<FinCategory>, objects: Vec<ObjId>) -> Functor {
    let morphisms = from
        .morphisms()
        .map(|m| to.hom(objects[from.src(m)], objects[from.tgt(m)])[0])
        .collect();
    Functor::new(from.clone(), to.clone(), objects, morphisms).expect("monotone map of ordinals")
}

/// Per base object: the nerves and the product `NY_i × Δ^n` with its
/// comparison to `N(Y_i × [n])`.
pub(crate) struct Slot {
    pub(crate) product: Product,
    pub(crate) inverse: SimplicialMap,
    pub(crate) product_nerve: Nerve,
    pub(crate) target_nerve: Nerve,
    pub(crate) simplicial: SimplicialProduct,
}

pub(crate) struct Level {
    pub(crate) delta: Arc<FinCategory>,
    pub(crate) slots: Vec<Slot>,
}

pub(crate) fn level(y: &Diagram, x: &Diagram, n: usize) -> Result<Level> {
    let delta = Arc::new(ordinal(n));
    let nd = nerve(&delta)?;
    let slots = y
        .base()
        .objects()
        .map(|i| {
            let ny = nerve(y.vertex(i))?;
            let simplicial = simplicial_product(&ny.set, &nd.set);
            let product = Product::new(vec![y.vertex(i).clone(), delta.clone()]);
            let product_nerve = nerve(&product.category)?;
            let inverse = nerve_product_comparison(&product, &product_nerve, &ny, &nd, &simplicial)
                .inverse()
                .ok_or_else(|| Error::precondition("nerve of a product is not the product of nerves"))?;
            Ok(Slot {
                product,
                inverse,
                product_nerve,
                target_nerve: nerve(x.vertex(i))?,
                simplicial,
            })
        })
        .collect::<Result<_>>()?;
    Ok(Level { delta, slots })
}

/// The family `NY_i × Δ^n → NX_i` of the chain `Φ_0 → … → Φ_n`, from
/// `(y, k) ↦ Φ_k(y)` and `(f, k ≤ l) ↦ Φ_l(f) ∘ λ_{kl}(y)`.
pub(crate) fn chain_maps(hom: &DiagramHom, lv: &Level, start: ObjId, path: &[MorId]) -> Vec<SimplicialMap> {
    let h = &hom.category;
    let mut objs = vec![start];
    objs.extend(path.iter().map(|&m| h.tgt(m)));
    let between = |k: usize, l: usize| -> MorId {
        if k == l {
            h.identity(objs[k])
        } else {
            h.compose_path(&path[k..l]).expect("nonempty path")
        }
    };
    let x = hom.target();
    lv.slots
        .iter()
        .enumerate()
        .map(|(i, slot)| {
            let xi = x.vertex(i);
            let pc = &slot.product.category;
            let objects = pc
                .objects()
                .map(|o| {
                    let t = slot.product.object_tuple(o);
                    hom.family(objs[t[1]])[i].objects[t[0]]
                })
                .collect();
            let morphisms = pc
                .morphisms()
                .map(|m| {
                    let t = slot.product.morphism_tuple(m);
                    let (k, l) = (lv.delta.src(t[1]), lv.delta.tgt(t[1]));
                    let y0 = hom.source().vertex(i).src(t[0]);
                    let lam = hom.modification(between(k, l)).components[i][y0];
                    xi.compose(hom.family(objs[l])[i].morphisms[t[0]], lam)
                })
                .collect();
            let g = Functor::from_maps(pc.clone(), xi.clone(), objects, morphisms);
            nerve_map(&g, &slot.product_nerve, &slot.target_nerve).after(&slot.inverse)
        })
        .collect()
}

/// Compares `N Hom(Y, X)` with the simplicial mapping space `Hom(NY, NX)`
/// in dimensions `0..=up_to_dim`: counts on both sides, an explicit
/// injective comparison and its compatibility with faces.
pub fn lydakis_check(y: &Diagram, x: &Diagram, up_to_dim: usize, budget: &Budget) -> Result<LydakisReport> {
    lydakis_check_capped(y, x, up_to_dim, usize::MAX, budget)
}

/// As [`lydakis_check`], refusing source simplicial sets of dimension above `max_dim`.
pub fn lydakis_check_capped(
    y: &Diagram,
    x: &Diagram,
    up_to_dim: usize,
    max_dim: usize,
    budget: &Budget,
) -> Result<LydakisReport> {
    let hom = hom_category(y, x, budget)?;
    let base = y.base();
    let levels: Vec<Level> = (0..=up_to_dim).map(|n| level(y, x, n)).collect::<Result<_>>()?;
    let mut dims = Vec::new();
    for (n, lv) in levels.iter().enumerate() {
        let id_delta = Functor::identity(lv.delta.clone());
        let arrows: Vec<MorId> = base.morphisms().filter(|&a| !base.is_identity(a)).collect();
        let edge_maps: Vec<(SimplicialMap, SimplicialMap)> = arrows
            .iter()
            .map(|&a| {
                let (s, t) = (base.src(a), base.tgt(a));
                let nd = nerve(&lv.delta)?;
                let ny = nerve_map(y.transition(a), &nerve(y.vertex(s))?, &nerve(y.vertex(t))?);
                let left = lv.slots[s]
                    .simplicial
                    .product_map(&lv.slots[t].simplicial, &ny, &nerve_map(&id_delta, &nd, &nd));
                let right = nerve_map(x.transition(a), &lv.slots[s].target_nerve, &lv.slots[t].target_nerve);
                Ok((left, right))
            })
            .collect::<Result<_>>()?;
        let problem = NaturalMapProblem {
            sources: lv.slots.iter().map(|s| s.simplicial.set.clone()).collect(),
            targets: lv.slots.iter().map(|s| s.target_nerve.set.clone()).collect(),
            edges: arrows
                .iter()
                .zip(&edge_maps)
                .map(|(&a, (l, r))| (base.src(a), base.tgt(a), l, r))
                .collect(),
        };
        let cap = problem.sources.iter().filter_map(|s| s.dim()).max().unwrap_or(0);
        let families = enumerate_natural_maps(&problem, cap.min(max_dim), budget.limit())?;
        let all_chains = chains(&hom.category, n);
        let mut hit = vec![false; families.len()];
        let mut injective = true;
        let mut found = 0;
        let mut images: Vec<Vec<SimplicialMap>> = Vec::with_capacity(all_chains.len());
        for (start, path) in &all_chains {
            let fam = chain_maps(&hom, lv, *start, path);
            let at = families
                .iter()
                .position(|cand| cand.iter().zip(&fam).all(|(a, b)| a.images() == b.images()));
            if let Some(k) = at {
                found += 1;
                injective &= !std::mem::replace(&mut hit[k], true);
            } else {
                injective = false;
            }
            images.push(fam);
        }
        let faces_compatible = n == 0 || faces_check(&hom, &levels[n - 1], lv, &all_chains, &images)?;
        dims.push(LydakisDim {
            dim: n,
            chains: all_chains.len(),
            maps: families.len(),
            injective,
            bijective: injective && found == families.len() && hit.iter().all(|&b| b),
            faces_compatible,
        });
    }
    let pass = dims.iter().all(|d| d.bijective && d.faces_compatible && d.chains == d.maps);
    Ok(LydakisReport { dims, pass })
}

/// `d_j` of a chain against precomposition with `id × δ^j`.
fn faces_check(
    hom: &DiagramHom,
    lower: &Level,
    upper: &Level,
    all_chains: &[(ObjId, Vec<MorId>)],
    images: &[Vec<SimplicialMap>],
) -> Result<bool> {
    let h = &hom.category;
    let n = upper.delta.num_objects() - 1;
    let (nl, nu) = (nerve(&lower.delta)?, nerve(&upper.delta)?);
    for j in 0..=n {
        let skip: Vec<ObjId> = (0..n).map(|k| if k < j { k } else { k + 1 }).collect();
        let coface = nerve_map(&ordinal_map(&lower.delta, &upper.delta, skip), &nl, &nu);
        let restrict: Vec<SimplicialMap> = lower
            .slots
            .iter()
            .zip(&upper.slots)
            .map(|(lo, up)| {
                let id = SimplicialMap::identity(lo.simplicial.left.clone());
                lo.simplicial.product_map(&up.simplicial, &id, &coface)
            })
            .collect();
        for ((start, path), fam) in all_chains.iter().zip(images) {
            let (fstart, fpath) = if j == 0 {
                (h.tgt(path[0]), path[1..].to_vec())
            } else if j == n {
                (*start, path[..n - 1].to_vec())
            } else {
                let mut p = path[..j - 1].to_vec();
                p.push(h.compose(path[j], path[j - 1]));
                p.extend_from_slice(&path[j + 1..]);
                (*start, p)
            };
            let face = chain_maps(hom, lower, fstart, &fpath);
            let ok = fam
                .iter()
                .zip(&restrict)
                .zip(&face)
                .all(|((f, r), d)| f.after(r).images() == d.images());
            if !ok {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::poset_category;

    fn budget() -> Budget {
        Budget::new(10_000_000)
    }

    #[test]
    fn point_diagrams() {
        let base = Arc::new(ordinal(1));
        let pt = Diagram::constant(base, Arc::new(FinCategory::terminal()));
        let r = lydakis_check(&pt, &pt, 2, &budget()).unwrap();
        assert!(r.pass);
        assert!(r.dims.iter().all(|d| d.chains == 1));
    }

    #[test]
    fn chains_of_an_interval() {
        let c = ordinal(1);
        // functors [n] → [1] are monotone maps: n + 2 of them
        for n in 0..4 {
            assert_eq!(chains(&c, n).len(), n + 2);
        }
    }

    #[test]
    fn constant_interval_over_interval() {
        let base = Arc::new(ordinal(1));
        let x = Diagram::constant(base, Arc::new(ordinal(1)));
        let r = lydakis_check(&x, &x, 2, &budget()).unwrap();
        assert!(r.pass, "{r:?}");
        // Hom is the poset of three monotone maps [1] → [1]
        let counts: Vec<usize> = r.dims.iter().map(|d| d.chains).collect();
        assert_eq!(counts, vec![3, 6, 10]);
    }

    #[test]
    fn slices_into_endpoint_cospan() {
        let base = Arc::new(poset_category(&["a", "c", "b"], &[("a", "c"), ("b", "c")]).unwrap());
        let y = crate::holim::overcat_diagram(&base).diagram;
        let i1 = Arc::new(ordinal(1));
        let pt = Arc::new(FinCategory::terminal());
        let t = |o| Functor::constant(pt.clone(), i1.clone(), o);
        let x = Diagram::new(
            base.clone(),
            vec![pt.clone(), i1.clone(), pt.clone()],
            base.morphisms()
                .map(|m| match (base.object_id(base.src(m)), base.object_id(base.tgt(m))) {
                    ("a", "c") => t(0),
                    ("b", "c") => t(1),
                    ("c", _) => Functor::identity(i1.clone()),
                    _ => Functor::identity(pt.clone()),
                })
                .collect(),
        )
        .unwrap();
        let r = lydakis_check(&y, &x, 2, &budget()).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.dims.iter().all(|d| d.chains == 1));
    }

    #[test]
    fn cospan_of_posets() {
        let base = Arc::new(poset_category(&["a", "c", "b"], &[("a", "c"), ("b", "c")]).unwrap());
        let x = Diagram::constant(base, Arc::new(ordinal(1)));
        let r = lydakis_check(&x, &x, 2, &budget()).unwrap();
        assert!(r.pass, "{r:?}");
    }
}

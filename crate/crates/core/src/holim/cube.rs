//! Cubes of categories: total fibers, the functor `λ` and the hypotheses of
//! the iterated-pullback form of the homotopy-limit criterion.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::csp::Budget;
use super::matching::{comma_data, matching_functor, quillen_b_check, reedy_qf_check, Matching, QuillenBReport, ReedyReport};
use crate::error::{Error, Result};
use crate::fincat::{
    comma_over, comma_under, full_subcategory, is_initial, subset_id, subset_poset, Comma, Diagram, FinCategory,
    Functor, ObjId, Product,
};
use crate::simpl::{homology, nerve, HomologyResult, PROXY_LABEL};

/// Stamp carried by reports whose Reedy hypothesis failed.
pub const UNVERIFIED: &str = "hypotheses unverified";

/// `1, …, n, +`.
pub fn cube_elements(n: usize) -> Vec<String> {
    (1..=n).map(|i| i.to_string()).chain(std::iter::once("+".to_string())).collect()
}

fn empty_object(base: &FinCategory) -> Result<ObjId> {
    base.object_index("{}")
        .ok_or_else(|| Error::precondition("cube has no empty vertex"))
}

/// `m_∅ : X_∅ → Hom(P_0(−), X_{∅<})`.
pub fn cube_matching(x: &Diagram, budget: &Budget) -> Result<Matching> {
    matching_functor(x, empty_object(x.base())?, budget)
}

/// The total fiber model `m_∅/Φ`.
pub fn cube_total_fiber(m: &Matching, phi: ObjId) -> Result<Comma> {
    comma_over(&m.functor, phi)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberCheck {
    pub phi: String,
    pub objects: usize,
    pub morphisms: usize,
    pub betti: Vec<usize>,
    pub torsion: bool,
    pub contractible: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CubeReport {
    pub method: &'static str,
    pub reedy: ReedyReport,
    /// `None` when the Reedy check passed.
    pub warning: Option<&'static str>,
    pub fibers: Vec<FiberCheck>,
    pub fibers_contractible: bool,
    pub cartesian: bool,
}

/// Every `m_∅/Φ` against point homology, after the Reedy check on `X`.
pub fn cube_cartesian_check(x: &Diagram, budget: &Budget) -> Result<CubeReport> {
    let reedy = reedy_qf_check(x, budget)?;
    let m = cube_matching(x, budget)?;
    let h = m.functor.target();
    let fibers: Vec<FiberCheck> = comma_data(&m.functor)?
        .into_iter()
        .enumerate()
        .map(|(phi, d)| FiberCheck {
            phi: h.object_id(phi).to_string(),
            objects: d.comma.category.num_objects(),
            morphisms: d.comma.category.num_morphisms(),
            torsion: d.homology.has_torsion(),
            contractible: d.homology.is_point(),
            betti: d.homology.betti,
        })
        .collect();
    let fibers_contractible = fibers.iter().all(|f| f.contractible);
    Ok(CubeReport {
        method: PROXY_LABEL,
        warning: (!reedy.pass).then_some(UNVERIFIED),
        cartesian: reedy.pass && fibers_contractible,
        reedy,
        fibers,
        fibers_contractible,
    })
}

/// `λ : ∏_i P_0({i}_+) → P_0(n_+)`, `λ(V) = n_+ \ ⋃_i ({i}_+ \ V_i)`.
#[derive(Clone, Debug)]
pub struct Lambda {
    pub n: usize,
    pub source: Product,
    pub functor: Functor,
}

/// Mask in `n_+` of a subset of `{i}_+` given by its factor mask (bit 0 is `i`, bit 1 is `+`).
fn lift_mask(n: usize, i: usize, factor_mask: u64) -> u64 {
    (factor_mask & 1) << i | (factor_mask >> 1 & 1) << n
}

fn factor_masks(include_empty: bool) -> Vec<u64> {
    (0..4u64).filter(|&m| include_empty || m != 0).collect()
}

fn thin_functor(source: &Arc<FinCategory>, target: &Arc<FinCategory>, objects: Vec<ObjId>) -> Result<Functor> {
    let morphisms = source
        .morphisms()
        .map(|m| {
            target
                .hom(objects[source.src(m)], objects[source.tgt(m)])
                .first()
                .copied()
                .ok_or_else(|| Error::precondition("map of posets is not monotone"))
        })
        .collect::<Result<_>>()?;
    Functor::new(source.clone(), target.clone(), objects, morphisms)
}

pub fn lambda_functor(n: usize) -> Result<Lambda> {
    if n == 0 {
        return Err(Error::precondition("λ needs n ≥ 1"));
    }
    let elements = cube_elements(n);
    let target = Arc::new(subset_poset(&elements, false));
    let factors: Vec<Arc<FinCategory>> = (1..=n)
        .map(|i| Arc::new(subset_poset(&[i.to_string(), "+".to_string()], false)))
        .collect();
    let source = Product::new(factors);
    let full = (1u64 << (n + 1)) - 1;
    let fm = factor_masks(false);
    let objects: Vec<ObjId> = source
        .category
        .objects()
        .map(|o| {
            let removed = source
                .object_tuple(o)
                .iter()
                .enumerate()
                .fold(0, |acc, (i, &v)| acc | lift_mask(n, i, 3 & !fm[v]));
            target.object_index(&subset_id(&elements, full & !removed)).expect("nonempty")
        })
        .collect();
    let functor = thin_functor(&source.category, &target, objects)?;
    Ok(Lambda { n, source, functor })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SliceCheck {
    pub object: String,
    pub objects: usize,
    pub betti: Vec<usize>,
    pub contractible: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InitialCheck {
    /// The proper subset `S` of `n_+`.
    pub subset: String,
    /// The components of `S̲`.
    pub initial: Vec<String>,
    /// `S ⊆ U(S̲)`, so `S̲` is an object of `S/U`.
    pub well_defined: bool,
    pub is_initial: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CofinalityReport {
    pub method: &'static str,
    pub slices: Vec<SliceCheck>,
    pub initial_objects: Vec<InitialCheck>,
    pub pass: bool,
}

/// `F/S` for every object `S` of the target, against point homology.
pub fn slice_contractibility(f: &Functor) -> Result<Vec<SliceCheck>> {
    let t = f.target();
    t.objects()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|s| {
            let c = comma_over(f, s)?;
            let h: HomologyResult = homology(&nerve(&c.category)?.set);
            Ok(SliceCheck {
                object: t.object_id(s).to_string(),
                objects: c.category.num_objects(),
                contractible: h.is_point(),
                betti: h.betti,
            })
        })
        .collect()
}

/// For the union functor `U` on proper subsets, the object `S̲` with
/// components `{i}`, `∅` or `{+}` is initial in `S/U` for every proper `S`.
pub fn union_initial_objects(n: usize) -> Result<Vec<InitialCheck>> {
    let elements = cube_elements(n);
    let full = (1u64 << (n + 1)) - 1;
    let proper = |c: Arc<FinCategory>, top: &str| -> Arc<FinCategory> {
        let keep: Vec<ObjId> = c.objects().filter(|&o| c.object_id(o) != top).collect();
        full_subcategory(&c, &keep).0
    };
    let target = proper(Arc::new(subset_poset(&elements, true)), &subset_id(&elements, full));
    let factor_names: Vec<[String; 2]> = (1..=n).map(|i| [i.to_string(), "+".to_string()]).collect();
    let factors: Vec<Arc<FinCategory>> = factor_names
        .iter()
        .map(|names| proper(Arc::new(subset_poset(names, true)), &subset_id(names, 3)))
        .collect();
    let source = Product::new(factors.clone());
    let factor_mask = |i: usize, v: ObjId| -> u64 {
        let id = factors[i].object_id(v);
        (0..3u64).find(|&m| subset_id(&factor_names[i], m) == id).expect("proper subset")
    };
    let objects: Vec<ObjId> = source
        .category
        .objects()
        .map(|o| {
            let union = source
                .object_tuple(o)
                .iter()
                .enumerate()
                .fold(0, |acc, (i, &v)| acc | lift_mask(n, i, factor_mask(i, v)));
            target.object_index(&subset_id(&elements, union)).expect("proper union")
        })
        .collect();
    let u = thin_functor(&source.category, &target, objects)?;
    (0..full)
        .map(|s| {
            let comps: Vec<u64> = (0..n)
                .map(|i| {
                    if s >> i & 1 == 1 {
                        1
                    } else if s >> n & 1 == 0 {
                        0
                    } else {
                        2
                    }
                })
                .collect();
            let tuple: Vec<ObjId> = comps
                .iter()
                .enumerate()
                .map(|(i, &m)| factors[i].object_index(&subset_id(&factor_names[i], m)).expect("proper"))
                .collect();
            let under_obj = source.object(&tuple);
            let sid = target.object_index(&subset_id(&elements, s)).expect("proper");
            let comma = comma_under(&u, sid)?;
            let at = comma.objects.iter().position(|&(a, _)| a == under_obj);
            Ok(InitialCheck {
                subset: subset_id(&elements, s),
                initial: comps.iter().enumerate().map(|(i, &m)| subset_id(&factor_names[i], m)).collect(),
                well_defined: at.is_some(),
                is_initial: at.is_some_and(|o| is_initial(&comma.category, o)),
            })
        })
        .collect()
}

/// Left cofinality of `λ` checked twice: every `λ/S` has point homology, and
/// the explicit initial objects of the dual slices are initial.
pub fn cofinality_check(lambda: &Lambda) -> Result<CofinalityReport> {
    let slices = slice_contractibility(&lambda.functor)?;
    let initial_objects = union_initial_objects(lambda.n)?;
    let pass = slices.iter().all(|s| s.contractible) && initial_objects.iter().all(|c| c.is_initial);
    Ok(CofinalityReport {
        method: PROXY_LABEL,
        slices,
        initial_objects,
        pass,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BnCondition {
    pub k: usize,
    pub subset: String,
    pub report: QuillenBReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BnReport {
    pub method: &'static str,
    pub n: usize,
    pub expected: usize,
    pub count: usize,
    pub conditions: Vec<BnCondition>,
    pub pass: bool,
}

/// Number of hypotheses for a punctured `(n+1)`-cube: `Σ_k (2^{n−k} − 1)`.
pub fn bn_condition_count(n: usize) -> usize {
    (1usize << (n + 1)) - n - 2
}

/// `c_K / (−)` for every `0 ≤ k < n` and nonempty `K ⊆ {k+1, …, n}`; `c_K` is
/// the matching functor at `K` of `X` restricted to `P_0(K ∪ k_+)`.
pub fn theorem_bn_conditions(x: &Diagram, n: usize, budget: &Budget) -> Result<BnReport> {
    let elements = cube_elements(n);
    let base = x.base();
    let full = (1u64 << (n + 1)) - 1;
    let index = |mask: u64| base.object_index(&subset_id(&elements, mask));
    if base.num_objects() != full as usize || (1..=full).any(|m| index(m).is_none()) {
        return Err(Error::precondition(format!("base is not the punctured cube on {}", subset_id(&elements, full))));
    }
    let plus = 1u64 << n;
    let mut pairs = Vec::new();
    for k in 0..n {
        let lower = (1u64 << k) - 1;
        let upper = ((1u64 << n) - 1) & !lower;
        let mut kk = upper;
        while kk != 0 {
            pairs.push((k, kk));
            kk = (kk - 1) & upper;
        }
    }
    pairs.sort();
    let conditions = pairs
        .into_iter()
        .map(|(k, kk)| {
            let allowed = kk | ((1u64 << k) - 1) | plus;
            let objs: Vec<ObjId> = (1..=full)
                .filter(|&m| m & !allowed == 0)
                .map(|m| index(m).expect("checked above"))
                .collect();
            let (_, incl) = full_subcategory(base, &objs);
            let restricted = x.pullback(&incl)?;
            let at = objs.iter().position(|&o| o == index(kk).expect("checked")).expect("K is in range");
            let c = matching_functor(&restricted, at, budget)?;
            Ok(BnCondition {
                k,
                subset: subset_id(&elements, kk),
                report: quillen_b_check(&c.functor)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let pass = conditions.iter().all(|c| c.report.pass);
    Ok(BnReport {
        method: PROXY_LABEL,
        n,
        expected: bn_condition_count(n),
        count: conditions.len(),
        conditions,
        pass,
    })
}

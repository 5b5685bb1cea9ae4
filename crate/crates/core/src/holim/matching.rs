use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::csp::Budget;
use super::hom::{constant_family_functor, hom_category, overcat_diagram, DiagramHom};
use crate::error::Result;
use crate::fincat::{
    build_union_under, comma_over, comma_over_induced, degree_function, Comma, Diagram, FinCategory, Functor, MorId, ObjId,
};
use crate::simpl::{homology, nerve, nerve_map, EquivalenceReport, HomologyResult, Nerve, PROXY_LABEL};

/// `m_i : X_i → Hom((i<I)/(−), X_{i<})` together with the pieces it is built from.
#[derive(Clone, Debug)]
pub struct Matching {
    pub object: ObjId,
    /// `i < I`.
    pub under: Arc<FinCategory>,
    /// `(i, α)` per object of `i < I`.
    pub under_objects: Vec<(ObjId, MorId)>,
    pub hom: DiagramHom,
    pub functor: Functor,
}

pub fn matching_functor(x: &Diagram, i: ObjId, budget: &Budget) -> Result<Matching> {
    let base = x.base();
    degree_function(base)?;
    if i >= base.num_objects() {
        return Err(crate::Error::UnknownObject(format!("#{i}")));
    }
    let uu = build_union_under(base, &[i]);
    let y = overcat_diagram(&uu.lt).diagram;
    let restricted = x.pullback(&uu.lt_projection)?;
    let hom = hom_category(&y, &restricted, budget)?;
    let transports: Vec<Functor> = uu.lt_objects.iter().map(|&(_, a)| x.transition(a).clone()).collect();
    let functor = constant_family_functor(x.vertex(i), &hom, &transports)?;
    Ok(Matching {
        object: i,
        under: uu.lt,
        under_objects: uu.lt_objects,
        hom,
        functor,
    })
}

/// Verdict of the homology proxy on one induced comma functor `m/Φ → m/Φ'`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MorphismVerdict {
    pub morphism: String,
    pub source: String,
    pub target: String,
    pub source_objects: usize,
    pub target_objects: usize,
    pub source_betti: Vec<usize>,
    pub target_betti: Vec<usize>,
    pub torsion: bool,
    pub pi0_bijection: bool,
    pub cone_acyclic: bool,
    pub equivalence: bool,
}

/// Whether `m/(−)` sends every morphism of the target of `m` to an
/// equivalence. Identities are skipped: they are sent to identities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuillenBReport {
    pub method: &'static str,
    pub hom_objects: usize,
    pub hom_morphisms: usize,
    pub identities_skipped: usize,
    pub verdicts: Vec<MorphismVerdict>,
    pub pass: bool,
}

impl QuillenBReport {
    pub fn failures(&self) -> impl Iterator<Item = &MorphismVerdict> {
        self.verdicts.iter().filter(|v| !v.equivalence)
    }
}

/// A comma `m/Φ` with its nerve and homology, computed once per `Φ`.
pub(crate) struct CommaData {
    pub comma: Comma,
    pub nerve: Nerve,
    pub homology: HomologyResult,
}

pub(crate) fn comma_data(m: &Functor) -> Result<Vec<CommaData>> {
    m.target()
        .objects()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|phi| {
            let comma = comma_over(m, phi)?;
            let nerve = nerve(&comma.category)?;
            let homology = homology(&nerve.set);
            Ok(CommaData { comma, nerve, homology })
        })
        .collect()
}

pub fn quillen_b_check(m: &Functor) -> Result<QuillenBReport> {
    let h = m.target();
    let commas = comma_data(m)?;
    let arrows: Vec<usize> = h.morphisms().filter(|&a| !h.is_identity(a)).collect();
    let verdicts: Vec<MorphismVerdict> = arrows
        .par_iter()
        .map(|&a| {
            let (s, t) = (h.src(a), h.tgt(a));
            let (cs, ct) = (&commas[s], &commas[t]);
            let f = comma_over_induced(m, &cs.comma, &ct.comma, a);
            let r = EquivalenceReport::of(&nerve_map(&f, &cs.nerve, &ct.nerve));
            MorphismVerdict {
                morphism: h.morphism_id(a).to_string(),
                source: h.object_id(s).to_string(),
                target: h.object_id(t).to_string(),
                source_objects: cs.comma.objects.len(),
                target_objects: ct.comma.objects.len(),
                source_betti: cs.homology.betti.clone(),
                target_betti: ct.homology.betti.clone(),
                torsion: cs.homology.has_torsion() || ct.homology.has_torsion(),
                pi0_bijection: r.pi0_bijection,
                cone_acyclic: r.cone_acyclic,
                equivalence: r.equivalence,
            }
        })
        .collect();
    let pass = verdicts.iter().all(|v| v.equivalence);
    Ok(QuillenBReport {
        method: PROXY_LABEL,
        hom_objects: h.num_objects(),
        hom_morphisms: h.num_morphisms(),
        identities_skipped: h.num_objects(),
        verdicts,
        pass,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObjectCheck {
    pub object: String,
    pub degree: usize,
    pub report: QuillenBReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReedyReport {
    pub method: &'static str,
    pub objects: Vec<ObjectCheck>,
    pub pass: bool,
}

impl ReedyReport {
    /// `(object, morphism)` for every failing comparison.
    pub fn failures(&self) -> Vec<(String, String)> {
        self.objects
            .iter()
            .flat_map(|o| o.report.failures().map(move |v| (o.object.clone(), v.morphism.clone())))
            .collect()
    }
}

/// Runs the matching-functor check at every object of the base, in object order.
pub fn reedy_qf_check(x: &Diagram, budget: &Budget) -> Result<ReedyReport> {
    let base = x.base();
    let deg = degree_function(base)?;
    let objects = base
        .objects()
        .map(|i| {
            let m = matching_functor(x, i, budget)?;
            Ok(ObjectCheck {
                object: base.object_id(i).to_string(),
                degree: deg[i],
                report: quillen_b_check(&m.functor)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let pass = objects.iter().all(|o| o.report.pass);
    Ok(ReedyReport {
        method: PROXY_LABEL,
        objects,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{ordinal, subset_poset};

    fn budget() -> Budget {
        Budget::new(10_000_000)
    }

    #[test]
    fn degree_zero_matching_lands_in_a_point() {
        let c = Arc::new(subset_poset(&["1", "2"], false));
        let x = Diagram::constant(c.clone(), Arc::new(ordinal(1)));
        let top = c.object_index("{1,2}").unwrap();
        let m = matching_functor(&x, top, &budget()).unwrap();
        assert_eq!(m.under.num_objects(), 0);
        assert_eq!((m.hom.category.num_objects(), m.hom.category.num_morphisms()), (1, 1));
        assert!(m.functor.check().is_clean());
    }

    #[test]
    fn matching_of_constant_interval_is_injective() {
        let c = Arc::new(subset_poset(&["1", "2"], false));
        let x = Diagram::constant(c.clone(), Arc::new(ordinal(1)));
        let m = matching_functor(&x, c.object_index("{1}").unwrap(), &budget()).unwrap();
        let objs = m.functor.object_map();
        assert_eq!(objs.len(), 2);
        assert_ne!(objs[0], objs[1]);
        // m_i(x → y) is a modification; every square was checked when the
        // hom-category was built, and the functor laws hold
        assert!(m.functor.check().is_clean());
    }

    #[test]
    fn constant_with_initial_object_passes() {
        let c = Arc::new(subset_poset(&["1", "2"], false));
        let x = Diagram::constant(c.clone(), Arc::new(ordinal(1)));
        let r = reedy_qf_check(&x, &budget()).unwrap();
        assert!(r.pass);
        assert_eq!(r.method, "homology proxy");
        assert_eq!(r.objects.len(), 3);
    }

    #[test]
    fn empty_to_nonempty_comma_fails() {
        // over [1]: X_0 = [1] → X_1 = [1] constant at 1; the morphism 0 → 1 of
        // Hom(pt, X_1) = [1] has m/0 empty and m/1 nonempty
        let base = Arc::new(ordinal(1));
        let i1 = Arc::new(ordinal(1));
        let c1 = Functor::constant(i1.clone(), i1.clone(), 1);
        let trans = base
            .morphisms()
            .map(|a| if base.is_identity(a) { Functor::identity(i1.clone()) } else { c1.clone() })
            .collect();
        let x = Diagram::new(base.clone(), vec![i1.clone(), i1.clone()], trans).unwrap();
        assert!(x.check().is_clean());
        let r = reedy_qf_check(&x, &budget()).unwrap();
        assert!(!r.pass);
        let fails = r.failures();
        assert_eq!(fails.len(), 1);
        assert_eq!(fails[0].0, "0");
        let v = r.objects[0].report.failures().next().unwrap();
        assert_eq!((v.source_objects, v.target_objects), (0, 2));
    }
}

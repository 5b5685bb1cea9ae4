use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use super::csp::{Budget, Csp};
use crate::error::{Error, Result};
use crate::fincat::{
    comma_over_induced, over_category, same_category, Comma, Diagram, FinCategory, Functor, MorId, MorphismRecord,
    ObjId,
};

/// Object and morphism maps of one component functor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FunctorMaps {
    pub objects: Vec<ObjId>,
    pub morphisms: Vec<MorId>,
}

/// A modification between two objects of a hom-category: one natural
/// transformation per base object, given by its components.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Modification {
    pub source: ObjId,
    pub target: ObjId,
    pub components: Vec<Vec<MorId>>,
}

/// `Hom(Y, X)`: strictly natural families of functors `Φ_b : Y_b → X_b` and
/// the modifications between them.
#[derive(Clone, Debug)]
pub struct DiagramHom {
    pub category: Arc<FinCategory>,
    source: Diagram,
    target: Diagram,
    families: Vec<Vec<FunctorMaps>>,
    family_index: HashMap<Vec<FunctorMaps>, ObjId>,
    modifications: Vec<Modification>,
    modification_index: HashMap<(ObjId, ObjId, Vec<Vec<MorId>>), MorId>,
}

impl DiagramHom {
    pub fn source(&self) -> &Diagram {
        &self.source
    }

    pub fn target(&self) -> &Diagram {
        &self.target
    }

    pub fn family(&self, o: ObjId) -> &[FunctorMaps] {
        &self.families[o]
    }

    pub fn families(&self) -> &[Vec<FunctorMaps>] {
        &self.families
    }

    pub fn modification(&self, m: MorId) -> &Modification {
        &self.modifications[m]
    }

    pub fn find_family(&self, family: &[FunctorMaps]) -> Option<ObjId> {
        self.family_index.get(family).copied()
    }

    pub fn find_modification(&self, source: ObjId, target: ObjId, components: &[Vec<MorId>]) -> Option<MorId> {
        self.modification_index
            .get(&(source, target, components.to_vec()))
            .copied()
    }

    /// The component `Φ_b` of object `o` as a functor.
    pub fn component(&self, o: ObjId, b: ObjId) -> Functor {
        let maps = &self.families[o][b];
        Functor::new(
            self.source.vertex(b).clone(),
            self.target.vertex(b).clone(),
            maps.objects.clone(),
            maps.morphisms.clone(),
        )
        .expect("stored components fit their categories")
    }
}

fn family_id(family: &[FunctorMaps]) -> String {
    let parts: Vec<String> = family
        .iter()
        .map(|f| format!("{}/{}", join(&f.objects, ","), join(&f.morphisms, ",")))
        .collect();
    format!("[{}]", parts.join(";"))
}

fn components_id(components: &[Vec<MorId>]) -> String {
    let parts: Vec<String> = components.iter().map(|c| join(c, ",")).collect();
    parts.join(";")
}

fn join(v: &[usize], sep: &str) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

/// Assembles a hom-category from a list of families; modifications are
/// enumerated between every ordered pair.
pub(crate) fn assemble(
    y: &Diagram,
    x: &Diagram,
    families: Vec<Vec<FunctorMaps>>,
    budget: &Budget,
) -> Result<DiagramHom> {
    let family_index: HashMap<Vec<FunctorMaps>, ObjId> =
        families.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect();
    let mut modifications = Vec::new();
    for s in 0..families.len() {
        for t in 0..families.len() {
            for components in modifications_between(y, x, &families[s], &families[t], budget)? {
                modifications.push(Modification {
                    source: s,
                    target: t,
                    components,
                });
            }
        }
    }
    let modification_index: HashMap<(ObjId, ObjId, Vec<Vec<MorId>>), MorId> = modifications
        .iter()
        .enumerate()
        .map(|(i, m)| ((m.source, m.target, m.components.clone()), i))
        .collect();
    let base = y.base();
    let names: Vec<String> = families.iter().map(|f| family_id(f)).collect();
    let records: Vec<MorphismRecord> = modifications
        .iter()
        .map(|m| MorphismRecord {
            id: format!("{}>{}:{}", m.source, m.target, components_id(&m.components)),
            src: m.source,
            tgt: m.target,
        })
        .collect();
    let identity: Vec<MorId> = families
        .iter()
        .enumerate()
        .map(|(o, fam)| {
            let comps: Vec<Vec<MorId>> = base
                .objects()
                .map(|b| fam[b].objects.iter().map(|&v| x.vertex(b).identity(v)).collect())
                .collect();
            modification_index[&(o, o, comps)]
        })
        .collect();
    let category = FinCategory::generate(names, records, identity, |g, f| {
        let (mg, mf) = (&modifications[g], &modifications[f]);
        let comps: Vec<Vec<MorId>> = base
            .objects()
            .map(|b| {
                let xb = x.vertex(b);
                mg.components[b]
                    .iter()
                    .zip(&mf.components[b])
                    .map(|(&a, &c)| xb.compose(a, c))
                    .collect()
            })
            .collect();
        modification_index[&(mf.source, mg.target, comps)]
    });
    Ok(DiagramHom {
        category: Arc::new(category),
        source: y.clone(),
        target: x.clone(),
        families,
        family_index,
        modifications,
        modification_index,
    })
}

/// `Hom(Y, X)` for two diagrams over one base.
pub fn hom_category(y: &Diagram, x: &Diagram, budget: &Budget) -> Result<DiagramHom> {
    if !same_category(y.base(), x.base()) {
        return Err(Error::precondition("hom-category needs diagrams over the same base"));
    }
    let families = natural_families(y, x, budget)?;
    assemble(y, x, families, budget)
}

/// Where the value of a component sits: an assigned variable, or the identity
/// on the image of an object variable.
#[derive(Clone, Copy)]
enum Slot {
    Var(usize),
    IdentityAt(usize),
}

fn natural_families(y: &Diagram, x: &Diagram, budget: &Budget) -> Result<Vec<Vec<FunctorMaps>>> {
    let base = y.base().clone();
    let mut csp = Csp::new();
    let mut obj_var: Vec<Vec<usize>> = Vec::new();
    let mut mor_slot: Vec<Vec<Slot>> = Vec::new();
    for b in base.objects() {
        let (yb, xb) = (y.vertex(b).clone(), x.vertex(b).clone());
        let n = xb.num_objects();
        let ov: Vec<usize> = yb.objects().map(|_| csp.var(move |_| (0..n).collect())).collect();
        let mut ms = Vec::new();
        for m in yb.morphisms() {
            let (s, t) = (ov[yb.src(m)], ov[yb.tgt(m)]);
            if yb.is_identity(m) {
                ms.push(Slot::IdentityAt(s));
            } else {
                let xb = xb.clone();
                ms.push(Slot::Var(csp.var(move |v| xb.hom(v[s], v[t]).to_vec())));
            }
        }
        obj_var.push(ov);
        mor_slot.push(ms);
    }
    let value = |slot: Slot, xb: &FinCategory, v: &[usize]| match slot {
        Slot::Var(k) => v[k],
        Slot::IdentityAt(k) => xb.identity(v[k]),
    };
    let var_of = |slot: Slot| match slot {
        Slot::Var(k) | Slot::IdentityAt(k) => k,
    };
    // functoriality of each component
    for b in base.objects() {
        let yb = y.vertex(b).clone();
        for ((g, f), &gf) in yb.composition_table() {
            let (g, f) = (*g, *f);
            if yb.is_identity(g) || yb.is_identity(f) {
                continue;
            }
            let slots = (mor_slot[b][g], mor_slot[b][f], mor_slot[b][gf]);
            let xb = x.vertex(b).clone();
            csp.check(&[var_of(slots.0), var_of(slots.1), var_of(slots.2)], move |v| {
                xb.compose(value(slots.0, &xb, v), value(slots.1, &xb, v)) == value(slots.2, &xb, v)
            });
        }
    }
    // naturality along each base morphism
    for alpha in base.morphisms() {
        if base.is_identity(alpha) {
            continue;
        }
        let (a, b) = (base.src(alpha), base.tgt(alpha));
        let (ya, yalpha, xalpha) = (y.vertex(a).clone(), y.transition(alpha).clone(), x.transition(alpha).clone());
        for o in ya.objects() {
            let (p, q) = (obj_var[a][o], obj_var[b][yalpha.obj(o)]);
            let xa = xalpha.clone();
            csp.check(&[p, q], move |v| xa.obj(v[p]) == v[q]);
        }
        for m in ya.morphisms() {
            if ya.is_identity(m) {
                continue;
            }
            let (p, q) = (mor_slot[a][m], mor_slot[b][yalpha.mor(m)]);
            let xa = xalpha.clone();
            let (xsrc, xtgt) = (x.vertex(a).clone(), x.vertex(b).clone());
            csp.check(&[var_of(p), var_of(q)], move |v| {
                xa.mor(value(p, &xsrc, v)) == value(q, &xtgt, v)
            });
        }
    }
    let solutions = csp.solve(budget)?;
    Ok(solutions
        .into_iter()
        .map(|v| {
            base.objects()
                .map(|b| {
                    let xb = x.vertex(b);
                    FunctorMaps {
                        objects: obj_var[b].iter().map(|&k| v[k]).collect(),
                        morphisms: mor_slot[b].iter().map(|&s| value(s, xb, &v)).collect(),
                    }
                })
                .collect()
        })
        .collect())
}

fn modifications_between(
    y: &Diagram,
    x: &Diagram,
    phi: &[FunctorMaps],
    psi: &[FunctorMaps],
    budget: &Budget,
) -> Result<Vec<Vec<Vec<MorId>>>> {
    let base = y.base();
    let mut csp = Csp::new();
    let mut vars: Vec<Vec<usize>> = Vec::new();
    for b in base.objects() {
        let (yb, xb) = (y.vertex(b), x.vertex(b));
        let row: Vec<usize> = yb
            .objects()
            .map(|o| {
                let dom = xb.hom(phi[b].objects[o], psi[b].objects[o]).to_vec();
                csp.var(move |_| dom.clone())
            })
            .collect();
        vars.push(row);
    }
    for b in base.objects() {
        let yb = y.vertex(b);
        for m in yb.morphisms() {
            if yb.is_identity(m) {
                continue;
            }
            let (p, q) = (vars[b][yb.src(m)], vars[b][yb.tgt(m)]);
            let (fm, gm) = (phi[b].morphisms[m], psi[b].morphisms[m]);
            let xb = x.vertex(b).clone();
            csp.check(&[p, q], move |v| xb.compose(gm, v[p]) == xb.compose(v[q], fm));
        }
    }
    for alpha in base.morphisms() {
        if base.is_identity(alpha) {
            continue;
        }
        let (a, b) = (base.src(alpha), base.tgt(alpha));
        let (yalpha, xalpha) = (y.transition(alpha), x.transition(alpha).clone());
        for o in y.vertex(a).objects() {
            let (p, q) = (vars[a][o], vars[b][yalpha.obj(o)]);
            let xa = xalpha.clone();
            csp.check(&[p, q], move |v| xa.mor(v[p]) == v[q]);
        }
    }
    Ok(csp
        .solve(budget)?
        .into_iter()
        .map(|v| vars.iter().map(|row| row.iter().map(|&k| v[k]).collect()).collect())
        .collect())
}

/// `C/(−) : C → Cat` with the slice categories behind each vertex.
#[derive(Clone, Debug)]
pub struct OverDiagram {
    pub diagram: Diagram,
    pub slices: Vec<Comma>,
}

pub fn overcat_diagram(c: &Arc<FinCategory>) -> OverDiagram {
    let slices: Vec<Comma> = c
        .objects()
        .map(|i| over_category(c, i).expect("object in range"))
        .collect();
    let id = Functor::identity(c.clone());
    let transitions = c
        .morphisms()
        .map(|a| comma_over_induced(&id, &slices[c.src(a)], &slices[c.tgt(a)], a))
        .collect();
    let vertices = slices.iter().map(|s| s.category.clone()).collect();
    OverDiagram {
        diagram: Diagram::new(c.clone(), vertices, transitions).expect("one slice per object"),
        slices,
    }
}

/// `F/c → D/F(c)`, `(a, φ) ↦ (F a, F φ)`.
pub fn induced_over_functor(f: &Functor, from: &Comma, to: &Comma) -> Result<Functor> {
    let objects: Vec<ObjId> = from
        .objects
        .iter()
        .map(|&(a, phi)| {
            to.object(f.obj(a), f.mor(phi))
                .ok_or_else(|| Error::precondition("target slice does not sit over the image object"))
        })
        .collect::<Result<_>>()?;
    let c = &from.category;
    let morphisms = c
        .morphisms()
        .map(|m| {
            to.morphism(f.mor(from.projection.mor(m)), objects[c.src(m)], objects[c.tgt(m)])
                .ok_or_else(|| Error::precondition("slice morphism has no image"))
        })
        .collect::<Result<_>>()?;
    Ok(Functor::from_maps(c.clone(), to.category.clone(), objects, morphisms))
}

/// Precomposition `Hom(Y, X) → Hom(Y', X')`, `Φ ↦ (Φ_{j(a)} ∘ ρ_a)_a`, where
/// `j = base_map` and `ρ_a : Y'_a → Y_{j(a)}`. Every vertex `X'_a` must be
/// `X_{j(a)}`.
pub fn precompose_functor(big: &DiagramHom, small: &DiagramHom, base_map: &[ObjId], rho: &[Functor]) -> Result<Functor> {
    let restrict = |fam: &[FunctorMaps]| -> Vec<FunctorMaps> {
        base_map
            .iter()
            .zip(rho)
            .map(|(&b, r)| FunctorMaps {
                objects: r.object_map().iter().map(|&o| fam[b].objects[o]).collect(),
                morphisms: r.morphism_map().iter().map(|&m| fam[b].morphisms[m]).collect(),
            })
            .collect()
    };
    let objects: Vec<ObjId> = big
        .families
        .iter()
        .map(|fam| {
            small
                .find_family(&restrict(fam))
                .ok_or_else(|| Error::precondition("restricted family is not natural"))
        })
        .collect::<Result<_>>()?;
    let morphisms: Vec<MorId> = big
        .modifications
        .iter()
        .map(|md| {
            let comps: Vec<Vec<MorId>> = base_map
                .iter()
                .zip(rho)
                .map(|(&b, r)| r.object_map().iter().map(|&o| md.components[b][o]).collect())
                .collect();
            small
                .find_modification(objects[md.source], objects[md.target], &comps)
                .ok_or_else(|| Error::precondition("restricted modification missing"))
        })
        .collect::<Result<_>>()?;
    Ok(Functor::from_maps(big.category.clone(), small.category.clone(), objects, morphisms))
}

/// `x ↦ (constant functor at T_b(x))_b`, for transports `T_b : A → X_b`.
pub fn constant_family_functor(source: &Arc<FinCategory>, hom: &DiagramHom, transports: &[Functor]) -> Result<Functor> {
    let y = hom.source();
    let x = hom.target();
    let base = y.base();
    if transports.len() != base.num_objects() {
        return Err(Error::precondition("one transport per base object"));
    }
    let family = |o: ObjId| -> Vec<FunctorMaps> {
        base.objects()
            .map(|b| {
                let v = transports[b].obj(o);
                FunctorMaps {
                    objects: vec![v; y.vertex(b).num_objects()],
                    morphisms: vec![x.vertex(b).identity(v); y.vertex(b).num_morphisms()],
                }
            })
            .collect()
    };
    let objects: Vec<ObjId> = source
        .objects()
        .map(|o| {
            hom.find_family(&family(o))
                .ok_or_else(|| Error::precondition("constant family is not natural"))
        })
        .collect::<Result<_>>()?;
    let morphisms: Vec<MorId> = source
        .morphisms()
        .map(|m| {
            let comps: Vec<Vec<MorId>> = base
                .objects()
                .map(|b| vec![transports[b].mor(m); y.vertex(b).num_objects()])
                .collect();
            hom.find_modification(objects[source.src(m)], objects[source.tgt(m)], &comps)
                .ok_or_else(|| Error::precondition("constant modification missing"))
        })
        .collect::<Result<_>>()?;
    Ok(Functor::from_maps(source.clone(), hom.category.clone(), objects, morphisms))
}

/// `Hom(I/(−), X)` with the homology of its nerve.
#[derive(Clone, Debug)]
pub struct HolimModel {
    pub hom: DiagramHom,
    pub homology: crate::simpl::HomologyResult,
}

pub fn holim_model(x: &Diagram, budget: &Budget) -> Result<HolimModel> {
    let y = overcat_diagram(x.base()).diagram;
    let hom = hom_category(&y, x, budget)?;
    let homology = crate::simpl::homology(&crate::simpl::nerve(&hom.category)?.set);
    Ok(HolimModel { hom, homology })
}

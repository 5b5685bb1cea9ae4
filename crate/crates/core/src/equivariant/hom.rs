use std::sync::Arc;

use serde::Serialize;

use super::action::{
    fixed_category, lift_action, overcat_g_diagram, pullback_g, CategoryGAction, GDiagram,
};
use super::group::{subgroups, Subgroup};
use crate::error::{Error, Result};
use crate::fincat::{build_union_under, degree_function, FinCategory, Functor, ObjId};
use crate::holim::{
    matching_functor, overcat_diagram, quillen_b_check, Budget, DiagramHom, FunctorMaps, Matching, ObjectCheck,
};
use crate::simpl::PROXY_LABEL;

/// Index convention for the structure maps.
pub const COCYCLE_CONVENTION: &str = "(gh)_X at i = g_X at hi composed with h_X at i";

/// `(g·Φ)_i = g_{X, g⁻¹i} ∘ Φ_{g⁻¹i} ∘ (g⁻¹)_{Y, i}`, on modifications likewise.
pub fn conjugation_action(y: &GDiagram, x: &GDiagram, hom: &DiagramHom) -> Result<CategoryGAction> {
    if !y.action.same_as(&x.action) {
        return Err(Error::precondition("source and target carry different actions"));
    }
    let group = &x.action.group;
    let base = x.diagram.base();
    let h = &hom.category;
    let action = group
        .elements()
        .map(|g| {
            let ginv = group.inverse(g);
            let back = &x.action.action[ginv];
            let objects: Vec<ObjId> = h
                .objects()
                .map(|phi| {
                    let fam = hom.family(phi);
                    let moved: Vec<FunctorMaps> = base
                        .objects()
                        .map(|i| {
                            let j = back.obj(i);
                            let (ys, xs) = (&y.structure[ginv][i], &x.structure[g][j]);
                            let f = &fam[j];
                            FunctorMaps {
                                objects: ys.object_map().iter().map(|&c| xs.obj(f.objects[c])).collect(),
                                morphisms: ys.morphism_map().iter().map(|&m| xs.mor(f.morphisms[m])).collect(),
                            }
                        })
                        .collect();
                    hom.find_family(&moved)
                        .ok_or_else(|| Error::precondition("conjugate of a natural family is not natural"))
                })
                .collect::<Result<_>>()?;
            let morphisms = h
                .morphisms()
                .map(|m| {
                    let md = hom.modification(m);
                    let comps: Vec<Vec<usize>> = base
                        .objects()
                        .map(|i| {
                            let j = back.obj(i);
                            let (ys, xs) = (&y.structure[ginv][i], &x.structure[g][j]);
                            ys.object_map().iter().map(|&c| xs.mor(md.components[j][c])).collect()
                        })
                        .collect();
                    hom.find_modification(objects[h.src(m)], objects[h.tgt(m)], &comps)
                        .ok_or_else(|| Error::precondition("conjugate of a modification is not a modification"))
                })
                .collect::<Result<_>>()?;
            Ok(Functor::from_maps(h.clone(), h.clone(), objects, morphisms))
        })
        .collect::<Result<_>>()?;
    CategoryGAction::new(group.clone(), h.clone(), action)
}

/// `Hom(Y, X)^H` with its inclusion.
pub fn fixed_hom_category(
    y: &GDiagram,
    x: &GDiagram,
    hom: &DiagramHom,
    h: &Subgroup,
) -> Result<(Arc<FinCategory>, Functor)> {
    fixed_category(&conjugation_action(y, x, hom)?, h)
}

/// `m_i` with its `H`-equivariance data and the restriction `m_i^H` to fixed points.
#[derive(Clone, Debug)]
pub struct EquivariantMatching {
    pub object: ObjId,
    pub subgroup: Subgroup,
    pub matching: Matching,
    /// `H` acting on `X_i` through the structure maps.
    pub source_action: CategoryGAction,
    /// `H` acting on `Hom((i<I)/(−), X_{i<})` by conjugation.
    pub target_action: CategoryGAction,
    pub source_fixed: Arc<FinCategory>,
    pub target_fixed: Arc<FinCategory>,
    /// `m_i ∘ h = h ∘ m_i` for every `h ∈ H`.
    pub equivariant: bool,
    pub functor: Functor,
}

pub fn equivariant_matching(x: &GDiagram, i: ObjId, h: &Subgroup, budget: &Budget) -> Result<EquivariantMatching> {
    let g = &x.action.group;
    let h = g.check_subgroup(&h.members)?;
    let base = x.diagram.base();
    if i >= base.num_objects() {
        return Err(Error::UnknownObject(format!("#{i}")));
    }
    if h.members.iter().any(|&e| x.action.action[e].obj(i) != i) {
        return Err(Error::precondition(format!("object `{}` is not fixed by H", base.object_id(i))));
    }
    let xh = x.restrict(&h);
    let matching = matching_functor(&x.diagram, i, budget)?;
    let uu = build_union_under(base, &[i]);
    let maps: Vec<Vec<ObjId>> = xh
        .action
        .action
        .iter()
        .map(|f| {
            uu.lt_objects
                .iter()
                .map(|&(_, a)| uu.lt_object(i, f.mor(a)).expect("h fixes i"))
                .collect()
        })
        .collect();
    let lt_action = lift_action(&uu.lt, &uu.lt_projection, &xh.action, maps)?;
    let y = overcat_g_diagram(&overcat_diagram(&uu.lt), &lt_action)?;
    let x_lt = pullback_g(&xh, &uu.lt_projection, &lt_action)?;
    let target_action = conjugation_action(&y, &x_lt, &matching.hom)?;
    let xi = x.diagram.vertex(i);
    let source_action = CategoryGAction::new(
        xh.action.group.clone(),
        xi.clone(),
        xh.structure.iter().map(|row| row[i].clone()).collect(),
    )?;
    let m = &matching.functor;
    let equivariant = source_action.group.elements().all(|e| {
        let l = m.after(&source_action.action[e]);
        let r = target_action.action[e].after(m);
        matches!((l, r), (Ok(l), Ok(r)) if l.object_map() == r.object_map() && l.morphism_map() == r.morphism_map())
    });
    let (source_fixed, s_incl) = fixed_category(&source_action, &source_action.whole())?;
    let (target_fixed, t_incl) = fixed_category(&target_action, &target_action.whole())?;
    let inv_obj = invert(t_incl.object_map(), target_action.carrier.num_objects());
    let inv_mor = invert(t_incl.morphism_map(), target_action.carrier.num_morphisms());
    let not_fixed = || Error::precondition("m_i does not preserve fixed points");
    let objects = s_incl
        .object_map()
        .iter()
        .map(|&o| inv_obj[m.obj(o)].ok_or_else(not_fixed))
        .collect::<Result<_>>()?;
    let morphisms = s_incl
        .morphism_map()
        .iter()
        .map(|&f| inv_mor[m.mor(f)].ok_or_else(not_fixed))
        .collect::<Result<_>>()?;
    let functor = Functor::from_maps(source_fixed.clone(), target_fixed.clone(), objects, morphisms);
    Ok(EquivariantMatching {
        object: i,
        subgroup: h,
        matching,
        source_action,
        target_action,
        source_fixed,
        target_fixed,
        equivariant,
        functor,
    })
}

fn invert(map: &[usize], size: usize) -> Vec<Option<usize>> {
    let mut inv = vec![None; size];
    for (k, &v) in map.iter().enumerate() {
        inv[v] = Some(k);
    }
    inv
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubgroupRow {
    pub subgroup: Vec<String>,
    pub objects: Vec<ObjectCheck>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivariantReedyReport {
    pub method: &'static str,
    pub convention: &'static str,
    pub valid_g_diagram: bool,
    pub rows: Vec<SubgroupRow>,
    pub pass: bool,
}

/// `m_i^H / (−)` for every subgroup `H` and every object `i` of `I^H`.
pub fn equivariant_reedy_check(x: &GDiagram, budget: &Budget) -> Result<EquivariantReedyReport> {
    let valid = super::action::validate_g_diagram(x).is_clean();
    let base = x.diagram.base();
    let deg = degree_function(base)?;
    let g = &x.action.group;
    let rows = subgroups(g)
        .into_iter()
        .map(|h| {
            let (_, incl) = fixed_category(&x.action, &h)?;
            let objects = incl
                .object_map()
                .iter()
                .map(|&i| {
                    let em = equivariant_matching(x, i, &h, budget)?;
                    Ok(ObjectCheck {
                        object: base.object_id(i).to_string(),
                        degree: deg[i],
                        report: quillen_b_check(&em.functor)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(SubgroupRow {
                subgroup: h.names(g),
                objects,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let pass = valid && rows.iter().all(|r| r.objects.iter().all(|o| o.report.pass));
    Ok(EquivariantReedyReport {
        method: PROXY_LABEL,
        convention: COCYCLE_CONVENTION,
        valid_g_diagram: valid,
        rows,
        pass,
    })
}

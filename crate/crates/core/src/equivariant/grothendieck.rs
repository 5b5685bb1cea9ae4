use serde::Serialize;

use super::action::{
    overcat_g_diagram, pullback_g, union_under_actions, validate_g_action, validate_g_diagram, CategoryGAction,
    GDiagram,
};
use super::hom::conjugation_action;
use crate::error::{Error, Result};
use crate::fincat::{build_union_under, Functor, MorId, ObjId, UnionUnder};
use crate::holim::lydakis::{chain_maps, chains, level};
use crate::holim::{
    grothendieck, lemma_indgrot_iso, overcat_diagram, Budget, DiagramHom, FunctorMaps, Grothendieck, Matching,
    OverDiagram, FU,
};
use crate::simpl::{nerve, nerve_map};

/// `g·(k, c) = (gk, g_Y(c))` and `g·(α, δ) = (gα, g_Y(δ))`.
pub fn grothendieck_g_action(y: &GDiagram) -> Result<(Grothendieck, CategoryGAction)> {
    let gr = grothendieck(&y.diagram);
    let action = action_on(&gr, y)?;
    Ok((gr, action))
}

fn action_on(gr: &Grothendieck, y: &GDiagram) -> Result<CategoryGAction> {
    let c = &gr.category;
    let k = y.diagram.base();
    let missing = || Error::precondition("structure maps do not act on the Grothendieck construction");
    let action = y
        .action
        .group
        .elements()
        .map(|g| {
            let gk = &y.action.action[g];
            let objects: Vec<ObjId> = gr
                .objects
                .iter()
                .map(|&(a, x)| gr.object(gk.obj(a), y.structure[g][a].obj(x)).ok_or_else(missing))
                .collect::<Result<_>>()?;
            let morphisms = c
                .morphisms()
                .map(|m| {
                    let (alpha, delta) = gr.morphisms[m];
                    let moved = y.structure[g][k.tgt(alpha)].mor(delta);
                    gr.morphism(objects[c.src(m)], gk.mor(alpha), moved).ok_or_else(missing)
                })
                .collect::<Result<_>>()?;
            Ok(Functor::from_maps(c.clone(), c.clone(), objects, morphisms))
        })
        .collect::<Result<_>>()?;
    CategoryGAction::new(y.action.group.clone(), c.clone(), action)
}

/// A matching functor with the data needed to move it along `g`.
struct Side<'a> {
    matching: &'a Matching,
    union: UnionUnder,
    slices: OverDiagram,
}

impl<'a> Side<'a> {
    fn new(m: &'a Matching, x: &GDiagram) -> Self {
        let union = build_union_under(x.diagram.base(), &[m.object]);
        let slices = overcat_diagram(&m.under);
        Side {
            matching: m,
            union,
            slices,
        }
    }
}

/// `Hom((u<I)/(−), X_{u<}) → Hom((gu<I)/(−), X_{gu<})` induced by `g`, as
/// object and morphism maps.
fn transport(g: &Functor, row: &[Functor], from: &Side, to: &Side) -> Result<(Vec<ObjId>, Vec<MorId>)> {
    let missing = || Error::precondition("group element does not carry u<I onto gu<I");
    let (fu, tu) = (&from.union, &to.union);
    let t_objects: Vec<ObjId> = fu
        .lt_objects
        .iter()
        .map(|&(u, a)| tu.lt_object(g.obj(u), g.mor(a)).ok_or_else(missing))
        .collect::<Result<_>>()?;
    let t_morphisms: Vec<MorId> = fu
        .lt
        .morphisms()
        .map(|m| {
            let want = g.mor(fu.lt_projection.mor(m));
            tu.lt
                .hom(t_objects[fu.lt.src(m)], t_objects[fu.lt.tgt(m)])
                .iter()
                .copied()
                .find(|&n| tu.lt_projection.mor(n) == want)
                .ok_or_else(missing)
        })
        .collect::<Result<_>>()?;
    let t = Functor::from_maps(fu.lt.clone(), tu.lt.clone(), t_objects.clone(), t_morphisms);
    let mut back = vec![usize::MAX; tu.lt.num_objects()];
    for (a, &b) in t_objects.iter().enumerate() {
        back[b] = a;
    }
    if back.contains(&usize::MAX) {
        return Err(missing());
    }
    // inverse of ρ_a on objects and morphisms, indexed by the target block `b`
    let mut inv_obj = Vec::new();
    let mut inv_mor = Vec::new();
    for (b, &a) in back.iter().enumerate() {
        let rho = crate::holim::induced_over_functor(&t, &from.slices.slices[a], &to.slices.slices[b])?;
        let mut io = vec![usize::MAX; rho.target().num_objects()];
        for (y, &z) in rho.object_map().iter().enumerate() {
            io[z] = y;
        }
        let mut im = vec![usize::MAX; rho.target().num_morphisms()];
        for (y, &z) in rho.morphism_map().iter().enumerate() {
            im[z] = y;
        }
        inv_obj.push(io);
        inv_mor.push(im);
    }
    let proj = |a: ObjId| fu.lt_projection.obj(a);
    let (src, dst) = (&from.matching.hom, &to.matching.hom);
    let objects: Vec<ObjId> = src
        .category
        .objects()
        .map(|psi| {
            let fam = src.family(psi);
            let moved: Vec<FunctorMaps> = back
                .iter()
                .enumerate()
                .map(|(b, &a)| {
                    let s = &row[proj(a)];
                    FunctorMaps {
                        objects: inv_obj[b].iter().map(|&y| s.obj(fam[a].objects[y])).collect(),
                        morphisms: inv_mor[b].iter().map(|&f| s.mor(fam[a].morphisms[f])).collect(),
                    }
                })
                .collect();
            dst.find_family(&moved)
                .ok_or_else(|| Error::precondition("transported family is not natural"))
        })
        .collect::<Result<_>>()?;
    let morphisms = src
        .category
        .morphisms()
        .map(|m| {
            let md = src.modification(m);
            let comps: Vec<Vec<MorId>> = back
                .iter()
                .enumerate()
                .map(|(b, &a)| inv_obj[b].iter().map(|&y| row[proj(a)].mor(md.components[a][y])).collect())
                .collect();
            let c = &src.category;
            dst.find_modification(objects[c.src(m)], objects[c.tgt(m)], &comps)
                .ok_or_else(|| Error::precondition("transported modification is not a modification"))
        })
        .collect::<Result<_>>()?;
    Ok((objects, morphisms))
}

/// `F_U` as a `G_U`-diagram over the conjugation action on
/// `Hom((U<I)/(−), X_{U<})`: the factor at `u` of `F_U(Φ)` goes to the factor
/// at `gu` of `F_U(gΦ)`.
pub fn fu_g_diagram(x: &GDiagram, fu: &FU, hom_action: &CategoryGAction) -> Result<GDiagram> {
    let sides: Vec<Side> = fu.members.iter().map(|m| Side::new(&m.matching, x)).collect();
    let position = |o: ObjId| {
        fu.members
            .iter()
            .position(|m| m.object == o)
            .ok_or_else(|| Error::precondition("group does not stabilize U"))
    };
    let h = &fu.hom.category;
    let structure = x
        .action
        .group
        .elements()
        .map(|e| {
            let gb = &x.action.action[e];
            let row = &x.structure[e];
            let ga = &hom_action.action[e];
            let mut perm = Vec::new();
            let mut moves = Vec::new();
            for (k, m) in fu.members.iter().enumerate() {
                let k2 = position(gb.obj(m.object))?;
                perm.push(k2);
                moves.push(transport(gb, row, &sides[k], &sides[k2])?);
            }
            h.objects()
                .map(|phi| {
                    let (src, dst) = (&fu.products[phi], &fu.products[ga.obj(phi)]);
                    let commas = |k: usize, at: ObjId| &fu.members[k].commas[fu.members[k].restriction.obj(at)];
                    let lost = || Error::precondition("F_U structure map leaves the comma categories");
                    let objects = src
                        .category
                        .objects()
                        .map(|o| {
                            let t = src.object_tuple(o);
                            let mut out = vec![0; t.len()];
                            for (k, &c) in t.iter().enumerate() {
                                let (a, gamma) = commas(k, phi).objects[c];
                                let s = &row[fu.members[k].object];
                                out[perm[k]] = commas(perm[k], ga.obj(phi))
                                    .object(s.obj(a), moves[k].1[gamma])
                                    .ok_or_else(lost)?;
                            }
                            Ok(dst.object(&out))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    let morphisms = src
                        .category
                        .morphisms()
                        .map(|m| {
                            let t = src.morphism_tuple(m);
                            let mut out = vec![0; t.len()];
                            for (k, &f) in t.iter().enumerate() {
                                let from = commas(k, phi);
                                let to = commas(perm[k], ga.obj(phi));
                                let s = &row[fu.members[k].object];
                                let (ss, tt) = (from.category.src(f), from.category.tgt(f));
                                let image = |c: ObjId| {
                                    let (a, gamma) = from.objects[c];
                                    to.object(s.obj(a), moves[k].1[gamma]).ok_or_else(lost)
                                };
                                out[perm[k]] = to
                                    .morphism(s.mor(from.projection.mor(f)), image(ss)?, image(tt)?)
                                    .ok_or_else(lost)?;
                            }
                            Ok(dst.morphism(&out))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    Ok(Functor::from_maps(src.category.clone(), dst.category.clone(), objects, morphisms))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    GDiagram::new(hom_action.clone(), fu.diagram.clone(), structure)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ElementCheck {
    pub element: String,
    pub commutes: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaEquivarianceReport {
    pub members: Vec<String>,
    /// `G_U`, by element name.
    pub stabilizer: Vec<String>,
    pub lemma_pass: bool,
    pub left_action_valid: bool,
    pub hom_action_valid: bool,
    pub fu_structure_valid: bool,
    pub right_action_valid: bool,
    /// `Θ ∘ g = g ∘ Θ` per element of `G_U`.
    pub elements: Vec<ElementCheck>,
    pub pass: bool,
}

/// Checks that the lemma isomorphism commutes with the `G_U`-actions: by
/// conjugation on the left, through `F_U` on the right.
pub fn lemma_equivariance(x: &GDiagram, members: &[ObjId], budget: &Budget) -> Result<LemmaEquivarianceReport> {
    let g = &x.action.group;
    let stab = x.action.stabilizer(members);
    let xu = x.restrict(&stab);
    let iso = lemma_indgrot_iso(&x.diagram, members, budget)?;
    let un = &iso.fu.union;
    let (leq_action, lt_action) = union_under_actions(un, &xu.action)?;
    let left_action = conjugation_action(
        &overcat_g_diagram(&iso.leq_slices, &leq_action)?,
        &pullback_g(&xu, &un.leq_projection, &leq_action)?,
        &iso.left,
    )?;
    let hom_action = conjugation_action(
        &overcat_g_diagram(&iso.fu.lt_slices, &lt_action)?,
        &pullback_g(&xu, &un.lt_projection, &lt_action)?,
        &iso.fu.hom,
    )?;
    let fg = fu_g_diagram(&xu, &iso.fu, &hom_action)?;
    let right_action = action_on(&iso.right, &fg)?;
    let elements: Vec<ElementCheck> = xu
        .action
        .group
        .elements()
        .map(|e| {
            let l = iso.theta.after(&right_action.action[e])?;
            let r = left_action.action[e].after(&iso.theta)?;
            Ok(ElementCheck {
                element: xu.action.group.name(e).to_string(),
                commutes: l.object_map() == r.object_map() && l.morphism_map() == r.morphism_map(),
            })
        })
        .collect::<Result<_>>()?;
    let left_action_valid = validate_g_action(&left_action).is_clean();
    let hom_action_valid = validate_g_action(&hom_action).is_clean();
    let fu_structure_valid = validate_g_diagram(&fg).is_clean();
    let right_action_valid = validate_g_action(&right_action).is_clean();
    let pass = iso.report.pass
        && left_action_valid
        && hom_action_valid
        && fu_structure_valid
        && right_action_valid
        && elements.iter().all(|c| c.commutes);
    Ok(LemmaEquivarianceReport {
        members: iso.report.members.clone(),
        stabilizer: stab.names(g),
        lemma_pass: iso.report.pass,
        left_action_valid,
        hom_action_valid,
        fu_structure_valid,
        right_action_valid,
        elements,
        pass,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NerveDim {
    pub dim: usize,
    pub simplices: usize,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NerveCompatibility {
    pub dims: Vec<NerveDim>,
    pub pass: bool,
}

/// Compares `N(g·)` on `n`-chains of `Hom(Y, X)` with conjugation of the
/// families `NY_i × Δ^n → NX_i`: `N(g_X) ∘ f_{g⁻¹i} ∘ (N(g⁻¹_Y) × id)`.
pub fn conjugation_nerve_check(
    y: &GDiagram,
    x: &GDiagram,
    hom: &DiagramHom,
    up_to_dim: usize,
) -> Result<NerveCompatibility> {
    let action = conjugation_action(y, x, hom)?;
    let group = &x.action.group;
    let base = x.diagram.base();
    let ny: Vec<_> = base.objects().map(|i| nerve(y.diagram.vertex(i))).collect::<Result<_>>()?;
    let dims = (0..=up_to_dim)
        .map(|n| {
            let lv = level(&y.diagram, &x.diagram, n)?;
            let all = chains(&hom.category, n);
            let mut agree = true;
            for g in group.elements() {
                let ginv = group.inverse(g);
                let ga = &action.action[g];
                let back = &x.action.action[ginv];
                // N(g⁻¹_Y) × id : NY_i × Δ^n → NY_{g⁻¹i} × Δ^n
                let pre: Vec<_> = base
                    .objects()
                    .map(|i| {
                        let j = back.obj(i);
                        let (si, sj) = (&lv.slots[i].simplicial, &lv.slots[j].simplicial);
                        let left = nerve_map(&y.structure[ginv][i], &ny[i], &ny[j]).after(&si.left_projection());
                        sj.pair_map(&left, &si.right_projection())
                    })
                    .collect();
                let post: Vec<_> = base
                    .objects()
                    .map(|i| {
                        let j = back.obj(i);
                        nerve_map(&x.structure[g][j], &lv.slots[j].target_nerve, &lv.slots[i].target_nerve)
                    })
                    .collect();
                for (start, path) in &all {
                    let f = chain_maps(hom, &lv, *start, path);
                    let moved: Vec<MorId> = path.iter().map(|&m| ga.mor(m)).collect();
                    let direct = chain_maps(hom, &lv, ga.obj(*start), &moved);
                    for i in base.objects() {
                        let conj = post[i].after(&f[back.obj(i)]).after(&pre[i]);
                        if conj != direct[i] {
                            agree = false;
                        }
                    }
                }
            }
            Ok(NerveDim {
                dim: n,
                simplices: all.len(),
                agree,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let pass = dims.iter().all(|d| d.agree);
    Ok(NerveCompatibility { dims, pass })
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::{constant, flipped, swap_action};
    use super::super::FinGroup;
    use super::*;
    use crate::fincat::{degree_layer, ordinal};
    use crate::holim::hom_category;

    fn budget() -> Budget {
        Budget::new(10_000_000)
    }

    #[test]
    fn trivial_action_lifts_trivially() {
        let base = swap_action(&["1", "2"]);
        let a = CategoryGAction::trivial(FinGroup::trivial(), base.carrier.clone());
        let (_, act) = grothendieck_g_action(&constant(&a, ordinal(1))).unwrap();
        assert!(act.action[0].is_identity());
    }

    #[test]
    fn swap_exchanges_the_feet() {
        let a = swap_action(&["1", "2"]);
        let (gr, act) = grothendieck_g_action(&constant(&a, ordinal(1))).unwrap();
        assert!(validate_g_action(&act).is_clean());
        let g = &act.action[1];
        assert!(g.after(g).unwrap().is_identity());
        let base = a.carrier.clone();
        let (one, two) = (base.object_index("{1}").unwrap(), base.object_index("{2}").unwrap());
        for x in 0..2 {
            assert_eq!(g.obj(gr.object(one, x).unwrap()), gr.object(two, x).unwrap());
        }
        let top = base.object_index("{1,2}").unwrap();
        for x in 0..2 {
            let o = gr.object(top, x).unwrap();
            assert_eq!(g.obj(o), o);
        }
    }

    #[test]
    fn flip_moves_the_fiber_too() {
        let a = swap_action(&["1", "2"]);
        let (gr, act) = grothendieck_g_action(&flipped(&a)).unwrap();
        assert!(validate_g_action(&act).is_clean());
        let top = a.carrier.object_index("{1,2}").unwrap();
        assert_eq!(act.action[1].obj(gr.object(top, 0).unwrap()), gr.object(top, 1).unwrap());
    }

    #[test]
    fn lemma_commutes_with_the_swap() {
        let a = swap_action(&["1", "2"]);
        for x in [constant(&a, ordinal(1)), flipped(&a)] {
            let layer = degree_layer(a.carrier.as_ref(), 1).unwrap();
            let r = lemma_equivariance(&x, &layer, &budget()).unwrap();
            assert_eq!(r.stabilizer, ["0", "1"]);
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn lemma_on_three_letters() {
        let a = swap_action(&["1", "2", "3"]);
        let x = constant(&a, ordinal(1));
        let c = &a.carrier;
        let pair = [c.object_index("{1}").unwrap(), c.object_index("{2}").unwrap()];
        let r = lemma_equivariance(&x, &pair, &budget()).unwrap();
        assert_eq!(r.stabilizer.len(), 2);
        assert!(r.pass, "{r:?}");
        // {1},{3} is not stabilized by the swap
        let odd = [c.object_index("{1}").unwrap(), c.object_index("{3}").unwrap()];
        let r = lemma_equivariance(&x, &odd, &budget()).unwrap();
        assert_eq!(r.stabilizer, ["0"]);
        assert!(r.pass);
    }

    #[test]
    fn nerve_of_conjugation() {
        let a = swap_action(&["1", "2"]);
        for x in [constant(&a, ordinal(1)), flipped(&a)] {
            let over = overcat_diagram(x.diagram.base());
            let y = overcat_g_diagram(&over, &x.action).unwrap();
            let hom = hom_category(&y.diagram, &x.diagram, &budget()).unwrap();
            let r = conjugation_nerve_check(&y, &x, &hom, 1).unwrap();
            assert!(r.pass, "{r:?}");
            assert_eq!(r.dims[0].simplices, hom.category.num_objects());
            assert_eq!(r.dims[1].simplices, hom.category.num_morphisms());
        }
    }
}

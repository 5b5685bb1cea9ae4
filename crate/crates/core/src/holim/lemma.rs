use std::collections::HashMap;

use serde::Serialize;

use super::csp::Budget;
use super::grothendieck::{grothendieck, Grothendieck};
use super::hom::{hom_category, induced_over_functor, overcat_diagram, precompose_functor, DiagramHom, FunctorMaps, OverDiagram};
use super::matching::{matching_functor, Matching};
use crate::error::{Error, Result};
use crate::fincat::{
    comma_over, comma_over_induced, union_under, Comma, Diagram, Functor, MorId, ObjId, Product, UnionUnder,
};

/// One member `u ∈ U` seen from the union: its matching functor, the
/// restriction `Φ ↦ Φ|_{u<I}` and the commas `m_u/Φ_u` for every `Φ_u`.
#[derive(Clone, Debug)]
pub struct Member {
    pub object: ObjId,
    pub matching: Matching,
    /// Block inclusion `u<I → U<I`.
    pub block: Functor,
    /// `ρ_a : (u<I)/a → (U<I)/block(a)`.
    pub slice_maps: Vec<Functor>,
    pub restriction: Functor,
    pub commas: Vec<Comma>,
}

/// `F_U : Hom((U<I)/(−), X_{U<}) → Cat`, `Φ ↦ ∏_u m_u/(Φ|_{u<I})`.
#[derive(Clone, Debug)]
pub struct FU {
    pub union: UnionUnder,
    pub lt_slices: OverDiagram,
    pub hom: DiagramHom,
    pub members: Vec<Member>,
    pub products: Vec<Product>,
    pub diagram: Diagram,
}

fn block_inclusion(small: &UnionUnder, big: &UnionUnder, u: ObjId) -> Result<Functor> {
    let missing = || Error::precondition("block of U<I does not match u<I");
    let objects: Vec<ObjId> = small
        .lt_objects
        .iter()
        .map(|&(_, a)| big.lt_object(u, a).ok_or_else(missing))
        .collect::<Result<_>>()?;
    let lt = &small.lt;
    let morphisms: Vec<MorId> = lt
        .morphisms()
        .map(|m| {
            let k = small.lt_projection.mor(m);
            let (s, t) = (objects[lt.src(m)], objects[lt.tgt(m)]);
            big.lt
                .hom(s, t)
                .iter()
                .copied()
                .find(|&n| big.lt_projection.mor(n) == k)
                .ok_or_else(missing)
        })
        .collect::<Result<_>>()?;
    Ok(Functor::from_maps(lt.clone(), big.lt.clone(), objects, morphisms))
}

pub fn f_u_functor(x: &Diagram, members: &[ObjId], budget: &Budget) -> Result<FU> {
    let base = x.base();
    let union = union_under(base, members)?;
    let lt_slices = overcat_diagram(&union.lt);
    let x_lt = x.pullback(&union.lt_projection)?;
    let hom = hom_category(&lt_slices.diagram, &x_lt, budget)?;
    let mut built = Vec::new();
    for &u in members {
        let matching = matching_functor(x, u, budget)?;
        let small = crate::fincat::build_union_under(base, &[u]);
        let block = block_inclusion(&small, &union, u)?;
        let small_slices = overcat_diagram(&small.lt);
        let slice_maps: Vec<Functor> = small
            .lt
            .objects()
            .map(|a| induced_over_functor(&block, &small_slices.slices[a], &lt_slices.slices[block.obj(a)]))
            .collect::<Result<_>>()?;
        let restriction = precompose_functor(&hom, &matching.hom, block.object_map(), &slice_maps)?;
        let commas: Vec<Comma> = matching
            .hom
            .category
            .objects()
            .map(|phi| comma_over(&matching.functor, phi))
            .collect::<Result<_>>()?;
        built.push(Member {
            object: u,
            matching,
            block,
            slice_maps,
            restriction,
            commas,
        });
    }
    let h = &hom.category;
    let products: Vec<Product> = h
        .objects()
        .map(|phi| {
            Product::new(
                built
                    .iter()
                    .map(|m| m.commas[m.restriction.obj(phi)].category.clone())
                    .collect(),
            )
        })
        .collect();
    let transitions: Vec<Functor> = h
        .morphisms()
        .map(|lam| {
            let (s, t) = (h.src(lam), h.tgt(lam));
            let parts: Vec<Functor> = built
                .iter()
                .map(|m| {
                    let r = &m.restriction;
                    comma_over_induced(
                        &m.matching.functor,
                        &m.commas[r.obj(s)],
                        &m.commas[r.obj(t)],
                        r.mor(lam),
                    )
                })
                .collect();
            products[s].product_functor(&products[t], &parts)
        })
        .collect();
    let diagram = Diagram::new(h.clone(), products.iter().map(|p| p.category.clone()).collect(), transitions)?;
    Ok(FU {
        union,
        lt_slices,
        hom,
        members: built,
        products,
        diagram,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub members: Vec<String>,
    pub left_objects: usize,
    pub left_morphisms: usize,
    pub right_objects: usize,
    pub right_morphisms: usize,
    pub theta_functorial: bool,
    pub inverse_functorial: bool,
    /// `Θ⁻¹ ∘ Θ` is the identity functor.
    pub right_round_trip: bool,
    /// `Θ ∘ Θ⁻¹` is the identity functor.
    pub left_round_trip: bool,
    pub pass: bool,
}

/// Both sides of the isomorphism `Hom((U≤I)/(−), X_{U≤}) ≅ Hom((U<I)/(−), X_{U<}) ∫ F_U`
/// with the explicit functors between them.
#[derive(Clone, Debug)]
pub struct LemmaIso {
    pub fu: FU,
    pub leq_slices: OverDiagram,
    pub left: DiagramHom,
    pub right: Grothendieck,
    /// `Θ : right → left`.
    pub theta: Functor,
    /// `Θ⁻¹ : left → right`.
    pub theta_inverse: Functor,
    pub report: LemmaReport,
}

/// Shared lookups between the two slice diagrams over `U ≤ I` and `U < I`.
struct Slices<'a> {
    fu: &'a FU,
    leq: &'a OverDiagram,
    /// `U<I` object → `U≤I` object.
    lt_to_leq: &'a [ObjId],
    /// `U≤I` object → `U<I` object, for non-identity `α`.
    leq_to_lt: Vec<Option<ObjId>>,
    /// `U≤I` morphism → `U<I` morphism, between non-identity objects.
    leq_mor_to_lt: HashMap<MorId, MorId>,
    /// Block of each member.
    block_of: HashMap<ObjId, usize>,
    /// For each object `q` of `U<I`, the inverse of `ρ` on the slice `(U<I)/q`.
    rho_inverse: Vec<Vec<ObjId>>,
    /// For each object `q` of `U<I`, the object of `u<I` it comes from.
    small_object: Vec<ObjId>,
}

impl<'a> Slices<'a> {
    fn new(fu: &'a FU, leq: &'a OverDiagram) -> Self {
        let un = &fu.union;
        let lt_to_leq = un.inclusion.object_map();
        let mut leq_to_lt = vec![None; un.leq.num_objects()];
        for (q, &p) in lt_to_leq.iter().enumerate() {
            leq_to_lt[p] = Some(q);
        }
        let leq_mor_to_lt = un
            .inclusion
            .morphism_map()
            .iter()
            .enumerate()
            .map(|(q, &p)| (p, q))
            .collect();
        let block_of = un.members.iter().enumerate().map(|(b, &u)| (u, b)).collect();
        let mut rho_inverse = vec![Vec::new(); un.lt.num_objects()];
        let mut small_object = vec![0; un.lt.num_objects()];
        for m in &fu.members {
            for (a, rho) in m.slice_maps.iter().enumerate() {
                let q = m.block.obj(a);
                small_object[q] = a;
                let mut inv = vec![usize::MAX; rho.target().num_objects()];
                for (y, &t) in rho.object_map().iter().enumerate() {
                    inv[t] = y;
                }
                rho_inverse[q] = inv;
            }
        }
        Slices {
            fu,
            leq,
            lt_to_leq,
            leq_to_lt,
            leq_mor_to_lt,
            block_of,
            rho_inverse,
            small_object,
        }
    }

    /// Object of `(U<I)/q` matching a non-root object of `(U≤I)/p`.
    fn lt_slice_object(&self, p: ObjId, o: ObjId) -> Option<ObjId> {
        let q = self.leq_to_lt[p]?;
        let (beta, phi) = self.leq.slices[p].objects[o];
        let beta = self.leq_to_lt[beta]?;
        let phi = *self.leq_mor_to_lt.get(&phi)?;
        self.fu.lt_slices.slices[q].object(beta, phi)
    }

    fn is_root_object(&self, p: ObjId, o: ObjId) -> bool {
        let (beta, _) = self.leq.slices[p].objects[o];
        self.leq_to_lt[beta].is_none()
    }
}

pub fn lemma_indgrot_iso(x: &Diagram, members: &[ObjId], budget: &Budget) -> Result<LemmaIso> {
    let fu = f_u_functor(x, members, budget)?;
    let un = &fu.union;
    let leq_slices = overcat_diagram(&un.leq);
    let x_leq = x.pullback(&un.leq_projection)?;
    let left = hom_category(&leq_slices.diagram, &x_leq, budget)?;
    let right = grothendieck(&fu.diagram);
    let sl = Slices::new(&fu, &leq_slices);
    let theta = build_theta(x, &sl, &left, &right)?;
    let theta_inverse = build_theta_inverse(&sl, &left, &right)?;
    let theta_functorial = theta.check().is_clean();
    let inverse_functorial = theta_inverse.check().is_clean();
    let right_round_trip = theta_inverse.after(&theta)?.is_identity();
    let left_round_trip = theta.after(&theta_inverse)?.is_identity();
    let report = LemmaReport {
        members: members.iter().map(|&u| x.base().object_id(u).to_string()).collect(),
        left_objects: left.category.num_objects(),
        left_morphisms: left.category.num_morphisms(),
        right_objects: right.category.num_objects(),
        right_morphisms: right.category.num_morphisms(),
        theta_functorial,
        inverse_functorial,
        right_round_trip,
        left_round_trip,
        pass: theta_functorial && inverse_functorial && right_round_trip && left_round_trip,
    };
    Ok(LemmaIso {
        fu,
        leq_slices,
        left,
        right,
        theta,
        theta_inverse,
        report,
    })
}

fn mismatch(what: &str) -> Error {
    Error::precondition(format!("lemma isomorphism: {what}"))
}

/// `Θ(Φ, x, γ) = Ψ` with `Ψ_α` equal to `α_* x_u` on factorizations through
/// `id_u`, to `Φ_α` elsewhere, and to `γ_α` on the morphisms leaving `id_u`.
fn build_theta(x: &Diagram, sl: &Slices<'_>, left: &DiagramHom, right: &Grothendieck) -> Result<Functor> {
    let fu = sl.fu;
    let un = &fu.union;
    let base = x.base();
    let hom = &fu.hom;
    // (x_u, Γ_u) per block, read from a Grothendieck object
    let unpack = |obj: ObjId| -> (ObjId, Vec<(ObjId, MorId)>) {
        let (phi, t) = right.objects[obj];
        let tuple = fu.products[phi].object_tuple(t);
        let parts = fu
            .members
            .iter()
            .zip(tuple)
            .map(|(m, c)| m.commas[m.restriction.obj(phi)].objects[c])
            .collect();
        (phi, parts)
    };
    let objects: Vec<ObjId> = right
        .category
        .objects()
        .map(|obj| {
            let (phi, parts) = unpack(obj);
            let family: Vec<FunctorMaps> = un
                .leq
                .objects()
                .map(|p| {
                    let (u, alpha) = un.leq_objects[p];
                    let bi = sl.block_of[&u];
                    let (xu, gamma) = parts[bi];
                    let slice = &sl.leq.slices[p];
                    let xt = x.vertex(base.tgt(alpha));
                    if base.is_identity(alpha) {
                        return FunctorMaps {
                            objects: vec![xu],
                            morphisms: vec![xt.identity(xu)],
                        };
                    }
                    let q = sl.leq_to_lt[p].expect("non-identity α lies in U<I");
                    let pushed = x.transition(alpha).obj(xu);
                    let fam_q = &hom.family(phi)[q];
                    let objs: Vec<ObjId> = (0..slice.objects.len())
                        .map(|o| {
                            if sl.is_root_object(p, o) {
                                pushed
                            } else {
                                fam_q.objects[sl.lt_slice_object(p, o).expect("non-root object")]
                            }
                        })
                        .collect();
                    let sc = &slice.category;
                    let member = &fu.members[bi];
                    let gamma = member.matching.hom.modification(gamma);
                    let mors: Vec<MorId> = sc
                        .morphisms()
                        .map(|r| {
                            let (s, t) = (sc.src(r), sc.tgt(r));
                            match (sl.is_root_object(p, s), sl.is_root_object(p, t)) {
                                (_, true) => xt.identity(pushed),
                                (true, false) => {
                                    let ti = sl.lt_slice_object(p, t).expect("non-root object");
                                    gamma.components[sl.small_object[q]][sl.rho_inverse[q][ti]]
                                }
                                (false, false) => {
                                    let (si, ti) = (
                                        sl.lt_slice_object(p, s).expect("non-root object"),
                                        sl.lt_slice_object(p, t).expect("non-root object"),
                                    );
                                    let k = sl.leq_mor_to_lt[&slice.projection.mor(r)];
                                    let rq = fu.lt_slices.slices[q].morphism(k, si, ti).expect("slice morphism");
                                    fam_q.morphisms[rq]
                                }
                            }
                        })
                        .collect();
                    FunctorMaps {
                        objects: objs,
                        morphisms: mors,
                    }
                })
                .collect();
            left.find_family(&family).ok_or_else(|| mismatch("Θ of an object is not natural"))
        })
        .collect::<Result<_>>()?;
    let rc = &right.category;
    let morphisms: Vec<MorId> = rc
        .morphisms()
        .map(|mr| {
            let (lam, delta) = right.morphisms[mr];
            let phi2 = hom.category.tgt(lam);
            let tuple = fu.products[phi2].morphism_tuple(delta);
            let fs: Vec<MorId> = fu
                .members
                .iter()
                .zip(tuple)
                .map(|(m, d)| m.commas[m.restriction.obj(phi2)].projection.mor(d))
                .collect();
            let md = hom.modification(lam);
            let comps: Vec<Vec<MorId>> = un
                .leq
                .objects()
                .map(|p| {
                    let (u, alpha) = un.leq_objects[p];
                    let f = fs[sl.block_of[&u]];
                    if base.is_identity(alpha) {
                        return vec![f];
                    }
                    let q = sl.leq_to_lt[p].expect("non-identity α lies in U<I");
                    (0..sl.leq.slices[p].objects.len())
                        .map(|o| {
                            if sl.is_root_object(p, o) {
                                x.transition(alpha).mor(f)
                            } else {
                                md.components[q][sl.lt_slice_object(p, o).expect("non-root object")]
                            }
                        })
                        .collect()
                })
                .collect();
            left.find_modification(objects[rc.src(mr)], objects[rc.tgt(mr)], &comps)
                .ok_or_else(|| mismatch("Θ of a morphism is not a modification"))
        })
        .collect::<Result<_>>()?;
    Ok(Functor::from_maps(rc.clone(), left.category.clone(), objects, morphisms))
}

/// `Θ⁻¹(Ψ) = (Ψ|_{U<I}, Ψ_{id_u}, γ)` with `γ_α` read off from `Ψ_α` on the
/// morphism out of the factorization through `id_u`.
fn build_theta_inverse(sl: &Slices<'_>, left: &DiagramHom, right: &Grothendieck) -> Result<Functor> {
    let fu = sl.fu;
    let un = &fu.union;
    let hom = &fu.hom;
    let lt_maps: Vec<Functor> = un
        .lt
        .objects()
        .map(|q| induced_over_functor(&un.inclusion, &fu.lt_slices.slices[q], &sl.leq.slices[sl.lt_to_leq[q]]))
        .collect::<Result<_>>()?;
    let restrict = precompose_functor(left, hom, sl.lt_to_leq, &lt_maps)?;
    let roots: Vec<ObjId> = (0..un.members.len()).map(|b| un.root(b)).collect();
    // the object (id_u → α) of (U≤I)/α for every non-identity α
    let root_objects: Vec<Option<ObjId>> = un
        .leq
        .objects()
        .map(|p| {
            let (u, _) = un.leq_objects[p];
            let root = roots[sl.block_of[&u]];
            if root == p {
                return None;
            }
            let to_p = un.leq.hom(root, p)[0];
            sl.leq.slices[p].object(root, to_p)
        })
        .collect();
    let objects: Vec<ObjId> = left
        .category
        .objects()
        .map(|psi| {
            let phi = restrict.obj(psi);
            let fam = left.family(psi);
            let parts: Vec<ObjId> = fu
                .members
                .iter()
                .enumerate()
                .map(|(bi, m)| {
                    let xu = fam[roots[bi]].objects[0];
                    let small = &m.matching;
                    let comps: Vec<Vec<MorId>> = small
                        .under
                        .objects()
                        .map(|a| {
                            let q = m.block.obj(a);
                            let p = sl.lt_to_leq[q];
                            let o_root = root_objects[p].expect("non-identity α");
                            let slice = &sl.leq.slices[p];
                            m.slice_maps[a]
                                .object_map()
                                .iter()
                                .map(|&t| {
                                    let st = lt_maps[q].obj(t);
                                    let beta = slice.objects[st].0;
                                    let lift = un.leq.hom(roots[bi], beta)[0];
                                    let r = slice.morphism(lift, o_root, st).expect("factorization morphism");
                                    fam[p].morphisms[r]
                                })
                                .collect()
                        })
                        .collect();
                    let phi_u = m.restriction.obj(phi);
                    let gamma = small
                        .hom
                        .find_modification(small.functor.obj(xu), phi_u, &comps)
                        .ok_or_else(|| mismatch("γ is not a modification"))?;
                    m.commas[phi_u].object(xu, gamma).ok_or_else(|| mismatch("comma object missing"))
                })
                .collect::<Result<_>>()?;
            right
                .object(phi, fu.products[phi].object(&parts))
                .ok_or_else(|| mismatch("Grothendieck object missing"))
        })
        .collect::<Result<_>>()?;
    let lc = &left.category;
    let morphisms: Vec<MorId> = lc
        .morphisms()
        .map(|ml| {
            let (s, t) = (objects[lc.src(ml)], objects[lc.tgt(ml)]);
            let lam = restrict.mor(ml);
            let md = left.modification(ml);
            let phi2 = hom.category.tgt(lam);
            let pushed = fu.diagram.transition(lam).obj(right.objects[s].1);
            let from = fu.products[phi2].object_tuple(pushed);
            let to = fu.products[phi2].object_tuple(right.objects[t].1);
            let parts: Vec<MorId> = fu
                .members
                .iter()
                .enumerate()
                .map(|(bi, m)| {
                    let f = md.components[roots[bi]][0];
                    m.commas[m.restriction.obj(phi2)]
                        .morphism(f, from[bi], to[bi])
                        .ok_or_else(|| mismatch("comma morphism missing"))
                })
                .collect::<Result<_>>()?;
            right
                .morphism(s, lam, fu.products[phi2].morphism(&parts))
                .ok_or_else(|| mismatch("Grothendieck morphism missing"))
        })
        .collect::<Result<_>>()?;
    Ok(Functor::from_maps(lc.clone(), right.category.clone(), objects, morphisms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{degree_layer, ordinal, subset_poset, FinCategory};
    use std::sync::Arc;

    fn budget() -> Budget {
        Budget::new(50_000_000)
    }

    #[test]
    fn punctured_square_layer_one() {
        let c = Arc::new(subset_poset(&["1", "2"], false));
        let x = Diagram::constant(c.clone(), Arc::new(ordinal(1)));
        let u = degree_layer(&c, 1).unwrap();
        let iso = lemma_indgrot_iso(&x, &u, &budget()).unwrap();
        assert!(iso.report.pass, "{:?}", iso.report);
        assert!(iso.report.left_objects > 0);
    }

    #[test]
    fn degree_zero_layer_is_a_product() {
        let c = Arc::new(subset_poset(&["1", "2"], false));
        let i1 = Arc::new(ordinal(1));
        let x = Diagram::constant(c.clone(), i1.clone());
        let u = degree_layer(&c, 0).unwrap();
        let iso = lemma_indgrot_iso(&x, &u, &budget()).unwrap();
        assert!(iso.report.pass);
        let p = Product::new(u.iter().map(|_| i1.clone()).collect());
        assert_eq!(iso.report.left_objects, p.category.num_objects());
        assert_eq!(iso.report.left_morphisms, p.category.num_morphisms());
    }

    #[test]
    fn singleton_in_punctured_cube() {
        let c = Arc::new(subset_poset(&["1", "2", "3"], false));
        let x = Diagram::constant(c.clone(), Arc::new(FinCategory::terminal()));
        let u = vec![c.object_index("{1}").unwrap()];
        let iso = lemma_indgrot_iso(&x, &u, &budget()).unwrap();
        assert!(iso.report.pass);
        assert_eq!((iso.report.left_objects, iso.report.left_morphisms), (1, 1));
    }

    #[test]
    fn fu_of_two_members_is_a_product() {
        let c = Arc::new(subset_poset(&["1", "2"], false));
        let x = Diagram::constant(c.clone(), Arc::new(ordinal(1)));
        let u = degree_layer(&c, 1).unwrap();
        let fu = f_u_functor(&x, &u, &budget()).unwrap();
        for phi in fu.hom.category.objects() {
            let counts: usize = fu
                .members
                .iter()
                .map(|m| m.commas[m.restriction.obj(phi)].objects.len())
                .product();
            assert_eq!(fu.diagram.vertex(phi).num_objects(), counts);
        }
        assert!(fu.diagram.check().is_clean());
    }

    #[test]
    fn pairs_in_punctured_cube() {
        let c = Arc::new(subset_poset(&["1", "2", "3"], false));
        let x = Diagram::constant(c.clone(), Arc::new(ordinal(1)));
        let u = degree_layer(&c, 1).unwrap();
        let iso = lemma_indgrot_iso(&x, &u, &budget()).unwrap();
        assert!(iso.report.pass);
        assert_eq!(iso.report.left_objects, iso.report.right_objects);
        assert_eq!(iso.report.left_morphisms, iso.report.right_morphisms);
    }

    #[test]
    fn non_constant_transition() {
        // X_0 = [1] → X_1 = [1] constant at 1, U = {0}
        let base = Arc::new(ordinal(1));
        let i1 = Arc::new(ordinal(1));
        let c1 = Functor::constant(i1.clone(), i1.clone(), 1);
        let trans = base
            .morphisms()
            .map(|a| if base.is_identity(a) { Functor::identity(i1.clone()) } else { c1.clone() })
            .collect();
        let x = Diagram::new(base.clone(), vec![i1.clone(), i1.clone()], trans).unwrap();
        let iso = lemma_indgrot_iso(&x, &[0], &budget()).unwrap();
        assert!(iso.report.pass);
        // Ψ at id is a point x of X_0; at 0 → 1 it is a functor [1] → X_1
        // sending the root to X(0→1)(x) = 1, so only the constant one
        assert_eq!(iso.report.left_objects, 2);
        assert_eq!(iso.report.left_morphisms, 3);
    }
}

use std::sync::Arc;

use super::group::{Element, FinGroup, Subgroup};
use crate::error::{Error, Result};
use crate::fincat::{same_category, subcategory, Diagram, FinCategory, Functor, ObjId, UnionUnder};
use crate::holim::{induced_over_functor, OverDiagram};
use crate::validation::{ValidationReport, Violation};

/// A group acting on a category by automorphisms, `action[g] : C → C`.
#[derive(Clone, Debug)]
pub struct CategoryGAction {
    pub group: FinGroup,
    pub carrier: Arc<FinCategory>,
    pub action: Vec<Functor>,
}

fn same_functor(a: &Functor, b: &Functor) -> bool {
    a.object_map() == b.object_map() && a.morphism_map() == b.morphism_map()
}

impl CategoryGAction {
    pub fn new(group: FinGroup, carrier: Arc<FinCategory>, action: Vec<Functor>) -> Result<Self> {
        if action.len() != group.order() {
            return Err(Error::Malformed(format!(
                "{} action functors for a group of order {}",
                action.len(),
                group.order()
            )));
        }
        for f in &action {
            if !same_category(f.source(), &carrier) || !same_category(f.target(), &carrier) {
                return Err(Error::Malformed("action functor is not an endofunctor of the carrier".into()));
            }
        }
        Ok(CategoryGAction { group, carrier, action })
    }

    pub fn trivial(group: FinGroup, carrier: Arc<FinCategory>) -> Self {
        let action = group.elements().map(|_| Functor::identity(carrier.clone())).collect();
        CategoryGAction { group, carrier, action }
    }

    /// An action on a thin category given by object permutations.
    pub fn from_object_maps(group: FinGroup, carrier: Arc<FinCategory>, maps: Vec<Vec<ObjId>>) -> Result<Self> {
        let action = maps
            .into_iter()
            .map(|objects| {
                let morphisms = carrier
                    .morphisms()
                    .map(|m| {
                        let hom = carrier.hom(objects[carrier.src(m)], objects[carrier.tgt(m)]);
                        match hom {
                            [one] => Ok(*one),
                            _ => Err(Error::precondition("object map does not determine a functor on a thin category")),
                        }
                    })
                    .collect::<Result<_>>()?;
                Functor::new(carrier.clone(), carrier.clone(), objects, morphisms)
            })
            .collect::<Result<_>>()?;
        CategoryGAction::new(group, carrier, action)
    }

    pub fn act(&self, g: Element) -> &Functor {
        &self.action[g]
    }

    /// The action of a subgroup; its group keeps the parent's element names.
    pub fn restrict(&self, h: &Subgroup) -> CategoryGAction {
        CategoryGAction {
            group: self.group.subgroup_group(h),
            carrier: self.carrier.clone(),
            action: h.members.iter().map(|&a| self.action[a].clone()).collect(),
        }
    }

    /// Elements sending the set `objects` to itself.
    pub fn stabilizer(&self, objects: &[ObjId]) -> Subgroup {
        let members = self
            .group
            .elements()
            .filter(|&g| {
                let mut image: Vec<ObjId> = objects.iter().map(|&o| self.action[g].obj(o)).collect();
                let mut orig = objects.to_vec();
                image.sort_unstable();
                orig.sort_unstable();
                image == orig
            })
            .collect();
        Subgroup { members }
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup {
            members: self.group.elements().collect(),
        }
    }

    pub fn same_as(&self, other: &CategoryGAction) -> bool {
        self.group.elements == other.group.elements
            && self.group.mul == other.group.mul
            && same_category(&self.carrier, &other.carrier)
            && self.action.iter().zip(&other.action).all(|(a, b)| same_functor(a, b))
    }
}

pub fn validate_g_action(a: &CategoryGAction) -> ValidationReport {
    let mut r = ValidationReport::new("group action");
    let g = &a.group;
    for x in g.elements() {
        let f = &a.action[x];
        for v in f.check().violations {
            r.push(Violation::ActionFunctor {
                element: g.name(x).to_string(),
                inner: Box::new(v),
            });
        }
    }
    if !a.action[g.identity()].is_identity() {
        r.push(Violation::ActionUnit);
    }
    for x in g.elements() {
        for y in g.elements() {
            let composite = a.action[x].after(&a.action[y]);
            if !composite.is_ok_and(|c| same_functor(&c, &a.action[g.mul(x, y)])) {
                r.push(Violation::ActionComposition {
                    g: g.name(x).to_string(),
                    h: g.name(y).to_string(),
                });
            }
        }
    }
    r
}

/// Objects and morphisms fixed by every element of `h`, with the inclusion.
pub fn fixed_category(a: &CategoryGAction, h: &Subgroup) -> Result<(Arc<FinCategory>, Functor)> {
    let h = a.group.check_subgroup(&h.members)?;
    let c = &a.carrier;
    let objects: Vec<ObjId> = c.objects().filter(|&o| h.members.iter().all(|&g| a.action[g].obj(o) == o)).collect();
    let morphisms: Vec<usize> = c
        .morphisms()
        .filter(|&m| h.members.iter().all(|&g| a.action[g].mor(m) == m))
        .collect();
    Ok(subcategory(c, &objects, &morphisms))
}

/// A diagram with structure functors `structure[g][i] : X_i → X_{gi}`.
#[derive(Clone, Debug)]
pub struct GDiagram {
    pub action: CategoryGAction,
    pub diagram: Diagram,
    pub structure: Vec<Vec<Functor>>,
}

impl GDiagram {
    pub fn new(action: CategoryGAction, diagram: Diagram, structure: Vec<Vec<Functor>>) -> Result<Self> {
        if !same_category(&action.carrier, diagram.base()) {
            return Err(Error::Malformed("action and diagram live on different categories".into()));
        }
        let n = diagram.base().num_objects();
        if structure.len() != action.group.order() || structure.iter().any(|row| row.len() != n) {
            return Err(Error::Malformed("structure maps do not cover every element and object".into()));
        }
        Ok(GDiagram {
            action,
            diagram,
            structure,
        })
    }

    /// Identity structure maps; needs `X_{gi} = X_i` for every `g` and `i`.
    pub fn with_identity_structure(action: CategoryGAction, diagram: Diagram) -> Result<Self> {
        let base = diagram.base().clone();
        let structure = action
            .group
            .elements()
            .map(|g| {
                base.objects()
                    .map(|i| {
                        let (a, b) = (diagram.vertex(i), diagram.vertex(action.action[g].obj(i)));
                        if !same_category(a, b) {
                            return Err(Error::precondition(format!(
                                "vertex at `{}` differs from its translate",
                                base.object_id(i)
                            )));
                        }
                        Ok(Functor::identity(a.clone()))
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        GDiagram::new(action, diagram, structure)
    }

    pub fn restrict(&self, h: &Subgroup) -> GDiagram {
        GDiagram {
            action: self.action.restrict(h),
            diagram: self.diagram.clone(),
            structure: h.members.iter().map(|&a| self.structure[a].clone()).collect(),
        }
    }

    pub fn component(&self, g: Element, i: ObjId) -> &Functor {
        &self.structure[g][i]
    }
}

pub fn validate_g_diagram(x: &GDiagram) -> ValidationReport {
    let mut r = validate_g_action(&x.action);
    r.subject = "G-diagram".into();
    let g = &x.action.group;
    let base = x.diagram.base();
    let name = |e: Element| g.name(e).to_string();
    let mut typed = true;
    for e in g.elements() {
        for i in base.objects() {
            let f = &x.structure[e][i];
            let gi = x.action.action[e].obj(i);
            if !same_category(f.source(), x.diagram.vertex(i)) || !same_category(f.target(), x.diagram.vertex(gi)) {
                typed = false;
                r.push(Violation::StructureEndpoints {
                    g: name(e),
                    object: base.object_id(i).to_string(),
                });
            }
        }
    }
    if !typed {
        return r;
    }
    for i in base.objects() {
        if !x.structure[g.identity()][i].is_identity() {
            r.push(Violation::StructureUnit {
                object: base.object_id(i).to_string(),
            });
        }
    }
    for a in g.elements() {
        for b in g.elements() {
            for i in base.objects() {
                let hi = x.action.action[b].obj(i);
                let composite = x.structure[a][hi].after(&x.structure[b][i]);
                if !composite.is_ok_and(|c| same_functor(&c, &x.structure[g.mul(a, b)][i])) {
                    r.push(Violation::StructureCocycle {
                        g: name(a),
                        h: name(b),
                        object: base.object_id(i).to_string(),
                    });
                }
            }
        }
    }
    for e in g.elements() {
        let act = &x.action.action[e];
        for m in base.morphisms() {
            let (i, j) = (base.src(m), base.tgt(m));
            let left = x.structure[e][j].after(x.diagram.transition(m));
            let right = x.diagram.transition(act.mor(m)).after(&x.structure[e][i]);
            let ok = matches!((left, right), (Ok(l), Ok(r)) if same_functor(&l, &r));
            if !ok {
                r.push(Violation::StructureNaturality {
                    g: name(e),
                    morphism: base.morphism_id(m).to_string(),
                });
            }
        }
    }
    r
}

/// Transports an action along a projection `P : C → I` that is faithful on
/// each hom-set: objects by the given maps, morphisms by `P(g m) = g P(m)`.
pub fn lift_action(
    source: &Arc<FinCategory>,
    projection: &Functor,
    base: &CategoryGAction,
    object_maps: Vec<Vec<ObjId>>,
) -> Result<CategoryGAction> {
    let action = object_maps
        .into_iter()
        .enumerate()
        .map(|(g, objects)| {
            let gb = &base.action[g];
            let morphisms = source
                .morphisms()
                .map(|m| {
                    let want = gb.mor(projection.mor(m));
                    source
                        .hom(objects[source.src(m)], objects[source.tgt(m)])
                        .iter()
                        .copied()
                        .find(|&n| projection.mor(n) == want)
                        .ok_or_else(|| Error::precondition("action does not lift along the projection"))
                })
                .collect::<Result<_>>()?;
            Ok(Functor::from_maps(source.clone(), source.clone(), objects, morphisms))
        })
        .collect::<Result<_>>()?;
    CategoryGAction::new(base.group.clone(), source.clone(), action)
}

/// The actions on `U ≤ I` and `U < I`, `(u, α) ↦ (gu, gα)`, for a group
/// stabilizing `U`.
pub fn union_under_actions(uu: &UnionUnder, base: &CategoryGAction) -> Result<(CategoryGAction, CategoryGAction)> {
    let missing = || Error::precondition("group does not stabilize U");
    let maps = |objs: &[(ObjId, usize)], find: &dyn Fn(ObjId, usize) -> Option<ObjId>| -> Result<Vec<Vec<ObjId>>> {
        base.group
            .elements()
            .map(|g| {
                let f = &base.action[g];
                objs.iter().map(|&(u, a)| find(f.obj(u), f.mor(a)).ok_or_else(missing)).collect()
            })
            .collect()
    };
    let leq = lift_action(
        &uu.leq,
        &uu.leq_projection,
        base,
        maps(&uu.leq_objects, &|u, a| uu.leq_object(u, a))?,
    )?;
    let lt = lift_action(
        &uu.lt,
        &uu.lt_projection,
        base,
        maps(&uu.lt_objects, &|u, a| uu.lt_object(u, a))?,
    )?;
    Ok((leq, lt))
}

/// `C/(−)` with structure maps `g_* : C/a → C/ga`.
pub fn overcat_g_diagram(over: &OverDiagram, action: &CategoryGAction) -> Result<GDiagram> {
    let structure = action
        .group
        .elements()
        .map(|g| {
            let f = &action.action[g];
            action
                .carrier
                .objects()
                .map(|a| induced_over_functor(f, &over.slices[a], &over.slices[f.obj(a)]))
                .collect::<Result<_>>()
        })
        .collect::<Result<_>>()?;
    GDiagram::new(action.clone(), over.diagram.clone(), structure)
}

/// `X ∘ P` for an equivariant `P`, with structure maps `g_{X, P(c)}`.
pub fn pullback_g(x: &GDiagram, along: &Functor, source_action: &CategoryGAction) -> Result<GDiagram> {
    if source_action.group.elements != x.action.group.elements {
        return Err(Error::precondition("pullback along a functor with a different group"));
    }
    for g in source_action.group.elements() {
        let left = along.after(&source_action.action[g])?;
        let right = x.action.action[g].after(along)?;
        if !same_functor(&left, &right) {
            return Err(Error::precondition("pullback functor is not equivariant"));
        }
    }
    let diagram = x.diagram.pullback(along)?;
    let structure = source_action
        .group
        .elements()
        .map(|g| {
            source_action
                .carrier
                .objects()
                .map(|c| x.structure[g][along.obj(c)].clone())
                .collect()
        })
        .collect();
    GDiagram::new(source_action.clone(), diagram, structure)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{ordinal, subset_poset};

    pub(crate) fn swap_square() -> CategoryGAction {
        let c = Arc::new(subset_poset(&["1", "2"], false));
        let id = |s: &str| c.object_index(s).unwrap();
        let swap = vec![id("{2}"), id("{1}"), id("{1,2}")];
        CategoryGAction::from_object_maps(FinGroup::cyclic(2), c.clone(), vec![(0..3).collect(), swap]).unwrap()
    }

    #[test]
    fn swap_is_an_action() {
        let a = swap_square();
        assert!(validate_g_action(&a).is_clean());
        let (fixed, _) = fixed_category(&a, &a.whole()).unwrap();
        assert_eq!(fixed.object_ids(), &["{1,2}".to_string()]);
        assert_eq!(fixed.num_morphisms(), 1);
        let (all, _) = fixed_category(&a, &Subgroup { members: vec![0] }).unwrap();
        assert_eq!(*all, *a.carrier);
    }

    #[test]
    fn swap_on_three_letters() {
        let c = Arc::new(subset_poset(&["1", "2", "3"], false));
        let ids: Vec<String> = c.object_ids().to_vec();
        let swap: Vec<ObjId> = ids
            .iter()
            .map(|s| {
                let t: String = s.chars().map(|ch| match ch {
                    '1' => '2',
                    '2' => '1',
                    other => other,
                }).collect();
                let mut parts: Vec<&str> = t.trim_matches(|ch| ch == '{' || ch == '}').split(',').collect();
                parts.sort_unstable();
                c.object_index(&format!("{{{}}}", parts.join(","))).unwrap()
            })
            .collect();
        let a = CategoryGAction::from_object_maps(FinGroup::cyclic(2), c.clone(), vec![(0..7).collect(), swap]).unwrap();
        assert!(validate_g_action(&a).is_clean());
        let (fixed, _) = fixed_category(&a, &a.whole()).unwrap();
        let mut got = fixed.object_ids().to_vec();
        got.sort();
        assert_eq!(got, ["{1,2,3}", "{1,2}", "{3}"]);
        // identities plus {3} ⊂ {1,2,3} and {1,2} ⊂ {1,2,3}
        assert_eq!(fixed.num_morphisms(), 5);
    }

    #[test]
    fn constant_g_diagram_and_broken_unit() {
        let a = swap_square();
        let x = Diagram::constant(a.carrier.clone(), Arc::new(ordinal(1)));
        let gx = GDiagram::with_identity_structure(a.clone(), x.clone()).unwrap();
        assert!(validate_g_diagram(&gx).is_clean());

        let i1 = x.vertex(0).clone();
        let flip = Functor::constant(i1.clone(), i1.clone(), 1);
        let mut structure = gx.structure.clone();
        structure[0][0] = flip;
        let bad = GDiagram::new(a, x, structure).unwrap();
        let r = validate_g_diagram(&bad);
        assert!(r.violations.contains(&Violation::StructureUnit { object: "{1}".into() }));
    }

    #[test]
    fn non_subgroup_is_rejected() {
        let a = CategoryGAction::trivial(FinGroup::cyclic(4), Arc::new(ordinal(1)));
        assert!(matches!(fixed_category(&a, &Subgroup { members: vec![0, 1] }), Err(Error::NotSubgroup(_))));
    }
}

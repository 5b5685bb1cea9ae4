use std::sync::Arc;

use super::functor::same_category;
use super::{FinCategory, Functor, MorId, ObjId};
use crate::error::{Error, Result};
use crate::validation::{ValidationReport, Violation};

/// A functor from a base category into finite categories: one vertex
/// category per base object and one transition functor per base morphism.
#[derive(Clone, Debug)]
pub struct Diagram {
    base: Arc<FinCategory>,
    vertices: Vec<Arc<FinCategory>>,
    transitions: Vec<Functor>,
}

impl Diagram {
    /// Checks shapes only; use [`Diagram::check`] for the functor laws.
    pub fn new(
        base: Arc<FinCategory>,
        vertices: Vec<Arc<FinCategory>>,
        transitions: Vec<Functor>,
    ) -> Result<Self> {
        if vertices.len() != base.num_objects() || transitions.len() != base.num_morphisms() {
            return Err(Error::Malformed(
                "diagram needs one vertex per base object and one transition per base morphism".into(),
            ));
        }
        Ok(Diagram {
            base,
            vertices,
            transitions,
        })
    }

    /// The diagram with every vertex `c` and every transition the identity.
    pub fn constant(base: Arc<FinCategory>, c: Arc<FinCategory>) -> Self {
        let id = Functor::identity(c.clone());
        Diagram {
            vertices: vec![c; base.num_objects()],
            transitions: vec![id; base.num_morphisms()],
            base,
        }
    }

    /// Restriction `X ∘ f` along a functor `f : J → base`.
    pub fn pullback(&self, f: &Functor) -> Result<Diagram> {
        if !same_category(f.target(), &self.base) {
            return Err(Error::precondition("restriction functor does not land in the base"));
        }
        let j = f.source();
        Ok(Diagram {
            base: j.clone(),
            vertices: j.objects().map(|o| self.vertices[f.obj(o)].clone()).collect(),
            transitions: j.morphisms().map(|m| self.transitions[f.mor(m)].clone()).collect(),
        })
    }

    pub fn base(&self) -> &Arc<FinCategory> {
        &self.base
    }

    pub fn vertex(&self, i: ObjId) -> &Arc<FinCategory> {
        &self.vertices[i]
    }

    pub fn vertices(&self) -> &[Arc<FinCategory>] {
        &self.vertices
    }

    pub fn transition(&self, m: MorId) -> &Functor {
        &self.transitions[m]
    }

    pub fn transitions(&self) -> &[Functor] {
        &self.transitions
    }

    pub fn check(&self) -> ValidationReport {
        let mut report = ValidationReport::new("diagram");
        let b = &*self.base;
        let mut typed = vec![true; b.num_morphisms()];
        for m in b.morphisms() {
            let t = &self.transitions[m];
            let name = b.morphism_id(m).to_string();
            if !same_category(t.source(), &self.vertices[b.src(m)])
                || !same_category(t.target(), &self.vertices[b.tgt(m)])
            {
                typed[m] = false;
                report.push(Violation::DiagramEndpoints { morphism: name });
                continue;
            }
            for v in t.check().violations {
                typed[m] = false;
                report.push(Violation::Transition {
                    morphism: name.clone(),
                    inner: Box::new(v),
                });
            }
        }
        for o in b.objects() {
            let id = b.identity(o);
            if typed[id] && !self.transitions[id].is_identity() {
                report.push(Violation::DiagramIdentity {
                    object: b.object_id(o).to_string(),
                });
            }
        }
        for f in b.morphisms() {
            for &g in b.out_of(b.tgt(f)) {
                let Some(gf) = b.try_compose(g, f) else { continue };
                if !(typed[f] && typed[g] && typed[gf]) {
                    continue;
                }
                let ok = match self.transitions[g].after(&self.transitions[f]) {
                    Ok(c) => c == self.transitions[gf],
                    Err(_) => false,
                };
                if !ok {
                    report.push(Violation::DiagramComposition {
                        g: b.morphism_id(g).to_string(),
                        f: b.morphism_id(f).to_string(),
                    });
                }
            }
        }
        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{ordinal, subset_poset};

    #[test]
    fn constant_diagram_is_clean() {
        let base = Arc::new(subset_poset(&["1", "2"], false));
        let d = Diagram::constant(base, Arc::new(ordinal(1)));
        assert!(d.check().is_clean());
    }

    #[test]
    fn non_identity_transition_at_identity_is_reported() {
        let base = Arc::new(ordinal(1));
        let one = Arc::new(ordinal(1));
        let mut transitions: Vec<Functor> = base
            .morphisms()
            .map(|_| Functor::identity(one.clone()))
            .collect();
        transitions[base.identity(0)] = Functor::constant(one.clone(), one.clone(), 1);
        let d = Diagram::new(base, vec![one.clone(), one], transitions).unwrap();
        let report = d.check();
        assert!(report
            .violations
            .contains(&Violation::DiagramIdentity { object: "0".into() }));
    }
}

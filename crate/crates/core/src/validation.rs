//! Axiom-violation reports shared by every structural validator.

use serde::Serialize;

/// One violated axiom, identified by the ids of the witnesses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    IdentityNotEndomorphism { object: String, morphism: String },
    MissingComposite { g: String, f: String },
    ComposeNotComposable { g: String, f: String },
    Typing { g: String, f: String, composite: String },
    LeftUnit { f: String },
    RightUnit { f: String },
    Associativity { h: String, g: String, f: String },

    FunctorTyping { morphism: String },
    FunctorIdentity { object: String },
    FunctorComposition { g: String, f: String },

    ComponentTyping { object: String },
    Naturality { morphism: String },

    DiagramEndpoints { morphism: String },
    DiagramIdentity { object: String },
    DiagramComposition { g: String, f: String },
    Transition { morphism: String, inner: Box<Violation> },

    GroupAssociativity { a: String, b: String, c: String },
    GroupUnit { element: String },
    GroupInverse { element: String },

    ActionUnit,
    ActionComposition { g: String, h: String },
    ActionFunctor { element: String, inner: Box<Violation> },

    StructureUnit { object: String },
    StructureCocycle { g: String, h: String, object: String },
    StructureEndpoints { g: String, object: String },
    StructureNaturality { g: String, morphism: String },

    SimplexShape { simplex: String },
    SimplicialIdentity { simplex: String, i: usize, j: usize },
    MapFace { simplex: String, face: usize },
}

/// List of violations for one checked value; empty iff every axiom holds.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub subject: String,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn new(subject: impl Into<String>) -> Self {
        ValidationReport {
            subject: subject.into(),
            violations: Vec::new(),
        }
    }

    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, violation: Violation) {
        self.violations.push(violation);
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

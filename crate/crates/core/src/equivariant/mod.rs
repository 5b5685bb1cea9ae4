//! Finite group actions on categories and diagrams.

mod action;
mod group;
mod grothendieck;
mod hom;

pub use action::{
    fixed_category, lift_action, overcat_g_diagram, pullback_g, union_under_actions, validate_g_action,
    validate_g_diagram, CategoryGAction, GDiagram,
};
pub use grothendieck::{
    conjugation_nerve_check, fu_g_diagram, grothendieck_g_action, lemma_equivariance, ElementCheck,
    LemmaEquivarianceReport, NerveCompatibility, NerveDim,
};
pub use group::{subgroups, validate_group, Element, FinGroup, Subgroup};
pub use hom::{
    conjugation_action, equivariant_matching, equivariant_reedy_check, fixed_hom_category, EquivariantMatching,
    EquivariantReedyReport, SubgroupRow, COCYCLE_CONVENTION,
};

//! Categorical models for homotopy limits: hom-categories of diagrams,
//! matching functors and the checks built on them.

mod csp;
mod cube;
mod grothendieck;
mod hom;
mod lemma;
pub(crate) mod lydakis;
mod matching;

pub use csp::Budget;
pub use hom::{
    constant_family_functor, holim_model, hom_category, induced_over_functor, HolimModel, overcat_diagram, precompose_functor, DiagramHom,
    FunctorMaps, Modification, OverDiagram,
};
pub use matching::{
    matching_functor, quillen_b_check, reedy_qf_check, Matching, MorphismVerdict, ObjectCheck, QuillenBReport,
    ReedyReport,
};
pub use grothendieck::{
    barwick_kan, barwick_kan_to_grothendieck, compare_cospan_models, cospan_shape, grothendieck, hom_to_barwick_kan,
    slice_product_diagram, BarwickKan, Cospan, CospanComparison, Grothendieck, SliceProductDiagram,
};
pub use lemma::{f_u_functor, lemma_indgrot_iso, LemmaIso, LemmaReport, Member, FU};
pub use lydakis::{lydakis_check, lydakis_check_capped, LydakisDim, LydakisReport};
pub use cube::{
    bn_condition_count, cofinality_check, cube_cartesian_check, cube_elements, cube_matching, cube_total_fiber,
    lambda_functor, slice_contractibility, theorem_bn_conditions, union_initial_objects, BnCondition, BnReport,
    CofinalityReport, CubeReport, FiberCheck, InitialCheck, Lambda, SliceCheck, UNVERIFIED,
};

//! Local artinian test algebras and the deformation functor `R ↦ MC(m_R ⊗ g)/gauge`
//! at the level of sets.

mod artin;
mod mc;
mod poly;
mod spec;

pub use artin::{
    fiber_product, smallness_certificate, validate_artin, AlgebraSurjection, ArtinAlgebra, ArtinAlgebraData, ArtinReport,
    ElementaryStep, FiberProduct, ProductTriple, SmallnessCertificate,
};
pub use mc::{
    gauge_action, gauge_quotient, mc_elements, mc_fiber_product_check, mc_system, push_forward, tangent_space, tensor_dgla,
    tensor_map, Convention, DeformationValue, FiberProductCheck, GaugeOrbits, LiftBranch, LiftStage, LiftTree, MCElements,
    MCSolution, MCSystem, Obstruction, TangentSpace, TensorDgla,
};
pub use poly::{parse_monomial, Exponent, Polynomial};
pub use spec::{spec_points, zariski_tangent, Presentation, PresentationBounds, SolutionSet, SpecPoints, ZariskiTangent};

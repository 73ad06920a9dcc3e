//! Nilpotent orbits: cones, sl2 triples, grading operators, cone regions and
//! Hodge-norm growth.

pub mod cone;
pub mod grading;
pub mod jm;
pub mod norm;
pub mod region;

pub use cone::{elliptic_cone, product_elliptic_cone, NilpotentCone, OrbitFrame};
pub use grading::{grading_operator, GradingOperator};
pub use jm::{jacobson_morozov, jordan_chains, Sl2Triple};
pub use norm::{hodge_norm, hodge_norm_sq, norm_growth_exponents, GrowthFit, RaySpec};
pub use region::{
    classify_cone_region, standard_k_sequence, validate_k_sequence, ConeRegion,
    RegionClassification,
};

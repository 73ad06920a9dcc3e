//! Weight filtrations, mixed Hodge structures and Deligne splittings.

pub mod cone;
#[cfg(any(test, feature = "test-oracles"))]
pub mod oracle;
pub mod splitting;
pub mod verify;
pub mod weight;

pub use cone::{cone_filtration_invariance, ConeInvarianceReport};
pub use splitting::{DeligneSplitting, MixedHodgeStructure};
pub use verify::{verify_polarized_mhs, PolarizedMhsReport};
pub use weight::{
    primitive_decomposition, relative_weight_filtration, shifted_weight_filtration,
    verify_weight_filtration, weight_filtration, LefschetzPiece,
};

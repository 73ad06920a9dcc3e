//! Exact and high-precision linear algebra for Hodge-theoretic computations.
//!
//! The crate provides three layers:
//!
//! * scalar towers: exact rationals, Gaussian rationals and arbitrary-precision
//!   complex floats ([`scalar`], [`numeric`]);
//! * subspace, filtration and bilinear-form primitives with canonical echelon
//!   representatives ([`matrix`], [`subspace`], [`filtration`], [`bilinear`]);
//! * the Hodge-theoretic algorithms built on top of them: pure polarized Hodge
//!   structures ([`hodge`]), weight filtrations, Deligne splittings and the
//!   delta operator ([`mixed`]), and nilpotent-orbit asymptotics ([`orbit`]).
//!
//! Everything in the exact layer is decidable: subspace equality is equality of
//! reduced row echelon bases and all verification routines re-check their
//! defining properties before returning.

pub mod bilinear;
pub mod convert;
pub mod error;
pub mod filtration;
pub mod hodge;
pub mod io;
pub mod matrix;
pub mod mixed;
pub mod numeric;
pub mod orbit;
pub mod scalar;
pub mod subspace;

pub use bilinear::{BilinearForm, Parity};
pub use error::CoreError;
pub use filtration::{Direction, Filtration};
pub use hodge::{HodgeDecomposition, HodgeRiemannReport, PureHodgeStructure, WeilOperator};
pub use matrix::Matrix;
pub use mixed::{DeligneSplitting, MixedHodgeStructure};
pub use numeric::{BigComplex, BigReal};
pub use orbit::{ConeRegion, NilpotentCone, OrbitFrame, Sl2Triple};
pub use scalar::{GaussRational, Rational, Scalar};
pub use subspace::Subspace;

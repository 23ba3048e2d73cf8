//! Orbit closedness for linear actions of complex reductive groups.
//!
//! A vector `v` has a closed `G`-orbit exactly when the orbit meets the zero
//! set of the moment map `μ`. This crate searches for such a zero by
//! descending the norm along the orbit, and backs the numeric verdict with
//! exact one-parameter-subgroup oracles for tori and for SL(2) acting on
//! binary forms.
//!
//! Linear algebra is generic over the coefficient field: exact Gaussian
//! rationals (`Complex<BigRational>`) for oracles and `Complex<f64>` for the
//! optimizer. The aliases below fix the two modes used throughout.

pub mod cli;
pub mod criteria;
pub mod error;
pub mod hilbert_mumford;
pub mod identities;
pub mod kempf_ness;
pub mod linalg;
pub mod moment;
pub mod representation;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::GaussianRational;

use num_rational::BigRational;

/// Exact vector with Gaussian-rational coordinates.
pub type ExactVector = linalg::ComplexVector<BigRational>;
/// Double-precision complex vector.
pub type FloatVector = linalg::ComplexVector<f64>;
/// Exact Gaussian-rational matrix.
pub type ExactMatrix = linalg::ComplexMatrix<BigRational>;
/// Double-precision complex matrix.
pub type FloatMatrix = linalg::ComplexMatrix<f64>;

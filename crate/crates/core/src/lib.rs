//! Abeliants of matrix families, the abstract Abel map on Segre matrices,
//! and an elementary model of the Jacobian of a hyperelliptic curve over a
//! prime field.

pub mod abeliant;
pub mod algebra;
pub mod curve;
pub mod elliptic_numeric;
pub mod error;
pub mod identities;
pub mod io;
pub mod jacobian;
pub mod matrix;
pub mod scalar;
pub mod segre;

pub use error::{Error, Result};
pub use scalar::Fp;

/// Matrices over a prime field.
pub type FpMat = matrix::Mat<Fp>;
/// Slot-tagged polynomials over a prime field.
pub type FpPoly = algebra::Poly<Fp>;
pub type FpPolyMat = matrix::Mat<FpPoly>;
pub type FpSegreMatrix = segre::SegreMatrix<Fp>;
pub type FpJacobiMat = segre::JacobiMat<Fp>;
pub type RationalMat = matrix::Mat<num_rational::BigRational>;
pub type ComplexMat = matrix::Mat<num_complex::Complex64>;

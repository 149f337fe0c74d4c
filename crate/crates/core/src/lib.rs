//! Exact decision procedures for linear equations over data vectors.

pub mod cli;
pub mod combinatorics;
pub mod datavec;
pub mod error;
pub mod format;
pub mod histogram;
pub mod linalg;
pub mod linpn;
pub mod matrix;
pub mod reductions;
pub mod scalar;
pub mod semieq;
pub mod solvers;

pub use error::{Error, Result};
pub use linalg::LinearSystem;
pub use matrix::Matrix;
pub use scalar::Scalar;

/// Arbitrary-precision rational, the default scalar.
pub type Rat = num_rational::BigRational;
pub type RatVec = Vec<Rat>;
pub type RatMat = Matrix<Rat>;
pub type LinSys = LinearSystem<Rat>;

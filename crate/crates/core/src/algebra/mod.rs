//! Exact arithmetic kernel: Gaussian rationals, sparse polynomials,
//! truncated power series and dense linear algebra.

mod gaussian;
pub mod linalg;
mod monomial;
mod poly;
mod trunc;

pub use gaussian::GaussianRational;
pub use linalg::{Matrix, UniPoly};
pub use monomial::{Monomial, Vars, LAMBDA};
pub use poly::MultiPoly;
pub use trunc::TruncSeries;

//! Structured Donaldson series of 4-manifolds.
//!
//! A Donaldson series is stored in its two-sector exponential-polynomial form
//!
//! ```text
//! e^{Q(t)/2 + 2λ} Σ p_K(t, λ) e^{K·t}  +  e^{-Q(t)/2 - 2λ} Σ q_K(t, λ) e^{i K·t}
//! ```
//!
//! with exact Gaussian-rational coefficients. On top of that sit the
//! insertion operators, the blow-up / recoloring calculus, the Fukaya-Floer
//! annihilator constraints and exact recovery of the structured form from a
//! truncated expansion.

pub mod algebra;
pub mod cli;
pub mod error;
pub mod hff;
pub mod insertion;
pub mod lattice;
pub mod series;
pub mod structfit;
pub mod transforms;

pub use algebra::{GaussianRational, Monomial, MultiPoly, TruncSeries, Vars};
pub use error::{Error, Result};
pub use lattice::{CohClass, Lattice, ManifoldData};
pub use series::{DonaldsonSeries, OneCycleWord, Sector, SeriesFlags};

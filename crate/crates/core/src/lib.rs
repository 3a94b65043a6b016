//! Exact computer algebra for Poisson-like cohomology of Lie superalgebras.
//!
//! The engine works over two finite-dimensional Lie superalgebras attached to a
//! Lie algebra 𝔪: the multivector side Λ•𝔪 with the Schouten bracket, and the
//! form side Λ•𝔪* with the bracket [α,β] = (−1)ᵃ d(α∧β). A square-zero graded
//! operator (d_π, d_φ, the dual δ, or the exterior derivative itself) yields
//! cohomology groups whose dimensions are computed exactly over the rationals,
//! with symbolic parameters carried as multivariate polynomial coefficients.
//!
//! Modules:
//! - [`scalars`]: arbitrary-precision rationals and sparse parameter polynomials.
//! - [`liealg`]: structure constants, axiom checking, the Lie bracket.
//! - [`exterior`]: multi-indices, wedge products, the dual pairing, volume duality.
//! - [`schouten`]: the Schouten bracket on Λ•𝔪 and the coboundary d_π.
//! - [`forms`]: the Chevalley–Eilenberg differential and the operators d_φ.
//! - [`cohomology`]: operator matrices, exact rank, Betti reports, the
//!   alternating-sum invariant.
//! - [`duality`]: the dual coboundary δ and double-complex reports.
//! - [`polyfield`]: multivector fields and forms on ℝⁿ with homogeneous
//!   polynomial coefficients.
//! - [`cli`]: the command-line front-end.

pub mod cli;
pub mod cohomology;
pub mod duality;
pub mod exterior;
pub mod forms;
pub mod liealg;
pub mod polyfield;
pub mod scalars;
pub mod schouten;

mod error;

pub use error::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

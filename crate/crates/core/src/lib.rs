//! Spectral toolkit for two-dimensional normal Ornstein-Uhlenbeck operators.
//!
//! The generator of the complex OU process `dZ = -(r + iΩ) Z dt + sqrt(2σ²) dζ`
//! is a normal (non-symmetric) operator on `L²(μ)` whose eigenfunctions are the
//! Hermite-Laguerre-Ito polynomials `J_{m,n}(z, ρ)` with `ρ = 2σ²/r`.
//! This crate provides:
//!
//! * [`special_fns`]: real Hermite, Laguerre and integer-order Bessel functions.
//! * [`hlito_poly`]: exact sparse algebra in `z`, `z̄` ([`ComplexPoly`]), the
//!   polynomials `J_{m,n}`, creation/annihilation operators and the generator.
//! * [`spectral`]: the tridiagonal eigenproblem on each eigenspace level and the
//!   change of basis between Hermite products and `J_{m,n}`.
//! * [`expansion`]: Gauss-Hermite quadrature for `μ`, inner products, series
//!   expansions and Parseval sums.
//! * [`mehler`]: the OU semigroup, its closed-form Mehler kernel and eigen-series.
//! * [`simulate`]: exact-discretization Monte Carlo, complex Brownian martingales
//!   and the circle-lattice normal decomposition.
//! * [`cli`]: the `hlito` batch command line.

pub mod cli;
mod combinatorics;
pub mod error;
pub mod expansion;
pub mod hlito_poly;
pub mod mehler;
mod params;
pub mod simulate;
pub mod special_fns;
pub mod spectral;

pub use error::{Error, Result};
pub use expansion::{QuadratureGrid, SampledFn};
pub use hlito_poly::{hlito, hlito_by_creation, ComplexPoly};
pub use num_complex::Complex64;
pub use params::OUParams;
pub use spectral::EigenIndex;

/// Library version embedded in every CLI output.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

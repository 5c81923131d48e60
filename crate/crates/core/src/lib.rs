//! Spectral-Galerkin solvers for the coupled fractional system
//!
//! ```text
//! 𝒜ˢu = |v|^{p−1}v,   𝒜ˢv = f(u)   in Ω,     u = v = 0 on ∂Ω,
//! ```
//!
//! on boxes `Ω ⊂ ℝⁿ`, `n ≤ 3`, where `𝒜ˢ` is the spectral fractional power of
//! the Dirichlet Laplacian. The power system uses `f(u) = (u⁺)^q` and
//! `(v⁺)^p` in the first equation.
//!
//! Numeric code is generic over [`scalar::Real`] (`f32`, `f64`); parameter
//! classification and hypothesis gates are generic over [`scalar::Ordered`],
//! which also covers exact rationals.

pub mod energy;
pub mod error;
pub mod scalar;
pub mod solvers;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};

/// Exact rational scalar for classification and gates.
pub type Rational = num_rational::Ratio<i64>;

pub type Domain64 = spectral::Domain<f64>;
pub type Basis64 = spectral::Basis<f64>;
pub type Field64 = spectral::SpectralField<f64>;
pub type Nodal64 = spectral::NodalField<f64>;
pub type Params64 = energy::PowerParams<f64>;
pub type ExactParams = energy::PowerParams<Rational>;
pub type Nonlinearity64 = energy::Nonlinearity<f64>;
pub type Options64 = solvers::SolveOptions<f64>;
pub type Report64 = solvers::SolverReport<f64>;

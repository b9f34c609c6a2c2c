//! Zero-mean periodic traveling waves of the fractional Korteweg–de Vries equation
//!
//! ```text
//! u_t + 2 u u_x - (D^α u)_x = 0,   x ∈ [-π, π],   D^α ↔ |m|^α
//! ```
//!
//! A traveling wave `u = ψ(x - ct)` with zero mean solves the closed boundary-value problem
//! `D^α ψ + c ψ = Π₀ ψ²` and induces the constant `b(c) = (1/2π) ∫ ψ²`. The crate computes these
//! waves for `α ∈ (1/3, 2]`, traces the existence curve `c ↦ b(c)`, and classifies each wave's
//! spectral stability from the sign of `b'(c)`, cross-checked by direct eigenvalue computations.
//!
//! Module map:
//!
//! * [`fourier`]: grids on the torus, transforms, the fractional multiplier, quadrature.
//! * [`special`]: elliptic integrals, Jacobi `cn`, and the exact BO / KdV periodic waves.
//! * [`stokes`]: small-amplitude expansions used as seeds and order-of-accuracy oracles.
//! * [`galileo`]: the map between normalized waves `(ω, φ)` and zero-mean waves `(c, b, ψ)`.
//! * [`solvers`]: Petviashvili, Newton, a constrained variational minimizer, and continuation in `c`.
//! * [`stability`]: the truncated linearized operator, eigenvalue counts, `b'(c)`, the constraint
//!   matrices and the spectrum of `∂ₓL`.

pub mod error;
pub mod fourier;
pub mod galileo;
pub mod series;
pub mod solvers;
pub mod special;
pub mod stability;
pub mod stokes;

pub use error::{FkdvError, Result};
pub use fourier::{FourierGrid, PeriodicField};
pub use galileo::{NormalizedWave, WaveDiagnostics, ZeroMeanWave};
pub use series::CosineSeries;
pub use solvers::{Branch, BranchPoint, SolverConfig};
pub use stability::{OperatorMatrix, StabilityVerdict, VerdictKind};

/// Threshold `log 3 / log 2 - 1` separating super- from subcritical small-amplitude bifurcation.
pub fn alpha_0() -> f64 {
    3f64.ln() / 2f64.ln() - 1.0
}

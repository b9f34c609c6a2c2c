//! Solvers for the stationary problems and continuation of the wave family in `c`.

mod continuation;
mod newton;
mod petviashvili;
mod variational;

pub use continuation::{continue_branch, Branch, BranchMetadata, BranchPoint, PointKind};
pub use newton::{
    newton_c_series, newton_fixed_amplitude, newton_fixed_c, newton_fixed_omega, newton_omega_series, newton_solve,
    solve_resolved, Fixed, NewtonReport,
};
pub use petviashvili::{petviashvili_report, petviashvili_solve, PetviashviliReport};
pub use variational::{variational_minimize, variational_report, VariationalReport};

use serde::{Deserialize, Serialize};

use crate::error::{FkdvError, Result};
use crate::galileo::{NormalizedWave, ZeroMeanWave};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Max-norm residual, relative to `max(1, ‖ψ‖∞)`, accepted as converged.
    pub residual_tol: f64,
    pub newton_max_iter: usize,
    pub petviashvili_max_iter: usize,
    pub petviashvili_exponent: f64,
    /// Largest coefficient allowed among the last `tail_window` modes.
    pub tail_tol: f64,
    pub tail_window: usize,
    /// Bounds on the number of collocation points `N`.
    pub n_min: usize,
    pub n_max: usize,
    /// Largest continuation step, relative to `max(1, |c|)`.
    pub continuation_step: f64,
    pub step_min: f64,
    pub zero_tol: f64,
    /// Half-width of the centered differences along the branch.
    pub fd_step: f64,
    /// Recount eigenvalues with `K → 2K` at every branch point.
    pub check_doubling: bool,
    /// Bracket width at which fold and stability-transition bisection stops.
    pub refine_tol: f64,
    /// Pivot ratio of the Newton Jacobian beyond which a solve is treated as a fold.
    pub condition_limit: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            residual_tol: 1e-10,
            newton_max_iter: 50,
            petviashvili_max_iter: 10_000,
            petviashvili_exponent: 2.0,
            tail_tol: 1e-8,
            tail_window: 10,
            n_min: 64,
            n_max: 8192,
            continuation_step: 0.05,
            step_min: 1e-4,
            zero_tol: 1e-6,
            fd_step: 1e-3,
            check_doubling: true,
            refine_tol: 1e-9,
            condition_limit: 1e10,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("residual_tol", self.residual_tol),
            ("tail_tol", self.tail_tol),
            ("continuation_step", self.continuation_step),
            ("step_min", self.step_min),
            ("zero_tol", self.zero_tol),
            ("fd_step", self.fd_step),
            ("refine_tol", self.refine_tol),
            ("petviashvili_exponent", self.petviashvili_exponent),
            ("condition_limit", self.condition_limit),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(FkdvError::InvalidArgument(format!("{name} must be positive, got {v}")));
            }
        }
        if !self.n_min.is_multiple_of(2) || !self.n_max.is_multiple_of(2) || self.n_min < 8 || self.n_min > self.n_max {
            return Err(FkdvError::InvalidArgument(format!(
                "need even 8 <= n_min <= n_max, got {}..{}",
                self.n_min, self.n_max
            )));
        }
        if self.tail_window == 0 || 2 * self.tail_window >= self.n_min {
            return Err(FkdvError::InvalidArgument(format!(
                "tail_window {} must be positive and below n_min/2",
                self.tail_window
            )));
        }
        if self.newton_max_iter == 0 || self.petviashvili_max_iter == 0 {
            return Err(FkdvError::InvalidArgument("iteration limits must be positive".into()));
        }
        Ok(())
    }
}

/// Either form of a traveling wave.
#[derive(Clone, Debug)]
pub enum Wave {
    Normalized(NormalizedWave),
    ZeroMean(ZeroMeanWave),
}

/// Max-norm residual of the stationary equation the wave is meant to satisfy.
pub fn residual(w: &Wave) -> f64 {
    match w {
        Wave::Normalized(n) => n.residual(),
        Wave::ZeroMean(z) => z.residual(),
    }
}

/// Scale used in relative residuals.
pub(crate) fn residual_scale(max_abs: f64) -> f64 {
    max_abs.max(1.0)
}

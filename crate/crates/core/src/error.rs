use thiserror::Error;

pub type Result<T> = std::result::Result<T, FkdvError>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum FkdvError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Negative exponents of the fractional multiplier are not supported.
    #[error("unsupported symbol |m|^{alpha}: alpha must be non-negative")]
    UnsupportedSymbol { alpha: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("grid mismatch: {left} vs {right} collocation points")]
    GridMismatch { left: usize, right: usize },

    /// The iterate is (numerically) a constant function.
    #[error("constant wave with omega = {omega}: no single-lobe profile")]
    ConstantWave { omega: f64 },

    #[error(
        "Petviashvili iteration did not converge after {iterations} steps (M = {factor}, residual = {residual:e})"
    )]
    Divergence { iterations: usize, factor: f64, residual: f64 },

    #[error("Petviashvili iteration collapsed to the constant solution phi = {omega}")]
    ConvergedToConstant { omega: f64 },

    /// The Jacobian is too ill-conditioned for a reliable Newton step.
    #[error("near-singular Jacobian (condition estimate {condition:e}) at parameter {parameter}")]
    NearFold { parameter: f64, condition: f64 },

    #[error("Newton iteration failed after {iterations} steps (residual {residual:e})")]
    NewtonFailed { iterations: usize, residual: f64 },

    #[error("variational descent stagnated (gradient norm {gradient:e} after {iterations} steps)")]
    Stagnation { iterations: usize, gradient: f64 },

    #[error("continuation step underflow at c = {c} (step {step:e})")]
    StepUnderflow { c: f64, step: f64 },

    #[error("under-resolved profile: spectral tail {tail:e} exceeds {tolerance:e} with {modes} modes")]
    Resolution { modes: usize, tail: f64, tolerance: f64 },

    /// `L|X₀` has an even null vector besides the translation mode.
    #[error("degenerate kernel of the restricted operator (smallest singular value {smallest:e})")]
    DegenerateKernel { smallest: f64 },

    #[error("linear algebra failure: {0}")]
    LinearAlgebra(String),
}

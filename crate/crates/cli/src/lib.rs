//! Orchestration behind the `fkdv` binary: branch tracing, verification suites, spectra, and
//! CSV / JSON / SVG output.

pub mod config;
pub mod plot;
pub mod run;
pub mod table;
pub mod verify;

pub use config::{Command, Format, Method, RunConfig};
pub use run::{run, run_exact, run_spectrum, run_stokes, run_trace, run_verify, Outcome};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("solver abort: {0}")]
    Solver(String),
    #[error("verification failed: {0}")]
    Verify(String),
    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
}

impl CliError {
    /// 0 success, 1 verification failure, 2 solver abort, 3 config error.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Verify(_) => 1,
            CliError::Solver(_) | CliError::Io { .. } => 2,
            CliError::Config(_) | CliError::Parse { .. } => 3,
        }
    }
}

impl From<fkdv::FkdvError> for CliError {
    fn from(e: fkdv::FkdvError) -> Self {
        CliError::Solver(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub(crate) fn io_err(path: &std::path::Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.display().to_string(), source }
}

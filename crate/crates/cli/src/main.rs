use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fkdv_cli::config::{parse_c_range, parse_formats};
use fkdv_cli::{run, CliError, Command, Method, RunConfig};

/// Periodic traveling waves of the fractional KdV equation: existence curves and stability.
///
/// Exit status: 0 success, 1 verification failure, 2 solver abort, 3 config error.
#[derive(Parser)]
#[command(name = "fkdv", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Trace the branch c -> b(c) and classify every point.
    Trace(Common),
    /// Run the oracle suites and write a pass/fail report.
    Verify(Common),
    /// Compare solver output against the small-amplitude expansion.
    Stokes(Common),
    /// Lowest eigenvalues of L and rightmost eigenvalues of d/dx L at one speed.
    Spectrum(Common),
    /// Tabulate the closed-form waves (alpha = 1 or 2).
    Exact(Common),
}

#[derive(Args)]
struct Common {
    /// Dispersion exponent, in (1/3, 2].
    #[arg(long, allow_negative_numbers = true)]
    alpha: f64,
    /// Speed interval lo:hi.
    #[arg(long, allow_hyphen_values = true)]
    c_range: Option<String>,
    /// Speed for `spectrum`.
    #[arg(long, allow_negative_numbers = true)]
    c: Option<f64>,
    /// Starting number of collocation points N (even).
    #[arg(long)]
    modes: Option<usize>,
    /// Largest N before the solve is abandoned.
    #[arg(long)]
    n_max: Option<usize>,
    /// Relative residual accepted by the solvers.
    #[arg(long)]
    tol: Option<f64>,
    /// Largest coefficient allowed in the spectral tail.
    #[arg(long, default_value_t = 1e-8)]
    tail_tol: f64,
    /// Relative threshold for zero eigenvalues.
    #[arg(long)]
    zero_tol: Option<f64>,
    #[arg(long, default_value = "newton")]
    method: String,
    /// Largest continuation step, relative to max(1, |c|).
    #[arg(long)]
    step: Option<f64>,
    /// Skip the eigenvalue recount with twice the modes.
    #[arg(long)]
    no_doubling: bool,
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Comma-separated subset of csv,json,svg.
    #[arg(long, default_value = "csv,json")]
    format: String,
}

fn build(command: Command, a: Common) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::new(command, a.alpha);
    if let Some(r) = a.c_range {
        (cfg.c_min, cfg.c_max) = parse_c_range(&r)?;
    }
    cfg.c = a.c;
    if let Some(n) = a.modes {
        cfg.solver.n_min = n;
    }
    if let Some(n) = a.n_max {
        cfg.solver.n_max = n;
    }
    if let Some(t) = a.tol {
        cfg.solver.residual_tol = t;
    }
    cfg.solver.tail_tol = a.tail_tol;
    if let Some(t) = a.zero_tol {
        cfg.solver.zero_tol = t;
    }
    if let Some(h) = a.step {
        cfg.solver.continuation_step = h;
    }
    cfg.solver.check_doubling = !a.no_doubling;
    cfg.method = a.method.parse::<Method>()?;
    cfg.output_dir = a.out;
    cfg.formats = parse_formats(&a.format)?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (command, args) = match cli.command {
        Sub::Trace(a) => (Command::Trace, a),
        Sub::Verify(a) => (Command::Verify, a),
        Sub::Stokes(a) => (Command::Stokes, a),
        Sub::Spectrum(a) => (Command::Spectrum, a),
        Sub::Exact(a) => (Command::Exact, a),
    };
    let result = build(command, args).and_then(|cfg| run(&cfg));
    match result {
        Ok(out) => {
            for f in &out.files {
                println!("wrote {}", f.display());
            }
            println!("{}", out.summary);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("fkdv: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::str::FromStr;

use fkdv::solvers::SolverConfig;

use crate::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Trace,
    Verify,
    Stokes,
    Spectrum,
    Exact,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Newton,
    Petviashvili,
    Variational,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Newton => "newton",
            Method::Petviashvili => "petviashvili",
            Method::Variational => "variational",
        }
    }
}

impl FromStr for Method {
    type Err = CliError;
    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "newton" => Ok(Method::Newton),
            "petviashvili" => Ok(Method::Petviashvili),
            "variational" => Ok(Method::Variational),
            _ => Err(CliError::Config(format!("unknown method '{s}' (newton, petviashvili, variational)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

/// Parses a comma-separated subset of `csv,json,svg`.
pub fn parse_formats(s: &str) -> CliResult<BTreeSet<Format>> {
    let mut out = BTreeSet::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        out.insert(match part {
            "csv" => Format::Csv,
            "json" => Format::Json,
            "svg" => Format::Svg,
            _ => return Err(CliError::Config(format!("unknown format '{part}' (csv, json, svg)"))),
        });
    }
    if out.is_empty() {
        return Err(CliError::Config("no output format selected".into()));
    }
    Ok(out)
}

/// Parses `<lo>:<hi>`.
pub fn parse_c_range(s: &str) -> CliResult<(f64, f64)> {
    let (lo, hi) =
        s.split_once(':').ok_or_else(|| CliError::Config(format!("c-range '{s}' is not of the form lo:hi")))?;
    let p =
        |t: &str| t.trim().parse::<f64>().map_err(|_| CliError::Config(format!("c-range bound '{t}' is not a number")));
    Ok((p(lo)?, p(hi)?))
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub alpha: f64,
    pub c_min: f64,
    pub c_max: f64,
    /// Speed for `spectrum`.
    pub c: Option<f64>,
    pub solver: SolverConfig,
    pub method: Method,
    pub output_dir: PathBuf,
    pub formats: BTreeSet<Format>,
}

impl RunConfig {
    /// Default speed interval of a command.
    pub fn default_c_range(command: Command) -> (f64, f64) {
        match command {
            Command::Verify => (-0.9, 2.0),
            _ => (-0.9, 30.0),
        }
    }

    pub fn new(command: Command, alpha: f64) -> Self {
        let (c_min, c_max) = Self::default_c_range(command);
        RunConfig {
            command,
            alpha,
            c_min,
            c_max,
            c: None,
            solver: SolverConfig::default(),
            method: Method::Newton,
            output_dir: PathBuf::from("."),
            formats: [Format::Csv, Format::Json].into_iter().collect(),
        }
    }

    pub fn validate(&self) -> CliResult<()> {
        let lo = 1.0 / 3.0;
        if !(self.alpha > lo && self.alpha <= 2.0) {
            return Err(CliError::Config(format!("alpha = {} outside (1/3, 2]", self.alpha)));
        }
        if !(self.c_min > -1.0) {
            return Err(CliError::Config(format!("c_min = {} must exceed -1", self.c_min)));
        }
        if !(self.c_min < self.c_max) || !self.c_max.is_finite() {
            return Err(CliError::Config(format!("need c_min < c_max, got {}:{}", self.c_min, self.c_max)));
        }
        if self.command == Command::Spectrum {
            match self.c {
                Some(c) if c > -1.0 && c.is_finite() => {}
                Some(c) => return Err(CliError::Config(format!("spectrum needs c > -1 (psi = 0 otherwise), got {c}"))),
                None => return Err(CliError::Config("spectrum needs --c".into())),
            }
        }
        if self.command == Command::Exact && self.alpha != 1.0 && self.alpha != 2.0 {
            return Err(CliError::Config(format!(
                "closed-form waves exist for alpha = 1 and 2 only, got {}",
                self.alpha
            )));
        }
        self.solver.validate().map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }

    /// `<stem>_alpha<alpha>.<ext>` inside the output directory.
    pub fn file(&self, stem: &str, ext: &str) -> PathBuf {
        self.output_dir.join(format!("{stem}_alpha{}.{ext}", self.alpha))
    }
}

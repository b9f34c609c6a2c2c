use std::path::PathBuf;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde_json::{json, Value};

use fkdv::galileo::{phase_align, ZeroMeanWave};
use fkdv::solvers::{
    continue_branch, petviashvili_report, variational_report, Branch, BranchPoint, PointKind, SolverConfig,
};
use fkdv::special::{bo_exact, bo_gamma_for_omega, kdv_exact};
use fkdv::stability::{
    b_prime_series, classify, dx_l_spectrum, eigen_counts, predicted_counts, OperatorMatrix, Parity,
};
use fkdv::stokes::{stokes_coefficients, stokes_wave};
use fkdv::{CosineSeries, FourierGrid, NormalizedWave, PeriodicField};

use crate::config::{Command, Format, Method, RunConfig};
use crate::plot::{render, PlotKind};
use crate::table::{fmt_f64, write_csv, BranchRow};
use crate::verify::{self, Check};
use crate::{io_err, CliError, CliResult};

pub const BRANCH_SCHEMA: &str = "fkdv-branch/1";
pub const VERIFY_SCHEMA: &str = "fkdv-verify/1";
const SPECTRUM_COUNT: usize = 20;
const MIN_STABILITY_MODES: usize = 16;

/// Files written by a successful command and a one-line summary.
#[derive(Clone, Debug, Default)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub summary: String,
}

pub fn run(cfg: &RunConfig) -> CliResult<Outcome> {
    cfg.validate()?;
    std::fs::create_dir_all(&cfg.output_dir).map_err(io_err(&cfg.output_dir))?;
    match cfg.command {
        Command::Trace => run_trace(cfg),
        Command::Verify => run_verify(cfg),
        Command::Stokes => run_stokes(cfg),
        Command::Spectrum => run_spectrum(cfg, cfg.c.expect("validated")),
        Command::Exact => run_exact(cfg),
    }
}

fn write_json(path: &PathBuf, v: &Value) -> CliResult<()> {
    let text = serde_json::to_string_pretty(v).expect("serializable");
    std::fs::write(path, text + "\n").map_err(io_err(path))
}

fn unix_seconds() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

/// Independent re-solve of each branch point with the selected method.
fn method_check(branch: &Branch, method: Method, cfg: &SolverConfig) -> Vec<Value> {
    let alpha = branch.alpha;
    branch
        .points
        .iter()
        .map(|p| {
            let grid = p.psi.natural_grid();
            let newton = ZeroMeanWave::from_psi(alpha, p.c, p.psi.to_field(&grid));
            let outcome = match method {
                Method::Newton => return json!({ "c": p.c, "status": "reference" }),
                Method::Petviashvili => newton.to_normalized().and_then(|w| {
                    let amp = w.phi.project_zero_mean().max_abs();
                    let bump = PeriodicField::from_fn(w.phi.grid(), |x| 0.02 * amp * (2.0 * x).cos());
                    let seed = NormalizedWave::new(alpha, w.omega, w.phi.scale(1.05).add(&bump)?);
                    let rep = petviashvili_report(alpha, w.omega, &seed, cfg)?;
                    let diff = phase_align(&rep.wave.phi).sub(&w.phi)?.max_abs();
                    Ok((diff, rep.iterations))
                }),
                Method::Variational => variational_report(alpha, p.c, cfg).and_then(|rep| {
                    let field = rep.series.to_field(&grid);
                    let diff = phase_align(&field).sub(&newton.psi)?.max_abs();
                    Ok((diff, rep.iterations))
                }),
            };
            match outcome {
                Ok((diff, iterations)) => {
                    json!({ "c": p.c, "status": "converged", "max_diff": diff, "iterations": iterations })
                }
                Err(e) => json!({ "c": p.c, "status": "failed", "error": e.to_string() }),
            }
        })
        .collect()
}

fn branch_sidecar(
    cfg: &RunConfig,
    branch: &Branch,
    csv: &str,
    started: u64,
    wall: f64,
    check: Option<Vec<Value>>,
) -> Value {
    let cs = |k: PointKind| branch.of_kind(k).map(|p| p.c).collect::<Vec<_>>();
    json!({
        "schema": BRANCH_SCHEMA,
        "alpha": branch.alpha,
        "c_range": [cfg.c_min, cfg.c_max],
        "method": cfg.method.as_str(),
        "config": cfg.solver,
        "seed": {
            "description": branch.metadata.seed,
            "c": branch.metadata.seed_c,
            "amplitude": branch.metadata.seed_amplitude,
        },
        "csv": csv,
        "point_count": branch.points.len(),
        "folds": cs(PointKind::FoldRefined),
        "transitions": cs(PointKind::TransitionRefined),
        "accepted_steps": branch.metadata.accepted_steps,
        "rejected_steps": branch.metadata.rejected_steps,
        "abort": branch.abort.as_ref().map(|e| e.to_string()),
        "points": branch.points,
        "method_check": check,
        "started_unix_s": started,
        "wall_time_s": wall,
    })
}

/// Writes the branch CSV, sidecar and plots for already traced points.
pub fn write_branch(
    cfg: &RunConfig,
    branch: &Branch,
    rows: &[BranchRow],
    started: u64,
    wall: f64,
) -> CliResult<Vec<PathBuf>> {
    let mut files = Vec::new();
    let csv_path = cfg.file("branch", "csv");
    if cfg.wants(Format::Csv) {
        write_csv(&csv_path, rows)?;
        files.push(csv_path.clone());
    }
    if cfg.wants(Format::Json) {
        let check = (cfg.method != Method::Newton).then(|| method_check(branch, cfg.method, &cfg.solver));
        let name = csv_path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let path = cfg.file("branch", "json");
        write_json(&path, &branch_sidecar(cfg, branch, &name, started, wall, check))?;
        files.push(path);
    }
    if cfg.wants(Format::Svg) && !rows.is_empty() {
        for kind in [PlotKind::BVsC, PlotKind::MuVsOmega] {
            let path = cfg.output_dir.join(kind.file_name());
            std::fs::write(&path, render(rows, kind, Some(cfg.alpha))?).map_err(io_err(&path))?;
            files.push(path);
        }
    }
    Ok(files)
}

/// Leading points that pass the row invariants, and the first violation.
fn validated(points: &[BranchPoint], tol: f64) -> (Vec<BranchRow>, Option<String>) {
    let mut rows = Vec::new();
    for p in points {
        if let Err(e) = p.validate(tol) {
            return (rows, Some(e.to_string()));
        }
        rows.push(BranchRow::from(p));
    }
    (rows, None)
}

pub fn run_trace(cfg: &RunConfig) -> CliResult<Outcome> {
    let started = unix_seconds();
    let t0 = Instant::now();
    let branch = continue_branch(cfg.alpha, (cfg.c_min, cfg.c_max), &cfg.solver)?;
    let wall = t0.elapsed().as_secs_f64();
    let (rows, invalid) = validated(&branch.points, cfg.solver.residual_tol);
    let files = write_branch(cfg, &branch, &rows, started, wall)?;
    if let Some(e) = &branch.abort {
        let last = branch.points.last().map(|p| p.c).unwrap_or(cfg.c_min);
        return Err(CliError::Solver(format!("continuation stopped after c = {last}: {e}; {} rows kept", rows.len())));
    }
    if let Some(e) = invalid {
        return Err(CliError::Solver(format!("{e}; {} rows kept", rows.len())));
    }
    let folds = branch.of_kind(PointKind::FoldRefined).count();
    let transitions = branch.of_kind(PointKind::TransitionRefined).count();
    Ok(Outcome {
        files,
        summary: format!(
            "alpha = {}: {} points on [{}, {}], {folds} fold(s), {transitions} stability transition(s), {wall:.1} s",
            cfg.alpha,
            rows.len(),
            cfg.c_min,
            cfg.c_max
        ),
    })
}

pub fn run_verify(cfg: &RunConfig) -> CliResult<Outcome> {
    let s = &cfg.solver;
    let mut checks: Vec<Check> = Vec::new();
    let branch = continue_branch(cfg.alpha, (cfg.c_min, cfg.c_max), s)?;
    checks.push(Check::at_most(
        "branch_complete",
        if branch.is_complete() { 0.0 } else { 1.0 },
        0.0,
        branch.abort.as_ref().map(|e| e.to_string()).unwrap_or_else(|| format!("{} points", branch.points.len())),
    ));
    checks.extend(verify::branch_checks(&branch, s));
    if cfg.alpha == 1.0 {
        checks.extend(verify::bo_checks(&branch));
    }
    if cfg.alpha == 2.0 {
        checks.extend(verify::kdv_checks(s));
    }
    checks.push(verify::stokes_order_check(cfg.alpha, s));
    checks.extend(verify::small_amplitude_checks(cfg.alpha, s));
    checks.push(verify::mu_omega_slope_check(cfg.alpha, s));
    for c in &checks {
        println!(
            "{} {:<24} measured {:>10.3e}  tolerance {:>8.1e}  {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.measured,
            c.tolerance,
            c.detail
        );
    }
    let passed = checks.iter().all(|c| c.passed);
    let path = cfg.file("verify", "json");
    write_json(
        &path,
        &json!({
            "schema": VERIFY_SCHEMA,
            "alpha": cfg.alpha,
            "c_range": [cfg.c_min, cfg.c_max],
            "config": s,
            "passed": passed,
            "checks": checks,
        }),
    )?;
    if let Some(first) = checks.iter().find(|c| !c.passed) {
        return Err(CliError::Verify(format!("{} ({})", first.name, first.detail)));
    }
    Ok(Outcome { files: vec![path], summary: format!("{} checks passed", checks.len()) })
}

/// Wave at speed `c` computed with the configured method.
fn wave_at(cfg: &RunConfig, c: f64) -> CliResult<CosineSeries> {
    let s = &cfg.solver;
    match cfg.method {
        Method::Variational => Ok(variational_report(cfg.alpha, c, s)?.series),
        Method::Newton | Method::Petviashvili => {
            let br = continue_branch(cfg.alpha, (c, c), s)?;
            if let Some(e) = br.abort {
                return Err(e.into());
            }
            let p = br.points.into_iter().next().ok_or_else(|| CliError::Solver(format!("no wave at c = {c}")))?;
            if cfg.method == Method::Newton {
                return Ok(p.psi);
            }
            let grid = p.psi.natural_grid();
            let st = stokes_coefficients(cfg.alpha)?;
            let a = st.amplitude_for_c(c)?;
            let seed = stokes_wave(cfg.alpha, a, &grid)?;
            let rep = petviashvili_report(cfg.alpha, p.omega, &NormalizedWave::new(cfg.alpha, p.omega, seed.phi), s)?;
            let z = rep.wave.to_zero_mean()?;
            Ok(CosineSeries::from_field(&phase_align(&z.psi), grid.nyquist() - 1))
        }
    }
}

pub fn run_spectrum(cfg: &RunConfig, c: f64) -> CliResult<Outcome> {
    let alpha = cfg.alpha;
    let psi = wave_at(cfg, c)?;
    if psi.max_abs_coeff() == 0.0 {
        return Err(CliError::Solver(format!("solver returned psi = 0 at c = {c}")));
    }
    let k = psi.effective_modes(cfg.solver.tail_tol).max(MIN_STABILITY_MODES).min(psi.modes());
    let op = OperatorMatrix::from_series(alpha, c, &psi, k);
    let counts = eigen_counts(&op, cfg.solver.zero_tol)?;
    let bp = b_prime_series(alpha, c, &psi, None, false)?;
    let verdict = classify(bp.value, c, &counts, None);
    let spec = dx_l_spectrum(alpha, c, &psi, k)?;
    let stem = format!("spectrum_alpha{}_c{}", alpha, c);
    let mut files = Vec::new();
    if cfg.wants(Format::Csv) {
        let path = cfg.output_dir.join(format!("{stem}.csv"));
        let mut w = csv::Writer::from_path(&path).map_err(|e| CliError::Solver(e.to_string()))?;
        let werr = |e: csv::Error| CliError::Solver(e.to_string());
        w.write_record(["operator", "index", "re", "im", "parity"]).map_err(werr)?;
        for (i, (e, parity)) in counts.eigenvalues.iter().take(SPECTRUM_COUNT).enumerate() {
            let parity = match parity {
                Parity::Even => "even",
                Parity::Odd => "odd",
            };
            w.write_record(["L", &i.to_string(), &fmt_f64(*e), &fmt_f64(0.0), parity]).map_err(werr)?;
        }
        for (i, z) in spec.iter().take(SPECTRUM_COUNT).enumerate() {
            w.write_record(["dxL", &i.to_string(), &fmt_f64(z.re), &fmt_f64(z.im), ""]).map_err(werr)?;
        }
        w.flush().map_err(io_err(&path))?;
        files.push(path);
    }
    let max_re = spec.first().map(|z| z.re).unwrap_or(0.0);
    if cfg.wants(Format::Json) {
        let path = cfg.output_dir.join(format!("{stem}.json"));
        write_json(
            &path,
            &json!({
                "alpha": alpha,
                "c": c,
                "method": cfg.method.as_str(),
                "modes": k,
                "b": psi.mean_square(),
                "b_prime": bp.value,
                "c_plus_2bprime": verdict.c_plus_2bprime,
                "n_neg": counts.n_neg,
                "z_zero": counts.z_zero,
                "predicted": predicted_counts(verdict.c_plus_2bprime, 10.0 * cfg.solver.zero_tol),
                "verdict": verdict.kind.as_str(),
                "max_real_part": max_re,
            }),
        )?;
        files.push(path);
    }
    Ok(Outcome {
        files,
        summary: format!(
            "alpha = {alpha}, c = {c}: n(L) = {}, z(L) = {}, b' = {:.6e}, max Re = {max_re:.3e}, verdict {}",
            counts.n_neg,
            counts.z_zero,
            bp.value,
            verdict.kind.as_str()
        ),
    })
}

pub fn run_stokes(cfg: &RunConfig) -> CliResult<Outcome> {
    let alpha = cfg.alpha;
    let s = stokes_coefficients(alpha)?;
    let mut rows = Vec::new();
    let mut errs = Vec::new();
    let exp = verify::stokes_errors(alpha, &verify::STOKES_AMPLITUDES, &cfg.solver)?;
    for (&a, err) in verify::STOKES_AMPLITUDES.iter().zip(exp) {
        let w = verify::amplitude_wave(alpha, a, &cfg.solver)?;
        rows.push(w);
        errs.push(err);
    }
    let slope = verify::log_slope(&verify::STOKES_AMPLITUDES, &errs);
    let (bp, fold) = verify::small_amplitude_limits(alpha, &cfg.solver)?;
    let mut files = Vec::new();
    if cfg.wants(Format::Csv) {
        let path = cfg.file("stokes", "csv");
        let mut w = csv::Writer::from_path(&path).map_err(|e| CliError::Solver(e.to_string()))?;
        let werr = |e: csv::Error| CliError::Solver(e.to_string());
        w.write_record(["a", "omega", "c", "b", "b_prime", "psi_error"]).map_err(werr)?;
        for (r, e) in rows.iter().zip(&errs) {
            w.write_record([r.a, r.omega, r.c, r.b, r.b_prime, *e].map(fmt_f64)).map_err(werr)?;
        }
        w.flush().map_err(io_err(&path))?;
        files.push(path);
    }
    if cfg.wants(Format::Json) {
        let path = cfg.file("stokes", "json");
        write_json(
            &path,
            &json!({
                "alpha": alpha,
                "omega2": s.omega2,
                "phi2_mean": s.phi2_mean,
                "phi2_cos2": s.phi2_cos2,
                "phi3_cos3": s.phi3_cos3,
                "b_prime_limit": s.b_prime_limit(),
                "fold_indicator_limit": s.fold_indicator_limit(),
                "mu_omega_slope": s.mu_omega_slope(),
                "extrapolated_b_prime": bp,
                "extrapolated_fold_indicator": fold,
                "order_slope": slope,
            }),
        )?;
        files.push(path);
    }
    Ok(Outcome {
        files,
        summary: format!(
            "alpha = {alpha}: omega2 = {:.6}, error slope {slope:.3}, b' -> {bp:.6} ({:.6}), c + 2b' -> {fold:.6} ({:.6})",
            s.omega2,
            s.b_prime_limit(),
            s.fold_indicator_limit()
        ),
    })
}

pub fn run_exact(cfg: &RunConfig) -> CliResult<Outcome> {
    let grid = FourierGrid::new(1024)?;
    let mut rows: Vec<[f64; 6]> = Vec::new();
    if cfg.alpha == 1.0 {
        let n = 20;
        for i in 0..=n {
            let c = cfg.c_min + (cfg.c_max - cfg.c_min) * i as f64 / n as f64;
            let gamma = bo_gamma_for_omega(c + 2.0)?;
            let e = bo_exact(gamma, &grid)?;
            let z = ZeroMeanWave::from_psi(1.0, e.c, e.phi.project_zero_mean());
            rows.push([gamma, e.c, e.b, e.omega, e.mu, z.gamma()]);
        }
    } else {
        for k in [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99] {
            let e = kdv_exact(k, &grid)?;
            let z = ZeroMeanWave::from_psi(2.0, e.c, e.phi.project_zero_mean());
            rows.push([k, e.c, e.b, e.omega, e.mu, z.gamma()]);
        }
    }
    let path = cfg.file("exact", "csv");
    let mut w = csv::Writer::from_path(&path).map_err(|e| CliError::Solver(e.to_string()))?;
    let werr = |e: csv::Error| CliError::Solver(e.to_string());
    w.write_record(["parameter", "c", "b", "omega", "mu", "gamma"]).map_err(werr)?;
    for r in &rows {
        w.write_record(r.map(fmt_f64)).map_err(werr)?;
    }
    w.flush().map_err(io_err(&path))?;
    Ok(Outcome { files: vec![path], summary: format!("{} closed-form waves for alpha = {}", rows.len(), cfg.alpha) })
}

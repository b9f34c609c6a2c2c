//! Oracle checks run by `fkdv verify`.

use serde::Serialize;

use fkdv::fourier::FourierGrid;
use fkdv::galileo::phase_align;
use fkdv::solvers::{newton_fixed_amplitude, newton_omega_series, Branch, PointKind, SolverConfig};
use fkdv::special::{bo_exact, bo_gamma_for_omega, kdv_exact};
use fkdv::stability::{b_prime_series, constraint_matrices_series, range_residuals};
use fkdv::stokes::stokes_coefficients;
use fkdv::{CosineSeries, FkdvError, VerdictKind};

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl Check {
    /// Passes when `measured ≤ tolerance`; NaN fails.
    pub fn at_most(name: &str, measured: f64, tolerance: f64, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed: measured <= tolerance, measured, tolerance, detail: detail.into() }
    }

    pub fn failed(name: &str, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed: false, measured: f64::NAN, tolerance: f64::NAN, detail: detail.into() }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// Invariants every traced branch must satisfy.
pub fn branch_checks(branch: &Branch, cfg: &SolverConfig) -> Vec<Check> {
    let alpha = branch.alpha;
    let mut out = Vec::new();
    if branch.points.is_empty() {
        out.push(Check::failed("branch", "no points"));
        return out;
    }
    let mut range = 0.0f64;
    let mut det = 0.0f64;
    let mut det_at = 0usize;
    for p in &branch.points {
        match b_prime_series(alpha, p.c, &p.psi, None, false)
            .and_then(|bp| range_residuals(alpha, p.c, &p.psi, &bp.dc_psi, bp.value))
        {
            Ok(r) => range = range.max(r[0]).max(r[1]).max(r[2]),
            Err(_) => range = f64::NAN,
        }
        if p.kind == PointKind::FoldRefined {
            continue;
        }
        if let Ok(rep) = constraint_matrices_series(alpha, p.c, &p.psi, p.b_prime) {
            if let (Some(cp), Some(cd)) = (rep.det_p_closed, rep.det_d_closed) {
                det = det.max(rel(rep.det_p, cp)).max(rel(rep.det_d, cd));
                det_at += 1;
            }
        }
    }
    out.push(Check::at_most("range_identities", range, 1e-6, "max relative residual of the three range identities"));
    let gap = branch.points.iter().map(|p| (p.b_prime_fd - p.b_prime).abs()).fold(0.0, f64::max);
    out.push(Check::at_most("b_prime_methods", gap, 1e-4, "linear solve vs centered difference"));
    let g = branch.points.iter().map(|p| rel(p.gamma_prime_fd, 3.0 * p.b)).fold(0.0, f64::max);
    out.push(Check::at_most("gamma_prime_3b", g, 1e-3, "relative gap of gamma'(c) and 3b(c)"));
    let tol = 10.0 * cfg.zero_tol;
    let eligible: Vec<_> = branch.points.iter().filter(|p| p.c_plus_2bprime.abs() > tol).collect();
    let bad = eligible.iter().filter(|p| !p.counts_match_prediction(tol)).count();
    out.push(Check::at_most(
        "eigenvalue_counts",
        bad as f64,
        0.0,
        format!("{bad} of {} points disagree with the sign of c + 2b'", eligible.len()),
    ));
    let unstable_doubling = branch.points.iter().filter(|p| p.doubling_consistent == Some(false)).count();
    out.push(Check::at_most(
        "counts_under_doubling",
        unstable_doubling as f64,
        0.0,
        "points whose counts change with 2K modes",
    ));
    out.push(Check::at_most("determinants", det, 1e-4, format!("closed forms of det P and det D at {det_at} points")));
    let mono = branch
        .points
        .windows(2)
        .filter(|w| w[0].verdict == VerdictKind::Stable && w[1].verdict == VerdictKind::Stable && w[1].b <= w[0].b)
        .count();
    out.push(Check::at_most("b_monotone_when_stable", mono as f64, 0.0, "decreasing steps of b on the stable part"));
    out
}

/// Closed-form comparisons along an `α = 1` branch.
pub fn bo_checks(branch: &Branch) -> Vec<Check> {
    let mut db = 0.0f64;
    let mut dmu = 0.0f64;
    let mut prof = 0.0f64;
    for p in &branch.points {
        db = db.max((p.b - (p.c + 1.0)).abs());
        dmu = dmu.max((p.mu - p.omega).abs());
        prof = prof.max(bo_profile_error(&p.psi, p.c).unwrap_or(f64::NAN));
    }
    vec![
        Check::at_most("bo_b_equals_c_plus_1", db, 1e-6, "max |b - (c + 1)|"),
        Check::at_most("bo_mu_equals_omega", dmu, 1e-6, "max |mu - omega|"),
        Check::at_most("bo_profiles", prof, 1e-8, "max-norm error after phase alignment"),
    ]
}

/// Max-norm distance between a zero-mean profile at speed `c` and the closed-form BO wave.
pub fn bo_profile_error(psi: &CosineSeries, c: f64) -> Result<f64, FkdvError> {
    let grid = psi.natural_grid();
    let gamma = bo_gamma_for_omega(c + 2.0)?;
    let exact = bo_exact(gamma, &grid)?.phi.project_zero_mean();
    let num = phase_align(&psi.to_field(&grid));
    Ok(num.sub(&exact)?.max_abs())
}

/// Newton solves at fixed `ω` seeded by cnoidal waves.
pub fn kdv_checks(cfg: &SolverConfig) -> Vec<Check> {
    let mut dcb = 0.0f64;
    let mut prof = 0.0f64;
    let mut detail = Vec::new();
    for k in [0.2, 0.5, 0.8, 0.95] {
        match kdv_case(k, cfg) {
            Ok((e_cb, e_prof)) => {
                dcb = dcb.max(e_cb);
                prof = prof.max(e_prof);
                detail.push(format!("k={k}: {e_cb:.1e}/{e_prof:.1e}"));
            }
            Err(e) => {
                dcb = f64::NAN;
                detail.push(format!("k={k}: {e}"));
            }
        }
    }
    vec![
        Check::at_most("kdv_c_b", dcb, 1e-6, detail.join(", ")),
        Check::at_most("kdv_profiles", prof, 1e-8, "max-norm error of the Newton solution"),
    ]
}

/// Relative `(c, b)` error and profile error at modulus `k`, solving at the wave's `ω` so that
/// both `c = ω − 2 mean(φ)` and `b` come out of the solve.
pub fn kdv_case(k: f64, cfg: &SolverConfig) -> Result<(f64, f64), FkdvError> {
    let grid = FourierGrid::new(256)?;
    let e = kdv_exact(k, &grid)?;
    let seed = CosineSeries::from_field(&e.phi, grid.nyquist() - 1);
    let rep = newton_omega_series(2.0, e.omega, &seed, cfg)?;
    let phi = rep.solution;
    let c = e.omega - 2.0 * phi.coeff(0);
    let b = 0.25 * (e.omega * e.omega - c * c);
    let err_cb = rel(b, e.b).max(rel(c, e.c));
    let prof = phi.to_field(&grid).sub(&e.phi)?.max_abs();
    Ok((err_cb, prof))
}

/// Wave of the Stokes family with first harmonic `a`, in both forms.
#[derive(Clone, Debug)]
pub struct AmplitudeWave {
    pub a: f64,
    pub omega: f64,
    pub c: f64,
    pub b: f64,
    pub mu: f64,
    pub b_prime: f64,
    pub psi: CosineSeries,
}

pub fn amplitude_wave(alpha: f64, a: f64, cfg: &SolverConfig) -> Result<AmplitudeWave, FkdvError> {
    let s = stokes_coefficients(alpha)?;
    let mut seed = vec![1.0 + s.phi2_mean * a * a, 0.5 * a, 0.5 * s.phi2_cos2 * a * a, 0.5 * s.phi3_cos3 * a * a * a];
    seed.resize(64, 0.0);
    let (rep, omega) = newton_fixed_amplitude(alpha, a, &CosineSeries::new(seed), s.omega(a), cfg)?;
    let phi = rep.solution;
    let mean = phi.coeff(0);
    let c = omega - 2.0 * mean;
    let mut psi = phi.clone();
    psi.as_mut_slice()[0] = 0.0;
    let b = psi.mean_square();
    let bp = b_prime_series(alpha, c, &psi, None, false)?;
    Ok(AmplitudeWave { a, omega, c, b, mu: phi.mean_square(), b_prime: bp.value, psi })
}

pub const STOKES_AMPLITUDES: [f64; 4] = [0.02, 0.04, 0.08, 0.16];

/// Least-squares slope of `log y` against `log x`.
pub fn log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// `‖ψ_solver − ψ_Stokes‖∞` at each amplitude.
pub fn stokes_errors(alpha: f64, amplitudes: &[f64], cfg: &SolverConfig) -> Result<Vec<f64>, FkdvError> {
    let s = stokes_coefficients(alpha)?;
    let grid = FourierGrid::new(128)?;
    amplitudes
        .iter()
        .map(|&a| {
            let w = amplitude_wave(alpha, a, cfg)?;
            let expansion = CosineSeries::new(s.psi_cosine(a).to_vec());
            Ok(w.psi.to_field(&grid).sub(&expansion.to_field(&grid))?.max_abs())
        })
        .collect()
}

pub fn stokes_order_check(alpha: f64, cfg: &SolverConfig) -> Check {
    match stokes_errors(alpha, &STOKES_AMPLITUDES, cfg) {
        Ok(errs) => {
            let p = log_slope(&STOKES_AMPLITUDES, &errs);
            Check::at_most("stokes_order", (p - 4.0).abs(), 0.3, format!("slope {p:.3}"))
        }
        Err(e) => Check::failed("stokes_order", e.to_string()),
    }
}

/// `(4 f(a/2) − f(a))/3`, removing the `O(a²)` term of an even expansion.
pub fn richardson(f_a: f64, f_half: f64) -> f64 {
    (4.0 * f_half - f_a) / 3.0
}

/// Extrapolated small-amplitude limits of `b'` and `c + 2b'`.
pub fn small_amplitude_limits(alpha: f64, cfg: &SolverConfig) -> Result<(f64, f64), FkdvError> {
    let w1 = amplitude_wave(alpha, 0.1, cfg)?;
    let w2 = amplitude_wave(alpha, 0.05, cfg)?;
    let bp = richardson(w1.b_prime, w2.b_prime);
    let fold = richardson(w1.c + 2.0 * w1.b_prime, w2.c + 2.0 * w2.b_prime);
    Ok((bp, fold))
}

pub fn small_amplitude_checks(alpha: f64, cfg: &SolverConfig) -> Vec<Check> {
    let s = match stokes_coefficients(alpha) {
        Ok(s) => s,
        Err(e) => return vec![Check::failed("small_amplitude_limits", e.to_string())],
    };
    match small_amplitude_limits(alpha, cfg) {
        Ok((bp, fold)) => vec![
            Check::at_most(
                "b_prime_limit",
                rel(bp, s.b_prime_limit()),
                0.02,
                format!("{bp:.6} vs {:.6}", s.b_prime_limit()),
            ),
            Check::at_most(
                "fold_indicator_limit",
                rel(fold, s.fold_indicator_limit()),
                0.02,
                format!("{fold:.6} vs {:.6}", s.fold_indicator_limit()),
            ),
        ],
        Err(e) => vec![Check::failed("small_amplitude_limits", e.to_string())],
    }
}

/// Slope of `μ(ω)` at the bifurcation point `(ω, μ) = (1, 1)`, extrapolated twice in `a`.
pub fn mu_omega_slope(alpha: f64, cfg: &SolverConfig) -> Result<f64, FkdvError> {
    let secant = |a: f64| amplitude_wave(alpha, a, cfg).map(|w| (w.mu - 1.0) / (w.omega - 1.0));
    let (s1, s2, s3) = (secant(0.08)?, secant(0.04)?, secant(0.02)?);
    let r1 = richardson(s1, s2);
    let r2 = richardson(s2, s3);
    Ok((16.0 * r2 - r1) / 15.0)
}

pub fn mu_omega_slope_check(alpha: f64, cfg: &SolverConfig) -> Check {
    let expected = match stokes_coefficients(alpha) {
        Ok(s) => s.mu_omega_slope(),
        Err(e) => return Check::failed("mu_omega_slope", e.to_string()),
    };
    match mu_omega_slope(alpha, cfg) {
        Ok(v) => Check::at_most("mu_omega_slope", rel(v, expected), 0.05, format!("{v:.6} vs {expected:.6}")),
        Err(e) => Check::failed("mu_omega_slope", e.to_string()),
    }
}

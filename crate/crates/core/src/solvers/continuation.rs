use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::newton::{newton_c_series, solve_resolved};
use super::SolverConfig;
use crate::error::{FkdvError, Result};
use crate::series::CosineSeries;
use crate::stability::{
    b_prime_series, classify, eigen_counts, restricted_even_block, symmetric_eigenvalues, OperatorMatrix, VerdictKind,
};
use crate::stokes::stokes_coefficients;

/// Stokes amplitude of the starting wave when the requested range begins closer to `c = −1`.
const SEED_AMPLITUDE: f64 = 0.05;
/// Newton iteration count at or below which the step is allowed to grow.
const FAST_NEWTON: usize = 3;
const STEP_GROWTH: f64 = 1.5;
/// Fewest modes used in the eigenvalue counts.
const MIN_STABILITY_MODES: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointKind {
    Regular,
    /// Bisected zero of `c + 2b'(c)`.
    FoldRefined,
    /// Bisected zero of `b'(c)`.
    TransitionRefined,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BranchPoint {
    pub c: f64,
    pub b: f64,
    pub omega: f64,
    pub mu: f64,
    pub gamma: f64,
    pub b_prime: f64,
    /// Centered difference of `b` over `c ± fd_step`.
    pub b_prime_fd: f64,
    /// Centered difference of `γ` over `c ± fd_step`.
    pub gamma_prime_fd: f64,
    pub c_plus_2bprime: f64,
    pub n_neg: usize,
    pub z_zero: usize,
    /// Lowest eigenvalues of `L`, relative to its largest magnitude.
    pub lowest_eigs: Vec<f64>,
    /// Whether `(n, z)` is unchanged with twice the modes; `None` when not checked.
    pub doubling_consistent: Option<bool>,
    /// Smallest `|eigenvalue|` of `L|X₀` over its largest.
    pub kernel_margin: f64,
    pub verdict: VerdictKind,
    /// Collocation points `N` of the accepted solve.
    pub n_modes: usize,
    /// Modes `K` used in the eigenvalue counts.
    pub stability_modes: usize,
    pub residual: f64,
    pub tail: f64,
    pub kind: PointKind,
    #[serde(skip)]
    pub psi: CosineSeries,
}

impl BranchPoint {
    /// Checks `ω² = c² + 4b`, `b ≥ 0`, `μ ≥ 0` and the residual bound.
    pub fn validate(&self, residual_tol: f64) -> Result<()> {
        let fail = |what: String| Err(FkdvError::InvalidArgument(format!("branch point c = {}: {what}", self.c)));
        let finite = [self.c, self.b, self.omega, self.mu, self.gamma, self.b_prime, self.residual];
        if finite.iter().any(|v| !v.is_finite()) {
            return fail("non-finite field".into());
        }
        let id = self.omega * self.omega - (self.c * self.c + 4.0 * self.b);
        if id.abs() > 1e-8 * (1.0 + self.omega * self.omega) {
            return fail(format!("omega^2 - c^2 - 4b = {id}"));
        }
        if self.b < 0.0 || self.mu < 0.0 {
            return fail(format!("b = {}, mu = {}", self.b, self.mu));
        }
        if !(self.residual < residual_tol) {
            return fail(format!("residual {} above {residual_tol}", self.residual));
        }
        Ok(())
    }

    /// `(n(L), z(L))` agrees with the sign of `c + 2b'`.
    pub fn counts_match_prediction(&self, tol: f64) -> bool {
        crate::stability::predicted_counts(self.c_plus_2bprime, tol) == (self.n_neg, self.z_zero)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BranchMetadata {
    pub config: SolverConfig,
    pub c_range: [f64; 2],
    /// Speed and Stokes amplitude of the seed wave.
    pub seed_c: f64,
    pub seed_amplitude: f64,
    pub seed: String,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Branch {
    pub alpha: f64,
    pub points: Vec<BranchPoint>,
    pub metadata: BranchMetadata,
    /// Why the march stopped before `c_range[1]`, if it did.
    #[serde(skip)]
    pub abort: Option<FkdvError>,
}

impl Branch {
    pub fn is_complete(&self) -> bool {
        self.abort.is_none()
    }

    pub fn of_kind(&self, kind: PointKind) -> impl Iterator<Item = &BranchPoint> {
        self.points.iter().filter(move |p| p.kind == kind)
    }
}

/// A solved wave along the branch together with `∂_c ψ`.
#[derive(Clone)]
struct State {
    c: f64,
    psi: CosineSeries,
    dc_psi: CosineSeries,
    b_prime: f64,
    residual: f64,
}

impl State {
    fn fold_indicator(&self) -> f64 {
        self.c + 2.0 * self.b_prime
    }
}

fn solve_state(alpha: f64, c: f64, seed: &CosineSeries, cfg: &SolverConfig) -> Result<(State, usize)> {
    let rep = solve_resolved(alpha, c, seed, cfg)?;
    let bp = b_prime_series(alpha, c, &rep.solution, None, false)?;
    let state = State { c, b_prime: bp.value, dc_psi: bp.dc_psi, residual: rep.residual(), psi: rep.solution };
    Ok((state, rep.iterations))
}

/// Tangent predictor from `from` followed by a resolved Newton solve at `c`.
fn advance(alpha: f64, from: &State, c: f64, cfg: &SolverConfig) -> Result<(State, usize)> {
    let seed = from.psi.axpy(c - from.c, &from.dc_psi);
    solve_state(alpha, c, &seed, cfg)
}

/// Brackets a sign change of `f` between `a` and `b` down to `cfg.refine_tol` by the Illinois
/// variant of false position, returning the endpoint with the smaller `|f|`.
fn bisect(alpha: f64, a: &State, b: &State, f: impl Fn(&State) -> f64, cfg: &SolverConfig) -> Result<State> {
    let (mut lo, mut hi) = (a.clone(), b.clone());
    let (mut flo, mut fhi) = (f(&lo), f(&hi));
    let mut side = 0i8;
    for _ in 0..100 {
        if (hi.c - lo.c).abs() <= cfg.refine_tol {
            break;
        }
        let mut mid = (lo.c * fhi - hi.c * flo) / (fhi - flo);
        let width = hi.c - lo.c;
        if !mid.is_finite() || mid <= lo.c + 0.01 * width || mid >= hi.c - 0.01 * width {
            mid = 0.5 * (lo.c + hi.c);
        }
        let from = if mid - lo.c < hi.c - mid { &lo } else { &hi };
        let (s, _) = advance(alpha, from, mid, cfg)?;
        let fm = f(&s);
        if fm == 0.0 {
            return Ok(s);
        }
        if fm.signum() == flo.signum() {
            lo = s;
            flo = fm;
            if side == -1 {
                fhi *= 0.5;
            }
            side = -1;
        } else {
            hi = s;
            fhi = fm;
            if side == 1 {
                flo *= 0.5;
            }
            side = 1;
        }
    }
    Ok(if f(&lo).abs() <= f(&hi).abs() { lo } else { hi })
}

fn gamma_of(psi: &CosineSeries) -> f64 {
    psi.inner(&psi.square()) / (2.0 * PI)
}

/// Fills the stability data of a solved state.
fn analyze(alpha: f64, s: &State, kind: PointKind, cfg: &SolverConfig) -> Result<BranchPoint> {
    let psi = &s.psi;
    let c = s.c;
    let k_sol = psi.modes();
    let b = psi.mean_square();
    let gamma = gamma_of(psi);
    let omega = (c * c + 4.0 * b).sqrt();
    let shift = 0.5 * (omega - c);
    let mu = b + shift * shift;

    let h = cfg.fd_step;
    let mut side = [(0.0, 0.0); 2];
    for (slot, sign) in side.iter_mut().zip([-1.0, 1.0]) {
        let seed = psi.axpy(sign * h, &s.dc_psi);
        let rep = newton_c_series(alpha, c + sign * h, &seed, cfg)?;
        *slot = (rep.solution.mean_square(), gamma_of(&rep.solution));
    }
    let b_prime_fd = (side[1].0 - side[0].0) / (2.0 * h);
    let gamma_prime_fd = (side[1].1 - side[0].1) / (2.0 * h);

    let k_stab = psi.effective_modes(cfg.tail_tol).max(MIN_STABILITY_MODES).min(k_sol);
    let op = OperatorMatrix::from_series(alpha, c, psi, k_stab);
    let counts = eigen_counts(&op, cfg.zero_tol)?;
    let doubling_consistent = if cfg.check_doubling {
        let op2 = OperatorMatrix::from_series(alpha, c, psi, 2 * k_stab);
        let c2 = eigen_counts(&op2, cfg.zero_tol)?;
        Some((c2.n_neg, c2.z_zero) == (counts.n_neg, counts.z_zero))
    } else {
        None
    };
    let restricted = symmetric_eigenvalues(restricted_even_block(alpha, c, psi, k_stab).as_ref())?;
    let big = restricted.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    let small = restricted.iter().fold(f64::INFINITY, |m, e| m.min(e.abs()));
    let kernel_margin = small / big;
    let verdict = classify(s.b_prime, c, &counts, Some(kernel_margin));
    let lowest_eigs = counts.lowest(4).into_iter().map(|e| e / counts.scale).collect();

    Ok(BranchPoint {
        c,
        b,
        omega,
        mu,
        gamma,
        b_prime: s.b_prime,
        b_prime_fd,
        gamma_prime_fd,
        c_plus_2bprime: s.fold_indicator(),
        n_neg: counts.n_neg,
        z_zero: counts.z_zero,
        lowest_eigs,
        doubling_consistent,
        kernel_margin,
        verdict: verdict.kind,
        n_modes: 2 * (k_sol + 1),
        stability_modes: k_stab,
        residual: s.residual,
        tail: psi.tail_max(cfg.tail_window),
        kind,
        psi: psi.clone(),
    })
}

/// Traces the zero-mean branch over `c_range` from a Stokes seed near `c = −1`.
///
/// Steps in `c` use the tangent `∂_c ψ` as predictor and a fixed-`c` Newton corrector; the step
/// grows after fast solves, halves after failures, and the resolution doubles whenever the tail
/// exceeds `tail_tol`. Sign changes of `c + 2b'` and of `b'` are bisected and inserted.
/// Failures past the seed are returned inside the partial branch.
pub fn continue_branch(alpha: f64, c_range: (f64, f64), cfg: &SolverConfig) -> Result<Branch> {
    cfg.validate()?;
    let (c_lo, c_hi) = c_range;
    if !(c_lo > -1.0) || !(c_hi >= c_lo) || !c_hi.is_finite() {
        return Err(FkdvError::InvalidArgument(format!("need -1 < c_lo <= c_hi, got {c_lo}..{c_hi}")));
    }
    let stokes = stokes_coefficients(alpha)?;
    let c_seed = c_lo.min(stokes.c(SEED_AMPLITUDE));
    let a_seed = stokes.amplitude_for_c(c_seed)?;
    let mut seed = CosineSeries::new(stokes.psi_cosine(a_seed).to_vec());
    seed = seed.with_modes(cfg.n_min / 2 - 1);
    let metadata = BranchMetadata {
        config: cfg.clone(),
        c_range: [c_lo, c_hi],
        seed_c: c_seed,
        seed_amplitude: a_seed,
        seed: format!("stokes_zero_mean(alpha = {alpha}, a = {a_seed})"),
        accepted_steps: 0,
        rejected_steps: 0,
    };
    let mut branch = Branch { alpha, points: Vec::new(), metadata, abort: None };

    let (mut state, _) = solve_state(alpha, c_seed, &seed, cfg)?;
    let record = |s: &State, kind: PointKind, branch: &mut Branch| -> Result<()> {
        let p = analyze(alpha, s, kind, cfg)?;
        branch.points.push(p);
        Ok(())
    };
    if state.c >= c_lo {
        if let Err(e) = record(&state, PointKind::Regular, &mut branch) {
            branch.abort = Some(e);
            return Ok(branch);
        }
    }

    let h_max = |c: f64| cfg.continuation_step * c.abs().max(1.0);
    let mut h = h_max(state.c);
    while state.c < c_hi {
        let target = if state.c < c_lo { c_lo } else { c_hi };
        let c_next = (state.c + h).min(target);
        match advance(alpha, &state, c_next, cfg) {
            Ok((next, iterations)) => {
                branch.metadata.accepted_steps += 1;
                if next.c > c_lo && state.c >= c_lo {
                    if let Err(e) = insert_refined(alpha, &state, &next, cfg, &mut branch) {
                        branch.abort = Some(e);
                        return Ok(branch);
                    }
                }
                if next.c >= c_lo {
                    if let Err(e) = record(&next, PointKind::Regular, &mut branch) {
                        branch.abort = Some(e);
                        return Ok(branch);
                    }
                }
                state = next;
                if iterations <= FAST_NEWTON {
                    h *= STEP_GROWTH;
                }
                h = h.min(h_max(state.c));
            }
            Err(e @ FkdvError::Resolution { .. }) => {
                branch.abort = Some(e);
                return Ok(branch);
            }
            Err(_) => {
                branch.metadata.rejected_steps += 1;
                h *= 0.5;
                if h < cfg.step_min {
                    branch.abort = Some(FkdvError::StepUnderflow { c: state.c, step: h });
                    return Ok(branch);
                }
            }
        }
    }
    Ok(branch)
}

/// Bisects and records the sign changes of `c + 2b'` and `b'` inside `(a.c, b.c)` in order of `c`.
fn insert_refined(alpha: f64, a: &State, b: &State, cfg: &SolverConfig, branch: &mut Branch) -> Result<()> {
    let mut found: Vec<(State, PointKind)> = Vec::new();
    if a.fold_indicator().signum() != b.fold_indicator().signum() {
        found.push((bisect(alpha, a, b, State::fold_indicator, cfg)?, PointKind::FoldRefined));
    }
    if a.b_prime.signum() != b.b_prime.signum() {
        found.push((bisect(alpha, a, b, |s| s.b_prime, cfg)?, PointKind::TransitionRefined));
    }
    found.sort_by(|x, y| x.0.c.total_cmp(&y.0.c));
    for (s, kind) in found {
        let last = branch.points.last().map(|p| p.c).unwrap_or(f64::NEG_INFINITY);
        if s.c > last && s.c < b.c {
            branch.points.push(analyze(alpha, &s, kind, cfg)?);
        }
    }
    Ok(())
}

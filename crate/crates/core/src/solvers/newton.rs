use faer::linalg::solvers::Solve;
use faer::Mat;

use super::{residual_scale, SolverConfig, Wave};
use crate::error::{FkdvError, Result};
use crate::fourier::symbol;
use crate::galileo::{NormalizedWave, ZeroMeanWave};
use crate::series::CosineSeries;
use crate::stability::restricted_even_block;

/// Which speed is held fixed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Fixed {
    C(f64),
    Omega(f64),
}

#[derive(Clone, Debug)]
pub struct NewtonReport {
    pub solution: CosineSeries,
    pub iterations: usize,
    /// Relative residual before each step and after the last.
    pub residuals: Vec<f64>,
}

impl NewtonReport {
    pub fn residual(&self) -> f64 {
        *self.residuals.last().expect("at least one residual")
    }
}

/// Max-norm of a cosine series evaluated on its natural grid.
fn max_norm(s: &CosineSeries) -> f64 {
    s.to_field(&s.natural_grid()).max_abs()
}

fn pivot_ratio(lu: &faer::linalg::solvers::PartialPivLu<f64>) -> f64 {
    let u = lu.U();
    let n = u.nrows();
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for i in 0..n {
        let d = u[(i, i)].abs();
        lo = lo.min(d);
        hi = hi.max(d);
    }
    if lo == 0.0 {
        f64::INFINITY
    } else {
        hi / lo
    }
}

fn newton_loop(
    start: CosineSeries,
    cfg: &SolverConfig,
    parameter: f64,
    first_unknown: usize,
    residual: impl Fn(&CosineSeries) -> CosineSeries,
    jacobian: impl Fn(&CosineSeries) -> Mat<f64>,
) -> Result<NewtonReport> {
    let k = start.modes();
    let mut u = start;
    let mut residuals = Vec::new();
    for it in 0..=cfg.newton_max_iter {
        let f = residual(&u);
        let res = max_norm(&f) / residual_scale(max_norm(&u));
        if !res.is_finite() {
            return Err(FkdvError::NewtonFailed { iterations: it, residual: res });
        }
        residuals.push(res);
        if res < cfg.residual_tol {
            return Ok(NewtonReport { solution: u, iterations: it, residuals });
        }
        if it == cfg.newton_max_iter || (it > 3 && res > 1e3 * residuals[0]) {
            break;
        }
        let j = jacobian(&u);
        let lu = j.partial_piv_lu();
        let cond = pivot_ratio(&lu);
        if cond > cfg.condition_limit {
            return Err(FkdvError::NearFold { parameter, condition: cond });
        }
        let n = k + 1 - first_unknown;
        let mut rhs = Mat::<f64>::from_fn(n, 1, |i, _| f.coeff((i + first_unknown) as i64));
        lu.solve_in_place(&mut rhs);
        let coeffs = u.as_mut_slice();
        for i in 0..n {
            coeffs[i + first_unknown] -= rhs[(i, 0)];
        }
    }
    Err(FkdvError::NewtonFailed { iterations: residuals.len() - 1, residual: *residuals.last().unwrap() })
}

/// Newton's method for `D^α ψ + cψ = Π₀ψ²` in the even zero-mean subspace spanned by
/// `cos(mx)`, `1 ≤ m ≤ K`; the Jacobian is the matrix of `L|X₀`.
pub fn newton_c_series(alpha: f64, c: f64, seed: &CosineSeries, cfg: &SolverConfig) -> Result<NewtonReport> {
    let mut start = seed.clone();
    start.as_mut_slice()[0] = 0.0;
    let k = start.modes();
    newton_loop(
        start,
        cfg,
        c,
        1,
        |psi| {
            let sq = psi.square();
            let mut f = vec![0.0; k + 1];
            for (m, slot) in f.iter_mut().enumerate().skip(1) {
                *slot = (symbol(m as i64, alpha) + c) * psi.coeff(m as i64) - sq.coeff(m as i64);
            }
            CosineSeries::new(f)
        },
        |psi| restricted_even_block(alpha, c, psi, k),
    )
}

/// Newton's method for `D^α φ + ωφ = φ²` over the even modes `0 ≤ m ≤ K`.
pub fn newton_omega_series(alpha: f64, omega: f64, seed: &CosineSeries, cfg: &SolverConfig) -> Result<NewtonReport> {
    let k = seed.modes();
    newton_loop(
        seed.clone(),
        cfg,
        omega,
        0,
        |phi| {
            let sq = phi.square();
            let f = (0..=k as i64).map(|m| (symbol(m, alpha) + omega) * phi.coeff(m) - sq.coeff(m)).collect();
            CosineSeries::new(f)
        },
        |phi| {
            Mat::from_fn(k + 1, k + 1, |i, j| {
                let (m, n) = (i as i64, j as i64);
                let d = if i == j { symbol(m, alpha) + omega } else { 0.0 };
                if j == 0 {
                    d - 2.0 * phi.coeff(m)
                } else {
                    d - 2.0 * (phi.coeff(m - n) + phi.coeff(m + n))
                }
            })
        },
    )
}

/// Newton's method for `D^α φ + ωφ = φ²` with the first harmonic pinned to `φ̂(1) = a/2`,
/// the unknowns being `ω` and `φ̂(m)` for `m ≠ 1`. Returns the profile and `ω`.
pub fn newton_fixed_amplitude(
    alpha: f64,
    a: f64,
    seed: &CosineSeries,
    omega: f64,
    cfg: &SolverConfig,
) -> Result<(NewtonReport, f64)> {
    let k = seed.modes();
    if k < 2 {
        return Err(FkdvError::InvalidArgument("fixed-amplitude solve needs at least two modes".into()));
    }
    let mut phi = seed.clone();
    phi.as_mut_slice()[1] = 0.5 * a;
    let mut omega = omega;
    let mut residuals = Vec::new();
    for it in 0..=cfg.newton_max_iter {
        let sq = phi.square();
        let f: Vec<f64> = (0..=k as i64).map(|m| (symbol(m, alpha) + omega) * phi.coeff(m) - sq.coeff(m)).collect();
        let fs = CosineSeries::new(f);
        let res = max_norm(&fs) / residual_scale(max_norm(&phi));
        if !res.is_finite() {
            return Err(FkdvError::NewtonFailed { iterations: it, residual: res });
        }
        residuals.push(res);
        if res < cfg.residual_tol {
            return Ok((NewtonReport { solution: phi, iterations: it, residuals }, omega));
        }
        if it == cfg.newton_max_iter {
            break;
        }
        let j = Mat::from_fn(k + 1, k + 1, |i, jj| {
            let (m, n) = (i as i64, jj as i64);
            if jj == 1 {
                return phi.coeff(m);
            }
            let d = if i == jj { symbol(m, alpha) + omega } else { 0.0 };
            if jj == 0 {
                d - 2.0 * phi.coeff(m)
            } else {
                d - 2.0 * (phi.coeff(m - n) + phi.coeff(m + n))
            }
        });
        let lu = j.partial_piv_lu();
        let cond = pivot_ratio(&lu);
        if cond > cfg.condition_limit {
            return Err(FkdvError::NearFold { parameter: a, condition: cond });
        }
        let mut rhs = Mat::<f64>::from_fn(k + 1, 1, |i, _| fs.coeff(i as i64));
        lu.solve_in_place(&mut rhs);
        let coeffs = phi.as_mut_slice();
        for i in 0..=k {
            if i == 1 {
                omega -= rhs[(1, 0)];
            } else {
                coeffs[i] -= rhs[(i, 0)];
            }
        }
    }
    Err(FkdvError::NewtonFailed { iterations: residuals.len() - 1, residual: *residuals.last().unwrap() })
}

/// Fixed-`c` Newton solve on the seed's grid, using modes below the Nyquist frequency.
pub fn newton_fixed_c(alpha: f64, c: f64, seed: &ZeroMeanWave, cfg: &SolverConfig) -> Result<ZeroMeanWave> {
    let grid = seed.psi.grid().clone();
    let s = CosineSeries::from_field(&seed.psi, grid.nyquist() - 1);
    let rep = newton_c_series(alpha, c, &s, cfg)?;
    Ok(ZeroMeanWave::from_psi(alpha, c, rep.solution.to_field(&grid)))
}

pub fn newton_fixed_omega(alpha: f64, omega: f64, seed: &NormalizedWave, cfg: &SolverConfig) -> Result<NormalizedWave> {
    let grid = seed.phi.grid().clone();
    let s = CosineSeries::from_field(&seed.phi, grid.nyquist() - 1);
    let rep = newton_omega_series(alpha, omega, &s, cfg)?;
    Ok(NormalizedWave::new(alpha, omega, rep.solution.to_field(&grid)))
}

/// Newton solve at fixed `c` or fixed `ω`; the seed may be in either form.
pub fn newton_solve(alpha: f64, fixed: Fixed, seed: &Wave, cfg: &SolverConfig) -> Result<Wave> {
    match fixed {
        Fixed::C(c) => {
            let z = match seed {
                Wave::ZeroMean(z) => z.clone(),
                Wave::Normalized(n) => n.to_zero_mean()?,
            };
            newton_fixed_c(alpha, c, &z, cfg).map(Wave::ZeroMean)
        }
        Fixed::Omega(omega) => {
            let n = match seed {
                Wave::Normalized(n) => n.clone(),
                Wave::ZeroMean(z) => z.to_normalized()?,
            };
            newton_fixed_omega(alpha, omega, &n, cfg).map(Wave::Normalized)
        }
    }
}

/// Fixed-`c` solve that doubles the number of modes until the spectral tail is below
/// `cfg.tail_tol`, starting from the seed's band.
pub fn solve_resolved(alpha: f64, c: f64, seed: &CosineSeries, cfg: &SolverConfig) -> Result<NewtonReport> {
    let mut modes = seed.modes().max(cfg.n_min / 2 - 1);
    let mut current = seed.with_modes(modes);
    loop {
        let rep = newton_c_series(alpha, c, &current, cfg)?;
        let tail = rep.solution.tail_max(cfg.tail_window);
        if tail <= cfg.tail_tol {
            return Ok(rep);
        }
        let n = 2 * (modes + 1);
        if 2 * n > cfg.n_max {
            return Err(FkdvError::Resolution { modes: n, tail, tolerance: cfg.tail_tol });
        }
        modes = n - 1;
        current = rep.solution.with_modes(modes);
    }
}

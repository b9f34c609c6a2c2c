use std::f64::consts::PI;

use super::newton::newton_c_series;
use super::SolverConfig;
use crate::error::{FkdvError, Result};
use crate::fourier::symbol;
use crate::galileo::{q_from_gamma, ZeroMeanWave};
use crate::series::CosineSeries;

/// Riemannian gradient, relative to the full gradient, at which ascent hands over to Newton.
const HANDOVER_TOL: f64 = 1e-7;

#[derive(Clone, Debug)]
pub struct VariationalReport {
    pub wave: ZeroMeanWave,
    pub series: CosineSeries,
    /// Ascent iterations summed over all resolutions.
    pub iterations: usize,
    /// Relative Riemannian gradient when ascent stopped.
    pub gradient: f64,
    /// `max ∫u³` over `⟨(D^α + c)u, u⟩ = 4π`.
    pub objective: f64,
    /// `q = (πγ/4)^{1/3}` of the maximizer, `γ = (1/2π)∫ψ³`.
    pub q: Option<f64>,
    pub residual: f64,
}

struct Sphere {
    scale: Vec<f64>,
}

impl Sphere {
    fn new(alpha: f64, c: f64, k: usize) -> Self {
        let scale = (0..=k).map(|m| if m == 0 { 0.0 } else { (symbol(m as i64, alpha) + c).sqrt() }).collect();
        Sphere { scale }
    }

    fn profile(&self, y: &[f64]) -> CosineSeries {
        let mut a = vec![0.0; y.len()];
        for m in 1..y.len() {
            a[m] = y[m] / self.scale[m];
        }
        CosineSeries::new(a)
    }

    /// `G(y) = ∫u³` and its Euclidean gradient `12π (u²)^(m) / s_m`.
    fn objective(&self, y: &[f64]) -> (f64, Vec<f64>) {
        let u = self.profile(y);
        let sq = u.square();
        let g = u.inner(&sq);
        let mut grad = vec![0.0; y.len()];
        for (m, (gm, sm)) in grad.iter_mut().zip(&self.scale).enumerate().skip(1) {
            *gm = 12.0 * PI * sq.coeff(m as i64) / sm;
        }
        (g, grad)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(y: &mut [f64]) {
    let n = dot(y, y).sqrt();
    y.iter_mut().for_each(|v| *v /= n);
}

fn tangent(y: &[f64], g: &[f64]) -> Vec<f64> {
    let p = dot(y, g);
    g.iter().zip(y).map(|(gi, yi)| gi - p * yi).collect()
}

/// Barzilai–Borwein ascent with Armijo backtracking on the unit sphere.
fn ascend(sphere: &Sphere, y0: Vec<f64>, max_iter: usize) -> Result<(Vec<f64>, f64, f64, usize)> {
    let mut y = y0;
    normalize(&mut y);
    let (mut gv, mut grad) = sphere.objective(&y);
    let mut r = tangent(&y, &grad);
    let mut step = 1e-2 / dot(&r, &r).sqrt().max(1e-300);
    for it in 0..max_iter {
        let rn = dot(&r, &r).sqrt();
        let rel = rn / dot(&grad, &grad).sqrt().max(1e-300);
        if rel < HANDOVER_TOL {
            return Ok((y, gv, rel, it));
        }
        let mut t = step;
        let (y_new, gv_new, grad_new) = loop {
            let mut trial: Vec<f64> = y.iter().zip(&r).map(|(a, b)| a + t * b).collect();
            normalize(&mut trial);
            let (g2, d2) = sphere.objective(&trial);
            if g2 >= gv + 1e-4 * t * rn * rn {
                break (trial, g2, d2);
            }
            t *= 0.5;
            if t * rn < 1e-16 {
                return Err(FkdvError::Stagnation { iterations: it, gradient: rel });
            }
        };
        let r_new = tangent(&y_new, &grad_new);
        let s: Vec<f64> = y_new.iter().zip(&y).map(|(a, b)| a - b).collect();
        let dr: Vec<f64> = r_new.iter().zip(&r).map(|(a, b)| a - b).collect();
        let sd = dot(&s, &dr);
        // ascent: the BB step uses −Δr
        step = if sd < 0.0 { dot(&s, &s) / -sd } else { 2.0 * t };
        y = y_new;
        gv = gv_new;
        grad = grad_new;
        r = r_new;
    }
    let rel = dot(&r, &r).sqrt() / dot(&grad, &grad).sqrt().max(1e-300);
    Err(FkdvError::Stagnation { iterations: max_iter, gradient: rel })
}

/// Ground state at speed `c > −1` as the maximizer of `∫u³` on the `(D^α + c)` unit sphere of
/// even zero-mean profiles, rescaled to `ψ = 4πu / ∫u³` and polished by Newton's method.
///
/// The number of modes doubles from `n_min/2 − 1` until the tail falls below `tail_tol`.
pub fn variational_report(alpha: f64, c: f64, cfg: &SolverConfig) -> Result<VariationalReport> {
    if !(alpha > 0.0) {
        return Err(FkdvError::UnsupportedSymbol { alpha });
    }
    if !(c > -1.0) || !c.is_finite() {
        return Err(FkdvError::Domain(format!("the variational problem needs c > -1, got {c}")));
    }
    let mut k = cfg.n_min / 2 - 1;
    let mut y = vec![0.0; k + 1];
    y[1] = 1.0;
    y[2] = 0.1;
    let mut iterations = 0;
    loop {
        let sphere = Sphere::new(alpha, c, k);
        let (yk, gv, rel, it) = ascend(&sphere, y, cfg.petviashvili_max_iter.saturating_sub(iterations))?;
        iterations += it;
        if !(gv > 0.0) {
            return Err(FkdvError::Stagnation { iterations, gradient: rel });
        }
        let guess = sphere.profile(&yk).scale(4.0 * PI / gv);
        let rep = newton_c_series(alpha, c, &guess, cfg)?;
        let tail = rep.solution.tail_max(cfg.tail_window);
        if tail <= cfg.tail_tol {
            let residual = rep.residual();
            let psi = rep.solution;
            let grid = psi.natural_grid();
            let wave = ZeroMeanWave::from_psi(alpha, c, psi.to_field(&grid));
            let q = q_from_gamma(psi.inner(&psi.square()) / (2.0 * PI));
            return Ok(VariationalReport { wave, series: psi, iterations, gradient: rel, objective: gv, q, residual });
        }
        let n = 2 * (k + 1);
        if 2 * n > cfg.n_max {
            return Err(FkdvError::Resolution { modes: n, tail, tolerance: cfg.tail_tol });
        }
        k = n - 1;
        y = yk;
        y.resize(k + 1, 0.0);
    }
}

pub fn variational_minimize(alpha: f64, c: f64, cfg: &SolverConfig) -> Result<ZeroMeanWave> {
    variational_report(alpha, c, cfg).map(|r| r.wave)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::FourierGrid;
    use crate::galileo::two_mode_bound;
    use crate::special::bo_exact;

    #[test]
    fn recovers_bo_ground_state() {
        let cfg = SolverConfig::default();
        let rep = variational_report(1.0, 0.0, &cfg).unwrap();
        let e = bo_exact((0.5f64).atanh(), &FourierGrid::new(256).unwrap()).unwrap();
        let psi = rep.series.to_field(&FourierGrid::new(256).unwrap());
        assert!(psi.sub(&e.phi.project_zero_mean()).unwrap().max_abs() < 1e-8);
        assert!((rep.wave.b - e.b).abs() < 1e-8);
        assert!(rep.residual < 1e-10);
    }

    #[test]
    fn maximizer_beats_two_mode_bound() {
        let cfg = SolverConfig::default();
        for (alpha, c) in [(0.7, 0.3), (1.5, 1.0)] {
            let rep = variational_report(alpha, c, &cfg).unwrap();
            let q = rep.q.unwrap();
            assert!(q <= two_mode_bound(alpha, c) * (1.0 + 1e-9), "alpha={alpha} q={q}");
            assert!(rep.wave.b > 0.0);
        }
    }

    #[test]
    fn rejects_out_of_domain_speed() {
        let cfg = SolverConfig::default();
        assert!(variational_minimize(1.0, -1.0, &cfg).is_err());
        assert!(variational_minimize(0.0, 0.5, &cfg).is_err());
    }
}

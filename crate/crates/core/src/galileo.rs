//! The Galilean map between normalized waves `D^α φ + ωφ = φ²` and zero-mean waves
//! `D^α ψ + cψ = Π₀ψ²`, and the scalar functionals of a wave.

use std::f64::consts::PI;

use crate::error::{FkdvError, Result};
use crate::fourier::PeriodicField;

/// Relative size of `‖Π₀φ‖` below which a profile counts as the constant solution.
pub const CONSTANT_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct NormalizedWave {
    pub alpha: f64,
    pub omega: f64,
    pub phi: PeriodicField,
}

#[derive(Clone, Debug)]
pub struct ZeroMeanWave {
    pub alpha: f64,
    pub c: f64,
    pub b: f64,
    pub psi: PeriodicField,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WaveDiagnostics {
    pub b: f64,
    /// `(1/2π)∫φ²` of the normalized wave.
    pub mu: f64,
    /// `(1/2π)∫ψ³`.
    pub gamma: f64,
    pub energy: f64,
    pub momentum: f64,
    pub mass: f64,
    /// Minimal value `q_c` of the constrained variational problem, `None` unless `γ > 0`.
    pub q_value: Option<f64>,
}

impl NormalizedWave {
    pub fn new(alpha: f64, omega: f64, phi: PeriodicField) -> Self {
        NormalizedWave { alpha, omega, phi }
    }

    /// Max-norm residual of `D^α φ + ωφ − φ²`.
    pub fn residual(&self) -> f64 {
        let lin = self
            .phi
            .frac_derivative(self.alpha)
            .expect("alpha validated by construction")
            .axpy(self.omega, &self.phi)
            .expect("same grid");
        lin.sub(&self.phi.square_dealiased()).expect("same grid").max_abs()
    }

    pub fn is_constant(&self) -> bool {
        let norm = self.phi.norm_l2();
        self.phi.project_zero_mean().norm_l2() < CONSTANT_TOL * norm.max(f64::MIN_POSITIVE)
    }

    /// `ψ = Π₀φ`, `c = ω − (1/π)∫φ`, `b = (ω² − c²)/4`.
    pub fn to_zero_mean(&self) -> Result<ZeroMeanWave> {
        if self.is_constant() {
            return Err(FkdvError::ConstantWave { omega: self.omega });
        }
        let c = self.omega - 2.0 * self.phi.mean();
        let b = 0.25 * (self.omega * self.omega - c * c);
        Ok(ZeroMeanWave { alpha: self.alpha, c, b, psi: self.phi.project_zero_mean() })
    }

    pub fn diagnostics(&self) -> Result<WaveDiagnostics> {
        let zm = self.to_zero_mean()?;
        let mut d = zm.diagnostics();
        d.mu = self.phi.inner_product(&self.phi)? / (2.0 * PI);
        Ok(d)
    }
}

impl ZeroMeanWave {
    /// Wave with `b = (1/2π)∫ψ²` induced from the profile.
    pub fn from_psi(alpha: f64, c: f64, psi: PeriodicField) -> Self {
        let b = psi.inner_product(&psi).expect("same grid") / (2.0 * PI);
        ZeroMeanWave { alpha, c, b, psi }
    }

    /// Max-norm residual of `D^α ψ + cψ − Π₀ψ²`.
    pub fn residual(&self) -> f64 {
        let lin = self
            .psi
            .frac_derivative(self.alpha)
            .expect("alpha validated by construction")
            .axpy(self.c, &self.psi)
            .expect("same grid");
        let nl = self.psi.square_dealiased().project_zero_mean();
        lin.sub(&nl).expect("same grid").max_abs()
    }

    pub fn omega(&self) -> Result<f64> {
        let disc = self.c * self.c + 4.0 * self.b;
        if disc < 0.0 {
            return Err(FkdvError::Domain(format!("c^2 + 4b = {disc} < 0")));
        }
        Ok(disc.sqrt())
    }

    /// `ω = √(c² + 4b)`, `φ = ψ − (c − ω)/2`.
    pub fn to_normalized(&self) -> Result<NormalizedWave> {
        let omega = self.omega()?;
        if self.psi.max_abs() == 0.0 {
            return Err(FkdvError::ConstantWave { omega });
        }
        let phi = self.psi.add_constant(-0.5 * (self.c - omega));
        Ok(NormalizedWave { alpha: self.alpha, omega, phi })
    }

    /// `(1/2π)∫ψ³`.
    pub fn gamma(&self) -> f64 {
        let sq = self.psi.square_dealiased();
        sq.inner_product(&self.psi).expect("same grid") / (2.0 * PI)
    }

    pub fn diagnostics(&self) -> WaveDiagnostics {
        let psi = &self.psi;
        let gamma = self.gamma();
        let dispersive = psi
            .frac_derivative(self.alpha)
            .expect("alpha validated by construction")
            .inner_product(psi)
            .expect("same grid");
        let energy = 0.5 * dispersive - 2.0 * PI * gamma / 3.0;
        let momentum = 0.5 * psi.inner_product(psi).expect("same grid");
        let mass = psi.integral();
        let mu = match self.omega() {
            Ok(omega) => {
                let shift = 0.5 * (omega - self.c);
                self.b + shift * shift
            }
            Err(_) => f64::NAN,
        };
        WaveDiagnostics { b: self.b, mu, gamma, energy, momentum, mass, q_value: q_from_gamma(gamma) }
    }
}

/// `q_c = (πγ/4)^{1/3}`, from `∫ψ³ = 8 q_c³`.
pub fn q_from_gamma(gamma: f64) -> Option<f64> {
    (gamma > 0.0).then(|| (PI * gamma / 4.0).cbrt())
}

/// Upper bound on `q_c` from the two-mode trial family `cos x + cos 2x`-type functions.
pub fn two_mode_bound(alpha: f64, c: f64) -> f64 {
    let s = (2f64.powf(alpha) + c).cbrt() * (1.0 + c).powf(2.0 / 3.0);
    3.0 * PI * s / (2.0 * (3.0 * PI).powf(2.0 / 3.0))
}

pub fn to_zero_mean(w: &NormalizedWave) -> Result<ZeroMeanWave> {
    w.to_zero_mean()
}

pub fn to_normalized(w: &ZeroMeanWave) -> Result<NormalizedWave> {
    w.to_normalized()
}

/// Location of the global maximum, refined past grid resolution by Newton on `f'`.
pub fn argmax(f: &PeriodicField) -> f64 {
    let grid = f.grid();
    let (j, _) =
        f.values().iter().enumerate().fold((0, f64::NEG_INFINITY), |acc, (j, &v)| if v > acc.1 { (j, v) } else { acc });
    let d1 = f.derivative();
    let d2 = d1.derivative();
    let mut x = grid.node(j);
    let h = grid.spacing();
    for _ in 0..30 {
        let curv = d2.eval(x);
        if curv >= 0.0 {
            break;
        }
        let step = d1.eval(x) / curv;
        let next = x - step.clamp(-h, h);
        if (next - x).abs() < 1e-15 {
            x = next;
            break;
        }
        x = next;
    }
    x
}

/// Translate so the maximum sits at `x = 0`.
pub fn phase_align(f: &PeriodicField) -> PeriodicField {
    f.translate(argmax(f))
}

/// Even with a single maximum at `x = 0`, strictly decreasing on `(0, π)` at grid resolution.
pub fn is_single_lobe(f: &PeriodicField) -> bool {
    let aligned = phase_align(f);
    let scale = aligned.max_abs().max(f64::MIN_POSITIVE);
    if aligned.odd_part().max_abs() > 1e-8 * scale {
        return false;
    }
    let n = aligned.grid().n();
    // node n/2 is x = 0, node 0 is x = -π
    let v = aligned.values();
    (n / 2..n - 1).all(|j| v[j + 1] < v[j]) && (n / 2 + 1..n).all(|j| v[j] < v[j - 1])
}

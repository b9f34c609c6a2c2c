//! Small-amplitude Stokes expansions in the amplitude `a` of the first harmonic.

use crate::error::{FkdvError, Result};
use crate::fourier::{FourierGrid, PeriodicField};
use crate::galileo::{NormalizedWave, ZeroMeanWave};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StokesCoeffs {
    pub alpha: f64,
    pub omega2: f64,
    pub phi2_mean: f64,
    pub phi2_cos2: f64,
    pub phi3_cos3: f64,
}

pub fn stokes_coefficients(alpha: f64) -> Result<StokesCoeffs> {
    if !(alpha > 0.0) {
        return Err(FkdvError::Domain(format!("Stokes expansion needs alpha > 0, got {alpha}")));
    }
    let d2 = 2f64.powf(alpha) - 1.0;
    let d3 = 3f64.powf(alpha) - 1.0;
    let omega2 = 1.0 - 1.0 / (2.0 * d2);
    Ok(StokesCoeffs {
        alpha,
        omega2,
        phi2_mean: omega2 - 0.5,
        phi2_cos2: 1.0 / (2.0 * d2),
        phi3_cos3: 1.0 / (2.0 * d2 * d3),
    })
}

impl StokesCoeffs {
    /// Cosine coefficients `ψ̂(0..=3)` of the zero-mean expansion; `ψ = 2 Σ ψ̂(m) cos(mx)`.
    pub fn psi_cosine(&self, a: f64) -> [f64; 4] {
        [0.0, 0.5 * a, 0.5 * self.phi2_cos2 * a * a, 0.5 * self.phi3_cos3 * a * a * a]
    }

    pub fn omega(&self, a: f64) -> f64 {
        1.0 + self.omega2 * a * a
    }

    /// `c = −1 + a²/(2(2^α − 1))`.
    pub fn c(&self, a: f64) -> f64 {
        -1.0 + self.phi2_cos2 * a * a
    }

    pub fn b(&self, a: f64) -> f64 {
        0.5 * a * a
    }

    /// Amplitude whose leading-order speed is `c`; inverse of [`StokesCoeffs::c`].
    pub fn amplitude_for_c(&self, c: f64) -> Result<f64> {
        if !(c >= -1.0) {
            return Err(FkdvError::Domain(format!("no small-amplitude wave below c = -1 (c = {c})")));
        }
        Ok(((c + 1.0) / self.phi2_cos2).sqrt())
    }

    /// Limit of `b'(c)` as `a → 0`.
    pub fn b_prime_limit(&self) -> f64 {
        2f64.powf(self.alpha) - 1.0
    }

    /// Limit of `c + 2b'(c)` as `a → 0`; negative means a fold in `ω` near the bifurcation.
    pub fn fold_indicator_limit(&self) -> f64 {
        2f64.powf(self.alpha + 1.0) - 3.0
    }

    /// Limit of `dμ/dω` along the branch as `a → 0`.
    pub fn mu_omega_slope(&self) -> f64 {
        let p = 2f64.powf(self.alpha);
        (3.0 * p - 5.0) / (2.0 * p - 3.0)
    }
}

/// `φ = 1 + a cos x + a²φ₂ + a³φ₃`, `ω = 1 + ω₂a²`.
pub fn stokes_wave(alpha: f64, a: f64, grid: &FourierGrid) -> Result<NormalizedWave> {
    let s = stokes_coefficients(alpha)?;
    let (a2, a3) = (a * a, a * a * a);
    let phi = PeriodicField::from_cosine(
        grid,
        &[1.0 + a2 * s.phi2_mean, 0.5 * a, 0.5 * a2 * s.phi2_cos2, 0.5 * a3 * s.phi3_cos3],
    );
    Ok(NormalizedWave::new(alpha, s.omega(a), phi))
}

/// Zero-mean expansion with `c = −1 + a²/(2(2^α−1))` and `b = a²/2`.
pub fn stokes_zero_mean(alpha: f64, a: f64, grid: &FourierGrid) -> Result<ZeroMeanWave> {
    let s = stokes_coefficients(alpha)?;
    let psi = PeriodicField::from_cosine(grid, &s.psi_cosine(a));
    Ok(ZeroMeanWave { alpha, c: s.c(a), b: s.b(a), psi })
}

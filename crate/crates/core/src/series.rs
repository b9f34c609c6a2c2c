//! Even profiles stored by their cosine coefficients.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::fourier::{FourierGrid, PeriodicField};

/// `f(x) = f̂(0) + 2 Σ_{m=1}^{K} f̂(m) cos(mx)`, the coefficients being the exponential Fourier
/// coefficients of the even function `f`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CosineSeries {
    coeffs: Vec<f64>,
}

impl Default for CosineSeries {
    fn default() -> Self {
        CosineSeries::zeros(0)
    }
}

impl CosineSeries {
    pub fn new(coeffs: Vec<f64>) -> Self {
        assert!(!coeffs.is_empty(), "a cosine series needs the zero mode");
        CosineSeries { coeffs }
    }

    pub fn zeros(modes: usize) -> Self {
        CosineSeries { coeffs: vec![0.0; modes + 1] }
    }

    /// Even part of a field, keeping modes `0..=modes`.
    pub fn from_field(f: &PeriodicField, modes: usize) -> Self {
        let coeffs = (0..=modes).map(|m| f.coeff(m as i64).re).collect();
        CosineSeries { coeffs }
    }

    /// Highest stored mode `K`.
    pub fn modes(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    /// `f̂(|m|)`, zero beyond the stored band.
    #[inline]
    pub fn coeff(&self, m: i64) -> f64 {
        self.coeffs.get(m.unsigned_abs() as usize).copied().unwrap_or(0.0)
    }

    /// Truncates or zero-pads to `modes`.
    pub fn with_modes(&self, modes: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(modes + 1, 0.0);
        CosineSeries { coeffs }
    }

    /// Smallest grid `N = 2(K+1)` on which the series is represented without the Nyquist mode.
    pub fn natural_grid(&self) -> FourierGrid {
        FourierGrid::new((2 * (self.modes() + 1)).max(8)).expect("even size")
    }

    pub fn to_field(&self, grid: &FourierGrid) -> PeriodicField {
        PeriodicField::from_cosine(grid, &self.coeffs)
    }

    /// Galerkin projection of `f²` onto modes `0..=K`.
    pub fn square(&self) -> CosineSeries {
        let grid = self.natural_grid();
        let sq = self.to_field(&grid).square_dealiased();
        CosineSeries::from_field(&sq, self.modes())
    }

    pub fn scale(&self, s: f64) -> CosineSeries {
        CosineSeries { coeffs: self.coeffs.iter().map(|a| a * s).collect() }
    }

    /// `self + s · other` on the longer of the two bands.
    pub fn axpy(&self, s: f64, other: &CosineSeries) -> CosineSeries {
        let k = self.modes().max(other.modes());
        let coeffs = (0..=k as i64).map(|m| self.coeff(m) + s * other.coeff(m)).collect();
        CosineSeries { coeffs }
    }

    /// `∫_{-π}^{π} f g dx`.
    pub fn inner(&self, other: &CosineSeries) -> f64 {
        let k = self.modes().min(other.modes());
        let mut s = self.coeffs[0] * other.coeffs[0];
        for m in 1..=k {
            s += 2.0 * self.coeffs[m] * other.coeffs[m];
        }
        2.0 * PI * s
    }

    /// `(1/2π)∫f²`.
    pub fn mean_square(&self) -> f64 {
        self.inner(self) / (2.0 * PI)
    }

    /// Largest `|f̂(m)|` over the `window` highest stored modes.
    pub fn tail_max(&self, window: usize) -> f64 {
        let k = self.modes();
        let start = k.saturating_sub(window) + 1;
        self.coeffs[start.min(k)..].iter().fold(0.0, |m, a| m.max(a.abs()))
    }

    /// Smallest `K'` with `|f̂(m)| ≤ tol` for every `m > K'`.
    pub fn effective_modes(&self, tol: f64) -> usize {
        self.coeffs.iter().rposition(|a| a.abs() > tol).unwrap_or(0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs[0]
            + 2.0 * self.coeffs.iter().enumerate().skip(1).map(|(m, a)| a * (m as f64 * x).cos()).sum::<f64>()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, a| m.max(a.abs()))
    }
}

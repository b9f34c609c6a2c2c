//! Uniform collocation grids on `[-π, π)` and real periodic fields with their Fourier coefficients.
//!
//! Coefficients follow the convention `g(x) = Σ_m ĝ(m) e^{imx}` with
//! `ĝ(m) = (1/N) Σ_j g(x_j) e^{-imx_j}`, so `cos x` has `ĝ(±1) = 1/2` and the
//! coefficients of an even field are real. They are stored in FFT order
//! (`m = 0, 1, …, N/2, -N/2+1, …, -1`); the Nyquist mode is real.

use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{FkdvError, Result};

fn planner() -> &'static Mutex<FftPlanner<f64>> {
    static PLANNER: OnceLock<Mutex<FftPlanner<f64>>> = OnceLock::new();
    PLANNER.get_or_init(|| Mutex::new(FftPlanner::new()))
}

struct GridInner {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    padded: OnceLock<FourierGrid>,
}

/// `N` equispaced nodes `x_j = -π + 2πj/N` on the torus.
#[derive(Clone)]
pub struct FourierGrid(Arc<GridInner>);

impl FourierGrid {
    pub fn new(n_modes: usize) -> Result<Self> {
        if n_modes < 8 || !n_modes.is_multiple_of(2) {
            return Err(FkdvError::InvalidArgument(format!("grid size must be even and at least 8, got {n_modes}")));
        }
        let (forward, inverse) = {
            let mut p = planner().lock().expect("fft planner poisoned");
            (p.plan_fft_forward(n_modes), p.plan_fft_inverse(n_modes))
        };
        Ok(FourierGrid(Arc::new(GridInner { n: n_modes, forward, inverse, padded: OnceLock::new() })))
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.0.n
    }

    /// Largest resolved wavenumber `N/2`.
    #[inline]
    pub fn nyquist(&self) -> usize {
        self.0.n / 2
    }

    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.0.n as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        -PI + self.spacing() * j as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n()).map(|j| self.node(j)).collect()
    }

    /// Signed wavenumber stored at FFT index `k`.
    #[inline]
    pub fn wavenumber(&self, k: usize) -> i64 {
        let n = self.n();
        if k <= n / 2 {
            k as i64
        } else {
            k as i64 - n as i64
        }
    }

    #[inline]
    fn index(&self, m: i64) -> Option<usize> {
        let n = self.n() as i64;
        if m.abs() > n / 2 {
            return None;
        }
        Some(if m >= 0 { m as usize } else { (m + n) as usize })
    }

    /// Grid of at least `3N/2` points used to evaluate quadratic products without aliasing.
    fn padded(&self) -> &FourierGrid {
        self.0.padded.get_or_init(|| {
            let m = 2 * (3 * self.n()).div_ceil(4);
            FourierGrid::new(m).expect("padded grid size is valid")
        })
    }

    fn forward(&self, values: &[f64]) -> Vec<Complex64> {
        let n = self.n();
        let scale = 1.0 / n as f64;
        let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.0.forward.process(&mut buf);
        for (k, z) in buf.iter_mut().enumerate() {
            // e^{-im x_0} = (-1)^m for x_0 = -π
            let sign = if k % 2 == 0 { scale } else { -scale };
            *z *= sign;
        }
        buf[n / 2].im = 0.0;
        buf[0].im = 0.0;
        buf
    }

    fn inverse(&self, coeffs: &[Complex64]) -> Vec<f64> {
        let mut buf: Vec<Complex64> =
            coeffs.iter().enumerate().map(|(k, &z)| if k % 2 == 0 { z } else { -z }).collect();
        self.0.inverse.process(&mut buf);
        buf.into_iter().map(|z| z.re).collect()
    }
}

impl PartialEq for FourierGrid {
    fn eq(&self, other: &Self) -> bool {
        self.n() == other.n()
    }
}

impl fmt::Debug for FourierGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FourierGrid").field("n", &self.n()).finish()
    }
}

pub fn make_grid(n_modes: usize) -> Result<FourierGrid> {
    FourierGrid::new(n_modes)
}

/// A real 2π-periodic function sampled on a [`FourierGrid`], together with its coefficients.
#[derive(Clone, Debug)]
pub struct PeriodicField {
    grid: FourierGrid,
    values: Vec<f64>,
    coeffs: Vec<Complex64>,
}

impl PeriodicField {
    pub fn from_values(grid: &FourierGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(FkdvError::GridMismatch { left: grid.n(), right: values.len() });
        }
        let coeffs = grid.forward(&values);
        Ok(PeriodicField { grid: grid.clone(), values, coeffs })
    }

    pub fn from_fn(grid: &FourierGrid, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.nodes().into_iter().map(f).collect();
        Self::from_values(grid, values).expect("length matches grid")
    }

    pub fn constant(grid: &FourierGrid, value: f64) -> Self {
        Self::from_fn(grid, |_| value)
    }

    pub fn zeros(grid: &FourierGrid) -> Self {
        Self::constant(grid, 0.0)
    }

    /// Builds a field from coefficients in FFT order; conjugate symmetry is enforced by
    /// keeping the real part of the synthesized values.
    pub fn from_coeffs(grid: &FourierGrid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.n() {
            return Err(FkdvError::GridMismatch { left: grid.n(), right: coeffs.len() });
        }
        let values = grid.inverse(&coeffs);
        Self::from_values(grid, values)
    }

    /// Even field `ĝ(0) + 2 Σ_{m≥1} ĝ(m) cos(mx)` from its real coefficients `ĝ(0), ĝ(1), …`.
    /// Modes above the Nyquist frequency are dropped.
    pub fn from_cosine(grid: &FourierGrid, cosine: &[f64]) -> Self {
        let n = grid.n();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
        for (m, &a) in cosine.iter().enumerate().take(n / 2 + 1) {
            if m == 0 {
                coeffs[0] = Complex64::new(a, 0.0);
            } else if m == n / 2 {
                // the Nyquist bin carries both ±N/2 contributions
                coeffs[m] = Complex64::new(2.0 * a, 0.0);
            } else {
                coeffs[m] = Complex64::new(a, 0.0);
                coeffs[n - m] = Complex64::new(a, 0.0);
            }
        }
        let values = grid.inverse(&coeffs);
        PeriodicField { grid: grid.clone(), values, coeffs }
    }

    pub fn grid(&self) -> &FourierGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Coefficients in FFT order.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `ĝ(m)`; zero outside the resolved band `|m| ≤ N/2`.
    pub fn coeff(&self, m: i64) -> Complex64 {
        match self.grid.index(m) {
            Some(k) => self.coeffs[k],
            None => Complex64::new(0.0, 0.0),
        }
    }

    /// Real parts of `ĝ(0), …, ĝ(N/2 - 1)`: the cosine coefficients of the even part.
    pub fn cosine_coeffs(&self) -> Vec<f64> {
        (0..self.grid.nyquist()).map(|m| self.coeff(m as i64).re).collect()
    }

    fn check_grid(&self, other: &PeriodicField) -> Result<()> {
        if self.grid != other.grid {
            return Err(FkdvError::GridMismatch { left: self.grid.n(), right: other.grid.n() });
        }
        Ok(())
    }

    fn map_coeffs(&self, f: impl Fn(i64, Complex64) -> Complex64) -> PeriodicField {
        let coeffs: Vec<Complex64> =
            self.coeffs.iter().enumerate().map(|(k, &z)| f(self.grid.wavenumber(k), z)).collect();
        let values = self.grid.inverse(&coeffs);
        PeriodicField { grid: self.grid.clone(), values, coeffs }
    }

    fn map_values(&self, f: impl Fn(f64) -> f64) -> PeriodicField {
        let values = self.values.iter().map(|&v| f(v)).collect();
        PeriodicField::from_values(&self.grid, values).expect("same grid")
    }

    pub fn scale(&self, s: f64) -> PeriodicField {
        PeriodicField {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| v * s).collect(),
            coeffs: self.coeffs.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add_constant(&self, s: f64) -> PeriodicField {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v += s);
        out.coeffs[0].re += s;
        out
    }

    pub fn add(&self, other: &PeriodicField) -> Result<PeriodicField> {
        self.axpy(1.0, other)
    }

    pub fn sub(&self, other: &PeriodicField) -> Result<PeriodicField> {
        self.axpy(-1.0, other)
    }

    /// `self + s · other`.
    pub fn axpy(&self, s: f64, other: &PeriodicField) -> Result<PeriodicField> {
        self.check_grid(other)?;
        Ok(PeriodicField {
            grid: self.grid.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + s * b).collect(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + s * b).collect(),
        })
    }

    /// Pointwise product on the collocation grid (aliasing included).
    pub fn mul_pointwise(&self, other: &PeriodicField) -> Result<PeriodicField> {
        self.check_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect();
        PeriodicField::from_values(&self.grid, values)
    }

    /// Product computed on a zero-padded `3N/2` grid and truncated back to `|m| ≤ N/2`:
    /// exact Galerkin projection of the quadratic term.
    pub fn mul_dealiased(&self, other: &PeriodicField) -> Result<PeriodicField> {
        self.check_grid(other)?;
        let n = self.grid.n();
        let half = n / 2;
        let big = self.grid.padded();
        let m = big.n();
        let pad = |f: &PeriodicField| {
            let mut c = vec![Complex64::new(0.0, 0.0); m];
            for k in 0..n {
                let w = self.grid.wavenumber(k);
                let z = f.coeffs[k];
                if w as usize == half {
                    c[half] += z * 0.5;
                    c[m - half] += z * 0.5;
                } else if w >= 0 {
                    c[w as usize] += z;
                } else {
                    c[(m as i64 + w) as usize] += z;
                }
            }
            big.inverse(&c)
        };
        let u = pad(self);
        let v = if std::ptr::eq(self, other) { u.clone() } else { pad(other) };
        let prod: Vec<f64> = u.iter().zip(&v).map(|(a, b)| a * b).collect();
        let pc = big.forward(&prod);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
        for (k, slot) in coeffs.iter_mut().enumerate() {
            let w = self.grid.wavenumber(k);
            *slot = if w as usize == half {
                Complex64::new((pc[half] + pc[m - half]).re, 0.0)
            } else if w >= 0 {
                pc[w as usize]
            } else {
                pc[(m as i64 + w) as usize]
            };
        }
        let values = self.grid.inverse(&coeffs);
        Ok(PeriodicField { grid: self.grid.clone(), values, coeffs })
    }

    pub fn square_dealiased(&self) -> PeriodicField {
        self.mul_dealiased(self).expect("same grid")
    }

    /// Fourier multiplier `|m|^α`, with `0⁰ = 1` at `α = 0`.
    pub fn frac_derivative(&self, alpha: f64) -> Result<PeriodicField> {
        if !(alpha >= 0.0) {
            return Err(FkdvError::UnsupportedSymbol { alpha });
        }
        Ok(self.map_coeffs(|m, z| z * symbol(m, alpha)))
    }

    /// Spectral derivative `∂ₓ`; the Nyquist mode is dropped.
    pub fn derivative(&self) -> PeriodicField {
        let half = self.grid.nyquist() as i64;
        self.map_coeffs(
            |m, z| {
                if m.abs() == half {
                    Complex64::new(0.0, 0.0)
                } else {
                    z * Complex64::new(0.0, m as f64)
                }
            },
        )
    }

    /// `f(x + shift)` by spectral phase rotation.
    pub fn translate(&self, shift: f64) -> PeriodicField {
        let half = self.grid.nyquist() as i64;
        self.map_coeffs(|m, z| {
            let rotated = z * Complex64::from_polar(1.0, m as f64 * shift);
            if m.abs() == half {
                Complex64::new(rotated.re, 0.0)
            } else {
                rotated
            }
        })
    }

    /// Spectral interpolation at an arbitrary point.
    pub fn eval(&self, x: f64) -> f64 {
        let mut s = 0.0;
        for (k, z) in self.coeffs.iter().enumerate() {
            let m = self.grid.wavenumber(k) as f64;
            s += (z * Complex64::from_polar(1.0, m * x)).re;
        }
        s
    }

    /// Same function on another grid: coefficients are zero-padded or truncated.
    pub fn resample(&self, grid: &FourierGrid) -> PeriodicField {
        let n_new = grid.n();
        let half_new = (n_new / 2) as i64;
        let half_old = self.grid.nyquist() as i64;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n_new];
        for (k, slot) in coeffs.iter_mut().enumerate() {
            let m = grid.wavenumber(k);
            let z = if m.abs() < half_old {
                self.coeff(m)
            } else if m.abs() == half_old {
                // split the old Nyquist bin across ±N/2 unless the new grid also folds them
                if m.abs() == half_new {
                    self.coeff(m)
                } else {
                    self.coeff(half_old) * 0.5
                }
            } else {
                Complex64::new(0.0, 0.0)
            };
            *slot = if m.abs() == half_new { Complex64::new(z.re, 0.0) } else { z };
        }
        let values = grid.inverse(&coeffs);
        PeriodicField { grid: grid.clone(), values, coeffs }
    }

    pub fn mean(&self) -> f64 {
        self.coeffs[0].re
    }

    /// `Π₀ f = f - mean(f)`.
    pub fn project_zero_mean(&self) -> PeriodicField {
        self.add_constant(-self.mean())
    }

    /// Trapezoidal rule for `∫_{-π}^{π} f dx`.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.spacing()
    }

    pub fn inner_product(&self, other: &PeriodicField) -> Result<f64> {
        self.check_grid(other)?;
        Ok(self.values.iter().zip(&other.values).map(|(a, b)| a * b).sum::<f64>() * self.grid.spacing())
    }

    pub fn norm_l2(&self) -> f64 {
        self.inner_product(self).expect("same grid").sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest `|ĝ(m)|` among the `k` highest resolved wavenumbers `N/2 - k < |m| ≤ N/2`.
    pub fn spectral_tail_max(&self, k: usize) -> f64 {
        let half = self.grid.nyquist();
        let k = k.min(half);
        ((half - k + 1)..=half)
            .map(|m| self.coeff(m as i64).norm().max(self.coeff(-(m as i64)).norm()))
            .fold(0.0, f64::max)
    }

    /// Odd part `(f(x) - f(-x))/2`.
    pub fn odd_part(&self) -> PeriodicField {
        self.map_coeffs(|_, z| Complex64::new(0.0, z.im))
    }

    pub fn even_part(&self) -> PeriodicField {
        self.map_coeffs(|_, z| Complex64::new(z.re, 0.0))
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> PeriodicField {
        self.map_values(f)
    }
}

#[inline]
pub(crate) fn symbol(m: i64, alpha: f64) -> f64 {
    if m == 0 {
        if alpha == 0.0 {
            1.0
        } else {
            0.0
        }
    } else {
        (m.unsigned_abs() as f64).powf(alpha)
    }
}

pub fn frac_derivative(f: &PeriodicField, alpha: f64) -> Result<PeriodicField> {
    f.frac_derivative(alpha)
}

pub fn project_zero_mean(f: &PeriodicField) -> PeriodicField {
    f.project_zero_mean()
}

pub fn inner_product(f: &PeriodicField, g: &PeriodicField) -> Result<f64> {
    f.inner_product(g)
}

pub fn spectral_tail_max(f: &PeriodicField, k: usize) -> f64 {
    f.spectral_tail_max(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn grid(n: usize) -> FourierGrid {
        FourierGrid::new(n).unwrap()
    }

    #[test]
    fn grid_nodes_and_errors() {
        let g = grid(8);
        let nodes = g.nodes();
        assert_eq!(nodes.len(), 8);
        assert_abs_diff_eq!(nodes[0], -PI);
        assert_abs_diff_eq!(nodes[1], -3.0 * PI / 4.0, epsilon = 1e-15);
        assert_abs_diff_eq!(nodes[7], 3.0 * PI / 4.0, epsilon = 1e-15);
        assert_abs_diff_eq!(grid(512).spacing(), 2.0 * PI / 512.0);
        assert!(FourierGrid::new(7).is_err());
        assert!(FourierGrid::new(6).is_err());
    }

    #[test]
    fn fractional_derivative_of_modes() {
        let g = grid(32);
        let cos = PeriodicField::from_fn(&g, f64::cos);
        for alpha in [0.0, 0.3, 1.0, 1.7, 2.0] {
            let d = cos.frac_derivative(alpha).unwrap();
            for (a, b) in d.values().iter().zip(cos.values()) {
                assert_abs_diff_eq!(a, b, epsilon = 1e-13);
            }
        }
        let c2 = PeriodicField::from_fn(&g, |x| (2.0 * x).cos());
        let d = c2.frac_derivative(2.0).unwrap();
        for (a, b) in d.values().iter().zip(c2.values()) {
            assert_abs_diff_eq!(*a, 4.0 * b, epsilon = 1e-12);
        }
        let s3 = PeriodicField::from_fn(&g, |x| (3.0 * x).sin());
        let d = s3.frac_derivative(1.0).unwrap();
        for (a, b) in d.values().iter().zip(s3.values()) {
            assert_abs_diff_eq!(*a, 3.0 * b, epsilon = 1e-12);
        }
        assert!(matches!(cos.frac_derivative(-0.5), Err(FkdvError::UnsupportedSymbol { .. })));
    }

    #[test]
    fn zero_mode_convention() {
        let g = grid(16);
        let one = PeriodicField::constant(&g, 3.0);
        assert_abs_diff_eq!(one.frac_derivative(0.0).unwrap().mean(), 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(one.frac_derivative(0.5).unwrap().max_abs(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn projection_and_inner_products() {
        let g = grid(64);
        let five = PeriodicField::constant(&g, 5.0);
        assert!(five.project_zero_mean().max_abs() < 1e-14);
        let cos = PeriodicField::from_fn(&g, f64::cos);
        let sin = PeriodicField::from_fn(&g, f64::sin);
        let shifted = PeriodicField::from_fn(&g, |x| 1.0 + x.cos());
        let p = shifted.project_zero_mean();
        for (a, b) in p.values().iter().zip(cos.values()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-14);
        }
        assert_abs_diff_eq!(cos.inner_product(&cos).unwrap(), PI, epsilon = 1e-13);
        assert_abs_diff_eq!(cos.inner_product(&sin).unwrap(), 0.0, epsilon = 1e-13);
        let one = PeriodicField::constant(&g, 1.0);
        assert_abs_diff_eq!(one.inner_product(&one).unwrap(), 2.0 * PI, epsilon = 1e-13);
        let other = PeriodicField::constant(&grid(32), 1.0);
        assert!(matches!(one.inner_product(&other), Err(FkdvError::GridMismatch { .. })));
    }

    #[test]
    fn spectral_tail_of_benjamin_ono_profile() {
        // the BO profile sinh γ / (cosh γ - cos x) has coefficients exactly e^{-γ|m|}
        let gamma = 0.2f64;
        let bo = |x: f64| gamma.sinh() / (gamma.cosh() - x.cos());
        let cos = PeriodicField::from_fn(&grid(64), f64::cos);
        assert!(cos.spectral_tail_max(10) < 1e-15);
        let coarse = PeriodicField::from_fn(&grid(64), bo);
        let oracle = (-gamma * 23.0).exp();
        assert!(coarse.spectral_tail_max(10) > 1e-8);
        assert!((coarse.spectral_tail_max(10) - oracle).abs() < 0.05 * oracle);
        let fine = PeriodicField::from_fn(&grid(1024), bo);
        assert!(fine.spectral_tail_max(10) < 1e-8);
        assert_abs_diff_eq!(fine.coeff(5).re, (-gamma * 5.0).exp(), epsilon = 1e-13);
    }

    #[test]
    fn second_derivative_matches_finite_differences() {
        let g = grid(64);
        let f = |x: f64| (3.0 * x).cos() + 0.5 * (2.0 * x).sin() + 0.2 * (5.0 * x).cos();
        let d2 = |x: f64| -9.0 * (3.0 * x).cos() - 2.0 * (2.0 * x).sin() - 5.0 * (5.0 * x).cos();
        let field = PeriodicField::from_fn(&g, f);
        let lap = field.frac_derivative(2.0).unwrap();
        let h = 1e-3;
        for (j, x) in g.nodes().into_iter().enumerate() {
            let fd = (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
            assert!((lap.values()[j] + fd).abs() < 1e-4);
            assert!((lap.values()[j] + d2(x)).abs() < 1e-11);
        }
    }

    #[test]
    fn dealiased_square_is_exact_for_band_limited_fields() {
        let g = grid(16);
        // modes up to 7 square to modes up to 14, beyond N/2 = 8: the Galerkin product keeps |m| ≤ 8
        let f = PeriodicField::from_fn(&g, |x| x.cos() + (7.0 * x).cos());
        let sq = f.square_dealiased();
        // cos²x + 2 cos x cos 7x + cos² 7x = 1 + cos2x/2 + cos6x + cos8x + cos14x/2
        assert_abs_diff_eq!(sq.coeff(0).re, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(sq.coeff(2).re, 0.25, epsilon = 1e-14);
        assert_abs_diff_eq!(sq.coeff(6).re, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(sq.coeff(4).re, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(sq.coeff(8).re, 1.0, epsilon = 1e-14);
        // the aliased pointwise product folds cos 14x onto cos 2x
        let aliased = f.mul_pointwise(&f).unwrap();
        assert_abs_diff_eq!(aliased.coeff(2).re, 0.5, epsilon = 1e-14);
    }

    #[test]
    fn translation_and_cosine_constructor() {
        let g = grid(32);
        let f = PeriodicField::from_cosine(&g, &[0.5, 0.25, 0.1]);
        let direct = PeriodicField::from_fn(&g, |x| 0.5 + 0.5 * x.cos() + 0.2 * (2.0 * x).cos());
        for (a, b) in f.values().iter().zip(direct.values()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-14);
        }
        let shifted = f.translate(0.3);
        let expected = PeriodicField::from_fn(&g, |x| 0.5 + 0.5 * (x + 0.3).cos() + 0.2 * (2.0 * (x + 0.3)).cos());
        for (a, b) in shifted.values().iter().zip(expected.values()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-13);
        }
        assert_abs_diff_eq!(f.eval(0.123), direct.eval(0.123), epsilon = 1e-13);
        assert_abs_diff_eq!(f.eval(0.123), 0.5 + 0.5 * 0.123f64.cos() + 0.2 * 0.246f64.cos(), epsilon = 1e-13);
        let fine = f.resample(&grid(128));
        assert_abs_diff_eq!(fine.eval(0.7), f.eval(0.7), epsilon = 1e-13);
    }

    fn random_field(n: usize) -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec(-10.0f64..10.0, n)
    }

    proptest! {
        #[test]
        fn round_trip_values_coeffs(vals in random_field(48)) {
            let g = grid(48);
            let f = PeriodicField::from_values(&g, vals.clone()).unwrap();
            let back = PeriodicField::from_coeffs(&g, f.coeffs().to_vec()).unwrap();
            let scale = vals.iter().fold(1e-300f64, |m, v| m.max(v.abs()));
            for (a, b) in back.values().iter().zip(&vals) {
                prop_assert!((a - b).abs() <= 1e-12 * scale);
            }
            for m in 1..24i64 {
                let d = f.coeff(m) - f.coeff(-m).conj();
                prop_assert!(d.norm() <= 1e-12 * scale);
            }
        }

        #[test]
        fn frac_derivative_linear_and_translation_covariant(
            a in random_field(32), b in random_field(32), s in -3.0f64..3.0, alpha in 0.0f64..2.0, shift in 0usize..32
        ) {
            let g = grid(32);
            let f = PeriodicField::from_values(&g, a).unwrap();
            let h = PeriodicField::from_values(&g, b).unwrap();
            let lhs = f.axpy(s, &h).unwrap().frac_derivative(alpha).unwrap();
            let rhs = f.frac_derivative(alpha).unwrap().axpy(s, &h.frac_derivative(alpha).unwrap()).unwrap();
            let scale = 1.0 + lhs.max_abs();
            for (x, y) in lhs.values().iter().zip(rhs.values()) {
                prop_assert!((x - y).abs() < 1e-11 * scale);
            }
            let theta = shift as f64 * g.spacing();
            let d_then_shift = f.frac_derivative(alpha).unwrap().translate(theta);
            let shift_then_d = f.translate(theta).frac_derivative(alpha).unwrap();
            for m in -15i64..=15 {
                let z = d_then_shift.coeff(m) - shift_then_d.coeff(m);
                prop_assert!(z.norm() < 1e-11 * scale);
            }
        }

        #[test]
        fn projection_idempotent_and_self_adjoint(a in random_field(16), b in random_field(16)) {
            let g = grid(16);
            let f = PeriodicField::from_values(&g, a).unwrap();
            let h = PeriodicField::from_values(&g, b).unwrap();
            let p = f.project_zero_mean();
            let pp = p.project_zero_mean();
            for (x, y) in p.values().iter().zip(pp.values()) {
                prop_assert!((x - y).abs() < 1e-12);
            }
            let l = f.project_zero_mean().inner_product(&h).unwrap();
            let r = f.inner_product(&h.project_zero_mean()).unwrap();
            prop_assert!((l - r).abs() < 1e-9);
        }
    }
}

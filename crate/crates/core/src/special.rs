//! Complete elliptic integrals, Jacobi elliptic functions, and the closed-form periodic waves
//! of the Benjamin–Ono (`α = 1`) and KdV (`α = 2`) equations.

use std::f64::consts::PI;

use crate::error::{FkdvError, Result};
use crate::fourier::{FourierGrid, PeriodicField};

/// Largest modulus accepted; `K(k)` grows like `ln(4/k')` and loses meaning beyond this.
pub const K_CAP: f64 = 1.0 - 1e-12;

fn check_modulus(k: f64) -> Result<()> {
    if !(0.0..=K_CAP).contains(&k) {
        return Err(FkdvError::Domain(format!("elliptic modulus must lie in [0, 1 - 1e-12], got {k}")));
    }
    Ok(())
}

/// Complete elliptic integrals `K(k)` and `E(k)` of modulus `k` by the arithmetic–geometric mean.
pub fn elliptic_k_e(k: f64) -> Result<(f64, f64)> {
    check_modulus(k)?;
    let mut a = 1.0f64;
    let mut b = ((1.0 - k) * (1.0 + k)).sqrt();
    let mut c = k;
    let mut sum = 0.5 * c * c;
    let mut pow = 0.5;
    for _ in 0..64 {
        if c.abs() <= f64::EPSILON * a {
            break;
        }
        let an = 0.5 * (a + b);
        let bn = (a * b).sqrt();
        c = 0.5 * (a - b);
        a = an;
        b = bn;
        pow *= 2.0;
        sum += pow * c * c;
    }
    let kk = PI / (2.0 * a);
    Ok((kk, kk * (1.0 - sum)))
}

/// `(sn, cn, dn)(u, k)` by the descending Landen transformation.
pub fn jacobi_sn_cn_dn(u: f64, k: f64) -> Result<(f64, f64, f64)> {
    check_modulus(k)?;
    if k == 0.0 {
        return Ok((u.sin(), u.cos(), 1.0));
    }
    let mut a = [0.0f64; 32];
    let mut c = [0.0f64; 32];
    a[0] = 1.0;
    let mut b = ((1.0 - k) * (1.0 + k)).sqrt();
    c[0] = k;
    let mut n = 0;
    while c[n].abs() > f64::EPSILON * a[n] && n + 1 < a.len() {
        a[n + 1] = 0.5 * (a[n] + b);
        c[n + 1] = 0.5 * (a[n] - b);
        b = (a[n] * b).sqrt();
        n += 1;
    }
    let mut phi = (1u64 << n) as f64 * a[n] * u;
    for j in (1..=n).rev() {
        phi = 0.5 * (phi + (c[j] / a[j] * phi.sin()).asin());
    }
    let (sn, cn) = phi.sin_cos();
    let dn = (1.0 - k * k * sn * sn).sqrt();
    Ok((sn, cn, dn))
}

pub fn jacobi_cn(u: f64, k: f64) -> Result<f64> {
    Ok(jacobi_sn_cn_dn(u, k)?.1)
}

/// A closed-form solution of `D^α φ + ω φ = φ²` together with its zero-mean data.
#[derive(Clone, Debug)]
pub struct ExactWave {
    pub alpha: f64,
    /// `γ` for Benjamin–Ono, the elliptic modulus `k` for KdV.
    pub parameter: f64,
    pub omega: f64,
    pub phi: PeriodicField,
    pub c: f64,
    pub b: f64,
    pub mu: f64,
}

/// Benjamin–Ono wave `φ = sinh γ / (cosh γ − cos x)` with `ω = coth γ`.
pub fn bo_exact(gamma: f64, grid: &FourierGrid) -> Result<ExactWave> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(FkdvError::Domain(format!("BO parameter gamma must be positive, got {gamma}")));
    }
    let omega = 1.0 / gamma.tanh();
    let (sh, ch) = (gamma.sinh(), gamma.cosh());
    let phi = PeriodicField::from_fn(grid, |x| sh / (ch - x.cos()));
    Ok(ExactWave { alpha: 1.0, parameter: gamma, omega, phi, c: omega - 2.0, b: omega - 1.0, mu: omega })
}

/// BO parameter `γ` with `coth γ = ω`.
pub fn bo_gamma_for_omega(omega: f64) -> Result<f64> {
    if !(omega > 1.0) {
        return Err(FkdvError::Domain(format!("BO waves need omega > 1, got {omega}")));
    }
    Ok((1.0 / omega).atanh())
}

/// Scalars `(ω, c, b)` of the cnoidal KdV wave with modulus `k`.
pub fn kdv_scalars(k: f64) -> Result<(f64, f64, f64)> {
    check_modulus(k)?;
    let (kk, ee) = elliptic_k_e(k)?;
    let k2 = k * k;
    let s = (1.0 - k2 + k2 * k2).sqrt();
    let r = kk * kk / (PI * PI);
    let omega = 4.0 * r * s;
    let q = ee / kk;
    let c = 4.0 * r * (2.0 - k2 - 3.0 * q);
    let b = 4.0 * r * r * (-3.0 * (1.0 - k2) + 6.0 * (2.0 - k2) * q - 9.0 * q * q);
    Ok((omega, c, b))
}

/// Cnoidal wave `φ = (2K²/π²)[√(1−k²+k⁴) + 1 − 2k² + 3k² cn²(Kx/π; k)]` of `−φ'' + ωφ = φ²`.
pub fn kdv_exact(k: f64, grid: &FourierGrid) -> Result<ExactWave> {
    if !(k > 0.0) {
        return Err(FkdvError::Domain(format!("KdV modulus must be positive, got {k}")));
    }
    let (omega, c, b) = kdv_scalars(k)?;
    let (kk, _) = elliptic_k_e(k)?;
    let k2 = k * k;
    let s = (1.0 - k2 + k2 * k2).sqrt();
    let r = 2.0 * kk * kk / (PI * PI);
    let mut values = Vec::with_capacity(grid.n());
    for x in grid.nodes() {
        let cn = jacobi_cn(kk * x / PI, k)?;
        values.push(r * (s + 1.0 - 2.0 * k2 + 3.0 * k2 * cn * cn));
    }
    let phi = PeriodicField::from_values(grid, values)?;
    let shift = 0.5 * (omega - c);
    Ok(ExactWave { alpha: 2.0, parameter: k, omega, phi, c, b, mu: b + shift * shift })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
        #[allow(clippy::too_many_arguments)]
        fn rec(
            f: &dyn Fn(f64) -> f64,
            a: f64,
            b: f64,
            fa: f64,
            fm: f64,
            fb: f64,
            whole: f64,
            tol: f64,
            depth: u32,
        ) -> f64 {
            let m = 0.5 * (a + b);
            let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
            let (flm, frm) = (f(lm), f(rm));
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
                return left + right + (left + right - whole) / 15.0;
            }
            rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
                + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
        }
        let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
        rec(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, 50)
    }

    fn quad_k_e(k: f64) -> (f64, f64) {
        let kq = simpson(&|t: f64| 1.0 / (1.0 - k * k * t.sin().powi(2)).sqrt(), 0.0, PI / 2.0, 1e-15);
        let eq = simpson(&|t: f64| (1.0 - k * k * t.sin().powi(2)).sqrt(), 0.0, PI / 2.0, 1e-15);
        (kq, eq)
    }

    #[test]
    fn elliptic_integrals_against_quadrature() {
        let (k0, e0) = elliptic_k_e(0.0).unwrap();
        assert_abs_diff_eq!(k0, PI / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(e0, PI / 2.0, epsilon = 1e-15);
        for k in [0.1, 0.5, 0.8, 0.95, 0.99] {
            let (kk, ee) = elliptic_k_e(k).unwrap();
            let (kq, eq) = quad_k_e(k);
            assert!((kk - kq).abs() < 1e-12 * kq, "K({k}) = {kk} vs {kq}");
            assert!((ee - eq).abs() < 1e-12 * eq, "E({k}) = {ee} vs {eq}");
        }
        let (k8, e8) = elliptic_k_e(0.8).unwrap();
        assert_abs_diff_eq!(k8, 1.995302778, epsilon = 1e-9);
        assert_abs_diff_eq!(e8, 1.276349943, epsilon = 1e-9);
    }

    #[test]
    fn elliptic_modulus_limits() {
        assert!(elliptic_k_e(1.0).is_err());
        assert!(elliptic_k_e(-0.1).is_err());
        assert!(jacobi_cn(0.3, 1.0).is_err());
        let (kk, ee) = elliptic_k_e(1.0 - 1e-12).unwrap();
        assert!(kk > 14.0);
        assert!((ee - 1.0).abs() < 1e-9);
    }

    #[test]
    fn cn_special_values() {
        for k in [0.0, 0.3, 0.8, 0.999] {
            let (kk, _) = elliptic_k_e(k).unwrap();
            assert_abs_diff_eq!(jacobi_cn(0.0, k).unwrap(), 1.0, epsilon = 1e-15);
            assert_abs_diff_eq!(jacobi_cn(kk, k).unwrap(), 0.0, epsilon = 1e-10);
            assert_abs_diff_eq!(jacobi_cn(2.0 * kk, k).unwrap(), -1.0, epsilon = 1e-10);
        }
        for u in [-2.0, 0.1, 1.3, 5.0] {
            assert_abs_diff_eq!(jacobi_cn(u, 0.0).unwrap(), f64::cos(u), epsilon = 1e-15);
        }
    }

    #[test]
    fn cn_satisfies_its_differential_equation() {
        // d cn / du = -sn dn
        let k = 0.7;
        let h = 1e-5;
        for u in [0.2, 1.1, 2.5, 4.0] {
            let (sn, _, dn) = jacobi_sn_cn_dn(u, k).unwrap();
            let fd = (jacobi_cn(u + h, k).unwrap() - jacobi_cn(u - h, k).unwrap()) / (2.0 * h);
            assert!((fd + sn * dn).abs() < 1e-9);
        }
    }

    #[test]
    fn bo_wave_closed_forms() {
        let g = FourierGrid::new(256).unwrap();
        let w = bo_exact(3f64.ln() / 2.0, &g).unwrap();
        assert_abs_diff_eq!(w.omega, 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(w.c, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(w.b, 1.0, epsilon = 1e-14);
        // (1/2π)∫φ = 1, i.e. ∫_0^π φ = π by evenness
        assert_abs_diff_eq!(w.phi.mean(), 1.0, epsilon = 1e-13);
        let mu = w.phi.inner_product(&w.phi).unwrap() / (2.0 * PI);
        assert_abs_diff_eq!(mu, w.mu, epsilon = 1e-12);
        for gamma in [0.3, 1.0, 2.0, 3.0] {
            let w = bo_exact(gamma, &g).unwrap();
            assert_abs_diff_eq!(w.b - (w.c + 1.0), 0.0, epsilon = 1e-12);
            assert_abs_diff_eq!(w.omega * w.omega, w.c * w.c + 4.0 * w.b, epsilon = 1e-10);
        }
        assert!(bo_exact(0.0, &g).is_err());
        assert!(bo_exact(-1.0, &g).is_err());
    }

    fn residual_alpha(phi: &PeriodicField, alpha: f64, omega: f64) -> f64 {
        let lin = phi.frac_derivative(alpha).unwrap().axpy(omega, phi).unwrap();
        lin.sub(&phi.square_dealiased()).unwrap().max_abs()
    }

    #[test]
    fn exact_waves_solve_the_stationary_equation() {
        let g = FourierGrid::new(1024).unwrap();
        let bo = bo_exact(0.2, &g).unwrap();
        assert!(bo.phi.spectral_tail_max(10) < 1e-8);
        assert!(residual_alpha(&bo.phi, 1.0, bo.omega) < 1e-8);
        let g = FourierGrid::new(256).unwrap();
        for k in [0.2, 0.5, 0.8, 0.95] {
            let w = kdv_exact(k, &g).unwrap();
            assert!(w.phi.spectral_tail_max(10) < 1e-8);
            assert!(residual_alpha(&w.phi, 2.0, w.omega) < 1e-9, "k = {k}");
            let mean = w.phi.mean();
            assert!((w.c - (w.omega - 2.0 * mean)).abs() < 1e-12);
            let psi = w.phi.project_zero_mean();
            let b = psi.inner_product(&psi).unwrap() / (2.0 * PI);
            assert!((b - w.b).abs() < 1e-11 * (1.0 + w.b));
            assert!((w.omega * w.omega - w.c * w.c - 4.0 * w.b).abs() < 1e-10 * w.omega * w.omega);
        }
    }

    #[test]
    fn kdv_limits() {
        let (_, c, b) = kdv_scalars(1e-4).unwrap();
        assert_abs_diff_eq!(c, -1.0, epsilon = 1e-7);
        assert_abs_diff_eq!(b, 0.0, epsilon = 1e-7);
        assert!(kdv_exact(0.0, &FourierGrid::new(16).unwrap()).is_err());
        // b / c^{3/2} drifts toward 3/π, but only like 1 + O(1/K)
        let ratio = |k: f64| {
            let (_, c, b) = kdv_scalars(k).unwrap();
            b / c.powf(1.5) * PI / 3.0
        };
        assert!(ratio(1.0 - 1e-6) > ratio(1.0 - 1e-12));
        assert!(ratio(1.0 - 1e-9) > ratio(1.0 - 1e-12));
        assert!((ratio(1.0 - 1e-12) - 1.2610316562863).abs() < 1e-6);
    }

    proptest! {
        #[test]
        fn legendre_relation(k in 0.01f64..0.99) {
            let kp = ((1.0 - k) * (1.0 + k)).sqrt();
            let (kk, ee) = elliptic_k_e(k).unwrap();
            let (kkp, eep) = elliptic_k_e(kp).unwrap();
            prop_assert!((ee * kkp + eep * kk - kk * kkp - PI / 2.0).abs() < 1e-10);
        }

        #[test]
        fn jacobi_identities_and_period(u in -10.0f64..10.0, k in 0.0f64..0.999) {
            let (sn, cn, dn) = jacobi_sn_cn_dn(u, k).unwrap();
            prop_assert!((sn * sn + cn * cn - 1.0).abs() < 1e-10);
            prop_assert!((dn * dn + k * k * sn * sn - 1.0).abs() < 1e-10);
            let (kk, _) = elliptic_k_e(k).unwrap();
            let shifted = jacobi_cn(u + 4.0 * kk, k).unwrap();
            prop_assert!((shifted - cn).abs() < 1e-9);
        }
    }
}

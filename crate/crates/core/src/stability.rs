//! Spectral stability of a zero-mean wave through the linearized operator `L = D^α + c − 2ψ`.
//!
//! For an even profile `L` commutes with the reflection `x ↦ −x`, so its Fourier–Galerkin
//! matrix over `|m| ≤ K` splits into a cosine block of size `K + 1` and a sine block of size
//! `K`. Both are assembled in the orthonormal bases `{1/√(2π), cos(mx)/√π}` and `{sin(mx)/√π}`,
//! where, with `ψ̂` the exponential coefficients of `ψ`,
//!
//! ```text
//! even[m][n] = (m^α + c)δ_mn − 2(ψ̂(m−n) + ψ̂(m+n))     m, n ≥ 1
//! odd[m][n]  = (m^α + c)δ_mn − 2(ψ̂(m−n) − ψ̂(m+n))
//! ```
//!
//! and `even[0][0] = c − 2ψ̂(0)`, `even[0][m] = −2√2 ψ̂(m)`. Together they are orthogonally
//! similar to the `(2K+1)`-dimensional matrix `(|m|^α + c)δ_mn − 2ψ̂(m−n)`.

use std::f64::consts::PI;

use faer::linalg::solvers::Solve;
use faer::{Mat, MatRef, Side};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{FkdvError, Result};
use crate::fourier::{symbol, FourierGrid, PeriodicField};
use crate::galileo::ZeroMeanWave;
use crate::series::CosineSeries;

/// Relative threshold for calling an eigenvalue zero.
pub const ZERO_TOL: f64 = 1e-6;
/// `|b'|` at or below this is reported as marginal.
pub const BPRIME_TOL: f64 = 1e-9;
/// Default tail tolerance used by [`assemble_linearized`].
pub const TAIL_TOL: f64 = 1e-8;

fn linalg_err(e: impl std::fmt::Debug) -> FkdvError {
    FkdvError::LinearAlgebra(format!("{e:?}"))
}

/// Cosine block over modes `0..=k`.
pub fn even_block(alpha: f64, c: f64, psi: &CosineSeries, k: usize) -> Mat<f64> {
    let s2 = std::f64::consts::SQRT_2;
    Mat::from_fn(k + 1, k + 1, |i, j| {
        let (m, n) = (i as i64, j as i64);
        match (i, j) {
            (0, 0) => c - 2.0 * psi.coeff(0),
            (0, _) => -2.0 * s2 * psi.coeff(n),
            (_, 0) => -2.0 * s2 * psi.coeff(m),
            _ => {
                let d = if i == j { symbol(m, alpha) + c } else { 0.0 };
                d - 2.0 * (psi.coeff(m - n) + psi.coeff(m + n))
            }
        }
    })
}

/// Cosine block restricted to the zero-mean subspace (modes `1..=k`): the matrix of `L|X₀`.
pub fn restricted_even_block(alpha: f64, c: f64, psi: &CosineSeries, k: usize) -> Mat<f64> {
    Mat::from_fn(k, k, |i, j| {
        let (m, n) = (i as i64 + 1, j as i64 + 1);
        let d = if i == j { symbol(m, alpha) + c } else { 0.0 };
        d - 2.0 * (psi.coeff(m - n) + psi.coeff(m + n))
    })
}

/// Sine block over modes `1..=k`.
pub fn odd_block(alpha: f64, c: f64, psi: &CosineSeries, k: usize) -> Mat<f64> {
    Mat::from_fn(k, k, |i, j| {
        let (m, n) = (i as i64 + 1, j as i64 + 1);
        let d = if i == j { symbol(m, alpha) + c } else { 0.0 };
        d - 2.0 * (psi.coeff(m - n) - psi.coeff(m + n))
    })
}

/// Truncated Galerkin matrix of `L`, stored as its cosine and sine blocks.
#[derive(Clone, Debug)]
pub struct OperatorMatrix {
    pub alpha: f64,
    pub c: f64,
    /// Highest retained wavenumber `K`.
    pub modes: usize,
    pub psi: CosineSeries,
    pub even: Mat<f64>,
    pub odd: Mat<f64>,
}

impl OperatorMatrix {
    pub fn from_series(alpha: f64, c: f64, psi: &CosineSeries, modes: usize) -> Self {
        OperatorMatrix {
            alpha,
            c,
            modes,
            psi: psi.clone(),
            even: even_block(alpha, c, psi, modes),
            odd: odd_block(alpha, c, psi, modes),
        }
    }

    /// Dimension `2K + 1` of the full matrix.
    pub fn size(&self) -> usize {
        2 * self.modes + 1
    }

    /// `L|X₀` in the cosine basis.
    pub fn restricted(&self) -> MatRef<'_, f64> {
        self.even.as_ref().submatrix(1, 1, self.modes, self.modes)
    }

    /// The full matrix in the exponential basis `e^{imx}`, `m = −K..=K`.
    pub fn full(&self) -> Mat<f64> {
        let k = self.modes as i64;
        Mat::from_fn(self.size(), self.size(), |i, j| {
            let (m, n) = (i as i64 - k, j as i64 - k);
            let d = if m == n { symbol(m, self.alpha) + self.c } else { 0.0 };
            d - 2.0 * self.psi.coeff(m - n)
        })
    }

    /// Maximum absolute row sum over both blocks.
    pub fn norm_inf(&self) -> f64 {
        let rows = |a: &Mat<f64>| {
            (0..a.nrows()).map(|i| (0..a.ncols()).map(|j| a[(i, j)].abs()).sum::<f64>()).fold(0.0, f64::max)
        };
        rows(&self.even).max(rows(&self.odd))
    }

    pub fn max_asymmetry(&self) -> f64 {
        let asym = |a: &Mat<f64>| {
            let mut m = 0.0f64;
            for i in 0..a.nrows() {
                for j in 0..i {
                    m = m.max((a[(i, j)] - a[(j, i)]).abs());
                }
            }
            m
        };
        asym(&self.even).max(asym(&self.odd))
    }

    /// `‖L ∂ₓψ‖ / (‖L‖ ‖∂ₓψ‖)`; `∂ₓψ` is the translation mode.
    pub fn translation_residual(&self) -> f64 {
        let k = self.modes;
        // ∂ₓψ = −2 Σ m ψ̂(m) sin(mx), coefficient −2√π m ψ̂(m) in the orthonormal sine basis
        let v: Vec<f64> = (1..=k).map(|m| -2.0 * PI.sqrt() * m as f64 * self.psi.coeff(m as i64)).collect();
        let norm_v = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm_v == 0.0 {
            return 0.0;
        }
        let mut sq = 0.0;
        for i in 0..k {
            let r: f64 = (0..k).map(|j| self.odd[(i, j)] * v[j]).sum();
            sq += r * r;
        }
        sq.sqrt() / (self.norm_inf() * norm_v)
    }
}

/// Builds the operator from a resolved wave; `2K + 1` may not exceed the grid size and the
/// coefficients dropped beyond `K` must lie below [`TAIL_TOL`].
pub fn assemble_linearized(w: &ZeroMeanWave, modes: usize) -> Result<OperatorMatrix> {
    assemble_linearized_with_tol(w, modes, TAIL_TOL)
}

pub fn assemble_linearized_with_tol(w: &ZeroMeanWave, modes: usize, tail_tol: f64) -> Result<OperatorMatrix> {
    let n = w.psi.grid().n();
    if 2 * modes + 1 > n {
        return Err(FkdvError::InvalidArgument(format!("2K + 1 = {} exceeds the grid size {n}", 2 * modes + 1)));
    }
    let full = CosineSeries::from_field(&w.psi, n / 2);
    let dropped = full.as_slice()[modes + 1..].iter().fold(0.0f64, |m, a| m.max(a.abs()));
    if dropped > tail_tol {
        return Err(FkdvError::Resolution { modes, tail: dropped, tolerance: tail_tol });
    }
    Ok(OperatorMatrix::from_series(w.alpha, w.c, &full.with_modes(modes), modes))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Clone, Debug)]
pub struct EigenCounts {
    /// `n(L)`: eigenvalues below `−zero_tol · scale`.
    pub n_neg: usize,
    /// `z(L)`: eigenvalues within `zero_tol · scale` of zero.
    pub z_zero: usize,
    /// ‖L‖ estimated as the largest eigenvalue magnitude.
    pub scale: f64,
    /// All eigenvalues in nondecreasing order, tagged with the block they came from.
    pub eigenvalues: Vec<(f64, Parity)>,
}

impl EigenCounts {
    pub fn lowest(&self, count: usize) -> Vec<f64> {
        self.eigenvalues.iter().take(count).map(|e| e.0).collect()
    }

    /// Eigenvalues ordered by magnitude relative to `scale`.
    pub fn smallest_relative(&self, count: usize) -> Vec<f64> {
        let mut v: Vec<f64> = self.eigenvalues.iter().map(|e| e.0.abs() / self.scale).collect();
        v.sort_by(f64::total_cmp);
        v.truncate(count);
        v
    }
}

pub fn symmetric_eigenvalues(a: MatRef<'_, f64>) -> Result<Vec<f64>> {
    a.self_adjoint_eigenvalues(Side::Lower).map_err(linalg_err)
}

/// Counts from the eigenvalues of both parity blocks.
pub fn eigen_counts(l: &OperatorMatrix, zero_tol: f64) -> Result<EigenCounts> {
    let even = symmetric_eigenvalues(l.even.as_ref())?;
    let odd = symmetric_eigenvalues(l.odd.as_ref())?;
    let mut eigenvalues: Vec<(f64, Parity)> =
        even.into_iter().map(|e| (e, Parity::Even)).chain(odd.into_iter().map(|e| (e, Parity::Odd))).collect();
    eigenvalues.sort_by(|a, b| a.0.total_cmp(&b.0));
    let scale = eigenvalues.iter().fold(0.0f64, |m, e| m.max(e.0.abs())).max(f64::MIN_POSITIVE);
    let thr = zero_tol * scale;
    let n_neg = eigenvalues.iter().filter(|e| e.0 < -thr).count();
    let z_zero = eigenvalues.iter().filter(|e| e.0.abs() <= thr).count();
    Ok(EigenCounts { n_neg, z_zero, scale, eigenvalues })
}

/// `(n(L), z(L))` predicted from the sign of `c + 2b'(c)`.
pub fn predicted_counts(c_plus_2bprime: f64, tol: f64) -> (usize, usize) {
    if c_plus_2bprime > tol {
        (1, 1)
    } else if c_plus_2bprime < -tol {
        (2, 1)
    } else {
        (1, 2)
    }
}

/// Lowest eigenfunction of the cosine block, sampled on `grid`.
pub fn ground_state(l: &OperatorMatrix, grid: &FourierGrid) -> Result<PeriodicField> {
    let evd = l.even.self_adjoint_eigen(Side::Lower).map_err(linalg_err)?;
    let u = evd.U();
    let k = l.modes;
    let mut cos = vec![0.0; k + 1];
    // orthonormal coefficients -> exponential cosine coefficients
    cos[0] = u[(0, 0)] / (2.0 * PI).sqrt();
    for m in 1..=k {
        cos[m] = 0.5 * u[(m, 0)] / PI.sqrt();
    }
    Ok(PeriodicField::from_cosine(grid, &cos))
}

/// Result of the linear-solve evaluation of `b'(c)`.
#[derive(Clone, Debug)]
pub struct BPrime {
    pub value: f64,
    /// Centered finite difference of `b` from neighbors, when supplied.
    pub fd_value: Option<f64>,
    pub method_gap: Option<f64>,
    /// `∂_c ψ`, the solution of `L|X₀ v = −ψ`.
    pub dc_psi: CosineSeries,
    /// Smallest `|eigenvalue|` of `L|X₀` over its largest, when requested.
    pub kernel_margin: Option<f64>,
}

/// Solves `L|X₀ v = −ψ` in the cosine subspace; `b' = (1/π)⟨ψ, v⟩`.
///
/// `neighbors` are `(c, b)` pairs on either side used for the finite-difference cross-check.
/// With `check_kernel`, a near-singular `L|X₀` is reported as [`FkdvError::DegenerateKernel`].
pub fn b_prime_series(
    alpha: f64,
    c: f64,
    psi: &CosineSeries,
    neighbors: Option<[(f64, f64); 2]>,
    check_kernel: bool,
) -> Result<BPrime> {
    let k = psi.modes();
    let j = restricted_even_block(alpha, c, psi, k);
    let kernel_margin = if check_kernel {
        let ev = symmetric_eigenvalues(j.as_ref())?;
        let big = ev.iter().fold(0.0f64, |m, e| m.max(e.abs()));
        let small = ev.iter().fold(f64::INFINITY, |m, e| m.min(e.abs()));
        let margin = small / big;
        if margin < ZERO_TOL {
            return Err(FkdvError::DegenerateKernel { smallest: margin });
        }
        Some(margin)
    } else {
        None
    };
    let lu = j.partial_piv_lu();
    let mut rhs = Mat::<f64>::from_fn(k, 1, |i, _| -psi.coeff(i as i64 + 1));
    lu.solve_in_place(&mut rhs);
    let mut v = vec![0.0; k + 1];
    for i in 0..k {
        v[i + 1] = rhs[(i, 0)];
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(FkdvError::DegenerateKernel { smallest: 0.0 });
    }
    let dc_psi = CosineSeries::new(v);
    let value = psi.inner(&dc_psi) / PI;
    let fd_value = neighbors.map(|[(c0, b0), (c1, b1)]| (b1 - b0) / (c1 - c0));
    Ok(BPrime { value, fd_value, method_gap: fd_value.map(|f| (f - value).abs()), dc_psi, kernel_margin })
}

pub fn b_prime(w: &ZeroMeanWave, neighbors: Option<(&ZeroMeanWave, &ZeroMeanWave)>) -> Result<BPrime> {
    let modes = w.psi.grid().nyquist() - 1;
    let psi = CosineSeries::from_field(&w.psi, modes);
    b_prime_series(w.alpha, w.c, &psi, neighbors.map(|(a, b)| [(a.c, a.b), (b.c, b.b)]), true)
}

/// One closed-form entry of the constraint matrices against its direct evaluation.
#[derive(Clone, Debug, Serialize)]
pub struct EntryCheck {
    pub name: &'static str,
    pub direct: f64,
    pub closed_form: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstraintReport {
    /// `P(0)` for the constraints `{1, ψ²}`.
    pub p: [[f64; 2]; 2],
    /// `D(0)` for the constraints `{1, ψ}`.
    pub d: [[f64; 2]; 2],
    pub det_p: f64,
    pub det_d: f64,
    pub gamma: f64,
    /// `−4π²γ/(c + 2b')`; `None` at a fold.
    pub det_p_closed: Option<f64>,
    /// `−2π²b'/(c + 2b')`; `None` at a fold.
    pub det_d_closed: Option<f64>,
    pub entries: Vec<EntryCheck>,
    pub at_fold: bool,
}

impl ConstraintReport {
    /// Largest relative discrepancy between direct values and closed forms.
    pub fn max_relative_error(&self) -> Option<f64> {
        let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(f64::MIN_POSITIVE);
        let dp = rel(self.det_p, self.det_p_closed?);
        let dd = rel(self.det_d, self.det_d_closed?);
        let scale = self.entries.iter().fold(0.0f64, |m, e| m.max(e.closed_form.abs()));
        let entries = self.entries.iter().fold(0.0f64, |m, e| m.max((e.direct - e.closed_form).abs() / scale));
        Some(dp.max(dd).max(entries))
    }
}

/// `P(0)` and `D(0)` from solves with the cosine block; the right-hand sides are even, the
/// kernel `∂ₓψ` is odd.
pub fn constraint_matrices_series(alpha: f64, c: f64, psi: &CosineSeries, b_prime: f64) -> Result<ConstraintReport> {
    if psi.max_abs_coeff() == 0.0 {
        return Err(FkdvError::InvalidArgument("constraint matrices need a nonzero wave".into()));
    }
    let k = psi.modes();
    let e = even_block(alpha, c, psi, k);
    let sq = psi.square();
    let to_basis = |f: &CosineSeries| -> Vec<f64> {
        (0..=k)
            .map(|m| if m == 0 { (2.0 * PI).sqrt() * f.coeff(0) } else { 2.0 * PI.sqrt() * f.coeff(m as i64) })
            .collect()
    };
    let one = {
        let mut v = vec![0.0; k + 1];
        v[0] = (2.0 * PI).sqrt();
        v
    };
    let vp = to_basis(psi);
    let vq = to_basis(&sq);
    let rhs_vecs = [&one, &vp, &vq];
    let mut rhs = Mat::<f64>::from_fn(k + 1, 3, |i, j| rhs_vecs[j][i]);
    let lu = e.partial_piv_lu();
    lu.solve_in_place(&mut rhs);
    let dot = |col: usize, v: &[f64]| (0..=k).map(|i| rhs[(i, col)] * v[i]).sum::<f64>();
    if (0..3).any(|j| (0..=k).any(|i| !rhs[(i, j)].is_finite())) {
        return Err(FkdvError::LinearAlgebra("singular cosine block".into()));
    }
    let l11 = dot(0, &one);
    let l1p = dot(0, &vp);
    let lp1 = dot(1, &one);
    let lpp = dot(1, &vp);
    let l1q = dot(0, &vq);
    let lq1 = dot(2, &one);
    let lqq = dot(2, &vq);
    let p = [[l11, l1q], [lq1, lqq]];
    let d = [[l11, l1p], [lp1, lpp]];
    let det_p = p[0][0] * p[1][1] - p[0][1] * p[1][0];
    let det_d = d[0][0] * d[1][1] - d[0][1] * d[1][0];
    let gamma = sq.inner(psi) / (2.0 * PI);
    let cp = c + 2.0 * b_prime;
    let at_fold = cp.abs() < 1e-8 * (1.0 + c.abs());
    let (det_p_closed, det_d_closed, entries) = if at_fold {
        (None, None, Vec::new())
    } else {
        let pi2 = PI * PI;
        let entries = vec![
            EntryCheck { name: "<L^-1 1, 1>", direct: l11, closed_form: 2.0 * PI / cp },
            EntryCheck { name: "<L^-1 1, psi>", direct: l1p, closed_form: -2.0 * PI * b_prime / cp },
            EntryCheck { name: "<L^-1 psi, 1>", direct: lp1, closed_form: -2.0 * PI * b_prime / cp },
            EntryCheck {
                name: "<L^-1 psi, psi>",
                direct: lpp,
                closed_form: -PI * b_prime + 2.0 * PI * b_prime * b_prime / cp,
            },
        ];
        (Some(-4.0 * pi2 * gamma / cp), Some(-2.0 * pi2 * b_prime / cp), entries)
    };
    Ok(ConstraintReport { p, d, det_p, det_d, gamma, det_p_closed, det_d_closed, entries, at_fold })
}

pub fn constraint_matrices(w: &ZeroMeanWave, b_prime: f64) -> Result<ConstraintReport> {
    let modes = w.psi.grid().nyquist() - 1;
    constraint_matrices_series(w.alpha, w.c, &CosineSeries::from_field(&w.psi, modes), b_prime)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerdictKind {
    Stable,
    MarginallyStable,
    Unstable,
    DegenerateKernel,
}

impl VerdictKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            VerdictKind::Stable => "stable",
            VerdictKind::MarginallyStable => "marginal",
            VerdictKind::Unstable => "unstable",
            VerdictKind::DegenerateKernel => "degenerate",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "stable" => VerdictKind::Stable,
            "marginal" => VerdictKind::MarginallyStable,
            "unstable" => VerdictKind::Unstable,
            "degenerate" => VerdictKind::DegenerateKernel,
            _ => return None,
        })
    }

    /// Whether the wave is spectrally stable.
    pub fn is_stable(&self) -> bool {
        matches!(self, VerdictKind::Stable | VerdictKind::MarginallyStable)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityVerdict {
    pub kind: VerdictKind,
    pub n_l: usize,
    pub z_l: usize,
    pub b_prime: f64,
    pub c_plus_2bprime: f64,
}

impl StabilityVerdict {
    /// Whether `(n(L), z(L))` agrees with the prediction from `c + 2b'`.
    pub fn counts_consistent(&self, tol: f64) -> bool {
        predicted_counts(self.c_plus_2bprime, tol) == (self.n_l, self.z_l)
    }
}

/// Verdict from the sign of `b'`; a nontrivial kernel of `L|X₀` (margin below `ZERO_TOL`) overrides.
pub fn classify(b_prime: f64, c: f64, counts: &EigenCounts, kernel_margin: Option<f64>) -> StabilityVerdict {
    let kind = if kernel_margin.is_some_and(|m| m < ZERO_TOL) {
        VerdictKind::DegenerateKernel
    } else if b_prime.abs() <= BPRIME_TOL {
        VerdictKind::MarginallyStable
    } else if b_prime > 0.0 {
        VerdictKind::Stable
    } else {
        VerdictKind::Unstable
    };
    StabilityVerdict { kind, n_l: counts.n_neg, z_l: counts.z_zero, b_prime, c_plus_2bprime: c + 2.0 * b_prime }
}

/// Eigenvalues of `∂ₓL` on the zero-mean subspace over modes `1..=k`.
///
/// Writing `η = a + s` in cosine and sine parts, `∂ₓL η = λη` becomes
/// `λ² a = −M L_o M L_e a` with `M = diag(m)`, `L_e = L|X₀` and `L_o` the sine block. After
/// removing the translation mode from `L_o = V D Vᵀ`, the nonzero `λ²` are `−μ` for the
/// eigenvalues `μ` of the symmetric matrix `D^{1/2} Vᵀ M L_e M V D^{1/2}`. When `L_o` has
/// negative directions the general eigensolver is used on the full matrix instead.
pub fn dx_l_spectrum(alpha: f64, c: f64, psi: &CosineSeries, k: usize) -> Result<Vec<Complex64>> {
    let le = restricted_even_block(alpha, c, psi, k);
    let lo = odd_block(alpha, c, psi, k);
    let evd = lo.self_adjoint_eigen(Side::Lower).map_err(linalg_err)?;
    let d: Vec<f64> = (0..k).map(|i| evd.S()[i]).collect();
    let dmax = d.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let thr = ZERO_TOL * dmax;
    let deflate = d[0].abs() <= thr;
    let keep: Vec<usize> = (0..k).filter(|&i| !(deflate && i == 0)).collect();
    if keep.iter().any(|&i| d[i] < -thr) {
        return dx_l_spectrum_general(&le, &lo, k);
    }
    let u = evd.U();
    let r = keep.len();
    // T = D^{1/2} Vᵀ M
    let t = Mat::<f64>::from_fn(r, k, |i, j| d[keep[i]].max(0.0).sqrt() * u[(j, keep[i])] * (j + 1) as f64);
    let h = &t * &le * t.transpose();
    let h = Mat::<f64>::from_fn(r, r, |i, j| 0.5 * (h[(i, j)] + h[(j, i)]));
    let mu = symmetric_eigenvalues(h.as_ref())?;
    let mut out = Vec::with_capacity(2 * k);
    for m in mu {
        if m < 0.0 {
            let l = (-m).sqrt();
            out.push(Complex64::new(l, 0.0));
            out.push(Complex64::new(-l, 0.0));
        } else {
            let l = m.sqrt();
            out.push(Complex64::new(0.0, l));
            out.push(Complex64::new(0.0, -l));
        }
    }
    if deflate {
        out.push(Complex64::new(0.0, 0.0));
        out.push(Complex64::new(0.0, 0.0));
    }
    out.sort_by(|a, b| b.re.total_cmp(&a.re).then(a.im.abs().total_cmp(&b.im.abs())));
    Ok(out)
}

/// The same spectrum from the general eigensolver applied to the `2k × 2k` block matrix.
pub fn dx_l_spectrum_general(le: &Mat<f64>, lo: &Mat<f64>, k: usize) -> Result<Vec<Complex64>> {
    // unknowns (a, s): λa = M L_o s, λs = −M L_e a
    let a = Mat::<f64>::from_fn(2 * k, 2 * k, |i, j| {
        if i < k && j >= k {
            (i + 1) as f64 * lo[(i, j - k)]
        } else if i >= k && j < k {
            -((i - k + 1) as f64) * le[(i - k, j)]
        } else {
            0.0
        }
    });
    let ev = a.eigenvalues().map_err(linalg_err)?;
    let mut out: Vec<Complex64> = ev.into_iter().map(|z| Complex64::new(z.re, z.im)).collect();
    out.sort_by(|a, b| b.re.total_cmp(&a.re).then(a.im.abs().total_cmp(&b.im.abs())));
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnstableEigenvalue {
    /// Spectral abscissa `max Re λ`.
    pub max_real_part: f64,
    /// An eigenvalue attaining it.
    pub eigenvalue: Complex64,
    /// Number of eigenvalues with real part above `1e-4`.
    pub count_above: usize,
}

pub fn unstable_eigenvalue_series(alpha: f64, c: f64, psi: &CosineSeries, k: usize) -> Result<UnstableEigenvalue> {
    let spec = dx_l_spectrum(alpha, c, psi, k)?;
    let top = spec[0];
    Ok(UnstableEigenvalue {
        max_real_part: top.re,
        eigenvalue: top,
        count_above: spec.iter().filter(|z| z.re > 1e-4).count(),
    })
}

pub fn unstable_eigenvalue(w: &ZeroMeanWave, modes: usize) -> Result<UnstableEigenvalue> {
    let psi = CosineSeries::from_field(&w.psi, modes);
    unstable_eigenvalue_series(w.alpha, w.c, &psi, modes)
}

/// Max-norm residuals, relative to `max(1, ‖ψ‖∞)`, of `Lψ + ψ² + b`, `L1 + 2ψ − c` and
/// `L v + ψ + b'` for `v = ∂_c ψ`.
pub fn range_residuals(
    alpha: f64,
    c: f64,
    psi: &CosineSeries,
    dc_psi: &CosineSeries,
    b_prime: f64,
) -> Result<[f64; 3]> {
    let k = psi.modes().max(dc_psi.modes());
    let grid = FourierGrid::new(2 * (k + 1))?;
    let p = psi.to_field(&grid);
    let v = dc_psi.to_field(&grid);
    let apply_l = |f: &PeriodicField| -> Result<PeriodicField> {
        let lin = f.frac_derivative(alpha)?.axpy(c, f)?;
        lin.axpy(-2.0, &p.mul_dealiased(f)?)
    };
    let b = psi.mean_square();
    let scale = p.max_abs().max(1.0);
    let r1 = apply_l(&p)?.add(&p.square_dealiased())?.add_constant(b).max_abs() / scale;
    let one = PeriodicField::constant(&grid, 1.0);
    let r2 = apply_l(&one)?.axpy(2.0, &p)?.add_constant(-c).max_abs() / scale;
    let r3 = apply_l(&v)?.add(&p)?.add_constant(b_prime).max_abs() / scale;
    Ok([r1, r2, r3])
}

//! WebAssembly bindings for a single static page: solve one wave, trace a short branch, or
//! compute the spectrum of `∂ₓL`. Every export returns a JSON string.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use fkdv::galileo::phase_align;
use fkdv::solvers::{continue_branch, BranchPoint, SolverConfig};
use fkdv::stability::dx_l_spectrum;
use fkdv::FourierGrid;

/// Widest `c` interval a single `trace` call accepts, to keep the page responsive.
pub const MAX_TRACE_WIDTH: f64 = 5.0;
const PLOT_POINTS: usize = 256;

fn config() -> SolverConfig {
    SolverConfig { check_doubling: false, n_max: 2048, ..SolverConfig::default() }
}

fn point(alpha: f64, c: f64) -> Result<BranchPoint, String> {
    if !(alpha > 1.0 / 3.0 && alpha <= 2.0) {
        return Err(format!("alpha = {alpha} outside (1/3, 2]"));
    }
    let br = continue_branch(alpha, (c, c), &config()).map_err(|e| e.to_string())?;
    if let Some(e) = br.abort {
        return Err(e.to_string());
    }
    br.points.into_iter().next().ok_or_else(|| format!("no wave at c = {c}"))
}

fn scalars(p: &BranchPoint) -> Value {
    json!({
        "c": p.c,
        "b": p.b,
        "omega": p.omega,
        "b_prime": p.b_prime,
        "n_neg": p.n_neg,
        "z_zero": p.z_zero,
        "verdict": p.verdict.as_str(),
        "n_modes": p.n_modes,
    })
}

/// The wave at speed `c`, sampled on `[-π, π)` with its maximum at `x = 0`.
pub fn profile_value(alpha: f64, c: f64) -> Result<Value, String> {
    let p = point(alpha, c)?;
    let grid = FourierGrid::new(PLOT_POINTS).map_err(|e| e.to_string())?;
    let psi = phase_align(&p.psi.with_modes(p.psi.modes().min(PLOT_POINTS / 2 - 1)).to_field(&grid));
    let mut out = scalars(&p);
    out["x"] = json!(grid.nodes());
    out["psi"] = json!(psi.values());
    Ok(out)
}

/// Branch scalars over `[c_lo, c_hi]`.
pub fn trace_value(alpha: f64, c_lo: f64, c_hi: f64) -> Result<Value, String> {
    if !(c_hi - c_lo <= MAX_TRACE_WIDTH) {
        return Err(format!("c range wider than {MAX_TRACE_WIDTH}"));
    }
    if !(alpha > 1.0 / 3.0 && alpha <= 2.0) {
        return Err(format!("alpha = {alpha} outside (1/3, 2]"));
    }
    let br = continue_branch(alpha, (c_lo, c_hi), &config()).map_err(|e| e.to_string())?;
    Ok(json!({
        "alpha": alpha,
        "points": br.points.iter().map(scalars).collect::<Vec<_>>(),
        "abort": br.abort.map(|e| e.to_string()),
    }))
}

/// Eigenvalues of `∂ₓL` with the largest real parts.
pub fn spectrum_value(alpha: f64, c: f64, count: usize) -> Result<Value, String> {
    let p = point(alpha, c)?;
    let spec = dx_l_spectrum(alpha, c, &p.psi, p.stability_modes).map_err(|e| e.to_string())?;
    let mut out = scalars(&p);
    out["re"] = json!(spec.iter().take(count).map(|z| z.re).collect::<Vec<_>>());
    out["im"] = json!(spec.iter().take(count).map(|z| z.im).collect::<Vec<_>>());
    Ok(out)
}

fn export(v: Result<Value, String>) -> Result<String, JsError> {
    v.map(|v| v.to_string()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn profile(alpha: f64, c: f64) -> Result<String, JsError> {
    export(profile_value(alpha, c))
}

#[wasm_bindgen]
pub fn trace(alpha: f64, c_lo: f64, c_hi: f64) -> Result<String, JsError> {
    export(trace_value(alpha, c_lo, c_hi))
}

#[wasm_bindgen]
pub fn spectrum(alpha: f64, c: f64, count: usize) -> Result<String, JsError> {
    export(spectrum_value(alpha, c, count))
}

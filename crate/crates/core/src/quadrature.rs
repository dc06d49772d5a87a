//! Adaptive Simpson quadrature, used for arc length.

use crate::curve::Curve;
use crate::error::Result;

/// Absolute tolerance for arc-length integrals.
pub const ARCLENGTH_TOL: f64 = 1e-10;

const MAX_DEPTH: u32 = 48;

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson<F>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a)?;
    let fb = f(b)?;
    let m = 0.5 * (a + b);
    let fm = f(m)?;
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH)
}

#[allow(clippy::too_many_arguments)]
fn step<F>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm)?;
    let frm = f(rm)?;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    Ok(step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?
        + step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?)
}

/// Arc length of `curve` between parameters `a` and `b` (signed: negative
/// when `b < a`).
pub fn arclength(curve: &dyn Curve, a: f64, b: f64, tol: f64) -> Result<f64> {
    adaptive_simpson(&|t| curve.speed(t), a, b, tol)
}

/// Cumulative arc length from the first grid point to each grid point.
pub fn cumulative_arclength(curve: &dyn Curve, grid: &[f64], tol: f64) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(grid.len());
    let mut s = 0.0;
    out.push(0.0);
    let per_interval = tol / grid.len().max(1) as f64;
    for w in grid.windows(2) {
        s += arclength(curve, w[0], w[1], per_interval)?;
        out.push(s);
    }
    Ok(out)
}

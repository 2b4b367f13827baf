//! Bracketing root finding.

use crate::error::{LabError, Result};

/// Brent's method: inverse quadratic interpolation safeguarded by bisection.
///
/// `f(a)` and `f(b)` must have opposite signs (or one of them be zero).
/// Iterates until the bracket is below `xtol` plus a few ulps of the root.
pub fn brent<F>(mut f: F, a: f64, b: f64, xtol: f64, max_iter: usize) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut a, mut b) = (a, b);
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(LabError::Bracket(format!(
            "f({a}) = {fa:e} and f({b}) = {fb:e} have the same sign"
        )));
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b)?;
    }
    Err(LabError::NotConverged(format!(
        "brent: {max_iter} iterations without convergence near x = {b}"
    )))
}

/// Walks from `start` in `direction` (±1) until `f` changes sign relative to
/// `f(start)`. Steps grow geometrically from `initial_step`; when a step would
/// leave the domain through a finite endpoint the walk halves the remaining
/// distance to that endpoint instead. Returns the bracketing pair
/// `(last_same_sign, first_opposite_sign)`.
pub fn bracket_outward<F>(
    mut f: F,
    start: f64,
    direction: f64,
    boundary: f64,
    initial_step: f64,
    growth: f64,
    max_steps: usize,
) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let f0 = f(start)?;
    let mut inner = start;
    let mut step = initial_step;
    for _ in 0..max_steps {
        let mut next = inner + direction * step;
        if boundary.is_finite() && (next - boundary) * direction >= 0.0 {
            next = 0.5 * (inner + boundary);
            if next == inner || next == boundary {
                break;
            }
        }
        let value = f(next)?;
        if value == 0.0 || value.signum() != f0.signum() {
            return Ok((inner, next));
        }
        inner = next;
        step *= growth;
    }
    Err(LabError::Bracket(format!(
        "no sign change walking from {start} toward {boundary} (last x = {inner})"
    )))
}

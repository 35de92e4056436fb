//! Adaptive Simpson quadrature.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

const MAX_DEPTH: u32 = 50;

/// `∫_a^b f` to relative tolerance `tol` (absolute when the integral is ~0).
pub fn adaptive_simpson<S: Scalar, F: Fn(S) -> S>(f: F, a: S, b: S, tol: S) -> Result<S> {
    if a == b {
        return Ok(S::zero());
    }
    let six = S::lit(6.0);
    let four = S::lit(4.0);
    let half = S::lit(0.5);
    let m = (a + b) * half;
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / six * (fa + four * fm + fb);

    // a coarse composite estimate sets the scale for the tolerance
    let panels = 16;
    let h = (b - a) / S::from_usize_lossy(panels);
    let mut scale = S::zero();
    for k in 0..panels {
        let x0 = a + h * S::from_usize_lossy(k);
        let x1 = x0 + h;
        scale = scale + h / six * (f(x0) + four * f((x0 + x1) * half) + f(x1)).abs();
    }
    let eps = tol * if scale > S::zero() { scale } else { S::one() };

    let mut worst = S::zero();
    let v = rec(&f, a, b, fa, fm, fb, whole, eps, MAX_DEPTH, &mut worst);
    if !v.is_finite() {
        return Err(quad_error(a, b, S::infinity(), tol));
    }
    if worst > S::zero() {
        return Err(quad_error(a, b, worst / scale.max(S::min_positive_value()), tol));
    }
    Ok(v)
}

fn quad_error<S: Scalar>(a: S, b: S, achieved: S, tol: S) -> Error {
    Error::Quadrature {
        a: a.to_f64().unwrap_or(f64::NAN),
        b: b.to_f64().unwrap_or(f64::NAN),
        achieved: achieved.to_f64().unwrap_or(f64::INFINITY),
        requested: tol.to_f64().unwrap_or(f64::NAN),
    }
}

#[allow(clippy::too_many_arguments)]
fn rec<S: Scalar, F: Fn(S) -> S>(
    f: &F,
    a: S,
    b: S,
    fa: S,
    fm: S,
    fb: S,
    whole: S,
    eps: S,
    depth: u32,
    worst: &mut S,
) -> S {
    let half = S::lit(0.5);
    let six = S::lit(6.0);
    let four = S::lit(4.0);
    let fifteen = S::lit(15.0);
    let m = (a + b) * half;
    let lm = (a + m) * half;
    let rm = (m + b) * half;
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / six * (fa + four * flm + fm);
    let right = (b - m) / six * (fm + four * frm + fb);
    let delta = left + right - whole;
    if !delta.is_finite() {
        *worst = S::infinity();
        return delta;
    }
    // f32 cannot resolve below its own epsilon, so that bounds the target too
    let floor = S::epsilon() * (left.abs() + right.abs());
    if delta.abs() <= fifteen * eps.max(floor) {
        return left + right + delta / fifteen;
    }
    if depth == 0 {
        *worst = worst.max(delta.abs() / fifteen);
        return left + right + delta / fifteen;
    }
    rec(f, a, m, fa, flm, fm, left, eps * half, depth - 1, worst)
        + rec(f, m, b, fm, frm, fb, right, eps * half, depth - 1, worst)
}

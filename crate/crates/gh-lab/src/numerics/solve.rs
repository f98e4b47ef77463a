//! Deterministic scalar root finding: bisection with secant acceleration.

use crate::error::GhError;

/// Finds the root of a strictly monotone function on a bracketing interval.
///
/// The bracket must straddle a sign change. Convergence target is
/// |f(root)| <= tol * scale, with scale = 1 + |root|; the iteration also
/// stops when the bracket collapses to rounding width.
pub fn solve_monotone(
    f: impl Fn(f64) -> f64,
    bracket: [f64; 2],
    tol: f64,
) -> Result<f64, GhError> {
    let [mut lo, mut hi] = bracket;
    if lo > hi {
        std::mem::swap(&mut lo, &mut hi);
    }
    let mut flo = f(lo);
    let mut fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo * fhi > 0.0 {
        return Err(GhError::InvalidInput(format!(
            "bracket [{lo}, {hi}] does not straddle a sign change (f = {flo}, {fhi})"
        )));
    }

    let mut x = 0.5 * (lo + hi);
    for iter in 0..200 {
        // Secant proposal, clipped to the bracket interior; every third
        // iteration bisects to guarantee progress.
        let secant = lo - flo * (hi - lo) / (fhi - flo);
        let interior = secant > lo + 0.25 * f64::EPSILON * lo.abs()
            && secant < hi - 0.25 * f64::EPSILON * hi.abs();
        x = if iter % 3 == 2 || !interior {
            0.5 * (lo + hi)
        } else {
            secant
        };
        let fx = f(x);
        if fx == 0.0 || fx.abs() <= tol * (1.0 + x.abs()) {
            return Ok(x);
        }
        if fx * flo < 0.0 {
            hi = x;
            fhi = fx;
        } else {
            lo = x;
            flo = fx;
        }
        if (hi - lo).abs() <= 4.0 * f64::EPSILON * (1.0 + x.abs()) {
            return Ok(0.5 * (lo + hi));
        }
    }
    Ok(x)
}

//! Derivative-free scalar root finding and line minimization.

use crate::{Error, Result};

/// Iteration cap shared by the bracketing solvers.
pub const MAX_BISECTION_ITERS: usize = 200;

/// Bisection on a bracket `[a, b]` with `f(a)` and `f(b)` of opposite sign
/// (or one of them zero). Stops once the bracket is narrower than `tol`.
pub fn bisect<F>(f: F, mut a: f64, mut b: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() {
        return Err(Error::Numerical(format!(
            "bisection bracket [{a}, {b}] does not straddle a root (f = {fa}, {fb})"
        )));
    }
    for _ in 0..MAX_BISECTION_ITERS {
        let mid = 0.5 * (a + b);
        if (b - a) < tol || mid <= a || mid >= b {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Err(Error::Numerical(format!(
        "bisection did not converge within {MAX_BISECTION_ITERS} iterations"
    )))
}

/// Golden-section minimization of a unimodal function on `[a, b]`.
/// Returns `(argmin, min)`.
pub fn golden_min<F>(f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..MAX_BISECTION_ITERS {
        if (b - a).abs() < tol {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    // the interior probes may beat the midpoint on a flat valley
    [(x, fx), (c, fc), (d, fd)]
        .into_iter()
        .fold((x, fx), |best, cand| if cand.1 < best.1 { cand } else { best })
}

/// All roots of `f` on `[a, b]` found by sampling `steps` uniform cells.
///
/// Sign changes are refined by bisection to `tol`. Cells where `|f|` has a
/// discrete local minimum without a sign change are refined by golden-section
/// search on `|f|`, and the minimizer is kept as a touching root when
/// `|f| <= touch_tol`. Roots are returned in increasing order.
pub fn scan_roots<F>(f: F, a: f64, b: f64, steps: usize, tol: f64, touch_tol: f64) -> Result<Vec<f64>>
where
    F: Fn(f64) -> f64,
{
    let steps = steps.max(2);
    let h = (b - a) / steps as f64;
    let xs: Vec<f64> = (0..=steps).map(|i| a + h * i as f64).collect();
    let fs: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let mut roots = Vec::new();
    for i in 0..steps {
        let (f0, f1) = (fs[i], fs[i + 1]);
        if !(f0.is_finite() && f1.is_finite()) {
            continue;
        }
        if f0 == 0.0 {
            roots.push(xs[i]);
        } else if f1 != 0.0 && f0.signum() != f1.signum() {
            roots.push(bisect(&f, xs[i], xs[i + 1], tol)?);
        }
    }
    if fs[steps] == 0.0 {
        roots.push(xs[steps]);
    }
    if touch_tol > 0.0 {
        for i in 0..=steps {
            let here = fs[i].abs();
            let left = if i > 0 { fs[i - 1].abs() } else { f64::INFINITY };
            let right = if i < steps { fs[i + 1].abs() } else { f64::INFINITY };
            if !(here <= left && here <= right) || here == 0.0 {
                continue;
            }
            let lo = xs[i.saturating_sub(1)];
            let hi = xs[(i + 1).min(steps)];
            let (x, fx) = golden_min(|x| f(x).abs(), lo, hi, tol);
            if fx <= touch_tol && !roots.iter().any(|r: &f64| (r - x).abs() < 4.0 * tol.max(1e-9)) {
                roots.push(x);
            }
        }
        roots.sort_by(|p, q| p.total_cmp(q));
    }
    Ok(roots)
}

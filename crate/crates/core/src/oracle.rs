//! Brute-force certification of minimum times.
//!
//! Nothing here uses the closed-form synthesis. Each search walks a family
//! of piecewise-constant laws, integrates it with the exact flows and keeps
//! the laws that land on the south pole. The final one or two arcs of every
//! law are completed geometrically (a bang rotates its start point on a
//! circle about the bang axis, so landing on the pole is a scalar condition
//! plus an angle), which keeps terminal residuals at rounding level.
//!
//! Grid evaluation is a parallel map; reductions run sequentially over the
//! collected results, so reports do not depend on the thread schedule.

use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, DVector, Rotation3, Vector3};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bloch::{flow_rotation, propagate, BlochState, ControlArc, ControlLaw, SystemParams};
use crate::numeric::{golden_min, scan_roots};
use crate::{Error, Result};

/// Parameters of a search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchSpec {
    /// Largest switching count explored by [`structured_search`].
    pub n_max: usize,
    /// Grid cells per duration dimension.
    pub grid_steps: usize,
    /// Cap on refinement rounds; refinement also stops once the step is
    /// below `1e-10`.
    pub refine_iters: usize,
    /// Chordal distance to the target accepted as arrival.
    pub target_tol: f64,
    pub allow_singular: bool,
}

impl Default for SearchSpec {
    fn default() -> Self {
        Self { n_max: 3, grid_steps: 60, refine_iters: 200, target_tol: 1e-8, allow_singular: false }
    }
}

impl SearchSpec {
    pub fn validate(&self) -> Result<()> {
        if self.grid_steps < 8 {
            return Err(Error::Invalid(format!("grid_steps must be >= 8, got {}", self.grid_steps)));
        }
        if !(self.target_tol > 0.0) {
            return Err(Error::Invalid(format!("target_tol must be positive, got {}", self.target_tol)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchReport {
    /// Normalized time of the best law.
    pub best_time: f64,
    pub best_law: ControlLaw,
    pub switchings: usize,
    /// Chordal distance from the re-integrated terminal state to the south pole.
    pub terminal_residual: f64,
    /// Number of trial laws (or law prefixes) evaluated.
    pub evaluations: u64,
}

const MIN_STEP: f64 = 1e-10;
const ROOT_TOL: f64 = 1e-13;
/// Durations closer than this to the ends of `(0, 2π)` count as degenerate.
const INTERIOR_MARGIN: f64 = 1e-6;
/// Tolerance on `|y3|` for a singular arc to sit on the equator.
const EQUATOR_TOL: f64 = 1e-6;

fn bang_axis(sign: f64, alpha: f64) -> Vector3<f64> {
    Vector3::new(sign * alpha.sin(), 0.0, alpha.cos())
}

fn south() -> Vector3<f64> {
    Vector3::new(0.0, 0.0, -1.0)
}

fn north() -> Vector3<f64> {
    Vector3::new(0.0, 0.0, 1.0)
}

/// Right-handed angle in `[0, 2π)` taking `from` to `to` about the unit `axis`.
fn angle_about(axis: &Vector3<f64>, from: &Vector3<f64>, to: &Vector3<f64>) -> f64 {
    let f = from - axis * axis.dot(from);
    let t = to - axis * axis.dot(to);
    let a = f.cross(&t).dot(axis).atan2(f.dot(&t));
    if a < 0.0 {
        a + TAU
    } else {
        a
    }
}

/// Landing condition for a final bang of sign `sign` started at `x`.
fn last_bang_gap(x: &Vector3<f64>, sign: f64, alpha: f64) -> f64 {
    let a = bang_axis(sign, alpha);
    a.dot(x) - a.dot(&south())
}

fn last_bang_duration(x: &Vector3<f64>, sign: f64, alpha: f64) -> f64 {
    angle_about(&bang_axis(sign, alpha), x, &south())
}

/// Durations `(d1, d2)` of two consecutive bangs (signs `s1`, `s2`) taking
/// `p` to the south pole, one entry per intersection branch.
fn last_two_bangs(p: &Vector3<f64>, s1: f64, s2: f64, alpha: f64) -> [Option<(f64, f64)>; 2] {
    let a = bang_axis(s1, alpha);
    let b = bang_axis(s2, alpha);
    let (ca, cb, g) = (a.dot(p), b.dot(&south()), a.dot(&b));
    let det = 1.0 - g * g;
    let c1 = (ca - g * cb) / det;
    let c2 = (cb - g * ca) / det;
    let n = a.cross(&b);
    let rest = 1.0 - (c1 * c1 + c2 * c2 + 2.0 * c1 * c2 * g);
    if rest < 0.0 {
        return [None, None];
    }
    let h = (rest / n.norm_squared()).sqrt();
    [1.0, -1.0].map(|branch| {
        let x = a * c1 + b * c2 + n * (branch * h);
        Some((angle_about(&a, p, &x), angle_about(&b, &x, &south())))
    })
}

fn rot(u: f64, t: f64, alpha: f64) -> Rotation3<f64> {
    flow_rotation(u, t, alpha)
}

#[derive(Debug, Clone)]
struct Found {
    time: f64,
    law: ControlLaw,
}

fn finish(found: Vec<Found>, params: &SystemParams, spec: &SearchSpec, evaluations: u64, what: &str) -> Result<SearchReport> {
    let scored: Vec<(Found, f64)> = found
        .into_iter()
        .map(|f| {
            let r = propagate(&f.law, &BlochState::north(), params).chordal_distance(&BlochState::south());
            (f, r)
        })
        .collect();
    for tol in [spec.target_tol, 10.0 * spec.target_tol] {
        let best = scored
            .iter()
            .filter(|(_, r)| *r <= tol)
            .fold(None::<&(Found, f64)>, |best, c| match best {
                Some(b) if b.0.time <= c.0.time => Some(b),
                _ => Some(c),
            });
        if let Some((f, r)) = best {
            return Ok(SearchReport {
                best_time: f.time,
                switchings: f.law.switchings(),
                best_law: f.law.clone(),
                terminal_residual: *r,
                evaluations,
            });
        }
    }
    Err(Error::SearchFailure(format!("{what}: no law reaches the south pole (alpha = {})", params.alpha)))
}

/// Best law of `B_{s_i} (B_b)^{n-1} B_{s_f}`, alternating signs, for one first
/// sign and one interior length `b` (`n >= 1`; `b` is ignored for `n = 1`).
fn best_with_interior(n: usize, sign: f64, b: f64, alpha: f64, scan: usize) -> (Option<Found>, u64) {
    let mut interior = Rotation3::identity();
    let mut u = sign;
    for _ in 1..n {
        u = -u;
        interior = rot(u, b, alpha) * interior;
    }
    let last = -u;
    let point = |s: f64| interior * (rot(sign, s, alpha) * north());
    let gap = |s: f64| last_bang_gap(&point(s), last, alpha);
    let roots = match scan_roots(gap, 0.0, TAU, scan, ROOT_TOL, 0.0) {
        Ok(r) => r,
        Err(_) => return (None, scan as u64),
    };
    let mut best: Option<Found> = None;
    for s_i in roots.into_iter().filter(|s| *s < TAU) {
        let s_f = last_bang_duration(&point(s_i), last, alpha);
        let time = s_i + (n - 1) as f64 * b + s_f;
        if best.as_ref().is_none_or(|f| time < f.time) {
            let mut d = vec![s_i];
            d.extend(std::iter::repeat_n(b, n - 1));
            d.push(s_f);
            best = Some(Found { time, law: ControlLaw::alternating(sign, &d) });
        }
    }
    (best, scan as u64 + 50)
}

fn structured_family(params: &SystemParams, n: usize, sign: f64, spec: &SearchSpec) -> (Option<Found>, u64) {
    let alpha = params.alpha;
    let scan = 2 * spec.grid_steps.max(64);
    if n == 0 {
        // a lone bang: closest approach of its circle to the pole
        let dist = |t: f64| (rot(sign, t, alpha) * north() - south()).norm();
        let (t, d) = golden_min(dist, 0.0, TAU, 1e-12);
        let found = (d <= spec.target_tol).then(|| Found { time: t, law: ControlLaw::alternating(sign, &[t]) });
        return (found, 200);
    }
    if n == 1 {
        return best_with_interior(1, sign, 0.0, alpha, scan);
    }

    let cell = PI / spec.grid_steps as f64;
    let grid: Vec<(Option<Found>, u64)> = (0..spec.grid_steps)
        .into_par_iter()
        .map(|j| best_with_interior(n, sign, PI + cell * j as f64, alpha, scan))
        .collect();
    let mut evaluations: u64 = grid.iter().map(|g| g.1).sum();
    let times: Vec<f64> = grid.iter().map(|g| g.0.as_ref().map_or(f64::INFINITY, |f| f.time)).collect();

    // refine from the best few discrete local minima
    let mut seeds: Vec<usize> = (0..times.len())
        .filter(|&j| {
            times[j].is_finite()
                && (j == 0 || times[j] <= times[j - 1])
                && (j + 1 == times.len() || times[j] <= times[j + 1])
        })
        .collect();
    seeds.sort_by(|&a, &b| times[a].total_cmp(&times[b]).then(a.cmp(&b)));
    seeds.truncate(4);

    let mut best: Option<Found> = None;
    for j in seeds {
        let mut b = PI + cell * j as f64;
        let mut current = grid[j].0.clone().expect("finite seed");
        let mut step = cell;
        let mut rounds = 0;
        while step >= MIN_STEP && rounds < spec.refine_iters.max(1) * 8 {
            rounds += 1;
            let mut moved = false;
            for cand in [b - step, b + step] {
                if !(PI..TAU).contains(&cand) {
                    continue;
                }
                let (f, e) = best_with_interior(n, sign, cand, alpha, scan);
                evaluations += e;
                if let Some(f) = f {
                    if f.time < current.time {
                        current = f;
                        b = cand;
                        moved = true;
                        break;
                    }
                }
            }
            if !moved {
                step *= 0.5;
            }
        }
        if best.as_ref().is_none_or(|f| current.time < f.time) {
            best = Some(current);
        }
    }
    (best, evaluations)
}

/// Searches the families `B_{s_i} (B_b)^{n-1} B_{s_f}` with alternating
/// signs for every switching count `n ≤ n_max` and both first signs.
///
/// `s_i` and `s_f` range over `[0, 2π)` and the common interior length `b`
/// over `[π, 2π)`. For each `b` the first-bang length is root-found along a
/// scan and the last bang is completed exactly; the best grid values of `b`
/// are then refined by coordinate descent with halving steps.
pub fn structured_search(params: &SystemParams, spec: &SearchSpec) -> Result<SearchReport> {
    spec.validate()?;
    let mut found = Vec::new();
    let mut evaluations = 0;
    for n in 0..=spec.n_max {
        for sign in [1.0, -1.0] {
            let (f, e) = structured_family(params, n, sign, spec);
            evaluations += e;
            found.extend(f);
        }
    }
    finish(found, params, spec, evaluations, "structured search")
}

fn free_prefix(sign: f64, free: &[f64], alpha: f64) -> (Vector3<f64>, f64) {
    let mut y = north();
    let mut u = sign;
    for &d in free {
        y = rot(u, d, alpha) * y;
        u = -u;
    }
    (y, u)
}

/// Total time of the free-duration law on one completion branch.
fn free_time(sign: f64, free: &[f64], branch: usize, alpha: f64) -> Option<(f64, f64, f64)> {
    let (p, u) = free_prefix(sign, free, alpha);
    let (d1, d2) = last_two_bangs(&p, u, -u, alpha)[branch]?;
    Some((free.iter().sum::<f64>() + d1 + d2, d1, d2))
}

fn is_interior(d: f64) -> bool {
    d > INTERIOR_MARGIN && d < TAU - INTERIOR_MARGIN
}

/// Newton iteration on the finite-difference gradient of the branch time.
fn newton_stationary(sign: f64, branch: usize, start: &[f64], alpha: f64, evals: &mut u64) -> Option<Vec<f64>> {
    let dim = start.len();
    let h = 1e-5;
    let time = |x: &[f64], evals: &mut u64| {
        *evals += 1;
        if !x.iter().all(|d| is_interior(*d)) {
            return None;
        }
        free_time(sign, x, branch, alpha).map(|t| t.0)
    };
    let mut x = start.to_vec();
    for _ in 0..60 {
        let t0 = time(&x, evals)?;
        let mut grad = DVector::zeros(dim);
        let mut hess = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[i] += h;
            xm[i] -= h;
            let (tp, tm) = (time(&xp, evals)?, time(&xm, evals)?);
            grad[i] = (tp - tm) / (2.0 * h);
            hess[(i, i)] = (tp - 2.0 * t0 + tm) / (h * h);
            for j in 0..i {
                let mut pp = x.clone();
                let mut pm = x.clone();
                let mut mp = x.clone();
                let mut mm = x.clone();
                pp[i] += h;
                pp[j] += h;
                pm[i] += h;
                pm[j] -= h;
                mp[i] -= h;
                mp[j] += h;
                mm[i] -= h;
                mm[j] -= h;
                let v = (time(&pp, evals)? - time(&pm, evals)? - time(&mp, evals)? + time(&mm, evals)?) / (4.0 * h * h);
                hess[(i, j)] = v;
                hess[(j, i)] = v;
            }
        }
        if grad.norm() < 1e-9 {
            return Some(x);
        }
        let delta = hess.lu().solve(&grad)?;
        if !delta.iter().all(|d| d.is_finite()) || delta.norm() > 1.0 {
            return None;
        }
        for i in 0..dim {
            x[i] -= delta[i];
        }
        if delta.norm() < 1e-13 {
            break;
        }
    }
    // final acceptance on the gradient
    let mut g2 = 0.0;
    for i in 0..dim {
        let mut xp = x.clone();
        let mut xm = x.clone();
        xp[i] += h;
        xm[i] -= h;
        let g = (time(&xp, evals)? - time(&xm, evals)?) / (2.0 * h);
        g2 += g * g;
    }
    (g2.sqrt() < 1e-6).then_some(x)
}

fn grid_index(mut flat: usize, steps: usize, dim: usize) -> Vec<usize> {
    let mut idx = vec![0; dim];
    for slot in idx.iter_mut().rev() {
        *slot = flat % steps;
        flat /= steps;
    }
    idx
}

/// Searches bang-bang laws with exactly `n` switchings and fully independent
/// durations `d_0, …, d_n ∈ (0, 2π)`, alternating signs, and returns the
/// fastest *stationary* one: a law where the total time is stationary along
/// the set of laws reaching the south pole, with every duration strictly
/// inside `(0, 2π)`.
///
/// The infimum of time over such a family is often not attained (a first
/// or last arc shrinks to zero and the law degenerates into one with fewer
/// switchings); stationary laws are the ones a time-optimal law with
/// exactly `n` switchings must be among.
///
/// `d_0 … d_{n-2}` are gridded, the last two durations are completed
/// exactly, grid points where the discrete gradient is locally smallest seed
/// a Newton iteration on the finite-difference gradient.
pub fn free_switch_search(params: &SystemParams, n: usize, spec: &SearchSpec) -> Result<SearchReport> {
    spec.validate()?;
    if n > 6 {
        return Err(Error::Invalid(format!("free_switch_search supports n <= 6, got {n}")));
    }
    let alpha = params.alpha;
    if n == 0 {
        return structured_family(params, 0, 1.0, spec)
            .0
            .map(|f| finish(vec![f], params, spec, 200, "free search"))
            .unwrap_or_else(|| Err(Error::SearchFailure("a single bang never reaches the south pole".into())));
    }
    let mut found = Vec::new();
    let mut evaluations = 0u64;
    if n == 1 {
        for sign in [1.0, -1.0] {
            for (d0, d1) in last_two_bangs(&north(), sign, -sign, alpha).into_iter().flatten() {
                evaluations += 1;
                if is_interior(d0) && is_interior(d1) {
                    found.push(Found { time: d0 + d1, law: ControlLaw::alternating(sign, &[d0, d1]) });
                }
            }
        }
        return finish(found, params, spec, evaluations, "free search");
    }

    let dim = n - 1;
    let steps = spec.grid_steps;
    let cell = TAU / steps as f64;
    let total = steps.pow(dim as u32);
    let coord = |i: usize| (i as f64 + 0.5) * cell;

    for sign in [1.0, -1.0] {
        let field: Vec<[f64; 2]> = (0..total)
            .into_par_iter()
            .map(|flat| {
                let x: Vec<f64> = grid_index(flat, steps, dim).into_iter().map(coord).collect();
                [0, 1].map(|b| free_time(sign, &x, b, alpha).map_or(f64::NAN, |t| t.0))
            })
            .collect();
        evaluations += total as u64;

        for branch in 0..2 {
            let t = |flat: usize| field[flat][branch];
            let stride = |axis: usize| steps.pow((dim - 1 - axis) as u32);
            // squared discrete gradient, NaN where a neighbour is missing
            let grad2: Vec<f64> = (0..total)
                .into_par_iter()
                .map(|flat| {
                    let idx = grid_index(flat, steps, dim);
                    let mut g2 = 0.0;
                    for axis in 0..dim {
                        if idx[axis] == 0 || idx[axis] + 1 == steps {
                            return f64::NAN;
                        }
                        let (p, m) = (t(flat + stride(axis)), t(flat - stride(axis)));
                        let g = (p - m) / (2.0 * cell);
                        if !g.is_finite() || g.abs() > 0.5 * PI / cell {
                            return f64::NAN;
                        }
                        g2 += g * g;
                    }
                    g2
                })
                .collect();
            let seeds: Vec<usize> = (0..total)
                .filter(|&flat| {
                    let g = grad2[flat];
                    if !g.is_finite() {
                        return false;
                    }
                    let idx = grid_index(flat, steps, dim);
                    (0..dim).all(|axis| {
                        let s = stride(axis);
                        let lower = idx[axis] == 0 || !(grad2[flat - s] < g);
                        let upper = idx[axis] + 1 == steps || !(grad2[flat + s] < g);
                        lower && upper
                    })
                })
                .collect();
            let refined: Vec<(Option<Found>, u64)> = seeds
                .par_iter()
                .map(|&flat| {
                    let start: Vec<f64> = grid_index(flat, steps, dim).into_iter().map(coord).collect();
                    let mut evals = 0;
                    let found = newton_stationary(sign, branch, &start, alpha, &mut evals).and_then(|x| {
                        let (time, d1, d2) = free_time(sign, &x, branch, alpha)?;
                        if !(is_interior(d1) && is_interior(d2)) {
                            return None;
                        }
                        let mut d = x.clone();
                        d.push(d1);
                        d.push(d2);
                        Some(Found { time, law: ControlLaw::alternating(sign, &d) })
                    });
                    (found, evals)
                })
                .collect();
            for (f, e) in refined {
                evaluations += e;
                found.extend(f);
            }
        }
    }
    finish(found, params, spec, evaluations, "free search")
}

/// Searches bang-singular-bang laws `B_t S_s B_{t'}` whose singular arc
/// lies on the equator.
///
/// The first bang length is any time at which the bang circle meets the
/// equator (`|y3| ≤ 1e-6`), the singular length ranges over a full drift
/// turn `[0, 2π/cos α]`, and the last bang is completed exactly. Laws whose
/// singular or last arc degenerates to zero length are discarded.
pub fn bsb_search(params: &SystemParams, spec: &SearchSpec) -> Result<SearchReport> {
    spec.validate()?;
    if !spec.allow_singular {
        return Err(Error::Invalid("bsb_search requires allow_singular = true".into()));
    }
    let alpha = params.alpha;
    let scan = 4 * spec.grid_steps;
    let mut found = Vec::new();
    let mut evaluations = 0u64;
    for first in [1.0, -1.0] {
        let height = |t: f64| (rot(first, t, alpha) * north()).z;
        let crossings = scan_roots(height, 0.0, TAU, scan, ROOT_TOL, EQUATOR_TOL)?;
        evaluations += scan as u64;
        for t in crossings.into_iter().filter(|t| *t > 0.0 && *t < TAU) {
            let p = rot(first, t, alpha) * north();
            if p.z.abs() > EQUATOR_TOL {
                continue;
            }
            let turn = TAU / alpha.cos();
            for last in [1.0, -1.0] {
                let q = |s: f64| rot(0.0, s, alpha) * p;
                let gap = |s: f64| last_bang_gap(&q(s), last, alpha);
                let singular = scan_roots(gap, 0.0, turn, scan, ROOT_TOL, spec.target_tol * 1e-3)?;
                evaluations += scan as u64;
                for s in singular.into_iter().filter(|s| *s > INTERIOR_MARGIN && *s < turn - INTERIOR_MARGIN) {
                    let t_last = last_bang_duration(&q(s), last, alpha);
                    if t_last < INTERIOR_MARGIN {
                        continue;
                    }
                    let law = ControlLaw::new(vec![
                        ControlArc { u: first, duration: t },
                        ControlArc { u: 0.0, duration: s },
                        ControlArc { u: last, duration: t_last },
                    ]);
                    found.push(Found { time: law.total_time(), law });
                }
            }
        }
    }
    finish(found, params, spec, evaluations, "bang-singular-bang search")
}

//! Closed-form optimal synthesis from the north pole to the south pole.
//!
//! For `α ≥ π/4` the optimum is bang-bang with a single switch on the
//! equator and total normalized time `2π`.
//!
//! For `α < π/4` every optimum has the shape `B_{s_i} (B_{v(s_i)})^{n-1} B_{s_f}`
//! with alternating controls. The last bang is either `s_f = s'(s_i)` (TYPE-1,
//! where `F(s) = 2π/θ(s) = n`) or `s_f = s_i` (TYPE-2, where
//! `G(s) = 2β(s)/θ(s) + 1 = n`). Both equations are solved on certified
//! monotone brackets; every candidate is then integrated exactly and the
//! fastest survivors are returned.

use std::cmp::Ordering;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use nalgebra::Vector3;
use rayon::prelude::*;
use serde::Serialize;

use crate::bloch::{propagate, BlochState, ControlLaw, SystemParams};
use crate::numeric::scan_roots;
use crate::{Error, Result};

/// Default chordal tolerance for landing on the south pole.
pub const DEFAULT_ENDPOINT_TOL: f64 = 1e-8;

/// `π/(2α)` is treated as an integer within this distance.
pub const INTEGER_TOL: f64 = 1e-9;

const ROOT_TOL: f64 = 1e-12;
const PRESCAN_STEP: f64 = 1e-4;
const DOMAIN_SLACK: f64 = 1e-12;
const TIE_TOL: f64 = 1e-9;

fn cot2(alpha: f64) -> f64 {
    let c = alpha.cos() / alpha.sin();
    c * c
}

fn clamp_unit(x: f64, what: &str) -> Result<f64> {
    if x > 1.0 + DOMAIN_SLACK || x < -1.0 - DOMAIN_SLACK || x.is_nan() {
        return Err(Error::Consistency(format!("{what}: arccos argument {x} outside [-1, 1]")));
    }
    Ok(x.clamp(-1.0, 1.0))
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < FRAC_PI_2 {
        Ok(())
    } else {
        Err(Error::Domain(format!("alpha must lie in ]0, π/2[, got {alpha}")))
    }
}

fn check_small_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < FRAC_PI_4 {
        Ok(())
    } else {
        Err(Error::Domain(format!("operation requires 0 < alpha < π/4, got {alpha}")))
    }
}

fn check_s(s: f64) -> Result<f64> {
    if s.is_finite() && s >= -DOMAIN_SLACK && s <= PI + DOMAIN_SLACK {
        Ok(s.clamp(0.0, PI))
    } else {
        Err(Error::Domain(format!("s must lie in [0, π], got {s}")))
    }
}

/// Duration of every interior bang for a first bang of length `s`:
/// `v(s) = π + 2 arctan(sin s / (cos s + cot² α))`.
///
/// The domain is `[0, π]` when `α < π/4` and `[0, arccos(-cot² α)[` otherwise.
pub fn v_of(s: f64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let c2 = cot2(alpha);
    let s = if alpha < FRAC_PI_4 {
        check_s(s)?
    } else {
        let upper = (-c2).clamp(-1.0, 1.0).acos();
        if !(s.is_finite() && s >= -DOMAIN_SLACK && s < upper) {
            return Err(Error::Domain(format!("s must lie in [0, {upper}[ for alpha >= π/4, got {s}")));
        }
        s.max(0.0)
    };
    Ok(PI + 2.0 * s.sin().atan2(s.cos() + c2))
}

/// Maximizer of `v` on `[0, π]`, `arccos(-tan² α)`.
pub fn t_bar(alpha: f64) -> Result<f64> {
    check_small_alpha(alpha)?;
    Ok((-alpha.tan().powi(2)).acos())
}

/// The other first-bang length with the same interior duration:
/// `s'(s) = v(s) - s`, with `s'(t̄) = t̄`.
pub fn s_prime(s: f64, alpha: f64) -> Result<f64> {
    check_small_alpha(alpha)?;
    let s = check_s(s)?;
    Ok(v_of(s, alpha)? - s)
}

/// Rotation angle of one `(-1, +1)` pair of interior bangs,
/// `θ(s) = 2 arccos(sin²(v/2) cos 2α - cos²(v/2))`.
pub fn theta_of(s: f64, alpha: f64) -> Result<f64> {
    let half = 0.5 * v_of(s, alpha)?;
    let (sh, ch) = half.sin_cos();
    clamp_unit(sh * sh * (2.0 * alpha).cos() - ch * ch, "theta")?;
    // same angle through atan2: 1 - x = 2(sin² sin²α + cos²), 1 + x = 2 sin² cos²α
    let (sa, ca) = alpha.sin_cos();
    Ok(4.0 * (sh * sh * sa * sa + ch * ch).sqrt().atan2(sh.abs() * ca))
}

/// `β(s) = 2 arccos(sin α cos α (1 - cos s))`.
pub fn beta_of(s: f64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let s = check_s(s)?;
    let half = (0.5 * s).sin();
    let x = clamp_unit(alpha.sin() * alpha.cos() * 2.0 * half * half, "beta")?;
    Ok(2.0 * x.acos())
}

/// `F(s) = 2π / θ(s)`.
pub fn f_of(s: f64, alpha: f64) -> Result<f64> {
    check_small_alpha(alpha)?;
    Ok(2.0 * PI / theta_of(s, alpha)?)
}

/// `G(s) = 2β(s)/θ(s) + 1`.
pub fn g_of(s: f64, alpha: f64) -> Result<f64> {
    check_small_alpha(alpha)?;
    Ok(2.0 * beta_of(s, alpha)? / theta_of(s, alpha)? + 1.0)
}

/// The unique minimizer of `F`, `π - arccos(tan² α)`. It coincides with `t̄`.
pub fn f_argmin(alpha: f64) -> Result<f64> {
    check_small_alpha(alpha)?;
    Ok(PI - alpha.tan().powi(2).acos())
}

/// Oriented axis and angle of the rotation produced by one `+1` bang of
/// length `v(s)` followed by one `-1` bang of the same length.
///
/// The axis is the direction of the generator
/// `-(0, sin α, cot(v/2)) / √(cot²(v/2) + sin² α)`; rotating by `θ(s)`
/// about it (right-handed) reproduces the composed flows.
pub fn z_rotation(s: f64, alpha: f64) -> Result<(Vector3<f64>, f64)> {
    let half = 0.5 * v_of(s, alpha)?;
    let cot = half.cos() / half.sin();
    let sa = alpha.sin();
    let rho = (cot * cot + sa * sa).sqrt();
    if !(rho >= 1e-14) {
        return Err(Error::Consistency(format!("degenerate rotation axis (rho = {rho})")));
    }
    Ok((-Vector3::new(0.0, sa, cot) / rho, theta_of(s, alpha)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum CandidateKind {
    SingleSwitch,
    Type1,
    Type2,
    BangSingularBang,
}

/// A structured bang-bang candidate `B_{s_i} (B_interior)^{n_interior} B_{s_f}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CandidateTrajectory {
    pub kind: CandidateKind,
    /// Control of the first bang, `+1` or `-1`.
    pub first_sign: i8,
    pub s_i: f64,
    /// Length of each interior bang (`0` when there is none).
    pub interior: f64,
    pub n_interior: usize,
    pub s_f: f64,
    /// Normalized total time.
    pub total_time: f64,
}

impl CandidateTrajectory {
    fn new(kind: CandidateKind, first_sign: i8, s_i: f64, interior: f64, n_interior: usize, s_f: f64) -> Self {
        Self {
            kind,
            first_sign,
            s_i,
            interior,
            n_interior,
            s_f,
            total_time: s_i + n_interior as f64 * interior + s_f,
        }
    }

    fn both_signs(kind: CandidateKind, s_i: f64, interior: f64, n_interior: usize, s_f: f64) -> [Self; 2] {
        [
            Self::new(kind, 1, s_i, interior, n_interior, s_f),
            Self::new(kind, -1, s_i, interior, n_interior, s_f),
        ]
    }

    /// Alternating bang-bang law; zero-length arcs are dropped.
    pub fn law(&self) -> ControlLaw {
        let mut durations = Vec::with_capacity(self.n_interior + 2);
        durations.push(self.s_i);
        durations.extend(std::iter::repeat_n(self.interior, self.n_interior));
        durations.push(self.s_f);
        ControlLaw::alternating(f64::from(self.first_sign), &durations).simplified()
    }

    fn sort_key(&self, other: &Self) -> Ordering {
        self.kind
            .cmp(&other.kind)
            .then(other.first_sign.cmp(&self.first_sign))
            .then(self.s_i.total_cmp(&other.s_i))
    }
}

fn integer_part(alpha: f64) -> (f64, Option<usize>) {
    let ratio = PI / (2.0 * alpha);
    let nearest = ratio.round();
    let exact = ((ratio - nearest).abs() < INTEGER_TOL).then_some(nearest as usize);
    (ratio, exact)
}

fn certified_root<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, what: &str) -> Result<f64> {
    let steps = ((b - a) / PRESCAN_STEP).ceil().max(8.0) as usize;
    let roots = scan_roots(f, a, b, steps, ROOT_TOL, 0.0)?;
    match roots.as_slice() {
        [r] => Ok(*r),
        _ => Err(Error::Numerical(format!(
            "{what}: expected one root on [{a}, {b}], pre-scan found {}",
            roots.len()
        ))),
    }
}

/// Solutions `(s, n)` of `F(s) = n`, listed per `n` from the left branch
/// `[0, s̄]` then the right branch `[s̄, π]`.
pub fn type1_solutions(alpha: f64) -> Result<Vec<(f64, usize)>> {
    check_small_alpha(alpha)?;
    let (ratio, exact) = integer_part(alpha);
    let s_bar = f_argmin(alpha)?;
    let f_min = f_of(s_bar, alpha)?;
    let f = |s: f64| f_of(s, alpha).unwrap_or(f64::NAN);

    let lo = (f_min - INTEGER_TOL).ceil().max(1.0) as usize;
    let hi = (ratio + INTEGER_TOL).floor() as usize;
    let mut out = Vec::new();
    for n in lo..=hi {
        let target = n as f64;
        if exact == Some(n) {
            out.push((0.0, n));
            out.push((PI, n));
        } else if (f_min - target).abs() < INTEGER_TOL {
            out.push((s_bar, n));
        } else {
            out.push((certified_root(|s| f(s) - target, 0.0, s_bar, "F(s) = n, left")?, n));
            out.push((certified_root(|s| f(s) - target, s_bar, PI, "F(s) = n, right")?, n));
        }
    }
    Ok(out)
}

/// TYPE-1 candidates: for every solution `s`, the trajectory
/// `B_s (B_{v(s)})^{n-1} B_{s'(s)}` with both first signs.
pub fn solve_type1(alpha: f64) -> Result<Vec<CandidateTrajectory>> {
    let mut out = Vec::new();
    for (s, n) in type1_solutions(alpha)? {
        let v = v_of(s, alpha)?;
        let sp = s_prime(s, alpha)?.clamp(0.0, PI);
        out.extend(CandidateTrajectory::both_signs(CandidateKind::Type1, s, v, n - 1, sp));
    }
    Ok(out)
}

/// Solutions `(s, n)` of `G(s) = n`. When `π/(2α)` is an integer `n̄` the
/// endpoint solutions `(π, n̄-1)` and `(0, n̄+1)` are included as well.
pub fn type2_solutions(alpha: f64) -> Result<Vec<(f64, usize)>> {
    check_small_alpha(alpha)?;
    let (ratio, exact) = integer_part(alpha);
    let g = |s: f64| g_of(s, alpha).unwrap_or(f64::NAN);
    let mut out = Vec::new();
    match exact {
        Some(nb) => {
            if nb >= 2 {
                out.push((PI, nb - 1));
            }
            out.push((certified_root(|s| g(s) - nb as f64, 0.0, PI, "G(s) = n")?, nb));
            out.push((0.0, nb + 1));
        }
        None => {
            let first = (ratio - 1.0).ceil() as usize;
            for n in first..=first + 1 {
                out.push((certified_root(|s| g(s) - n as f64, 0.0, PI, "G(s) = n")?, n));
            }
        }
    }
    Ok(out)
}

/// TYPE-2 candidates `B_s (B_{v(s)})^{n-1} B_s` with both first signs.
pub fn solve_type2(alpha: f64) -> Result<Vec<CandidateTrajectory>> {
    let mut out = Vec::new();
    for (s, n) in type2_solutions(alpha)? {
        let v = v_of(s, alpha)?;
        out.extend(CandidateTrajectory::both_signs(CandidateKind::Type2, s, v, n - 1, s));
    }
    Ok(out)
}

fn switch_offsets(alpha: f64) -> Result<(f64, f64)> {
    if !(alpha >= FRAC_PI_4 && alpha < FRAC_PI_2) {
        return Err(Error::Domain(format!("operation requires π/4 <= alpha < π/2, got {alpha}")));
    }
    let a = clamp_unit(cot2(alpha), "single switch")?.acos();
    Ok((PI - a, PI + a))
}

/// The four one-switch optima for `α ≥ π/4`: first bang `s_A` or `s_B`,
/// first sign `±1`, total time `2π`.
pub fn single_switch_candidates(alpha: f64) -> Result<Vec<CandidateTrajectory>> {
    let (s_a, s_b) = switch_offsets(alpha)?;
    let mut out = Vec::with_capacity(4);
    for sign in [1, -1] {
        for (first, last) in [(s_a, s_b), (s_b, s_a)] {
            out.push(CandidateTrajectory::new(CandidateKind::SingleSwitch, sign, first, 0.0, 0, last));
        }
    }
    Ok(out)
}

/// Closed-form times of the two non-optimal rivals for `α ≥ π/4`:
/// the bang-singular-bang trajectory and the symmetric two-switch one.
pub fn reference_rival_times(alpha: f64) -> Result<(f64, f64)> {
    switch_offsets(alpha)?;
    let cot = alpha.cos() / alpha.sin();
    let bsb = 2.0 * PI - 2.0 * clamp_unit(cot * cot, "bsb")?.acos()
        + 2.0 * clamp_unit(cot, "bsb")?.acos() / alpha.cos();
    let two = 2.0 * PI + 2.0 * clamp_unit(1.0 / (2.0 * alpha.sin()), "two switch")?.asin();
    Ok((bsb, two))
}

/// A candidate together with its exact terminal state.
#[derive(Debug, Clone, Serialize)]
pub struct VerifiedCandidate {
    pub candidate: CandidateTrajectory,
    pub law: ControlLaw,
    pub switchings: usize,
    pub terminal: BlochState,
    /// Chordal distance from the terminal state to the south pole.
    pub residual: f64,
    pub reaches_target: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SynthesisResult {
    pub params: SystemParams,
    pub endpoint_tol: f64,
    /// Every distinct enumerated candidate.
    pub candidates: Vec<VerifiedCandidate>,
    /// Minimum-time candidates reaching the south pole, sorted by
    /// `(kind, first_sign, s_i)` with `+1` first.
    pub optima: Vec<VerifiedCandidate>,
    /// `(π/(2α) - 1, π/(2α) + 1)`.
    pub switch_bounds: (f64, f64),
    /// `(π²/(2α) - 2π, π²/(2α) + π)`; meaningful for `α < π/4`.
    pub time_bounds: (f64, f64),
}

impl SynthesisResult {
    /// Optimal normalized time.
    pub fn optimal_time(&self) -> f64 {
        self.optima[0].candidate.total_time
    }

    pub fn optimal_time_phys(&self) -> f64 {
        self.optimal_time() / self.params.k
    }
}

/// Enumerates the candidates for the regime of `params.alpha`, integrates
/// each from the north pole and keeps the fastest ones landing within
/// `endpoint_tol` of the south pole.
pub fn synthesize(params: &SystemParams, endpoint_tol: f64) -> Result<SynthesisResult> {
    if !(endpoint_tol > 0.0) {
        return Err(Error::Invalid(format!("endpoint_tol must be positive, got {endpoint_tol}")));
    }
    let alpha = params.alpha;
    let enumerated = if alpha < FRAC_PI_4 {
        let mut c = solve_type1(alpha)?;
        c.extend(solve_type2(alpha)?);
        c
    } else {
        single_switch_candidates(alpha)?
    };

    let mut distinct: Vec<(CandidateTrajectory, ControlLaw)> = Vec::with_capacity(enumerated.len());
    for cand in enumerated {
        let law = cand.law();
        if !distinct.iter().any(|(_, l)| l.approx_eq(&law, 1e-9)) {
            distinct.push((cand, law));
        }
    }

    let south = BlochState::south();
    let candidates: Vec<VerifiedCandidate> = distinct
        .into_par_iter()
        .map(|(candidate, law)| {
            let terminal = propagate(&law, &BlochState::north(), params);
            let residual = terminal.chordal_distance(&south);
            VerifiedCandidate {
                candidate,
                switchings: law.switchings(),
                law,
                terminal,
                residual,
                reaches_target: residual <= endpoint_tol,
            }
        })
        .collect();

    let best = candidates
        .iter()
        .filter(|c| c.reaches_target)
        .map(|c| c.candidate.total_time)
        .fold(f64::INFINITY, f64::min);
    if !best.is_finite() {
        let closest = candidates.iter().map(|c| c.residual).fold(f64::INFINITY, f64::min);
        return Err(Error::SynthesisFailure(format!(
            "none of {} candidates reaches the south pole within {endpoint_tol:e} (closest residual {closest:e}, alpha = {alpha})",
            candidates.len()
        )));
    }
    let mut optima: Vec<VerifiedCandidate> = candidates
        .iter()
        .filter(|c| c.reaches_target && c.candidate.total_time <= best + TIE_TOL)
        .cloned()
        .collect();
    optima.sort_by(|a, b| a.candidate.sort_key(&b.candidate));

    let ratio = PI / (2.0 * alpha);
    Ok(SynthesisResult {
        params: *params,
        endpoint_tol,
        candidates,
        optima,
        switch_bounds: (ratio - 1.0, ratio + 1.0),
        time_bounds: (PI * ratio - 2.0 * PI, PI * ratio + PI),
    })
}

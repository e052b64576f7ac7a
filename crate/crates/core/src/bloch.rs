//! Exact dynamics of the two-level system.
//!
//! On the Bloch sphere the drift `F` rotates about `y3` at rate `cos α` and
//! the control field `G` rotates about `y1` at rate `sin α` (normalized clock,
//! `k = 1`). A constant control `u` therefore generates a rigid rotation about
//! `(u·sin α, 0, cos α)`, so every piecewise-constant law is integrated as a
//! product of axis-angle rotations with no stepping error.
//!
//! The spinor picture integrates `i ψ' = H ψ` with `H = [[-E, Ω], [Ω, E]]`
//! exactly as well. The two are tied by the Hopf projection
//!
//! ```text
//! y1 = -2 Re(ψ1 ψ̄2),  y2 = -2 Im(ψ1 ψ̄2),  y3 = |ψ1|² - |ψ2|²
//! ```
//!
//! under which `hopf(U(t) ψ) = R(k t) hopf(ψ)`: the normalized clock runs `k`
//! times faster than physical time. (The opposite sign choice for `y1, y2`
//! reverses the orientation of both generators.)

use nalgebra::{Rotation3, Unit, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Physical inputs and the two derived quantities every angle and rate
/// depends on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// Level splitting: the two energy levels are `±E` (units with ħ = 1).
    pub energy: f64,
    /// Bound on the field amplitude `|Ω| ≤ M`.
    pub amplitude: f64,
    /// `arctan(M / E)`, in `]0, π/2[`.
    pub alpha: f64,
    /// `2 √(M² + E²)`: rotation rate of a bang arc on the physical clock.
    pub k: f64,
}

impl SystemParams {
    pub fn new(energy: f64, amplitude: f64) -> Result<Self> {
        if !(energy > 0.0 && energy.is_finite()) {
            return Err(Error::Domain(format!("energy must be positive and finite, got {energy}")));
        }
        if !(amplitude > 0.0 && amplitude.is_finite()) {
            return Err(Error::Domain(format!(
                "amplitude must be positive and finite, got {amplitude}"
            )));
        }
        Ok(Self {
            energy,
            amplitude,
            alpha: (amplitude / energy).atan(),
            k: 2.0 * energy.hypot(amplitude),
        })
    }

    /// Parameters with `E = 1` and `M = tan α`.
    pub fn from_alpha(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < std::f64::consts::FRAC_PI_2) {
            return Err(Error::Domain(format!("alpha must lie in ]0, π/2[, got {alpha}")));
        }
        Self::new(1.0, alpha.tan())
    }
}

/// Free-function form of [`SystemParams::new`].
pub fn make_params(energy: f64, amplitude: f64) -> Result<SystemParams> {
    SystemParams::new(energy, amplitude)
}

/// A point on the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "[f64; 3]", try_from = "[f64; 3]")]
pub struct BlochState(Vector3<f64>);

impl BlochState {
    /// Level one.
    pub fn north() -> Self {
        Self(Vector3::new(0.0, 0.0, 1.0))
    }

    /// Level two.
    pub fn south() -> Self {
        Self(Vector3::new(0.0, 0.0, -1.0))
    }

    /// Accepts vectors within 1e-9 of unit length and renormalizes them.
    pub fn new(y1: f64, y2: f64, y3: f64) -> Result<Self> {
        let v = Vector3::new(y1, y2, y3);
        let n = v.norm();
        if !n.is_finite() || (n - 1.0).abs() > 1e-9 {
            return Err(Error::Invalid(format!("Bloch vector must have unit norm, got |y| = {n}")));
        }
        Ok(Self(v / n))
    }

    pub fn vector(&self) -> Vector3<f64> {
        self.0
    }

    pub fn y1(&self) -> f64 {
        self.0.x
    }

    pub fn y2(&self) -> f64 {
        self.0.y
    }

    pub fn y3(&self) -> f64 {
        self.0.z
    }

    /// Euclidean distance in the embedding `R³`.
    pub fn chordal_distance(&self, other: &BlochState) -> f64 {
        (self.0 - other.0).norm()
    }
}

impl From<BlochState> for [f64; 3] {
    fn from(s: BlochState) -> Self {
        [s.0.x, s.0.y, s.0.z]
    }
}

impl TryFrom<[f64; 3]> for BlochState {
    type Error = Error;

    fn try_from(y: [f64; 3]) -> Result<Self> {
        BlochState::new(y[0], y[1], y[2])
    }
}

/// A unit vector of `C²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpinorState {
    pub psi: [Complex64; 2],
}

impl SpinorState {
    pub fn ground() -> Self {
        Self { psi: [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)] }
    }

    pub fn excited() -> Self {
        Self { psi: [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)] }
    }

    /// Normalizes any nonzero vector.
    pub fn new(psi1: Complex64, psi2: Complex64) -> Result<Self> {
        let n = (psi1.norm_sqr() + psi2.norm_sqr()).sqrt();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::Invalid("spinor must be nonzero and finite".into()));
        }
        Ok(Self { psi: [psi1 / n, psi2 / n] })
    }

    pub fn norm(&self) -> f64 {
        (self.psi[0].norm_sqr() + self.psi[1].norm_sqr()).sqrt()
    }

    /// Population of the second level, `|ψ2|²`.
    pub fn excited_population(&self) -> f64 {
        self.psi[1].norm_sqr()
    }

    /// Multiplies by the global phase `e^{iφ}`.
    pub fn with_phase(&self, phi: f64) -> Self {
        let p = Complex64::from_polar(1.0, phi);
        Self { psi: [self.psi[0] * p, self.psi[1] * p] }
    }
}

/// A constant-control segment. `duration` is on the normalized clock.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControlArc {
    pub u: f64,
    pub duration: f64,
}

impl ControlArc {
    pub fn new(u: f64, duration: f64) -> Result<Self> {
        if !(u.abs() <= 1.0) {
            return Err(Error::Invalid(format!("control must satisfy |u| <= 1, got {u}")));
        }
        if !(duration >= 0.0 && duration.is_finite()) {
            return Err(Error::Invalid(format!("arc duration must be finite and >= 0, got {duration}")));
        }
        Ok(Self { u, duration })
    }

    pub fn is_bang(&self) -> bool {
        self.u.abs() == 1.0
    }

    pub fn is_singular(&self) -> bool {
        self.u == 0.0
    }
}

/// An ordered sequence of constant-control arcs.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "RawControlLaw")]
pub struct ControlLaw {
    arcs: Vec<ControlArc>,
    total_time: f64,
}

#[derive(Deserialize)]
struct RawControlLaw {
    arcs: Vec<ControlArc>,
    #[serde(default)]
    total_time: Option<f64>,
}

impl TryFrom<RawControlLaw> for ControlLaw {
    type Error = Error;

    fn try_from(raw: RawControlLaw) -> Result<Self> {
        let law = ControlLaw::new(
            raw.arcs.into_iter().map(|a| ControlArc::new(a.u, a.duration)).collect::<Result<_>>()?,
        );
        if let Some(t) = raw.total_time {
            if (t - law.total_time).abs() > 1e-9 * law.total_time.max(1.0) {
                return Err(Error::Invalid(format!(
                    "total_time {t} disagrees with the sum of arc durations {}",
                    law.total_time
                )));
            }
        }
        Ok(law)
    }
}

impl ControlLaw {
    pub fn new(arcs: Vec<ControlArc>) -> Self {
        let total_time = arcs.iter().map(|a| a.duration).sum();
        Self { arcs, total_time }
    }

    /// Bang-bang law with alternating signs starting at `first_sign`.
    pub fn alternating(first_sign: f64, durations: &[f64]) -> Self {
        let mut u = first_sign.signum();
        let mut arcs = Vec::with_capacity(durations.len());
        for &d in durations {
            arcs.push(ControlArc { u, duration: d });
            u = -u;
        }
        Self::new(arcs)
    }

    pub fn arcs(&self) -> &[ControlArc] {
        &self.arcs
    }

    pub fn total_time(&self) -> f64 {
        self.total_time
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    /// Drops zero-length arcs and merges neighbours carrying the same control.
    pub fn simplified(&self) -> Self {
        let mut arcs: Vec<ControlArc> = Vec::with_capacity(self.arcs.len());
        for arc in self.arcs.iter().filter(|a| a.duration > 0.0) {
            match arcs.last_mut() {
                Some(last) if last.u == arc.u => last.duration += arc.duration,
                _ => arcs.push(*arc),
            }
        }
        Self::new(arcs)
    }

    /// Number of control changes between consecutive nonzero arcs.
    pub fn switchings(&self) -> usize {
        self.simplified().arcs.len().saturating_sub(1)
    }

    /// All control values negated.
    pub fn negated(&self) -> Self {
        Self::new(self.arcs.iter().map(|a| ControlArc { u: -a.u, duration: a.duration }).collect())
    }

    /// Arcs in reverse order. If `self` steers north to south, so does the
    /// reversal: running the reversed-time system and relabeling
    /// `(y1, y2, y3) -> (-y1, y2, -y3)` gives back the original system.
    pub fn reversed(&self) -> Self {
        Self::new(self.arcs.iter().rev().copied().collect())
    }

    /// Same arcs within `tol` (after simplification).
    pub fn approx_eq(&self, other: &ControlLaw, tol: f64) -> bool {
        let (a, b) = (self.simplified(), other.simplified());
        a.arcs.len() == b.arcs.len()
            && a.arcs
                .iter()
                .zip(&b.arcs)
                .all(|(x, y)| x.u == y.u && (x.duration - y.duration).abs() <= tol)
    }
}

/// One sample of an integrated trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectorySample {
    /// Normalized time.
    pub t: f64,
    pub u: f64,
    pub y: BlochState,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub psi: Option<SpinorState>,
}

/// Axis-angle description of the vector field `F + u·G` (normalized clock).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Generator {
    pub axis: Vector3<f64>,
    pub rate: f64,
}

pub fn bloch_generator(u: f64, alpha: f64) -> Generator {
    let w = Vector3::new(u * alpha.sin(), 0.0, alpha.cos());
    let rate = w.norm();
    Generator { axis: w / rate, rate }
}

/// Rotation performed by the constant control `u` over normalized time `t`.
pub fn flow_rotation(u: f64, t: f64, alpha: f64) -> Rotation3<f64> {
    let g = bloch_generator(u, alpha);
    Rotation3::from_axis_angle(&Unit::new_unchecked(g.axis), g.rate * t)
}

pub fn bloch_flow(y: &BlochState, u: f64, t: f64, params: &SystemParams) -> BlochState {
    BlochState(flow_rotation(u, t, params.alpha) * y.0)
}

/// Terminal state of `law` started at `y0`, composed arc by arc.
pub fn propagate(law: &ControlLaw, y0: &BlochState, params: &SystemParams) -> BlochState {
    law.arcs.iter().fold(*y0, |y, arc| bloch_flow(&y, arc.u, arc.duration, params))
}

/// States at the end of every arc, in order.
pub fn arc_endpoints(law: &ControlLaw, y0: &BlochState, params: &SystemParams) -> Vec<BlochState> {
    law.arcs
        .iter()
        .scan(*y0, |y, arc| {
            *y = bloch_flow(y, arc.u, arc.duration, params);
            Some(*y)
        })
        .collect()
}

/// Samples the exact flow at every multiple of `sample_dt` and at every arc
/// boundary. The final sample is the arc-by-arc composition.
pub fn integrate(
    law: &ControlLaw,
    y0: &BlochState,
    sample_dt: f64,
    params: &SystemParams,
) -> Result<Vec<TrajectorySample>> {
    if !(sample_dt > 0.0 && sample_dt.is_finite()) {
        return Err(Error::Invalid(format!("sample_dt must be positive, got {sample_dt}")));
    }
    let arcs: Vec<ControlArc> = law.arcs.iter().copied().filter(|a| a.duration > 0.0).collect();
    let first_u = arcs.first().map_or(0.0, |a| a.u);
    let mut out = vec![TrajectorySample { t: 0.0, u: first_u, y: *y0, psi: None }];

    let mut start = 0.0;
    let mut y_start = *y0;
    for (j, arc) in arcs.iter().enumerate() {
        let end = start + arc.duration;
        let last = j + 1 == arcs.len();
        let mut m = (start / sample_dt).floor() as i64 + 1;
        loop {
            let t = m as f64 * sample_dt;
            if t >= end - 1e-12 {
                break;
            }
            if t > start + 1e-12 {
                let y = bloch_flow(&y_start, arc.u, t - start, params);
                out.push(TrajectorySample { t, u: arc.u, y, psi: None });
            }
            m += 1;
        }
        let y_end = bloch_flow(&y_start, arc.u, arc.duration, params);
        let u_end = if last { arc.u } else { arcs[j + 1].u };
        out.push(TrajectorySample { t: end, u: u_end, y: y_end, psi: None });
        start = end;
        y_start = y_end;
    }
    Ok(out)
}

/// Exact propagator `exp(-i H t)` for the constant Hamiltonian
/// `H = [[-E, Ω], [Ω, E]]`, physical time `t`.
pub fn schrodinger_flow(psi: &SpinorState, omega: f64, t: f64, energy: f64) -> SpinorState {
    // H = Ω σx - E σz, so exp(-iHt) = cos(wt) - i sin(wt) H / w
    let w = omega.hypot(energy);
    let [a, b] = psi.psi;
    if w == 0.0 {
        return *psi;
    }
    let (c, s) = ((w * t).cos(), (w * t).sin() / w);
    let i = Complex64::i();
    let h_a = -energy * a + omega * b;
    let h_b = omega * a + energy * b;
    SpinorState { psi: [c * a - i * s * h_a, c * b - i * s * h_b] }
}

/// Propagation under the complex resonant control `Ω(t) = M e^{i 2E t}` with
/// `H = [[-E, Ω], [Ω*, E]]`. In the interaction picture
/// `ψ = diag(e^{iEt}, e^{-iEt}) φ` the Hamiltonian becomes `M σx`, so
/// the evolution is closed-form.
pub fn schrodinger_rwa_flow(psi: &SpinorState, amplitude: f64, energy: f64, t: f64) -> SpinorState {
    let i = Complex64::i();
    let [a, b] = psi.psi;
    let (c, s) = ((amplitude * t).cos(), (amplitude * t).sin());
    let phi_a = c * a - i * s * b;
    let phi_b = c * b - i * s * a;
    let phase = Complex64::from_polar(1.0, energy * t);
    SpinorState { psi: [phase * phi_a, phase.conj() * phi_b] }
}

/// Projection `S³ → S²` forgetting the global phase.
pub fn hopf_project(psi: &SpinorState) -> BlochState {
    let [a, b] = psi.psi;
    let z = a * b.conj();
    let n2 = a.norm_sqr() + b.norm_sqr();
    let v = Vector3::new(-2.0 * z.re, -2.0 * z.im, a.norm_sqr() - b.norm_sqr()) / n2;
    BlochState(v / v.norm())
}

/// Spinor propagation of a law given on the normalized clock: each arc runs
/// for `duration / k` physical time with field `Ω = u·M`.
pub fn propagate_spinor(law: &ControlLaw, psi0: &SpinorState, params: &SystemParams) -> SpinorState {
    law.arcs.iter().fold(*psi0, |psi, arc| {
        schrodinger_flow(&psi, arc.u * params.amplitude, arc.duration / params.k, params.energy)
    })
}

//! Physical transfer times and the rotating-wave benchmark.
//!
//! In the rotating-wave model the control is complex, the drift can be
//! removed by the interaction picture, and the resonant pulse transfers the
//! population in `π/(2M)`. The real-control model can only do worse, since
//! its admissible velocities are a subset of the rotating-wave ones.

use std::f64::consts::{FRAC_PI_4, PI};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::bloch::SystemParams;
use crate::synthesis::{synthesize, v_of, DEFAULT_ENDPOINT_TOL};
use crate::{Error, Result};

/// Converts a normalized time to physical time (`t_norm / k`).
pub fn physical_time(t_norm: f64, params: &SystemParams) -> f64 {
    t_norm / params.k
}

/// Resonant rotating-wave transfer time `π/(2M)`.
pub fn rwa_time(amplitude: f64) -> f64 {
    PI / (2.0 * amplitude)
}

/// One row of a transfer-time comparison. All times are physical.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub amplitude: f64,
    pub energy: f64,
    pub alpha: f64,
    pub t_lower_phys: f64,
    pub t_upper_phys: f64,
    pub t_exact_phys: Option<f64>,
    pub t_rwa_phys: f64,
    /// Resonance frequency `2E`.
    pub omega_r: f64,
}

/// Builds one comparison row; `exact` runs the full synthesis for `α < π/4`.
pub fn compare(params: &SystemParams, exact: bool) -> Result<ComparisonRow> {
    let alpha = params.alpha;
    let (lower, upper, t_exact) = if alpha >= FRAC_PI_4 {
        let t = physical_time(2.0 * PI, params);
        (t, t, Some(t))
    } else {
        let ratio = PI * PI / (2.0 * alpha);
        let lower = physical_time(ratio - 2.0 * PI, params);
        let upper = physical_time(ratio + PI, params);
        let t = if exact { Some(synthesize(params, DEFAULT_ENDPOINT_TOL)?.optimal_time_phys()) } else { None };
        (lower, upper, t)
    };
    Ok(ComparisonRow {
        amplitude: params.amplitude,
        energy: params.energy,
        alpha,
        t_lower_phys: lower,
        t_upper_phys: upper,
        t_exact_phys: t_exact,
        t_rwa_phys: rwa_time(params.amplitude),
        omega_r: 2.0 * params.energy,
    })
}

/// Comparison rows for a fixed energy and a list of amplitudes, in input order.
pub fn sweep(energy: f64, amplitudes: &[f64], exact: bool) -> Result<Vec<ComparisonRow>> {
    amplitudes
        .par_iter()
        .map(|&m| compare(&SystemParams::new(energy, m)?, exact))
        .collect()
}

/// Physical period of the interior oscillation of the synthesized optimum,
/// `2 v(s_i) / k` (one `+1` and one `-1` interior bang).
pub fn period_estimate(params: &SystemParams) -> Result<f64> {
    if params.alpha >= FRAC_PI_4 {
        return Err(Error::Domain(format!(
            "period_estimate requires alpha < π/4, got {}",
            params.alpha
        )));
    }
    let result = synthesize(params, DEFAULT_ENDPOINT_TOL)?;
    let s_i = result.optima[0].candidate.s_i;
    Ok(2.0 * v_of(s_i, params.alpha)? / params.k)
}

/// Header of the comparison CSV.
pub const CSV_HEADER: &str = "energy,amplitude,alpha,t_lower_phys,t_upper_phys,t_exact_phys,t_rwa_phys,omega_r";

/// Fixed 17-significant-digit float formatting used by every CSV writer.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn rows_to_csv(rows: &[ComparisonRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let exact = r.t_exact_phys.map(fmt_f64).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            fmt_f64(r.energy),
            fmt_f64(r.amplitude),
            fmt_f64(r.alpha),
            fmt_f64(r.t_lower_phys),
            fmt_f64(r.t_upper_phys),
            exact,
            fmt_f64(r.t_rwa_phys),
            fmt_f64(r.omega_r),
        );
    }
    out
}

//! Orchestration behind the `qtopt` binary.
//!
//! Every command renders its artifact to a string; [`execute`] writes it to
//! the requested destination and maps failures to exit codes (`2` usage,
//! `3` synthesis failure, `1` anything else) with a JSON error record on
//! standard error. JSON documents carry `"schema_version": 1`; times carry
//! a `_norm` (normalized clock) or `_phys` (physical clock) suffix.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use serde_json::{json, Value};

use crate::bloch::{integrate, propagate, BlochState, ControlLaw, SystemParams};
use crate::comparison::{compare, fmt_f64, rows_to_csv, sweep};
use crate::oracle::{structured_search, SearchSpec};
use crate::synthesis::{synthesize, SynthesisResult, VerifiedCandidate, DEFAULT_ENDPOINT_TOL};
use crate::Error;

pub const SCHEMA_VERSION: u32 = 1;

/// Header of the trajectory CSV.
pub const TRAJECTORY_HEADER: &str = "t_norm,t_phys,u,y1,y2,y3";

/// Environment variable capping the worker threads used by searches.
pub const THREADS_ENV: &str = "QTOPT_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Synth,
    Traj,
    Verify,
    Oracle,
    Compare,
    Sweep,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Synth => "synth",
            Command::Traj => "traj",
            Command::Verify => "verify",
            Command::Oracle => "oracle",
            Command::Compare => "compare",
            Command::Sweep => "sweep",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub energy: Option<f64>,
    pub amplitude: Option<f64>,
    /// Amplitudes for `sweep`.
    pub amplitudes: Vec<f64>,
    pub sample_dt: f64,
    /// Which optimum `traj` and `verify` use.
    pub optimum_index: usize,
    /// `None` selects the command's natural format.
    pub format: Option<OutputFormat>,
    /// `None` writes to standard output.
    pub output: Option<PathBuf>,
    pub endpoint_tol: f64,
    pub search: SearchSpec,
    /// Input law (or `synth` output) for `verify`.
    pub law_path: Option<PathBuf>,
    /// Run the full synthesis in `sweep` rows with `α < π/4`.
    pub exact: bool,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            energy: None,
            amplitude: None,
            amplitudes: Vec::new(),
            sample_dt: 0.01,
            optimum_index: 0,
            format: None,
            output: None,
            endpoint_tol: DEFAULT_ENDPOINT_TOL,
            search: SearchSpec::default(),
            law_path: None,
            exact: true,
        }
    }

    pub fn with_params(mut self, energy: f64, amplitude: f64) -> Self {
        self.energy = Some(energy);
        self.amplitude = Some(amplitude);
        self
    }

    fn params(&self) -> Result<SystemParams, CliError> {
        match (self.energy, self.amplitude) {
            (Some(e), Some(m)) => SystemParams::new(e, m).map_err(CliError::usage),
            _ => Err(CliError::usage(format!(
                "`{}` requires --energy and --amplitude",
                self.command.name()
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CliErrorKind {
    Usage,
    Synthesis,
    Runtime,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub kind: CliErrorKind,
    pub message: String,
}

impl CliError {
    fn usage(e: impl ToString) -> Self {
        Self { kind: CliErrorKind::Usage, message: e.to_string() }
    }

    fn runtime(e: impl ToString) -> Self {
        Self { kind: CliErrorKind::Runtime, message: e.to_string() }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            CliErrorKind::Usage => 2,
            CliErrorKind::Synthesis => 3,
            CliErrorKind::Runtime => 1,
        }
    }

    /// Structured error record.
    pub fn to_json(&self) -> Value {
        let kind = match self.kind {
            CliErrorKind::Usage => "usage",
            CliErrorKind::Synthesis => "synthesis_failure",
            CliErrorKind::Runtime => "runtime",
        };
        json!({ "schema_version": SCHEMA_VERSION, "error": kind, "message": self.message })
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let kind = match e {
            Error::SynthesisFailure(_) => CliErrorKind::Synthesis,
            Error::Domain(_) | Error::Invalid(_) => CliErrorKind::Usage,
            _ => CliErrorKind::Runtime,
        };
        Self { kind, message: e.to_string() }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

fn params_json(p: &SystemParams) -> Value {
    json!({ "energy": p.energy, "amplitude": p.amplitude, "alpha": p.alpha, "k": p.k })
}

fn candidate_json(c: &VerifiedCandidate, p: &SystemParams) -> Value {
    let t = c.candidate.total_time;
    json!({
        "kind": c.candidate.kind,
        "first_sign": c.candidate.first_sign,
        "s_i_norm": c.candidate.s_i,
        "interior_norm": c.candidate.interior,
        "n_interior": c.candidate.n_interior,
        "s_f_norm": c.candidate.s_f,
        "switchings": c.switchings,
        "total_time_norm": t,
        "total_time_phys": t / p.k,
        "residual": c.residual,
        "reaches_target": c.reaches_target,
        "law": c.law,
    })
}

/// JSON document for a synthesis result.
pub fn synthesis_json(r: &SynthesisResult) -> Value {
    let p = &r.params;
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": "synth",
        "params": params_json(p),
        "regime": if p.alpha >= std::f64::consts::FRAC_PI_4 { "alpha_ge_pi_4" } else { "alpha_lt_pi_4" },
        "endpoint_tol": r.endpoint_tol,
        "optimal_time_norm": r.optimal_time(),
        "optimal_time_phys": r.optimal_time_phys(),
        "switch_bounds": [r.switch_bounds.0, r.switch_bounds.1],
        "time_bounds_norm": [r.time_bounds.0, r.time_bounds.1],
        "time_bounds_phys": [r.time_bounds.0 / p.k, r.time_bounds.1 / p.k],
        "optima": r.optima.iter().map(|c| candidate_json(c, p)).collect::<Vec<_>>(),
        "candidates": r.candidates.iter().map(|c| candidate_json(c, p)).collect::<Vec<_>>(),
    })
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn trajectory_csv(law: &ControlLaw, params: &SystemParams, dt: f64) -> Result<String, CliError> {
    let samples = integrate(law, &BlochState::north(), dt, params).map_err(CliError::usage)?;
    let mut out = String::from(TRAJECTORY_HEADER);
    out.push('\n');
    for s in samples {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            fmt_f64(s.t),
            fmt_f64(s.t / params.k),
            fmt_f64(s.u),
            fmt_f64(s.y.y1()),
            fmt_f64(s.y.y2()),
            fmt_f64(s.y.y3()),
        );
    }
    Ok(out)
}

fn pick_optimum(r: &SynthesisResult, index: usize) -> Result<&VerifiedCandidate, CliError> {
    r.optima.get(index).ok_or_else(|| {
        CliError::usage(format!("optimum index {index} out of range ({} optima)", r.optima.len()))
    })
}

fn verify(config: &RunConfig) -> Result<String, CliError> {
    let path = config
        .law_path
        .as_ref()
        .ok_or_else(|| CliError::usage("`verify` requires --law <FILE>"))?;
    let text = fs::read_to_string(path).map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;

    let law_value = match doc.get("optima") {
        Some(optima) => optima
            .get(config.optimum_index)
            .and_then(|o| o.get("law"))
            .cloned()
            .ok_or_else(|| CliError::usage(format!("no optimum {} with a law", config.optimum_index)))?,
        None => doc.clone(),
    };
    let law: ControlLaw = serde_json::from_value(law_value).map_err(CliError::usage)?;

    let params = match (config.energy, config.amplitude, doc.get("params")) {
        (Some(_), Some(_), _) => config.params()?,
        (_, _, Some(p)) => {
            let e = p.get("energy").and_then(Value::as_f64);
            let m = p.get("amplitude").and_then(Value::as_f64);
            match (e, m) {
                (Some(e), Some(m)) => SystemParams::new(e, m).map_err(CliError::usage)?,
                _ => return Err(CliError::usage("params in the input lack energy/amplitude")),
            }
        }
        _ => config.params()?,
    };

    let terminal = propagate(&law, &BlochState::north(), &params);
    let residual = terminal.chordal_distance(&BlochState::south());
    Ok(pretty(&json!({
        "schema_version": SCHEMA_VERSION,
        "command": "verify",
        "params": params_json(&params),
        "switchings": law.switchings(),
        "total_time_norm": law.total_time(),
        "total_time_phys": law.total_time() / params.k,
        "terminal": terminal,
        "residual": residual,
        "endpoint_tol": config.endpoint_tol,
        "reaches_target": residual <= config.endpoint_tol,
    })))
}

/// Runs one command and returns the rendered artifact.
pub fn run(config: &RunConfig) -> Result<String, CliError> {
    let format = config.format;
    match config.command {
        Command::Synth => {
            if format == Some(OutputFormat::Csv) {
                return Err(CliError::usage("`synth` emits JSON only"));
            }
            let r = synthesize(&config.params()?, config.endpoint_tol)?;
            Ok(pretty(&synthesis_json(&r)))
        }
        Command::Traj => {
            if format == Some(OutputFormat::Json) {
                return Err(CliError::usage("`traj` emits CSV only"));
            }
            if !(config.sample_dt > 0.0) {
                return Err(CliError::usage("--dt must be positive"));
            }
            let params = config.params()?;
            let r = synthesize(&params, config.endpoint_tol)?;
            trajectory_csv(&pick_optimum(&r, config.optimum_index)?.law, &params, config.sample_dt)
        }
        Command::Verify => verify(config),
        Command::Oracle => {
            if format == Some(OutputFormat::Csv) {
                return Err(CliError::usage("`oracle` emits JSON only"));
            }
            let params = config.params()?;
            let report = structured_search(&params, &config.search)?;
            Ok(pretty(&json!({
                "schema_version": SCHEMA_VERSION,
                "command": "oracle",
                "params": params_json(&params),
                "search": config.search,
                "best_time_norm": report.best_time,
                "best_time_phys": report.best_time / params.k,
                "switchings": report.switchings,
                "terminal_residual": report.terminal_residual,
                "evaluations": report.evaluations,
                "best_law": report.best_law,
            })))
        }
        Command::Compare | Command::Sweep => {
            let rows = if config.command == Command::Compare {
                vec![compare(&config.params()?, true)?]
            } else {
                let energy = config.energy.ok_or_else(|| CliError::usage("`sweep` requires --energy"))?;
                if config.amplitudes.is_empty() {
                    return Err(CliError::usage("`sweep` requires --amplitudes"));
                }
                sweep(energy, &config.amplitudes, config.exact)?
            };
            match format.unwrap_or(OutputFormat::Csv) {
                OutputFormat::Csv => Ok(rows_to_csv(&rows)),
                OutputFormat::Json => Ok(pretty(&json!({
                    "schema_version": SCHEMA_VERSION,
                    "command": config.command.name(),
                    "rows": rows,
                }))),
            }
        }
    }
}

/// Runs `config`, writes the artifact and returns the process exit code.
pub fn execute(config: &RunConfig) -> i32 {
    let result = run(config).and_then(|text| match &config.output {
        Some(path) => fs::write(path, text).map_err(|e| CliError::runtime(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", e.to_json());
            e.exit_code()
        }
    }
}

/// Sizes the global worker pool from `QTOPT_THREADS` when it is set.
pub fn init_thread_pool() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::usage(format!("{THREADS_ENV} must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(CliError::runtime)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn missing_params_is_usage_error() {
        let err = run(&RunConfig::new(Command::Synth)).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        let err = run(&RunConfig::new(Command::Synth).with_params(-1.0, 1.0)).unwrap_err();
        assert_eq!(err.kind, CliErrorKind::Usage);
    }

    #[test]
    fn synthesis_failure_exit_code() {
        let mut cfg = RunConfig::new(Command::Synth).with_params(1.0, 0.3);
        cfg.endpoint_tol = 1e-300;
        let err = run(&cfg).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        assert_eq!(err.to_json()["error"], "synthesis_failure");
    }

    #[test]
    fn wrong_format_rejected() {
        let mut cfg = RunConfig::new(Command::Synth).with_params(1.0, 2.0);
        cfg.format = Some(OutputFormat::Csv);
        assert_eq!(run(&cfg).unwrap_err().kind, CliErrorKind::Usage);
    }
}

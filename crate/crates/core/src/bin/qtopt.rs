use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qtopt::cli::{execute, init_thread_pool, Command, OutputFormat, RunConfig};
use qtopt::oracle::SearchSpec;
use qtopt::synthesis::DEFAULT_ENDPOINT_TOL;

/// Time-optimal population transfer for a driven two-level system.
#[derive(Parser)]
#[command(name = "qtopt", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Closed-form optimal synthesis (JSON).
    Synth(Common),
    /// Sampled Bloch trajectory of one optimum (CSV).
    Traj {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0.01)]
        dt: f64,
        #[arg(long, default_value_t = 0)]
        index: usize,
    },
    /// Re-integrate a control law, or an optimum of a `synth` output.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        law: PathBuf,
        #[arg(long, default_value_t = 0)]
        index: usize,
    },
    /// Brute-force search over structured bang-bang laws (JSON).
    Oracle {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 3)]
        n_max: usize,
        #[arg(long, default_value_t = 60)]
        grid_steps: usize,
        #[arg(long, default_value_t = 200)]
        refine_iters: usize,
        #[arg(long, default_value_t = 1e-8)]
        target_tol: f64,
    },
    /// Transfer times against the rotating-wave benchmark for one amplitude.
    Compare(Common),
    /// Comparison rows over a list of amplitudes.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        amplitudes: Vec<f64>,
        /// Emit bounds only for weak fields.
        #[arg(long)]
        no_exact: bool,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    energy: Option<f64>,
    #[arg(long)]
    amplitude: Option<f64>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write here instead of standard output.
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_ENDPOINT_TOL)]
    endpoint_tol: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

fn config(command: Command, common: Common) -> RunConfig {
    let mut c = RunConfig::new(command);
    c.energy = common.energy;
    c.amplitude = common.amplitude;
    c.format = common.format.map(|f| match f {
        Format::Csv => OutputFormat::Csv,
        Format::Json => OutputFormat::Json,
    });
    c.output = common.output;
    c.endpoint_tol = common.endpoint_tol;
    c
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match cli.command {
        Sub::Synth(common) => config(Command::Synth, common),
        Sub::Traj { common, dt, index } => {
            let mut c = config(Command::Traj, common);
            c.sample_dt = dt;
            c.optimum_index = index;
            c
        }
        Sub::Verify { common, law, index } => {
            let mut c = config(Command::Verify, common);
            c.law_path = Some(law);
            c.optimum_index = index;
            c
        }
        Sub::Oracle { common, n_max, grid_steps, refine_iters, target_tol } => {
            let mut c = config(Command::Oracle, common);
            c.search = SearchSpec { n_max, grid_steps, refine_iters, target_tol, ..SearchSpec::default() };
            c
        }
        Sub::Compare(common) => config(Command::Compare, common),
        Sub::Sweep { common, amplitudes, no_exact } => {
            let mut c = config(Command::Sweep, common);
            c.amplitudes = amplitudes;
            c.exact = !no_exact;
            c
        }
    };
    if let Err(e) = init_thread_pool() {
        eprintln!("{}", e.to_json());
        return ExitCode::from(e.exit_code() as u8);
    }
    ExitCode::from(execute(&cfg) as u8)
}

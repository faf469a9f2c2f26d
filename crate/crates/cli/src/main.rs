use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use driftwalk_cli::{cmd_sample_exit, cmd_solve, cmd_validate, RunConfig, SampleExitParams, Status};

/// Monte Carlo solver for the drifted Dirichlet problem `aΔu + b·∇u = 0`.
///
/// Exit status: 0 on success, 1 on a configuration error, 2 when any
/// estimate is degraded or any validation check fails.
#[derive(Parser)]
#[command(name = "driftwalk", version)]
struct Cli {
    /// Override `execution.seed` (solve) or the sampling seed (sample-exit).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads. Changes wall-clock time only, never output bytes.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate u at the configured point or grid.
    Solve {
        config: PathBuf,
        /// Print the effective configuration and exit.
        #[arg(long)]
        print_config: bool,
    },
    /// Run a validation suite: bessel, sampler, oracle, mvp, laplace, end2end or all.
    Validate {
        selector: String,
        /// JSON report destination; standard output when absent.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Draw exit directions from the centre of a ball.
    SampleExit {
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        /// Drift components, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        b: Vec<f64>,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[arg(long)]
        n: usize,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> anyhow::Result<Status> {
    match cli.command {
        Command::Solve { config, print_config } => {
            let mut cfg = RunConfig::load(&config)?;
            if let Some(s) = cli.seed {
                cfg.execution.seed = s;
            }
            if let Some(w) = cli.workers {
                anyhow::ensure!(w >= 1, "--workers must be at least 1");
                cfg.execution.workers = Some(w);
            }
            if print_config {
                print!("{}", cfg.to_toml());
                return Ok(Status::Success);
            }
            cmd_solve(&cfg)
        }
        Command::Validate { selector, output } => match cli.workers {
            Some(w) => driftwalk::estimator::with_workers(w, || cmd_validate(&selector, output.as_deref())),
            None => cmd_validate(&selector, output.as_deref()),
        },
        Command::SampleExit { dim, a, b, radius, n, output } => {
            let b = if b.is_empty() { vec![0.0; dim] } else { b };
            let params = SampleExitParams { dim, a, b, radius, n, seed: cli.seed.unwrap_or(0) };
            cmd_sample_exit(&params, output.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let status = run(Cli::parse()).unwrap_or_else(|e| {
        eprintln!("error: {e:#}");
        Status::ConfigError
    });
    ExitCode::from(status as u8)
}

//! `hardy`: sharp fractional Hardy constants and numerical certificates.
//!
//! Exit codes: 0 all checks passed, 1 a check failed beyond tolerance,
//! 2 bad arguments, 3 engine failure.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::{parse_n_list, EngineSettings, OutputFormat, ParamsConfig, RunConfig};
use hardy_core::{EngineConfig, HardyError};

#[derive(Parser)]
#[command(name = "hardy", version, about = "Sharp fractional Hardy inequalities for Sobolev-Bregman forms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print κ_{d,p,α} and the related closed-form constants.
    Constants {
        #[command(flatten)]
        common: Common,
    },
    /// Check the Hardy inequality on a battery of test functions.
    Verify {
        #[arg(value_enum)]
        target: Target,
        #[command(flatten)]
        common: Common,
        /// Battery name: default, small, or a function count.
        #[arg(long, default_value = "default")]
        battery: String,
        /// Domain, e.g. interval@0,1,2,3, box@0,0,1,1, ball@0,0,1, polytope@0,0,1,0,0,1.
        #[arg(long)]
        body: Option<String>,
    },
    /// Tabulate ratios or constants over a parameter grid.
    Sweep {
        #[arg(value_enum)]
        kind: SweepKind,
        #[command(flatten)]
        common: Common,
        /// Comma-separated extremal indices, e.g. 4,16,64.
        #[arg(long)]
        n: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Halfspace,
    Interval,
    Convex,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepKind {
    Extremal,
    AlphaGrid,
    PGrid,
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value_t = 1)]
    d: usize,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long, default_value_t = EngineConfig::default().tol)]
    tol: f64,
    #[arg(long, default_value_t = EngineConfig::default().samples)]
    samples: u64,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    #[arg(long)]
    csv: bool,
    /// Write the report to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn run_config(&self, command: &str) -> RunConfig {
        let output = if self.json {
            OutputFormat::Json
        } else if self.csv {
            OutputFormat::Csv
        } else {
            OutputFormat::Plain
        };
        RunConfig {
            command: command.into(),
            target: None,
            params: ParamsConfig { d: self.d, p: self.p, alpha: self.alpha, beta: self.beta },
            engine: EngineSettings {
                tol: self.tol,
                samples: self.samples,
                strata: EngineConfig::default().strata,
                seed: self.seed,
            },
            output,
            battery: None,
            body: None,
            n: None,
        }
    }
}

fn exit_code(e: &HardyError) -> u8 {
    if e.is_argument_error() {
        2
    } else {
        3
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = std::env::var("HARDY_THREADS").ok().and_then(|v| v.parse::<usize>().ok());
    hardy_core::parallel::init_threads(threads);

    let (cfg, out, outcome) = match &cli.command {
        Command::Constants { common } => {
            let cfg = common.run_config("constants");
            let r = commands::constants(&cfg);
            (cfg, common.out.clone(), r)
        }
        Command::Verify { target, common, battery, body } => {
            let mut cfg = common.run_config("verify");
            let name = match target {
                Target::Halfspace => "halfspace",
                Target::Interval => "interval",
                Target::Convex => "convex",
            };
            cfg.target = Some(name.into());
            cfg.battery = Some(battery.clone());
            cfg.body = body.clone();
            let r = commands::verify(&cfg, name);
            (cfg, common.out.clone(), r)
        }
        Command::Sweep { kind, common, n } => {
            let mut cfg = common.run_config("sweep");
            let name = match kind {
                SweepKind::Extremal => "extremal",
                SweepKind::AlphaGrid => "alpha-grid",
                SweepKind::PGrid => "p-grid",
            };
            cfg.target = Some(name.into());
            let r = match n.as_deref().map(parse_n_list).transpose() {
                Ok(list) => {
                    cfg.n = list;
                    commands::sweep(&cfg, name)
                }
                Err(e) => Err(e),
            };
            (cfg, common.out.clone(), r)
        }
    };

    let outcome = match outcome {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_argument_error() {
                eprintln!("run `hardy --help` for usage");
            }
            return ExitCode::from(exit_code(&e));
        }
    };
    let text = match output::render(&cfg, &outcome) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot render report: {e}");
            return ExitCode::from(3);
        }
    };
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(if outcome.passed { 0 } else { 1 })
}

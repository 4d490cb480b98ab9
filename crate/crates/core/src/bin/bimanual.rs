use std::io;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use bimanual_core::app::{self, AppError, EXIT_CONFIG};
use bimanual_core::config::ScenarioConfig;
use bimanual_core::SolverMode;

/// Planar two-finger manipulation kinematics.
#[derive(Debug, Parser)]
#[command(name = "bimanual", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Paper,
    Bracketed,
}

#[derive(Debug, clap::Args)]
struct Overrides {
    /// Solver mode, overriding the config.
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    /// Number of time steps, overriding the config.
    #[arg(long)]
    steps: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate a scenario and write CSV, SVG and report files.
    Run {
        config: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
        /// Output directory (falls back to $BIMANUAL_OUT_DIR, then the config, then ./out).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve the scenario's final pose once and print the joints.
    Ik {
        config: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Recompute reach and base angles for the published grasp (or the
    /// grasp in CONFIG) and compare with the published table.
    Validate { config: Option<PathBuf> },
    /// Compare the analytical solver with a brute-force joint grid.
    Oracle {
        config: PathBuf,
        /// Grid points per joint.
        #[arg(long, default_value_t = 100)]
        grid: usize,
        /// Seed for additional random reachable targets.
        #[arg(long)]
        seed: Option<u64>,
        /// Random targets per finger when --seed is given.
        #[arg(long, default_value_t = 10)]
        samples: usize,
    },
}

fn load(path: &Path, overrides: Option<&Overrides>) -> Result<ScenarioConfig, AppError> {
    let mut cfg = app::load_config(path)?;
    if let Some(o) = overrides {
        if let Some(mode) = o.mode {
            cfg.set_mode(match mode {
                Mode::Paper => SolverMode::PaperLiteral,
                Mode::Bracketed => SolverMode::Bracketed,
            });
        }
        if let Some(steps) = o.steps {
            cfg.set_steps(steps)?;
        }
    }
    Ok(cfg)
}

fn dispatch(cli: Cli) -> Result<u8, AppError> {
    let mut stdout = io::stdout().lock();
    let io_fail = |e: io::Error| AppError::Io {
        path: PathBuf::from("<stdout>"),
        source: e,
    };
    match cli.command {
        Command::Run { config, overrides, out } => {
            let cfg = load(&config, Some(&overrides))?;
            let dir = app::resolve_out_dir(out, Some(&cfg));
            let outcome = app::run(&cfg, &dir)?;
            print!("{}", outcome.summary);
            for f in &outcome.files {
                println!("wrote {}", f.display());
            }
            Ok(outcome.exit_code)
        }
        Command::Ik { config, overrides } => {
            let cfg = load(&config, Some(&overrides))?;
            app::ik(&cfg, &mut stdout).map_err(io_fail)
        }
        Command::Validate { config } => match config {
            Some(path) => {
                let cfg = load(&path, None)?;
                let bases = cfg.scenario.fingers.map(|f| f.base);
                app::validate(Some((&cfg.scenario.initial, bases)), &mut stdout).map_err(io_fail)
            }
            None => app::validate(None, &mut stdout).map_err(io_fail),
        },
        Command::Oracle {
            config,
            grid,
            seed,
            samples,
        } => {
            if grid < 2 {
                return Err(AppError::Config(bimanual_core::config::ConfigError {
                    key: "--grid".into(),
                    message: format!("must be at least 2, got {grid}"),
                }));
            }
            let cfg = load(&config, None)?;
            app::oracle(&cfg, grid, seed, samples, &mut stdout).map_err(io_fail)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_CONFIG } else { 0 });
        }
    };
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

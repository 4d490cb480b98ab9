//! Command implementations behind the `bimanual` binary.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::config::{parse_config, ConfigError, ScenarioConfig};
use crate::fixtures::{validate_fixtures, TABLE1_BASE1, TABLE1_BASE2};
use crate::ik::{reach_interval, solve_contacts, solve_finger_ik, Branch, SolverConfig, SolverMode};
use crate::motion::contacts_at_step;
use crate::oracle::{brute_force_reach_oracle, grid_resolution_bound};
use crate::output::{render_report, svg_contact_paths, svg_error_curves, write_trajectory_csv};
use crate::planar::{ContactState, FingerParams, Point2D};
use crate::sim::{error_report, run_scenario, verify_strategy_signature, SimError, Trajectory};

pub const EXIT_OK: u8 = 0;
pub const EXIT_SOLVER: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_IO: u8 = 3;

/// Overrides the output directory when `--out` is not given.
pub const OUT_DIR_ENV: &str = "BIMANUAL_OUT_DIR";
pub const DEFAULT_OUT_DIR: &str = "out";

#[derive(Debug, Error)]
pub enum AppError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl AppError {
    pub fn exit_code(&self) -> u8 {
        match self {
            AppError::Config(_) => EXIT_CONFIG,
            AppError::Io { .. } => EXIT_IO,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> AppError + '_ {
    move |source| AppError::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn load_config(path: &Path) -> Result<ScenarioConfig, AppError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    Ok(parse_config(&text)?)
}

/// `--out` wins, then the environment variable, then the config, then `out`.
pub fn resolve_out_dir(flag: Option<PathBuf>, cfg: Option<&ScenarioConfig>) -> PathBuf {
    flag.or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .or_else(|| cfg.and_then(|c| c.output_dir.clone()))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
}

#[derive(Debug)]
pub struct RunOutcome {
    pub exit_code: u8,
    pub files: Vec<PathBuf>,
    pub trajectory: Trajectory,
    pub summary: String,
}

fn write_file(path: PathBuf, contents: &[u8], files: &mut Vec<PathBuf>) -> Result<(), AppError> {
    fs::write(&path, contents).map_err(io_err(&path))?;
    files.push(path);
    Ok(())
}

/// Runs the scenario and writes `<name>_trajectory.csv`, `<name>_report.txt`,
/// `<name>_paths.svg` and `<name>_errors.svg` into `out_dir`. A failing step
/// keeps the partial outputs and adds a `<name>.FAILED` marker.
pub fn run(cfg: &ScenarioConfig, out_dir: &Path) -> Result<RunOutcome, AppError> {
    fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    let stem = |suffix: &str| out_dir.join(format!("{}{suffix}", cfg.name));
    let mut files = Vec::new();

    let (traj, failure) = match run_scenario(&cfg.scenario) {
        Ok(t) => (t, None),
        Err(SimError::Step { step, source, partial }) => (partial, Some(format!("step {step}: {source}"))),
        Err(SimError::Setup(e)) => {
            return Err(AppError::Config(ConfigError {
                key: "scenario".into(),
                message: e.to_string(),
            }))
        }
    };

    let mut csv_bytes = Vec::new();
    write_trajectory_csv(&traj, &mut csv_bytes).map_err(|e| AppError::Io {
        path: stem("_trajectory.csv"),
        source: io::Error::other(e),
    })?;
    write_file(stem("_trajectory.csv"), &csv_bytes, &mut files)?;

    let report = if traj.records.is_empty() {
        None
    } else {
        error_report(&traj).ok()
    };
    let signature =
        (failure.is_none() && traj.records.len() >= 2).then(|| verify_strategy_signature(&traj, cfg.scenario.strategy));
    let text = render_report(cfg, &traj, report.as_ref(), signature.as_ref(), failure.as_deref());
    write_file(stem("_report.txt"), text.as_bytes(), &mut files)?;

    if !traj.records.is_empty() {
        let paths = svg_contact_paths(&traj, &format!("{}: contact paths", cfg.name));
        write_file(stem("_paths.svg"), paths.as_bytes(), &mut files)?;
        let errors = svg_error_curves(&traj, &format!("{}: contact errors", cfg.name));
        write_file(stem("_errors.svg"), errors.as_bytes(), &mut files)?;
    }

    let exit_code = match &failure {
        Some(msg) => {
            write_file(stem(".FAILED"), format!("{msg}\n").as_bytes(), &mut files)?;
            EXIT_SOLVER
        }
        None if !traj.converged() => EXIT_SOLVER,
        None => EXIT_OK,
    };
    Ok(RunOutcome {
        exit_code,
        files,
        trajectory: traj,
        summary: text,
    })
}

fn fmt_joints(j: [f64; 3]) -> String {
    format!("{:.4} / {:.4} / {:.4}", j[0], j[1], j[2])
}

/// Solves the final desired pose of the scenario once and prints the joints.
pub fn ik(cfg: &ScenarioConfig, out: &mut dyn Write) -> io::Result<u8> {
    let sc = &cfg.scenario;
    let contacts = match contacts_at_step(&sc.initial, &sc.motion, sc.motion.steps) {
        Ok(c) => c,
        Err(e) => {
            writeln!(out, "error: {e}")?;
            return Ok(EXIT_SOLVER);
        }
    };
    let [f1, f2] = &sc.fingers;
    let sol = match solve_contacts(f1, f2, &contacts, sc.phi_c, &sc.solver) {
        Ok(s) => s,
        Err(e) => {
            writeln!(out, "error: {e}")?;
            return Ok(EXIT_SOLVER);
        }
    };
    writeln!(
        out,
        "scenario: {} ({} mode, {:?} branch)",
        cfg.name,
        sc.solver.mode.name(),
        sol.branch
    )?;
    for (i, (c, s)) in [(contacts.c1, &sol.finger1), (contacts.c2, &sol.finger2)]
        .into_iter()
        .enumerate()
    {
        writeln!(
            out,
            "finger {}: target ({:.4}, {:.4}) mm  joints {} deg  phi_c {:.4} deg  residual {:.3e} mm  iterations {}  {}",
            i + 1,
            c.x,
            c.y,
            fmt_joints(s.joints.to_degrees()),
            s.phi_c_final.to_degrees(),
            s.residual,
            s.iterations,
            if s.converged { "converged" } else { "NOT CONVERGED" }
        )?;
    }
    Ok(if sol.converged() { EXIT_OK } else { EXIT_SOLVER })
}

/// Recomputes reach and base angles from the grasp (published one by
/// default) and prints them beside the published values.
pub fn validate(grasp: Option<(&ContactState, [Point2D; 2])>, out: &mut dyn Write) -> io::Result<u8> {
    let published = crate::fixtures::table1_contacts();
    let (contacts, bases) = grasp.unwrap_or((&published, [TABLE1_BASE1, TABLE1_BASE2]));
    match validate_fixtures(contacts, bases) {
        Ok(rep) => {
            writeln!(out, "{rep}")?;
            Ok(if rep.passed() { EXIT_OK } else { EXIT_SOLVER })
        }
        Err(e) => {
            writeln!(out, "error: {e}")?;
            Ok(EXIT_SOLVER)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleRow {
    pub finger: usize,
    pub target: Point2D,
    pub analytic: f64,
    pub brute_force: f64,
    pub bound: f64,
}

impl OracleRow {
    pub fn dominated(&self) -> bool {
        self.analytic <= self.brute_force + self.bound
    }
}

fn random_targets(finger: &FingerParams, rng: &mut ChaCha8Rng, n: usize) -> Vec<Point2D> {
    let (lo, hi) = reach_interval(finger, SolverConfig::default().phi_max);
    (0..n)
        .map(|_| {
            let s = rng.gen_range(lo + 1e-6..hi - 1e-6);
            let a = rng.gen_range(0.0..std::f64::consts::PI);
            finger.base + Point2D::new(s * a.cos(), s * a.sin())
        })
        .collect()
}

/// Compares the bracketed solver with the joint-grid oracle on the
/// scenario's start and end contacts, plus `samples` random reachable
/// targets per finger when a seed is given.
pub fn oracle(
    cfg: &ScenarioConfig,
    grid: usize,
    seed: Option<u64>,
    samples: usize,
    out: &mut dyn Write,
) -> io::Result<u8> {
    let sc = &cfg.scenario;
    let solver = SolverConfig {
        mode: SolverMode::Bracketed,
        ..sc.solver
    };
    let mut targets: [Vec<Point2D>; 2] = [Vec::new(), Vec::new()];
    for k in [0, sc.motion.steps] {
        if let Ok(c) = contacts_at_step(&sc.initial, &sc.motion, k) {
            targets[0].push(c.c1);
            targets[1].push(c.c2);
        }
    }
    if let Some(seed) = seed {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for (f, t) in sc.fingers.iter().zip(targets.iter_mut()) {
            t.extend(random_targets(f, &mut rng, samples));
        }
    }

    writeln!(out, "oracle grid {grid}^3 per finger")?;
    writeln!(
        out,
        "finger  target_x     target_y     analytic_mm  grid_mm      bound_mm     ok"
    )?;
    let mut all_ok = true;
    for (i, f) in sc.fingers.iter().enumerate() {
        let bound = grid_resolution_bound(f, grid);
        for &t in &targets[i] {
            let analytic = match solve_finger_ik(f, t, sc.phi_c[i], Branch::AlphaLess, &solver) {
                Ok(s) => s.residual,
                Err(e) => {
                    writeln!(out, "{:<7} {:<12.4} {:<12.4} error: {e}", i + 1, t.x, t.y)?;
                    all_ok = false;
                    continue;
                }
            };
            let brute = brute_force_reach_oracle(f, t, grid);
            let row = OracleRow {
                finger: i + 1,
                target: t,
                analytic,
                brute_force: brute.residual,
                bound,
            };
            all_ok &= row.dominated();
            writeln!(
                out,
                "{:<7} {:<12.4} {:<12.4} {:<12.3e} {:<12.4e} {:<12.4e} {}",
                row.finger,
                t.x,
                t.y,
                row.analytic,
                row.brute_force,
                row.bound,
                if row.dominated() { "yes" } else { "NO" }
            )?;
        }
    }
    Ok(if all_ok { EXIT_OK } else { EXIT_SOLVER })
}

//! JSON scenario configuration.
//!
//! Angles are degrees and lengths millimetres in the document. Unknown keys
//! are rejected at every level.

use std::path::PathBuf;

use serde::Deserialize;
use thiserror::Error;

use crate::error::Error;
use crate::fixtures::{DEFAULT_QUANTIZATION_DEG, SPHERE_RADIUS_MM};
use crate::ik::{SolverConfig, SolverMode, MAX_SPREAD};
use crate::motion::{MotionKind, MotionSpec};
use crate::planar::{Chirality, ContactState, Displacement2D, FingerParams, JointRange, Point2D, Pose2D};
use crate::sim::{check_compatible, classify_strategy, Scenario, Strategy};

pub const SCHEMA: &str = "bimanual-scenario/1";

#[derive(Debug, Clone, PartialEq, Error)]
#[error("config key `{key}`: {message}")]
pub struct ConfigError {
    pub key: String,
    pub message: String,
}

impl ConfigError {
    fn new(key: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            key: key.into(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    schema: String,
    #[serde(default)]
    name: Option<String>,
    fingers: [FingerDoc; 2],
    contacts: [[f64; 2]; 2],
    #[serde(default)]
    object: Option<ObjectDoc>,
    motion: MotionDoc,
    duration_s: f64,
    steps: usize,
    #[serde(default)]
    strategy: Option<StrategyDoc>,
    ending_orientations_deg: [f64; 2],
    #[serde(default)]
    solver: SolverDoc,
    #[serde(default = "default_quantization")]
    quantization_deg: f64,
    #[serde(default = "default_sphere")]
    sphere_radius_mm: f64,
    #[serde(default)]
    output_dir: Option<PathBuf>,
}

fn default_quantization() -> f64 {
    DEFAULT_QUANTIZATION_DEG
}

fn default_sphere() -> f64 {
    SPHERE_RADIUS_MM
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FingerDoc {
    base: [f64; 2],
    links: [f64; 3],
    chirality: ChiralityDoc,
    #[serde(default)]
    joint_limits_deg: Option<[[f64; 2]; 3]>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
enum ChiralityDoc {
    FingerOne,
    FingerTwo,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ObjectDoc {
    x: f64,
    y: f64,
    #[serde(default)]
    phi_deg: f64,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum MotionDoc {
    Translation(TranslationDoc),
    Rotation(RotationDoc),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TranslationDoc {
    dx: f64,
    dy: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RotationDoc {
    beta_deg: f64,
    #[serde(default)]
    center: Option<[f64; 2]>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
enum StrategyDoc {
    Simultaneous,
    Interleaved,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeDoc {
    Paper,
    Bracketed,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct SolverDoc {
    mode: ModeDoc,
    tol_mm: f64,
    max_iter: usize,
    phi_max_deg: f64,
}

impl Default for SolverDoc {
    fn default() -> Self {
        let d = SolverConfig::default();
        Self {
            mode: ModeDoc::Bracketed,
            tol_mm: d.tol,
            max_iter: d.max_iter,
            phi_max_deg: d.phi_max.to_degrees(),
        }
    }
}

/// A fully validated scenario plus the metadata carried into reports.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub name: String,
    pub scenario: Scenario,
    /// True when the strategy was classified from the motion.
    pub strategy_auto: bool,
    pub sphere_radius_mm: f64,
    pub output_dir: Option<PathBuf>,
}

impl ScenarioConfig {
    pub fn set_mode(&mut self, mode: SolverMode) {
        self.scenario.solver.mode = mode;
    }

    pub fn set_steps(&mut self, steps: usize) -> Result<(), ConfigError> {
        if steps == 0 {
            return Err(ConfigError::new("steps", "must be at least 1, got 0"));
        }
        self.scenario.motion.steps = steps;
        Ok(())
    }
}

fn finite(key: &str, values: &[f64]) -> Result<(), ConfigError> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(ConfigError::new(key, format!("must be finite, got {values:?}")))
    }
}

fn finger_from_doc(i: usize, doc: &FingerDoc) -> Result<FingerParams, ConfigError> {
    let limits = doc
        .joint_limits_deg
        .map(|l| l.map(|[lo, hi]| JointRange::new(lo.to_radians(), hi.to_radians())));
    FingerParams::new(
        Point2D::new(doc.base[0], doc.base[1]),
        doc.links,
        match doc.chirality {
            ChiralityDoc::FingerOne => Chirality::FingerOne,
            ChiralityDoc::FingerTwo => Chirality::FingerTwo,
        },
        limits,
    )
    .map_err(|e| match e {
        Error::InvalidFinger { field, reason } => {
            let key = field
                .replace("link_lengths", "links")
                .replace("joint_limits", "joint_limits_deg");
            ConfigError::new(format!("fingers[{i}].{key}"), reason)
        }
        other => ConfigError::new(format!("fingers[{i}]"), other.to_string()),
    })
}

pub fn parse_config(document: &str) -> Result<ScenarioConfig, ConfigError> {
    let doc: Document = serde_json::from_str(document).map_err(|e| ConfigError::new("document", e.to_string()))?;
    if doc.schema != SCHEMA {
        return Err(ConfigError::new(
            "schema",
            format!("expected \"{SCHEMA}\", got \"{}\"", doc.schema),
        ));
    }

    let fingers = [
        finger_from_doc(0, &doc.fingers[0])?,
        finger_from_doc(1, &doc.fingers[1])?,
    ];

    let [[x1, y1], [x2, y2]] = doc.contacts;
    let initial = ContactState::new(Point2D::new(x1, y1), Point2D::new(x2, y2))
        .map_err(|e| ConfigError::new("contacts", e.to_string()))?;

    let object0 = match &doc.object {
        Some(o) => {
            Pose2D::new(o.x, o.y, o.phi_deg.to_radians()).map_err(|e| ConfigError::new("object", e.to_string()))?
        }
        None => {
            let m = initial.midpoint();
            Pose2D {
                x: m.x,
                y: m.y,
                phi: 0.0,
            }
        }
    };

    let kind = match &doc.motion {
        MotionDoc::Translation(t) => {
            finite("motion.translation", &[t.dx, t.dy])?;
            MotionKind::Translation(Displacement2D::translation(t.dx, t.dy))
        }
        MotionDoc::Rotation(r) => {
            finite("motion.rotation.beta_deg", &[r.beta_deg])?;
            let center = match r.center {
                Some([cx, cy]) => {
                    finite("motion.rotation.center", &[cx, cy])?;
                    Point2D::new(cx, cy)
                }
                None => object0.position(),
            };
            MotionKind::Rotation {
                beta: r.beta_deg.to_radians(),
                center,
            }
        }
    };
    if !(doc.duration_s.is_finite() && doc.duration_s > 0.0) {
        return Err(ConfigError::new(
            "duration_s",
            format!("must be positive, got {}", doc.duration_s),
        ));
    }
    if doc.steps == 0 {
        return Err(ConfigError::new("steps", "must be at least 1, got 0"));
    }
    let motion =
        MotionSpec::new(kind, doc.duration_s, doc.steps).map_err(|e| ConfigError::new("motion", e.to_string()))?;

    let (strategy, strategy_auto) = match doc.strategy {
        Some(s) => {
            let s = match s {
                StrategyDoc::Simultaneous => Strategy::Simultaneous,
                StrategyDoc::Interleaved => Strategy::Interleaved,
            };
            check_compatible(s, &motion).map_err(|e| ConfigError::new("strategy", e.to_string()))?;
            (s, false)
        }
        None => (
            classify_strategy(&motion).map_err(|e| ConfigError::new("motion", e.to_string()))?,
            true,
        ),
    };

    finite("ending_orientations_deg", &doc.ending_orientations_deg)?;
    let phi_c = doc.ending_orientations_deg.map(f64::to_radians);

    let solver = SolverConfig {
        mode: match doc.solver.mode {
            ModeDoc::Paper => SolverMode::PaperLiteral,
            ModeDoc::Bracketed => SolverMode::Bracketed,
        },
        tol: doc.solver.tol_mm,
        max_iter: doc.solver.max_iter,
        phi_max: doc.solver.phi_max_deg.to_radians(),
    };
    if !(solver.tol.is_finite() && solver.tol > 0.0) {
        return Err(ConfigError::new(
            "solver.tol_mm",
            format!("must be positive, got {}", solver.tol),
        ));
    }
    if solver.max_iter == 0 {
        return Err(ConfigError::new("solver.max_iter", "must be at least 1, got 0"));
    }
    if !(solver.phi_max > 0.0 && solver.phi_max <= MAX_SPREAD + 1e-12) {
        return Err(ConfigError::new(
            "solver.phi_max_deg",
            format!("must lie in (0, 270], got {}", doc.solver.phi_max_deg),
        ));
    }
    let solver = SolverConfig {
        phi_max: solver.phi_max.min(MAX_SPREAD),
        ..solver
    };

    if !(doc.quantization_deg.is_finite() && doc.quantization_deg > 0.0) {
        return Err(ConfigError::new(
            "quantization_deg",
            format!("must be positive, got {}", doc.quantization_deg),
        ));
    }
    if !(doc.sphere_radius_mm.is_finite() && doc.sphere_radius_mm > 0.0) {
        return Err(ConfigError::new(
            "sphere_radius_mm",
            format!("must be positive, got {}", doc.sphere_radius_mm),
        ));
    }

    Ok(ScenarioConfig {
        name: doc.name.unwrap_or_else(|| "scenario".into()),
        scenario: Scenario {
            fingers,
            initial,
            object0,
            motion,
            strategy,
            phi_c,
            solver,
            quantization: Some(doc.quantization_deg.to_radians()),
        },
        strategy_auto,
        sphere_radius_mm: doc.sphere_radius_mm,
        output_dir: doc.output_dir,
    })
}

//! Time-stepped simulation of the two manipulation strategies and the
//! desired / computed / actual error analysis.
//!
//! The "actual" channel is forward kinematics of the solver's joints rounded
//! to an actuator resolution. It stands in for a physical or external
//! simulator and is not a reproduction of one.

use thiserror::Error;

use crate::error::{Error, Result};
use crate::finger::tip_position;
use crate::ik::{solve_bimanual, SolverConfig};
use crate::motion::{apply_object_motion, interpolate_motion, MotionKind, MotionSpec, MotionStep};
use crate::planar::{wrap_angle, Chirality, ContactState, FingerParams, JointVector, Point2D, Pose2D};

/// Flexion changes at or below this magnitude count as no change, rad.
pub const FLEX_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Both fingers flex or extend together; vertical object translation.
    Simultaneous,
    /// One finger flexes while the other extends; rotation or in-plane
    /// translation.
    Interleaved,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Simultaneous => "simultaneous",
            Strategy::Interleaved => "interleaved",
        }
    }
}

/// Picks the strategy a motion calls for. Any translation with an x
/// component is interleaved.
pub fn classify_strategy(motion: &MotionSpec) -> Result<Strategy> {
    if motion.kind.is_zero() {
        return Err(Error::DegenerateMotion);
    }
    Ok(match motion.kind {
        MotionKind::Translation(d) if d.dx == 0.0 => Strategy::Simultaneous,
        _ => Strategy::Interleaved,
    })
}

pub fn check_compatible(strategy: Strategy, motion: &MotionSpec) -> Result<()> {
    if motion.kind.is_zero() {
        return Ok(());
    }
    let ok = match (strategy, motion.kind) {
        (Strategy::Simultaneous, MotionKind::Translation(d)) => d.dx == 0.0,
        (Strategy::Simultaneous, MotionKind::Rotation { .. }) => false,
        (Strategy::Interleaved, MotionKind::Translation(d)) => d.dx != 0.0,
        (Strategy::Interleaved, MotionKind::Rotation { .. }) => true,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::IncompatibleStrategy {
            strategy: strategy.name(),
            motion: motion.kind.name(),
        })
    }
}

/// Rounds each joint to the nearest multiple of `resolution`, halves away
/// from zero.
pub fn quantize_joints(joints: &JointVector, resolution: f64) -> JointVector {
    assert!(resolution > 0.0, "quantization resolution must be positive");
    let q = |a: f64| (a / resolution).round() * resolution;
    JointVector::new(q(joints.theta1), q(joints.theta2), q(joints.theta3))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub fingers: [FingerParams; 2],
    pub initial: ContactState,
    pub object0: Pose2D,
    pub motion: MotionSpec,
    pub strategy: Strategy,
    /// Initial ending orientations per finger, rad.
    pub phi_c: [f64; 2],
    pub solver: SolverConfig,
    /// Actuator resolution for the actual channel, rad. `None` makes the
    /// actual channel identical to the computed one.
    pub quantization: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    pub step: usize,
    /// Seconds.
    pub t: f64,
    pub desired: ContactState,
    pub joints: [JointVector; 2],
    pub computed: ContactState,
    pub actual: ContactState,
    pub residual: [f64; 2],
    pub converged: [bool; 2],
}

impl TrajectoryRecord {
    pub fn computed_error(&self) -> [f64; 2] {
        [
            self.computed.c1.distance(&self.desired.c1),
            self.computed.c2.distance(&self.desired.c2),
        ]
    }

    pub fn actual_error(&self) -> [f64; 2] {
        [
            self.actual.c1.distance(&self.desired.c1),
            self.actual.c2.distance(&self.desired.c2),
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub chirality: [Chirality; 2],
    pub records: Vec<TrajectoryRecord>,
}

impl Trajectory {
    pub fn converged(&self) -> bool {
        self.records.iter().all(|r| r.converged[0] && r.converged[1])
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error(transparent)]
    Setup(Error),
    #[error("step {step}: {source}")]
    Step {
        step: usize,
        #[source]
        source: Error,
        partial: Trajectory,
    },
}

/// Object pose before the motion and at step `k`, in the form the
/// two-finger solver expects.
fn object_poses(object0: &Pose2D, motion: &MotionSpec, k: usize) -> Result<(Pose2D, Pose2D)> {
    match (interpolate_motion(motion, k)?, motion.kind) {
        (MotionStep::Translation(d), _) => Ok((*object0, apply_object_motion(*object0, d)?)),
        (MotionStep::Rotation(beta), MotionKind::Rotation { center, .. }) => {
            let start = Pose2D {
                x: center.x,
                y: center.y,
                phi: object0.phi,
            };
            let end = Pose2D {
                phi: wrap_angle(object0.phi + beta),
                ..start
            };
            Ok((start, end))
        }
        (MotionStep::Rotation(_), MotionKind::Translation(_)) => unreachable!(),
    }
}

pub fn run_scenario(scenario: &Scenario) -> std::result::Result<Trajectory, SimError> {
    check_compatible(scenario.strategy, &scenario.motion).map_err(SimError::Setup)?;
    if let Some(q) = scenario.quantization {
        if !(q.is_finite() && q > 0.0) {
            return Err(SimError::Setup(Error::InvalidInput(format!(
                "quantization resolution must be positive, got {q}"
            ))));
        }
    }
    scenario.solver.validate().map_err(SimError::Setup)?;

    let [f1, f2] = &scenario.fingers;
    let mut trajectory = Trajectory {
        chirality: [f1.chirality, f2.chirality],
        records: Vec::with_capacity(scenario.motion.steps + 1),
    };
    for k in 0..=scenario.motion.steps {
        let solved = object_poses(&scenario.object0, &scenario.motion, k).and_then(|(start, end)| {
            solve_bimanual(
                f1,
                f2,
                &scenario.initial,
                &start,
                &end,
                scenario.phi_c,
                &scenario.solver,
            )
        });
        let sol = match solved {
            Ok(sol) => sol,
            Err(source) => {
                return Err(SimError::Step {
                    step: k,
                    source,
                    partial: trajectory,
                })
            }
        };

        let joints = [sol.finger1.joints, sol.finger2.joints];
        let actual_joints = match scenario.quantization {
            Some(q) => joints.map(|j| quantize_joints(&j, q)),
            None => joints,
        };
        let tips = |j: &[JointVector; 2]| ContactState {
            c1: tip_position(f1, &j[0]),
            c2: tip_position(f2, &j[1]),
        };
        trajectory.records.push(TrajectoryRecord {
            step: k,
            t: scenario.motion.time_at(k),
            desired: sol.desired_contacts,
            joints,
            computed: tips(&joints),
            actual: tips(&actual_joints),
            residual: [sol.finger1.residual, sol.finger2.residual],
            converged: [sol.finger1.converged, sol.finger2.converged],
        });
    }
    Ok(trajectory)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignatureCheck {
    pub ok: bool,
    pub violating_step: Option<usize>,
    pub detail: String,
}

/// Flexion of a finger measured in its own mounting frame.
fn own_flexion(chirality: Chirality, joints: &JointVector) -> f64 {
    chirality.flex_sign() * joints.total()
}

/// Checks that the fingers' total-flexion changes, relative to the first
/// record, move together (simultaneous) or against each other
/// (interleaved). Steps where either finger is still count as satisfied.
pub fn verify_strategy_signature(traj: &Trajectory, strategy: Strategy) -> SignatureCheck {
    if traj.records.len() < 2 {
        return SignatureCheck {
            ok: false,
            violating_step: None,
            detail: format!("need at least 2 records, got {}", traj.records.len()),
        };
    }
    let first = &traj.records[0];
    let flex0 = [
        own_flexion(traj.chirality[0], &first.joints[0]),
        own_flexion(traj.chirality[1], &first.joints[1]),
    ];
    for r in &traj.records[1..] {
        let d1 = wrap_angle(own_flexion(traj.chirality[0], &r.joints[0]) - flex0[0]);
        let d2 = wrap_angle(own_flexion(traj.chirality[1], &r.joints[1]) - flex0[1]);
        if d1.abs() <= FLEX_EPS || d2.abs() <= FLEX_EPS {
            continue;
        }
        let same = d1.signum() == d2.signum();
        let ok = match strategy {
            Strategy::Simultaneous => same,
            Strategy::Interleaved => !same,
        };
        if !ok {
            return SignatureCheck {
                ok: false,
                violating_step: Some(r.step),
                detail: format!(
                    "step {}: flexion changes {:.6} and {:.6} rad break the {} signature",
                    r.step,
                    d1,
                    d2,
                    strategy.name()
                ),
            };
        }
    }
    SignatureCheck {
        ok: true,
        violating_step: None,
        detail: format!("{} signature holds", strategy.name()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ChannelStats {
    /// Largest Euclidean error, mm.
    pub max: f64,
    /// Time of the first occurrence of `max`, s.
    pub t_max: f64,
    pub mean: f64,
    pub max_dx: f64,
    pub max_dy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FingerErrors {
    pub computed: ChannelStats,
    pub actual: ChannelStats,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ErrorReport {
    pub fingers: [FingerErrors; 2],
}

fn channel_stats(traj: &Trajectory, pick: impl Fn(&TrajectoryRecord) -> (Point2D, Point2D)) -> ChannelStats {
    let mut stats = ChannelStats::default();
    let mut sum = 0.0;
    for r in &traj.records {
        let (got, want) = pick(r);
        let d = got - want;
        let e = d.norm();
        if e > stats.max {
            stats.max = e;
            stats.t_max = r.t;
        }
        sum += e;
        stats.max_dx = stats.max_dx.max(d.x.abs());
        stats.max_dy = stats.max_dy.max(d.y.abs());
    }
    if let Some(first) = traj.records.first() {
        if stats.max == 0.0 {
            stats.t_max = first.t;
        }
    }
    stats.mean = sum / traj.records.len() as f64;
    stats
}

pub fn error_report(traj: &Trajectory) -> Result<ErrorReport> {
    if traj.records.is_empty() {
        return Err(Error::InvalidInput("error report needs a nonempty trajectory".into()));
    }
    let finger = |i: usize| FingerErrors {
        computed: channel_stats(traj, |r| {
            if i == 0 {
                (r.computed.c1, r.desired.c1)
            } else {
                (r.computed.c2, r.desired.c2)
            }
        }),
        actual: channel_stats(traj, |r| {
            if i == 0 {
                (r.actual.c1, r.desired.c1)
            } else {
                (r.actual.c2, r.desired.c2)
            }
        }),
    };
    Ok(ErrorReport {
        fingers: [finger(0), finger(1)],
    })
}

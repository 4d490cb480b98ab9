//! Desired contact positions from a desired object motion.
//!
//! Every step is computed against the initial grasp, never the previous
//! step, so per-step targets are independent of one another.

use crate::error::{ensure_finite, Error, Result};
use crate::planar::{wrap_angle, ContactState, Displacement2D, Point2D, Pose2D};

/// A planar rotation, stored row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationMatrix2D {
    pub m: [f64; 4],
}

impl RotationMatrix2D {
    pub fn apply(&self, v: Point2D) -> Point2D {
        let [a, b, c, d] = self.m;
        Point2D::new(a * v.x + b * v.y, c * v.x + d * v.y)
    }

    pub fn determinant(&self) -> f64 {
        let [a, b, c, d] = self.m;
        a * d - b * c
    }

    /// `R^T R`, row-major.
    pub fn gram(&self) -> [f64; 4] {
        let [a, b, c, d] = self.m;
        [a * a + c * c, a * b + c * d, b * a + d * c, b * b + d * d]
    }
}

pub fn rotation_matrix(beta: f64) -> RotationMatrix2D {
    let (s, c) = beta.sin_cos();
    RotationMatrix2D { m: [c, -s, s, c] }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MotionKind {
    /// Pure translation; `dphi` is always zero.
    Translation(Displacement2D),
    /// Rotation by `beta` about `center`.
    Rotation { beta: f64, center: Point2D },
}

impl MotionKind {
    pub fn name(&self) -> &'static str {
        match self {
            MotionKind::Translation(_) => "translation",
            MotionKind::Rotation { .. } => "rotation",
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            MotionKind::Translation(d) => d.dx == 0.0 && d.dy == 0.0,
            MotionKind::Rotation { beta, .. } => *beta == 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MotionSpec {
    pub kind: MotionKind,
    /// Seconds.
    pub duration: f64,
    pub steps: usize,
}

impl MotionSpec {
    pub fn new(kind: MotionKind, duration: f64, steps: usize) -> Result<Self> {
        match &kind {
            MotionKind::Translation(d) => {
                ensure_finite("translation", &[d.dx, d.dy, d.dphi])?;
                if d.dphi != 0.0 {
                    return Err(Error::MixedMotion);
                }
            }
            MotionKind::Rotation { beta, center } => {
                ensure_finite("rotation", &[*beta, center.x, center.y])?;
            }
        }
        if !(duration.is_finite() && duration > 0.0) {
            return Err(Error::InvalidInput(format!(
                "duration must be positive, got {duration}"
            )));
        }
        if steps == 0 {
            return Err(Error::InvalidInput("steps must be at least 1".into()));
        }
        Ok(Self { kind, duration, steps })
    }

    pub fn time_at(&self, k: usize) -> f64 {
        self.duration * k as f64 / self.steps as f64
    }
}

/// The portion of a motion reached at one step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MotionStep {
    Translation(Displacement2D),
    Rotation(f64),
}

pub fn apply_object_motion(p0: Pose2D, d: Displacement2D) -> Result<Pose2D> {
    ensure_finite("pose", &[p0.x, p0.y, p0.phi])?;
    ensure_finite("displacement", &[d.dx, d.dy, d.dphi])?;
    Ok(Pose2D {
        x: p0.x + d.dx,
        y: p0.y + d.dy,
        phi: wrap_angle(p0.phi + d.dphi),
    })
}

pub fn contacts_after_translation(initial: &ContactState, d: Displacement2D) -> Result<ContactState> {
    if d.dphi != 0.0 {
        return Err(Error::WrongMotionKind { dphi: d.dphi });
    }
    ensure_finite("displacement", &[d.dx, d.dy])?;
    let offset = Point2D::new(d.dx, d.dy);
    Ok(ContactState {
        c1: initial.c1 + offset,
        c2: initial.c2 + offset,
    })
}

pub fn contacts_after_rotation(initial: &ContactState, center: Point2D, beta: f64) -> ContactState {
    let r = rotation_matrix(beta);
    let turn = |c: Point2D| center + r.apply(c - center);
    ContactState {
        c1: turn(initial.c1),
        c2: turn(initial.c2),
    }
}

/// Fraction `k / steps` of the full motion.
pub fn interpolate_motion(spec: &MotionSpec, k: usize) -> Result<MotionStep> {
    if k > spec.steps {
        return Err(Error::StepOutOfRange { k, steps: spec.steps });
    }
    let n = spec.steps as f64;
    let full = k == spec.steps;
    Ok(match spec.kind {
        MotionKind::Translation(d) => {
            if full {
                MotionStep::Translation(Displacement2D::translation(d.dx, d.dy))
            } else {
                let kf = k as f64;
                MotionStep::Translation(Displacement2D::translation(d.dx / n * kf, d.dy / n * kf))
            }
        }
        MotionKind::Rotation { beta, .. } => {
            if full {
                MotionStep::Rotation(beta)
            } else {
                MotionStep::Rotation(beta / n * k as f64)
            }
        }
    })
}

/// Desired contacts at step `k` of `spec`, always measured from `initial`.
pub fn contacts_at_step(initial: &ContactState, spec: &MotionSpec, k: usize) -> Result<ContactState> {
    match (interpolate_motion(spec, k)?, spec.kind) {
        (MotionStep::Translation(d), _) => contacts_after_translation(initial, d),
        (MotionStep::Rotation(beta), MotionKind::Rotation { center, .. }) => {
            Ok(contacts_after_rotation(initial, center, beta))
        }
        (MotionStep::Rotation(_), MotionKind::Translation(_)) => unreachable!(),
    }
}

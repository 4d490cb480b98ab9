//! Value types for the shared flexion-extension work plane.
//!
//! Lengths are millimetres and angles radians everywhere in this crate;
//! degrees only show up in config files and emitted artifacts.

use std::f64::consts::{PI, TAU};
use std::ops::{Add, Sub};

use crate::error::{ensure_finite, Error, Result};

/// Wraps an angle into `(-PI, PI]`. Angles already in range are returned
/// unchanged, which keeps the operation exactly idempotent.
pub fn normalize_angle(a: f64) -> Result<f64> {
    ensure_finite("angle", &[a])?;
    Ok(wrap_angle(a))
}

pub(crate) fn wrap_angle(a: f64) -> f64 {
    if a > -PI && a <= PI {
        return a;
    }
    let r = a.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2D {
    pub x: f64,
    pub y: f64,
}

impl Point2D {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(&self, other: &Point2D) -> f64 {
        (*self - *other).norm()
    }
}

impl Add for Point2D {
    type Output = Point2D;

    fn add(self, rhs: Point2D) -> Point2D {
        Point2D::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2D {
    type Output = Point2D;

    fn sub(self, rhs: Point2D) -> Point2D {
        Point2D::new(self.x - rhs.x, self.y - rhs.y)
    }
}

/// Planar object pose; `phi` is kept in `(-PI, PI]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Pose2D {
    pub x: f64,
    pub y: f64,
    pub phi: f64,
}

impl Pose2D {
    pub fn new(x: f64, y: f64, phi: f64) -> Result<Self> {
        ensure_finite("pose", &[x, y, phi])?;
        Ok(Self {
            x,
            y,
            phi: wrap_angle(phi),
        })
    }

    pub fn position(&self) -> Point2D {
        Point2D::new(self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Displacement2D {
    pub dx: f64,
    pub dy: f64,
    pub dphi: f64,
}

impl Displacement2D {
    pub fn new(dx: f64, dy: f64, dphi: f64) -> Result<Self> {
        ensure_finite("displacement", &[dx, dy, dphi])?;
        Ok(Self { dx, dy, dphi })
    }

    pub const fn translation(dx: f64, dy: f64) -> Self {
        Self { dx, dy, dphi: 0.0 }
    }
}

/// Sign convention of a finger.
///
/// The two fingers are mounted mirror-symmetric about the palm's y axis.
/// `FingerTwo` flexes counter-clockwise in the palm frame, `FingerOne`
/// clockwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Chirality {
    FingerOne,
    FingerTwo,
}

impl Chirality {
    /// +1 when flexion is counter-clockwise in the palm frame, -1 otherwise.
    pub fn flex_sign(self) -> f64 {
        match self {
            Chirality::FingerOne => -1.0,
            Chirality::FingerTwo => 1.0,
        }
    }

    pub fn mirrored(self) -> Self {
        match self {
            Chirality::FingerOne => Chirality::FingerTwo,
            Chirality::FingerTwo => Chirality::FingerOne,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointRange {
    pub min: f64,
    pub max: f64,
}

impl JointRange {
    pub const fn new(min: f64, max: f64) -> Self {
        Self { min, max }
    }

    pub fn contains(&self, value: f64) -> bool {
        value >= self.min && value <= self.max
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FingerParams {
    /// Position of the base joint in the palm frame.
    pub base: Point2D,
    pub link_lengths: [f64; 3],
    pub chirality: Chirality,
    pub joint_limits: Option<[JointRange; 3]>,
}

impl FingerParams {
    pub fn new(
        base: Point2D,
        link_lengths: [f64; 3],
        chirality: Chirality,
        joint_limits: Option<[JointRange; 3]>,
    ) -> Result<Self> {
        validate_finger(Self {
            base,
            link_lengths,
            chirality,
            joint_limits,
        })
    }

    pub fn total_length(&self) -> f64 {
        self.link_lengths.iter().sum()
    }

    pub fn check_limits(&self, joints: &JointVector) -> Result<()> {
        let Some(limits) = &self.joint_limits else {
            return Ok(());
        };
        for (i, (value, range)) in joints.as_array().into_iter().zip(limits).enumerate() {
            if !range.contains(value) {
                return Err(Error::JointLimit {
                    joint: i + 1,
                    value,
                    min: range.min,
                    max: range.max,
                });
            }
        }
        Ok(())
    }
}

/// Returns `p` unchanged when every invariant holds.
pub fn validate_finger(p: FingerParams) -> Result<FingerParams> {
    if !p.base.is_finite() {
        return Err(Error::InvalidFinger {
            field: "base".into(),
            reason: format!("must be finite, got ({}, {})", p.base.x, p.base.y),
        });
    }
    for (i, &l) in p.link_lengths.iter().enumerate() {
        if !(l.is_finite() && l > 0.0) {
            return Err(Error::InvalidFinger {
                field: format!("link_lengths[{i}]"),
                reason: format!("must be strictly positive, got {l}"),
            });
        }
    }
    if let Some(limits) = &p.joint_limits {
        for (i, r) in limits.iter().enumerate() {
            if !(r.min.is_finite() && r.max.is_finite() && r.min < r.max) {
                return Err(Error::InvalidFinger {
                    field: format!("joint_limits[{i}]"),
                    reason: format!("requires min < max, got [{}, {}]", r.min, r.max),
                });
            }
        }
    }
    Ok(p)
}

/// The three planar flexion joints of one finger, in radians.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct JointVector {
    pub theta1: f64,
    pub theta2: f64,
    pub theta3: f64,
}

impl JointVector {
    pub const fn new(theta1: f64, theta2: f64, theta3: f64) -> Self {
        Self { theta1, theta2, theta3 }
    }

    pub fn from_degrees(d1: f64, d2: f64, d3: f64) -> Self {
        Self::new(d1.to_radians(), d2.to_radians(), d3.to_radians())
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.theta1, self.theta2, self.theta3]
    }

    pub fn to_degrees(&self) -> [f64; 3] {
        self.as_array().map(f64::to_degrees)
    }

    pub fn is_finite(&self) -> bool {
        self.as_array().iter().all(|v| v.is_finite())
    }

    /// Sum of the three joint angles, i.e. the tip orientation before wrapping.
    pub fn total(&self) -> f64 {
        self.theta1 + self.theta2 + self.theta3
    }
}

/// The two contact points `c1`, `c2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactState {
    pub c1: Point2D,
    pub c2: Point2D,
}

impl ContactState {
    pub fn new(c1: Point2D, c2: Point2D) -> Result<Self> {
        ensure_finite("contacts", &[c1.x, c1.y, c2.x, c2.y])?;
        if c1 == c2 {
            return Err(Error::CoincidentContacts { x: c1.x, y: c1.y });
        }
        Ok(Self { c1, c2 })
    }

    pub fn midpoint(&self) -> Point2D {
        Point2D::new((self.c1.x + self.c2.x) / 2.0, (self.c1.y + self.c2.y) / 2.0)
    }

    pub fn separation(&self) -> f64 {
        self.c1.distance(&self.c2)
    }
}

use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Which of the two fingers an error came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FingerSlot {
    First,
    Second,
}

impl fmt::Display for FingerSlot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FingerSlot::First => f.write_str("finger 1"),
            FingerSlot::Second => f.write_str("finger 2"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid finger parameter `{field}`: {reason}")]
    InvalidFinger { field: String, reason: String },

    #[error("contact points must be distinct, both at ({x}, {y})")]
    CoincidentContacts { x: f64, y: f64 },

    #[error("translation path requires dphi = 0, got {dphi} rad; use the rotation path")]
    WrongMotionKind { dphi: f64 },

    #[error("combined translation and rotation in one motion is not supported")]
    MixedMotion,

    #[error("step index {k} outside 0..={steps}")]
    StepOutOfRange { k: usize, steps: usize },

    #[error("contact coincides with the base joint; direction is undefined")]
    DegenerateDirection,

    #[error("target unreachable: reach {reach:.6} mm exceeds total link length {max_reach:.6} mm")]
    Unreachable { reach: f64, max_reach: f64 },

    #[error("target too close: reach {reach:.6} mm below minimum folded reach {min_reach:.6} mm")]
    TooClose { reach: f64, min_reach: f64 },

    #[error("joint {joint} value {value:.6} rad outside limits [{min:.6}, {max:.6}]")]
    JointLimit {
        joint: usize,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("{finger}: {source}")]
    Finger {
        finger: FingerSlot,
        #[source]
        source: Box<Error>,
    },

    #[error("zero-magnitude motion cannot be classified")]
    DegenerateMotion,

    #[error("strategy {strategy} is incompatible with {motion} motion")]
    IncompatibleStrategy {
        strategy: &'static str,
        motion: &'static str,
    },
}

impl Error {
    pub(crate) fn for_finger(self, finger: FingerSlot) -> Self {
        Error::Finger {
            finger,
            source: Box::new(self),
        }
    }
}

pub(crate) fn ensure_finite(name: &str, values: &[f64]) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{name} must be finite, got {values:?}")))
    }
}

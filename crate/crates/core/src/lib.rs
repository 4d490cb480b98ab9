//! Planar kinematics for two-finger in-hand manipulation.
//!
//! Given an initial two-finger grasp and a desired object motion, the crate
//! computes desired contact positions, solves each finger with the
//! equal-split inverse kinematics, simulates the simultaneous and
//! interleaved strategies over time, and reports desired / computed /
//! actual contact errors.
//!
//! Lengths are millimetres and angles radians throughout the library.

pub mod app;
pub mod config;
pub mod error;
pub mod finger;
pub mod fixtures;
pub mod ik;
pub mod motion;
pub mod oracle;
pub mod output;
pub mod planar;
pub mod sim;

pub use error::{Error, FingerSlot, Result};
pub use finger::{
    base_angle, closure_rhs, forward_kinematics, reach_distance, tip_reach_residual, FingerTipState, ReachSpec,
};
pub use ik::{
    equal_split_joints, solve_bimanual, solve_contacts, solve_finger_ik, BimanualSolution, Branch, IKSolution,
    SolverConfig, SolverMode,
};
pub use motion::{
    apply_object_motion, contacts_after_rotation, contacts_after_translation, interpolate_motion, rotation_matrix,
    MotionKind, MotionSpec, MotionStep, RotationMatrix2D,
};
pub use oracle::{brute_force_reach_oracle, grid_resolution_bound, OracleResult};
pub use planar::{
    normalize_angle, validate_finger, Chirality, ContactState, Displacement2D, FingerParams, JointRange, JointVector,
    Point2D, Pose2D,
};
pub use sim::{
    classify_strategy, error_report, quantize_joints, run_scenario, verify_strategy_signature, ErrorReport, Scenario,
    SignatureCheck, SimError, Strategy, Trajectory, TrajectoryRecord,
};

//! Equal-split inverse kinematics for one finger and for the two-finger
//! grasp.
//!
//! Every solution keeps the distal joints equal, `theta2 = theta3 = phi_c / 3`,
//! so the only unknowns are the base joint and the ending-orientation spread
//! `phi_c`. Two solvers are offered:
//!
//! * [`SolverMode::PaperLiteral`] builds the base joint with the closed-form
//!   `alpha +- phi_c / 3` rule and rescales `phi_c` by `+-phi_c / 3` depending
//!   on whether the tip overshoots the target along the base-to-target ray.
//!   It has no natural stopping rule, so it runs for at most `max_iter`
//!   rounds and keeps the best candidate.
//! * [`SolverMode::Bracketed`] aims the folded chain at the target and bisects
//!   on the spread. Reach `|l1 + l2 e^{i phi/3} + l3 e^{i 2phi/3}|` is
//!   strictly decreasing for `|phi| <= 3PI/2`, so bisection always converges.

use std::f64::consts::PI;

use crate::error::{ensure_finite, Error, FingerSlot, Result};
use crate::finger::{base_angle, reach_distance, tip_position};
use crate::motion::{contacts_after_rotation, contacts_after_translation};
use crate::planar::{wrap_angle, Chirality, ContactState, Displacement2D, FingerParams, JointVector, Point2D, Pose2D};

/// Largest spread for which folded reach is monotone.
pub const MAX_SPREAD: f64 = 1.5 * PI;

/// Slack on the reach bounds before a target is declared out of range.
const REACH_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolverMode {
    PaperLiteral,
    Bracketed,
}

impl SolverMode {
    pub fn name(self) -> &'static str {
        match self {
            SolverMode::PaperLiteral => "paper",
            SolverMode::Bracketed => "bracketed",
        }
    }
}

/// Which base-joint form is used, picked by comparing the two base angles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    AlphaLess,
    AlphaGreaterEq,
}

impl Branch {
    /// Ties go to `AlphaLess`.
    pub fn select(alpha1: f64, alpha2: f64) -> Branch {
        if alpha1 <= alpha2 {
            Branch::AlphaLess
        } else {
            Branch::AlphaGreaterEq
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub mode: SolverMode,
    /// Acceptance tolerance on the tip residual, mm.
    pub tol: f64,
    pub max_iter: usize,
    /// Upper end of the bisection bracket on `|phi_c|`, rad.
    pub phi_max: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            mode: SolverMode::Bracketed,
            tol: 1e-6,
            max_iter: 64,
            phi_max: MAX_SPREAD,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::InvalidInput(format!(
                "tolerance must be positive, got {}",
                self.tol
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidInput("max_iter must be at least 1".into()));
        }
        if !(self.phi_max > 0.0 && self.phi_max <= MAX_SPREAD) {
            return Err(Error::InvalidInput(format!(
                "phi_max must lie in (0, {MAX_SPREAD}], got {}",
                self.phi_max
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IKSolution {
    pub joints: JointVector,
    /// Distance between the tip and the target, mm.
    pub residual: f64,
    /// Ending-orientation spread after adjustment; `theta2 = theta3 = phi_c_final / 3`.
    pub phi_c_final: f64,
    pub iterations: usize,
    pub mode: SolverMode,
    pub converged: bool,
    /// Palm repositioning requests issued by the adjustment loop. The wrists
    /// are fixed, so each one is a recorded no-op.
    pub palm_repositions: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BimanualSolution {
    pub finger1: IKSolution,
    pub finger2: IKSolution,
    pub desired_contacts: ContactState,
    pub branch: Branch,
}

impl BimanualSolution {
    pub fn converged(&self) -> bool {
        self.finger1.converged && self.finger2.converged
    }
}

/// Closed-form equal split of `phi_c` with the base joint absorbing `alpha`.
pub fn equal_split_joints(alpha: f64, phi_c: f64, branch: Branch, chirality: Chirality) -> JointVector {
    let third = phi_c / 3.0;
    let theta1 = match (branch, chirality) {
        (Branch::AlphaLess, Chirality::FingerOne) => third + alpha,
        (Branch::AlphaLess, Chirality::FingerTwo) => alpha - third,
        (Branch::AlphaGreaterEq, Chirality::FingerOne) => alpha - third,
        (Branch::AlphaGreaterEq, Chirality::FingerTwo) => third + alpha,
    };
    JointVector::new(theta1, third, third)
}

/// Chain vector of an equal-split finger with its base joint at zero.
fn folded_chain(links: &[f64; 3], spread: f64) -> Point2D {
    let [l1, l2, l3] = *links;
    let third = spread / 3.0;
    let (s1, c1) = third.sin_cos();
    let (s2, c2) = (2.0 * third).sin_cos();
    Point2D::new(l1 + l2 * c1 + l3 * c2, l2 * s1 + l3 * s2)
}

/// Tip distance from the base for an equal-split finger with the given spread.
pub fn folded_reach(links: &[f64; 3], spread: f64) -> f64 {
    folded_chain(links, spread).norm()
}

/// Reach interval `[min, max]` covered by the bracketed solver.
pub fn reach_interval(finger: &FingerParams, phi_max: f64) -> (f64, f64) {
    (folded_reach(&finger.link_lengths, phi_max), finger.total_length())
}

pub fn solve_finger_ik(
    finger: &FingerParams,
    contact: Point2D,
    phi_c_init: f64,
    branch: Branch,
    config: &SolverConfig,
) -> Result<IKSolution> {
    config.validate()?;
    ensure_finite("phi_c", &[phi_c_init])?;
    let alpha = base_angle(contact, finger.base)?;
    let s = reach_distance(contact, finger.base);
    let max_reach = finger.total_length();
    if s > max_reach + REACH_SLACK {
        return Err(Error::Unreachable { reach: s, max_reach });
    }

    let solution = match config.mode {
        SolverMode::Bracketed => bracketed(finger, contact, alpha, s, phi_c_init, config)?,
        SolverMode::PaperLiteral => paper_literal(finger, contact, alpha, s, phi_c_init, branch, config),
    };
    finger.check_limits(&solution.joints)?;
    Ok(solution)
}

fn bracketed(
    finger: &FingerParams,
    contact: Point2D,
    alpha: f64,
    s: f64,
    phi_c_init: f64,
    config: &SolverConfig,
) -> Result<IKSolution> {
    let links = &finger.link_lengths;
    let min_reach = folded_reach(links, config.phi_max);
    if s < min_reach - REACH_SLACK {
        return Err(Error::TooClose { reach: s, min_reach });
    }

    let excess = |m: f64| folded_reach(links, m) - s;
    let mut iterations = 1;
    let magnitude = if excess(0.0) <= 0.0 {
        0.0
    } else if excess(config.phi_max) >= 0.0 {
        config.phi_max
    } else {
        let (mut lo, mut hi) = (0.0, config.phi_max);
        let seed = phi_c_init.abs();
        if seed > lo && seed < hi {
            if excess(seed) > 0.0 {
                lo = seed;
            } else {
                hi = seed;
            }
        }
        iterations = 0;
        while iterations < config.max_iter {
            iterations += 1;
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let f = excess(mid);
            if f > 0.0 {
                lo = mid;
            } else if f < 0.0 {
                hi = mid;
            } else {
                lo = mid;
                hi = mid;
                break;
            }
        }
        0.5 * (lo + hi)
    };

    let spread = finger.chirality.flex_sign() * magnitude;
    let chain = folded_chain(links, spread);
    let theta1 = wrap_angle(alpha - chain.y.atan2(chain.x));
    let joints = JointVector::new(theta1, spread / 3.0, spread / 3.0);
    let residual = tip_position(finger, &joints).distance(&contact);
    Ok(IKSolution {
        joints,
        residual,
        phi_c_final: spread,
        iterations: iterations.max(1),
        mode: SolverMode::Bracketed,
        converged: residual <= config.tol,
        palm_repositions: 0,
    })
}

fn paper_literal(
    finger: &FingerParams,
    contact: Point2D,
    alpha: f64,
    s: f64,
    phi_c_init: f64,
    branch: Branch,
    config: &SolverConfig,
) -> IKSolution {
    let ray = Point2D::new(alpha.cos(), alpha.sin());
    let mut phi = phi_c_init;
    let mut best: Option<(JointVector, f64, f64)> = None;
    let mut iterations = 0;
    let mut repositions = 0;
    let mut converged = false;

    while iterations < config.max_iter {
        iterations += 1;
        let joints = equal_split_joints(alpha, phi, branch, finger.chirality);
        let tip = tip_position(finger, &joints);
        let residual = tip.distance(&contact);
        if best.is_none_or(|(_, r, _)| residual < r) {
            best = Some((joints, residual, phi));
        }
        if residual <= config.tol {
            converged = true;
            break;
        }
        let d = tip - finger.base;
        let along = d.x * ray.x + d.y * ray.y;
        if along > s {
            phi += phi / 3.0;
        } else {
            phi -= phi / 3.0;
        }
        repositions += 1;
    }

    let (joints, residual, phi_c_final) = best.expect("at least one iteration");
    IKSolution {
        joints,
        residual,
        phi_c_final,
        iterations,
        mode: SolverMode::PaperLiteral,
        converged,
        palm_repositions: repositions,
    }
}

/// Desired contacts for a desired object pose: a pure translation when the
/// orientation is unchanged, otherwise a rotation about the initial object
/// position.
pub fn desired_contacts(initial: &ContactState, object0: &Pose2D, desired: &Pose2D) -> Result<ContactState> {
    ensure_finite(
        "object pose",
        &[object0.x, object0.y, object0.phi, desired.x, desired.y, desired.phi],
    )?;
    let beta = wrap_angle(desired.phi - object0.phi);
    if beta == 0.0 {
        let d = Displacement2D::translation(desired.x - object0.x, desired.y - object0.y);
        contacts_after_translation(initial, d)
    } else if desired.x != object0.x || desired.y != object0.y {
        Err(Error::MixedMotion)
    } else {
        Ok(contacts_after_rotation(initial, object0.position(), beta))
    }
}

#[allow(clippy::too_many_arguments)]
pub fn solve_bimanual(
    f1: &FingerParams,
    f2: &FingerParams,
    initial: &ContactState,
    object0: &Pose2D,
    desired: &Pose2D,
    phi_c: [f64; 2],
    config: &SolverConfig,
) -> Result<BimanualSolution> {
    let contacts = desired_contacts(initial, object0, desired)?;
    solve_contacts(f1, f2, &contacts, phi_c, config)
}

/// Solves both fingers for already-known desired contacts.
pub fn solve_contacts(
    f1: &FingerParams,
    f2: &FingerParams,
    contacts: &ContactState,
    phi_c: [f64; 2],
    config: &SolverConfig,
) -> Result<BimanualSolution> {
    let alpha1 = base_angle(contacts.c1, f1.base).map_err(|e| e.for_finger(FingerSlot::First))?;
    let alpha2 = base_angle(contacts.c2, f2.base).map_err(|e| e.for_finger(FingerSlot::Second))?;
    let branch = Branch::select(alpha1, alpha2);
    let finger1 =
        solve_finger_ik(f1, contacts.c1, phi_c[0], branch, config).map_err(|e| e.for_finger(FingerSlot::First))?;
    let finger2 =
        solve_finger_ik(f2, contacts.c2, phi_c[1], branch, config).map_err(|e| e.for_finger(FingerSlot::Second))?;
    Ok(BimanualSolution {
        finger1,
        finger2,
        desired_contacts: *contacts,
        branch,
    })
}

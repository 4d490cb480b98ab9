//! Forward kinematics of a three-link planar finger and the base-to-contact
//! reach geometry.

use crate::error::{ensure_finite, Error, Result};
use crate::planar::{wrap_angle, Chirality, FingerParams, JointVector, Point2D};

/// Base-to-contact reach of one finger for a given target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReachSpec {
    pub s: f64,
    pub alpha: f64,
    pub phi_c: f64,
}

impl ReachSpec {
    pub fn new(contact: Point2D, base: Point2D, phi_c: f64) -> Result<Self> {
        Ok(Self {
            s: reach_distance(contact, base),
            alpha: base_angle(contact, base)?,
            phi_c,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FingerTipState {
    pub position: Point2D,
    /// Orientation of the distal link, in `(-PI, PI]`.
    pub orientation: f64,
}

pub fn reach_distance(contact: Point2D, base: Point2D) -> f64 {
    contact.distance(&base)
}

/// Direction of `contact - base` from the palm's +x axis.
///
/// Uses the two-argument arctangent so targets above 90 degrees or behind
/// the base keep their quadrant.
pub fn base_angle(contact: Point2D, base: Point2D) -> Result<f64> {
    ensure_finite("contact", &[contact.x, contact.y, base.x, base.y])?;
    let d = contact - base;
    if d.x == 0.0 && d.y == 0.0 {
        return Err(Error::DegenerateDirection);
    }
    Ok(d.y.atan2(d.x))
}

/// Tip position without joint-limit checks.
pub(crate) fn tip_position(finger: &FingerParams, joints: &JointVector) -> Point2D {
    let [l1, l2, l3] = finger.link_lengths;
    let a1 = joints.theta1;
    let a2 = a1 + joints.theta2;
    let a3 = a2 + joints.theta3;
    Point2D::new(
        finger.base.x + l1 * a1.cos() + l2 * a2.cos() + l3 * a3.cos(),
        finger.base.y + l1 * a1.sin() + l2 * a2.sin() + l3 * a3.sin(),
    )
}

/// Cumulative-angle planar chain: link `j` points along `theta1 + .. + thetaj`.
pub fn forward_kinematics(finger: &FingerParams, joints: &JointVector) -> Result<FingerTipState> {
    if !joints.is_finite() {
        return Err(Error::InvalidInput(format!("joints must be finite, got {joints:?}")));
    }
    finger.check_limits(joints)?;
    Ok(FingerTipState {
        position: tip_position(finger, joints),
        orientation: wrap_angle(joints.total()),
    })
}

/// The three-link closure sum for the equal-split construction, relative
/// to the base.
///
/// `FingerOne` links point along `alpha + phi/3`, `alpha + 2phi/3`,
/// `alpha + phi`; `FingerTwo` along `alpha - phi/3`, `alpha`, `alpha + phi/3`.
pub fn closure_rhs(finger: &FingerParams, alpha: f64, phi_c: f64) -> Point2D {
    let third = phi_c / 3.0;
    let angles = match finger.chirality {
        Chirality::FingerOne => [alpha + third, alpha + 2.0 * third, alpha + phi_c],
        Chirality::FingerTwo => [alpha - third, alpha, alpha + third],
    };
    finger
        .link_lengths
        .iter()
        .zip(angles)
        .fold(Point2D::default(), |acc, (l, a)| {
            Point2D::new(acc.x + l * a.cos(), acc.y + l * a.sin())
        })
}

pub fn tip_reach_residual(finger: &FingerParams, joints: &JointVector, target: Point2D) -> f64 {
    tip_position(finger, joints).distance(&target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn unit_finger() -> FingerParams {
        FingerParams::new(Point2D::default(), [1.0; 3], Chirality::FingerTwo, None).unwrap()
    }

    #[test]
    fn reach_and_angle_match_published_table() {
        let c1 = Point2D::new(-5.0, 70.0);
        let c2 = Point2D::new(30.0, 75.0);
        let b1 = Point2D::new(-15.0, 0.0);
        let b2 = Point2D::new(15.0, 0.0);

        assert_abs_diff_eq!(reach_distance(c1, b1), 5000f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(reach_distance(c2, b2), 5850f64.sqrt(), epsilon = 1e-12);
        assert!((reach_distance(c1, b1) - 70.7).abs() < 0.05);
        assert!((reach_distance(c2, b2) - 76.5).abs() < 0.05);
        assert_eq!(reach_distance(b1, b1), 0.0);

        let a1 = base_angle(c1, b1).unwrap().to_degrees();
        let a2 = base_angle(c2, b2).unwrap().to_degrees();
        assert!((a1 - 81.9).abs() < 0.05, "{a1}");
        assert!((a2 - 78.7).abs() < 0.05, "{a2}");
        assert_eq!(base_angle(Point2D::new(1.0, 0.0), Point2D::default()).unwrap(), 0.0);
        assert!(matches!(base_angle(b1, b1), Err(Error::DegenerateDirection)));
    }

    #[test]
    fn base_angle_keeps_quadrant() {
        let a = base_angle(Point2D::new(-1.0, -1.0), Point2D::default()).unwrap();
        assert_abs_diff_eq!(a, -3.0 * PI / 4.0, epsilon = 1e-15);
    }

    #[test]
    fn fk_examples() {
        let f = unit_finger();
        let up = forward_kinematics(&f, &JointVector::new(FRAC_PI_2, 0.0, 0.0)).unwrap();
        assert_abs_diff_eq!(up.position.x, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(up.position.y, 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(up.orientation, FRAC_PI_2, epsilon = 1e-15);

        // Links at 0, 90 and 180 degrees: (1, 0) + (0, 1) + (-1, 0).
        let hook = forward_kinematics(&f, &JointVector::new(0.0, FRAC_PI_2, FRAC_PI_2)).unwrap();
        assert_abs_diff_eq!(hook.position.x, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(hook.position.y, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(hook.orientation, PI, epsilon = 1e-15);
    }

    #[test]
    fn fk_matches_direct_closure_sum_for_second_finger() {
        let f = FingerParams::new(Point2D::new(15.0, 0.0), [30.0, 25.0, 20.0], Chirality::FingerTwo, None).unwrap();
        let alpha = 78.7f64.to_radians();
        let phi = 120f64.to_radians();
        let theta1 = alpha - phi / 3.0;
        let tip = forward_kinematics(&f, &JointVector::new(theta1, phi / 3.0, phi / 3.0)).unwrap();

        // Direct evaluation: link angles 38.7, 78.7 and 118.7 degrees.
        let d = |deg: f64| deg.to_radians();
        let x = 15.0 + 30.0 * d(38.7).cos() + 25.0 * d(78.7).cos() + 20.0 * d(118.7).cos();
        let y = 30.0 * d(38.7).sin() + 25.0 * d(78.7).sin() + 20.0 * d(118.7).sin();
        assert_abs_diff_eq!(tip.position.x, x, epsilon = 1e-9);
        assert_abs_diff_eq!(tip.position.y, y, epsilon = 1e-9);
    }

    #[test]
    fn closure_examples() {
        let mut f =
            FingerParams::new(Point2D::new(-15.0, 0.0), [30.0, 25.0, 20.0], Chirality::FingerOne, None).unwrap();
        let alpha = 81.9f64.to_radians();
        let straight = closure_rhs(&f, alpha, 0.0);
        assert_abs_diff_eq!(straight.norm(), 75.0, epsilon = 1e-12);
        assert_abs_diff_eq!(straight.y.atan2(straight.x), alpha, epsilon = 1e-12);

        let phi = 30f64.to_radians();
        let rhs = closure_rhs(&f, alpha, phi);
        let tip = forward_kinematics(&f, &JointVector::new(alpha + phi / 3.0, phi / 3.0, phi / 3.0)).unwrap();
        assert_abs_diff_eq!(rhs.x, tip.position.x - f.base.x, epsilon = 1e-9);
        assert_abs_diff_eq!(rhs.y, tip.position.y - f.base.y, epsilon = 1e-9);

        f.chirality = Chirality::FingerTwo;
        f.link_lengths = [10.0; 3];
        for phi in [0.3, 1.0, 2.5] {
            assert_abs_diff_eq!(closure_rhs(&f, FRAC_PI_2, phi).x, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn residual_examples() {
        let f = unit_finger();
        let j = JointVector::new(FRAC_PI_2, 0.0, 0.0);
        assert_abs_diff_eq!(tip_reach_residual(&f, &j, Point2D::new(0.0, 3.0)), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(tip_reach_residual(&f, &j, Point2D::new(0.0, 4.0)), 1.0, epsilon = 1e-15);
    }

    fn point() -> impl Strategy<Value = Point2D> {
        (-100.0f64..100.0, -100.0f64..100.0).prop_map(|(x, y)| Point2D::new(x, y))
    }

    proptest! {
        #[test]
        fn reach_is_a_metric(a in point(), b in point(), c in point()) {
            prop_assert_eq!(reach_distance(a, b), reach_distance(b, a));
            prop_assert!(reach_distance(a, c) <= reach_distance(a, b) + reach_distance(b, c) + 1e-12);
        }

        #[test]
        fn tip_stays_within_total_length(
            t1 in -PI..PI, t2 in -PI..PI, t3 in -PI..PI,
            l1 in 1.0f64..50.0, l2 in 1.0f64..50.0, l3 in 1.0f64..50.0,
        ) {
            let f = FingerParams::new(Point2D::new(3.0, -2.0), [l1, l2, l3], Chirality::FingerOne, None).unwrap();
            let j = JointVector::new(t1, t2, t3);
            let tip = forward_kinematics(&f, &j).unwrap();
            prop_assert!(tip.position.distance(&f.base) <= l1 + l2 + l3 + 1e-9);
            prop_assert_eq!(tip.orientation, wrap_angle(t1 + t2 + t3));
        }
    }
}

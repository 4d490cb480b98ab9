//! Exhaustive joint-grid search, used as an independent check on the
//! analytical solver.

use std::f64::consts::{PI, TAU};

use crate::planar::{FingerParams, JointVector, Point2D};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleResult {
    pub joints: JointVector,
    pub residual: f64,
}

/// Grid samples for one joint: inclusive over the joint limits when
/// present, otherwise `grid` evenly spaced angles covering the full turn
/// starting at `-PI`.
pub fn joint_grid(finger: &FingerParams, joint: usize, grid: usize) -> Vec<f64> {
    match &finger.joint_limits {
        Some(limits) => {
            let r = limits[joint];
            let step = (r.max - r.min) / (grid - 1) as f64;
            (0..grid).map(|i| r.min + step * i as f64).collect()
        }
        None => {
            let step = TAU / grid as f64;
            (0..grid).map(|i| -PI + step * i as f64).collect()
        }
    }
}

/// Largest spacing between neighbouring samples over the three joints.
pub fn grid_spacing(finger: &FingerParams, grid: usize) -> f64 {
    match &finger.joint_limits {
        Some(limits) => limits
            .iter()
            .map(|r| (r.max - r.min) / (grid - 1) as f64)
            .fold(0.0, f64::max),
        None => TAU / grid as f64,
    }
}

/// Worst-case tip displacement between any configuration inside the grid's
/// ranges and its nearest grid point: each joint is off by at most half a
/// spacing and moves the tip by at most its distal length times that angle.
pub fn grid_resolution_bound(finger: &FingerParams, grid: usize) -> f64 {
    let [l1, l2, l3] = finger.link_lengths;
    let distal = (l1 + l2 + l3) + (l2 + l3) + l3;
    distal * grid_spacing(finger, grid) / 2.0
}

/// Evaluates forward kinematics on every grid point and returns the one
/// closest to `target`. `grid` must be at least 2.
pub fn brute_force_reach_oracle(finger: &FingerParams, target: Point2D, grid: usize) -> OracleResult {
    assert!(grid >= 2, "grid needs at least two samples per joint");
    let [l1, l2, l3] = finger.link_lengths;
    let g1 = joint_grid(finger, 0, grid);
    let g2 = joint_grid(finger, 1, grid);
    let g3 = joint_grid(finger, 2, grid);

    let mut best = OracleResult {
        joints: JointVector::default(),
        residual: f64::INFINITY,
    };
    for &t1 in &g1 {
        let (s1, c1) = t1.sin_cos();
        let x1 = finger.base.x + l1 * c1 - target.x;
        let y1 = finger.base.y + l1 * s1 - target.y;
        for &t2 in &g2 {
            let a2 = t1 + t2;
            let (s2, c2) = a2.sin_cos();
            let x2 = x1 + l2 * c2;
            let y2 = y1 + l2 * s2;
            for &t3 in &g3 {
                let (s3, c3) = (a2 + t3).sin_cos();
                let dx = x2 + l3 * c3;
                let dy = y2 + l3 * s3;
                let r = dx.hypot(dy);
                if r < best.residual {
                    best = OracleResult {
                        joints: JointVector::new(t1, t2, t3),
                        residual: r,
                    };
                }
            }
        }
    }
    best
}

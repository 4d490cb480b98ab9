use std::f64::consts::PI;

use proptest::prelude::*;

use bimanual_core::fixtures;
use bimanual_core::ik::reach_interval;
use bimanual_core::{
    brute_force_reach_oracle, equal_split_joints, forward_kinematics, grid_resolution_bound, normalize_angle,
    solve_finger_ik, Branch, Chirality, FingerParams, Point2D, SolverConfig, SolverMode,
};

fn finger(index: usize, chirality: Chirality) -> FingerParams {
    FingerParams {
        chirality,
        ..fixtures::default_fingers()[index]
    }
}

fn chirality() -> impl Strategy<Value = Chirality> {
    prop_oneof![Just(Chirality::FingerOne), Just(Chirality::FingerTwo)]
}

/// (finger, target) with the target inside the solver's reachable annulus.
fn reachable() -> impl Strategy<Value = (FingerParams, Point2D)> {
    (0usize..2, chirality(), 0.0f64..=1.0, -PI..PI).prop_map(|(i, c, u, a)| {
        let f = finger(i, c);
        let (lo, hi) = reach_interval(&f, SolverConfig::default().phi_max);
        let s = lo + u * (hi - lo);
        (f, f.base + Point2D::new(s * a.cos(), s * a.sin()))
    })
}

fn mirror(p: Point2D) -> Point2D {
    Point2D::new(-p.x, p.y)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ik_round_trips_through_fk((f, target) in reachable(), seed in -4.0f64..4.0) {
        let sol = solve_finger_ik(&f, target, seed, Branch::AlphaLess, &SolverConfig::default()).unwrap();
        let tip = forward_kinematics(&f, &sol.joints).unwrap().position;
        prop_assert!(sol.converged);
        prop_assert!(tip.distance(&target) < 1e-6, "residual {}", tip.distance(&target));
        prop_assert!((tip.distance(&target) - sol.residual).abs() < 1e-12);
    }

    #[test]
    fn solutions_keep_the_equal_split((f, target) in reachable()) {
        let sol = solve_finger_ik(&f, target, 1.0, Branch::AlphaLess, &SolverConfig::default()).unwrap();
        prop_assert_eq!(sol.joints.theta2, sol.joints.theta3);
        prop_assert!((sol.joints.theta2 - sol.phi_c_final / 3.0).abs() < 1e-12);
    }

    #[test]
    fn equal_split_forms_share_the_distal_joints(alpha in -PI..PI, phi in -4.0f64..4.0, c in chirality()) {
        for b in [Branch::AlphaLess, Branch::AlphaGreaterEq] {
            let j = equal_split_joints(alpha, phi, b, c);
            prop_assert_eq!(j.theta2, phi / 3.0);
            prop_assert_eq!(j.theta3, phi / 3.0);
        }
    }

    #[test]
    fn mirrored_problem_mirrors_the_joints((f, target) in reachable()) {
        let cfg = SolverConfig::default();
        let mirrored = FingerParams { base: mirror(f.base), chirality: f.chirality.mirrored(), ..f };
        let a = solve_finger_ik(&f, target, 1.0, Branch::AlphaLess, &cfg).unwrap().joints;
        let b = solve_finger_ik(&mirrored, mirror(target), 1.0, Branch::AlphaLess, &cfg).unwrap().joints;
        let diff = |x: f64, y: f64| normalize_angle(x - y).unwrap().abs();
        prop_assert!(diff(b.theta1, PI - a.theta1) < 1e-9, "{a:?} vs {b:?}");
        prop_assert!(diff(b.theta2, -a.theta2) < 1e-9);
        prop_assert!(diff(b.theta3, -a.theta3) < 1e-9);
    }

    #[test]
    fn paper_literal_terminates((f, target) in reachable(), seed in -3.0f64..3.0, max_iter in 1usize..200) {
        let cfg = SolverConfig { mode: SolverMode::PaperLiteral, max_iter, ..SolverConfig::default() };
        let sol = solve_finger_ik(&f, target, seed, Branch::AlphaLess, &cfg).unwrap();
        prop_assert!(sol.iterations <= max_iter);
        prop_assert!(sol.residual.is_finite());
        prop_assert_eq!(sol.converged, sol.residual <= cfg.tol);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn analytic_solution_is_no_worse_than_the_grid((f, target) in reachable()) {
        let analytic = solve_finger_ik(&f, target, 1.0, Branch::AlphaLess, &SolverConfig::default()).unwrap();
        let oracle = brute_force_reach_oracle(&f, target, 100);
        prop_assert!(analytic.residual <= oracle.residual + grid_resolution_bound(&f, 100));
    }
}

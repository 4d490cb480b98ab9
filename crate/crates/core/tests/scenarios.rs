use std::path::Path;

use bimanual_core::config::parse_config;
use bimanual_core::fixtures::{self, Preset};
use bimanual_core::motion::contacts_at_step;
use bimanual_core::output::{
    read_trajectory_csv, record_values, svg_contact_paths, svg_error_curves, write_trajectory_csv,
};
use bimanual_core::{
    contacts_after_rotation, error_report, run_scenario, verify_strategy_signature, Displacement2D, MotionKind,
    MotionSpec, Point2D, SimError, Strategy,
};

fn fixture_text(p: Preset) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(format!("{}.json", p.name()));
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn fixture_files_match_presets() {
    for p in Preset::ALL {
        let cfg = parse_config(&fixture_text(p)).unwrap();
        assert_eq!(cfg.name, p.name());
        let want = p.scenario();
        let got = &cfg.scenario;
        assert_eq!(got.fingers, want.fingers, "{}", p.name());
        assert_eq!(got.initial, want.initial);
        assert_eq!(got.strategy, want.strategy);
        assert_eq!(got.solver, want.solver);
        assert_eq!(got.motion.steps, want.motion.steps);
        assert_eq!(got.motion.duration, want.motion.duration);
        for i in 0..2 {
            assert!((got.phi_c[i] - want.phi_c[i]).abs() < 1e-15);
        }
        assert!((got.quantization.unwrap() - want.quantization.unwrap()).abs() < 1e-15);
        let (a, b) = (run_scenario(got).unwrap(), run_scenario(&want).unwrap());
        for (x, y) in a.records.iter().zip(&b.records) {
            assert!(x.desired.c1.distance(&y.desired.c1) < 1e-9);
            assert!(x.desired.c2.distance(&y.desired.c2) < 1e-9);
        }
    }
}

#[test]
fn identity_motion_reproduces_the_grasp() {
    let mut sc = Preset::Grasp.scenario();
    sc.quantization = None;
    let traj = run_scenario(&sc).unwrap();
    assert_eq!(traj.records.len(), sc.motion.steps + 1);
    for r in &traj.records {
        assert_eq!(r.desired, sc.initial);
        for e in r.computed_error().into_iter().chain(r.actual_error()) {
            assert!(e < 1e-6, "{e}");
        }
        assert_eq!(r.computed, r.actual);
    }
}

#[test]
fn vertical_scenario_ends_ten_millimetres_up() {
    let traj = run_scenario(&Preset::Vertical.scenario()).unwrap();
    assert_eq!(traj.records.len(), fixtures::SCENARIO_STEPS + 1);
    let last = traj.records.last().unwrap();
    assert_eq!(last.t, fixtures::SCENARIO_DURATION_S);
    assert_eq!(last.desired.c1, Point2D::new(-5.0, 80.0));
    assert_eq!(last.desired.c2, Point2D::new(30.0, 85.0));
}

#[test]
fn rotation_steps_land_on_the_direct_rotation() {
    let sc = Preset::Rotation.scenario();
    let MotionKind::Rotation { beta, center } = sc.motion.kind else {
        panic!("rotation preset");
    };
    let traj = run_scenario(&sc).unwrap();
    for r in &traj.records {
        let frac = r.step as f64 / sc.motion.steps as f64;
        let direct = contacts_after_rotation(&sc.initial, center, beta * frac);
        assert!(r.desired.c1.distance(&direct.c1) < 1e-9);
        assert!(r.desired.c2.distance(&direct.c2) < 1e-9);
        assert!((r.desired.separation() - sc.initial.separation()).abs() < 1e-9);
    }
}

#[test]
fn computed_error_is_the_solver_residual() {
    for p in Preset::ALL {
        let traj = run_scenario(&p.scenario()).unwrap();
        for r in &traj.records {
            let e = r.computed_error();
            for i in 0..2 {
                assert!((e[i] - r.residual[i]).abs() < 1e-12, "{} step {}", p.name(), r.step);
            }
        }
    }
}

#[test]
fn finer_quantization_never_increases_the_actual_error() {
    for p in Preset::MOTIONS {
        let mut prev = [f64::INFINITY; 2];
        for deg in [1.0f64, 0.1, 0.01] {
            let mut sc = p.scenario();
            sc.quantization = Some(deg.to_radians());
            let rep = error_report(&run_scenario(&sc).unwrap()).unwrap();
            for i in 0..2 {
                let m = rep.fingers[i].actual.max;
                assert!(
                    m <= prev[i],
                    "{} finger {} at {deg} deg: {m} > {}",
                    p.name(),
                    i + 1,
                    prev[i]
                );
                prev[i] = m;
            }
        }
    }
}

#[test]
fn runs_are_deterministic() {
    for p in Preset::ALL {
        assert_eq!(
            run_scenario(&p.scenario()).unwrap(),
            run_scenario(&p.scenario()).unwrap()
        );
    }
}

#[test]
fn strategy_signatures_discriminate() {
    let cases = [
        (Preset::Vertical, Strategy::Simultaneous),
        (Preset::Rotation, Strategy::Interleaved),
        (Preset::Translation, Strategy::Interleaved),
    ];
    for (p, expected) in cases {
        let traj = run_scenario(&p.scenario()).unwrap();
        assert!(verify_strategy_signature(&traj, expected).ok, "{}", p.name());
        let other = match expected {
            Strategy::Simultaneous => Strategy::Interleaved,
            Strategy::Interleaved => Strategy::Simultaneous,
        };
        let check = verify_strategy_signature(&traj, other);
        assert!(!check.ok, "{} should break {}", p.name(), other.name());
        assert!(check.violating_step.is_some());
    }
}

#[test]
fn unreachable_step_reports_the_partial_trajectory() {
    let mut sc = Preset::Vertical.scenario();
    sc.motion = MotionSpec::new(
        MotionKind::Translation(Displacement2D::translation(0.0, 80.0)),
        15.0,
        15,
    )
    .unwrap();
    match run_scenario(&sc) {
        Err(SimError::Step { step, partial, .. }) => {
            assert!(step > 0);
            assert_eq!(partial.records.len(), step);
            assert!(contacts_at_step(&sc.initial, &sc.motion, step).is_ok());
        }
        other => panic!("expected a step failure, got {other:?}"),
    }
}

#[test]
fn csv_round_trips_at_nine_significant_digits() {
    for p in Preset::ALL {
        let traj = run_scenario(&p.scenario()).unwrap();
        let mut bytes = Vec::new();
        write_trajectory_csv(&traj, &mut bytes).unwrap();
        let rows = read_trajectory_csv(bytes.as_slice()).unwrap();
        assert_eq!(rows.len(), traj.records.len());
        for (row, r) in rows.iter().zip(&traj.records) {
            for (got, want) in row.iter().zip(record_values(r)) {
                let tol = 1e-8 * want.abs().max(1e-12);
                assert!((got - want).abs() <= tol, "{got} vs {want}");
            }
        }
    }
}

fn paths_per_finger(svg: &str) -> (usize, usize) {
    let doc = roxmltree::Document::parse(svg).expect("well-formed SVG");
    let count = |prefix: &str| {
        doc.descendants()
            .filter(|n| n.has_tag_name("path") && n.attribute("id").is_some_and(|id| id.starts_with(prefix)))
            .count()
    };
    (count("finger1-"), count("finger2-"))
}

#[test]
fn svg_plots_are_well_formed() {
    let traj = run_scenario(&Preset::Rotation.scenario()).unwrap();
    assert_eq!(
        paths_per_finger(&svg_contact_paths(&traj, "paths & <contacts>")),
        (1, 1)
    );
    assert_eq!(paths_per_finger(&svg_error_curves(&traj, "errors")), (1, 1));
}

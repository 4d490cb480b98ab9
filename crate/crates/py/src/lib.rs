//! Python bindings for `bimanual-core`.
//!
//! Points are `(x, y)` tuples in millimetres, joints `(theta1, theta2, theta3)`
//! tuples in radians. Invalid inputs raise `ValueError`; unreachable or
//! non-converging solves raise `bimanual.SolverError`.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use bimanual_core::config::parse_config;
use bimanual_core::fixtures::{self, Preset};
use bimanual_core::ik::desired_contacts;
use bimanual_core::output::{self, CSV_COLUMNS};
use bimanual_core::sim::ChannelStats;
use bimanual_core::{self as core, Branch, Chirality, Error, JointRange, Point2D, Pose2D, SimError, SolverConfig};

create_exception!(bimanual, SolverError, PyException);

type Xy = (f64, f64);
type Joints = (f64, f64, f64);

fn py_err(e: Error) -> PyErr {
    match e {
        Error::DegenerateDirection
        | Error::Unreachable { .. }
        | Error::TooClose { .. }
        | Error::JointLimit { .. }
        | Error::Finger { .. } => SolverError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn point(p: Xy) -> Point2D {
    Point2D::new(p.0, p.1)
}

fn xy(p: Point2D) -> Xy {
    (p.x, p.y)
}

fn joints_tuple(j: &core::JointVector) -> Joints {
    (j.theta1, j.theta2, j.theta3)
}

fn joints(j: Joints) -> core::JointVector {
    core::JointVector::new(j.0, j.1, j.2)
}

fn chirality(name: &str) -> PyResult<Chirality> {
    match name {
        "finger_one" => Ok(Chirality::FingerOne),
        "finger_two" => Ok(Chirality::FingerTwo),
        _ => Err(PyValueError::new_err(format!(
            "chirality must be \"finger_one\" or \"finger_two\", got {name:?}"
        ))),
    }
}

fn chirality_name(c: Chirality) -> &'static str {
    match c {
        Chirality::FingerOne => "finger_one",
        Chirality::FingerTwo => "finger_two",
    }
}

fn branch(name: &str) -> PyResult<Branch> {
    match name {
        "alpha_less" => Ok(Branch::AlphaLess),
        "alpha_greater_eq" => Ok(Branch::AlphaGreaterEq),
        _ => Err(PyValueError::new_err(format!(
            "branch must be \"alpha_less\" or \"alpha_greater_eq\", got {name:?}"
        ))),
    }
}

fn branch_name(b: Branch) -> &'static str {
    match b {
        Branch::AlphaLess => "alpha_less",
        Branch::AlphaGreaterEq => "alpha_greater_eq",
    }
}

fn solver_config(mode: &str, tol: f64, max_iter: usize) -> PyResult<SolverConfig> {
    let mode = match mode {
        "bracketed" => core::SolverMode::Bracketed,
        "paper" => core::SolverMode::PaperLiteral,
        _ => {
            return Err(PyValueError::new_err(format!(
                "mode must be \"bracketed\" or \"paper\", got {mode:?}"
            )))
        }
    };
    let cfg = SolverConfig {
        mode,
        tol,
        max_iter,
        ..SolverConfig::default()
    };
    cfg.validate().map_err(py_err)?;
    Ok(cfg)
}

/// A three-link planar finger mounted at a fixed base.
#[pyclass(name = "Finger", frozen, module = "bimanual")]
struct PyFinger {
    inner: core::FingerParams,
}

#[pymethods]
impl PyFinger {
    #[new]
    #[pyo3(signature = (base, links, chirality="finger_two", joint_limits=None))]
    fn new(base: Xy, links: Joints, chirality: &str, joint_limits: Option<[Xy; 3]>) -> PyResult<Self> {
        let limits = joint_limits.map(|l| l.map(|(lo, hi)| JointRange::new(lo, hi)));
        let inner = core::FingerParams::new(
            point(base),
            [links.0, links.1, links.2],
            self::chirality(chirality)?,
            limits,
        )
        .map_err(py_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn base(&self) -> Xy {
        xy(self.inner.base)
    }

    #[getter]
    fn links(&self) -> Joints {
        let [a, b, c] = self.inner.link_lengths;
        (a, b, c)
    }

    #[getter]
    fn chirality(&self) -> &'static str {
        chirality_name(self.inner.chirality)
    }

    #[getter]
    fn total_length(&self) -> f64 {
        self.inner.total_length()
    }

    fn __repr__(&self) -> String {
        let (x, y) = self.base();
        let (a, b, c) = self.links();
        format!(
            "Finger(base=({x}, {y}), links=({a}, {b}, {c}), chirality={:?})",
            self.chirality()
        )
    }
}

#[pyclass(name = "IKSolution", frozen, module = "bimanual")]
struct PyIKSolution {
    inner: core::IKSolution,
}

#[pymethods]
impl PyIKSolution {
    #[getter]
    fn joints(&self) -> Joints {
        joints_tuple(&self.inner.joints)
    }

    /// Tip-to-target distance, mm.
    #[getter]
    fn residual(&self) -> f64 {
        self.inner.residual
    }

    #[getter]
    fn phi_c_final(&self) -> f64 {
        self.inner.phi_c_final
    }

    #[getter]
    fn iterations(&self) -> usize {
        self.inner.iterations
    }

    #[getter]
    fn mode(&self) -> &'static str {
        self.inner.mode.name()
    }

    #[getter]
    fn converged(&self) -> bool {
        self.inner.converged
    }

    #[getter]
    fn palm_repositions(&self) -> usize {
        self.inner.palm_repositions
    }

    fn __repr__(&self) -> String {
        let (a, b, c) = self.joints();
        format!(
            "IKSolution(joints=({a:.6}, {b:.6}, {c:.6}), residual={:.3e}, converged={})",
            self.inner.residual,
            if self.inner.converged { "True" } else { "False" }
        )
    }
}

/// A simulated scenario: one record per time step.
#[pyclass(name = "Trajectory", frozen, module = "bimanual")]
struct PyTrajectory {
    inner: core::Trajectory,
    strategy: core::Strategy,
}

fn stats_dict<'py>(py: Python<'py>, s: &ChannelStats) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("max", s.max)?;
    d.set_item("t_max", s.t_max)?;
    d.set_item("mean", s.mean)?;
    d.set_item("max_dx", s.max_dx)?;
    d.set_item("max_dy", s.max_dy)?;
    Ok(d)
}

#[pymethods]
impl PyTrajectory {
    #[classattr]
    fn columns() -> Vec<&'static str> {
        CSV_COLUMNS.to_vec()
    }

    fn __len__(&self) -> usize {
        self.inner.records.len()
    }

    #[getter]
    fn converged(&self) -> bool {
        self.inner.converged()
    }

    #[getter]
    fn strategy(&self) -> &'static str {
        self.strategy.name()
    }

    /// Rows of numbers in `Trajectory.columns` order.
    fn rows(&self) -> Vec<Vec<f64>> {
        self.inner
            .records
            .iter()
            .map(|r| output::record_values(r).to_vec())
            .collect()
    }

    /// `{"finger1": {"computed": {...}, "actual": {...}}, "finger2": ...}`.
    fn error_report<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let rep = core::error_report(&self.inner).map_err(py_err)?;
        let out = PyDict::new(py);
        for (i, f) in rep.fingers.iter().enumerate() {
            let d = PyDict::new(py);
            d.set_item("computed", stats_dict(py, &f.computed)?)?;
            d.set_item("actual", stats_dict(py, &f.actual)?)?;
            out.set_item(format!("finger{}", i + 1), d)?;
        }
        Ok(out)
    }

    /// `(ok, detail)` for `"simultaneous"` or `"interleaved"`; defaults to the
    /// scenario's strategy.
    #[pyo3(signature = (strategy=None))]
    fn verify_signature(&self, strategy: Option<&str>) -> PyResult<(bool, String)> {
        let s = match strategy {
            None => self.strategy,
            Some("simultaneous") => core::Strategy::Simultaneous,
            Some("interleaved") => core::Strategy::Interleaved,
            Some(other) => return Err(PyValueError::new_err(format!("unknown strategy {other:?}"))),
        };
        let check = core::verify_strategy_signature(&self.inner, s);
        Ok((check.ok, check.detail))
    }

    fn to_csv(&self) -> PyResult<String> {
        let mut buf = Vec::new();
        output::write_trajectory_csv(&self.inner, &mut buf).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(String::from_utf8(buf).expect("CSV output is UTF-8"))
    }

    #[pyo3(signature = (title="contact paths"))]
    fn svg_paths(&self, title: &str) -> String {
        output::svg_contact_paths(&self.inner, title)
    }

    #[pyo3(signature = (title="contact errors"))]
    fn svg_errors(&self, title: &str) -> String {
        output::svg_error_curves(&self.inner, title)
    }
}

fn simulate(scenario: &core::Scenario) -> PyResult<PyTrajectory> {
    match core::run_scenario(scenario) {
        Ok(inner) => Ok(PyTrajectory {
            inner,
            strategy: scenario.strategy,
        }),
        Err(SimError::Setup(e)) => Err(py_err(e)),
        Err(e @ SimError::Step { .. }) => Err(SolverError::new_err(e.to_string())),
    }
}

/// Wraps an angle into `(-pi, pi]`.
#[pyfunction]
fn normalize_angle(theta: f64) -> PyResult<f64> {
    core::normalize_angle(theta).map_err(py_err)
}

#[pyfunction]
fn reach_distance(contact: Xy, base: Xy) -> f64 {
    core::reach_distance(point(contact), point(base))
}

#[pyfunction]
fn base_angle(contact: Xy, base: Xy) -> PyResult<f64> {
    core::base_angle(point(contact), point(base)).map_err(py_err)
}

/// Returns `((x, y), orientation)` of the fingertip.
#[pyfunction]
fn forward_kinematics(finger: PyRef<'_, PyFinger>, joints: Joints) -> PyResult<(Xy, f64)> {
    let tip = core::forward_kinematics(&finger.inner, &self::joints(joints)).map_err(py_err)?;
    Ok((xy(tip.position), tip.orientation))
}

/// Closure sum of the equal-split chain relative to the base.
#[pyfunction]
fn closure_rhs(finger: PyRef<'_, PyFinger>, alpha: f64, phi_c: f64) -> Xy {
    xy(core::closure_rhs(&finger.inner, alpha, phi_c))
}

#[pyfunction]
#[pyo3(signature = (alpha, phi_c, branch="alpha_less", chirality="finger_two"))]
fn equal_split_joints(alpha: f64, phi_c: f64, branch: &str, chirality: &str) -> PyResult<Joints> {
    let j = core::equal_split_joints(alpha, phi_c, self::branch(branch)?, self::chirality(chirality)?);
    Ok(joints_tuple(&j))
}

#[pyfunction]
#[pyo3(signature = (finger, contact, phi_c_init=1.0, branch="alpha_less", mode="bracketed", tol=1e-6, max_iter=64))]
fn solve_finger_ik(
    finger: PyRef<'_, PyFinger>,
    contact: Xy,
    phi_c_init: f64,
    branch: &str,
    mode: &str,
    tol: f64,
    max_iter: usize,
) -> PyResult<PyIKSolution> {
    let cfg = solver_config(mode, tol, max_iter)?;
    core::solve_finger_ik(&finger.inner, point(contact), phi_c_init, self::branch(branch)?, &cfg)
        .map(|inner| PyIKSolution { inner })
        .map_err(py_err)
}

/// Solves both fingers for a desired object pose `(x, y, phi)`. Returns
/// `(finger1, finger2, desired_contacts, branch)`.
#[pyfunction]
#[pyo3(signature = (finger1, finger2, contacts, object0, desired, phi_c, mode="bracketed", tol=1e-6, max_iter=64))]
#[allow(clippy::too_many_arguments)]
fn solve_bimanual(
    finger1: PyRef<'_, PyFinger>,
    finger2: PyRef<'_, PyFinger>,
    contacts: (Xy, Xy),
    object0: (f64, f64, f64),
    desired: (f64, f64, f64),
    phi_c: (f64, f64),
    mode: &str,
    tol: f64,
    max_iter: usize,
) -> PyResult<(PyIKSolution, PyIKSolution, (Xy, Xy), &'static str)> {
    let cfg = solver_config(mode, tol, max_iter)?;
    let initial = core::ContactState::new(point(contacts.0), point(contacts.1)).map_err(py_err)?;
    let o0 = Pose2D::new(object0.0, object0.1, object0.2).map_err(py_err)?;
    let od = Pose2D::new(desired.0, desired.1, desired.2).map_err(py_err)?;
    let target = desired_contacts(&initial, &o0, &od).map_err(py_err)?;
    let sol =
        core::solve_contacts(&finger1.inner, &finger2.inner, &target, [phi_c.0, phi_c.1], &cfg).map_err(py_err)?;
    Ok((
        PyIKSolution { inner: sol.finger1 },
        PyIKSolution { inner: sol.finger2 },
        (xy(target.c1), xy(target.c2)),
        branch_name(sol.branch),
    ))
}

/// Best grid point `(joints, residual)` over `grid` samples per joint.
#[pyfunction]
#[pyo3(signature = (finger, target, grid=100))]
fn brute_force_oracle(finger: PyRef<'_, PyFinger>, target: Xy, grid: usize) -> PyResult<(Joints, f64)> {
    if grid < 2 {
        return Err(PyValueError::new_err(format!("grid must be at least 2, got {grid}")));
    }
    let r = core::brute_force_reach_oracle(&finger.inner, point(target), grid);
    Ok((joints_tuple(&r.joints), r.residual))
}

#[pyfunction]
fn grid_resolution_bound(finger: PyRef<'_, PyFinger>, grid: usize) -> f64 {
    core::grid_resolution_bound(&finger.inner, grid)
}

/// Runs a scenario from a JSON configuration document.
#[pyfunction]
fn run_config(document: &str) -> PyResult<PyTrajectory> {
    let cfg = parse_config(document).map_err(|e| PyValueError::new_err(e.to_string()))?;
    simulate(&cfg.scenario)
}

/// Runs a bundled scenario by name; see `preset_names()`.
#[pyfunction]
#[pyo3(signature = (name, mode="bracketed", quantization=None))]
fn run_preset(name: &str, mode: &str, quantization: Option<f64>) -> PyResult<PyTrajectory> {
    let preset = Preset::ALL
        .into_iter()
        .find(|p| p.name() == name)
        .ok_or_else(|| PyValueError::new_err(format!("unknown preset {name:?}")))?;
    let mut sc = preset.scenario();
    sc.solver = solver_config(mode, sc.solver.tol, sc.solver.max_iter)?;
    if quantization.is_some() {
        sc.quantization = quantization;
    }
    simulate(&sc)
}

#[pyfunction]
fn preset_names() -> Vec<&'static str> {
    Preset::ALL.iter().map(|p| p.name()).collect()
}

/// Recomputes reach and base angles for a grasp and compares them with the
/// published values. Returns `(passed, report_text)`.
#[pyfunction]
#[pyo3(signature = (contacts=None, bases=None))]
fn validate_fixtures(contacts: Option<(Xy, Xy)>, bases: Option<(Xy, Xy)>) -> PyResult<(bool, String)> {
    let c = match contacts {
        Some((a, b)) => core::ContactState::new(point(a), point(b)).map_err(py_err)?,
        None => fixtures::table1_contacts(),
    };
    let b = bases.map_or([fixtures::TABLE1_BASE1, fixtures::TABLE1_BASE2], |(a, b)| {
        [point(a), point(b)]
    });
    let rep = fixtures::validate_fixtures(&c, b).map_err(py_err)?;
    Ok((rep.passed(), rep.to_string()))
}

#[pymodule]
fn bimanual(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("SolverError", m.py().get_type::<SolverError>())?;
    m.add_class::<PyFinger>()?;
    m.add_class::<PyIKSolution>()?;
    m.add_class::<PyTrajectory>()?;
    m.add_function(wrap_pyfunction!(normalize_angle, m)?)?;
    m.add_function(wrap_pyfunction!(reach_distance, m)?)?;
    m.add_function(wrap_pyfunction!(base_angle, m)?)?;
    m.add_function(wrap_pyfunction!(forward_kinematics, m)?)?;
    m.add_function(wrap_pyfunction!(closure_rhs, m)?)?;
    m.add_function(wrap_pyfunction!(equal_split_joints, m)?)?;
    m.add_function(wrap_pyfunction!(solve_finger_ik, m)?)?;
    m.add_function(wrap_pyfunction!(solve_bimanual, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(grid_resolution_bound, m)?)?;
    m.add_function(wrap_pyfunction!(run_config, m)?)?;
    m.add_function(wrap_pyfunction!(run_preset, m)?)?;
    m.add_function(wrap_pyfunction!(preset_names, m)?)?;
    m.add_function(wrap_pyfunction!(validate_fixtures, m)?)?;
    Ok(())
}

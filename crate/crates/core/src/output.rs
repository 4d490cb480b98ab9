//! Trajectory CSV, SVG plots and the plain-text error report.
//!
//! Every number is printed with nine significant digits and a `.` decimal
//! separator, and nothing time- or host-dependent is written, so identical
//! runs produce identical bytes.

use std::fmt::Write as _;
use std::io;

use crate::config::ScenarioConfig;
use crate::motion::MotionKind;
use crate::planar::{Chirality, Point2D};
use crate::sim::{ErrorReport, SignatureCheck, Trajectory, TrajectoryRecord};

pub const CSV_COLUMNS: [&str; 24] = [
    "step",
    "t_s",
    "c1_des_x",
    "c1_des_y",
    "c2_des_x",
    "c2_des_y",
    "f1_th1_deg",
    "f1_th2_deg",
    "f1_th3_deg",
    "f2_th1_deg",
    "f2_th2_deg",
    "f2_th3_deg",
    "c1_cmp_x",
    "c1_cmp_y",
    "c2_cmp_x",
    "c2_cmp_y",
    "c1_act_x",
    "c1_act_y",
    "c2_act_x",
    "c2_act_y",
    "err1_cmp_mm",
    "err2_cmp_mm",
    "err1_act_mm",
    "err2_act_mm",
];

/// Upper bound on the computed-channel error of the bundled scenarios, mm.
pub const COMPUTED_ERROR_BOUND_MM: f64 = 0.71;

/// Formats `v` with nine significant digits, like C's `%.9g`.
pub fn fmt_sig(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{v:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        format!("{}e{}", trim_zeros(mantissa.to_string()), exp)
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// One CSV row in file units (degrees for joints).
pub fn record_values(r: &TrajectoryRecord) -> [f64; 24] {
    let [j1, j2] = r.joints.map(|j| j.to_degrees());
    let [e1c, e2c] = r.computed_error();
    let [e1a, e2a] = r.actual_error();
    [
        r.step as f64,
        r.t,
        r.desired.c1.x,
        r.desired.c1.y,
        r.desired.c2.x,
        r.desired.c2.y,
        j1[0],
        j1[1],
        j1[2],
        j2[0],
        j2[1],
        j2[2],
        r.computed.c1.x,
        r.computed.c1.y,
        r.computed.c2.x,
        r.computed.c2.y,
        r.actual.c1.x,
        r.actual.c1.y,
        r.actual.c2.x,
        r.actual.c2.y,
        e1c,
        e2c,
        e1a,
        e2a,
    ]
}

pub fn write_trajectory_csv<W: io::Write>(traj: &Trajectory, w: W) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(CSV_COLUMNS)?;
    for r in &traj.records {
        out.write_record(record_values(r).iter().map(|v| fmt_sig(*v)))?;
    }
    out.flush()?;
    Ok(())
}

/// Reads a trajectory CSV back as rows of numbers in file units.
pub fn read_trajectory_csv<R: io::Read>(r: R) -> Result<Vec<[f64; 24]>, String> {
    let mut reader = csv::Reader::from_reader(r);
    let header = reader.headers().map_err(|e| e.to_string())?;
    if header.iter().ne(CSV_COLUMNS.iter().copied()) {
        return Err(format!("unexpected header {header:?}"));
    }
    let mut rows = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| e.to_string())?;
        let mut row = [0.0; 24];
        for (j, field) in rec.iter().enumerate() {
            if j >= 24 {
                return Err(format!("row {i}: too many fields"));
            }
            row[j] = field
                .parse()
                .map_err(|e| format!("row {i} column {}: {e}", CSV_COLUMNS[j]))?;
        }
        if rec.len() != 24 {
            return Err(format!("row {i}: expected 24 fields, got {}", rec.len()));
        }
        rows.push(row);
    }
    Ok(rows)
}

const FINGER_COLORS: [&str; 2] = ["#1f77b4", "#d62728"];
const SIZE: f64 = 480.0;
const MARGIN: f64 = 40.0;

struct Frame {
    min: Point2D,
    scale: Point2D,
}

impl Frame {
    fn fit(points: impl Iterator<Item = Point2D>, equal_aspect: bool) -> Frame {
        let (mut lo, mut hi) = (Point2D::new(f64::MAX, f64::MAX), Point2D::new(f64::MIN, f64::MIN));
        for p in points {
            lo = Point2D::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point2D::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        let span = |a: f64, b: f64| if b - a > 0.0 { b - a } else { 1.0 };
        let inner = SIZE - 2.0 * MARGIN;
        let mut scale = Point2D::new(inner / span(lo.x, hi.x), inner / span(lo.y, hi.y));
        if equal_aspect {
            let s = scale.x.min(scale.y);
            scale = Point2D::new(s, s);
        }
        Frame { min: lo, scale }
    }

    fn map(&self, p: Point2D) -> (f64, f64) {
        (
            MARGIN + (p.x - self.min.x) * self.scale.x,
            SIZE - MARGIN - (p.y - self.min.y) * self.scale.y,
        )
    }
}

fn path_data(frame: &Frame, points: impl Iterator<Item = Point2D>) -> String {
    let mut d = String::new();
    for (i, p) in points.enumerate() {
        let (x, y) = frame.map(p);
        let _ = write!(d, "{}{x:.3} {y:.3}", if i == 0 { "M" } else { " L" });
    }
    d
}

fn svg_open(title: &str) -> String {
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">\n\
         <rect x=\"0\" y=\"0\" width=\"{SIZE}\" height=\"{SIZE}\" fill=\"white\"/>\n\
         <text x=\"{MARGIN}\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">{}</text>\n",
        escape(title)
    )
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn contact(r: &TrajectoryRecord, finger: usize, channel: &str) -> Point2D {
    let c = match channel {
        "desired" => &r.desired,
        "computed" => &r.computed,
        _ => &r.actual,
    };
    if finger == 0 {
        c.c1
    } else {
        c.c2
    }
}

/// Contact paths in the work plane: one path per finger through the
/// computed contacts, desired contacts as circles and actual contacts as
/// squares.
pub fn svg_contact_paths(traj: &Trajectory, title: &str) -> String {
    let all = traj
        .records
        .iter()
        .flat_map(|r| (0..2).flat_map(move |f| ["desired", "computed", "actual"].map(|c| contact(r, f, c))));
    let frame = Frame::fit(all, true);
    let mut svg = svg_open(title);
    for f in 0..2 {
        let color = FINGER_COLORS[f];
        let d = path_data(&frame, traj.records.iter().map(|r| contact(r, f, "computed")));
        let _ = writeln!(
            svg,
            "<path id=\"finger{}-computed\" d=\"{d}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>",
            f + 1
        );
        for r in &traj.records {
            let (x, y) = frame.map(contact(r, f, "desired"));
            let _ = writeln!(
                svg,
                "<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"3\" fill=\"none\" stroke=\"{color}\"/>"
            );
            let (x, y) = frame.map(contact(r, f, "actual"));
            let _ = writeln!(
                svg,
                "<rect x=\"{:.3}\" y=\"{:.3}\" width=\"4\" height=\"4\" fill=\"{color}\" opacity=\"0.5\"/>",
                x - 2.0,
                y - 2.0
            );
        }
    }
    let _ = writeln!(
        svg,
        "<text x=\"{MARGIN}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\">line: computed, circle: desired, square: actual (mm)</text>",
        SIZE - 12.0
    );
    svg.push_str("</svg>\n");
    svg
}

/// Per-step errors over time: one path per finger for the actual channel,
/// computed-channel errors as circles.
pub fn svg_error_curves(traj: &Trajectory, title: &str) -> String {
    let err = |r: &TrajectoryRecord, f: usize, actual: bool| {
        let e = if actual { r.actual_error() } else { r.computed_error() };
        Point2D::new(r.t, e[f])
    };
    let all = traj
        .records
        .iter()
        .flat_map(|r| [err(r, 0, true), err(r, 1, true), err(r, 0, false), err(r, 1, false)])
        .chain(std::iter::once(Point2D::new(0.0, 0.0)));
    let frame = Frame::fit(all, false);
    let mut svg = svg_open(title);
    for f in 0..2 {
        let color = FINGER_COLORS[f];
        let d = path_data(&frame, traj.records.iter().map(|r| err(r, f, true)));
        let _ = writeln!(
            svg,
            "<path id=\"finger{}-actual-error\" d=\"{d}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>",
            f + 1
        );
        for r in &traj.records {
            let (x, y) = frame.map(err(r, f, false));
            let _ = writeln!(svg, "<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"2\" fill=\"{color}\"/>");
        }
    }
    let _ = writeln!(
        svg,
        "<text x=\"{MARGIN}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\">error (mm) vs time (s); line: desired-vs-actual, dots: desired-vs-computed</text>",
        SIZE - 12.0
    );
    svg.push_str("</svg>\n");
    svg
}

fn chirality_name(c: Chirality) -> &'static str {
    match c {
        Chirality::FingerOne => "finger_one",
        Chirality::FingerTwo => "finger_two",
    }
}

/// Plain-text report with the scenario metadata needed to reproduce it.
pub fn render_report(
    cfg: &ScenarioConfig,
    traj: &Trajectory,
    report: Option<&ErrorReport>,
    signature: Option<&SignatureCheck>,
    failure: Option<&str>,
) -> String {
    let sc = &cfg.scenario;
    let mut s = String::new();
    let _ = writeln!(s, "scenario: {}", cfg.name);
    let _ = writeln!(
        s,
        "strategy: {} ({})",
        sc.strategy.name(),
        if cfg.strategy_auto {
            "classified from motion"
        } else {
            "configured"
        }
    );
    let _ = writeln!(
        s,
        "solver: {} mode, tol {} mm, max_iter {}, phi_max {} deg",
        sc.solver.mode.name(),
        fmt_sig(sc.solver.tol),
        sc.solver.max_iter,
        fmt_sig(sc.solver.phi_max.to_degrees())
    );
    match sc.motion.kind {
        MotionKind::Translation(d) => {
            let _ = writeln!(
                s,
                "motion: translation dx {} mm, dy {} mm",
                fmt_sig(d.dx),
                fmt_sig(d.dy)
            );
        }
        MotionKind::Rotation { beta, center } => {
            let _ = writeln!(
                s,
                "motion: rotation {} deg about ({}, {}) mm",
                fmt_sig(beta.to_degrees()),
                fmt_sig(center.x),
                fmt_sig(center.y)
            );
        }
    }
    let _ = writeln!(
        s,
        "timing: {} s in {} steps",
        fmt_sig(sc.motion.duration),
        sc.motion.steps
    );
    let _ = writeln!(
        s,
        "object: initial pose ({}, {}) mm, {} deg; sphere radius {} mm (metadata only)",
        fmt_sig(sc.object0.x),
        fmt_sig(sc.object0.y),
        fmt_sig(sc.object0.phi.to_degrees()),
        fmt_sig(cfg.sphere_radius_mm)
    );
    for (i, f) in sc.fingers.iter().enumerate() {
        let [l1, l2, l3] = f.link_lengths;
        let _ = writeln!(
            s,
            "finger {}: base ({}, {}) mm, links {} / {} / {} mm, {}",
            i + 1,
            fmt_sig(f.base.x),
            fmt_sig(f.base.y),
            fmt_sig(l1),
            fmt_sig(l2),
            fmt_sig(l3),
            chirality_name(f.chirality)
        );
    }
    let _ = writeln!(
        s,
        "ending orientations (initial): {} / {} deg",
        fmt_sig(sc.phi_c[0].to_degrees()),
        fmt_sig(sc.phi_c[1].to_degrees())
    );
    match sc.quantization {
        Some(q) => {
            let _ = writeln!(
                s,
                "actual channel: forward kinematics of joints rounded to {} deg (actuator analog, not an external-simulator reproduction)",
                fmt_sig(q.to_degrees())
            );
        }
        None => {
            let _ = writeln!(s, "actual channel: unquantized (equals computed)");
        }
    }
    let _ = writeln!(
        s,
        "axes: in-plane x and y only; vertical errors are reported under y (no z axis)"
    );
    let _ = writeln!(s);

    if let Some(rep) = report {
        let _ = writeln!(
            s,
            "errors (mm)          max            t_max_s   mean           max_dx         max_dy"
        );
        for (i, f) in rep.fingers.iter().enumerate() {
            for (label, c) in [("computed", &f.computed), ("actual", &f.actual)] {
                let _ = writeln!(
                    s,
                    "finger {} {:<9}  {:<14} {:<9} {:<14} {:<14} {}",
                    i + 1,
                    label,
                    fmt_sig(c.max),
                    fmt_sig(c.t_max),
                    fmt_sig(c.mean),
                    fmt_sig(c.max_dx),
                    fmt_sig(c.max_dy)
                );
            }
        }
        let worst = rep.fingers[0].computed.max.max(rep.fingers[1].computed.max);
        let _ = writeln!(
            s,
            "computed-channel max {} mm vs bound {} mm: {}",
            fmt_sig(worst),
            COMPUTED_ERROR_BOUND_MM,
            if worst < COMPUTED_ERROR_BOUND_MM {
                "within"
            } else {
                "MISS"
            }
        );
    }
    if let Some(sig) = signature {
        let _ = writeln!(
            s,
            "strategy signature: {} ({})",
            if sig.ok { "holds" } else { "VIOLATED" },
            sig.detail
        );
    }
    let unconverged = traj
        .records
        .iter()
        .filter(|r| !(r.converged[0] && r.converged[1]))
        .count();
    let _ = writeln!(
        s,
        "convergence: {} of {} steps converged",
        traj.records.len() - unconverged,
        traj.records.len()
    );
    let status = match failure {
        Some(msg) => format!("FAILED: {msg}"),
        None if unconverged > 0 => "NOT CONVERGED".to_string(),
        None => "OK".to_string(),
    };
    let _ = writeln!(s, "status: {status}");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(-0.0), "0");
        assert_eq!(fmt_sig(5000f64.sqrt()), "70.7106781");
        assert_eq!(fmt_sig(10.0), "10");
        assert_eq!(fmt_sig(-5.0), "-5");
        assert_eq!(fmt_sig(9.9999999999), "10");
        assert_eq!(fmt_sig(1.0e-6), "1e-6");
        assert_eq!(fmt_sig(2.5e-4), "0.00025");
        assert_eq!(fmt_sig(2.1316282072803006e-14), "2.13162821e-14");
        assert_eq!(fmt_sig(123456789012.0), "1.23456789e11");
        assert_eq!(fmt_sig(0.1), "0.1");
    }

    #[test]
    fn column_order_is_fixed() {
        assert_eq!(CSV_COLUMNS.len(), 24);
        assert_eq!(CSV_COLUMNS[6], "f1_th1_deg");
        assert_eq!(CSV_COLUMNS[23], "err2_act_mm");
    }
}

//! Standalone SVG plots: time series and phase portraits with one color
//! per regime.

use std::fs;
use std::path::Path;

use pfode_core::analysis::PortraitPoint;
use pfode_core::{Segment, Trajectory};

use crate::error::CliError;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 560.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 50.0;

/// Classical, fractional, stochastic stroke colors.
const SEGMENT_COLORS: [&str; 3] = ["#1f77b4", "#d62728", "#2ca02c"];

struct Frame {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Frame {
    fn from_points(points: &[(f64, f64)]) -> Result<Frame, CliError> {
        if points.len() < 2 {
            return Err(CliError::Validation(format!(
                "svg needs at least 2 points, got {}",
                points.len()
            )));
        }
        let mut f = Frame {
            x_min: f64::INFINITY,
            x_max: f64::NEG_INFINITY,
            y_min: f64::INFINITY,
            y_max: f64::NEG_INFINITY,
        };
        for (x, y) in points {
            f.x_min = f.x_min.min(*x);
            f.x_max = f.x_max.max(*x);
            f.y_min = f.y_min.min(*y);
            f.y_max = f.y_max.max(*y);
        }
        if f.x_max - f.x_min == 0.0 && f.y_max - f.y_min == 0.0 {
            return Err(CliError::Validation(
                "degenerate range: all points coincide".into(),
            ));
        }
        // Pad flat axes so the projection stays invertible.
        if f.x_max - f.x_min == 0.0 {
            let pad = f.x_min.abs().max(1.0) * 0.05;
            f.x_min -= pad;
            f.x_max += pad;
        }
        if f.y_max - f.y_min == 0.0 {
            let pad = f.y_min.abs().max(1.0) * 0.05;
            f.y_min -= pad;
            f.y_max += pad;
        }
        Ok(f)
    }

    fn sx(&self, x: f64) -> f64 {
        MARGIN_L + (x - self.x_min) / (self.x_max - self.x_min) * (WIDTH - MARGIN_L - MARGIN_R)
    }

    fn sy(&self, y: f64) -> f64 {
        HEIGHT - MARGIN_B
            - (y - self.y_min) / (self.y_max - self.y_min) * (HEIGHT - MARGIN_T - MARGIN_B)
    }
}

fn axis_ticks(lo: f64, hi: f64) -> Vec<f64> {
    (0..=4).map(|i| lo + (hi - lo) * i as f64 / 4.0).collect()
}

fn esc(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Group consecutive same-segment points into polylines; the previous point
/// is repeated at each regime change so the curve stays connected.
fn segment_polylines(
    points: &[(f64, f64)],
    segments: &[Segment],
    frame: &Frame,
) -> String {
    let mut out = String::new();
    let mut start = 0usize;
    while start < points.len() {
        let seg = segments[start];
        let mut end = start;
        while end + 1 < points.len() && segments[end + 1] == seg {
            end += 1;
        }
        let first = if start == 0 { 0 } else { start - 1 };
        let mut coords = String::new();
        for (x, y) in &points[first..=end] {
            coords.push_str(&format!("{:.2},{:.2} ", frame.sx(*x), frame.sy(*y)));
        }
        let color = SEGMENT_COLORS[(seg.index() - 1) as usize];
        out.push_str(&format!(
            "  <polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.2\" points=\"{}\"/>\n",
            coords.trim_end()
        ));
        start = end + 1;
    }
    out
}

fn render(
    points: &[(f64, f64)],
    segments: &[Segment],
    title: &str,
    x_label: &str,
    y_label: &str,
) -> Result<String, CliError> {
    let frame = Frame::from_points(points)?;
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
         width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str("  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "  <text x=\"{}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" \
         text-anchor=\"middle\">{}</text>\n",
        WIDTH / 2.0,
        esc(title)
    ));
    // Axes
    let (x0, y0) = (MARGIN_L, HEIGHT - MARGIN_B);
    svg.push_str(&format!(
        "  <line x1=\"{x0}\" y1=\"{y0}\" x2=\"{}\" y2=\"{y0}\" stroke=\"black\"/>\n",
        WIDTH - MARGIN_R
    ));
    svg.push_str(&format!(
        "  <line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x0}\" y2=\"{MARGIN_T}\" stroke=\"black\"/>\n"
    ));
    for t in axis_ticks(frame.x_min, frame.x_max) {
        let x = frame.sx(t);
        svg.push_str(&format!(
            "  <line x1=\"{x:.2}\" y1=\"{y0}\" x2=\"{x:.2}\" y2=\"{}\" stroke=\"black\"/>\n",
            y0 + 5.0
        ));
        svg.push_str(&format!(
            "  <text x=\"{x:.2}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" \
             text-anchor=\"middle\">{t:.3}</text>\n",
            y0 + 18.0
        ));
    }
    for t in axis_ticks(frame.y_min, frame.y_max) {
        let y = frame.sy(t);
        svg.push_str(&format!(
            "  <line x1=\"{}\" y1=\"{y:.2}\" x2=\"{x0}\" y2=\"{y:.2}\" stroke=\"black\"/>\n",
            x0 - 5.0
        ));
        svg.push_str(&format!(
            "  <text x=\"{}\" y=\"{y:.2}\" font-family=\"sans-serif\" font-size=\"11\" \
             text-anchor=\"end\">{t:.3}</text>\n",
            x0 - 8.0
        ));
    }
    svg.push_str(&format!(
        "  <text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" \
         text-anchor=\"middle\">{}</text>\n",
        (MARGIN_L + WIDTH - MARGIN_R) / 2.0,
        HEIGHT - 12.0,
        esc(x_label)
    ));
    svg.push_str(&format!(
        "  <text x=\"16\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" \
         text-anchor=\"middle\" transform=\"rotate(-90 16 {})\">{}</text>\n",
        (MARGIN_T + HEIGHT - MARGIN_B) / 2.0,
        (MARGIN_T + HEIGHT - MARGIN_B) / 2.0,
        esc(y_label)
    ));
    svg.push_str(&segment_polylines(points, segments, &frame));
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Time-series plot of one state component, colored per regime.
pub fn emit_series_svg(
    traj: &Trajectory,
    component: usize,
    component_name: &str,
    title: &str,
    path: &Path,
) -> Result<(), CliError> {
    if component >= traj.dimension() {
        return Err(CliError::Validation(format!(
            "component {component} out of range for dimension {}",
            traj.dimension()
        )));
    }
    let points: Vec<(f64, f64)> = traj
        .times
        .iter()
        .zip(&traj.states)
        .map(|(t, s)| (*t, s[component]))
        .collect();
    let svg = render(&points, &traj.segment_of, title, "t", component_name)?;
    fs::write(path, svg)?;
    Ok(())
}

/// Phase portrait from projected points, colored per regime.
pub fn emit_portrait_svg(
    points: &[PortraitPoint],
    title: &str,
    x_label: &str,
    y_label: &str,
    path: &Path,
) -> Result<(), CliError> {
    let coords: Vec<(f64, f64)> = points.iter().map(|p| (p.x, p.y)).collect();
    let segments: Vec<Segment> = points.iter().map(|p| p.segment).collect();
    let svg = render(&coords, &segments, title, x_label, y_label)?;
    fs::write(path, svg)?;
    Ok(())
}

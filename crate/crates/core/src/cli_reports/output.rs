//! CSV tables and SVG line charts.

use std::fs;
use std::path::Path;

use crate::dof_bounds::BoundCurvePoint;
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 8] = ["q", "value", "ci_low", "ci_high", "kind", "method_tag", "seed", "samples"];

/// One plotted series; `x` is the horizontal coordinate of each point (Q for
/// most figures, K for the user sweep).
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub name: String,
    pub label: String,
    pub x: Vec<f64>,
    pub points: Vec<BoundCurvePoint>,
}

impl Curve {
    pub fn over_q(name: &str, label: &str, points: Vec<BoundCurvePoint>) -> Self {
        Self {
            name: name.into(),
            label: label.into(),
            x: points.iter().map(|p| p.q as f64).collect(),
            points,
        }
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub fn csv_string(points: &[BoundCurvePoint]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for p in points {
        w.write_record([
            p.q.to_string(),
            p.value.to_string(),
            p.ci_low.to_string(),
            p.ci_high.to_string(),
            p.kind.to_string(),
            p.method_tag.clone(),
            p.seed.to_string(),
            p.samples.to_string(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

pub fn write_csv(path: &Path, points: &[BoundCurvePoint]) -> Result<()> {
    fs::write(path, csv_string(points)?)?;
    Ok(())
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#555555"];
const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN_L: f64 = 60.0;
const MARGIN_R: f64 = 170.0;
const MARGIN_T: f64 = 36.0;
const MARGIN_B: f64 = 50.0;

fn fmt_tick(v: f64) -> String {
    if v.abs() >= 1000.0 || v == v.round() {
        format!("{v:.0}")
    } else {
        format!("{v:.2}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Static chart with one polyline per curve and its confidence band.
pub fn render_svg(title: &str, x_label: &str, y_label: &str, curves: &[Curve]) -> String {
    let xs = curves.iter().flat_map(|c| c.x.iter().copied());
    let ys = curves
        .iter()
        .flat_map(|c| c.points.iter().flat_map(|p| [p.ci_low, p.ci_high, p.value]));
    let (mut x0, mut x1) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    let (mut y0, mut y1) = ys
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !x0.is_finite() {
        (x0, x1) = (0.0, 1.0);
    }
    if !y0.is_finite() {
        (y0, y1) = (0.0, 1.0);
    }
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    let pad = ((y1 - y0) * 0.05).max(0.05);
    y0 -= pad;
    y1 += pad;
    let pw = WIDTH - MARGIN_L - MARGIN_R;
    let ph = HEIGHT - MARGIN_T - MARGIN_B;
    let sx = |x: f64| MARGIN_L + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| MARGIN_T + (y1 - y) / (y1 - y0) * ph;

    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" font-family=\"sans-serif\" font-size=\"12\">\n"
    );
    s += &format!("<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n");
    s += &format!(
        "<text x=\"{:.1}\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
        MARGIN_L + pw / 2.0,
        escape(title)
    );
    s += &format!(
        "<rect x=\"{MARGIN_L}\" y=\"{MARGIN_T}\" width=\"{pw}\" height=\"{ph}\" fill=\"none\" stroke=\"black\"/>\n"
    );
    for i in 0..=5 {
        let fx = x0 + (x1 - x0) * i as f64 / 5.0;
        let fy = y0 + (y1 - y0) * i as f64 / 5.0;
        s += &format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{}</text>\n",
            sx(fx),
            HEIGHT - MARGIN_B + 16.0,
            fmt_tick(fx)
        );
        s += &format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\">{}</text>\n",
            MARGIN_L - 6.0,
            sy(fy) + 4.0,
            fmt_tick(fy)
        );
        s += &format!(
            "<line x1=\"{MARGIN_L}\" x2=\"{:.1}\" y1=\"{:.1}\" y2=\"{:.1}\" stroke=\"#dddddd\"/>\n",
            MARGIN_L + pw,
            sy(fy),
            sy(fy)
        );
    }
    s += &format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{}</text>\n",
        MARGIN_L + pw / 2.0,
        HEIGHT - 12.0,
        escape(x_label)
    );
    s += &format!(
        "<text x=\"16\" y=\"{:.1}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {:.1})\">{}</text>\n",
        MARGIN_T + ph / 2.0,
        MARGIN_T + ph / 2.0,
        escape(y_label)
    );
    for (idx, c) in curves.iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        if c.points.iter().any(|p| p.ci_high > p.ci_low) {
            let upper = c.x.iter().zip(&c.points).map(|(&x, p)| format!("{:.1},{:.1}", sx(x), sy(p.ci_high)));
            let lower = c.x.iter().zip(&c.points).rev().map(|(&x, p)| format!("{:.1},{:.1}", sx(x), sy(p.ci_low)));
            let pts: Vec<String> = upper.chain(lower).collect();
            s += &format!(
                "<polygon points=\"{}\" fill=\"{color}\" fill-opacity=\"0.15\" stroke=\"none\"/>\n",
                pts.join(" ")
            );
        }
        let pts: Vec<String> = c
            .x
            .iter()
            .zip(&c.points)
            .map(|(&x, p)| format!("{:.1},{:.1}", sx(x), sy(p.value)))
            .collect();
        s += &format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"2\"/>\n",
            pts.join(" ")
        );
        let ly = MARGIN_T + 12.0 + 18.0 * idx as f64;
        let lx = WIDTH - MARGIN_R + 12.0;
        s += &format!(
            "<line x1=\"{lx}\" x2=\"{:.1}\" y1=\"{ly:.1}\" y2=\"{ly:.1}\" stroke=\"{color}\" stroke-width=\"2\"/>\n",
            lx + 20.0
        );
        s += &format!(
            "<text x=\"{:.1}\" y=\"{:.1}\">{}</text>\n",
            lx + 26.0,
            ly + 4.0,
            escape(&c.label)
        );
    }
    s += "</svg>\n";
    s
}

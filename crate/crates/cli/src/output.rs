//! CSV series, SVG plots and verdict records.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io;

use serde::Serialize;

/// Column-major numeric table; `None` cells are written empty.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<(&'static str, Vec<Option<f64>>)>,
}

impl Table {
    pub fn push(&mut self, name: &'static str, values: &[f64]) {
        self.columns
            .push((name, values.iter().map(|v| Some(*v)).collect()));
    }

    /// A column with one fewer entry than the grid, aligned to the right
    /// end of each interval.
    pub fn push_intervals(&mut self, name: &'static str, values: &[f64]) {
        let mut col = vec![None];
        col.extend(values.iter().map(|v| Some(*v)));
        self.columns.push((name, col));
    }

    pub fn rows(&self) -> usize {
        self.columns.iter().map(|(_, c)| c.len()).max().unwrap_or(0)
    }

    pub fn column(&self, name: &str) -> Option<&[Option<f64>]> {
        self.columns
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, c)| c.as_slice())
    }
}

/// 17 significant digits, which round-trips every binary64.
pub fn format_cell(v: Option<f64>) -> String {
    v.map_or(String::new(), |v| format!("{v:.16e}"))
}

pub fn write_csv<W: io::Write>(table: &Table, out: W) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(table.columns.iter().map(|(n, _)| *n))?;
    for i in 0..table.rows() {
        w.write_record(
            table
                .columns
                .iter()
                .map(|(_, c)| format_cell(c.get(i).copied().flatten())),
        )?;
    }
    w.flush()?;
    Ok(())
}

/// What to draw: the monotone quantity on top, residuals (log scale) below.
#[derive(Clone, Debug, Default)]
pub struct Plot {
    pub title: String,
    pub x_label: &'static str,
    pub x: Vec<f64>,
    pub quantity: (&'static str, Vec<f64>),
    pub residuals: Vec<(&'static str, Vec<f64>)>,
}

const W: f64 = 640.0;
const PANEL: f64 = 220.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 20.0;
const COLOURS: [&str; 4] = ["#c0392b", "#2471a3", "#1e8449", "#7d3c98"];

fn bounds(vs: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = vs
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
            (a.min(v), b.max(v))
        });
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo <= 1e-12 * (1.0 + lo.abs()) {
        let pad = 0.5 * (1.0 + lo.abs()) * 1e-6;
        (lo - pad, hi + pad)
    } else {
        (lo, hi)
    }
}

fn panel(svg: &mut String, top: f64, x: &[f64], series: &[(&str, Vec<f64>)], y_label: &str) {
    let (x0, x1) = bounds(x.iter().copied());
    let (y0, y1) = bounds(series.iter().flat_map(|(_, v)| v.iter().copied()));
    let px = |v: f64| LEFT + (v - x0) / (x1 - x0) * (W - LEFT - RIGHT);
    let py = |v: f64| top + PANEL - (v - y0) / (y1 - y0) * PANEL;
    let bottom = top + PANEL;
    let _ = writeln!(
        svg,
        r#"<polyline fill="none" stroke="black" points="{LEFT},{top} {LEFT},{bottom} {},{bottom}"/>"#,
        W - RIGHT
    );
    let _ = writeln!(
        svg,
        r#"<text x="4" y="{}" font-size="11">{:.4e}</text><text x="4" y="{}" font-size="11">{:.4e}</text>"#,
        top + 10.0,
        y1,
        bottom,
        y0
    );
    let _ = writeln!(
        svg,
        r#"<text x="{LEFT}" y="{}" font-size="11">{x0:.3e}</text><text x="{}" y="{}" font-size="11" text-anchor="end">{x1:.3e}</text>"#,
        bottom + 14.0,
        W - RIGHT,
        bottom + 14.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">{y_label}</text>"#,
        LEFT + 0.5 * (W - LEFT - RIGHT),
        top - 6.0
    );
    for (i, (name, values)) in series.iter().enumerate() {
        let colour = COLOURS[i % COLOURS.len()];
        let pts: Vec<String> = x
            .iter()
            .zip(values)
            .filter(|(_, v)| v.is_finite())
            .map(|(a, b)| format!("{:.2},{:.2}", px(*a), py(*b)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{}"/>"#,
            pts.join(" ")
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-size="11" fill="{colour}" text-anchor="end">{name}</text>"#,
            W - RIGHT - 4.0,
            top + 14.0 * (i + 1) as f64
        );
    }
}

pub fn render_svg(plot: &Plot) -> String {
    let height = 2.0 * PANEL + 110.0;
    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{height}\" font-family=\"sans-serif\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n\
         <text x=\"{}\" y=\"18\" font-size=\"14\" text-anchor=\"middle\">{}</text>\n",
        W / 2.0,
        escape(&plot.title)
    );
    let (name, values) = &plot.quantity;
    panel(&mut svg, 40.0, &plot.x, &[(*name, values.clone())], name);
    // residuals on a log10 scale, zeros clamped to 1e-17
    let logs: Vec<(&str, Vec<f64>)> = plot
        .residuals
        .iter()
        .map(|(n, v)| (*n, v.iter().map(|r| r.abs().max(1e-17).log10()).collect()))
        .collect();
    if !logs.is_empty() {
        panel(&mut svg, PANEL + 80.0, &plot.x, &logs, "log10 residual");
    }
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">{}</text>"#,
        W / 2.0,
        height - 8.0,
        plot.x_label
    );
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// One tested invariant; `pass` is `worst <= tolerance`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub worst: f64,
    pub tolerance: f64,
    /// Grid value (or sample index) where `worst` occurs.
    pub worst_at: Option<f64>,
}

impl Check {
    pub fn new(name: &'static str, worst: f64, tolerance: f64, worst_at: Option<f64>) -> Self {
        Check {
            name,
            pass: worst <= tolerance,
            worst,
            tolerance,
            worst_at,
        }
    }

    /// Largest `residuals[i]` against `tolerance`.
    pub fn residual(name: &'static str, x: &[f64], residuals: &[f64], tolerance: f64) -> Self {
        let mut worst = (0.0, None);
        for (i, r) in residuals.iter().enumerate() {
            if r.is_nan() || *r > worst.0 {
                worst = (*r, x.get(i).copied());
                if r.is_nan() {
                    break;
                }
            }
        }
        Check::new(name, worst.0, tolerance, worst.1)
    }

    /// Largest step against the wanted direction, within `slack`.
    pub fn monotone(
        name: &'static str,
        x: &[f64],
        values: &[f64],
        increasing: bool,
        slack: f64,
    ) -> Self {
        let steps: Vec<f64> = values
            .windows(2)
            .map(|w| if increasing { w[0] - w[1] } else { w[1] - w[0] })
            .collect();
        Check::residual(name, &x[1.min(x.len())..], &steps, slack)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerdictRecord {
    pub experiment: String,
    pub pass: bool,
    pub checks: Vec<Check>,
    pub worst_residual: f64,
    /// Largest certified quadrature error bound; `None` for fixed-order
    /// rules without an a posteriori bound.
    pub quadrature_bound: Option<f64>,
    pub wall_time_s: f64,
    pub summary: BTreeMap<&'static str, f64>,
}

impl VerdictRecord {
    pub fn new(experiment: String, checks: Vec<Check>) -> Self {
        VerdictRecord {
            experiment,
            pass: checks.iter().all(|c| c.pass),
            worst_residual: checks.iter().map(|c| c.worst).fold(0.0, f64::max),
            checks,
            quadrature_bound: None,
            wall_time_s: 0.0,
            summary: BTreeMap::new(),
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

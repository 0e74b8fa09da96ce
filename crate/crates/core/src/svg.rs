//! Minimal SVG 1.1 line charts.
//!
//! Output is a pure function of the inputs: coordinates are printed with a
//! fixed number of decimals and nothing time- or environment-dependent is
//! emitted.

use std::fmt::Write as _;

const PALETTE: [&str; 6] = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"];

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
    /// `stroke-dasharray` value; `None` draws a solid line.
    pub dash: Option<String>,
}

impl Series {
    pub fn new(name: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Self {
            name: name.into(),
            points,
            dash: None,
        }
    }

    pub fn dashed(mut self, pattern: impl Into<String>) -> Self {
        self.dash = Some(pattern.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinePlot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub width: f64,
    pub height: f64,
    pub series: Vec<Series>,
}

struct Frame {
    left: f64,
    right: f64,
    top: f64,
    bottom: f64,
    x_range: (f64, f64),
    y_range: (f64, f64),
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        let (lo, hi) = self.x_range;
        self.left + (x - lo) / (hi - lo) * (self.right - self.left)
    }

    fn py(&self, y: f64) -> f64 {
        let (lo, hi) = self.y_range;
        self.bottom - (y - lo) / (hi - lo) * (self.bottom - self.top)
    }
}

impl LinePlot {
    pub fn new(title: impl Into<String>) -> Self {
        Self {
            title: title.into(),
            x_label: "x".into(),
            y_label: "y".into(),
            width: 1120.0,
            height: 640.0,
            series: Vec::new(),
        }
    }

    pub fn labels(mut self, x: impl Into<String>, y: impl Into<String>) -> Self {
        self.x_label = x.into();
        self.y_label = y.into();
        self
    }

    pub fn with_series(mut self, series: Series) -> Self {
        self.series.push(series);
        self
    }

    fn data_range(&self, pick: impl Fn(&(f64, f64)) -> f64) -> (f64, f64) {
        let (lo, hi) = self
            .series
            .iter()
            .flat_map(|s| s.points.iter())
            .map(pick)
            .filter(|v| v.is_finite())
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                (lo.min(v), hi.max(v))
            });
        if !lo.is_finite() {
            return (0.0, 1.0);
        }
        if hi - lo < 1e-12 {
            return (lo - 0.5, hi + 0.5);
        }
        let pad = 0.05 * (hi - lo);
        (lo - pad, hi + pad)
    }

    pub fn render(&self) -> String {
        let frame = Frame {
            left: 80.0,
            right: self.width - 30.0,
            top: 50.0,
            bottom: self.height - 60.0,
            x_range: self.data_range(|p| p.0),
            y_range: self.data_range(|p| p.1),
        };
        let mut out = String::new();
        let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
            w = self.width,
            h = self.height
        );
        let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="30" text-anchor="middle" font-family="sans-serif" font-size="20">{}</text>"#,
            self.width / 2.0,
            escape(&self.title)
        );

        self.render_axes(&mut out, &frame);

        let _ = writeln!(out, r#"<g fill="none" stroke-width="2">"#);
        for (i, s) in self.series.iter().enumerate() {
            let mut pts = String::with_capacity(s.points.len() * 16);
            for (j, &(x, y)) in s.points.iter().enumerate() {
                if j > 0 {
                    pts.push(' ');
                }
                let _ = write!(pts, "{:.3},{:.3}", frame.px(x), frame.py(y));
            }
            let dash = s
                .dash
                .as_ref()
                .map(|d| format!(r#" stroke-dasharray="{d}""#))
                .unwrap_or_default();
            let _ = writeln!(
                out,
                r#"<polyline data-series="{}" stroke="{}"{} points="{}"/>"#,
                escape(&s.name),
                PALETTE[i % PALETTE.len()],
                dash,
                pts
            );
        }
        let _ = writeln!(out, "</g>");

        self.render_legend(&mut out, &frame);
        out.push_str("</svg>\n");
        out
    }

    fn render_axes(&self, out: &mut String, frame: &Frame) {
        let _ = writeln!(
            out,
            r##"<g stroke="#dddddd" stroke-width="1">"##
        );
        let xt = ticks(frame.x_range);
        let yt = ticks(frame.y_range);
        for &t in &xt {
            let x = frame.px(t);
            let _ = writeln!(
                out,
                r#"<line x1="{x:.3}" y1="{:.3}" x2="{x:.3}" y2="{:.3}"/>"#,
                frame.top, frame.bottom
            );
        }
        for &t in &yt {
            let y = frame.py(t);
            let _ = writeln!(
                out,
                r#"<line x1="{:.3}" y1="{y:.3}" x2="{:.3}" y2="{y:.3}"/>"#,
                frame.left, frame.right
            );
        }
        let _ = writeln!(out, "</g>");
        let _ = writeln!(
            out,
            r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="none" stroke="black"/>"#,
            frame.left,
            frame.top,
            frame.right - frame.left,
            frame.bottom - frame.top
        );
        let _ = writeln!(out, r#"<g font-family="sans-serif" font-size="12">"#);
        for &t in &xt {
            let _ = writeln!(
                out,
                r#"<text x="{:.3}" y="{:.3}" text-anchor="middle">{}</text>"#,
                frame.px(t),
                frame.bottom + 18.0,
                tick_label(t)
            );
        }
        for &t in &yt {
            let _ = writeln!(
                out,
                r#"<text x="{:.3}" y="{:.3}" text-anchor="end">{}</text>"#,
                frame.left - 8.0,
                frame.py(t) + 4.0,
                tick_label(t)
            );
        }
        let _ = writeln!(out, "</g>");
        let _ = writeln!(
            out,
            r#"<text x="{:.3}" y="{:.3}" text-anchor="middle" font-family="sans-serif" font-size="14">{}</text>"#,
            (frame.left + frame.right) / 2.0,
            self.height - 20.0,
            escape(&self.x_label)
        );
        let cy = (frame.top + frame.bottom) / 2.0;
        let _ = writeln!(
            out,
            r#"<text x="25" y="{cy:.3}" text-anchor="middle" font-family="sans-serif" font-size="14" transform="rotate(-90 25 {cy:.3})">{}</text>"#,
            escape(&self.y_label)
        );
    }

    fn render_legend(&self, out: &mut String, frame: &Frame) {
        let x0 = frame.left + 15.0;
        let y0 = frame.top + 15.0;
        let height = 22.0 * self.series.len() as f64 + 10.0;
        let _ = writeln!(
            out,
            r##"<g class="legend" font-family="sans-serif" font-size="13"><rect x="{x0:.3}" y="{y0:.3}" width="260" height="{height:.3}" fill="white" fill-opacity="0.85" stroke="#999999"/>"##
        );
        for (i, s) in self.series.iter().enumerate() {
            let y = y0 + 18.0 + 22.0 * i as f64;
            let dash = s
                .dash
                .as_ref()
                .map(|d| format!(r#" stroke-dasharray="{d}""#))
                .unwrap_or_default();
            let _ = writeln!(
                out,
                r#"<line x1="{:.3}" y1="{y:.3}" x2="{:.3}" y2="{y:.3}" stroke="{}" stroke-width="2"{dash}/><text x="{:.3}" y="{:.3}">{}</text>"#,
                x0 + 10.0,
                x0 + 50.0,
                PALETTE[i % PALETTE.len()],
                x0 + 60.0,
                y + 4.0,
                escape(&s.name)
            );
        }
        let _ = writeln!(out, "</g>");
    }
}

/// Tick positions at 1, 2 or 5 times a power of ten.
fn ticks((lo, hi): (f64, f64)) -> Vec<f64> {
    let raw = (hi - lo) / 8.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .into_iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|i| i as f64 * step).collect()
}

fn tick_label(v: f64) -> String {
    let s = format!("{:.2}", v);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

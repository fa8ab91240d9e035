//! Log-scale SVG charts for the dynamic-range table and the error
//! distributions. Output is plain SVG 1.1 with one `<g class="series">` per
//! plotted format.

use std::fmt::Write as _;

use crate::bench::{CdfSeries, RangeTable};
use crate::exact::{ExtendedReal, RelError};

const W: f64 = 640.0;
const H: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 50.0;

const COLORS: [&str; 11] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22",
    "#17becf", "#000000",
];

struct Axes {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    /// Horizontal offset of the panel.
    dx: f64,
}

impl Axes {
    fn px(&self, x: f64) -> f64 {
        self.dx + LEFT + (x - self.x0) / (self.x1 - self.x0) * (W - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        H - BOTTOM - (y - self.y0) / (self.y1 - self.y0) * (H - TOP - BOTTOM)
    }

    fn frame(&self, out: &mut String, title: &str, xlabel: &str, ylabel: &str) {
        let (l, r) = (self.dx + LEFT, self.dx + W - RIGHT);
        let (t, b) = (TOP, H - BOTTOM);
        let _ = writeln!(
            out,
            r#"<rect x="{l:.1}" y="{t:.1}" width="{:.1}" height="{:.1}" fill="none" stroke="black"/>"#,
            r - l,
            b - t
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="14">{}</text>"#,
            (l + r) / 2.0,
            t - 10.0,
            escape(title)
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="12">{}</text>"#,
            (l + r) / 2.0,
            H - 10.0,
            escape(xlabel)
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="12" transform="rotate(-90 {:.1} {:.1})">{}</text>"#,
            self.dx + 15.0,
            (t + b) / 2.0,
            self.dx + 15.0,
            (t + b) / 2.0,
            escape(ylabel)
        );
    }

    fn y_ticks(&self, out: &mut String, step: f64) {
        let mut y = (self.y0 / step).ceil() * step;
        while y <= self.y1 + 1e-9 {
            let py = self.py(y);
            let _ = writeln!(
                out,
                r##"<line x1="{:.1}" y1="{py:.1}" x2="{:.1}" y2="{py:.1}" stroke="#dddddd"/>"##,
                self.dx + LEFT,
                self.dx + W - RIGHT
            );
            let _ = writeln!(
                out,
                r#"<text x="{:.1}" y="{:.1}" text-anchor="end" font-size="10">1e{}</text>"#,
                self.dx + LEFT - 4.0,
                py + 3.0,
                y as i64
            );
            y += step;
        }
    }

    fn x_ticks(&self, out: &mut String, ticks: &[(f64, String)]) {
        for (x, label) in ticks {
            let _ = writeln!(
                out,
                r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="10">{}</text>"#,
                self.px(*x),
                H - BOTTOM + 14.0,
                escape(label)
            );
        }
    }
}

fn log10(v: &ExtendedReal) -> f64 {
    v.to_f64().abs().log10()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn polyline(out: &mut String, points: &[(f64, f64)], color: &str) {
    let pts: Vec<String> = points.iter().map(|(x, y)| format!("{x:.1},{y:.1}")).collect();
    let _ = writeln!(
        out,
        r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
        pts.join(" ")
    );
}

fn legend(out: &mut String, dx: f64, row: usize, label: &str, color: &str) {
    let y = TOP + 12.0 + 16.0 * row as f64;
    let x = dx + W - RIGHT + 10.0;
    let _ = writeln!(
        out,
        r#"<line x1="{x:.1}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="{color}" stroke-width="2"/><text x="{:.1}" y="{:.1}" font-size="11">{}</text>"#,
        x + 18.0,
        x + 22.0,
        y + 4.0,
        escape(label)
    );
}

fn open(out: &mut String, width: f64) {
    let _ = writeln!(
        out,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.0}" height="{H:.0}" viewBox="0 0 {width:.0} {H:.0}">
<rect width="100%" height="100%" fill="white"/>"#
    );
}

/// Magnitude ranges against bit length: curves for takum, posit and the
/// IEEE layouts, single points for the fixed-width formats.
pub fn range_chart(table: &RangeTable) -> String {
    let xs: Vec<f64> = table.rows.iter().map(|r| r.n as f64).collect();
    let x0 = xs.iter().cloned().fold(f64::INFINITY, f64::min).min(8.0);
    let x1 = xs.iter().cloned().fold(0.0, f64::max).max(16.0);
    let mut lo = -80.0f64;
    let mut hi = 80.0f64;
    for r in &table.rows {
        if let Some(i) = &r.ieee {
            lo = lo.min(log10(&i.subnormal_min));
            hi = hi.max(log10(&i.max));
        }
    }
    let ax = Axes {
        x0,
        x1,
        y0: (lo / 50.0).floor() * 50.0,
        y1: (hi / 50.0).ceil() * 50.0,
        dx: 0.0,
    };
    let mut out = String::new();
    open(&mut out, W);
    ax.frame(&mut out, "Dynamic range", "bit string length n", "magnitude");
    ax.y_ticks(&mut out, 50.0);
    let ticks: Vec<(f64, String)> = table.rows.iter().map(|r| (r.n as f64, r.n.to_string())).collect();
    ax.x_ticks(&mut out, &ticks);

    let mut row = 0;
    let mut curve = |out: &mut String, name: &str, pts: Vec<(u32, &ExtendedReal, &ExtendedReal)>, color: &str| {
        let _ = writeln!(out, r#"<g class="series" data-format="{name}">"#);
        let lower: Vec<_> = pts.iter().map(|(n, a, _)| (ax.px(*n as f64), ax.py(log10(a)))).collect();
        let upper: Vec<_> = pts.iter().map(|(n, _, b)| (ax.px(*n as f64), ax.py(log10(b)))).collect();
        polyline(out, &lower, color);
        polyline(out, &upper, color);
        legend(out, 0.0, row, name, color);
        row += 1;
        out.push_str("</g>\n");
    };
    curve(
        &mut out,
        "takum",
        table.rows.iter().map(|r| (r.n, &r.takum.0, &r.takum.1)).collect(),
        COLORS[0],
    );
    curve(
        &mut out,
        "posit",
        table.rows.iter().map(|r| (r.n, &r.posit.0, &r.posit.1)).collect(),
        COLORS[1],
    );
    let ieee: Vec<_> = table.rows.iter().filter_map(|r| r.ieee.as_ref().map(|i| (r.n, i))).collect();
    curve(
        &mut out,
        "ieee-normal",
        ieee.iter().map(|(n, i)| (*n, &i.normal_min, &i.max)).collect(),
        COLORS[2],
    );
    curve(
        &mut out,
        "ieee-subnormal",
        ieee.iter().map(|(n, i)| (*n, &i.subnormal_min, &i.max)).collect(),
        COLORS[3],
    );
    for (k, p) in table.points.iter().enumerate() {
        let color = COLORS[4 + k];
        let x = ax.px(p.format.width() as f64);
        let _ = writeln!(out, r#"<g class="series" data-format="{}">"#, p.format);
        for v in [&p.range.normal_min, &p.range.max, &p.figure_normal_min, &p.figure_max] {
            let _ = writeln!(
                out,
                r#"<circle cx="{x:.1}" cy="{:.1}" r="3" fill="{color}"/>"#,
                ax.py(log10(v))
            );
        }
        legend(&mut out, 0.0, 4 + k, &p.format.to_string(), color);
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    out
}

const CDF_FLOOR: f64 = -12.0;
const CDF_CEIL: f64 = 2.0;

/// Error distributions, one panel per entry of `panels` holding the
/// series of that width. Zero errors sit on the bottom edge and infinite
/// errors in a band above the plot labelled "inf".
pub fn cdf_chart(panels: &[(u32, Vec<&CdfSeries>)]) -> String {
    let total = W * panels.len().max(1) as f64;
    let mut out = String::new();
    open(&mut out, total);
    for (p, (width, series)) in panels.iter().enumerate() {
        let ax = Axes {
            x0: 0.0,
            x1: 1.0,
            y0: CDF_FLOOR,
            y1: CDF_CEIL + 1.0,
            dx: W * p as f64,
        };
        ax.frame(&mut out, &format!("{width}-bit formats"), "fraction of matrices", "relative 2-norm error");
        ax.y_ticks(&mut out, 2.0);
        let band = ax.py(CDF_CEIL + 0.5);
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end" font-size="10">inf</text>"#,
            ax.dx + LEFT - 4.0,
            band + 3.0
        );
        ax.x_ticks(&mut out, &[(0.0, "0".into()), (0.5, "0.5".into()), (1.0, "1".into())]);
        for (k, s) in series.iter().enumerate() {
            let color = COLORS[k % COLORS.len()];
            let y = |e: &RelError| -> f64 {
                if e.is_infinite() {
                    CDF_CEIL + 0.5
                } else if e.is_zero() {
                    CDF_FLOOR
                } else {
                    e.to_f64().log10().clamp(CDF_FLOOR, CDF_CEIL)
                }
            };
            // step function starting at the origin
            let mut pts = vec![(ax.px(0.0), ax.py(s.points.first().map_or(CDF_FLOOR, |(_, e)| y(e))))];
            let mut prev = 0.0;
            for (frac, e) in &s.points {
                let py = ax.py(y(e));
                pts.push((ax.px(prev), py));
                pts.push((ax.px(*frac), py));
                prev = *frac;
            }
            let _ = writeln!(out, r#"<g class="series" data-format="{}">"#, s.format);
            polyline(&mut out, &pts, color);
            legend(&mut out, ax.dx, k, &s.format.to_string(), color);
            out.push_str("</g>\n");
        }
    }
    out.push_str("</svg>\n");
    out
}

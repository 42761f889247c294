use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{ContourLevel, FieldKind, GridSpec, ScalarField};

/// `x,y,value` per node; invalid nodes are written as `nan`.
pub fn field_to_csv(f: &ScalarField) -> String {
    let mut out = String::from("x,y,value\n");
    for (i, v) in f.values.iter().enumerate() {
        let z = f.spec.node(i);
        let _ = writeln!(out, "{},{},{:e}", z.re, z.im, v);
    }
    out
}

/// `level,curve,closed,x,y` with one row per contour vertex.
pub fn contours_to_csv(contours: &[ContourLevel]) -> String {
    let mut out = String::from("level,curve,closed,x,y\n");
    for c in contours {
        for (id, p) in c.polylines.iter().enumerate() {
            for &(x, y) in &p.points {
                let _ = writeln!(out, "{:e},{id},{},{x},{y}", c.level, p.closed);
            }
        }
    }
    out
}

/// Grid and level metadata written next to a field.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldMetadata {
    pub kind: FieldKind,
    pub k: u32,
    pub grid: GridSpec,
    pub levels: Vec<f64>,
    pub invalid_nodes: usize,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub precision: String,
}

impl FieldMetadata {
    pub fn new(f: &ScalarField, levels: &[f64], precision: impl Into<String>) -> Self {
        Self {
            kind: f.kind,
            k: f.k,
            grid: f.spec,
            levels: levels.to_vec(),
            invalid_nodes: f.invalid.len(),
            min: f.min().map(|m| m.1),
            max: f.max(),
            precision: precision.into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SvgOptions {
    pub width: f64,
    pub title: String,
    /// Drawn as dots, e.g. computed roots.
    pub markers: Vec<Complex64>,
}

impl Default for SvgOptions {
    fn default() -> Self {
        Self {
            width: 600.0,
            title: String::new(),
            markers: Vec::new(),
        }
    }
}

/// Blue to red across the levels.
fn color(i: usize, count: usize) -> String {
    let t = if count > 1 { i as f64 / (count - 1) as f64 } else { 0.0 };
    let r = (40.0 + 200.0 * t) as u8;
    let b = (220.0 - 180.0 * t) as u8;
    format!("#{r:02x}40{b:02x}")
}

/// One `<g>` layer per level, a legend with `log10` of each level, and the
/// markers on top.
pub fn render_svg(f: &ScalarField, contours: &[ContourLevel], opts: &SvgOptions) -> String {
    let g = &f.spec;
    let w = opts.width;
    let plot_h = w * (g.im_max - g.im_min) / (g.re_max - g.re_min);
    let legend_w = 110.0;
    let top = if opts.title.is_empty() { 10.0 } else { 30.0 };
    let total_w = w + legend_w + 20.0;
    let total_h = plot_h + top + 10.0;
    let sx = |x: f64| 10.0 + (x - g.re_min) / (g.re_max - g.re_min) * w;
    let sy = |y: f64| top + (g.im_max - y) / (g.im_max - g.im_min) * plot_h;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{total_w:.0}" height="{total_h:.0}" viewBox="0 0 {total_w:.1} {total_h:.1}">"#
    );
    let _ = writeln!(out, r#"<rect x="0" y="0" width="{total_w:.1}" height="{total_h:.1}" fill="white"/>"#);
    if !opts.title.is_empty() {
        let _ = writeln!(
            out,
            r#"<text x="10" y="20" font-family="sans-serif" font-size="14">{}</text>"#,
            escape(&opts.title)
        );
    }
    let _ = writeln!(
        out,
        r##"<rect x="10" y="{top:.1}" width="{w:.1}" height="{plot_h:.1}" fill="none" stroke="#999"/>"##
    );
    // axes through the origin when visible
    if g.re_min < 0.0 && g.re_max > 0.0 {
        let _ = writeln!(
            out,
            r##"<line x1="{x:.2}" y1="{top:.1}" x2="{x:.2}" y2="{:.1}" stroke="#ddd"/>"##,
            top + plot_h,
            x = sx(0.0)
        );
    }
    if g.im_min < 0.0 && g.im_max > 0.0 {
        let _ = writeln!(
            out,
            r##"<line x1="10" y1="{y:.2}" x2="{:.1}" y2="{y:.2}" stroke="#ddd"/>"##,
            10.0 + w,
            y = sy(0.0)
        );
    }
    for (i, c) in contours.iter().enumerate() {
        let stroke = color(i, contours.len());
        let _ = writeln!(out, r#"<g class="level" data-level="{:e}" stroke="{stroke}" fill="none" stroke-width="1">"#, c.level);
        for p in &c.polylines {
            let mut d = String::new();
            for (j, &(x, y)) in p.points.iter().enumerate() {
                let _ = write!(d, "{}{:.2},{:.2} ", if j == 0 { 'M' } else { 'L' }, sx(x), sy(y));
            }
            if p.closed {
                d.push('Z');
            }
            let _ = writeln!(out, r#"<path d="{}"/>"#, d.trim_end());
        }
        out.push_str("</g>\n");
        let ly = top + 14.0 + 16.0 * i as f64;
        let lx = w + 25.0;
        let _ = writeln!(
            out,
            r#"<line x1="{lx:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="{stroke}" stroke-width="2"/><text x="{:.1}" y="{ly:.1}" font-family="sans-serif" font-size="11">1e{:.2}</text>"#,
            ly - 4.0,
            lx + 18.0,
            ly - 4.0,
            lx + 22.0,
            c.level.log10()
        );
    }
    for z in &opts.markers {
        if z.re >= g.re_min && z.re <= g.re_max && z.im >= g.im_min && z.im <= g.im_max {
            let _ = writeln!(out, r#"<circle cx="{:.2}" cy="{:.2}" r="1.5" fill="black"/>"#, sx(z.re), sy(z.im));
        }
    }
    out.push_str("</svg>\n");
    out
}

pub(crate) fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

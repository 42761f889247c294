//! Small SVG plots for the command line: root scatter and majorant curves.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::fields::escape;

/// Roots as dots on equal axes, with a dashed circle.
pub fn roots_svg(roots: &[Complex64], circle: Option<(Complex64, f64)>, title: &str) -> String {
    let mut lo = Complex64::new(-1.0, -1.0);
    let mut hi = Complex64::new(1.0, 1.0);
    let mut extend = |z: Complex64, r: f64| {
        lo.re = lo.re.min(z.re - r);
        lo.im = lo.im.min(z.im - r);
        hi.re = hi.re.max(z.re + r);
        hi.im = hi.im.max(z.im + r);
    };
    for &z in roots {
        extend(z, 0.0);
    }
    if let Some((c, r)) = circle {
        extend(c, r);
    }
    let pad = 0.05 * (hi.re - lo.re).max(hi.im - lo.im);
    let (x0, x1, y0, y1) = (lo.re - pad, hi.re + pad, lo.im - pad, hi.im + pad);
    let w = 600.0;
    let scale = w / (x1 - x0);
    let h = (y1 - y0) * scale;
    let top = 30.0;
    let sx = |x: f64| 10.0 + (x - x0) * scale;
    let sy = |y: f64| top + (y1 - y) * scale;
    let dot = if roots.len() > 1024 { 0.8 } else { 2.0 };

    let mut out = String::new();
    let (tw, th) = (w + 20.0, h + top + 10.0);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{tw:.0}" height="{th:.0}" viewBox="0 0 {tw:.1} {th:.1}">"#
    );
    let _ = writeln!(out, r#"<rect x="0" y="0" width="{tw:.1}" height="{th:.1}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="10" y="20" font-family="sans-serif" font-size="14">{}</text>"#,
        escape(title)
    );
    let _ = writeln!(
        out,
        r##"<line x1="{:.2}" y1="{top:.1}" x2="{:.2}" y2="{:.1}" stroke="#ddd"/>"##,
        sx(0.0),
        sx(0.0),
        top + h
    );
    let _ = writeln!(
        out,
        r##"<line x1="10" y1="{:.2}" x2="{:.1}" y2="{:.2}" stroke="#ddd"/>"##,
        sy(0.0),
        10.0 + w,
        sy(0.0)
    );
    if let Some((c, r)) = circle {
        let _ = writeln!(
            out,
            r##"<circle class="bound" cx="{:.2}" cy="{:.2}" r="{:.2}" fill="none" stroke="#c33" stroke-dasharray="4 3"/>"##,
            sx(c.re),
            sy(c.im),
            r * scale
        );
    }
    let _ = writeln!(out, r##"<g class="roots" fill="#124">"##);
    for z in roots {
        let _ = writeln!(out, r#"<circle cx="{:.2}" cy="{:.2}" r="{dot}"/>"#, sx(z.re), sy(z.im));
    }
    out.push_str("</g>\n</svg>\n");
    out
}

/// Curves `(x, y)` with a logarithmic `y` axis, one polyline per series.
pub fn log_curves_svg(series: &[(String, Vec<(f64, f64)>)], title: &str) -> String {
    let pts = series.iter().flat_map(|s| s.1.iter()).filter(|p| p.1 > 0.0);
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y.log10());
        y1 = y1.max(y.log10());
    }
    if !(x1 > x0) {
        x1 = x0 + 1.0;
    }
    if !(y1 > y0) {
        y1 = y0 + 1.0;
    }
    let (w, h, left, top) = (600.0, 400.0, 60.0, 30.0);
    let sx = |x: f64| left + (x - x0) / (x1 - x0) * w;
    let sy = |y: f64| top + (y1 - y.log10()) / (y1 - y0) * h;

    let mut out = String::new();
    let (tw, th) = (left + w + 110.0, top + h + 40.0);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{tw:.0}" height="{th:.0}" viewBox="0 0 {tw:.1} {th:.1}">"#
    );
    let _ = writeln!(out, r#"<rect x="0" y="0" width="{tw:.1}" height="{th:.1}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="10" y="20" font-family="sans-serif" font-size="14">{}</text>"#,
        escape(title)
    );
    let _ = writeln!(
        out,
        r##"<rect x="{left}" y="{top}" width="{w}" height="{h}" fill="none" stroke="#999"/>"##
    );
    for d in (y0.ceil() as i64)..=(y1.floor() as i64) {
        let y = sy(10f64.powi(d as i32));
        let _ = writeln!(
            out,
            r##"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="10" text-anchor="end">1e{d}</text>"##,
            left - 4.0,
            y + 3.0
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{left}" y="{:.1}" font-family="sans-serif" font-size="10">{x0:.3}</text>"#,
        top + h + 14.0
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="10" text-anchor="end">{x1:.3}</text>"#,
        left + w,
        top + h + 14.0
    );
    for (i, (name, points)) in series.iter().enumerate() {
        let t = if series.len() > 1 { i as f64 / (series.len() - 1) as f64 } else { 0.0 };
        let stroke = format!("#{:02x}40{:02x}", (40.0 + 200.0 * t) as u8, (220.0 - 180.0 * t) as u8);
        let mut d = String::new();
        for &(x, y) in points.iter().filter(|p| p.1 > 0.0) {
            let _ = write!(d, "{}{:.2},{:.2} ", if d.is_empty() { 'M' } else { 'L' }, sx(x), sy(y));
        }
        let _ = writeln!(
            out,
            r#"<path class="series" data-name="{}" d="{}" fill="none" stroke="{stroke}"/>"#,
            escape(name),
            d.trim_end()
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11" fill="{stroke}">{}</text>"#,
            left + w + 10.0,
            top + 14.0 * (i + 1) as f64,
            escape(name)
        );
    }
    out.push_str("</svg>\n");
    out
}

//! Minimal SVG line plots: every non-x column of a table against the first column.

use std::fmt::Write;

use crate::table::Table;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 460.0;
const MARGIN: (f64, f64, f64, f64) = (70.0, 190.0, 40.0, 50.0); // left, right, top, bottom

const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn nice_ticks(lo: f64, hi: f64) -> Vec<f64> {
    let span = (hi - lo).max(1e-300);
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * mag).find(|s| span / s <= 6.0).unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|i| i as f64 * step).collect()
}

pub fn render_svg(table: &Table, title: &str, y_label: &str) -> String {
    let (ml, mr, mt, mb) = MARGIN;
    let (pw, ph) = (WIDTH - ml - mr, HEIGHT - mt - mb);
    let xs: Vec<f64> = table.rows.iter().map(|r| r[0]).collect();
    let finite = table.rows.iter().flat_map(|r| r[1..].iter().copied()).filter(|v| v.is_finite());
    let (mut y0, mut y1) = finite.fold((f64::MAX, f64::MIN), |(a, b), v| (a.min(v), b.max(v)));
    if y0 > y1 {
        (y0, y1) = (0.0, 1.0);
    }
    if y1 - y0 < 1e-12 {
        y0 -= 0.5;
        y1 += 0.5;
    }
    let pad = 0.05 * (y1 - y0);
    let (y0, y1) = (y0 - pad, y1 + pad);
    let (x0, x1) = (xs.first().copied().unwrap_or(0.0), xs.last().copied().unwrap_or(1.0));
    let sx = |x: f64| ml + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| mt + (y1 - y) / (y1 - y0) * ph;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(svg, r#"<text x="{}" y="22" font-size="14" text-anchor="middle">{}</text>"#, ml + pw / 2.0, escape(title));
    let _ = writeln!(svg, r##"<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="#333"/>"##);
    for t in nice_ticks(x0, x1) {
        let x = sx(t);
        let _ = writeln!(svg, r##"<line x1="{x:.2}" y1="{}" x2="{x:.2}" y2="{}" stroke="#333"/>"##, mt + ph, mt + ph + 4.0);
        let _ = writeln!(svg, r#"<text x="{x:.2}" y="{}" text-anchor="middle">{t}</text>"#, mt + ph + 16.0);
    }
    for t in nice_ticks(y0, y1) {
        let y = sy(t);
        let _ = writeln!(svg, r##"<line x1="{}" y1="{y:.2}" x2="{ml}" y2="{y:.2}" stroke="#333"/>"##, ml - 4.0);
        let _ = writeln!(svg, r#"<text x="{}" y="{:.2}" text-anchor="end">{}</text>"#, ml - 6.0, y + 4.0, format_tick(t));
    }
    let x_label = table.columns.first().map(String::as_str).unwrap_or("x");
    let _ = writeln!(svg, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, ml + pw / 2.0, HEIGHT - 12.0, escape(x_label));
    let _ = writeln!(
        svg,
        r#"<text transform="translate(18 {}) rotate(-90)" text-anchor="middle">{}</text>"#,
        mt + ph / 2.0,
        escape(y_label)
    );
    for (c, name) in table.columns.iter().enumerate().skip(1) {
        let color = PALETTE[(c - 1) % PALETTE.len()];
        let dash = if (c - 1) / PALETTE.len() % 2 == 1 { r#" stroke-dasharray="5 3""# } else { "" };
        let mut path = String::new();
        let mut pen_up = true;
        for r in &table.rows {
            if !r[c].is_finite() {
                pen_up = true;
                continue;
            }
            let _ = write!(path, "{}{:.2},{:.2} ", if pen_up { "M" } else { "L" }, sx(r[0]), sy(r[c]));
            pen_up = false;
        }
        let _ = writeln!(svg, r#"<path d="{path}" fill="none" stroke="{color}" stroke-width="1.4"{dash}/>"#);
        let ly = mt + 10.0 + (c - 1) as f64 * 13.0;
        if ly < HEIGHT - 10.0 {
            let lx = ml + pw + 12.0;
            let _ = writeln!(svg, r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"{dash}/>"#, lx + 18.0);
            let _ = writeln!(svg, r#"<text x="{}" y="{}">{}</text>"#, lx + 22.0, ly + 4.0, escape(name));
        }
    }
    svg.push_str("</svg>\n");
    svg
}

fn format_tick(t: f64) -> String {
    let s = format!("{t:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".to_string() } else { s.to_string() }
}

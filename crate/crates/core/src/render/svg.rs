//! Row-normalized confusion-matrix heatmaps as a standalone SVG document.

use std::fmt::Write as _;

use crate::confusion::ConfusionMatrix;

const CELL: usize = 56;
const LEFT: usize = 96;
const TOP: usize = 64;
const GAP: usize = 32;
const PER_ROW: usize = 3;

pub struct Heatmap<'a> {
    pub title: &'a str,
    pub matrix: &'a ConfusionMatrix,
}

impl<'a> Heatmap<'a> {
    pub fn new(title: &'a str, matrix: &'a ConfusionMatrix) -> Self {
        Self { title, matrix }
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(ch),
        }
    }
    out
}

/// White at 0, dark blue at 1.
fn shade(p: f64) -> String {
    let p = p.clamp(0.0, 1.0);
    let lerp = |from: f64, to: f64| (from + (to - from) * p).round() as u8;
    format!(
        "#{:02x}{:02x}{:02x}",
        lerp(255.0, 8.0),
        lerp(255.0, 48.0),
        lerp(255.0, 107.0)
    )
}

fn panel_size(k: usize) -> (usize, usize) {
    (LEFT + k * CELL + GAP, TOP + k * CELL + GAP + 24)
}

fn write_panel(out: &mut String, map: &Heatmap<'_>, x0: usize, y0: usize) {
    let classes = map.matrix.schema().classes();
    let k = classes.len();
    let props = map.matrix.row_normalized();
    let _ = writeln!(out, r#"  <g transform="translate({x0},{y0})">"#);
    let _ = writeln!(
        out,
        r#"    <text x="{}" y="16" text-anchor="middle" font-weight="bold">{}</text>"#,
        LEFT + k * CELL / 2,
        escape(map.title)
    );
    for (p, class) in classes.iter().enumerate() {
        let _ = writeln!(
            out,
            r#"    <text x="{}" y="{}" text-anchor="middle" font-size="11">{}</text>"#,
            LEFT + p * CELL + CELL / 2,
            TOP - 8,
            escape(class)
        );
    }
    for (g, class) in classes.iter().enumerate() {
        let y = TOP + g * CELL;
        let _ = writeln!(
            out,
            r#"    <text x="{}" y="{}" text-anchor="end" font-size="11">{}</text>"#,
            LEFT - 6,
            y + CELL / 2 + 4,
            escape(class)
        );
        for (p, &v) in props[g].iter().enumerate() {
            let x = LEFT + p * CELL;
            let ink = if v > 0.5 { "#ffffff" } else { "#000000" };
            let _ = writeln!(
                out,
                r##"    <rect x="{x}" y="{y}" width="{CELL}" height="{CELL}" fill="{}" stroke="#999999"/>"##,
                shade(v)
            );
            let _ = writeln!(
                out,
                r#"    <text x="{}" y="{}" text-anchor="middle" font-size="12" fill="{ink}">{v:.2}</text>"#,
                x + CELL / 2,
                y + CELL / 2 + 4
            );
        }
    }
    let _ = writeln!(
        out,
        r#"    <text x="{}" y="{}" text-anchor="middle" font-size="11" font-style="italic">predicted</text>"#,
        LEFT + k * CELL / 2,
        TOP + k * CELL + 18
    );
    let _ = writeln!(
        out,
        r#"    <text x="12" y="{}" font-size="11" font-style="italic" transform="rotate(-90 12 {})" text-anchor="middle">gold</text>"#,
        TOP + k * CELL / 2,
        TOP + k * CELL / 2
    );
    out.push_str("  </g>\n");
}

/// Lays the heatmaps out in a grid, three per row.
pub fn heatmap_document(maps: &[Heatmap<'_>]) -> String {
    let k = maps.iter().map(|m| m.matrix.num_classes()).max().unwrap_or(0);
    let (pw, ph) = panel_size(k);
    let cols = maps.len().clamp(1, PER_ROW);
    let rows = maps.len().div_ceil(PER_ROW).max(1);
    let (width, height) = (cols * pw, rows * ph);

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif">"#
    );
    let _ = writeln!(out, r##"  <rect width="{width}" height="{height}" fill="#ffffff"/>"##);
    for (i, map) in maps.iter().enumerate() {
        write_panel(&mut out, map, (i % PER_ROW) * pw, (i / PER_ROW) * ph);
    }
    out.push_str("</svg>\n");
    out
}

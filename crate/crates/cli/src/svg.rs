//! Minimal static SVG: polylines in a fixed viewBox, optional axes.

use std::fmt::Write;

pub struct Series {
    pub points: Vec<(f64, f64)>,
    pub color: &'static str,
}

/// Viewport `(x, y, width, height)` in user units.
pub type ViewBox = (f64, f64, f64, f64);

pub fn render(view: ViewBox, series: &[Series], axes: bool) -> String {
    let (x, y, w, h) = view;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{x} {y} {w} {h}" width="800" height="800" preserveAspectRatio="xMidYMid meet">"#
    );
    if axes {
        let _ = writeln!(out, r#"<line x1="{x}" y1="{}" x2="{}" y2="{}" stroke="gray" vector-effect="non-scaling-stroke"/>"#, y + h, x + w, y + h);
        let _ = writeln!(out, r#"<line x1="{x}" y1="{y}" x2="{x}" y2="{}" stroke="gray" vector-effect="non-scaling-stroke"/>"#, y + h);
    }
    for s in series {
        let mut pts = String::with_capacity(s.points.len() * 12);
        for (i, (px, py)) in s.points.iter().enumerate() {
            if i > 0 {
                pts.push(' ');
            }
            let _ = write!(pts, "{px},{py}");
        }
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{}" stroke-width="1" vector-effect="non-scaling-stroke" points="{pts}"/>"#,
            s.color
        );
    }
    out.push_str("</svg>\n");
    out
}

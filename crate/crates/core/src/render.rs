//! SVG drawing of a wiring diagram.

use std::fmt::Write as _;

use crate::arrangement::WiringDiagram;
use crate::error::{Error, Result};

pub const SVG_MAX_WIRES: usize = 200;

const DX: usize = 16;
const DY: usize = 16;
const MARGIN: usize = 24;

fn track_y(t: usize) -> usize {
    MARGIN + (t - 1) * DY
}

/// Pseudolines as polylines, one dot per crossing, and a star in the
/// north-cell. Integer coordinates keep the output byte-stable.
pub fn render_svg(d: &WiringDiagram) -> Result<String> {
    let n = d.n();
    if n > SVG_MAX_WIRES {
        return Err(Error::Cutoff {
            what: "render_svg",
            max: SVG_MAX_WIRES,
            n,
        });
    }
    let slots = d.swaps().len();
    let width = 2 * MARGIN + (slots + 1) * DX;
    let height = 2 * MARGIN + (n - 1) * DY;

    // points[l]: polyline of pseudoline l through its track changes.
    let mut points: Vec<Vec<(usize, usize)>> = (1..=n).map(|t| vec![(MARGIN, track_y(t))]).collect();
    let mut line_at: Vec<usize> = (0..=n).collect();
    let mut crossings = String::new();
    for (s, &g) in d.swaps().iter().enumerate() {
        let g = g as usize;
        let (x0, x1) = (MARGIN + s * DX + DX / 2, MARGIN + (s + 1) * DX + DX / 2);
        let (a, b) = (line_at[g], line_at[g + 1]);
        points[a - 1].extend([(x0, track_y(g)), (x1, track_y(g + 1))]);
        points[b - 1].extend([(x0, track_y(g + 1)), (x1, track_y(g))]);
        line_at.swap(g, g + 1);
        let (cx, cy) = ((x0 + x1) / 2, track_y(g) + DY / 2);
        let _ = writeln!(crossings, r#"<circle class="crossing" cx="{cx}" cy="{cy}" r="2"/>"#);
    }

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(out, r#"<rect width="{width}" height="{height}" fill="white"/>"#);
    let _ = writeln!(out, r#"<g fill="none" stroke-width="1.5">"#);
    for (l, pts) in points.iter_mut().enumerate() {
        let y = pts.last().expect("start point").1;
        pts.push((width - MARGIN, y));
        let hue = (l * 360) / n;
        let path: Vec<String> = pts.iter().map(|(x, y)| format!("{x},{y}")).collect();
        let _ = writeln!(
            out,
            r#"<polyline class="pseudoline" data-line="{}" stroke="hsl({hue},70%,40%)" points="{}"/>"#,
            l + 1,
            path.join(" ")
        );
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, r#"<g fill="black">"#);
    out.push_str(&crossings);
    let _ = writeln!(out, "</g>");
    let (sx, sy) = (MARGIN, MARGIN / 2);
    let _ = writeln!(
        out,
        r#"<path class="north" fill="goldenrod" d="M{sx},{} l2,5 5,0 -4,3 2,5 -5,-3 -5,3 2,-5 -4,-3 5,0 z"/>"#,
        sy - 6
    );
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::odd_even_arrangement;

    #[test]
    fn two_wires() {
        let svg = render_svg(&WiringDiagram::new(2, vec![1]).unwrap()).unwrap();
        assert_eq!(svg.matches(r#"class="pseudoline""#).count(), 2);
        assert_eq!(svg.matches(r#"class="crossing""#).count(), 1);
        assert_eq!(svg.matches(r#"class="north""#).count(), 1);
        assert_eq!(svg, render_svg(&WiringDiagram::new(2, vec![1]).unwrap()).unwrap());
    }

    #[test]
    fn odd_even_twenty() {
        let svg = render_svg(&odd_even_arrangement(20)).unwrap();
        assert_eq!(svg.matches(r#"class="crossing""#).count(), 190);
        assert!(render_svg(&odd_even_arrangement(201)).is_err());
    }
}

use std::fmt::Write;

use crate::geometry::QuadCatalog;
use crate::instance::{Instance, Solution};
use crate::triangulation::{Edge, SequenceViolation, Triangulation};

const SIZE: f64 = 800.0;
const MARGIN: f64 = 20.0;

/// Draws the points of `instance` and the given edges; `highlight` edges
/// are drawn on top in a second color. Output depends only on the input.
pub fn render_svg(instance: &Instance, edges: &[Edge], highlight: &[Edge]) -> String {
    let pts = instance.points.points();
    let (mut x0, mut y0, mut x1, mut y1) = (i64::MAX, i64::MAX, i64::MIN, i64::MIN);
    for p in pts {
        x0 = x0.min(p.x);
        y0 = y0.min(p.y);
        x1 = x1.max(p.x);
        y1 = y1.max(p.y);
    }
    let span = ((x1 - x0).max(y1 - y0).max(1)) as f64;
    let scale = (SIZE - 2.0 * MARGIN) / span;
    let at = |i: u32| {
        let p = pts[i as usize];
        (MARGIN + (p.x - x0) as f64 * scale, SIZE - MARGIN - (p.y - y0) as f64 * scale)
    };
    let mut s = String::new();
    writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#).unwrap();
    let line = |s: &mut String, e: &Edge, style: &str| {
        let ((ax, ay), (bx, by)) = (at(e.u), at(e.v));
        writeln!(s, r#"<line x1="{ax:.2}" y1="{ay:.2}" x2="{bx:.2}" y2="{by:.2}" {style}/>"#).unwrap();
    };
    writeln!(s, r##"<g stroke="#555" stroke-width="1.5">"##).unwrap();
    for e in edges {
        line(&mut s, e, "");
    }
    s.push_str("</g>\n");
    if !highlight.is_empty() {
        writeln!(s, r##"<g stroke="#d33" stroke-width="3">"##).unwrap();
        for e in highlight {
            line(&mut s, e, "");
        }
        s.push_str("</g>\n");
    }
    writeln!(s, r##"<g fill="#000">"##).unwrap();
    for i in 0..pts.len() as u32 {
        let (x, y) = at(i);
        writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="4"/>"#).unwrap();
    }
    s.push_str("</g>\n</svg>\n");
    s
}

/// The center, then for every input each state of its sequence with the
/// edges about to be flipped highlighted.
pub fn render_solution_pages(instance: &Instance, solution: &Solution, cat: &QuadCatalog) -> Result<Vec<String>, SequenceViolation> {
    let mut pages = vec![render_svg(instance, &solution.center, &[])];
    for (t, seq) in instance.inputs.iter().zip(&solution.flip_sequences) {
        let trail: Vec<Triangulation> = seq.trail(t, cat)?;
        for (state, round) in trail.iter().zip(&seq.rounds) {
            let hl: Vec<Edge> = round.iter().copied().collect();
            pages.push(render_svg(instance, state.edges(), &hl));
        }
    }
    Ok(pages)
}

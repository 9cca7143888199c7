use std::collections::HashMap;

use super::builder::{Builder, FlipTarget, Term, VarKey};
use super::tables::{CenterDistance, UNREACHABLE};
use super::{EncodeInput, Encoding, Layout};
use crate::geometry::Grid;
use crate::triangulation::{flip_status, Edge, FlipStatus};

/// Round-by-round model in plain clauses, with flips named by the edge
/// they remove.
///
/// Step `s` is the state after `s` rounds; the flip variables of step `s`
/// act between states `s` and `s + 1`. Constraints per input and step:
/// no two present edges cross; an unflipped present edge stays; a flipped
/// edge was present and its convex quad's other diagonal appears; an edge
/// whose quad is non-convex stays put; two flipped edges never share a
/// present empty triangle. Edges that cannot be present in time, or cannot
/// reach the center in the remaining rounds, are folded to false.
pub fn encode_cnf(inp: EncodeInput<'_>, center: &CenterDistance) -> Encoding {
    let layout = Layout { inp, center: Some(center) };
    let mut b = Builder::default();
    let cat = inp.catalog;
    let ps = &inp.instance.points;
    let reach = inp.reach;
    let edges = reach.edges();

    let mut crossings: Vec<(Edge, Edge)> = Vec::new();
    for (k, &e0) in edges.iter().enumerate() {
        for &e1 in &edges[k + 1..] {
            if ps.edges_cross(e0, e1) {
                crossings.push((e0, e1));
            }
        }
    }
    // empty triangles whose three sides could all be flipped
    let flippable_somewhere = |e: Edge| cat.convex_with_diagonal(e).next().is_some();
    let grid = Grid::build(ps);
    let mut triangles: Vec<[Edge; 3]> = Vec::new();
    for (k, &e) in edges.iter().enumerate() {
        for &f in &edges[k + 1..] {
            if f.u != e.u {
                break;
            }
            let g = Edge::new(e.v, f.v);
            if reach.index_of(g).is_none() || ps.orient(e.u, e.v, f.v) == 0 {
                continue;
            }
            let sides = [e, f, g];
            if sides.iter().filter(|&&x| flippable_somewhere(x)).count() < 2 {
                continue;
            }
            if grid.triangle_empty(ps, e.u, e.v, f.v).unwrap_or(false) {
                triangles.push(sides);
            }
        }
    }

    for (i, &d) in inp.distances.iter().enumerate() {
        if d == 0 {
            layout.pin_to_center(&mut b, i);
            continue;
        }
        let input = &inp.instance.inputs[i];
        let max_step = if i == 0 { d } else { d - 1 };

        for &(e0, e1) in &crossings {
            let (c0, c1) = (center.get(e0), center.get(e1));
            if c0 == UNREACHABLE || c1 == UNREACHABLE || c0.max(c1) > d {
                continue;
            }
            let lo = reach.earliest(e0, i).max(reach.earliest(e1, i)).max(1);
            let hi = max_step.min(d - c0.max(c1));
            for s in lo..=hi {
                let p0 = layout.present(&mut b, i, s, e0);
                let p1 = layout.present(&mut b, i, s, e1);
                b.clause(&[!p0, !p1]);
            }
        }

        // flip variables, created on first use
        let mut flips: HashMap<(u32, Edge), Term> = HashMap::new();
        let mut flip = |b: &mut Builder, s: u32, e: Edge| -> Term {
            if let Some(&t) = flips.get(&(s, e)) {
                return t;
            }
            let possible = if s == 0 {
                matches!(flip_status(input, e, cat), FlipStatus::Flippable(_))
            } else {
                !layout.present(b, i, s, e).is_false()
                    && cat.convex_with_diagonal(e).any(|id| {
                        cat.get(id).boundary().iter().all(|&x| !layout.present(b, i, s, x).is_false())
                    })
            };
            let t = if possible {
                b.var(VarKey::Flip { tri: i as u32, step: s, target: FlipTarget::Edge(e) })
            } else {
                Term::Const(false)
            };
            flips.insert((s, e), t);
            t
        };

        // first round, from the known input
        for &e in input.edges() {
            if ps.is_hull_edge(e) {
                continue;
            }
            let next = layout.present(&mut b, i, 1, e);
            match flip_status(input, e, cat) {
                FlipStatus::Flippable(q) => {
                    let g = cat.get(q).flip_of(e).unwrap();
                    let f = flip(&mut b, 0, e);
                    let next_g = layout.present(&mut b, i, 1, g);
                    b.clause(&[f, next]);
                    b.clause(&[!f, next_g]);
                    b.clause(&[!next, !next_g]);
                }
                FlipStatus::Blocked(_) => b.clause(&[next]),
            }
        }
        for face in input.faces() {
            let [a, c, z] = *face;
            let sides = [Edge::new(a, c), Edge::new(c, z), Edge::new(a, z)];
            for x in 0..3 {
                for y in x + 1..3 {
                    let fx = flip(&mut b, 0, sides[x]);
                    let fy = flip(&mut b, 0, sides[y]);
                    b.clause(&[!fx, !fy]);
                }
            }
        }

        for s in 1..d {
            for &e in edges {
                if ps.is_hull_edge(e) {
                    continue;
                }
                let now = layout.present(&mut b, i, s, e);
                if now.is_false() {
                    continue;
                }
                let next = layout.present(&mut b, i, s + 1, e);
                let f = flip(&mut b, s, e);
                b.clause(&[!now, f, next]);
                b.clause(&[now, !f]);
            }
            for q in cat.quads() {
                for e in q.diagonals() {
                    let f = flip(&mut b, s, e);
                    if f.is_false() {
                        continue;
                    }
                    let mut clause: Vec<Term> = q.boundary().iter().map(|&x| !layout.present(&mut b, i, s, x)).collect();
                    clause.push(!f);
                    if let Some(g) = q.flip_of(e) {
                        clause.push(!layout.present(&mut b, i, s, e));
                        clause.push(layout.present(&mut b, i, s + 1, g));
                    }
                    b.clause(&clause);
                }
            }
            for sides in &triangles {
                for x in 0..3 {
                    for y in x + 1..3 {
                        let fx = flip(&mut b, s, sides[x]);
                        let fy = flip(&mut b, s, sides[y]);
                        if fx.is_false() || fy.is_false() {
                            continue;
                        }
                        let third = sides[3 - x - y];
                        let p = layout.present(&mut b, i, s, third);
                        b.clause(&[!p, !fx, !fy]);
                    }
                }
            }
        }
    }
    layout.finish(b)
}

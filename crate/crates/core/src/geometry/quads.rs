use std::collections::{BTreeMap, HashMap};

use super::{Grid, PointSet};
use crate::triangulation::Edge;

pub type QuadId = u32;

/// A simple quadrilateral made of two edge-adjacent empty triangles.
///
/// `verts` is the boundary in counter-clockwise order, rotated so that
/// `(verts[0], verts[2])` is an interior diagonal. A convex quad also has
/// `(verts[1], verts[3])` as a second interior diagonal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Quad {
    pub verts: [u32; 4],
    pub convex: bool,
}

impl Quad {
    pub fn diagonal(&self) -> Edge {
        Edge::new(self.verts[0], self.verts[2])
    }

    pub fn other_diagonal(&self) -> Option<Edge> {
        self.convex.then(|| Edge::new(self.verts[1], self.verts[3]))
    }

    pub fn diagonals(&self) -> impl Iterator<Item = Edge> + '_ {
        std::iter::once(self.diagonal()).chain(self.other_diagonal())
    }

    pub fn has_diagonal(&self, e: Edge) -> bool {
        self.diagonals().any(|d| d == e)
    }

    /// The diagonal opposite to `e` in a convex quad.
    pub fn flip_of(&self, e: Edge) -> Option<Edge> {
        let other = self.other_diagonal()?;
        if e == self.diagonal() {
            Some(other)
        } else if e == other {
            Some(self.diagonal())
        } else {
            None
        }
    }

    pub fn boundary(&self) -> [Edge; 4] {
        let v = self.verts;
        [Edge::new(v[0], v[1]), Edge::new(v[1], v[2]), Edge::new(v[2], v[3]), Edge::new(v[3], v[0])]
    }

    /// The two triangles (sorted vertex triples) the quad splits into when
    /// `e` is the present diagonal.
    pub fn triangles(&self, e: Edge) -> Option<[[u32; 3]; 2]> {
        let v = self.verts;
        let (a, b, c, d) = if e == self.diagonal() {
            (v[0], v[1], v[2], v[3])
        } else if Some(e) == self.other_diagonal() {
            (v[1], v[2], v[3], v[0])
        } else {
            return None;
        };
        Some([sorted3(a, b, c), sorted3(a, c, d)])
    }

    pub fn vertex_key(&self) -> [u32; 4] {
        let mut k = self.verts;
        k.sort_unstable();
        k
    }
}

pub(crate) fn sorted3(a: u32, b: u32, c: u32) -> [u32; 3] {
    let mut t = [a, b, c];
    t.sort_unstable();
    t
}

/// Every empty quadrilateral of a point set, with lookup by diagonal and
/// by vertex set. Quads are kept in canonical order (vertex set, then
/// diagonal), so ids are stable for a given point set.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QuadCatalog {
    quads: Vec<Quad>,
    by_diagonal: BTreeMap<Edge, Vec<QuadId>>,
    by_vertex_quadruple: HashMap<[u32; 4], Vec<QuadId>>,
}

impl QuadCatalog {
    pub fn from_quads(mut quads: Vec<Quad>) -> QuadCatalog {
        quads.sort_by_key(|q| (q.vertex_key(), q.diagonal(), q.convex));
        quads.dedup();
        let mut by_diagonal: BTreeMap<Edge, Vec<QuadId>> = BTreeMap::new();
        let mut by_vertex_quadruple: HashMap<[u32; 4], Vec<QuadId>> = HashMap::new();
        for (id, q) in quads.iter().enumerate() {
            for d in q.diagonals() {
                by_diagonal.entry(d).or_default().push(id as QuadId);
            }
            by_vertex_quadruple.entry(q.vertex_key()).or_default().push(id as QuadId);
        }
        QuadCatalog { quads, by_diagonal, by_vertex_quadruple }
    }

    pub fn quads(&self) -> &[Quad] {
        &self.quads
    }

    pub fn len(&self) -> usize {
        self.quads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quads.is_empty()
    }

    pub fn get(&self, id: QuadId) -> &Quad {
        &self.quads[id as usize]
    }

    pub fn convex(&self) -> impl Iterator<Item = (QuadId, &Quad)> {
        self.quads.iter().enumerate().filter(|(_, q)| q.convex).map(|(i, q)| (i as QuadId, q))
    }

    pub fn non_convex(&self) -> impl Iterator<Item = (QuadId, &Quad)> {
        self.quads.iter().enumerate().filter(|(_, q)| !q.convex).map(|(i, q)| (i as QuadId, q))
    }

    pub fn convex_count(&self) -> usize {
        self.quads.iter().filter(|q| q.convex).count()
    }

    pub fn with_diagonal(&self, e: Edge) -> &[QuadId] {
        self.by_diagonal.get(&e).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn convex_with_diagonal(&self, e: Edge) -> impl Iterator<Item = QuadId> + '_ {
        self.with_diagonal(e).iter().copied().filter(move |&id| self.get(id).convex)
    }

    pub fn with_vertices(&self, mut key: [u32; 4]) -> &[QuadId] {
        key.sort_unstable();
        self.by_vertex_quadruple.get(&key).map(Vec::as_slice).unwrap_or(&[])
    }
}

/// Enumerates every empty quadrilateral.
///
/// For each 4-subset, each of its three pairings into two segments, and
/// each choice of which segment `pq` is the candidate diagonal: when `r` and `s` lie
/// strictly on opposite sides of line `pq`, triangles `pqr` and `pqs` form a
/// simple quadrilateral with interior diagonal `pq`. It is convex exactly
/// when `p` and `q` are also strictly separated by line `rs`. The quad is
/// kept when both triangles and the diagonal are empty.
pub fn enumerate_quads(ps: &PointSet, grid: &Grid) -> QuadCatalog {
    let n = ps.len() as u32;
    let mut tri_memo: HashMap<[u32; 3], bool> = HashMap::new();
    let mut seg_memo: HashMap<Edge, bool> = HashMap::new();
    let mut quads = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                for l in (k + 1)..n {
                    for (p, q, r, s) in [
                        (i, j, k, l),
                        (k, l, i, j),
                        (i, k, j, l),
                        (j, l, i, k),
                        (i, l, j, k),
                        (j, k, i, l),
                    ] {
                        let or = ps.orient(p, q, r);
                        let os = ps.orient(p, q, s);
                        if or * os >= 0 {
                            continue;
                        }
                        let convex = ps.orient(r, s, p) * ps.orient(r, s, q) < 0;
                        if convex && Edge::new(r, s) < Edge::new(p, q) {
                            // recorded from the other pairing
                            continue;
                        }
                        let seg_ok = *seg_memo.entry(Edge::new(p, q)).or_insert_with(|| grid.segment_empty(ps, p, q));
                        if !seg_ok {
                            continue;
                        }
                        let mut tri_ok = |a: u32, b: u32, c: u32| {
                            *tri_memo.entry(sorted3(a, b, c)).or_insert_with(|| {
                                grid.triangle_empty(ps, a, b, c).expect("non-degenerate by construction")
                            })
                        };
                        if !tri_ok(p, q, r) || !tri_ok(p, q, s) {
                            continue;
                        }
                        let verts = if or < 0 { [p, r, q, s] } else { [p, s, q, r] };
                        quads.push(Quad { verts, convex });
                    }
                }
            }
        }
    }
    QuadCatalog::from_quads(quads)
}

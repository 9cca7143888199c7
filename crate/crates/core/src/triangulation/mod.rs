//! Triangulations of a [`PointSet`], parallel flips and the breadth-first
//! distance oracle.

mod flip;
mod oracle;

pub use flip::{
    apply_parallel_flip, flip_status, flippable, validate_sequence, FlipBlock, FlipSequence, FlipStatus,
    ParallelFlip, SequenceViolation, ViolationKind,
};
pub use oracle::{all_triangulations, oracle_distance_map, oracle_parallel_distance};

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::geometry::PointSet;

/// Undirected edge between two point indices, stored with `u < v`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "[u32; 2]", try_from = "[u32; 2]")]
pub struct Edge {
    pub u: u32,
    pub v: u32,
}

impl Edge {
    /// # Panics
    /// If `a == b`.
    #[inline]
    pub fn new(a: u32, b: u32) -> Edge {
        assert_ne!(a, b, "edge endpoints must differ");
        if a < b {
            Edge { u: a, v: b }
        } else {
            Edge { u: b, v: a }
        }
    }

    pub fn has_vertex(&self, w: u32) -> bool {
        self.u == w || self.v == w
    }

    /// The endpoint that is not `w`.
    pub fn other(&self, w: u32) -> u32 {
        if self.u == w {
            self.v
        } else {
            self.u
        }
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.u, self.v)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.u, self.v)
    }
}

impl From<Edge> for [u32; 2] {
    fn from(e: Edge) -> Self {
        [e.u, e.v]
    }
}

impl TryFrom<[u32; 2]> for Edge {
    type Error = String;
    fn try_from([a, b]: [u32; 2]) -> Result<Self, Self::Error> {
        if a == b {
            Err(format!("degenerate edge [{a}, {b}]"))
        } else {
            Ok(Edge::new(a, b))
        }
    }
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum TriangulationError {
    #[error("edge {0} references a point outside the point set")]
    VertexOutOfRange(Edge),
    #[error("edge {0} listed twice")]
    DuplicateEdge(Edge),
    #[error("edge {0} passes through another point")]
    EdgeThroughPoint(Edge),
    #[error("edges {0} and {1} cross")]
    CrossingEdges(Edge, Edge),
    #[error("hull edge {0} is missing")]
    MissingHullEdge(Edge),
    #[error("expected {expected} edges, found {found}")]
    NotMaximal { expected: usize, found: usize },
    #[error("point set is collinear and has no triangulation")]
    DegeneratePointSet,
    #[error("edge {0} is not in the triangulation")]
    EdgeNotPresent(Edge),
    #[error("edge {edge} cannot be flipped: {reason}")]
    NotFlippable { edge: Edge, reason: FlipBlock },
    #[error("flips of {0} and {1} share a triangle")]
    SharedTriangle(Edge, Edge),
    #[error("a parallel flip must flip at least one edge")]
    EmptyFlip,
}

const NO_WING: u32 = u32::MAX;

/// A maximal crossing-free edge set over a shared point set.
///
/// Edges are kept sorted; two triangulations are equal iff their edge sets
/// are. For each edge the third vertices of its two incident faces are
/// cached ("wings"); a hull edge has one wing.
#[derive(Clone)]
pub struct Triangulation {
    points: Arc<PointSet>,
    edges: Vec<Edge>,
    wings: Vec<[u32; 2]>,
    faces: Vec<[u32; 3]>,
}

impl PartialEq for Triangulation {
    fn eq(&self, other: &Self) -> bool {
        self.edges == other.edges
    }
}

impl Eq for Triangulation {}

impl fmt::Debug for Triangulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Triangulation").field("edges", &self.edges).finish()
    }
}

impl Triangulation {
    /// Validates `edges` as a triangulation of `points`.
    pub fn from_edges(points: Arc<PointSet>, edges: impl IntoIterator<Item = Edge>) -> Result<Self, TriangulationError> {
        if points.is_degenerate() {
            return Err(TriangulationError::DegeneratePointSet);
        }
        let n = points.len() as u32;
        let mut seen = BTreeSet::new();
        for e in edges {
            if e.v >= n {
                return Err(TriangulationError::VertexOutOfRange(e));
            }
            if !seen.insert(e) {
                return Err(TriangulationError::DuplicateEdge(e));
            }
        }
        let edges: Vec<Edge> = seen.into_iter().collect();
        for &e in &edges {
            if !points.segment_is_clear(e.u, e.v) {
                return Err(TriangulationError::EdgeThroughPoint(e));
            }
        }
        for &h in points.hull_edges() {
            if edges.binary_search(&h).is_err() {
                return Err(TriangulationError::MissingHullEdge(h));
            }
        }
        for (i, &a) in edges.iter().enumerate() {
            for &b in &edges[i + 1..] {
                if points.edges_cross(a, b) {
                    return Err(TriangulationError::CrossingEdges(a, b));
                }
            }
        }
        let expected = points.triangulation_edge_count();
        if edges.len() != expected {
            return Err(TriangulationError::NotMaximal { expected, found: edges.len() });
        }
        Ok(Self::from_sorted_unchecked(points, edges))
    }

    /// The greedy triangulation: candidate edges by increasing length, each
    /// kept unless it crosses one already kept.
    pub fn greedy(points: Arc<PointSet>) -> Result<Self, TriangulationError> {
        if points.is_degenerate() {
            return Err(TriangulationError::DegeneratePointSet);
        }
        let len2 = |e: &Edge| {
            let (a, b) = (points.point(e.u), points.point(e.v));
            let (dx, dy) = ((a.x - b.x) as i128, (a.y - b.y) as i128);
            dx * dx + dy * dy
        };
        let mut cands = points.candidate_edges();
        cands.sort_by_key(|e| (len2(e), *e));
        let mut kept: Vec<Edge> = Vec::with_capacity(points.triangulation_edge_count());
        for e in cands {
            if !kept.iter().any(|&k| points.edges_cross(k, e)) {
                kept.push(e);
            }
        }
        kept.sort_unstable();
        Ok(Self::from_sorted_unchecked(points, kept))
    }

    /// Builds the face structure for an edge set already known to be a
    /// triangulation, e.g. the result of a legal flip.
    pub(crate) fn from_sorted_unchecked(points: Arc<PointSet>, edges: Vec<Edge>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        let n = points.len();
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
        for e in &edges {
            adj[e.u as usize].push(e.v);
            adj[e.v as usize].push(e.u);
        }
        for a in adj.iter_mut() {
            a.sort_unstable();
        }
        let mut wings = Vec::with_capacity(edges.len());
        let mut faces = BTreeSet::new();
        for e in &edges {
            let left = left_face_apex(&points, &adj, e.u, e.v);
            let right = left_face_apex(&points, &adj, e.v, e.u);
            for w in [left, right].into_iter().flatten() {
                faces.insert(crate::geometry::sorted3(e.u, e.v, w));
            }
            wings.push([left.unwrap_or(NO_WING), right.unwrap_or(NO_WING)]);
        }
        Triangulation { points, edges, wings, faces: faces.into_iter().collect() }
    }

    pub fn points(&self) -> &Arc<PointSet> {
        &self.points
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn faces(&self) -> &[[u32; 3]] {
        &self.faces
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn edge_index(&self, e: Edge) -> Option<usize> {
        self.edges.binary_search(&e).ok()
    }

    /// Apexes of the faces on either side of `e`.
    pub fn wings(&self, e: Edge) -> Option<(Option<u32>, Option<u32>)> {
        let w = self.wings[self.edge_index(e)?];
        let f = |x: u32| (x != NO_WING).then_some(x);
        Some((f(w[0]), f(w[1])))
    }

    /// Faces incident to `e` as sorted vertex triples.
    pub fn faces_of(&self, e: Edge) -> Vec<[u32; 3]> {
        match self.wings(e) {
            None => Vec::new(),
            Some((l, r)) => [l, r].into_iter().flatten().map(|w| crate::geometry::sorted3(e.u, e.v, w)).collect(),
        }
    }

    /// Number of edges of this triangulation that properly cross `seg`.
    pub fn crossings_with(&self, seg: Edge) -> usize {
        self.edges.iter().filter(|&&e| self.points.edges_cross(e, seg)).count()
    }
}

/// Apex of the face to the left of the directed edge `a -> b`: among the
/// common neighbours left of the edge, the one with the smallest angle at
/// `a`.
fn left_face_apex(ps: &PointSet, adj: &[Vec<u32>], a: u32, b: u32) -> Option<u32> {
    let (na, nb) = (&adj[a as usize], &adj[b as usize]);
    let (mut i, mut j) = (0, 0);
    let mut best: Option<u32> = None;
    while i < na.len() && j < nb.len() {
        match na[i].cmp(&nb[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                let w = na[i];
                if ps.orient(a, b, w) > 0 {
                    best = match best {
                        Some(cur) if ps.orient(a, cur, w) >= 0 => Some(cur),
                        _ => Some(w),
                    };
                }
                i += 1;
                j += 1;
            }
        }
    }
    best
}

/// Number of pairs `(e1, e2)` with `e1` in `t1` and `e2` in `t2` that
/// properly cross. Zero iff the triangulations are equal.
pub fn crossing_count(t1: &Triangulation, t2: &Triangulation) -> usize {
    let only1: Vec<Edge> = t1.edges.iter().copied().filter(|&e| !t2.contains(e)).collect();
    let only2: Vec<Edge> = t2.edges.iter().copied().filter(|&e| !t1.contains(e)).collect();
    let ps = &t1.points;
    only1.iter().map(|&a| only2.iter().filter(|&&b| ps.edges_cross(a, b)).count()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn square() -> Arc<PointSet> {
        Arc::new(PointSet::from_coords(&[(0, 0), (1, 0), (1, 1), (0, 1)]).unwrap())
    }

    fn hull(ps: &PointSet) -> Vec<Edge> {
        ps.hull_edges().iter().copied().collect()
    }

    #[test]
    fn square_with_diagonal() {
        let ps = square();
        let mut edges = hull(&ps);
        edges.push(Edge::new(0, 2));
        let t = Triangulation::from_edges(ps, edges).unwrap();
        assert_eq!(t.len(), 5);
        assert_eq!(t.faces(), &[[0, 1, 2], [0, 2, 3]]);
        assert_eq!(t.faces_of(Edge::new(0, 2)).len(), 2);
        assert_eq!(t.faces_of(Edge::new(0, 1)).len(), 1);
    }

    #[test]
    fn hull_only_is_not_maximal() {
        let ps = square();
        let edges = hull(&ps);
        assert_eq!(
            Triangulation::from_edges(ps, edges).unwrap_err(),
            TriangulationError::NotMaximal { expected: 5, found: 4 }
        );
    }

    #[test]
    fn crossing_diagonals_rejected() {
        let ps = Arc::new(PointSet::from_coords(&[(0, 0), (4, 0), (4, 4), (0, 4), (2, 1)]).unwrap());
        let mut edges = hull(&ps);
        edges.extend([Edge::new(0, 2), Edge::new(1, 3), Edge::new(0, 4), Edge::new(1, 4)]);
        assert!(matches!(
            Triangulation::from_edges(ps, edges).unwrap_err(),
            TriangulationError::CrossingEdges(_, _)
        ));
    }

    #[test]
    fn duplicate_and_missing_hull() {
        let ps = square();
        let mut edges = hull(&ps);
        edges.push(Edge::new(0, 2));
        edges.push(Edge::new(2, 0));
        assert_eq!(
            Triangulation::from_edges(ps.clone(), edges).unwrap_err(),
            TriangulationError::DuplicateEdge(Edge::new(0, 2))
        );
        let edges = vec![Edge::new(0, 1), Edge::new(1, 2), Edge::new(2, 3), Edge::new(0, 2), Edge::new(1, 3)];
        assert_eq!(
            Triangulation::from_edges(ps, edges).unwrap_err(),
            TriangulationError::MissingHullEdge(Edge::new(0, 3))
        );
    }

    #[test]
    fn edge_through_point_rejected() {
        let ps = Arc::new(PointSet::from_coords(&[(0, 0), (2, 0), (4, 0), (2, 3)]).unwrap());
        let edges = vec![Edge::new(0, 1), Edge::new(1, 2), Edge::new(0, 2), Edge::new(0, 3), Edge::new(2, 3)];
        assert_eq!(
            Triangulation::from_edges(ps, edges).unwrap_err(),
            TriangulationError::EdgeThroughPoint(Edge::new(0, 2))
        );
    }

    #[test]
    fn crossing_count_square() {
        let ps = square();
        let mut a = hull(&ps);
        a.push(Edge::new(0, 2));
        let mut b = hull(&ps);
        b.push(Edge::new(1, 3));
        let ta = Triangulation::from_edges(ps.clone(), a).unwrap();
        let tb = Triangulation::from_edges(ps, b).unwrap();
        assert_eq!(crossing_count(&ta, &ta), 0);
        assert_eq!(crossing_count(&ta, &tb), 1);
        assert_eq!(crossing_count(&tb, &ta), 1);
    }

    #[test]
    fn fan_faces_with_interior_point() {
        let ps = Arc::new(PointSet::from_coords(&[(0, 0), (6, 0), (0, 6), (1, 1)]).unwrap());
        let mut edges = hull(&ps);
        edges.extend([Edge::new(0, 3), Edge::new(1, 3), Edge::new(2, 3)]);
        let t = Triangulation::from_edges(ps, edges).unwrap();
        assert_eq!(t.faces(), &[[0, 1, 3], [0, 2, 3], [1, 2, 3]]);
    }

    #[test]
    fn edge_serde_normalizes() {
        let e: Edge = serde_json::from_str("[5, 2]").unwrap();
        assert_eq!(e, Edge::new(2, 5));
        assert_eq!(serde_json::to_string(&e).unwrap(), "[2,5]");
        assert!(serde_json::from_str::<Edge>("[3, 3]").is_err());
    }
}

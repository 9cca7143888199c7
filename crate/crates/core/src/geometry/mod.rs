//! Exact integer geometry: orientation predicates, the point set with its
//! convex hull, a uniform spatial-hash grid and the empty-quadrilateral
//! catalog every encoding is built on.

mod cache;
mod grid;
mod quads;

pub use cache::{catalog_hash, load_catalog, load_or_build_catalog, save_catalog, CACHE_VERSION};
pub use grid::{BoundingBox, Grid};
pub use quads::{enumerate_quads, Quad, QuadCatalog, QuadId};
pub(crate) use quads::sorted3;

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BTreeSet;

use crate::triangulation::Edge;

/// Largest absolute coordinate accepted. Differences then fit in 32 bits and
/// cross products are evaluated in `i128`, so no predicate can overflow.
pub const MAX_COORD: i64 = 1 << 30;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("point set is empty")]
    Empty,
    #[error("points {0} and {1} coincide")]
    DuplicatePoint(usize, usize),
    #[error("point {0} has a coordinate outside [-2^30, 2^30]")]
    CoordinateOutOfRange(usize),
    #[error("triangle ({0}, {1}, {2}) is degenerate")]
    DegenerateTriangle(u32, u32, u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

impl Point {
    pub const fn new(x: i64, y: i64) -> Self {
        Point { x, y }
    }
}

impl From<(i64, i64)> for Point {
    fn from((x, y): (i64, i64)) -> Self {
        Point { x, y }
    }
}

/// Sign of the cross product `(q - p) x (r - p)`: `1` for a left turn,
/// `-1` for a right turn and `0` when the three points are collinear.
#[inline]
pub fn orient(p: Point, q: Point, r: Point) -> i32 {
    let ax = (q.x - p.x) as i128;
    let ay = (q.y - p.y) as i128;
    let bx = (r.x - p.x) as i128;
    let by = (r.y - p.y) as i128;
    match (ax * by - ay * bx).cmp(&0) {
        Ordering::Greater => 1,
        Ordering::Less => -1,
        Ordering::Equal => 0,
    }
}

/// Twice the signed area of triangle `pqr`.
#[inline]
pub fn area2(p: Point, q: Point, r: Point) -> i128 {
    let ax = (q.x - p.x) as i128;
    let ay = (q.y - p.y) as i128;
    let bx = (r.x - p.x) as i128;
    let by = (r.y - p.y) as i128;
    ax * by - ay * bx
}

/// True iff the open segments `a0a1` and `b0b1` meet in a single point that
/// is interior to both. Touching at an endpoint or overlapping collinearly
/// does not count.
pub fn segments_properly_cross(a0: Point, a1: Point, b0: Point, b1: Point) -> bool {
    let o1 = orient(a0, a1, b0);
    let o2 = orient(a0, a1, b1);
    let o3 = orient(b0, b1, a0);
    let o4 = orient(b0, b1, a1);
    o1 * o2 < 0 && o3 * o4 < 0
}

/// True iff `p` lies strictly between `a` and `b` on the segment `ab`.
pub fn strictly_on_segment(a: Point, b: Point, p: Point) -> bool {
    if orient(a, b, p) != 0 || p == a || p == b {
        return false;
    }
    let dot = (p.x - a.x) as i128 * (b.x - a.x) as i128 + (p.y - a.y) as i128 * (b.y - a.y) as i128;
    let len2 = (b.x - a.x) as i128 * (b.x - a.x) as i128 + (b.y - a.y) as i128 * (b.y - a.y) as i128;
    dot > 0 && dot < len2
}

/// An ordered set of distinct integer points together with its convex hull.
///
/// The hull lists every point on the hull boundary in counter-clockwise
/// order, including points lying in the interior of a hull side: each of
/// those is a triangulation vertex, so hull sides are split there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    points: Vec<Point>,
    hull: Vec<u32>,
    hull_edges: BTreeSet<Edge>,
}

impl PointSet {
    pub fn new(points: Vec<Point>) -> Result<Self, GeometryError> {
        if points.is_empty() {
            return Err(GeometryError::Empty);
        }
        for (i, p) in points.iter().enumerate() {
            if p.x.abs() > MAX_COORD || p.y.abs() > MAX_COORD {
                return Err(GeometryError::CoordinateOutOfRange(i));
            }
        }
        let mut order: Vec<u32> = (0..points.len() as u32).collect();
        order.sort_by_key(|&i| points[i as usize]);
        for w in order.windows(2) {
            if points[w[0] as usize] == points[w[1] as usize] {
                let (a, b) = (w[0].min(w[1]), w[0].max(w[1]));
                return Err(GeometryError::DuplicatePoint(a as usize, b as usize));
            }
        }
        let hull = boundary_hull(&points, &order);
        let mut hull_edges = BTreeSet::new();
        if hull.len() >= 3 && !all_collinear(&points) {
            for k in 0..hull.len() {
                hull_edges.insert(Edge::new(hull[k], hull[(k + 1) % hull.len()]));
            }
        }
        Ok(PointSet { points, hull, hull_edges })
    }

    pub fn from_coords(coords: &[(i64, i64)]) -> Result<Self, GeometryError> {
        Self::new(coords.iter().map(|&c| Point::from(c)).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    #[inline]
    pub fn point(&self, i: u32) -> Point {
        self.points[i as usize]
    }

    /// Hull boundary, counter-clockwise. For a collinear set this is the
    /// points sorted along the line.
    pub fn hull(&self) -> &[u32] {
        &self.hull
    }

    pub fn hull_edges(&self) -> &BTreeSet<Edge> {
        &self.hull_edges
    }

    pub fn is_hull_edge(&self, e: Edge) -> bool {
        self.hull_edges.contains(&e)
    }

    /// All points collinear: no triangulation exists.
    pub fn is_degenerate(&self) -> bool {
        self.hull_edges.is_empty()
    }

    /// Number of edges in every triangulation of this set.
    pub fn triangulation_edge_count(&self) -> usize {
        3 * self.len() - 3 - self.hull.len()
    }

    pub fn orient(&self, a: u32, b: u32, c: u32) -> i32 {
        orient(self.point(a), self.point(b), self.point(c))
    }

    pub fn edges_cross(&self, e: Edge, f: Edge) -> bool {
        segments_properly_cross(self.point(e.u), self.point(e.v), self.point(f.u), self.point(f.v))
    }

    /// Linear-scan check that no point lies strictly inside segment `ab`.
    pub fn segment_is_clear(&self, a: u32, b: u32) -> bool {
        let (pa, pb) = (self.point(a), self.point(b));
        !self.points.iter().any(|&p| strictly_on_segment(pa, pb, p))
    }

    /// Every pair of points whose connecting segment passes through no other
    /// point, i.e. every segment that can be an edge of some triangulation.
    pub fn candidate_edges(&self) -> Vec<Edge> {
        let n = self.len() as u32;
        let mut out = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                if self.segment_is_clear(u, v) {
                    out.push(Edge::new(u, v));
                }
            }
        }
        out
    }
}

fn all_collinear(points: &[Point]) -> bool {
    if points.len() < 3 {
        return true;
    }
    let a = points[0];
    let b = points[1];
    points.iter().all(|&p| orient(a, b, p) == 0)
}

/// Andrew's monotone chain for the strict hull, then every boundary point
/// inserted along the side it lies on.
fn boundary_hull(points: &[Point], sorted: &[u32]) -> Vec<u32> {
    if sorted.len() <= 2 || all_collinear(points) {
        return sorted.to_vec();
    }
    let mut strict: Vec<u32> = Vec::with_capacity(2 * sorted.len());
    for pass in 0..2 {
        let start = strict.len();
        let iter: Box<dyn Iterator<Item = &u32>> =
            if pass == 0 { Box::new(sorted.iter()) } else { Box::new(sorted.iter().rev()) };
        for &i in iter {
            while strict.len() >= start + 2 {
                let a = points[strict[strict.len() - 2] as usize];
                let b = points[strict[strict.len() - 1] as usize];
                if orient(a, b, points[i as usize]) <= 0 {
                    strict.pop();
                } else {
                    break;
                }
            }
            strict.push(i);
        }
        strict.pop();
    }
    let mut hull = Vec::with_capacity(strict.len());
    for k in 0..strict.len() {
        let a = strict[k];
        let b = strict[(k + 1) % strict.len()];
        let (pa, pb) = (points[a as usize], points[b as usize]);
        hull.push(a);
        let mut between: Vec<u32> = (0..points.len() as u32)
            .filter(|&i| strictly_on_segment(pa, pb, points[i as usize]))
            .collect();
        between.sort_by_key(|&i| {
            let p = points[i as usize];
            (p.x - pa.x).abs() + (p.y - pa.y).abs()
        });
        hull.extend(between);
    }
    hull
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(x: i64, y: i64) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn orient_examples() {
        assert_eq!(orient(p(0, 0), p(1, 0), p(0, 1)), 1);
        assert_eq!(orient(p(0, 0), p(1, 1), p(2, 2)), 0);
        assert_eq!(orient(p(0, 0), p(0, 1), p(1, 0)), -1);
    }

    #[test]
    fn orient_extreme_coordinates() {
        let m = MAX_COORD;
        assert_eq!(orient(p(-m, -m), p(m, m), p(-m, m)), 1);
        assert_eq!(orient(p(-m, -m), p(m, m), p(m - 1, m - 1)), 0);
        assert_eq!(orient(p(-m, -m), p(m, m), p(m, m - 1)), -1);
    }

    #[test]
    fn proper_crossing_examples() {
        assert!(segments_properly_cross(p(0, 0), p(2, 2), p(0, 2), p(2, 0)));
        assert!(!segments_properly_cross(p(0, 0), p(1, 1), p(1, 1), p(2, 0)));
        assert!(!segments_properly_cross(p(0, 0), p(1, 0), p(0, 1), p(1, 1)));
        // collinear overlap is not a proper crossing
        assert!(!segments_properly_cross(p(0, 0), p(2, 0), p(1, 0), p(3, 0)));
        // T-junction: endpoint in the interior of the other segment
        assert!(!segments_properly_cross(p(0, 0), p(2, 0), p(1, 0), p(1, 1)));
    }

    #[test]
    fn duplicate_points_rejected() {
        let err = PointSet::from_coords(&[(0, 0), (1, 1), (0, 0)]).unwrap_err();
        assert_eq!(err, GeometryError::DuplicatePoint(0, 2));
    }

    #[test]
    fn hull_includes_boundary_collinear_points() {
        let ps = PointSet::from_coords(&[(0, 0), (2, 0), (4, 0), (4, 4), (0, 4), (1, 1)]).unwrap();
        assert_eq!(ps.hull(), &[0, 1, 2, 3, 4]);
        assert!(ps.is_hull_edge(Edge::new(0, 1)));
        assert!(ps.is_hull_edge(Edge::new(1, 2)));
        assert!(!ps.is_hull_edge(Edge::new(0, 2)));
        assert_eq!(ps.triangulation_edge_count(), 3 * 6 - 3 - 5);
    }

    #[test]
    fn hull_is_counter_clockwise() {
        let ps = PointSet::from_coords(&[(0, 0), (0, 1), (1, 1), (1, 0)]).unwrap();
        let h = ps.hull();
        assert_eq!(h.len(), 4);
        for k in 0..4 {
            assert_eq!(ps.orient(h[k], h[(k + 1) % 4], h[(k + 2) % 4]), 1);
        }
    }

    #[test]
    fn collinear_set_is_degenerate() {
        let ps = PointSet::from_coords(&[(0, 0), (0, 3), (0, 1)]).unwrap();
        assert!(ps.is_degenerate());
        assert_eq!(ps.hull(), &[0, 2, 1]);
    }

    #[test]
    fn candidate_edges_skip_blocked_segments() {
        let ps = PointSet::from_coords(&[(0, 0), (2, 2), (4, 4), (0, 4)]).unwrap();
        let c = ps.candidate_edges();
        assert!(!c.contains(&Edge::new(0, 2)));
        assert!(c.contains(&Edge::new(0, 1)));
        assert_eq!(c.len(), 5);
    }

    proptest! {
        #[test]
        fn orient_antisymmetric_and_translation_invariant(
            ax in -1000i64..1000, ay in -1000i64..1000,
            bx in -1000i64..1000, by in -1000i64..1000,
            cx in -1000i64..1000, cy in -1000i64..1000,
            dx in -100000i64..100000, dy in -100000i64..100000,
        ) {
            let (a, b, c) = (p(ax, ay), p(bx, by), p(cx, cy));
            let s = orient(a, b, c);
            prop_assert_eq!(orient(b, a, c), -s);
            prop_assert_eq!(orient(a, c, b), -s);
            prop_assert_eq!(orient(c, b, a), -s);
            let t = |q: Point| p(q.x + dx, q.y + dy);
            prop_assert_eq!(orient(t(a), t(b), t(c)), s);
        }
    }
}

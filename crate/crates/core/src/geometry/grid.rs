use std::collections::HashMap;

use super::{orient, strictly_on_segment, GeometryError, Point, PointSet};

/// Closed axis-aligned rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundingBox {
    pub min: Point,
    pub max: Point,
}

impl BoundingBox {
    pub fn of(points: &[Point]) -> BoundingBox {
        let mut min = points[0];
        let mut max = points[0];
        for p in &points[1..] {
            min.x = min.x.min(p.x);
            min.y = min.y.min(p.y);
            max.x = max.x.max(p.x);
            max.y = max.y.max(p.y);
        }
        BoundingBox { min, max }
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }
}

/// Uniform spatial hash over the bounding box of a point set.
///
/// The cell side is `sqrt((x_max - x_min)(y_max - y_min) / N)`, which gives
/// about one point per cell on uniform data. A box of zero area uses side 1.
/// Cell coordinates are `floor((x - x_min) / s)`, a monotone map, so a box
/// query that scans the cells covering its corners sees every point inside.
#[derive(Debug, Clone)]
pub struct Grid {
    cell_side: f64,
    origin: Point,
    buckets: HashMap<(i64, i64), Vec<u32>>,
}

impl Grid {
    pub fn build(ps: &PointSet) -> Grid {
        let bbox = BoundingBox::of(ps.points());
        let w = (bbox.max.x - bbox.min.x) as f64;
        let h = (bbox.max.y - bbox.min.y) as f64;
        let area = w * h;
        let cell_side = if area > 0.0 { (area / ps.len() as f64).sqrt() } else { 1.0 };
        let mut grid = Grid { cell_side, origin: bbox.min, buckets: HashMap::new() };
        for (i, &p) in ps.points().iter().enumerate() {
            let key = grid.cell_of(p);
            grid.buckets.entry(key).or_default().push(i as u32);
        }
        grid
    }

    pub fn cell_side(&self) -> f64 {
        self.cell_side
    }

    pub fn origin(&self) -> Point {
        self.origin
    }

    pub fn bucket_count(&self) -> usize {
        self.buckets.len()
    }

    pub fn bucket(&self, cell: (i64, i64)) -> &[u32] {
        self.buckets.get(&cell).map(Vec::as_slice).unwrap_or(&[])
    }

    #[inline]
    pub fn cell_of(&self, p: Point) -> (i64, i64) {
        let cx = ((p.x - self.origin.x) as f64 / self.cell_side).floor() as i64;
        let cy = ((p.y - self.origin.y) as f64 / self.cell_side).floor() as i64;
        (cx, cy)
    }

    /// Calls `f` on every point index whose bucket intersects `bbox`. The
    /// caller still has to test the point itself.
    fn for_candidates(&self, bbox: &BoundingBox, mut f: impl FnMut(u32) -> bool) -> bool {
        let (x0, y0) = self.cell_of(bbox.min);
        let (x1, y1) = self.cell_of(bbox.max);
        let cells = (x1 - x0 + 1) as u128 * (y1 - y0 + 1) as u128;
        if cells > self.buckets.len() as u128 {
            for (&(cx, cy), bucket) in &self.buckets {
                if cx < x0 || cx > x1 || cy < y0 || cy > y1 {
                    continue;
                }
                for &i in bucket {
                    if !f(i) {
                        return false;
                    }
                }
            }
        } else {
            for cx in x0..=x1 {
                for cy in y0..=y1 {
                    if let Some(bucket) = self.buckets.get(&(cx, cy)) {
                        for &i in bucket {
                            if !f(i) {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }

    /// Indices of all points inside the closed box, ascending.
    pub fn points_in_box(&self, ps: &PointSet, bbox: &BoundingBox) -> Vec<u32> {
        let mut out = Vec::new();
        self.for_candidates(bbox, |i| {
            if bbox.contains(ps.point(i)) {
                out.push(i);
            }
            true
        });
        out.sort_unstable();
        out
    }

    /// No point other than the corners lies strictly inside `abc` or strictly
    /// inside one of its sides.
    pub fn triangle_empty(&self, ps: &PointSet, a: u32, b: u32, c: u32) -> Result<bool, GeometryError> {
        let (pa, pb, pc) = (ps.point(a), ps.point(b), ps.point(c));
        let o = orient(pa, pb, pc);
        if o == 0 {
            return Err(GeometryError::DegenerateTriangle(a, b, c));
        }
        let (pb, pc) = if o > 0 { (pb, pc) } else { (pc, pb) };
        let bbox = BoundingBox::of(&[pa, pb, pc]);
        Ok(self.for_candidates(&bbox, |i| {
            if i == a || i == b || i == c {
                return true;
            }
            let q = ps.point(i);
            !(orient(pa, pb, q) >= 0 && orient(pb, pc, q) >= 0 && orient(pc, pa, q) >= 0)
        }))
    }

    /// No point lies strictly between `a` and `b` on segment `ab`.
    pub fn segment_empty(&self, ps: &PointSet, a: u32, b: u32) -> bool {
        let (pa, pb) = (ps.point(a), ps.point(b));
        let bbox = BoundingBox::of(&[pa, pb]);
        self.for_candidates(&bbox, |i| !strictly_on_segment(pa, pb, ps.point(i)))
    }
}

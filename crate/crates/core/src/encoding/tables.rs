use std::collections::HashMap;

use crate::geometry::QuadCatalog;
use crate::instance::Instance;
use crate::triangulation::{Edge, Triangulation};

/// Marks an edge that no number of rounds can produce.
pub const UNREACHABLE: u32 = u32::MAX;

/// Per input, the earliest round after which each empty segment can be
/// present. Values are lower bounds on the true first appearance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachTable {
    edges: Vec<Edge>,
    index: HashMap<Edge, usize>,
    earliest: Vec<Vec<u32>>,
}

/// Relaxes `dist` over convex quads until nothing changes: when a quad's
/// boundary and one diagonal are available by step `s`, its other diagonal
/// is available by `s + 1`. With `limit`, only values up to `limit` are
/// produced.
fn relax(cat: &QuadCatalog, index: &HashMap<Edge, usize>, dist: &mut [u32], limit: Option<u32>) {
    let quads: Vec<([usize; 4], usize, usize)> = cat
        .convex()
        .filter_map(|(_, q)| {
            let b = q.boundary();
            let bi = [index.get(&b[0])?, index.get(&b[1])?, index.get(&b[2])?, index.get(&b[3])?];
            let d1 = *index.get(&q.diagonal())?;
            let d2 = *index.get(&q.other_diagonal()?)?;
            Some(([*bi[0], *bi[1], *bi[2], *bi[3]], d1, d2))
        })
        .collect();
    loop {
        let mut changed = false;
        for (b, d1, d2) in &quads {
            let wall = b.iter().map(|&k| dist[k]).max().unwrap();
            for (from, to) in [(*d1, *d2), (*d2, *d1)] {
                let ready = wall.max(dist[from]);
                if ready == UNREACHABLE || limit.is_some_and(|l| ready >= l) {
                    continue;
                }
                if ready + 1 < dist[to] {
                    dist[to] = ready + 1;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
}

impl ReachTable {
    /// Reachability by iterated relaxation from each input.
    pub fn compute(instance: &Instance, cat: &QuadCatalog) -> Self {
        let mut table = Self::seeded(instance, 1);
        for dist in table.earliest.iter_mut() {
            for v in dist.iter_mut() {
                if *v != 0 {
                    *v = UNREACHABLE;
                }
            }
            relax(cat, &table.index, dist, None);
        }
        table
    }

    /// The trivial table: input edges at 0, everything else at 1.
    pub fn unpruned(instance: &Instance) -> Self {
        Self::seeded(instance, 1)
    }

    fn seeded(instance: &Instance, other: u32) -> Self {
        let edges = instance.points.candidate_edges();
        let index: HashMap<Edge, usize> = edges.iter().enumerate().map(|(k, &e)| (e, k)).collect();
        let earliest = instance
            .inputs
            .iter()
            .map(|t| edges.iter().map(|&e| if t.contains(e) { 0 } else { other }).collect())
            .collect();
        ReachTable { edges, index, earliest }
    }

    /// Every empty segment of the point set, sorted.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn index_of(&self, e: Edge) -> Option<usize> {
        self.index.get(&e).copied()
    }

    pub fn inputs(&self) -> usize {
        self.earliest.len()
    }

    pub fn earliest(&self, e: Edge, input: usize) -> u32 {
        self.index_of(e).map_or(UNREACHABLE, |k| self.earliest[input][k])
    }

    /// Whether `e` could be a center edge under the distance vector `d`.
    pub fn might_be_in_center(&self, e: Edge, d: &[u32]) -> bool {
        self.index_of(e).is_some_and(|k| self.earliest.iter().zip(d).all(|(row, &di)| row[k] <= di))
    }

    /// Restricts the table to the selected inputs, in order.
    pub fn subset(&self, keep: &[usize]) -> Self {
        ReachTable {
            edges: self.edges.clone(),
            index: self.index.clone(),
            earliest: keep.iter().map(|&i| self.earliest[i].clone()).collect(),
        }
    }

    /// Rounds needed to move from each edge to some possible center edge:
    /// zero on the possible center edges (the edges of `fixed` when given),
    /// then relaxed outward for `max(d) - 1` steps.
    pub fn center_distance(&self, d: &[u32], cat: &QuadCatalog, fixed: Option<&Triangulation>) -> CenterDistance {
        let mut dist: Vec<u32> = self
            .edges
            .iter()
            .map(|&e| {
                let seed = match fixed {
                    Some(c) => c.contains(e),
                    None => self.might_be_in_center(e, d),
                };
                if seed {
                    0
                } else {
                    UNREACHABLE
                }
            })
            .collect();
        let max_d = d.iter().copied().max().unwrap_or(0);
        relax(cat, &self.index, &mut dist, Some(max_d));
        CenterDistance { index: self.index.clone(), dist }
    }

    /// Distances from every edge to the center when nothing is pruned.
    pub fn zero_center_distance(&self) -> CenterDistance {
        CenterDistance { index: self.index.clone(), dist: vec![0; self.edges.len()] }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CenterDistance {
    index: HashMap<Edge, usize>,
    dist: Vec<u32>,
}

impl CenterDistance {
    pub fn get(&self, e: Edge) -> u32 {
        self.index.get(&e).map_or(UNREACHABLE, |&k| self.dist[k])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulation::oracle_distance_map;

    fn square(diags: &[(u32, u32)]) -> Instance {
        let hull = [(0, 1), (1, 2), (2, 3), (0, 3)];
        let tris: Vec<Vec<Edge>> = diags
            .iter()
            .map(|&(a, b)| hull.iter().chain([(a, b)].iter()).map(|&(u, v)| Edge::new(u, v)).collect())
            .collect();
        Instance::from_raw("sq", &[(0, 0), (1, 0), (1, 1), (0, 1)], &tris).unwrap()
    }

    #[test]
    fn square_table() {
        let inst = square(&[(0, 2), (0, 2)]);
        let cat = inst.catalog();
        let r = ReachTable::compute(&inst, &cat);
        assert_eq!(r.earliest(Edge::new(0, 2), 0), 0);
        assert_eq!(r.earliest(Edge::new(1, 3), 0), 1);
        let cd = r.center_distance(&[1, 1], &cat, None);
        for &e in r.edges() {
            assert_eq!(cd.get(e), 0);
        }
        let cd0 = r.center_distance(&[0, 0], &cat, None);
        assert_eq!(cd0.get(Edge::new(1, 3)), UNREACHABLE);
    }

    #[test]
    fn hexagon_table_is_sound() {
        let inst = Instance::from_raw(
            "hex",
            &[(2, 0), (4, 0), (6, 2), (4, 4), (2, 4), (0, 2)],
            &[[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5), (0, 2), (0, 3), (0, 4)]
                .iter()
                .map(|&(a, b)| Edge::new(a, b))
                .collect()],
        )
        .unwrap();
        let cat = inst.catalog();
        let r = ReachTable::compute(&inst, &cat);
        let map = oracle_distance_map(&inst.inputs[0], &cat, None);
        let mut first: HashMap<Edge, u32> = HashMap::new();
        for (edges, &d) in &map {
            for &e in edges {
                let v = first.entry(e).or_insert(d);
                *v = (*v).min(d);
            }
        }
        for (&e, &d) in &first {
            assert!(r.earliest(e, 0) <= d, "{e:?}: table {} > oracle {d}", r.earliest(e, 0));
        }
        // 1-4 needs two rounds: 0-3 must be flipped away first
        assert_eq!(r.earliest(Edge::new(1, 4), 0), 2);
    }
}

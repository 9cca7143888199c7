//! Exhaustive search over the parallel-flip graph. Exponential; meant for
//! point sets of about eight points, where it is the ground truth for
//! every other distance computation in the crate.

use std::collections::{HashMap, VecDeque};

use super::flip::{flip_status, FlipStatus};
use super::{Edge, Triangulation};
use crate::geometry::QuadCatalog;

/// Every triangulation reachable from `t` in one parallel flip.
fn parallel_successors(t: &Triangulation, cat: &QuadCatalog) -> Vec<Vec<Edge>> {
    let mut moves: Vec<(Edge, Edge, Vec<[u32; 3]>)> = Vec::new();
    for &e in t.edges() {
        if let FlipStatus::Flippable(q) = flip_status(t, e, cat) {
            moves.push((e, cat.get(q).flip_of(e).unwrap(), t.faces_of(e)));
        }
    }
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    let mut used: Vec<[u32; 3]> = Vec::new();
    fn rec(
        k: usize,
        moves: &[(Edge, Edge, Vec<[u32; 3]>)],
        chosen: &mut Vec<usize>,
        used: &mut Vec<[u32; 3]>,
        t: &Triangulation,
        out: &mut Vec<Vec<Edge>>,
    ) {
        if k == moves.len() {
            if !chosen.is_empty() {
                let gone: Vec<Edge> = chosen.iter().map(|&c| moves[c].0).collect();
                let mut edges: Vec<Edge> = t.edges().iter().copied().filter(|e| !gone.contains(e)).collect();
                edges.extend(chosen.iter().map(|&c| moves[c].1));
                edges.sort_unstable();
                out.push(edges);
            }
            return;
        }
        rec(k + 1, moves, chosen, used, t, out);
        if moves[k].2.iter().all(|f| !used.contains(f)) {
            let before = used.len();
            used.extend(moves[k].2.iter().copied());
            chosen.push(k);
            rec(k + 1, moves, chosen, used, t, out);
            chosen.pop();
            used.truncate(before);
        }
    }
    rec(0, &moves, &mut chosen, &mut used, t, &mut out);
    out
}

/// Parallel-flip distance from `t` to every triangulation within `cap`
/// rounds (all of them when `cap` is `None`), keyed by sorted edge list.
pub fn oracle_distance_map(t: &Triangulation, cat: &QuadCatalog, cap: Option<u32>) -> HashMap<Vec<Edge>, u32> {
    let mut dist: HashMap<Vec<Edge>, u32> = HashMap::new();
    dist.insert(t.edges().to_vec(), 0);
    let mut queue = VecDeque::from([t.clone()]);
    while let Some(cur) = queue.pop_front() {
        let d = dist[cur.edges()];
        if cap.is_some_and(|c| d >= c) {
            continue;
        }
        for next in parallel_successors(&cur, cat) {
            if !dist.contains_key(&next) {
                dist.insert(next.clone(), d + 1);
                queue.push_back(Triangulation::from_sorted_unchecked(t.points().clone(), next));
            }
        }
    }
    dist
}

/// Minimum number of parallel flips turning `t1` into `t2`, or `None` if it
/// exceeds `cap`.
pub fn oracle_parallel_distance(t1: &Triangulation, t2: &Triangulation, cat: &QuadCatalog, cap: u32) -> Option<u32> {
    if t1 == t2 {
        return Some(0);
    }
    let target = t2.edges();
    let mut seen: HashMap<Vec<Edge>, u32> = HashMap::new();
    seen.insert(t1.edges().to_vec(), 0);
    let mut queue = VecDeque::from([t1.clone()]);
    while let Some(cur) = queue.pop_front() {
        let d = seen[cur.edges()];
        if d >= cap {
            continue;
        }
        for next in parallel_successors(&cur, cat) {
            if next == target {
                return Some(d + 1);
            }
            if !seen.contains_key(&next) {
                seen.insert(next.clone(), d + 1);
                queue.push_back(Triangulation::from_sorted_unchecked(t1.points().clone(), next));
            }
        }
    }
    None
}

/// Every triangulation of the point set, found by single flips from `t`
/// (the flip graph is connected). Sorted by edge list.
pub fn all_triangulations(t: &Triangulation, cat: &QuadCatalog) -> Vec<Triangulation> {
    let mut seen: HashMap<Vec<Edge>, ()> = HashMap::new();
    seen.insert(t.edges().to_vec(), ());
    let mut queue = VecDeque::from([t.clone()]);
    let mut out = Vec::new();
    while let Some(cur) = queue.pop_front() {
        for &e in cur.edges() {
            if let FlipStatus::Flippable(q) = flip_status(&cur, e, cat) {
                let mut edges = cur.edges().to_vec();
                let pos = edges.binary_search(&e).unwrap();
                edges[pos] = cat.get(q).flip_of(e).unwrap();
                edges.sort_unstable();
                if seen.insert(edges.clone(), ()).is_none() {
                    queue.push_back(Triangulation::from_sorted_unchecked(t.points().clone(), edges));
                }
            }
        }
        out.push(cur);
    }
    out.sort_by(|a, b| a.edges().cmp(b.edges()));
    out
}

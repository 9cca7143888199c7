use std::collections::BTreeSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::{enumerate_quads, Grid, Point, PointSet};
use crate::instance::Instance;
use crate::triangulation::{apply_parallel_flip, flip_status, FlipStatus, ParallelFlip, Triangulation};

/// A random instance: `n` distinct integer points in a `4n x 4n` box (not
/// all collinear) and `m` triangulations, each reached from the greedy
/// triangulation by up to `2n` random single flips. Same seed, same
/// instance.
pub fn generate_instance(n: usize, m: usize, seed: u64) -> Instance {
    assert!(n >= 3, "need at least three points");
    assert!(m >= 1, "need at least one triangulation");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let side = 4 * n as i64;
    let points = loop {
        let mut seen = BTreeSet::new();
        let mut pts = Vec::with_capacity(n);
        while pts.len() < n {
            let p = Point::new(rng.gen_range(0..side), rng.gen_range(0..side));
            if seen.insert((p.x, p.y)) {
                pts.push(p);
            }
        }
        let ps = PointSet::new(pts).expect("distinct points");
        if !ps.is_degenerate() {
            break Arc::new(ps);
        }
    };
    let cat = enumerate_quads(&points, &Grid::build(&points));
    let start = Triangulation::greedy(points.clone()).expect("non-degenerate");
    let inputs = (0..m)
        .map(|_| {
            let mut t = start.clone();
            for _ in 0..rng.gen_range(0..=2 * n) {
                let movable: Vec<_> =
                    t.edges().iter().copied().filter(|&e| matches!(flip_status(&t, e, &cat), FlipStatus::Flippable(_))).collect();
                let Some(&e) = movable.choose(&mut rng) else { break };
                t = apply_parallel_flip(&t, &ParallelFlip::new([e]), &cat).expect("flippable edge");
            }
            t
        })
        .collect();
    Instance::new(format!("random_{n}_{m}_{seed}"), points, inputs).expect("m >= 1")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_valid() {
        let a = generate_instance(7, 3, 11);
        assert_eq!(a, generate_instance(7, 3, 11));
        assert_eq!((a.n(), a.m()), (7, 3));
        for t in &a.inputs {
            Triangulation::from_edges(a.points.clone(), t.edges().iter().copied()).unwrap();
        }
        let small = generate_instance(4, 1, 0);
        assert_eq!(small.m(), 1);
    }
}

//! Lower bounds on the optimal total and the candidate distance vectors
//! the exact search walks through.

mod vectors;

pub use crate::pipeline::suffix_bounds;
pub use vectors::{enumerate_vectors, score, total_lower_bound, vector_exists, PrefixCheck, SuffixBounds, DEFAULT_PREFIX_DEPTHS, DEFAULT_SUFFIX_START};

use std::sync::Arc;

use crate::encoding::{decode_model, encode, EncodeInput, Formulation, ReachTable, UNREACHABLE};
use crate::geometry::QuadCatalog;
use crate::instance::Instance;
use crate::satbackend::{decide, Backend, SolveError};
use crate::triangulation::{FlipSequence, Triangulation};

/// Exact parallel-flip distances between all inputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairwiseDistances {
    m: usize,
    d: Vec<u32>,
}

impl PairwiseDistances {
    /// Builds the matrix from its full row-major contents.
    pub fn from_matrix(rows: Vec<Vec<u32>>) -> Self {
        let m = rows.len();
        assert!(rows.iter().all(|r| r.len() == m), "matrix must be square");
        PairwiseDistances { m, d: rows.into_iter().flatten().collect() }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.d[i * self.m + j]
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.d.chunks(self.m.max(1)).map(<[u32]>::to_vec).collect()
    }

    /// Inputs ordered by decreasing total distance to the others, ties by
    /// index. The first entries are the natural outliers to leave out.
    pub fn outlier_ranking(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.m).collect();
        idx.sort_by_key(|&i| (std::cmp::Reverse((0..self.m).map(|j| self.get(i, j) as u64).sum::<u64>()), i));
        idx
    }
}

/// Shortest flip sequence from `t` to `center`: tries `k` rounds for
/// increasing `k`, starting from the latest first appearance of a center
/// edge, which no sequence can beat.
pub fn shortest_sequence(
    t: &Triangulation,
    center: &Triangulation,
    cat: &QuadCatalog,
    backend: &Backend,
    formulation: Formulation,
) -> Result<FlipSequence, SolveError> {
    if t == center {
        return Ok(FlipSequence::default());
    }
    let single = Instance::new("pair", Arc::clone(t.points()), vec![t.clone()]).expect("one input");
    let reach = ReachTable::compute(&single, cat);
    let start = center.edges().iter().map(|&e| reach.earliest(e, 0)).max().unwrap_or(0);
    assert!(start != UNREACHABLE, "flip graph is connected");
    for k in start.max(1).. {
        let inp = EncodeInput { instance: &single, catalog: cat, reach: &reach, distances: &[k], fixed_center: Some(center) };
        let enc = encode(inp, formulation, true);
        if enc.infeasible {
            continue;
        }
        if let Some(model) = decide(backend, &enc.formula)? {
            let sol = decode_model(&enc, &model, &single, cat).expect("decoded sequence replays");
            return Ok(sol.flip_sequences.into_iter().next().unwrap());
        }
    }
    unreachable!()
}

pub fn pairwise_distance(
    a: &Triangulation,
    b: &Triangulation,
    cat: &QuadCatalog,
    backend: &Backend,
    formulation: Formulation,
) -> Result<u32, SolveError> {
    shortest_sequence(a, b, cat, backend, formulation).map(|s| s.len() as u32)
}

/// The full distance matrix, one SAT search per unordered pair.
pub fn pairwise_distances(
    instance: &Instance,
    cat: &QuadCatalog,
    backend: &Backend,
    formulation: Formulation,
) -> Result<PairwiseDistances, SolveError> {
    let m = instance.m();
    let mut rows = vec![vec![0u32; m]; m];
    for i in 0..m {
        for j in i + 1..m {
            let d = pairwise_distance(&instance.inputs[i], &instance.inputs[j], cat, backend, formulation)?;
            rows[i][j] = d;
            rows[j][i] = d;
        }
    }
    Ok(PairwiseDistances::from_matrix(rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::generate_instance;
    use crate::triangulation::{oracle_parallel_distance, validate_sequence};

    #[test]
    fn distances_match_oracle() {
        for seed in 0..25u64 {
            let inst = generate_instance(5 + (seed % 4) as usize, 2, 500 + seed);
            let cat = inst.catalog();
            let (a, b) = (&inst.inputs[0], &inst.inputs[1]);
            let expect = oracle_parallel_distance(a, b, &cat, 64).unwrap();
            for f in [Formulation::Cnf, Formulation::Xor] {
                let seq = shortest_sequence(a, b, &cat, &Backend::default(), f).unwrap();
                assert_eq!(seq.len() as u32, expect, "seed {seed} {f:?}");
                validate_sequence(a, &seq, b, &cat).unwrap();
            }
        }
    }

    #[test]
    fn outliers_first() {
        let d = PairwiseDistances::from_matrix(vec![vec![0, 1, 5], vec![1, 0, 4], vec![5, 4, 0]]);
        assert_eq!(d.outlier_ranking(), vec![2, 0, 1]);
        assert_eq!(d.rows()[2], vec![5, 4, 0]);
    }
}

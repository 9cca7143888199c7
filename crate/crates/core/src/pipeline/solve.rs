use std::collections::HashMap;

use crate::bounds::{
    enumerate_vectors, pairwise_distances, shortest_sequence, total_lower_bound, PairwiseDistances, PrefixCheck,
    SuffixBounds, DEFAULT_PREFIX_DEPTHS, DEFAULT_SUFFIX_START,
};
use crate::encoding::{decode_model, encode, EncodeInput, Formulation, ReachTable};
use crate::geometry::QuadCatalog;
use crate::instance::{Instance, Solution};
use crate::satbackend::{decide, Backend, Budget, SolveError};
use crate::triangulation::Triangulation;

/// Knobs of the exact search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactConfig {
    pub formulation: Formulation,
    /// Fold the reachability tables into the encoding.
    pub pruned: bool,
    /// Smallest suffix whose exact optimum is computed as a bound; `None`
    /// disables suffix bounds.
    pub suffix_start: Option<usize>,
    pub prefix_depths: Vec<usize>,
    /// Prefix probes only run on instances with at least this many inputs.
    pub prefix_min_inputs: usize,
    /// Conflict budget of one prefix probe; running out keeps the prefix.
    pub prefix_conflicts: u64,
}

impl Default for ExactConfig {
    fn default() -> Self {
        ExactConfig {
            formulation: Formulation::Cnf,
            pruned: true,
            suffix_start: Some(DEFAULT_SUFFIX_START),
            prefix_depths: DEFAULT_PREFIX_DEPTHS.to_vec(),
            prefix_min_inputs: 15,
            prefix_conflicts: 10_000,
        }
    }
}

/// What an exact run proves about its answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// Every vector with a smaller total, from `lower_bound` on, was
    /// refuted; `refuted` counts them.
    Optimal { lower_bound: u32, refuted: usize },
    /// Some smaller vector went undecided, so the answer is only an upper
    /// bound.
    UpperBound { lower_bound: u32, undecided: usize },
}

impl Certificate {
    pub fn is_optimal(&self) -> bool {
        matches!(self, Certificate::Optimal { .. })
    }
}

#[derive(Debug, Clone)]
pub struct ExactOutcome {
    pub solution: Solution,
    pub certificate: Certificate,
    pub distances: PairwiseDistances,
    /// The distance vector that was satisfied.
    pub vector: Vec<u32>,
}

/// Lowest total first: starts at the pairwise lower bound and, for each
/// total, tries the candidate vectors in enumeration order. The first
/// satisfiable vector is decoded. Undecided vectors are skipped and weaken
/// the certificate.
pub fn exact_solve(instance: &Instance, cat: &QuadCatalog, backend: &Backend, cfg: &ExactConfig) -> Result<ExactOutcome, SolveError> {
    let dist = pairwise_distances(instance, cat, backend, cfg.formulation)?;
    let suffix = match cfg.suffix_start {
        Some(start) if instance.m() > start => Some(suffix_bounds_with(instance, start, cat, backend, cfg, &dist)?),
        _ => None,
    };
    exact_with(instance, cat, backend, cfg, dist, suffix.as_ref())
}

fn exact_with(
    instance: &Instance,
    cat: &QuadCatalog,
    backend: &Backend,
    cfg: &ExactConfig,
    dist: PairwiseDistances,
    suffix: Option<&SuffixBounds>,
) -> Result<ExactOutcome, SolveError> {
    let m = instance.m();
    let reach = if cfg.pruned { ReachTable::compute(instance, cat) } else { ReachTable::unpruned(instance) };
    let lower_bound = total_lower_bound(&dist);
    // taking an input as center realizes its row of the matrix
    let (anchor, upper) = (0..m).map(|k| (k, (0..m).map(|j| dist.get(k, j)).sum::<u32>())).min_by_key(|&(k, s)| (s, k)).unwrap();

    let probe_backend = match backend {
        Backend::Internal { seed, .. } => {
            Backend::Internal { budget: Budget { max_conflicts: Some(cfg.prefix_conflicts), max_time: None }, seed: *seed }
        }
        other => other.clone(),
    };
    let mut memo: HashMap<Vec<u32>, bool> = HashMap::new();
    let mut probe = |prefix: &[u32]| -> bool {
        if let Some(&v) = memo.get(prefix) {
            return v;
        }
        let keep: Vec<usize> = (0..prefix.len()).collect();
        let sub = instance.subset(&keep);
        let sub_reach = reach.subset(&keep);
        let inp = EncodeInput { instance: &sub, catalog: cat, reach: &sub_reach, distances: prefix, fixed_center: None };
        let enc = encode(inp, cfg.formulation, cfg.pruned);
        let ok = !enc.infeasible && !matches!(decide(&probe_backend, &enc.formula), Ok(None));
        memo.insert(prefix.to_vec(), ok);
        ok
    };
    let use_prefix = m >= cfg.prefix_min_inputs && !cfg.prefix_depths.is_empty();

    let (mut refuted, mut undecided) = (0usize, 0usize);
    for total in lower_bound..=upper {
        let prefix = use_prefix.then(|| PrefixCheck { depths: cfg.prefix_depths.clone(), check: &mut probe });
        for vector in enumerate_vectors(total, &dist, suffix, prefix) {
            let inp = EncodeInput { instance, catalog: cat, reach: &reach, distances: &vector, fixed_center: None };
            let enc = encode(inp, cfg.formulation, cfg.pruned);
            if enc.infeasible {
                refuted += 1;
                continue;
            }
            match decide(backend, &enc.formula) {
                Ok(Some(model)) => {
                    let solution = decode_model(&enc, &model, instance, cat).expect("decoded solution replays");
                    let certificate = if undecided == 0 {
                        Certificate::Optimal { lower_bound, refuted }
                    } else {
                        Certificate::UpperBound { lower_bound, undecided }
                    };
                    return Ok(ExactOutcome { solution, certificate, distances: dist, vector });
                }
                Ok(None) => refuted += 1,
                Err(SolveError::Unknown(_)) => undecided += 1,
                Err(e) => return Err(e),
            }
        }
    }
    // every vector up to the anchor's total went undecided
    let center = instance.inputs[anchor].clone();
    let solution = fixed_center_solve(instance, &center, cat, backend, cfg.formulation)?;
    let vector = solution.distances().iter().map(|&d| d as u32).collect();
    Ok(ExactOutcome { solution, certificate: Certificate::UpperBound { lower_bound, undecided }, distances: dist, vector })
}

/// Exact optima of the last `k` inputs for every `k` from `start` to
/// `m - 1`. Each sub-run reuses the bounds of the shorter suffixes.
/// Suffixes whose optimum could not be certified are left out.
pub fn suffix_bounds(instance: &Instance, start: usize, cat: &QuadCatalog, backend: &Backend, cfg: &ExactConfig) -> Result<SuffixBounds, SolveError> {
    let dist = pairwise_distances(instance, cat, backend, cfg.formulation)?;
    suffix_bounds_with(instance, start, cat, backend, cfg, &dist)
}

fn suffix_bounds_with(
    instance: &Instance,
    start: usize,
    cat: &QuadCatalog,
    backend: &Backend,
    cfg: &ExactConfig,
    dist: &PairwiseDistances,
) -> Result<SuffixBounds, SolveError> {
    let m = instance.m();
    let mut bounds = SuffixBounds::default();
    for k in start.max(1)..m {
        let keep: Vec<usize> = (m - k..m).collect();
        let sub_dist = PairwiseDistances::from_matrix(keep.iter().map(|&i| keep.iter().map(|&j| dist.get(i, j)).collect()).collect());
        let out = exact_with(&instance.subset(&keep), cat, backend, cfg, sub_dist, Some(&bounds))?;
        if out.certificate.is_optimal() {
            bounds.set(k, out.solution.objective as u32);
        }
    }
    Ok(bounds)
}

/// Exact distance from every input to a given center.
pub fn fixed_center_solve(
    instance: &Instance,
    center: &Triangulation,
    cat: &QuadCatalog,
    backend: &Backend,
    formulation: Formulation,
) -> Result<Solution, SolveError> {
    let seqs = instance.inputs.iter().map(|t| shortest_sequence(t, center, cat, backend, formulation)).collect::<Result<_, _>>()?;
    Ok(Solution::new(instance.name.clone(), center, seqs))
}

#[derive(Debug, Clone)]
pub struct SubsetOutcome {
    /// Solution of the full instance around the subset's center.
    pub solution: Solution,
    /// The exact run on the kept inputs.
    pub subset: ExactOutcome,
}

/// Solves the kept inputs exactly, then measures every input against the
/// center found.
pub fn subset_solve(
    instance: &Instance,
    keep: &[usize],
    cat: &QuadCatalog,
    backend: &Backend,
    cfg: &ExactConfig,
) -> Result<SubsetOutcome, SolveError> {
    assert!(!keep.is_empty(), "keep at least one input");
    let sub = instance.subset(keep);
    let subset = exact_solve(&sub, cat, backend, cfg)?;
    let center = instance.triangulation(subset.solution.center.iter().copied()).expect("decoded center is valid");
    let solution = fixed_center_solve(instance, &center, cat, backend, cfg.formulation)?;
    Ok(SubsetOutcome { solution, subset })
}

/// Grows an exact solution of the last `seed` inputs one input at a time,
/// walking from the suffix toward input 0. A new input starts at the least
/// distance its pairwise constraints allow; while the vector is
/// unsatisfiable, its smallest component (lowest index on ties) grows by
/// one.
pub fn extension_solve(
    instance: &Instance,
    seed: usize,
    cat: &QuadCatalog,
    backend: &Backend,
    cfg: &ExactConfig,
) -> Result<Solution, SolveError> {
    let m = instance.m();
    assert!((1..=m).contains(&seed), "seed size must be in 1..=m");
    let dist = pairwise_distances(instance, cat, backend, cfg.formulation)?;
    let mut keep: Vec<usize> = (m - seed..m).collect();
    let sub_dist = PairwiseDistances::from_matrix(keep.iter().map(|&i| keep.iter().map(|&j| dist.get(i, j)).collect()).collect());
    let first = exact_with(&instance.subset(&keep), cat, backend, cfg, sub_dist, None)?;
    if seed == m {
        return Ok(first.solution);
    }
    let mut d: Vec<u32> = first.vector;
    let full_reach = if cfg.pruned { ReachTable::compute(instance, cat) } else { ReachTable::unpruned(instance) };
    let mut last = first.solution;
    for j in (0..m - seed).rev() {
        let start = keep.iter().zip(&d).map(|(&i, &di)| dist.get(i, j).saturating_sub(di)).max().unwrap_or(0);
        keep.insert(0, j);
        d.insert(0, start);
        let sub = instance.subset(&keep);
        let reach = full_reach.subset(&keep);
        loop {
            let inp = EncodeInput { instance: &sub, catalog: cat, reach: &reach, distances: &d, fixed_center: None };
            let enc = encode(inp, cfg.formulation, cfg.pruned);
            if !enc.infeasible {
                if let Some(model) = decide(backend, &enc.formula)? {
                    last = decode_model(&enc, &model, &sub, cat).expect("decoded solution replays");
                    break;
                }
            }
            let (pos, _) = d.iter().enumerate().min_by_key(|&(p, &v)| (v, keep[p])).unwrap();
            d[pos] += 1;
        }
    }
    Ok(last)
}

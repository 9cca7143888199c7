//! Flip heuristics for instances beyond exact reach: crossing-reducing
//! parallel flips, sequence reversal and concatenation, and greedy center
//! candidates.

mod coloring;

pub use coloring::misra_gries_edge_coloring;

use std::collections::{BTreeMap, HashSet};

use crate::geometry::QuadCatalog;
use crate::instance::{Instance, Solution};
use crate::triangulation::{
    apply_parallel_flip, crossing_count, flip_status, Edge, FlipSequence, FlipStatus, ParallelFlip, Triangulation,
};

/// Default number of center candidates evaluated.
pub const DEFAULT_CANDIDATE_LIMIT: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HeuristicError {
    #[error("no flip reduces the {crossings} crossings with the target")]
    NoImprovingFlip { crossings: usize },
}

/// A flippable edge of `t`: the edge, the diagonal replacing it and its
/// two faces.
#[derive(Debug, Clone)]
struct Move {
    edge: Edge,
    result: Edge,
    faces: Vec<[u32; 3]>,
}

fn moves(t: &Triangulation, cat: &QuadCatalog) -> Vec<Move> {
    t.edges()
        .iter()
        .filter_map(|&e| match flip_status(t, e, cat) {
            FlipStatus::Flippable(q) => {
                Some(Move { edge: e, result: cat.get(q).flip_of(e).unwrap(), faces: t.faces_of(e) })
            }
            FlipStatus::Blocked(_) => None,
        })
        .collect()
}

/// Crossings removed by flipping `mv`, summed over `targets`. Crossing
/// counts are sums over single edges, so gains of independent flips add.
fn gain(mv: &Move, targets: &[&Triangulation]) -> i64 {
    targets.iter().map(|t| t.crossings_with(mv.edge) as i64 - t.crossings_with(mv.result) as i64).sum()
}

/// Adds moves with positive gain in order of decreasing gain (ties by
/// edge) while they share no face with an earlier choice.
fn greedy_fill(chosen: &mut Vec<Move>, candidates: Vec<(i64, Move)>) {
    let mut used: HashSet<[u32; 3]> = chosen.iter().flat_map(|m| m.faces.iter().copied()).collect();
    let mut candidates: Vec<(i64, Move)> = candidates.into_iter().filter(|(g, _)| *g > 0).collect();
    candidates.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.edge.cmp(&b.1.edge)));
    for (_, mv) in candidates {
        if chosen.iter().any(|c| c.edge == mv.edge) || mv.faces.iter().any(|f| used.contains(f)) {
            continue;
        }
        used.extend(mv.faces.iter().copied());
        chosen.push(mv);
    }
}

/// One round toward `target`. First the flips that create a target edge:
/// their faces form a graph of maximum degree three whose edge coloring
/// splits them into at most four independent classes; the largest class
/// is taken together with every flip that touches no other. Then any
/// remaining flip that lowers the crossing count is added greedily.
pub fn transform_step(t: &Triangulation, target: &Triangulation, cat: &QuadCatalog) -> Result<ParallelFlip, HeuristicError> {
    let all = moves(t, cat);
    let (direct, rest): (Vec<Move>, Vec<Move>) = all.into_iter().partition(|m| target.contains(m.result));

    let mut face_id: BTreeMap<[u32; 3], usize> = BTreeMap::new();
    let mut links = Vec::with_capacity(direct.len());
    for mv in &direct {
        let ids: Vec<usize> = mv.faces.iter().map(|f| {
            let next = face_id.len();
            *face_id.entry(*f).or_insert(next)
        }).collect();
        links.push((ids[0], ids[1]));
    }
    let mut chosen: Vec<Move> = Vec::new();
    if !direct.is_empty() {
        let colors = misra_gries_edge_coloring(face_id.len(), &links);
        let mut degree = vec![0usize; face_id.len()];
        for &(a, b) in &links {
            degree[a] += 1;
            degree[b] += 1;
        }
        let mut class_size: BTreeMap<usize, usize> = BTreeMap::new();
        for &c in &colors {
            *class_size.entry(c).or_default() += 1;
        }
        let best = class_size.iter().max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0))).map(|(&c, _)| c).unwrap();
        for (k, mv) in direct.iter().enumerate() {
            let (a, b) = links[k];
            if colors[k] == best || (degree[a] == 1 && degree[b] == 1) {
                chosen.push(mv.clone());
            }
        }
    }
    let targets = [target];
    let extra: Vec<(i64, Move)> = direct.into_iter().chain(rest).map(|m| (gain(&m, &targets), m)).collect();
    greedy_fill(&mut chosen, extra);
    if chosen.is_empty() {
        return Err(HeuristicError::NoImprovingFlip { crossings: crossing_count(t, target) });
    }
    Ok(ParallelFlip::new(chosen.into_iter().map(|m| m.edge)))
}

/// Repeats `transform_step` until `target` is reached. Every round lowers
/// the crossing count, so there are at most that many rounds.
pub fn transform(t: &Triangulation, target: &Triangulation, cat: &QuadCatalog) -> Result<FlipSequence, HeuristicError> {
    let mut cur = t.clone();
    let mut rounds = Vec::new();
    while cur != *target {
        let pf = transform_step(&cur, target, cat)?;
        cur = apply_parallel_flip(&cur, &pf, cat).expect("independent flippable edges");
        rounds.push(pf);
    }
    Ok(FlipSequence::new(rounds))
}

/// The sequence undoing `seq`: rounds in reverse order, each flipping the
/// diagonals the original round created.
pub fn reverse_sequence(seq: &FlipSequence, start: &Triangulation, cat: &QuadCatalog) -> FlipSequence {
    let trail = seq.trail(start, cat).expect("sequence is valid from start");
    let rounds = seq
        .rounds
        .iter()
        .enumerate()
        .rev()
        .map(|(k, round)| {
            ParallelFlip::new(round.iter().map(|&e| match flip_status(&trail[k], e, cat) {
                FlipStatus::Flippable(q) => cat.get(q).flip_of(e).unwrap(),
                FlipStatus::Blocked(_) => unreachable!("validated round"),
            }))
        })
        .collect();
    FlipSequence::new(rounds)
}

fn concat(mut a: FlipSequence, b: FlipSequence) -> FlipSequence {
    a.rounds.extend(b.rounds);
    a
}

/// Meets in the middle: for intermediate states `tau` of the forward
/// transform, walks `t -> tau` forward and `target -> tau` backward, and
/// keeps the shortest result. Without `budget_active` only the two ends
/// are tried.
pub fn best_concatenation(
    t: &Triangulation,
    target: &Triangulation,
    cat: &QuadCatalog,
    budget_active: bool,
) -> Result<FlipSequence, HeuristicError> {
    let forward = transform(t, target, cat)?;
    let trail = forward.trail(t, cat).expect("transform output replays");
    let ks: Vec<usize> = if budget_active { (0..trail.len()).collect() } else { vec![0, trail.len() - 1] };
    let mut best = forward.clone();
    for k in ks {
        let tau = &trail[k];
        let there = transform(t, tau, cat)?;
        let back = transform(target, tau, cat)?;
        let candidate = concat(there, reverse_sequence(&back, target, cat));
        if candidate.len() < best.len() {
            best = candidate;
        }
    }
    Ok(best)
}

/// A possible center, with where it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CenterCandidate {
    pub triangulation: Triangulation,
    /// The input the greedy walk started from.
    pub source: usize,
    /// Rounds of greedy flipping from that input.
    pub step: usize,
    pub total_crossings: u64,
}

fn total_crossings(t: &Triangulation, inputs: &[Triangulation]) -> u64 {
    inputs.iter().map(|x| crossing_count(t, x) as u64).sum()
}

/// From every input, flips greedily while the total crossing count with
/// all inputs drops, recording each state. The distinct states are sorted
/// by total crossings (ties by source, then step) and the first `limit`
/// returned.
pub fn generate_center_candidates(instance: &Instance, cat: &QuadCatalog, limit: usize) -> Vec<CenterCandidate> {
    let targets: Vec<&Triangulation> = instance.inputs.iter().collect();
    let mut seen: HashSet<Vec<Edge>> = HashSet::new();
    let mut out = Vec::new();
    for (source, start) in instance.inputs.iter().enumerate() {
        let mut cur = start.clone();
        let mut step = 0;
        loop {
            if seen.insert(cur.edges().to_vec()) {
                let total_crossings = total_crossings(&cur, &instance.inputs);
                out.push(CenterCandidate { triangulation: cur.clone(), source, step, total_crossings });
            }
            let mut chosen = Vec::new();
            greedy_fill(&mut chosen, moves(&cur, cat).into_iter().map(|m| (gain(&m, &targets), m)).collect());
            if chosen.is_empty() {
                break;
            }
            cur = apply_parallel_flip(&cur, &ParallelFlip::new(chosen.iter().map(|m| m.edge)), cat).expect("independent flips");
            step += 1;
        }
    }
    out.sort_by_key(|c| (c.total_crossings, c.source, c.step));
    out.truncate(limit);
    out
}

/// Tries the candidates in order. Each gets quick per-input sequences; if
/// their total is within `m` of the best so far, the full concatenation
/// search is run as well. Returns the best solution seen.
pub fn heuristic_solve(instance: &Instance, cat: &QuadCatalog, limit: usize) -> Result<Solution, HeuristicError> {
    let mut best: Option<Solution> = None;
    let m = instance.m();
    for cand in generate_center_candidates(instance, cat, limit.max(1)) {
        let center = &cand.triangulation;
        let quick: Vec<FlipSequence> =
            instance.inputs.iter().map(|t| best_concatenation(t, center, cat, false)).collect::<Result<_, _>>()?;
        let quick_total: usize = quick.iter().map(FlipSequence::len).sum();
        let current = best.as_ref().map_or(usize::MAX, |b| b.objective);
        let seqs = if quick_total <= current.saturating_add(m) {
            instance.inputs.iter().map(|t| best_concatenation(t, center, cat, true)).collect::<Result<_, _>>()?
        } else {
            quick
        };
        let sol = Solution::new(instance.name.clone(), center, seqs);
        if sol.objective < current {
            best = Some(sol);
        }
    }
    Ok(best.expect("at least one candidate"))
}

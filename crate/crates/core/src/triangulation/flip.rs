use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{Edge, Triangulation, TriangulationError};
use crate::geometry::{QuadCatalog, QuadId};

/// One round: a set of edges flipped simultaneously, named by the diagonal
/// they replace.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ParallelFlip(pub BTreeSet<Edge>);

impl ParallelFlip {
    pub fn new(edges: impl IntoIterator<Item = Edge>) -> Self {
        ParallelFlip(edges.into_iter().collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Edge> {
        self.0.iter()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FlipSequence {
    pub rounds: Vec<ParallelFlip>,
}

impl FlipSequence {
    pub fn new(rounds: Vec<ParallelFlip>) -> Self {
        FlipSequence { rounds }
    }

    pub fn len(&self) -> usize {
        self.rounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rounds.is_empty()
    }

    /// Replays the sequence, returning every intermediate triangulation
    /// starting with `start`.
    pub fn trail(&self, start: &Triangulation, cat: &QuadCatalog) -> Result<Vec<Triangulation>, SequenceViolation> {
        let mut out = vec![start.clone()];
        for (k, round) in self.rounds.iter().enumerate() {
            let next = apply_parallel_flip(out.last().unwrap(), round, cat).map_err(|e| SequenceViolation::from_error(k, e))?;
            out.push(next);
        }
        Ok(out)
    }
}

/// Why an edge cannot be flipped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FlipBlock {
    Absent,
    Hull,
    NonConvex,
}

impl fmt::Display for FlipBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FlipBlock::Absent => "edge is not present",
            FlipBlock::Hull => "edge lies on the convex hull",
            FlipBlock::NonConvex => "incident triangles form a non-convex quadrilateral",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlipStatus {
    Flippable(QuadId),
    Blocked(FlipBlock),
}

pub fn flip_status(t: &Triangulation, e: Edge, cat: &QuadCatalog) -> FlipStatus {
    let Some((l, r)) = t.wings(e) else {
        return FlipStatus::Blocked(FlipBlock::Absent);
    };
    let (Some(x), Some(y)) = (l, r) else {
        return FlipStatus::Blocked(FlipBlock::Hull);
    };
    cat.with_vertices([e.u, e.v, x, y])
        .iter()
        .copied()
        .find(|&id| {
            let q = cat.get(id);
            q.convex && q.has_diagonal(e)
        })
        .map_or(FlipStatus::Blocked(FlipBlock::NonConvex), FlipStatus::Flippable)
}

/// The convex quad formed by the two faces of `t` incident to `e`, if `e`
/// can be flipped.
pub fn flippable(t: &Triangulation, e: Edge, cat: &QuadCatalog) -> Result<Option<QuadId>, TriangulationError> {
    match flip_status(t, e, cat) {
        FlipStatus::Flippable(q) => Ok(Some(q)),
        FlipStatus::Blocked(FlipBlock::Absent) => Err(TriangulationError::EdgeNotPresent(e)),
        FlipStatus::Blocked(_) => Ok(None),
    }
}

/// Flips every edge of `pf` at once. No two flipped edges may share a face
/// of `t`.
pub fn apply_parallel_flip(t: &Triangulation, pf: &ParallelFlip, cat: &QuadCatalog) -> Result<Triangulation, TriangulationError> {
    if pf.is_empty() {
        return Err(TriangulationError::EmptyFlip);
    }
    let mut used: BTreeMap<[u32; 3], Edge> = BTreeMap::new();
    let mut replacement = Vec::with_capacity(pf.len());
    for &e in pf.iter() {
        let q = match flip_status(t, e, cat) {
            FlipStatus::Flippable(q) => q,
            FlipStatus::Blocked(reason) => return Err(TriangulationError::NotFlippable { edge: e, reason }),
        };
        for face in t.faces_of(e) {
            if let Some(&prev) = used.get(&face) {
                return Err(TriangulationError::SharedTriangle(prev, e));
            }
            used.insert(face, e);
        }
        replacement.push(cat.get(q).flip_of(e).expect("flippable edge is a diagonal of a convex quad"));
    }
    let mut edges: Vec<Edge> = t.edges().iter().copied().filter(|e| !pf.0.contains(e)).collect();
    edges.extend(replacement);
    edges.sort_unstable();
    Ok(Triangulation::from_sorted_unchecked(t.points().clone(), edges))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    EmptyRound,
    EdgeAbsent,
    HullFlip,
    NonConvexFlip,
    SharedTriangle,
    FinalMismatch,
}

/// Where and why a flip sequence is illegal.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("round {round}: {kind:?} at {edges:?}")]
pub struct SequenceViolation {
    pub round: usize,
    pub edges: Vec<Edge>,
    pub kind: ViolationKind,
}

impl SequenceViolation {
    fn from_error(round: usize, err: TriangulationError) -> Self {
        let (kind, edges) = match err {
            TriangulationError::EmptyFlip => (ViolationKind::EmptyRound, vec![]),
            TriangulationError::NotFlippable { edge, reason } => (
                match reason {
                    FlipBlock::Absent => ViolationKind::EdgeAbsent,
                    FlipBlock::Hull => ViolationKind::HullFlip,
                    FlipBlock::NonConvex => ViolationKind::NonConvexFlip,
                },
                vec![edge],
            ),
            TriangulationError::SharedTriangle(a, b) => (ViolationKind::SharedTriangle, vec![a, b]),
            TriangulationError::EdgeNotPresent(e) => (ViolationKind::EdgeAbsent, vec![e]),
            other => unreachable!("apply_parallel_flip does not raise {other:?}"),
        };
        SequenceViolation { round, edges, kind }
    }
}

/// Checks that `seq` turns `start` into `end` using legal rounds.
pub fn validate_sequence(
    start: &Triangulation,
    seq: &FlipSequence,
    end: &Triangulation,
    cat: &QuadCatalog,
) -> Result<(), SequenceViolation> {
    let trail = seq.trail(start, cat)?;
    let last = trail.last().unwrap();
    if last != end {
        let diff: Vec<Edge> = last.edges().iter().copied().filter(|&e| !end.contains(e)).collect();
        return Err(SequenceViolation { round: seq.len(), edges: diff, kind: ViolationKind::FinalMismatch });
    }
    Ok(())
}

use crate::geometry::QuadCatalog;
use crate::instance::{Instance, Solution};
use crate::triangulation::{validate_sequence, SequenceViolation, Triangulation, TriangulationError};

/// The first problem found in a solution.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolutionViolation {
    #[error("solution is for instance '{found}', not '{expected}'")]
    NameMismatch { expected: String, found: String },
    #[error("center is not a triangulation: {0}")]
    InvalidCenter(TriangulationError),
    #[error("{found} flip sequences for {expected} inputs")]
    SequenceCount { expected: usize, found: usize },
    #[error("input {input}: {violation}")]
    Sequence { input: usize, violation: SequenceViolation },
    #[error("objective is {claimed} but the sequences have {actual} rounds")]
    Objective { claimed: usize, actual: usize },
}

/// Checks that the center is a triangulation, that every sequence turns
/// its input into the center with legal rounds, and the objective sum.
pub fn validate_solution(instance: &Instance, solution: &Solution, cat: &QuadCatalog) -> Result<(), SolutionViolation> {
    if solution.instance_name != instance.name {
        return Err(SolutionViolation::NameMismatch { expected: instance.name.clone(), found: solution.instance_name.clone() });
    }
    let center = Triangulation::from_edges(instance.points.clone(), solution.center.iter().copied())
        .map_err(SolutionViolation::InvalidCenter)?;
    if solution.flip_sequences.len() != instance.m() {
        return Err(SolutionViolation::SequenceCount { expected: instance.m(), found: solution.flip_sequences.len() });
    }
    for (input, (t, seq)) in instance.inputs.iter().zip(&solution.flip_sequences).enumerate() {
        validate_sequence(t, seq, &center, cat).map_err(|violation| SolutionViolation::Sequence { input, violation })?;
    }
    let actual: usize = solution.flip_sequences.iter().map(|s| s.len()).sum();
    if actual != solution.objective {
        return Err(SolutionViolation::Objective { claimed: solution.objective, actual });
    }
    Ok(())
}

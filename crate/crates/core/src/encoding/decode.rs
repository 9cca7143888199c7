use std::collections::BTreeSet;

use super::Encoding;
use crate::geometry::QuadCatalog;
use crate::instance::{Instance, Solution};
use crate::triangulation::{validate_sequence, Edge, FlipSequence, ParallelFlip, Triangulation};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecodeError {
    #[error("the encoding was refuted while it was built; there is no model")]
    Infeasible,
    #[error("model has {got} values, formula needs {need}")]
    ModelSize { got: usize, need: usize },
    #[error("decoded solution is invalid: {0}")]
    DecodedSolutionInvalid(String),
}

/// Reads a center and per-input flip sequences off a model (indexed by
/// variable id, entry 0 unused). Round `s` flips the edges present after
/// `s` rounds but not after `s + 1`; rounds without flips are dropped. The
/// result is replayed and must reach the center.
pub fn decode_model(enc: &Encoding, model: &[bool], instance: &Instance, cat: &QuadCatalog) -> Result<Solution, DecodeError> {
    if enc.infeasible {
        return Err(DecodeError::Infeasible);
    }
    let need = enc.formula.num_vars as usize + 1;
    if model.len() < need {
        return Err(DecodeError::ModelSize { got: model.len(), need });
    }
    let invalid = |msg: String| DecodeError::DecodedSolutionInvalid(msg);
    let states: Vec<Vec<BTreeSet<Edge>>> = enc
        .states()
        .iter()
        .map(|steps| {
            steps.iter().map(|row| row.iter().filter(|(_, t)| t.eval(model)).map(|(e, _)| *e).collect()).collect()
        })
        .collect();
    let center_edges = states
        .first()
        .and_then(|s| s.last())
        .ok_or_else(|| invalid("instance has no inputs".into()))?;
    let center = Triangulation::from_edges(instance.points.clone(), center_edges.iter().copied())
        .map_err(|e| invalid(format!("center: {e}")))?;
    let mut sequences = Vec::with_capacity(states.len());
    for (i, steps) in states.iter().enumerate() {
        let rounds: Vec<ParallelFlip> = steps
            .windows(2)
            .map(|w| ParallelFlip::new(w[0].difference(&w[1]).copied()))
            .filter(|r| !r.is_empty())
            .collect();
        let seq = FlipSequence::new(rounds);
        validate_sequence(&instance.inputs[i], &seq, &center, cat).map_err(|v| invalid(format!("input {i}: {v}")))?;
        sequences.push(seq);
    }
    Ok(Solution::new(instance.name.clone(), &center, sequences))
}

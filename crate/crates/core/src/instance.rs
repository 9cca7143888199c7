//! The problem instance and its solution, shared by every solver.

use serde::{Deserialize, Serialize};
use std::sync::Arc;

use crate::geometry::{enumerate_quads, GeometryError, Grid, PointSet, QuadCatalog};
use crate::triangulation::{Edge, FlipSequence, Triangulation, TriangulationError};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum InstanceError {
    #[error("invalid point set: {0}")]
    Geometry(#[from] GeometryError),
    #[error("triangulation {index}: {source}")]
    Triangulation { index: usize, source: TriangulationError },
    #[error("an instance needs at least one triangulation")]
    NoTriangulations,
}

/// A point set with `m >= 1` triangulations of it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub name: String,
    pub points: Arc<PointSet>,
    pub inputs: Vec<Triangulation>,
}

impl Instance {
    pub fn new(name: impl Into<String>, points: Arc<PointSet>, inputs: Vec<Triangulation>) -> Result<Self, InstanceError> {
        if inputs.is_empty() {
            return Err(InstanceError::NoTriangulations);
        }
        Ok(Instance { name: name.into(), points, inputs })
    }

    /// Builds an instance from raw coordinates and edge lists, validating
    /// every triangulation.
    pub fn from_raw(name: impl Into<String>, coords: &[(i64, i64)], triangulations: &[Vec<Edge>]) -> Result<Self, InstanceError> {
        let points = Arc::new(PointSet::from_coords(coords)?);
        let inputs = triangulations
            .iter()
            .enumerate()
            .map(|(index, edges)| {
                Triangulation::from_edges(points.clone(), edges.iter().copied())
                    .map_err(|source| InstanceError::Triangulation { index, source })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(name, points, inputs)
    }

    pub fn m(&self) -> usize {
        self.inputs.len()
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn catalog(&self) -> QuadCatalog {
        enumerate_quads(&self.points, &Grid::build(&self.points))
    }

    /// The sub-instance made of the selected inputs, in the given order.
    pub fn subset(&self, keep: &[usize]) -> Instance {
        Instance {
            name: self.name.clone(),
            points: self.points.clone(),
            inputs: keep.iter().map(|&i| self.inputs[i].clone()).collect(),
        }
    }

    pub fn triangulation(&self, edges: impl IntoIterator<Item = Edge>) -> Result<Triangulation, TriangulationError> {
        Triangulation::from_edges(self.points.clone(), edges)
    }
}

/// A center plus one flip sequence per input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Solution {
    pub instance_name: String,
    pub center: Vec<Edge>,
    pub flip_sequences: Vec<FlipSequence>,
    pub objective: usize,
}

impl Solution {
    pub fn new(instance_name: impl Into<String>, center: &Triangulation, flip_sequences: Vec<FlipSequence>) -> Self {
        let objective = flip_sequences.iter().map(FlipSequence::len).sum();
        Solution { instance_name: instance_name.into(), center: center.edges().to_vec(), flip_sequences, objective }
    }

    pub fn distances(&self) -> Vec<usize> {
        self.flip_sequences.iter().map(FlipSequence::len).collect()
    }
}

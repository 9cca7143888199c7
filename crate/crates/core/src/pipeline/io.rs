use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::instance::{Instance, InstanceError, Solution};
use crate::triangulation::Edge;

#[derive(Debug, thiserror::Error)]
pub enum FileError {
    #[error("{path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("schema error: {0}")]
    Schema(String),
    #[error("validation error: {0}")]
    Validation(#[from] InstanceError),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    instance_name: String,
    points: Vec<[i64; 2]>,
    triangulations: Vec<Vec<Edge>>,
}

/// Reads the JSON instance format and validates every triangulation.
pub fn parse_instance(text: &str) -> Result<Instance, FileError> {
    let raw: InstanceFile = serde_json::from_str(text).map_err(|e| FileError::Schema(e.to_string()))?;
    let coords: Vec<(i64, i64)> = raw.points.iter().map(|&[x, y]| (x, y)).collect();
    Ok(Instance::from_raw(raw.instance_name, &coords, &raw.triangulations)?)
}

/// Canonical JSON for an instance: edges sorted, one line.
pub fn write_instance(instance: &Instance) -> String {
    let raw = InstanceFile {
        instance_name: instance.name.clone(),
        points: instance.points.points().iter().map(|p| [p.x, p.y]).collect(),
        triangulations: instance.inputs.iter().map(|t| t.edges().to_vec()).collect(),
    };
    let mut s = serde_json::to_string(&raw).expect("serializable");
    s.push('\n');
    s
}

/// Reads a solution file. Only the shape is checked here; use
/// `validate_solution` for the content.
pub fn parse_solution(text: &str) -> Result<Solution, FileError> {
    serde_json::from_str(text).map_err(|e| FileError::Schema(e.to_string()))
}

pub fn write_solution(solution: &Solution) -> String {
    let mut s = serde_json::to_string(solution).expect("serializable");
    s.push('\n');
    s
}

fn read(path: &Path) -> Result<String, FileError> {
    std::fs::read_to_string(path).map_err(|source| FileError::Read { path: path.display().to_string(), source })
}

pub fn read_instance(path: &Path) -> Result<Instance, FileError> {
    parse_instance(&read(path)?)
}

pub fn read_solution(path: &Path) -> Result<Solution, FileError> {
    parse_solution(&read(path)?)
}

/// An edge list given either as a bare JSON array or as the `center` of
/// a solution file.
pub fn parse_edge_list(text: &str) -> Result<Vec<Edge>, FileError> {
    if let Ok(edges) = serde_json::from_str::<Vec<Edge>>(text) {
        return Ok(edges);
    }
    parse_solution(text).map(|s| s.center)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::generate_instance;
    use crate::triangulation::TriangulationError;

    const SQUARE: &str = r#"{"instance_name":"sq","points":[[0,0],[1,0],[1,1],[0,1]],"triangulations":[[[0,1],[1,2],[2,3],[0,3],[0,2]]]}"#;

    #[test]
    fn square_file() {
        let inst = parse_instance(SQUARE).unwrap();
        assert_eq!((inst.n(), inst.m()), (4, 1));
        assert_eq!(parse_instance(&write_instance(&inst)).unwrap(), inst);
    }

    #[test]
    fn crossing_edges_name_the_triangulation() {
        let bad = r#"{"instance_name":"sq","points":[[0,0],[1,0],[1,1],[0,1]],
            "triangulations":[[[0,1],[1,2],[2,3],[0,3],[0,2]],[[0,1],[1,2],[2,3],[0,3],[0,2],[1,3]]]}"#;
        match parse_instance(bad) {
            Err(FileError::Validation(InstanceError::Triangulation { index: 1, source })) => {
                assert!(matches!(source, TriangulationError::CrossingEdges(..)));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_instance("{\"points\": 3}"), Err(FileError::Schema(_))));
    }

    #[test]
    fn generated_round_trip() {
        for seed in 0..20 {
            let inst = generate_instance(9, 3, seed);
            let text = write_instance(&inst);
            assert_eq!(write_instance(&parse_instance(&text).unwrap()), text);
        }
    }

    #[test]
    fn edge_lists() {
        assert_eq!(parse_edge_list("[[2,0],[1,3]]").unwrap(), vec![Edge::new(0, 2), Edge::new(1, 3)]);
        let sol = r#"{"instance_name":"x","center":[[0,1]],"flip_sequences":[],"objective":0}"#;
        assert_eq!(parse_edge_list(sol).unwrap(), vec![Edge::new(0, 1)]);
    }
}

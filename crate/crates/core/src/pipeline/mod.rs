//! File formats, the solution validator, rendering, instance generation and
//! the solve strategies built on the other modules.

mod config;
mod generate;
mod io;
mod render;
mod solve;
mod validate;

pub use config::{Config, ConfigError, Strategy};
pub use generate::generate_instance;
pub use io::{parse_edge_list, parse_instance, parse_solution, read_instance, read_solution, write_instance, write_solution, FileError};
pub use render::{render_solution_pages, render_svg};
pub use solve::{
    exact_solve, extension_solve, fixed_center_solve, subset_solve, suffix_bounds, Certificate, ExactConfig, ExactOutcome, SubsetOutcome,
};
pub use validate::{validate_solution, SolutionViolation};

use crate::geometry::QuadCatalog;
use crate::heuristics::{generate_center_candidates, heuristic_solve, HeuristicError};
use crate::instance::{Instance, Solution};
use crate::satbackend::SolveError;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Heuristic(#[from] HeuristicError),
    #[error("invalid settings: {0}")]
    Settings(String),
    #[error(transparent)]
    File(#[from] FileError),
}

/// A solution plus what the strategy can say about it.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub solution: Solution,
    /// Present for the exact strategy.
    pub certificate: Option<Certificate>,
}

/// Runs the strategy selected in `cfg`.
pub fn run_strategy(instance: &Instance, cat: &QuadCatalog, cfg: &Config) -> Result<RunOutcome, RunError> {
    let backend = cfg.backend();
    let exact = cfg.exact();
    let plain = |solution| RunOutcome { solution, certificate: None };
    Ok(match cfg.strategy {
        config::Strategy::Exact => {
            let out = exact_solve(instance, cat, &backend, &exact)?;
            RunOutcome { solution: out.solution, certificate: Some(out.certificate) }
        }
        config::Strategy::Heuristic => plain(heuristic_solve(instance, cat, cfg.limit)?),
        config::Strategy::FixedCenter => {
            let center = match &cfg.center {
                Some(path) => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|source| FileError::Read { path: path.display().to_string(), source })?;
                    let edges = parse_edge_list(&text)?;
                    instance.triangulation(edges).map_err(|e| RunError::Settings(format!("center: {e}")))?
                }
                None => generate_center_candidates(instance, cat, 1).remove(0).triangulation,
            };
            plain(fixed_center_solve(instance, &center, cat, &backend, exact.formulation)?)
        }
        config::Strategy::Subset => {
            let keep = cfg.keep.clone().ok_or_else(|| RunError::Settings("subset needs keep".into()))?;
            if keep.is_empty() || keep.iter().any(|&i| i >= instance.m()) {
                return Err(RunError::Settings(format!("keep must list input indices below {}", instance.m())));
            }
            plain(subset_solve(instance, &keep, cat, &backend, &exact)?.solution)
        }
        config::Strategy::Extension => {
            let seed = cfg.seed_suffix.unwrap_or(instance.m().min(10));
            if seed == 0 || seed > instance.m() {
                return Err(RunError::Settings(format!("seed_suffix must be in 1..={}", instance.m())));
            }
            plain(extension_solve(instance, seed, cat, &backend, &exact)?)
        }
    })
}

#[cfg(test)]
mod tests;

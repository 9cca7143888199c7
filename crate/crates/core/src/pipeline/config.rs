use std::path::PathBuf;
use std::str::FromStr;
use std::time::Duration;

use crate::encoding::Formulation;
use crate::heuristics::DEFAULT_CANDIDATE_LIMIT;
use crate::satbackend::{Backend, Budget, ExternalSolver};

use super::ExactConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    Exact,
    Heuristic,
    FixedCenter,
    Subset,
    Extension,
}

impl FromStr for Strategy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "exact" => Strategy::Exact,
            "heuristic" => Strategy::Heuristic,
            "fixed-center" => Strategy::FixedCenter,
            "subset" => Strategy::Subset,
            "extension" => Strategy::Extension,
            _ => return Err(format!("unknown strategy '{s}'")),
        })
    }
}

/// Every solver setting, readable from a `key = value` file.
///
/// Lines are `key = value`; blank lines and lines starting with `#` are
/// ignored. Keys: `strategy`, `formulation` (xor, cnf, auto), `solver_cmd`,
/// `solver_xor`, `timeout` (seconds), `max_conflicts`, `limit`, `seed`,
/// `pruning`, `suffix_start` (0 disables), `prefix_depths`, `keep`,
/// `seed_suffix`, `center`.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub strategy: Strategy,
    /// `None` picks by backend: parity constraints for XOR-capable external
    /// solvers, plain CNF otherwise.
    pub formulation: Option<Formulation>,
    pub solver_cmd: Option<String>,
    pub solver_xor: bool,
    pub timeout: Option<f64>,
    pub max_conflicts: Option<u64>,
    pub limit: usize,
    pub seed: u64,
    pub pruning: bool,
    pub suffix_start: Option<usize>,
    pub prefix_depths: Vec<usize>,
    pub keep: Option<Vec<usize>>,
    pub seed_suffix: Option<usize>,
    pub center: Option<PathBuf>,
}

impl Default for Config {
    fn default() -> Self {
        let exact = ExactConfig::default();
        Config {
            strategy: Strategy::default(),
            formulation: None,
            solver_cmd: None,
            solver_xor: false,
            timeout: None,
            max_conflicts: None,
            limit: DEFAULT_CANDIDATE_LIMIT,
            seed: 0,
            pruning: exact.pruned,
            suffix_start: exact.suffix_start,
            prefix_depths: exact.prefix_depths,
            keep: None,
            seed_suffix: None,
            center: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("config line {line}: {msg}")]
pub struct ConfigError {
    pub line: usize,
    pub msg: String,
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, String> {
    value.parse().map_err(|_| format!("bad value '{value}' for {key}"))
}

fn parse_list(key: &str, value: &str) -> Result<Vec<usize>, String> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty()).map(|s| parse(key, s)).collect()
}

fn parse_bool(key: &str, value: &str) -> Result<bool, String> {
    match value {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(format!("bad value '{value}' for {key}")),
    }
}

impl Config {
    /// Applies one setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let value = value.trim();
        match key.trim().replace('-', "_").as_str() {
            "strategy" => self.strategy = value.parse()?,
            "formulation" => self.formulation = if value == "auto" { None } else { Some(value.parse()?) },
            "solver_cmd" => self.solver_cmd = (!value.is_empty()).then(|| value.to_string()),
            "solver_xor" => self.solver_xor = parse_bool(key, value)?,
            "timeout" => self.timeout = Some(parse::<f64>(key, value)?).filter(|t| *t > 0.0),
            "max_conflicts" => self.max_conflicts = Some(parse(key, value)?),
            "limit" => self.limit = parse(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            "pruning" => self.pruning = parse_bool(key, value)?,
            "suffix_start" => self.suffix_start = Some(parse::<usize>(key, value)?).filter(|&s| s > 0),
            "prefix_depths" => self.prefix_depths = parse_list(key, value)?,
            "keep" => self.keep = Some(parse_list(key, value)?),
            "seed_suffix" => self.seed_suffix = Some(parse(key, value)?),
            "center" => self.center = Some(PathBuf::from(value)),
            other => return Err(format!("unknown key '{other}'")),
        }
        Ok(())
    }

    /// Applies every line of a config file on top of `self`.
    pub fn merge_str(&mut self, text: &str) -> Result<(), ConfigError> {
        for (k, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: String| ConfigError { line: k + 1, msg };
            let (key, value) = line.split_once('=').ok_or_else(|| err("expected key = value".into()))?;
            self.set(key, value).map_err(err)?;
        }
        Ok(())
    }

    pub fn backend(&self) -> Backend {
        let timeout = self.timeout.map(Duration::from_secs_f64);
        match &self.solver_cmd {
            Some(cmd) => Backend::External(ExternalSolver { command: cmd.clone(), with_xor: self.solver_xor, timeout }),
            None => Backend::Internal { budget: Budget { max_conflicts: self.max_conflicts, max_time: timeout }, seed: self.seed },
        }
    }

    pub fn formulation(&self) -> Formulation {
        self.formulation.unwrap_or(if self.solver_cmd.is_some() && self.solver_xor { Formulation::Xor } else { Formulation::Cnf })
    }

    pub fn exact(&self) -> ExactConfig {
        ExactConfig {
            formulation: self.formulation(),
            pruned: self.pruning,
            suffix_start: self.suffix_start,
            prefix_depths: self.prefix_depths.clone(),
            ..ExactConfig::default()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_round() {
        let mut c = Config::default();
        c.merge_str("# comment\nstrategy = heuristic\nformulation=xor\n\nlimit = 5\nprefix_depths = 3, 4\nsolver-cmd = kissat -q\nsolver_xor = yes\n").unwrap();
        assert_eq!(c.strategy, Strategy::Heuristic);
        assert_eq!(c.formulation(), Formulation::Xor);
        assert_eq!(c.limit, 5);
        assert_eq!(c.prefix_depths, vec![3, 4]);
        assert!(c.backend().supports_xor());
        let err = Config::default().merge_str("a = 1\n").unwrap_err();
        assert_eq!(err.line, 1);
        assert!(Config::default().merge_str("limit 3").is_err());
    }

    #[test]
    fn auto_formulation() {
        let mut c = Config::default();
        assert_eq!(c.formulation(), Formulation::Cnf);
        c.set("solver_cmd", "cms").unwrap();
        c.set("solver_xor", "true").unwrap();
        assert_eq!(c.formulation(), Formulation::Xor);
        c.set("formulation", "cnf").unwrap();
        assert_eq!(c.formulation(), Formulation::Cnf);
    }
}

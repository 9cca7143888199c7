//! Driving an external DIMACS solver through a temp file.

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use sha2::{Digest, Sha256};

use super::{verify_model, SatError, SatResult, UnknownReason};
use crate::encoding::{emit_dimacs, xor_to_cnf, CnfFormula};

/// Directory for formula files; defaults to the system temp dir.
pub const CACHE_DIR_ENV: &str = "FLIPCENTER_CACHE_DIR";
/// When set (to anything), formula files are kept after solving.
pub const KEEP_FILES_ENV: &str = "FLIPCENTER_KEEP_FILES";

/// An external solver invocation. `command` is split on whitespace; a `{}`
/// argument is replaced by the formula path, otherwise the path is
/// appended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExternalSolver {
    pub command: String,
    pub with_xor: bool,
    pub timeout: Option<Duration>,
}

impl ExternalSolver {
    pub fn new(command: impl Into<String>) -> Self {
        ExternalSolver { command: command.into(), with_xor: false, timeout: None }
    }
}

pub fn cache_dir() -> PathBuf {
    std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from).unwrap_or_else(std::env::temp_dir)
}

fn io(e: std::io::Error) -> SatError {
    SatError::Io(e.to_string())
}

fn failure(msg: impl Into<String>) -> SatResult {
    SatResult::Unknown(UnknownReason::ExternalFailure(msg.into()))
}

/// Writes `f` as DIMACS (with `x` lines when the solver takes them,
/// lowered otherwise), runs the solver and reads back its verdict. A
/// crash, unexpected output or timeout is reported as unknown; a model
/// that violates `f` is an error.
pub fn solve_external(solver: &ExternalSolver, f: &CnfFormula) -> Result<SatResult, SatError> {
    let text = if solver.with_xor || f.xors.is_empty() {
        emit_dimacs(f, solver.with_xor)
    } else {
        emit_dimacs(&xor_to_cnf(f), false)
    }
    .map_err(|e| SatError::MalformedFormula(e.to_string()))?;

    let dir = cache_dir();
    std::fs::create_dir_all(&dir).map_err(io)?;
    let digest = Sha256::digest(text.as_bytes());
    let name: String = digest.iter().take(12).map(|b| format!("{b:02x}")).collect();
    let ext = if solver.with_xor { "xnf" } else { "cnf" };
    let path = dir.join(format!("flipcenter-{name}.{ext}"));
    std::fs::write(&path, &text).map_err(io)?;

    let outcome = run(solver, &path);
    if std::env::var_os(KEEP_FILES_ENV).is_none() {
        let _ = std::fs::remove_file(&path);
    }
    let (status, stdout) = match outcome? {
        Ok(x) => x,
        Err(unknown) => return Ok(unknown),
    };
    let result = parse_output(&stdout, status, f.num_vars);
    if let SatResult::Sat(model) = &result {
        if !verify_model(f, model) {
            return Err(SatError::ModelVerificationFailed);
        }
    }
    Ok(result)
}

type RunOutcome = Result<(Option<i32>, String), SatResult>;

fn run(solver: &ExternalSolver, path: &Path) -> Result<RunOutcome, SatError> {
    let mut parts: Vec<String> = solver.command.split_whitespace().map(str::to_string).collect();
    if parts.is_empty() {
        return Ok(Err(failure("empty solver command")));
    }
    let path_str = path.to_string_lossy().into_owned();
    if parts.iter().any(|p| p == "{}") {
        for p in parts.iter_mut().filter(|p| *p == "{}") {
            *p = path_str.clone();
        }
    } else {
        parts.push(path_str);
    }
    let mut child = match Command::new(&parts[0]).args(&parts[1..]).stdin(Stdio::null()).stdout(Stdio::piped()).stderr(Stdio::null()).spawn() {
        Ok(c) => c,
        Err(e) => return Ok(Err(failure(format!("cannot start {}: {e}", parts[0])))),
    };
    let mut stdout = child.stdout.take().expect("piped stdout");
    let reader = std::thread::spawn(move || {
        let mut s = String::new();
        stdout.read_to_string(&mut s).map(|_| s)
    });
    let start = Instant::now();
    let status = loop {
        if let Some(st) = child.try_wait().map_err(io)? {
            break st;
        }
        if solver.timeout.is_some_and(|t| start.elapsed() >= t) {
            let _ = child.kill();
            let _ = child.wait();
            let _ = reader.join();
            return Ok(Err(SatResult::Unknown(UnknownReason::Timeout)));
        }
        std::thread::sleep(Duration::from_millis(5));
    };
    let out = reader.join().map_err(|_| SatError::Io("stdout reader panicked".into()))?.map_err(io)?;
    Ok(Ok((status.code(), out)))
}

/// Reads `s` and `v` lines. Exit codes 10 and 20 decide the verdict when
/// no `s` line is printed.
fn parse_output(stdout: &str, code: Option<i32>, num_vars: u32) -> SatResult {
    let mut verdict: Option<bool> = None;
    let mut model = vec![false; num_vars as usize + 1];
    let mut saw_values = false;
    for line in stdout.lines() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix("s ") {
            verdict = match rest.trim() {
                "SATISFIABLE" => Some(true),
                "UNSATISFIABLE" => Some(false),
                "UNKNOWN" => return failure("solver reported UNKNOWN"),
                other => return failure(format!("unexpected status line: {other}")),
            };
        } else if let Some(rest) = line.strip_prefix("v ").or_else(|| (line == "v").then_some("")) {
            saw_values = true;
            for tok in rest.split_whitespace() {
                let Ok(l) = tok.parse::<i64>() else {
                    return failure(format!("bad value token: {tok}"));
                };
                if let Some(slot) = model.get_mut(l.unsigned_abs() as usize).filter(|_| l != 0) {
                    *slot = l > 0;
                }
            }
        }
    }
    let verdict = verdict.or(match code {
        Some(10) => Some(true),
        Some(20) => Some(false),
        _ => None,
    });
    match (verdict, code) {
        (Some(_), Some(c)) if c != 0 && c != 10 && c != 20 => failure(format!("exit status {c}")),
        (Some(true), _) if !saw_values && num_vars > 0 => failure("SAT without a model"),
        (Some(true), _) => SatResult::Sat(model),
        (Some(false), _) => SatResult::Unsat,
        (None, c) => failure(format!("no verdict (exit status {c:?})")),
    }
}

//! Deciding CNF formulas: a built-in CDCL solver and a driver for external
//! DIMACS solvers. Every satisfying assignment is re-checked before it is
//! returned.

mod cdcl;
mod external;

pub use external::{cache_dir, solve_external, ExternalSolver, CACHE_DIR_ENV, KEEP_FILES_ENV};

use std::time::Duration;

use crate::encoding::{xor_to_cnf, CnfFormula};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UnknownReason {
    Timeout,
    ConflictBudget,
    Memory,
    ExternalFailure(String),
}

/// Solver verdict. A model is indexed by variable id; entry 0 is unused.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SatResult {
    Sat(Vec<bool>),
    Unsat,
    Unknown(UnknownReason),
}

impl SatResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatResult::Sat(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SatError {
    #[error("malformed formula: {0}")]
    MalformedFormula(String),
    #[error("solver returned an assignment that violates the formula")]
    ModelVerificationFailed,
    #[error("i/o error: {0}")]
    Io(String),
}

/// Failure to reach a verdict, as seen by callers that need one.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("solver gave up: {0:?}")]
    Unknown(UnknownReason),
    #[error(transparent)]
    Backend(#[from] SatError),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Budget {
    pub max_conflicts: Option<u64>,
    pub max_time: Option<Duration>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }
}

/// True iff every clause has a true literal and every parity constraint
/// holds. Variables beyond the model's length read as false.
pub fn verify_model(f: &CnfFormula, model: &[bool]) -> bool {
    let val = |l: i32| model.get(l.unsigned_abs() as usize).copied().unwrap_or(false) == (l > 0);
    f.clauses.iter().all(|c| c.iter().any(|&l| val(l)))
        && f.xors.iter().all(|x| x.lits.iter().fold(false, |acc, &l| acc ^ val(l)) == x.parity)
}

/// Runs the built-in solver. Parity constraints must already be lowered.
pub fn solve_internal(f: &CnfFormula, budget: &Budget, seed: u64) -> Result<SatResult, SatError> {
    let mut solver = cdcl::Solver::new(f, seed)?;
    Ok(solver.solve(budget))
}

/// Where formulas get solved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Backend {
    Internal { budget: Budget, seed: u64 },
    External(ExternalSolver),
}

impl Default for Backend {
    fn default() -> Self {
        Backend::Internal { budget: Budget::unlimited(), seed: 0 }
    }
}

impl Backend {
    /// Whether the backend reads parity constraints natively.
    pub fn supports_xor(&self) -> bool {
        matches!(self, Backend::External(x) if x.with_xor)
    }

    /// Solves `f`, lowering parity constraints when the backend needs it.
    /// Satisfying assignments are restricted to the variables of `f` and
    /// verified against it.
    pub fn solve(&self, f: &CnfFormula) -> Result<SatResult, SatError> {
        let result = match self {
            Backend::Internal { budget, seed } => {
                if f.xors.is_empty() {
                    solve_internal(f, budget, *seed)?
                } else {
                    solve_internal(&xor_to_cnf(f), budget, *seed)?
                }
            }
            Backend::External(x) => solve_external(x, f)?,
        };
        match result {
            SatResult::Sat(mut model) => {
                model.resize(f.num_vars as usize + 1, false);
                if !verify_model(f, &model) {
                    return Err(SatError::ModelVerificationFailed);
                }
                Ok(SatResult::Sat(model))
            }
            other => Ok(other),
        }
    }
}

/// `Some(model)` when satisfiable, `None` when not.
pub fn decide(backend: &Backend, f: &CnfFormula) -> Result<Option<Vec<bool>>, SolveError> {
    match backend.solve(f)? {
        SatResult::Sat(model) => Ok(Some(model)),
        SatResult::Unsat => Ok(None),
        SatResult::Unknown(r) => Err(SolveError::Unknown(r)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::XorConstraint;
    use proptest::prelude::*;

    fn cnf(num_vars: u32, clauses: &[&[i32]]) -> CnfFormula {
        CnfFormula { num_vars, clauses: clauses.iter().map(|c| c.to_vec()).collect(), xors: vec![] }
    }

    fn brute_force(f: &CnfFormula) -> bool {
        (0u64..(1 << f.num_vars)).any(|mask| {
            let model: Vec<bool> = (0..=f.num_vars).map(|v| v > 0 && mask >> (v - 1) & 1 == 1).collect();
            verify_model(f, &model)
        })
    }

    #[test]
    fn trivial_verdicts() {
        let unsat = cnf(1, &[&[1], &[-1]]);
        assert_eq!(solve_internal(&unsat, &Budget::unlimited(), 0).unwrap(), SatResult::Unsat);
        let sat = cnf(2, &[&[1, 2], &[-1, 2]]);
        match solve_internal(&sat, &Budget::unlimited(), 0).unwrap() {
            SatResult::Sat(m) => assert!(m[2]),
            other => panic!("{other:?}"),
        }
        assert_eq!(solve_internal(&cnf(0, &[]), &Budget::unlimited(), 0).unwrap(), SatResult::Sat(vec![false]));
        assert_eq!(solve_internal(&cnf(1, &[&[]]), &Budget::unlimited(), 0).unwrap(), SatResult::Unsat);
    }

    #[test]
    fn malformed_literal() {
        assert!(matches!(solve_internal(&cnf(1, &[&[2]]), &Budget::unlimited(), 0), Err(SatError::MalformedFormula(_))));
    }

    #[test]
    fn verify_cases() {
        assert!(verify_model(&CnfFormula::default(), &[false]));
        assert!(!verify_model(&cnf(1, &[&[1]]), &[false, false]));
        let x = CnfFormula { num_vars: 2, clauses: vec![], xors: vec![XorConstraint { lits: vec![1, 2], parity: true }] };
        assert!(verify_model(&x, &[false, true, false]));
        assert!(!verify_model(&x, &[false, true, true]));
    }

    #[test]
    fn backend_lowers_parity() {
        let x = CnfFormula {
            num_vars: 4,
            clauses: vec![vec![1], vec![2]],
            xors: vec![XorConstraint { lits: vec![1, 2, 3, 4], parity: true }],
        };
        match Backend::default().solve(&x).unwrap() {
            SatResult::Sat(m) => {
                assert_eq!(m.len(), 5);
                assert!(m[3] ^ m[4]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn pigeonhole_is_unsat() {
        // 6 pigeons, 5 holes
        let (p, h) = (6, 5);
        let v = |i: i32, j: i32| i * h + j + 1;
        let mut clauses: Vec<Vec<i32>> = (0..p).map(|i| (0..h).map(|j| v(i, j)).collect()).collect();
        for j in 0..h {
            for a in 0..p {
                for b in a + 1..p {
                    clauses.push(vec![-v(a, j), -v(b, j)]);
                }
            }
        }
        let f = CnfFormula { num_vars: (p * h) as u32, clauses, xors: vec![] };
        assert_eq!(solve_internal(&f, &Budget::unlimited(), 7).unwrap(), SatResult::Unsat);
        let tight = Budget { max_conflicts: Some(3), max_time: None };
        assert_eq!(solve_internal(&f, &tight, 7).unwrap(), SatResult::Unknown(UnknownReason::ConflictBudget));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]
        #[test]
        fn agrees_with_brute_force(
            n in 1u32..=12,
            raw in proptest::collection::vec(proptest::collection::vec((1u32..=12, any::<bool>()), 1..=3), 0..60),
            seed in 0u64..4,
        ) {
            let clauses: Vec<Vec<i32>> = raw.into_iter()
                .map(|c| c.into_iter().map(|(v, s)| { let v = ((v - 1) % n + 1) as i32; if s { v } else { -v } }).collect())
                .collect();
            let f = CnfFormula { num_vars: n, clauses, xors: vec![] };
            let r = solve_internal(&f, &Budget::unlimited(), seed).unwrap();
            match &r {
                SatResult::Sat(m) => prop_assert!(verify_model(&f, m)),
                SatResult::Unsat => {}
                SatResult::Unknown(_) => prop_assert!(false, "unlimited budget gave unknown"),
            }
            prop_assert_eq!(r.is_sat(), brute_force(&f));
            prop_assert_eq!(solve_internal(&f, &Budget::unlimited(), seed).unwrap(), r);
        }
    }
}

use std::fmt::Write as _;

/// Parity constraint: the XOR of `lits` equals `parity`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct XorConstraint {
    pub lits: Vec<i32>,
    pub parity: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CnfFormula {
    pub num_vars: u32,
    pub clauses: Vec<Vec<i32>>,
    pub xors: Vec<XorConstraint>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormulaError {
    #[error("formula has parity constraints; lower them to CNF first")]
    RequiresLowering,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl CnfFormula {
    pub fn new(num_vars: u32) -> Self {
        CnfFormula { num_vars, ..Default::default() }
    }

    pub fn max_var(&self) -> u32 {
        self.clauses
            .iter()
            .flatten()
            .chain(self.xors.iter().flat_map(|x| x.lits.iter()))
            .map(|l| l.unsigned_abs())
            .max()
            .unwrap_or(0)
    }
}

fn push_parity_clauses(out: &mut Vec<Vec<i32>>, lits: &[i32], parity: bool) {
    let w = lits.len();
    for mask in 0u32..(1 << w) {
        // mask bit k set: lits[k] assigned true in the excluded assignment
        if (mask.count_ones() % 2 == 1) != parity {
            out.push((0..w).map(|k| if mask >> k & 1 == 1 { -lits[k] } else { lits[k] }).collect());
        }
    }
}

/// Replaces every parity constraint by plain clauses. Width `w >= 3` uses
/// a chain of `w - 3` fresh variables and `4(w - 2)` clauses; the models
/// restricted to the original variables are unchanged.
pub fn xor_to_cnf(f: &CnfFormula) -> CnfFormula {
    let mut out = CnfFormula { num_vars: f.num_vars, clauses: f.clauses.clone(), xors: Vec::new() };
    for x in &f.xors {
        let l = &x.lits;
        match l.len() {
            0 => {
                if x.parity {
                    out.clauses.push(Vec::new());
                }
            }
            1 => out.clauses.push(vec![if x.parity { l[0] } else { -l[0] }]),
            2 | 3 => push_parity_clauses(&mut out.clauses, l, x.parity),
            w => {
                let mut acc = l[0];
                for &next in &l[1..w - 2] {
                    out.num_vars += 1;
                    let t = out.num_vars as i32;
                    push_parity_clauses(&mut out.clauses, &[acc, next, t], false);
                    acc = t;
                }
                push_parity_clauses(&mut out.clauses, &[acc, l[w - 2], l[w - 1]], x.parity);
            }
        }
    }
    out
}

/// DIMACS text. Parity constraints become `x` lines in which the listed
/// literals XOR to true; a constraint with even parity has its first
/// literal negated.
pub fn emit_dimacs(f: &CnfFormula, with_xor: bool) -> Result<String, FormulaError> {
    if !with_xor && !f.xors.is_empty() {
        return Err(FormulaError::RequiresLowering);
    }
    let mut s = String::new();
    let _ = writeln!(s, "p cnf {} {}", f.num_vars, f.clauses.len() + f.xors.len());
    for c in &f.clauses {
        for l in c {
            let _ = write!(s, "{l} ");
        }
        s.push_str("0\n");
    }
    for x in &f.xors {
        s.push('x');
        for (k, l) in x.lits.iter().enumerate() {
            let l = if k == 0 && !x.parity { -l } else { *l };
            let _ = write!(s, " {l}");
        }
        s.push_str(" 0\n");
    }
    Ok(s)
}

/// Parses DIMACS CNF with optional `x` parity lines. Parity literals are
/// normalized to positive variables.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, FormulaError> {
    let err = |line: usize, msg: &str| FormulaError::Parse { line, msg: msg.to_string() };
    let mut header: Option<(u32, usize)> = None;
    let mut f = CnfFormula::default();
    let mut pending: Vec<i32> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            let parts: Vec<&str> = rest.split_ascii_whitespace().collect();
            if header.is_some() || parts.len() != 3 || parts[0] != "cnf" {
                return Err(err(line_no, "bad problem line"));
            }
            let v = parts[1].parse().map_err(|_| err(line_no, "bad variable count"))?;
            let c = parts[2].parse().map_err(|_| err(line_no, "bad clause count"))?;
            header = Some((v, c));
            f.num_vars = v;
            continue;
        }
        if header.is_none() {
            return Err(err(line_no, "clause before problem line"));
        }
        if let Some(rest) = line.strip_prefix('x') {
            if !pending.is_empty() {
                return Err(err(line_no, "parity line inside an open clause"));
            }
            let mut parity = true;
            let mut lits = Vec::new();
            let mut closed = false;
            for tok in rest.split_ascii_whitespace() {
                let l: i32 = tok.parse().map_err(|_| err(line_no, "bad literal"))?;
                if l == 0 {
                    closed = true;
                    break;
                }
                if l < 0 {
                    parity = !parity;
                }
                lits.push(l.abs());
            }
            if !closed {
                return Err(err(line_no, "parity line not terminated by 0"));
            }
            f.xors.push(XorConstraint { lits, parity });
            continue;
        }
        for tok in line.split_ascii_whitespace() {
            let l: i32 = tok.parse().map_err(|_| err(line_no, "bad literal"))?;
            if l == 0 {
                f.clauses.push(std::mem::take(&mut pending));
            } else {
                pending.push(l);
            }
        }
    }
    let (_, count) = header.ok_or_else(|| err(0, "missing problem line"))?;
    if !pending.is_empty() {
        return Err(err(text.lines().count(), "last clause not terminated by 0"));
    }
    if f.clauses.len() + f.xors.len() != count {
        return Err(err(0, "clause count does not match the problem line"));
    }
    if f.max_var() > f.num_vars {
        return Err(err(0, "literal exceeds the declared variable count"));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn satisfies_clauses(clauses: &[Vec<i32>], a: &[bool]) -> bool {
        clauses.iter().all(|c| c.iter().any(|&l| a[l.unsigned_abs() as usize] == (l > 0)))
    }

    #[test]
    fn dimacs_text() {
        let f = CnfFormula { num_vars: 2, clauses: vec![vec![1, -2]], xors: vec![] };
        assert_eq!(emit_dimacs(&f, false).unwrap(), "p cnf 2 1\n1 -2 0\n");
        let g = CnfFormula { num_vars: 2, clauses: vec![], xors: vec![XorConstraint { lits: vec![1, 2], parity: true }] };
        assert_eq!(emit_dimacs(&g, true).unwrap(), "p cnf 2 1\nx 1 2 0\n");
        assert_eq!(emit_dimacs(&g, false), Err(FormulaError::RequiresLowering));
        let h = CnfFormula { num_vars: 2, clauses: vec![], xors: vec![XorConstraint { lits: vec![1, 2], parity: false }] };
        assert_eq!(emit_dimacs(&h, true).unwrap(), "p cnf 2 1\nx -1 2 0\n");
        assert_eq!(parse_dimacs("p cnf 2 1\nx -1 2 0\n").unwrap(), h);
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_dimacs("1 2 0\n").is_err());
        assert!(parse_dimacs("p cnf 1 1\n1 2 0\n").is_err());
        assert!(parse_dimacs("p cnf 2 2\n1 2 0\n").is_err());
        assert!(parse_dimacs("p cnf 2 1\n1 2\n").is_err());
        let f = parse_dimacs("c hi\np cnf 3 2\n1 -3\n 2 0\n-1 0\n").unwrap();
        assert_eq!(f.clauses, vec![vec![1, -3, 2], vec![-1]]);
    }

    #[test]
    fn small_widths() {
        let one = CnfFormula { num_vars: 1, clauses: vec![], xors: vec![XorConstraint { lits: vec![1], parity: false }] };
        assert_eq!(xor_to_cnf(&one).clauses, vec![vec![-1]]);
        let three = CnfFormula { num_vars: 3, clauses: vec![], xors: vec![XorConstraint { lits: vec![1, 2, 3], parity: true }] };
        let lowered = xor_to_cnf(&three);
        assert_eq!(lowered.clauses.len(), 4);
        assert_eq!(lowered.num_vars, 3);
    }

    proptest! {
        #[test]
        fn lowering_preserves_projection(width in 1usize..=6, parity: bool, signs in proptest::collection::vec(any::<bool>(), 6)) {
            let lits: Vec<i32> = (0..width).map(|k| if signs[k] { k as i32 + 1 } else { -(k as i32 + 1) }).collect();
            let f = CnfFormula { num_vars: width as u32, clauses: vec![], xors: vec![XorConstraint { lits: lits.clone(), parity }] };
            let g = xor_to_cnf(&f);
            prop_assert!(g.xors.is_empty());
            let extra = (g.num_vars - f.num_vars) as usize;
            prop_assert_eq!(extra, width.saturating_sub(3));
            if width >= 3 {
                prop_assert_eq!(g.clauses.len(), 4 * (width - 2));
            }
            for mask in 0u32..(1 << width) {
                let xor_holds = lits.iter().enumerate()
                    .map(|(k, &l)| (mask >> k & 1 == 1) == (l > 0))
                    .fold(false, |acc, b| acc ^ b) == parity;
                let extendable = (0u32..(1 << extra)).any(|aux| {
                    let mut a = vec![false; g.num_vars as usize + 1];
                    for k in 0..width { a[k + 1] = mask >> k & 1 == 1; }
                    for k in 0..extra { a[width + 1 + k] = aux >> k & 1 == 1; }
                    satisfies_clauses(&g.clauses, &a)
                });
                prop_assert_eq!(xor_holds, extendable);
            }
        }

        #[test]
        fn dimacs_round_trip(
            clauses in proptest::collection::vec(proptest::collection::vec((1i32..=8, any::<bool>()), 1..5), 0..10),
            xors in proptest::collection::vec((proptest::collection::btree_set(1i32..=8, 1..5), any::<bool>()), 0..4),
        ) {
            let f = CnfFormula {
                num_vars: 8,
                clauses: clauses.into_iter().map(|c| c.into_iter().map(|(v, s)| if s { v } else { -v }).collect()).collect(),
                xors: xors.into_iter().map(|(vs, parity)| XorConstraint { lits: vs.into_iter().collect(), parity }).collect(),
            };
            let text = emit_dimacs(&f, true).unwrap();
            prop_assert_eq!(parse_dimacs(&text).unwrap(), f);
        }
    }
}

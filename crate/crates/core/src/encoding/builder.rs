use std::collections::{BTreeMap, HashMap};
use std::ops::Not;

use super::formula::{CnfFormula, XorConstraint};
use crate::geometry::QuadId;
use crate::triangulation::Edge;

/// What a flip variable is attached to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FlipTarget {
    Quad(QuadId),
    Edge(Edge),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AuxTag {
    Ladder,
    Parity,
}

/// Semantic name of a SAT variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarKey {
    /// Edge of the shared center triangulation.
    Center(Edge),
    /// Edge present in the state of input `tri` after `step` rounds.
    Present { tri: u32, step: u32, edge: Edge },
    /// Flip performed on input `tri` in round `step`.
    Flip { tri: u32, step: u32, target: FlipTarget },
    /// Radius-1 choice: the center uses the reference diagonal of the
    /// quad on these (sorted) vertices.
    Radius1([u32; 4]),
    Aux { tag: AuxTag, ordinal: u32 },
}

/// Bidirectional map between variable ids (1-based) and their keys.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VarMap {
    keys: Vec<VarKey>,
    ids: BTreeMap<VarKey, u32>,
}

impl VarMap {
    pub fn id(&self, key: &VarKey) -> Option<u32> {
        self.ids.get(key).copied()
    }

    pub fn key(&self, id: u32) -> Option<&VarKey> {
        id.checked_sub(1).and_then(|i| self.keys.get(i as usize))
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &VarKey)> {
        self.keys.iter().enumerate().map(|(i, k)| (i as u32 + 1, k))
    }
}

/// A literal that may have been folded to a constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Term {
    Const(bool),
    Lit(i32),
}

impl Not for Term {
    type Output = Term;
    fn not(self) -> Term {
        match self {
            Term::Const(b) => Term::Const(!b),
            Term::Lit(l) => Term::Lit(-l),
        }
    }
}

impl Term {
    pub fn is_false(self) -> bool {
        self == Term::Const(false)
    }

    /// Value under a model indexed by variable id.
    pub fn eval(self, model: &[bool]) -> bool {
        match self {
            Term::Const(b) => b,
            Term::Lit(l) => model[l.unsigned_abs() as usize] == (l > 0),
        }
    }
}

/// Collects clauses over [`Term`]s, folding constants away. Variables get
/// provisional ids on first use; [`Builder::finish`] renumbers them in
/// key order so the output does not depend on emission order.
#[derive(Debug, Default)]
pub(crate) struct Builder {
    ids: HashMap<VarKey, i32>,
    keys: Vec<VarKey>,
    clauses: Vec<Vec<i32>>,
    xors: Vec<XorConstraint>,
    infeasible: bool,
    aux_count: u32,
}

impl Builder {
    pub fn var(&mut self, key: VarKey) -> Term {
        let next = self.keys.len() as i32 + 1;
        let id = *self.ids.entry(key).or_insert(next);
        if id == next {
            self.keys.push(key);
        }
        Term::Lit(id)
    }

    pub fn aux(&mut self, tag: AuxTag) -> i32 {
        let ordinal = self.aux_count;
        self.aux_count += 1;
        match self.var(VarKey::Aux { tag, ordinal }) {
            Term::Lit(l) => l,
            Term::Const(_) => unreachable!(),
        }
    }

    /// The term of `key` if some clause has already mentioned it.
    pub fn lookup(&self, key: &VarKey) -> Term {
        self.ids.get(key).map_or(Term::Const(false), |&id| Term::Lit(id))
    }

    pub fn infeasible(&self) -> bool {
        self.infeasible
    }

    pub fn clause(&mut self, terms: &[Term]) {
        let mut lits: Vec<i32> = Vec::with_capacity(terms.len());
        for &t in terms {
            match t {
                Term::Const(true) => return,
                Term::Const(false) => {}
                Term::Lit(l) => lits.push(l),
            }
        }
        lits.sort_unstable_by_key(|l| (l.abs(), *l));
        lits.dedup();
        if lits.windows(2).any(|w| w[0] == -w[1]) {
            return;
        }
        if lits.is_empty() {
            self.infeasible = true;
        } else {
            self.clauses.push(lits);
        }
    }

    pub fn raw_clause(&mut self, lits: Vec<i32>) {
        self.clause(&lits.into_iter().map(Term::Lit).collect::<Vec<_>>());
    }

    pub fn implies(&mut self, a: Term, b: Term) {
        self.clause(&[!a, b]);
    }

    pub fn equiv(&mut self, a: Term, b: Term) {
        self.implies(a, b);
        self.implies(b, a);
    }

    /// XOR of `terms` equals `parity`.
    pub fn xor(&mut self, terms: &[Term], mut parity: bool) {
        let mut vars: Vec<i32> = Vec::with_capacity(terms.len());
        for &t in terms {
            match t {
                Term::Const(b) => parity ^= b,
                Term::Lit(l) => {
                    if l < 0 {
                        parity ^= true;
                    }
                    vars.push(l.abs());
                }
            }
        }
        vars.sort_unstable();
        let mut kept: Vec<i32> = Vec::with_capacity(vars.len());
        for v in vars {
            if kept.last() == Some(&v) {
                kept.pop();
            } else {
                kept.push(v);
            }
        }
        match kept.len() {
            0 => {
                if parity {
                    self.infeasible = true;
                }
            }
            1 => self.clauses.push(vec![if parity { kept[0] } else { -kept[0] }]),
            _ => self.xors.push(XorConstraint { lits: kept, parity }),
        }
    }

    /// Renumbers the variables that occur in some constraint, in sorted
    /// key order. The returned vector maps a provisional id to its final
    /// id, or to 0 when the variable was dropped.
    pub fn finish(self) -> (CnfFormula, VarMap, Vec<u32>) {
        let mut used = vec![false; self.keys.len() + 1];
        if !self.infeasible {
            for l in self.clauses.iter().flatten().chain(self.xors.iter().flat_map(|x| x.lits.iter())) {
                used[l.unsigned_abs() as usize] = true;
            }
        }
        let mut order: Vec<usize> = (0..self.keys.len()).filter(|&i| used[i + 1]).collect();
        order.sort_by_key(|&i| self.keys[i]);
        let mut perm = vec![0u32; self.keys.len() + 1];
        for (rank, &i) in order.iter().enumerate() {
            perm[i + 1] = rank as u32 + 1;
        }
        let map = |l: i32| -> i32 {
            let v = perm[l.unsigned_abs() as usize] as i32;
            if l < 0 {
                -v
            } else {
                v
            }
        };
        let mut clauses: Vec<Vec<i32>> = self
            .clauses
            .into_iter()
            .map(|c| {
                let mut c: Vec<i32> = c.into_iter().map(map).collect();
                c.sort_unstable_by_key(|l| (l.abs(), *l));
                c
            })
            .collect();
        let mut xors: Vec<XorConstraint> = self
            .xors
            .into_iter()
            .map(|x| {
                let mut lits: Vec<i32> = x.lits.into_iter().map(map).collect();
                lits.sort_unstable();
                XorConstraint { lits, parity: x.parity }
            })
            .collect();
        if self.infeasible {
            clauses.clear();
            xors.clear();
        }
        let keys: Vec<VarKey> = order.iter().map(|&i| self.keys[i]).collect();
        let ids = keys.iter().enumerate().map(|(i, k)| (*k, i as u32 + 1)).collect();
        let formula = CnfFormula { num_vars: keys.len() as u32, clauses, xors };
        (formula, VarMap { keys, ids }, perm)
    }
}

pub(crate) fn remap_term(t: Term, perm: &[u32]) -> Term {
    match t {
        Term::Const(_) => t,
        // a dropped variable is unconstrained; read it as false
        Term::Lit(l) => match perm[l.unsigned_abs() as usize] as i32 {
            0 => Term::Const(l < 0),
            v => Term::Lit(if l < 0 { -v } else { v }),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(a: u32, b: u32) -> Edge {
        Edge::new(a, b)
    }

    #[test]
    fn constants_fold() {
        let mut b = Builder::default();
        let x = b.var(VarKey::Center(e(0, 1)));
        b.clause(&[x, Term::Const(true)]);
        b.clause(&[x, Term::Const(false)]);
        b.clause(&[x, !x]);
        assert!(!b.infeasible());
        b.clause(&[Term::Const(false)]);
        assert!(b.infeasible());
    }

    #[test]
    fn xor_folding() {
        let mut b = Builder::default();
        let x = b.var(VarKey::Center(e(0, 1)));
        let y = b.var(VarKey::Center(e(0, 2)));
        b.xor(&[x, !y, Term::Const(true)], false);
        b.xor(&[x, x], true);
        assert!(b.infeasible());
        let (f, _, _) = b.finish();
        assert!(f.clauses.is_empty() && f.xors.is_empty());

        let mut b = Builder::default();
        let x = b.var(VarKey::Center(e(0, 1)));
        let y = b.var(VarKey::Center(e(0, 2)));
        b.xor(&[x, !y, Term::Const(true)], false);
        let (f, _, _) = b.finish();
        // x ^ !y ^ 1 = 0  <=>  x ^ y = 0
        assert_eq!(f.xors, vec![XorConstraint { lits: vec![1, 2], parity: false }]);
    }

    #[test]
    fn ids_follow_key_order() {
        let mut b = Builder::default();
        let late = b.var(VarKey::Present { tri: 0, step: 1, edge: e(0, 1) });
        let early = b.var(VarKey::Center(e(2, 3)));
        let unused = b.var(VarKey::Center(e(0, 1)));
        b.clause(&[late, !early]);
        let (f, map, perm) = b.finish();
        assert_eq!(map.len(), 2);
        assert_eq!(remap_term(unused, &perm), Term::Const(false));
        assert_eq!(map.id(&VarKey::Center(e(2, 3))), Some(1));
        assert_eq!(map.key(2), Some(&VarKey::Present { tri: 0, step: 1, edge: e(0, 1) }));
        assert_eq!(f.clauses, vec![vec![-1, 2]]);
        assert_eq!(remap_term(late, &perm), Term::Lit(2));
    }
}

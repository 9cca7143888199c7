//! SAT encodings of "is there a center within distance `d_i` of every
//! input": a round-by-round model with parity constraints, a plain-CNF
//! model, and the 2-SAT test for radius one.

mod amo;
mod builder;
mod cnf;
mod decode;
mod formula;
mod radius1;
mod tables;
mod xor;

pub use amo::amo_ladder;
pub use builder::{AuxTag, FlipTarget, Term, VarKey, VarMap};
pub use cnf::encode_cnf;
pub use decode::{decode_model, DecodeError};
pub use formula::{emit_dimacs, parse_dimacs, xor_to_cnf, CnfFormula, FormulaError, XorConstraint};
pub use radius1::{encode_radius1, Radius1Encoding};
pub use tables::{CenterDistance, ReachTable, UNREACHABLE};
pub use xor::encode_xor;

use builder::{remap_term, Builder};

use crate::geometry::QuadCatalog;
use crate::instance::Instance;
use crate::triangulation::{Edge, Triangulation};

/// Everything an encoder needs besides the formulation itself.
#[derive(Debug, Clone, Copy)]
pub struct EncodeInput<'a> {
    pub instance: &'a Instance,
    pub catalog: &'a QuadCatalog,
    pub reach: &'a ReachTable,
    /// Allowed number of rounds per input.
    pub distances: &'a [u32],
    /// Forces the center instead of leaving it free.
    pub fixed_center: Option<&'a Triangulation>,
}

/// Which formulation to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Formulation {
    Xor,
    #[default]
    Cnf,
}

impl std::str::FromStr for Formulation {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "xor" => Ok(Formulation::Xor),
            "cnf" => Ok(Formulation::Cnf),
            _ => Err(format!("unknown formulation '{s}' (expected xor or cnf)")),
        }
    }
}

/// A built formula plus what is needed to read a model back.
#[derive(Debug, Clone)]
pub struct Encoding {
    pub formula: CnfFormula,
    pub varmap: VarMap,
    /// Set when constant folding alone proved the target unreachable; the
    /// formula is then empty and must not be handed to a solver.
    pub infeasible: bool,
    pub distances: Vec<u32>,
    /// `states[i][s]`: terms of the possibly-present edges of input `i`
    /// after `s` rounds.
    states: Vec<Vec<Vec<(Edge, Term)>>>,
}

impl Encoding {
    pub fn states(&self) -> &[Vec<Vec<(Edge, Term)>>] {
        &self.states
    }
}

/// Decides the term of every edge-presence slot, with pruning folded in.
struct Layout<'a> {
    inp: EncodeInput<'a>,
    center: Option<&'a CenterDistance>,
}

enum Slot {
    Fixed(bool),
    Var(VarKey),
}

impl<'a> Layout<'a> {
    fn center_slot(&self, e: Edge) -> Slot {
        let ps = &self.inp.instance.points;
        if ps.is_hull_edge(e) {
            return Slot::Fixed(true);
        }
        match self.inp.fixed_center {
            Some(c) => Slot::Fixed(c.contains(e)),
            None if self.inp.reach.might_be_in_center(e, self.inp.distances) => Slot::Var(VarKey::Center(e)),
            None => Slot::Fixed(false),
        }
    }

    fn slot(&self, i: usize, s: u32, e: Edge) -> Slot {
        let inp = &self.inp;
        if inp.instance.points.is_hull_edge(e) {
            return Slot::Fixed(true);
        }
        if s == 0 {
            return Slot::Fixed(inp.instance.inputs[i].contains(e));
        }
        let d = inp.distances[i];
        if s < inp.reach.earliest(e, i) {
            return Slot::Fixed(false);
        }
        if let Some(cd) = self.center {
            if cd.get(e) > d - s {
                return Slot::Fixed(false);
            }
        }
        if s == d {
            return self.center_slot(e);
        }
        Slot::Var(VarKey::Present { tri: i as u32, step: s, edge: e })
    }

    fn present(&self, b: &mut Builder, i: usize, s: u32, e: Edge) -> Term {
        match self.slot(i, s, e) {
            Slot::Fixed(v) => Term::Const(v),
            Slot::Var(k) => b.var(k),
        }
    }

    fn center(&self, b: &mut Builder, e: Edge) -> Term {
        match self.center_slot(e) {
            Slot::Fixed(v) => Term::Const(v),
            Slot::Var(k) => b.var(k),
        }
    }

    /// An input with no rounds must already be the center.
    fn pin_to_center(&self, b: &mut Builder, i: usize) {
        for &e in self.inp.reach.edges() {
            let c = self.center(b, e);
            b.equiv(c, Term::Const(self.inp.instance.inputs[i].contains(e)));
        }
    }

    fn finish(&self, b: Builder) -> Encoding {
        let mut states: Vec<Vec<Vec<(Edge, Term)>>> = Vec::with_capacity(self.inp.distances.len());
        for (i, &d) in self.inp.distances.iter().enumerate() {
            let mut per_step = Vec::with_capacity(d as usize + 1);
            for s in 0..=d {
                let mut row = Vec::new();
                for &e in self.inp.reach.edges() {
                    let t = match self.slot(i, s, e) {
                        Slot::Fixed(v) => Term::Const(v),
                        Slot::Var(k) => b.lookup(&k),
                    };
                    if !t.is_false() {
                        row.push((e, t));
                    }
                }
                per_step.push(row);
            }
            states.push(per_step);
        }
        let infeasible = b.infeasible();
        let (formula, varmap, perm) = b.finish();
        for row in states.iter_mut().flatten() {
            for (_, t) in row.iter_mut() {
                *t = remap_term(*t, &perm);
            }
            row.retain(|(_, t)| !t.is_false());
        }
        Encoding { formula, varmap, infeasible, distances: self.inp.distances.to_vec(), states }
    }
}

/// Dispatches to the selected formulation, computing the center-distance
/// table when the plain-CNF model needs it.
pub fn encode(inp: EncodeInput<'_>, formulation: Formulation, pruned: bool) -> Encoding {
    match formulation {
        Formulation::Xor => encode_xor(inp),
        Formulation::Cnf => {
            let cd = if pruned {
                inp.reach.center_distance(inp.distances, inp.catalog, inp.fixed_center)
            } else {
                inp.reach.zero_center_distance()
            };
            encode_cnf(inp, &cd)
        }
    }
}

#[cfg(test)]
mod tests;

use std::collections::{BTreeMap, BTreeSet};

use super::builder::{remap_term, Builder, Term, VarKey};
use super::{CnfFormula, VarMap};
use crate::geometry::QuadCatalog;
use crate::instance::Instance;
use crate::triangulation::{flip_status, Edge, FlipStatus};

/// 2-SAT test for a center within one round of every input.
#[derive(Debug, Clone)]
pub struct Radius1Encoding {
    pub formula: CnfFormula,
    pub varmap: VarMap,
    pub infeasible: bool,
    membership: Vec<(Edge, Term)>,
}

impl Radius1Encoding {
    /// Center edges under a model of the formula.
    pub fn center_edges(&self, model: &[bool]) -> Vec<Edge> {
        self.membership.iter().filter(|(_, t)| t.eval(model)).map(|(e, _)| *e).collect()
    }
}

/// One variable per convex quad that is a pair of faces in some input,
/// shared across inputs and true when the center uses the quad's smaller
/// diagonal. In each input, a quad is flipped exactly when the center
/// disagrees with the input on that variable; quads sharing a face of the
/// input cannot both flip. Every edge must then be in the center for all
/// inputs or for none, which ties the per-input views together. All
/// clauses have at most two literals.
pub fn encode_radius1(instance: &Instance, cat: &QuadCatalog) -> Radius1Encoding {
    let mut b = Builder::default();
    let mut views: Vec<BTreeMap<Edge, Term>> = Vec::with_capacity(instance.m());
    let mut universe: BTreeSet<Edge> = BTreeSet::new();
    for t in &instance.inputs {
        let mut flip_of_edge: BTreeMap<Edge, (Term, Edge)> = BTreeMap::new();
        for &e in t.edges() {
            if let FlipStatus::Flippable(id) = flip_status(t, e, cat) {
                let q = cat.get(id);
                let other = q.flip_of(e).unwrap();
                let x = b.var(VarKey::Radius1(q.vertex_key()));
                // the input uses the reference diagonal exactly when e is it
                let flipped = if e < other { !x } else { x };
                flip_of_edge.insert(e, (flipped, other));
            }
        }
        for face in t.faces() {
            let [a, c, z] = *face;
            let sides = [Edge::new(a, c), Edge::new(c, z), Edge::new(a, z)];
            for x in 0..3 {
                for y in x + 1..3 {
                    if let (Some(&(fx, _)), Some(&(fy, _))) = (flip_of_edge.get(&sides[x]), flip_of_edge.get(&sides[y])) {
                        b.clause(&[!fx, !fy]);
                    }
                }
            }
        }
        let mut view: BTreeMap<Edge, Term> = BTreeMap::new();
        for &e in t.edges() {
            view.insert(e, flip_of_edge.get(&e).map_or(Term::Const(true), |&(f, _)| !f));
        }
        for &(f, other) in flip_of_edge.values() {
            view.insert(other, f);
        }
        universe.extend(view.keys().copied());
        views.push(view);
    }
    let membership_of = |view: &BTreeMap<Edge, Term>, e: &Edge| view.get(e).copied().unwrap_or(Term::Const(false));
    for view in &views[1..] {
        for e in &universe {
            b.equiv(membership_of(&views[0], e), membership_of(view, e));
        }
    }
    let membership: Vec<(Edge, Term)> = universe.iter().map(|e| (*e, membership_of(&views[0], e))).collect();
    let infeasible = b.infeasible();
    let (formula, varmap, perm) = b.finish();
    let membership = membership.into_iter().map(|(e, t)| (e, remap_term(t, &perm))).collect();
    Radius1Encoding { formula, varmap, infeasible, membership }
}

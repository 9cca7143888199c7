use std::collections::BTreeMap;

use super::amo::amo_ladder;
use super::builder::{AuxTag, Builder, FlipTarget, Term, VarKey};
use super::{EncodeInput, Encoding, Layout};
use crate::geometry::{sorted3, QuadId};

/// Round-by-round model with one parity constraint per edge and round.
///
/// Round `t` (1-based) moves input `i` from state `t - 1` to state `t`.
/// A flip of convex quad `q` needs its four boundary edges present before
/// the round; every edge toggles exactly when an odd number of flips on
/// quads having it as a diagonal fire. Flips of quads sharing three
/// vertices are mutually exclusive within a round. The last state of
/// every input is the shared center.
pub fn encode_xor(inp: EncodeInput<'_>) -> Encoding {
    let layout = Layout { inp, center: None };
    let mut b = Builder::default();
    let cat = inp.catalog;
    let ps = &inp.instance.points;

    let mut triples: BTreeMap<[u32; 3], Vec<QuadId>> = BTreeMap::new();
    for (id, q) in cat.convex() {
        let v = q.verts;
        for skip in 0..4 {
            let t: Vec<u32> = (0..4).filter(|&k| k != skip).map(|k| v[k]).collect();
            triples.entry(sorted3(t[0], t[1], t[2])).or_default().push(id);
        }
    }
    triples.retain(|_, ids| ids.len() > 1);

    let edges = inp.reach.edges();
    for (i, &d) in inp.distances.iter().enumerate() {
        if d == 0 {
            layout.pin_to_center(&mut b, i);
            continue;
        }
        for t in 1..=d {
            let before: Vec<Term> = edges.iter().map(|&e| layout.present(&mut b, i, t - 1, e)).collect();
            let at = |e| before[inp.reach.index_of(e).expect("quad edges are empty segments")];
            let mut flips: Vec<Term> = vec![Term::Const(false); cat.len()];
            for (id, q) in cat.convex() {
                let boundary = q.boundary();
                if boundary.iter().any(|&e| at(e).is_false()) || q.diagonals().all(|e| at(e).is_false()) {
                    continue;
                }
                let f = b.var(VarKey::Flip { tri: i as u32, step: t, target: FlipTarget::Quad(id) });
                for e in boundary {
                    b.implies(f, at(e));
                }
                flips[id as usize] = f;
            }
            for (k, &e) in edges.iter().enumerate() {
                if ps.is_hull_edge(e) {
                    continue;
                }
                let mut terms = vec![before[k], layout.present(&mut b, i, t, e)];
                terms.extend(cat.convex_with_diagonal(e).map(|id| flips[id as usize]));
                b.xor(&terms, false);
            }
            for ids in triples.values() {
                let lits: Vec<i32> = ids
                    .iter()
                    .filter_map(|&id| match flips[id as usize] {
                        Term::Lit(l) => Some(l),
                        Term::Const(_) => None,
                    })
                    .collect();
                for c in amo_ladder(&lits, || b.aux(AuxTag::Ladder)) {
                    b.raw_clause(c);
                }
            }
        }
    }
    layout.finish(b)
}

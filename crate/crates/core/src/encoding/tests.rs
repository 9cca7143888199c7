use std::collections::HashMap;

use super::*;
use crate::instance::Solution;
use crate::pipeline::generate_instance;
use crate::satbackend::{Backend, SatResult};
use crate::triangulation::{oracle_distance_map, Edge, ParallelFlip};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn square(diags: &[(u32, u32)]) -> Instance {
    let hull = [(0, 1), (1, 2), (2, 3), (0, 3)];
    let tris: Vec<Vec<Edge>> = diags
        .iter()
        .map(|&(a, b)| hull.iter().chain([(a, b)].iter()).map(|&(u, v)| Edge::new(u, v)).collect())
        .collect();
    Instance::from_raw("sq", &[(0, 0), (1, 0), (1, 1), (0, 1)], &tris).unwrap()
}

/// Is some triangulation within `d[i]` rounds of every input?
fn oracle_feasible(inst: &Instance, cat: &QuadCatalog, d: &[u32]) -> bool {
    let mut common: Option<HashMap<Vec<Edge>, u32>> = None;
    for (t, &k) in inst.inputs.iter().zip(d) {
        let map = oracle_distance_map(t, cat, Some(k));
        common = Some(match common {
            None => map,
            Some(c) => c.into_iter().filter(|(e, _)| map.contains_key(e)).collect(),
        });
    }
    !common.unwrap().is_empty()
}

fn run(inst: &Instance, cat: &QuadCatalog, d: &[u32], f: Formulation, pruned: bool) -> Option<Solution> {
    let reach = if pruned { ReachTable::compute(inst, cat) } else { ReachTable::unpruned(inst) };
    let inp = EncodeInput { instance: inst, catalog: cat, reach: &reach, distances: d, fixed_center: None };
    let enc = encode(inp, f, pruned);
    if enc.infeasible {
        return None;
    }
    match Backend::default().solve(&enc.formula).unwrap() {
        SatResult::Sat(model) => {
            let sol = decode_model(&enc, &model, inst, cat).unwrap();
            for (seq, &k) in sol.flip_sequences.iter().zip(d) {
                assert!(seq.len() <= k as usize);
            }
            Some(sol)
        }
        SatResult::Unsat => None,
        SatResult::Unknown(r) => panic!("unknown: {r:?}"),
    }
}

const ALL: [(Formulation, bool); 4] =
    [(Formulation::Xor, true), (Formulation::Xor, false), (Formulation::Cnf, true), (Formulation::Cnf, false)];

#[test]
fn square_one_round() {
    let inst = square(&[(0, 2), (1, 3)]);
    let cat = inst.catalog();
    for (f, pruned) in ALL {
        let sol = run(&inst, &cat, &[1, 0], f, pruned).expect("satisfiable");
        assert_eq!(sol.center, inst.inputs[1].edges());
        assert_eq!(sol.flip_sequences[0].rounds, vec![ParallelFlip::new([Edge::new(0, 2)])]);
        assert!(sol.flip_sequences[1].is_empty());
        assert!(run(&inst, &cat, &[0, 0], f, pruned).is_none(), "{f:?}");
        assert!(run(&inst, &cat, &[0, 1], f, pruned).is_some());
    }
}

#[test]
fn identical_inputs_at_zero() {
    let inst = square(&[(0, 2), (0, 2), (0, 2)]);
    let cat = inst.catalog();
    for (f, pruned) in ALL {
        let sol = run(&inst, &cat, &[0, 0, 0], f, pruned).expect("satisfiable");
        assert_eq!(sol.center, inst.inputs[0].edges());
        assert!(sol.flip_sequences.iter().all(|s| s.is_empty()));
        assert_eq!(sol.objective, 0);
    }
}

#[test]
fn verdicts_match_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for case in 0..60u64 {
        let n = rng.gen_range(5..=7);
        let m = rng.gen_range(1..=3);
        let inst = generate_instance(n, m, 1000 + case);
        let cat = inst.catalog();
        let total = rng.gen_range(0..=4u32);
        let mut d = vec![0u32; m];
        for _ in 0..total {
            d[rng.gen_range(0..m)] += 1;
        }
        let expect = oracle_feasible(&inst, &cat, &d);
        for (f, pruned) in ALL {
            let got = run(&inst, &cat, &d, f, pruned).is_some();
            assert_eq!(got, expect, "case {case} d={d:?} {f:?} pruned={pruned}");
        }
    }
}

#[test]
fn radius_one_matches_oracle() {
    for case in 0..60u64 {
        let inst = generate_instance(5 + (case % 3) as usize, 1 + (case % 3) as usize, 2000 + case);
        let cat = inst.catalog();
        let r1 = encode_radius1(&inst, &cat);
        let expect = oracle_feasible(&inst, &cat, &vec![1; inst.m()]);
        let got = !r1.infeasible
            && match Backend::default().solve(&r1.formula).unwrap() {
                SatResult::Sat(model) => {
                    let center = inst.triangulation(r1.center_edges(&model)).expect("center is a triangulation");
                    for t in &inst.inputs {
                        assert!(crate::triangulation::oracle_parallel_distance(t, &center, &cat, 1).is_some());
                    }
                    true
                }
                _ => false,
            };
        assert_eq!(got, expect, "case {case}");
        assert!(r1.formula.clauses.iter().all(|c| c.len() <= 2));
    }
}

#[test]
fn radius_one_square() {
    let inst = square(&[(0, 2), (1, 3)]);
    let cat = inst.catalog();
    let r1 = encode_radius1(&inst, &cat);
    assert!(Backend::default().solve(&r1.formula).unwrap().is_sat());
    let single = encode_radius1(&square(&[(0, 2)]), &cat);
    assert!(Backend::default().solve(&single.formula).unwrap().is_sat());
}

#[test]
fn emission_is_byte_stable() {
    let inst = generate_instance(7, 3, 77);
    let cat = inst.catalog();
    let d = [1, 1, 2];
    for f in [Formulation::Xor, Formulation::Cnf] {
        let texts: Vec<String> = (0..3)
            .map(|_| {
                let reach = ReachTable::compute(&inst, &cat);
                let inp = EncodeInput { instance: &inst, catalog: &cat, reach: &reach, distances: &d, fixed_center: None };
                let enc = encode(inp, f, true);
                emit_dimacs(&enc.formula, f == Formulation::Xor).unwrap()
            })
            .collect();
        assert!(texts.windows(2).all(|w| w[0] == w[1]));
    }
}

#[test]
fn fixed_center_distance() {
    let inst = square(&[(0, 2)]);
    let cat = inst.catalog();
    let target = square(&[(1, 3)]).inputs[0].clone();
    let reach = ReachTable::compute(&inst, &cat);
    for (k, expect) in [(0u32, false), (1, true)] {
        let inp = EncodeInput { instance: &inst, catalog: &cat, reach: &reach, distances: &[k], fixed_center: Some(&target) };
        for f in [Formulation::Xor, Formulation::Cnf] {
            let enc = encode(inp, f, true);
            let sat = !enc.infeasible && Backend::default().solve(&enc.formula).unwrap().is_sat();
            assert_eq!(sat, expect, "{f:?} k={k}");
        }
    }
}

use std::collections::HashMap;

use super::*;
use crate::bounds::total_lower_bound;
use crate::encoding::Formulation;
use crate::satbackend::Backend;
use crate::triangulation::{oracle_distance_map, Edge, FlipSequence, ParallelFlip, ViolationKind};

fn square(diags: &[(u32, u32)]) -> Instance {
    let hull = [(0, 1), (1, 2), (2, 3), (0, 3)];
    let tris: Vec<Vec<Edge>> = diags
        .iter()
        .map(|&(a, b)| hull.iter().chain([(a, b)].iter()).map(|&(u, v)| Edge::new(u, v)).collect())
        .collect();
    Instance::from_raw("sq", &[(0, 0), (1, 0), (1, 1), (0, 1)], &tris).unwrap()
}

/// Best total over all triangulations, with each input's distance map.
fn oracle_optimum(inst: &Instance, cat: &QuadCatalog) -> (u32, Vec<HashMap<Vec<Edge>, u32>>) {
    let maps: Vec<_> = inst.inputs.iter().map(|t| oracle_distance_map(t, cat, None)).collect();
    let best = maps[0].keys().map(|c| maps.iter().map(|m| m[c]).sum::<u32>()).min().unwrap();
    (best, maps)
}

#[test]
fn square_exact() {
    let inst = square(&[(0, 2), (1, 3)]);
    let cat = inst.catalog();
    let out = exact_solve(&inst, &cat, &Backend::default(), &ExactConfig::default()).unwrap();
    assert_eq!(out.solution.objective, 1);
    assert!(out.certificate.is_optimal());
    validate_solution(&inst, &out.solution, &cat).unwrap();
    let same = square(&[(0, 2), (0, 2)]);
    let out = exact_solve(&same, &cat, &Backend::default(), &ExactConfig::default()).unwrap();
    assert_eq!(out.solution.objective, 0);
    assert_eq!(out.certificate, Certificate::Optimal { lower_bound: 0, refuted: 0 });
}

#[test]
fn exact_matches_oracle() {
    for seed in 0..12u64 {
        let inst = generate_instance(5 + (seed % 3) as usize, 2 + (seed % 3) as usize, 40 + seed);
        let cat = inst.catalog();
        let (best, _) = oracle_optimum(&inst, &cat);
        for formulation in [Formulation::Cnf, Formulation::Xor] {
            let cfg = ExactConfig { formulation, ..ExactConfig::default() };
            let out = exact_solve(&inst, &cat, &Backend::default(), &cfg).unwrap();
            assert_eq!(out.solution.objective as u32, best, "seed {seed} {formulation:?}");
            assert!(out.certificate.is_optimal());
            assert!(total_lower_bound(&out.distances) <= best);
            validate_solution(&inst, &out.solution, &cat).unwrap();
        }
    }
}

#[test]
fn fixed_center_matches_oracle() {
    let inst = square(&[(0, 2), (1, 3)]);
    let cat = inst.catalog();
    let sol = fixed_center_solve(&inst, &inst.inputs[1], &cat, &Backend::default(), Formulation::Cnf).unwrap();
    assert_eq!(sol.distances(), vec![1, 0]);
    for seed in 0..6u64 {
        let inst = generate_instance(7, 3, 70 + seed);
        let cat = inst.catalog();
        let (best, maps) = oracle_optimum(&inst, &cat);
        let center = &inst.inputs[0];
        let sol = fixed_center_solve(&inst, center, &cat, &Backend::default(), Formulation::Cnf).unwrap();
        let expect: Vec<usize> = maps.iter().map(|m| m[center.edges()] as usize).collect();
        assert_eq!(sol.distances(), expect);
        assert!(sol.objective as u32 >= best);
        validate_solution(&inst, &sol, &cat).unwrap();
    }
}

#[test]
fn subset_and_extension() {
    for seed in 0..6u64 {
        let inst = generate_instance(6, 4, 300 + seed);
        let cat = inst.catalog();
        let (best, _) = oracle_optimum(&inst, &cat);
        let cfg = ExactConfig::default();
        let all = subset_solve(&inst, &[0, 1, 2, 3], &cat, &Backend::default(), &cfg).unwrap();
        assert_eq!(all.solution.objective as u32, best);
        let one = subset_solve(&inst, &[0], &cat, &Backend::default(), &cfg).unwrap();
        assert_eq!(one.solution.center, inst.inputs[0].edges());
        assert!(one.solution.objective as u32 >= best);
        validate_solution(&inst, &one.solution, &cat).unwrap();
        for s in [1, 2, 4] {
            let ext = extension_solve(&inst, s, &cat, &Backend::default(), &cfg).unwrap();
            validate_solution(&inst, &ext, &cat).unwrap();
            assert!(ext.objective as u32 >= best);
            if s == 4 {
                assert_eq!(ext.objective as u32, best);
            }
        }
    }
}

#[test]
fn extension_square_trace() {
    // seed {1}: d = (0); input 0 enters at D[0][1] - 0 = 1, satisfiable at once
    let inst = square(&[(0, 2), (1, 3)]);
    let cat = inst.catalog();
    let sol = extension_solve(&inst, 1, &cat, &Backend::default(), &ExactConfig::default()).unwrap();
    assert_eq!(sol.distances(), vec![1, 0]);
}

#[test]
fn suffix_bounds_are_suffix_optima() {
    let inst = generate_instance(6, 4, 9);
    let cat = inst.catalog();
    let b = suffix_bounds(&inst, 2, &cat, &Backend::default(), &ExactConfig::default()).unwrap();
    for k in 2..4 {
        let keep: Vec<usize> = (4 - k..4).collect();
        let (best, _) = oracle_optimum(&inst.subset(&keep), &cat);
        assert_eq!(b.get(k), Some(best));
    }
    // the bounds never cut away the optimum
    let cfg = ExactConfig { suffix_start: Some(2), ..ExactConfig::default() };
    let (best, _) = oracle_optimum(&inst, &cat);
    assert_eq!(exact_solve(&inst, &cat, &Backend::default(), &cfg).unwrap().solution.objective as u32, best);
}

#[test]
fn prefix_probe_keeps_optimum() {
    let inst = generate_instance(5, 4, 21);
    let cat = inst.catalog();
    let (best, _) = oracle_optimum(&inst, &cat);
    let cfg = ExactConfig { prefix_depths: vec![2, 3], prefix_min_inputs: 2, ..ExactConfig::default() };
    let out = exact_solve(&inst, &cat, &Backend::default(), &cfg).unwrap();
    assert_eq!(out.solution.objective as u32, best);
}

#[test]
fn validator_catches_tampering() {
    let inst = square(&[(0, 2), (1, 3)]);
    let cat = inst.catalog();
    let good = exact_solve(&inst, &cat, &Backend::default(), &ExactConfig::default()).unwrap().solution;
    validate_solution(&inst, &good, &cat).unwrap();
    let mut bad = good.clone();
    bad.objective += 1;
    assert!(matches!(validate_solution(&inst, &bad, &cat), Err(SolutionViolation::Objective { .. })));
    let mut bad = good.clone();
    bad.flip_sequences[0] = FlipSequence::new(vec![ParallelFlip::new([Edge::new(0, 1)])]);
    match validate_solution(&inst, &bad, &cat) {
        Err(SolutionViolation::Sequence { input: 0, violation }) => assert_eq!(violation.kind, ViolationKind::HullFlip),
        other => panic!("{other:?}"),
    }
}

#[test]
fn run_strategies() {
    let inst = generate_instance(6, 3, 5);
    let cat = inst.catalog();
    let (best, _) = oracle_optimum(&inst, &cat);
    for strategy in ["exact", "heuristic", "fixed-center", "extension"] {
        let mut cfg = Config::default();
        cfg.set("strategy", strategy).unwrap();
        let out = run_strategy(&inst, &cat, &cfg).unwrap();
        validate_solution(&inst, &out.solution, &cat).unwrap();
        assert!(out.solution.objective as u32 >= best);
        assert_eq!(out.certificate.is_some(), strategy == "exact");
    }
    let mut cfg = Config::default();
    cfg.set("strategy", "subset").unwrap();
    assert!(matches!(run_strategy(&inst, &cat, &cfg), Err(RunError::Settings(_))));
    cfg.set("keep", "0,2").unwrap();
    validate_solution(&inst, &run_strategy(&inst, &cat, &cfg).unwrap().solution, &cat).unwrap();
}

#[test]
fn solutions_are_byte_stable() {
    let inst = generate_instance(7, 3, 8);
    let cat = inst.catalog();
    let texts: Vec<String> = (0..3)
        .map(|_| write_solution(&run_strategy(&inst, &cat, &Config::default()).unwrap().solution))
        .collect();
    assert!(texts.windows(2).all(|w| w[0] == w[1]));
}

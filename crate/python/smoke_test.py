"""Smoke test for the flipcenter_py extension.

Build and install it first, e.g.
    pip install maturin && maturin build -m crates/py/Cargo.toml --release
    pip install target/wheels/flipcenter_py-*.whl
then run: python python/smoke_test.py
"""

import json

import flipcenter_py as fc

SQUARE = {
    "instance_name": "square",
    "points": [[0, 0], [1, 0], [1, 1], [0, 1]],
    "triangulations": [
        [[0, 1], [1, 2], [2, 3], [0, 3], [0, 2]],
        [[0, 1], [1, 2], [2, 3], [0, 3], [1, 3]],
    ],
}


def main():
    inst = fc.Instance.from_json(json.dumps(SQUARE))
    assert (inst.n, inst.m) == (4, 2)
    assert inst.convex_quads() == 1

    sol = fc.solve(inst)
    assert sol.objective == 1, sol
    assert sol.certificate.startswith("Optimal")
    fc.validate(inst, sol)

    again = fc.Solution.from_json(sol.to_json())
    assert again.objective == 1 and again.center == sol.center

    assert fc.distance_matrix(inst) == [[0, 1], [1, 0]]
    assert fc.radius_one(inst)
    assert fc.encode_dimacs(inst, [0, 0]) is None
    assert fc.encode_dimacs(inst, [1, 0]).startswith("p cnf")
    assert fc.render(inst).count("<circle") == 4

    bad = json.loads(sol.to_json())
    bad["objective"] = 7
    try:
        fc.validate(inst, fc.Solution.from_json(json.dumps(bad)))
    except ValueError as e:
        assert "objective" in str(e)
    else:
        raise AssertionError("tampered objective accepted")

    gen = fc.Instance.generate(7, 3, seed=5)
    exact = fc.solve(gen)
    heur = fc.solve(gen, "heuristic", [("limit", "8")])
    fc.validate(gen, heur)
    assert heur.objective >= exact.objective
    print("ok", exact.objective, heur.objective)


if __name__ == "__main__":
    main()

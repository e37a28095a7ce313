"""Smoke test for the realconic_py extension module.

Build and install first:
    maturin build --release -m crates/py/Cargo.toml -o dist && pip install dist/realconic_py-*.whl
"""

import json
import pathlib
import sys

import realconic_py as rc

SPECS = pathlib.Path(__file__).resolve().parent.parent / "specs"


def check(label, got, expected):
    ok = got == expected
    print(f"{'ok  ' if ok else 'FAIL'} {label}: {got!r}")
    return ok


def main():
    results = []

    spec = (SPECS / "spheres_and_torus.json").read_text()
    s = rc.Surface(spec)
    census = s.census()
    results.append(check("census", (census["s"], census["t"], census["k"]), (2, 1, 0)))
    results.append(check("gamma", s.gamma_str(), "Z"))
    results.append(check("torus map", s.decide_approx_sphere([0, 0, 1])["approximable"], False))
    results.append(check("sphere map", s.decide_approx_sphere([5, -2, 0])["approximable"], True))

    klein = s.apply("elm_real", 2)
    results.append(check("after elm", klein.gamma_str(), "0"))
    results.append(check("k'", klein.census()["k_prime"], 1))
    results.append(check("repr", repr(klein), "Surface([sphere, sphere, Klein bottle])"))
    results.append(check("batch", klein.approximable_many([[0, 0, 0], [1, 0, 1]]), [True, True]))

    report = rc.analyze((SPECS / "worked_example.json").read_text())
    results.append(check("worked example spheres", report["census"]["s"], 2))
    results.append(check("report round trip", json.loads(json.dumps(report))["gamma"]["matches"], True))

    results.append(check("sturm", rc.count_real_roots(["-2", "0", "1"]), 2))
    results.append(check("sturm interval", rc.count_real_roots(["-2", "0", "1"], "0", "2"), 1))
    results.append(check("isolate", len(rc.isolate_real_roots(["-4", "0", "1"], 10)), 2))
    results.append(check("squarefree", rc.squarefree_part(["1", "-2", "1"]), ["-1", "1"]))
    results.append(check("snf", rc.invariant_factors([[2, 4], [6, 8]]), ["2", "4"]))

    results.append(
        check("del pezzo", rc.gamma_c_rational("maximal_del_pezzo_degree2", [{"type": "sphere"}] * 4),
              {"free_rank": 0, "torsion_factors": [2]})
    )
    results.append(check("torus to sphere", rc.decide_approx_rational_target({"type": "torus"}, {"type": "sphere"}),
                         "closure_null_homotopic"))
    results.append(check("klein to sphere", rc.decide_approx_rational_target({"type": "klein"}, {"type": "sphere"}),
                         "dense"))

    try:
        rc.Surface(spec.replace('"zeros": 4', '"zeros": 3'))
        results.append(check("odd zeros rejected", "accepted", "ValueError"))
    except ValueError as e:
        results.append(check("odd zeros rejected", "even" in str(e), True))

    failed = results.count(False)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())

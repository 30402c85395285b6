"""Verification suites behind ``bddlat verify`` and random instance generators."""
from __future__ import annotations

import time
from fractions import Fraction

from .exact import INF, Magnitude
from .instances import GapCvpInstance, StBddInstance
from .lattice import Basis, closest_vector, det_exact, lambda1
from .oracles import (
    check_bdd_promise,
    check_stbdd_yes,
    gapcvp_status,
    monte_carlo_success,
    verify_mo_bound_sweep,
    MoBoundViolation,
)
from .reductions import Verdict, decide_cvp, full_pipeline, make_params, s_p
from .sparsify import make_rng

FLOOR = Fraction(1, 40)


def random_basis(rng, n, d=None, lo=-3, hi=3, den=1):
    """Full-column-rank d x n basis with entries in [lo, hi] / den."""
    d = n if d is None else d
    while True:
        rows = [[Fraction(int(rng.integers(lo, hi + 1)), den) for _ in range(n)] for _ in range(d)]
        B = Basis(rows, check=False)
        if det_exact(B.gram) != 0:
            return B


def random_gapcvp(rng, p, want, n_max=2, max_tries=500):
    """Random GapCVP' instance of rank <= n_max on the requested side of the promise."""
    for _ in range(max_tries):
        n = int(rng.integers(1, n_max + 1))
        d = n + int(rng.integers(0, 2))
        if want == "YES":
            B = random_basis(rng, n, d)
            x = [int(v) for v in rng.integers(0, 2, size=n)]
            e = [Fraction(int(rng.integers(-4, 5)), 8) for _ in range(d)]
            if Magnitude.norm(e, p) > 1:
                continue
            t = tuple(a + b for a, b in zip(B.apply(x), e))
        else:
            B = random_basis(rng, n, d, -6, 6)
            t = tuple(Fraction(int(rng.integers(-24, 25)), 4) for _ in range(d))
        inst = GapCvpInstance(B, t, p)
        if gapcvp_status(inst) == want:
            return inst
    raise RuntimeError(f"no {want} instance found in {max_tries} tries")


def floor_instance(p=Fraction(2)):
    """(S,T)-BDD YES instance on Z^4 style lattice: B' = (2), t' = (1), n = 4.

    r = 1 keeps S = 0, alpha = s_p(4) makes all 16 binary combinations close,
    and T = 2^(n - n') = 8.
    """
    rows = [[2, 0, 0, 0]] + [[int(i == j) for j in range(4)] for i in range(4)]
    half = Fraction(1, 2)
    t = (half,) * 5
    return StBddInstance(Basis(rows), Fraction(1), t, s_p(4, p), p,
                         {"T": 8, "S_bound": 0, "n_prime": 1, "n": 4})


def _honest_solver(bdd):
    return closest_vector(bdd.basis, bdd.target, bdd.p)[1]


def suite_mo(trials=None, seed=0):
    grid = [Fraction(k, 4) for k in range(1, 11)]
    try:
        rep = verify_mo_bound_sweep([1, Fraction(3, 2), 2, 3, 5], 4, grid)
        return {"passed": True, **rep}
    except MoBoundViolation as exc:
        return {"passed": False, "violation": str(exc)}


def suite_sparsify(trials=None, seed=0):
    trials = trials or 10_000
    inst = floor_instance()
    yes = check_stbdd_yes(inst, 0, 8)
    res = monte_carlo_success(inst, trials, rng=seed)
    return {
        "passed": yes and res.lower >= float(FLOOR),
        "instance_yes": yes,
        "floor": float(FLOOR),
        **res.as_dict(),
    }


def suite_pipeline(trials=None, seed=0):
    count = trials or 20
    rng = make_rng(seed)
    p2 = Fraction(2)
    false_pos = 0
    for k in range(count):
        inst = random_gapcvp(rng, p2, "NO")
        params = make_params(p2, inst.basis.n, C=2, seed=seed * 100_003 + k)
        dec = decide_cvp(inst, params, _honest_solver, trials=1)
        false_pos += dec.verdict is Verdict.YES
    inf_fail = 0
    for k in range(count):
        inst = random_gapcvp(rng, INF, "YES")
        bdd, _ = full_pipeline(inst, make_params(INF, inst.basis.n))
        d, _ = closest_vector(bdd.basis, bdd.target, INF)
        ok = check_bdd_promise(bdd) and d <= lambda1(bdd.basis, INF) * Fraction(1, 2)
        inf_fail += not ok
    return {
        "passed": false_pos == 0 and inf_fail == 0,
        "no_instances": count,
        "false_positives": false_pos,
        "inf_yes_instances": count,
        "inf_promise_failures": inf_fail,
    }


SUITES = {"mo": suite_mo, "sparsify": suite_sparsify, "pipeline": suite_pipeline}


def run(name, trials=None, seed=0):
    names = list(SUITES) if name == "all" else [name]
    report = {"seed": seed, "suites": {}}
    for nm in names:
        t0 = time.perf_counter()
        r = SUITES[nm](trials=trials, seed=seed)
        r["seconds"] = round(time.perf_counter() - t0, 3)
        report["suites"][nm] = r
    report["passed"] = all(r["passed"] for r in report["suites"].values())
    return report

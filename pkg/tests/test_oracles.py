from fractions import Fraction as F

import numpy as np
import pytest
from scipy.stats import binomtest

from bddlat.exact import INF, Magnitude
from bddlat.instances import BddInstance, GapCvpInstance, StBddInstance
from bddlat.lattice import BallQuery, Basis
from bddlat.numerics import mo_bound
from bddlat.oracles import (
    MoBoundViolation,
    OracleError,
    brute_cvp,
    check_bdd_promise,
    check_stbdd_yes,
    gapcvp_status,
    monte_carlo_success,
    naive_cvp,
    naive_points,
    pair_reduce,
    transform_lemma_report,
    verify_mo_bound_sweep,
    wilson_interval,
    zero_one_yes,
)
from bddlat.reductions import direct_sum_transform, pad_step, sparsify_step
from bddlat.sparsify import make_rng
from bddlat.suites import floor_instance, random_basis, random_gapcvp

half = F(1, 2)


def test_brute_cvp_examples():
    B = Basis.identity(2)
    assert brute_cvp(B, (2, -1), 2) == ((2, -1), Magnitude.zero(2))
    v, d = brute_cvp(B, (F(2, 5), F(7, 10)), 2)
    assert v == (0, 1) and d.as_rational() == half


def test_brute_cvp_agrees_with_box_scan():
    rng = np.random.default_rng(17)
    for k in range(100):
        n = int(rng.integers(1, 4))
        B = random_basis(rng, n, n + int(rng.integers(0, 2)), -3, 3, int(rng.integers(1, 3)))
        t = tuple(F(int(rng.integers(-10, 11)), 3) for _ in range(B.d))
        p = [1, 2, 3, INF, F(3, 2)][k % 5]
        _, d = brute_cvp(B, t, p)
        assert d.compare(naive_cvp(B, t, p)) == 0


def test_pair_reduce_is_unimodular_change_of_basis():
    from bddlat.lattice import det_exact

    rng = np.random.default_rng(5)
    for _ in range(40):
        n = int(rng.integers(1, 5))
        B = random_basis(rng, n, n + int(rng.integers(0, 2)), -9, 9, int(rng.integers(1, 4)))
        R, U = pair_reduce(B)
        assert abs(det_exact(U)) == 1
        for j, col in enumerate(R.columns):
            assert tuple(col) == tuple(B.apply([U[i][j] for i in range(n)]))
        assert sum(sum(a * a for a in c) for c in R.columns) <= sum(sum(a * a for a in c) for c in B.columns)


def test_box_scan_handles_skewed_basis():
    B = Basis([[1, 1000], [0, 1]])
    pts = naive_points(B, BallQuery(2, Magnitude.rational(1, 2), (F(0), F(0))))
    assert set(pts) == {(0, 0), (1, 0), (-1, 0), (-1000, 1), (1000, -1)}


def test_naive_box_limit():
    with pytest.raises(OracleError):
        naive_points(Basis.identity(6), BallQuery(2, Magnitude.rational(60, 2), (F(0),) * 6))


def test_gapcvp_status():
    assert gapcvp_status(GapCvpInstance(Basis([[2]]), (F(1),), INF)) == "YES"
    assert gapcvp_status(GapCvpInstance(Basis([[3]]), (F(3, 2),), INF)) == "NO"
    # lattice point on the target, but only through coefficient -1
    assert gapcvp_status(GapCvpInstance(Basis([[10]]), (F(-10),), 2)) == "GAP"


def test_check_stbdd_yes_examples():
    st = direct_sum_transform(GapCvpInstance(Basis([[2]]), (F(1),), INF), 1, half)
    assert check_stbdd_yes(st, 0, 1)
    far = StBddInstance(st.basis, st.r, (F(7), F(7)), st.alpha, st.p)
    assert not check_stbdd_yes(far, 0, 1)
    for n, p in ((3, 2), (4, 1), (3, INF)):
        alpha = Magnitude(p, [(n, half)])  # alpha * r with r = 1
        inst = StBddInstance(Basis.identity(n), F(1), (half,) * n, alpha, p)
        assert check_stbdd_yes(inst, 0, 2**n)
        assert not check_stbdd_yes(inst, 0, 2**n + 1)


def test_check_bdd_promise_examples():
    B = Basis([[2, 0], [1, 3]])
    for p in (1, 2, INF):
        assert check_bdd_promise(BddInstance(B, B.apply((1, -2)), Magnitude.rational(F(1, 100), p), p))
    # target at distance lambda_1 with alpha = 1/2
    Z = Basis.identity(2)
    assert not check_bdd_promise(BddInstance(Z, (half, F(0)), Magnitude.rational(F(1, 4), 2), 2))
    assert check_bdd_promise(BddInstance(Z, (half, F(0)), Magnitude.rational(half, 2), 2))
    line = Basis([[1], [0]])  # lambda_1 = 1, target (0, 1) sits at distance 1
    for p in (1, 2, INF):
        assert not check_bdd_promise(BddInstance(line, (0, 1), Magnitude.rational(half, p), p))
    inst = floor_instance()
    for seed in range(50):
        cand, _ = sparsify_step(inst, make_rng(seed))
        if zero_one_yes(cand.basis, cand.r, cand.target, cand.alpha, cand.p):
            assert check_bdd_promise(pad_step(cand.basis, cand.r, cand.target, cand.alpha, cand.p))


def test_wilson_against_reference():
    # statsmodels-free reference: scipy's binomtest Wilson interval
    for k, n in ((0, 10), (5, 100), (250, 10_000), (99, 100)):
        ci = binomtest(k, n).proportion_ci(0.99, method="wilson")
        lo, hi = wilson_interval(k, n, 0.99)
        assert lo == pytest.approx(ci.low, abs=1e-12)
        assert hi == pytest.approx(ci.high, abs=1e-12)
    with pytest.raises(ValueError):
        wilson_interval(1, 0)
    with pytest.raises(ValueError):
        wilson_interval(5, 4)


def test_monte_carlo_basic():
    res = monte_carlo_success(floor_instance(), 300, rng=3)
    assert res.trials == 300 and res.q == 83
    assert res.lower <= res.rate <= res.upper
    with pytest.raises(ValueError):
        monte_carlo_success(floor_instance(), 0)


def test_mo_sweep_examples():
    rep = verify_mo_bound_sweep([2], 2, [1])
    assert rep["checks"] == 2 and rep["violations"] == 0
    assert verify_mo_bound_sweep([1], 1, [2])["max_ratio"] == pytest.approx(5 / mo_bound(1, 2, 1))
    assert verify_mo_bound_sweep([2], 1, [F(1, 1000)])["max_ratio"] <= 1


def test_mo_sweep_detects_violation(monkeypatch):
    import bddlat.oracles as o

    monkeypatch.setattr(o.numerics, "mo_bound", lambda p, r, n: 1.0)
    with pytest.raises(MoBoundViolation):
        o.verify_mo_bound_sweep([2], 1, [1])


def test_transform_lemma_report():
    rng = np.random.default_rng(4)
    yes = random_gapcvp(rng, 2, "YES")
    rep = transform_lemma_report(yes, yes.basis.n + 2, 2)
    assert rep["status"] == "YES" and rep["item1"] and rep["item2"]
    no = random_gapcvp(rng, 2, "NO")
    rep = transform_lemma_report(no, no.basis.n + 1, 2)
    assert rep["status"] == "NO" and rep["item1"] and rep["item3"]

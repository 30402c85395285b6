"""Brute-force ground truth for the reductions.

Everything here recomputes from emitted instances. The coefficient-box scan
does not share code with the Fincke-Pohst enumerator: it bounds each
coefficient through the exact pseudoinverse and the dual norm, then tests
every integer point in the box.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from statistics import NormalDist

import numpy as np

from . import numerics
from .exact import INF, Magnitude, parse_rational
from .instances import BddInstance, GapCvpInstance, StBddInstance
from .lattice import (
    CLOSED,
    OPEN,
    BallQuery,
    Basis,
    as_point,
    closest_vector,
    count_binary_close,
    count_points,
    exists_point,
    lambda1,
    solve_exact,
)
from .reductions import direct_sum_transform, s_p, sparsify_step
from .sparsify import child_seed, make_rng

DEFAULT_CONFIDENCE = 0.99
# Refuse naive scans larger than this many coefficient vectors.
BOX_LIMIT = 50_000_000


class OracleError(RuntimeError):
    pass


class MoBoundViolation(OracleError):
    """A lattice-point count exceeded the counting bound."""


# ------------------------------------------------------------------ CVP / SVP


def brute_cvp(B: Basis, t, p):
    """(closest vector, exact distance) via exact enumeration."""
    d, v = closest_vector(B, t, p)
    return v, d


def pseudoinverse(B: Basis):
    """Exact B^+ = (B^T B)^-1 B^T as a list of n rows of length d."""
    G = B.gram
    cols = []
    for i in range(B.d):
        cols.append(solve_exact(G, list(B.rows[i])))
    return [[cols[i][j] for i in range(B.d)] for j in range(B.n)]


def _dual_norm(row, p):
    """||row||_q with 1/p + 1/q = 1 (Hoelder: |<row, w>| <= ||row||_q ||w||_p)."""
    vals = [abs(float(a)) for a in row]
    if p == INF:
        return sum(vals)
    pf = float(p)
    if pf == 1.0:
        return max(vals)
    q = pf / (pf - 1.0)
    return sum(v**q for v in vals) ** (1.0 / q)


def _box(B: Basis, center, radius: Magnitude):
    """Coefficient ranges covering every lattice point within radius of center."""
    center = as_point(center)
    Bp = pseudoinverse(B)
    y = [sum((a * c for a, c in zip(row, center)), Fraction(0)) for row in Bp]
    R = float(radius)
    ranges = []
    for row, yi in zip(Bp, y):
        w = Fraction(_dual_norm(row, radius.p) * R * (1 + 1e-9) + 1e-12)
        ranges.append(range(math.floor(yi - w), math.ceil(yi + w) + 1))
    return ranges


def _dot(a, b):
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def pair_reduce(B: Basis):
    """Pairwise (Gauss-style) reduction: returns (reduced basis, U) with columns C = B U.

    Repeatedly shortens one column by an integer multiple of another until no
    such step helps. Each step strictly lowers a squared norm, so it stops.
    """
    cols = [list(c) for c in B.columns]
    n = len(cols)
    U = [[int(i == j) for j in range(n)] for i in range(n)]  # U[col][row]
    changed = True
    while changed:
        changed = False
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                m = round(_dot(cols[i], cols[j]) / _dot(cols[j], cols[j]))
                if m == 0:
                    continue
                new = [a - m * b for a, b in zip(cols[i], cols[j])]
                if _dot(new, new) < _dot(cols[i], cols[i]):
                    cols[i] = new
                    U[i] = [a - m * b for a, b in zip(U[i], U[j])]
                    changed = True
    rows = [[cols[j][k] for j in range(n)] for k in range(B.d)]
    return Basis(rows, check=False), [[U[j][i] for j in range(n)] for i in range(n)]


def naive_points(B: Basis, query: BallQuery, exclude_zero=False):
    """Sorted coefficient vectors of all lattice points in the query ball, by box scan.

    The scan runs over a pairwise-reduced basis so skewed inputs keep a small
    box. A vectorized float pass discards points clearly outside the ball;
    every survivor is decided with exact arithmetic.
    """
    R, U = pair_reduce(B)
    pts = _scan(R, query, exclude_zero)
    return sorted(tuple(sum(U[i][j] * x[j] for j in range(B.n)) for i in range(B.n)) for x in pts)


def _scan(B: Basis, query: BallQuery, exclude_zero):
    center = as_point(query.center)
    ranges = _box(B, center, query.radius)
    size = math.prod(len(r) for r in ranges)
    if size > BOX_LIMIT:
        raise OracleError(f"coefficient box has {size} points; instance too large")
    Bf = np.array([[float(a) for a in row] for row in B.rows])
    cf = np.array([float(a) for a in center])
    cut = float(query.radius) * (1 + 1e-6) + 1e-9
    head, tail = ranges[0], ranges[1:]
    combos = list(itertools.product(*tail))
    tail_grid = np.array(combos, dtype=np.int64).reshape(len(combos), B.n - 1)
    out = []
    for x0 in head:
        X = np.hstack([np.full((len(tail_grid), 1), x0, dtype=np.int64), tail_grid])
        diff = np.abs(X @ Bf.T - cf)
        if query.p == INF:
            approx = diff.max(axis=1)
        else:
            pf = float(query.p)
            approx = (diff**pf).sum(axis=1) ** (1.0 / pf)
        for row in X[approx <= cut]:
            x = tuple(int(v) for v in row)
            if exclude_zero and not any(x):
                continue
            v = B.apply(x)
            c = Magnitude.norm([a - b for a, b in zip(v, center)], query.p).compare(query.radius)
            if c < 0 or (c == 0 and query.boundary == CLOSED):
                out.append(x)
    return out


def naive_count(B: Basis, query: BallQuery, exclude_zero=False):
    return len(naive_points(B, query, exclude_zero))


def naive_cvp(B: Basis, t, p):
    """Closest-vector distance by box scan around the rounded pseudoinverse solution."""
    t = as_point(t)
    Bp = pseudoinverse(B)
    x0 = [round(sum((a * c for a, c in zip(row, t)), Fraction(0))) for row in Bp]
    v0 = B.apply(x0)
    best = Magnitude.norm([a - b for a, b in zip(v0, t)], p)
    for x in naive_points(B, BallQuery(p, best, t, CLOSED)):
        m = Magnitude.norm([a - b for a, b in zip(B.apply(x), t)], p)
        if m < best:
            best = m
    return best


def naive_lambda1(B: Basis, p):
    best = None
    for c in B.columns:
        m = Magnitude.norm(c, p)
        if best is None or m < best:
            best = m
    zero = (Fraction(0),) * B.d
    for x in naive_points(B, BallQuery(p, best, zero, CLOSED), exclude_zero=True):
        m = Magnitude.norm(B.apply(x), p)
        if m < best:
            best = m
    return best


# ------------------------------------------------------------------ promises


def gapcvp_status(inst: GapCvpInstance) -> str:
    """"YES", "NO", or "GAP" (neither side of the promise)."""
    one = Magnitude.rational(1, inst.p)
    if count_binary_close(inst.basis, inst.target, inst.p, one) > 0:
        return "YES"
    d, _ = closest_vector(inst.basis, inst.target, inst.p)
    return "NO" if d > one else "GAP"


def check_stbdd_yes(inst: StBddInstance, S: int, T: int) -> bool:
    """N°(L minus 0, r) <= S and at least T binary combinations within alpha r of t."""
    zero = (Fraction(0),) * inst.basis.d
    short = count_points(
        inst.basis, BallQuery(inst.p, Magnitude.rational(inst.r, inst.p), zero, OPEN),
        exclude_zero=True,
    )
    if short > S:
        return False
    return count_binary_close(inst.basis, inst.target, inst.p, inst.close_radius) >= T


def check_bdd_promise(inst: BddInstance, p=None) -> bool:
    """dist_p(t, L) <= alpha * lambda_1(L), exactly."""
    p = inst.p if p is None else p
    d, _ = closest_vector(inst.basis, inst.target, p)
    return d <= inst.alpha * lambda1(inst.basis, p)


def zero_one_yes(B: Basis, r, t, alpha: Magnitude, p) -> bool:
    """(0,1)-BDD YES: no nonzero vector of norm < r, and dist(t, L) <= alpha r."""
    r = parse_rational(r)
    zero = (Fraction(0),) * B.d
    if exists_point(B, BallQuery(p, Magnitude.rational(r, p), zero, OPEN), exclude_zero=True):
        return False
    return exists_point(B, BallQuery(p, alpha * r, as_point(t), CLOSED))


def transform_lemma_report(inst: GapCvpInstance, n: int, alpha, radii=None) -> dict:
    """Check the three direct-sum properties on one input.

    1. N°(L(B), rho) <= N°(Z^n, rho) for each rho in ``radii``.
    2. YES input: at least 2^(n - n') binary combinations within s_p of t.
    3. NO input: dist(t, L(B)) > s_p.
    """
    st = direct_sum_transform(inst, n, alpha)
    p = inst.p
    zero = (Fraction(0),) * st.basis.d
    zn = Basis.identity(n)
    radii = radii or [Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2), Fraction(3)]
    item1 = True
    for rho in radii:
        m = Magnitude.rational(rho, p)
        a = count_points(st.basis, BallQuery(p, m, zero, OPEN))
        b = count_points(zn, BallQuery(p, m, (Fraction(0),) * n, OPEN))
        item1 &= a <= b
    status = gapcvp_status(inst)
    sp = s_p(n, p)
    item2 = item3 = None
    if status == "YES":
        item2 = count_binary_close(st.basis, st.target, p, sp) >= 2 ** (n - inst.basis.n)
    elif status == "NO":
        d, _ = closest_vector(st.basis, st.target, p)
        item3 = d > sp
    return {"status": status, "item1": item1, "item2": item2, "item3": item3}


# ------------------------------------------------------------------ statistics


@dataclass(frozen=True)
class MonteCarloResult:
    successes: int
    trials: int
    rate: float
    lower: float
    upper: float
    confidence: float
    q: int | None = None

    def as_dict(self):
        return dict(self.__dict__)


def wilson_interval(successes: int, trials: int, confidence=DEFAULT_CONFIDENCE):
    """Wilson score interval for a binomial proportion."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    if not 0 <= successes <= trials:
        raise ValueError("successes must lie in [0, trials]")
    z = NormalDist().inv_cdf(0.5 + confidence / 2)
    ph = successes / trials
    den = 1 + z * z / trials
    mid = (ph + z * z / (2 * trials)) / den
    half = z * math.sqrt(ph * (1 - ph) / trials + z * z / (4 * trials * trials)) / den
    return max(0.0, mid - half), min(1.0, mid + half)


def monte_carlo_success(inst: StBddInstance, trials: int, rng=None, policy="smallest",
                        confidence=DEFAULT_CONFIDENCE) -> MonteCarloResult:
    """Fraction of sparsify_step draws whose output is a (0,1)-BDD YES instance."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = make_rng(rng)
    hits = 0
    q = None
    for _ in range(trials):
        cand, draw = sparsify_step(inst, make_rng(child_seed(rng)), policy)
        q = draw.q
        hits += zero_one_yes(cand.basis, cand.r, cand.target, cand.alpha, cand.p)
    lo, hi = wilson_interval(hits, trials, confidence)
    return MonteCarloResult(hits, trials, hits / trials, lo, hi, confidence, q)


# ------------------------------------------------------------------ counting bound


def verify_mo_bound_sweep(p_list, n_max, r_grid) -> dict:
    """Exact N_p(Z^n, r, 0) against the counting bound on a grid; raises on violation."""
    checks = 0
    worst = 0.0
    worst_at = None
    for p in p_list:
        for n in range(1, n_max + 1):
            zero = (Fraction(0),) * n
            zn = Basis.identity(n)
            for r in r_grid:
                r = parse_rational(r)
                if r <= 0:
                    continue
                exact = count_points(zn, BallQuery(p, Magnitude.rational(r, p), zero, CLOSED))
                bound = (
                    (2 * math.floor(r) + 1) ** n
                    if p == INF
                    else numerics.mo_bound(float(p), float(r), n)
                )
                checks += 1
                if exact > bound * (1 + 1e-12):
                    raise MoBoundViolation(
                        f"N_p(Z^{n}, {r}) = {exact} > bound {bound} at p = {p}"
                    )
                ratio = exact / bound
                if ratio > worst:
                    worst, worst_at = ratio, {"p": str(p), "n": n, "r": str(r)}
    return {"checks": checks, "violations": 0, "max_ratio": worst, "max_ratio_at": worst_at}


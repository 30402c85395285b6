"""Instance transforms from GapCVP' to BDD.

Pipeline for finite p (rank n' -> ceil(C n') + 1)::

    GapCVP' --direct_sum_transform--> (S,T)-BDD --sparsify_step--> (0,1)-BDD
            --pad_step--> BDD

For p = inf with C = 1 and alpha = 1/2 the sparsification is skipped (S = 0)
and the whole reduction is deterministic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from . import numerics
from .exact import INF, Magnitude, p_to_str, parse_rational
from .instances import BddInstance, GapCvpInstance, StBddInstance
from .lattice import OPEN, Basis, BallQuery, as_point, count_points, integer_coeffs
from .sparsify import (
    SMALLEST,
    SparsifierDraw,
    child_seed,
    choose_prime,
    make_rng,
    sample_draw,
    shift_target,
    sparsify_basis,
)

# Above this many expected points compute_S_bound falls back to the counting bound.
EXACT_COUNT_LIMIT = 200_000
ALPHA_MARGIN = Fraction(101, 100)
_R_DIGITS = 12


class ParameterError(ValueError):
    """Reduction parameters violate a precondition (alpha too small, T < 10 S, ...)."""


class Verdict(str, Enum):
    YES = "YES"
    NO_OR_UNLUCKY = "NO-OR-UNLUCKY"


def s_p(n: int, p) -> Magnitude:
    """(1/2)(n+1)^(1/p), or 1/2 for p = inf; stored via its p-th power (n+1)/2^p."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return Magnitude(p, [(n + 1, Fraction(1, 2))])


def rational_below(m: Magnitude, digits=_R_DIGITS) -> Fraction:
    """m itself if rational, else the largest multiple of 10^-digits below m."""
    q = m.as_rational()
    if q is not None:
        return q
    unit = Fraction(1, 10**digits)
    r = Fraction(math.floor(float(m) * 10**digits), 10**digits)
    while r > 0 and Magnitude.rational(r, m.p) > m:
        r -= unit
    if r <= 0:
        raise ParameterError("radius underflows the rational grid")
    return r


def _ceil_decimal(x: float, digits=6) -> Fraction:
    return Fraction(math.ceil(x * 10**digits), 10**digits)


@dataclass(frozen=True)
class ReductionParams:
    p: object
    C: Fraction | float
    alpha: Fraction
    n_prime: int
    n: int
    policy: str = SMALLEST
    seed: int | None = None
    alpha_bracket: tuple | None = None

    def as_dict(self):
        return {
            "p": p_to_str(self.p),
            "C": "inf" if self.C == INF else str(self.C),
            "alpha": str(self.alpha),
            "n_prime": self.n_prime,
            "n": self.n,
            "policy": str(self.policy),
            "seed": self.seed,
            "alpha_star_bracket": list(self.alpha_bracket) if self.alpha_bracket else None,
        }


def make_params(p, n_prime, C=None, alpha="auto", policy=SMALLEST, seed=None, tol=1e-6):
    """Validated parameters; ``alpha="auto"`` picks 1.01 x the alpha* bracket top.

    For p = inf the only allowed setting is C = 1, alpha = 1/2.
    """
    if n_prime < 1:
        raise ParameterError("n' must be >= 1")
    if p == INF:
        C = Fraction(1) if C is None else parse_rational(C)
        a = Fraction(1, 2) if alpha == "auto" else parse_rational(alpha)
        if C != 1 or a != Fraction(1, 2):
            raise ParameterError("p = inf supports only C = 1 and alpha = 1/2")
        return ReductionParams(p, C, a, n_prime, n_prime, policy, seed)
    if C is None:
        raise ParameterError("finite p needs a rank ratio C > 1")
    if C == INF or str(C).strip().lower() == "inf":
        raise ParameterError("the pipeline needs a finite rank ratio C")
    C = parse_rational(C)
    if C <= 1:
        raise ParameterError(f"rank ratio C must exceed 1 for finite p, got {C}")
    ar = numerics.alpha_star(float(p), float(C), tol=tol)
    if alpha == "auto":
        a = _ceil_decimal(ar.bracket_hi * float(ALPHA_MARGIN))
    else:
        a = parse_rational(alpha)
        if not a > ar.bracket_hi:
            raise ParameterError(
                f"alpha = {float(a):.6g} is not above alpha*_(p,C) = {ar.value:.6g}"
            )
    n = math.ceil(C * n_prime)
    return ReductionParams(p, C, a, n_prime, n, policy, seed, (ar.bracket_lo, ar.bracket_hi))


def direct_sum_transform(inst: GapCvpInstance, n: int, alpha) -> StBddInstance:
    """B = [[B'/2, 0], [I_n', 0], [0, I_(n-n')]], t = (t'/2, 1/2, ..., 1/2).

    The short radius is a rational r <= s_p(n) / alpha; the stored relative
    distance is then s_p / r >= alpha, so the close radius alpha * r is
    exactly s_p.
    """
    Bp = inst.basis
    n_prime, d_prime, p = Bp.n, Bp.d, inst.p
    if n < n_prime:
        raise ParameterError(f"n = {n} is below n' = {n_prime}")
    alpha = parse_rational(alpha)
    half = Fraction(1, 2)
    rows = []
    for row in Bp.rows:
        rows.append([v * half for v in row] + [0] * (n - n_prime))
    for i in range(n):
        rows.append([int(i == j) for j in range(n)])
    target = tuple(v * half for v in inst.target) + (half,) * n
    sp = s_p(n, p)
    r = rational_below(sp / alpha)
    alpha_eff = sp / r
    meta = {
        "n_prime": n_prime,
        "n": n,
        "T": 2 ** (n - n_prime),
        "alpha_requested": str(alpha),
        "s_p": sp.to_json(),
    }
    return StBddInstance(Basis(rows, check=False), r, target, alpha_eff, p, meta)


@dataclass(frozen=True)
class SBound:
    value: int
    exact: bool


def compute_S_bound(p, n: int, radius) -> SBound:
    """N°_p(Z^n minus {0}, radius, 0): exact at desk scale, else the counting bound."""
    if not isinstance(radius, Magnitude):
        radius = Magnitude.rational(parse_rational(radius), p)
    if p == INF:
        rad = radius.as_rational()
        side = 2 * math.ceil(rad) - 1 if rad > 0 else 0
        feasible = side**n <= EXACT_COUNT_LIMIT
    else:
        feasible = numerics.mo_bound(float(p), float(radius), n) <= EXACT_COUNT_LIMIT
    if feasible:
        zero = (Fraction(0),) * n
        c = count_points(Basis.identity(n), BallQuery(p, radius, zero, OPEN), exclude_zero=True)
        return SBound(c, True)
    return SBound(math.floor(numerics.mo_bound(float(p), float(radius), n)), False)


@dataclass(frozen=True)
class BddCandidate:
    """Sparsified (0,1)-BDD candidate (B', r, t') before padding."""

    basis: Basis
    r: Fraction
    target: tuple
    alpha: Magnitude
    p: object


def _T_and_S(inst: StBddInstance):
    T = inst.meta.get("T")
    if T is None:
        raise ParameterError("instance meta lacks T")
    S = inst.meta.get("S_bound")
    if S is None:
        S = compute_S_bound(inst.p, inst.basis.n, inst.r).value
    return int(T), int(S)


def sparsify_step(inst: StBddInstance, rng=None, policy=SMALLEST):
    """(S,T)-BDD -> (0,1)-BDD candidate by sparsifying with a prime q in [10T, 20T].

    Requires T >= 10 S. NO instances stay NO for every draw, since L' is a
    sublattice of L and t' differs from t by a vector of L.
    """
    T, S = _T_and_S(inst)
    if T < 10 * S:
        raise ParameterError(f"T = {T} < 10 S = {10 * S}; sparsification guarantee void")
    rng = make_rng(rng)
    q = choose_prime(T, policy, rng)
    draw = sample_draw(q, inst.basis.n, rng)
    Bs = sparsify_basis(inst.basis, draw)
    ts = shift_target(inst.target, inst.basis, draw)
    return BddCandidate(Bs, inst.r, ts, inst.alpha, inst.p), draw


def pad_step(B: Basis, r, t, alpha: Magnitude, p, meta=None) -> BddInstance:
    """B'' = [[B, 0], [0, r]], t'' = (t, 0): caps lambda_1 at r, rank + 1."""
    r = parse_rational(r)
    if r <= 0:
        raise ParameterError("r must be positive")
    rows = [list(row) + [0] for row in B.rows]
    rows.append([0] * B.n + [r])
    return BddInstance(Basis(rows, check=False), tuple(t) + (Fraction(0),), alpha, p, meta or {})


def strip_solution(v):
    """BDD answer (v, z r) -> v."""
    return tuple(v[:-1])


def normalize_threshold(B: Basis, t, r, r_star, p):
    """Move a query-side threshold r to a fixed r_star >= r (rank preserved).

    Returns (B with a zero row appended, (t, (r_star^p - r^p)^(1/p))). The new
    coordinate becomes a target entry, so it must be rational.
    """
    if p == INF:
        raise ParameterError("threshold normalization needs finite p")
    r, r_star = parse_rational(r), parse_rational(r_star)
    if r < 0 or r > r_star:
        raise ParameterError("need 0 <= r <= r_star")
    pq = Fraction(p)
    if r == r_star:
        coord = Fraction(0)
    elif r == 0:
        coord = r_star
    elif pq.denominator == 1:
        a = pq.numerator
        coord = Magnitude.from_pth_power(r_star**a - r**a, p).as_rational()
    else:
        coord = None
    if coord is None:
        raise ParameterError("appended coordinate (r*^p - r^p)^(1/p) is not rational")
    rows = [list(row) for row in B.rows] + [[0] * B.n]
    return Basis(rows, check=False), tuple(as_point(t)) + (coord,)


def full_pipeline(inst: GapCvpInstance, params: ReductionParams, rng=None):
    """Compose the reductions; returns ``(BddInstance, trace)``."""
    if inst.p != params.p:
        raise ParameterError("instance and parameters use different norm orders")
    if inst.basis.n != params.n_prime:
        raise ParameterError(f"instance rank {inst.basis.n} != n' = {params.n_prime}")
    rng = make_rng(params.seed if rng is None else rng)
    st = direct_sum_transform(inst, params.n, params.alpha)
    S = compute_S_bound(params.p, params.n, st.r)
    st = StBddInstance(
        st.basis, st.r, st.target, st.alpha, st.p,
        dict(st.meta, S_bound=S.value, S_exact=S.exact, C=str(params.C)),
    )
    trace = {"params": params.as_dict(), "stbdd": st.to_json()}
    if params.p == INF:
        if S.value != 0:
            raise ParameterError("p = inf branch needs S = 0")
        bdd = pad_step(st.basis, st.r, st.target, st.alpha, st.p, _bdd_meta(st, None))
        trace["draw"] = None
    else:
        cand, draw = sparsify_step(st, rng, params.policy)
        bdd = pad_step(cand.basis, cand.r, cand.target, cand.alpha, cand.p, _bdd_meta(st, draw))
        trace["draw"] = draw.as_dict()
    trace["bdd"] = bdd.to_json()
    return bdd, trace


def _bdd_meta(st: StBddInstance, draw: SparsifierDraw | None):
    return {
        "r": str(st.r),
        "close_radius": st.close_radius.to_json(),
        "rank": st.basis.n + 1,
        "q": draw.q if draw else None,
    }


@dataclass
class Decision:
    verdict: Verdict
    trials_run: int
    traces: list = field(default_factory=list, repr=False)


def verify_answer(bdd: BddInstance, r, alpha: Magnitude, answer) -> bool:
    """Exact check that ``answer`` lies in L(B'') and its stripped part is within alpha r."""
    if answer is None or len(answer) != bdd.basis.d:
        return False
    if integer_coeffs(bdd.basis, answer) is None:
        return False
    v = strip_solution(answer)
    t = strip_solution(bdd.target)
    diff = [a - b for a, b in zip(v, t)]
    return Magnitude.norm(diff, bdd.p) <= alpha * parse_rational(r)


def decide_cvp(inst: GapCvpInstance, params: ReductionParams, bdd_solver, trials=200, rng=None,
               keep_traces=False) -> Decision:
    """One-sided decision for GapCVP' through the BDD solver.

    YES only when a solver answer verifies exactly, so NO instances are never
    reported YES whatever the solver returns.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = make_rng(params.seed if rng is None else rng)
    traces = []
    deterministic = params.p == INF
    for k in range(trials):
        bdd, trace = full_pipeline(inst, params, make_rng(child_seed(rng)))
        if keep_traces:
            traces.append(trace)
        r = parse_rational(trace["stbdd"]["r"])
        alpha = Magnitude.from_json(trace["stbdd"]["alpha"], inst.p)
        if verify_answer(bdd, r, alpha, bdd_solver(bdd)):
            return Decision(Verdict.YES, k + 1, traces)
        if deterministic:
            return Decision(Verdict.NO_OR_UNLUCKY, k + 1, traces)
    return Decision(Verdict.NO_OR_UNLUCKY, trials, traces)

"""Exact-rational lattices: bases, coefficients, HNF, and l_p point enumeration.

Enumeration runs Fincke-Pohst over an l2 ellipsoid that contains the
requested l_p ball (floating point, slightly inflated), then decides every
candidate exactly on integer-scaled coordinates. Floats only ever prune
candidates that are provably outside the ellipsoid.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce

import numpy as np

from . import _kernels
from .exact import INF, Magnitude, parse_rational

CLOSED = "closed"
OPEN = "open"

_INFLATE = 1e-9


class LatticeError(ValueError):
    """Invalid lattice input (rank deficiency, point outside span, ...)."""


def _lcm(a, b):
    return a * b // math.gcd(a, b)


def as_point(values) -> tuple:
    return tuple(parse_rational(v) for v in values)


def solve_exact(A, b):
    """Solve the square system A x = b over the rationals (Gauss-Jordan)."""
    n = len(A)
    M = [list(map(Fraction, row)) + [Fraction(b[i])] for i, row in enumerate(A)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            raise LatticeError("singular system")
        M[col], M[piv] = M[piv], M[col]
        inv = 1 / M[col][col]
        M[col] = [v * inv for v in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [a - f * c for a, c in zip(M[r], M[col])]
    return [M[i][n] for i in range(n)]


def det_exact(A):
    """Determinant of a square rational matrix."""
    n = len(A)
    M = [list(map(Fraction, row)) for row in A]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            det = -det
        det *= M[col][col]
        for r in range(col + 1, n):
            if M[r][col] != 0:
                f = M[r][col] / M[col][col]
                M[r] = [a - f * c for a, c in zip(M[r], M[col])]
    return det


class Basis:
    """d x n rational matrix with linearly independent columns."""

    def __init__(self, rows, check=True):
        rows = tuple(tuple(parse_rational(v) for v in row) for row in rows)
        if not rows or not rows[0]:
            raise LatticeError("basis must have at least one row and column")
        n = len(rows[0])
        if any(len(r) != n for r in rows):
            raise LatticeError("basis rows have different lengths")
        if len(rows) < n:
            raise LatticeError(f"{len(rows)} x {n} basis cannot have independent columns")
        self.rows = rows
        self.d = len(rows)
        self.n = n
        if check and det_exact(self.gram) == 0:
            raise LatticeError("basis columns are linearly dependent")

    @classmethod
    def from_columns(cls, cols, check=True):
        cols = [list(c) for c in cols]
        return cls([list(r) for r in zip(*cols)], check=check)

    @classmethod
    def identity(cls, n):
        return cls([[int(i == j) for j in range(n)] for i in range(n)], check=False)

    def __eq__(self, other):
        return isinstance(other, Basis) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"Basis({self.d}x{self.n})"

    @property
    def columns(self):
        return [tuple(r[j] for r in self.rows) for j in range(self.n)]

    def apply(self, x):
        """B x for a rational or integer coefficient vector."""
        if len(x) != self.n:
            raise LatticeError("coefficient length does not match rank")
        return tuple(sum((r[j] * x[j] for j in range(self.n)), Fraction(0)) for r in self.rows)

    def times_integer_matrix(self, U):
        """B U for an n x m integer matrix (list of rows)."""
        m = len(U[0])
        return Basis(
            [[sum((r[k] * U[k][j] for k in range(self.n)), Fraction(0)) for j in range(m)]
             for r in self.rows],
            check=False,
        )

    @cached_property
    def gram(self):
        cols = self.columns
        return [[sum((a * b for a, b in zip(ci, cj)), Fraction(0)) for cj in cols] for ci in cols]

    @cached_property
    def denominator(self):
        return reduce(_lcm, (v.denominator for r in self.rows for v in r), 1)

    @cached_property
    def _cholesky(self):
        """Fincke-Pohst data (mu, bstar_sq) from the float Cholesky factor of the Gram."""
        G = np.array([[float(v) for v in row] for row in self.gram])
        L = np.linalg.cholesky(G)
        R = L.T
        diag = np.diag(R).copy()
        mu = (R / diag[:, None]).tolist()
        return mu, (diag**2).tolist()

    @cached_property
    def reduced(self):
        """(R, U): an LLL-reduced basis R = B U of the same lattice, U unimodular."""
        return lll_reduce(self)

    def to_float(self):
        return np.array([[float(v) for v in r] for r in self.rows])


def lll_reduce(B: Basis, delta=Fraction(3, 4)):
    """Exact LLL reduction; returns (R, U) with R = B U and U unimodular (list of rows)."""
    n = B.n
    b = [list(c) for c in B.columns]
    u = [[int(i == j) for i in range(n)] for j in range(n)]  # u[j] = column j of U

    def dot(x, y):
        return sum((p * q for p, q in zip(x, y)), Fraction(0))

    def gso():
        bs, mu, nrm = [], [[Fraction(0)] * n for _ in range(n)], []
        for i in range(n):
            v = list(b[i])
            for j in range(i):
                mu[i][j] = dot(b[i], bs[j]) / nrm[j]
                v = [a - mu[i][j] * c for a, c in zip(v, bs[j])]
            bs.append(v)
            nrm.append(dot(v, v))
        return mu, nrm

    mu, nrm = gso()
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                b[k] = [a - q * c for a, c in zip(b[k], b[j])]
                u[k] = [a - q * c for a, c in zip(u[k], u[j])]
                for i in range(j):
                    mu[k][i] -= q * mu[j][i]
                mu[k][j] -= q
        if nrm[k] >= (delta - mu[k][k - 1] ** 2) * nrm[k - 1]:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            u[k], u[k - 1] = u[k - 1], u[k]
            for j in range(k - 1):
                mu[k][j], mu[k - 1][j] = mu[k - 1][j], mu[k][j]
            m = mu[k][k - 1]
            big = nrm[k] + m * m * nrm[k - 1]
            mu[k][k - 1] = m * nrm[k - 1] / big
            nrm[k] = nrm[k - 1] * nrm[k] / big
            nrm[k - 1] = big
            for i in range(k + 1, n):
                t = mu[i][k]
                mu[i][k] = mu[i][k - 1] - m * t
                mu[i][k - 1] = t + mu[k][k - 1] * mu[i][k]
            k = max(k - 1, 1)
    R = Basis.from_columns(b, check=False)
    U = [[u[j][i] for j in range(n)] for i in range(n)]
    return R, U


def coeffs(B: Basis, v):
    """The unique c with B c = v (i.e. B^+ v), exactly; raises if v is off the span."""
    v = as_point(v)
    if len(v) != B.d:
        raise LatticeError("vector dimension does not match basis")
    rhs = [sum((r[j] * v[i] for i, r in enumerate(B.rows)), Fraction(0)) for j in range(B.n)]
    c = solve_exact(B.gram, rhs)
    if B.apply(c) != v:
        raise LatticeError("vector is not in the span of the basis")
    return tuple(c)


def integer_coeffs(B: Basis, v):
    """Integer coefficient vector of a lattice vector, or None if v is not in L(B)."""
    try:
        c = coeffs(B, v)
    except LatticeError:
        return None
    if any(x.denominator != 1 for x in c):
        return None
    return tuple(int(x) for x in c)


# ---------------------------------------------------------------- HNF


def hnf(M):
    """Column-style Hermite normal form of an integer matrix with full column rank.

    Returns ``(H, U)`` with ``H = M U``, U unimodular, H in lower echelon form:
    each column k has a positive pivot in row r_k (r_0 < r_1 < ...), zeros
    above it, and entries left of the pivot reduced into [0, pivot).
    """
    m = len(M)
    n = len(M[0])
    H = [list(map(int, row)) for row in M]
    U = [[int(i == j) for j in range(n)] for i in range(n)]

    def colop(dst, src, f):
        # column dst -= f * column src
        for row in H:
            row[dst] -= f * row[src]
        for row in U:
            row[dst] -= f * row[src]

    def swap(a, b):
        for row in H:
            row[a], row[b] = row[b], row[a]
        for row in U:
            row[a], row[b] = row[b], row[a]

    def negate(a):
        for row in H:
            row[a] = -row[a]
        for row in U:
            row[a] = -row[a]

    k = 0
    for i in range(m):
        if k == n:
            break
        # Euclid across columns k..n-1 on row i
        while True:
            nz = [j for j in range(k, n) if H[i][j] != 0]
            if len(nz) <= 1:
                break
            j_min = min(nz, key=lambda j: abs(H[i][j]))
            for j in nz:
                if j != j_min:
                    colop(j, j_min, H[i][j] // H[i][j_min])
        nz = [j for j in range(k, n) if H[i][j] != 0]
        if not nz:
            continue
        if nz[0] != k:
            swap(nz[0], k)
        if H[i][k] < 0:
            negate(k)
        piv = H[i][k]
        for j in range(k):
            colop(j, k, H[i][j] // piv)
        k += 1
    if k < n:
        raise LatticeError("matrix does not have full column rank")
    return H, U


def hnf_det(M):
    """|det| of the lattice generated by a square integer matrix, via HNF pivots."""
    H, _ = hnf(M)
    n = len(H[0])
    if len(H) != n:
        raise LatticeError("determinant needs a square matrix")
    return math.prod(H[i][i] for i in range(n))


# ---------------------------------------------------------------- enumeration


@dataclass(frozen=True)
class BallQuery:
    p: object
    radius: Magnitude
    center: tuple
    boundary: str = CLOSED

    def __post_init__(self):
        if self.boundary not in (CLOSED, OPEN):
            raise ValueError(f"boundary must be {CLOSED!r} or {OPEN!r}")
        if self.radius.p != self.p:
            raise ValueError("radius and query use different norm orders")


def _l2_cover_factor(p, d):
    """c with ||x||_2 <= c ||x||_p on R^d."""
    if p == INF:
        return math.sqrt(d)
    pf = float(p)
    if pf <= 2:
        return 1.0
    return d ** (0.5 - 1.0 / pf)


def _ball_test(radius: Magnitude, scale: int, boundary):
    """Exact predicate on integer vectors w: ||w||_p <= scale * radius (or <)."""
    p = radius.p
    R = radius * scale
    strict = boundary == OPEN
    if p == INF:
        top = R.terms[0][1] if R.terms else Fraction(0)
        if strict:
            return lambda w: max(map(abs, w), default=0) < top
        return lambda w: max(map(abs, w), default=0) <= top
    pq = Fraction(p)
    if pq.denominator == 1:
        a = pq.numerator
        Rp = R.pth_power()
        if strict:
            return lambda w: sum(abs(x) ** a for x in w) < Rp
        return lambda w: sum(abs(x) ** a for x in w) <= Rp

    def test(w):
        c = Magnitude.norm(w, p).compare(R)
        return c < 0 if strict else c <= 0

    return test


class _Scaled:
    """Integer copies of B and t over a common denominator."""

    def __init__(self, B: Basis, t):
        D = reduce(_lcm, (v.denominator for v in t), B.denominator)
        self.D = D
        self.B = [[int(v * D) for v in row] for row in B.rows]
        self.t = [int(v * D) for v in t]

    def residual(self, x):
        return [sum(b * xi for b, xi in zip(row, x)) - ti for row, ti in zip(self.B, self.t)]


def _candidates(B: Basis, t, radius_float, p):
    """Integer x with ||Bx - t||_2 within the l2 cover of the l_p ball (superset)."""
    rhs = [sum((r[j] * t[i] for i, r in enumerate(B.rows)), Fraction(0)) for j in range(B.n)]
    y = solve_exact(B.gram, rhs)
    proj = B.apply(y)
    perp_sq = float(sum(((a - b) ** 2 for a, b in zip(t, proj)), Fraction(0)))
    r2 = radius_float * _l2_cover_factor(p, B.d)
    eff = r2 * r2 * (1 + _INFLATE) + _INFLATE * perp_sq + 1e-12 - perp_sq
    if eff < 0:
        return []
    R, U = B.reduced
    mu, bstar_sq = R._cholesky
    yr = solve_exact(U, y)  # center in reduced coordinates
    out = _kernels.fp_enumerate(mu, bstar_sq, [float(v) for v in yr], eff)
    return [tuple(sum(U[i][j] * x[j] for j in range(B.n)) for i in range(B.n)) for x in out]


def enumerate_points(B: Basis, query: BallQuery, exclude_zero=False, limit=None):
    """Lattice points v with ||v - center||_p <= radius (< for OPEN).

    Returns a list of ``(v, x)`` pairs: the point and its integer coefficient
    vector. ``exclude_zero`` drops the zero lattice vector. ``limit`` stops
    after that many points.
    """
    center = as_point(query.center)
    if len(center) != B.d:
        raise LatticeError("center dimension does not match basis")
    sc = _Scaled(B, center)
    test = _ball_test(query.radius, sc.D, query.boundary)
    out = []
    for x in _candidates(B, center, float(query.radius), query.p):
        if exclude_zero and not any(x):
            continue
        if test(sc.residual(x)):
            out.append((B.apply(x), x))
            if limit is not None and len(out) >= limit:
                break
    return out


def count_points(B: Basis, query: BallQuery, exclude_zero=False):
    """N_p (CLOSED) or N°_p (OPEN) of L(B); ``exclude_zero`` gives L(B) minus {0}."""
    center = as_point(query.center)
    sc = _Scaled(B, center)
    test = _ball_test(query.radius, sc.D, query.boundary)
    total = 0
    for x in _candidates(B, center, float(query.radius), query.p):
        if exclude_zero and not any(x):
            continue
        if test(sc.residual(x)):
            total += 1
    return total


def exists_point(B: Basis, query: BallQuery, exclude_zero=False):
    return bool(enumerate_points(B, query, exclude_zero=exclude_zero, limit=1))


def norm(v, p) -> Magnitude:
    """||v||_p as an exact magnitude."""
    return Magnitude.norm(v, p)


def shortest_vector(B: Basis, p):
    """(lambda_1^(p)(L(B)), a shortest nonzero vector)."""
    best_v = None
    best = None
    for col in B.reduced[0].columns:
        m = norm(col, p)
        if best is None or m < best:
            best, best_v = m, col
    zero = (Fraction(0),) * B.d
    pts = enumerate_points(B, BallQuery(p, best, zero, CLOSED), exclude_zero=True)
    for v, _ in pts:
        m = norm(v, p)
        if m < best:
            best, best_v = m, v
    return best, best_v


def lambda1(B: Basis, p) -> Magnitude:
    return shortest_vector(B, p)[0]


def closest_vector(B: Basis, t, p):
    """(dist_p(t, L(B)), a closest lattice vector), exact."""
    t = as_point(t)
    rhs = [sum((r[j] * t[i] for i, r in enumerate(B.rows)), Fraction(0)) for j in range(B.n)]
    R, U = B.reduced
    # Babai rounding on the reduced basis gives the starting radius
    yr = solve_exact(U, solve_exact(B.gram, rhs))
    v0 = R.apply([math.floor(c + Fraction(1, 2)) for c in yr])
    best = norm([a - b for a, b in zip(v0, t)], p)
    best_v = v0
    for v, _ in enumerate_points(B, BallQuery(p, best, t, CLOSED)):
        m = norm([a - b for a, b in zip(v, t)], p)
        if m < best:
            best, best_v = m, v
    return best, best_v


def dist(B: Basis, t, p):
    """Alias of :func:`closest_vector` returning (magnitude, closest point)."""
    return closest_vector(B, t, p)


def count_binary_close(B: Basis, t, p, s: Magnitude, boundary=CLOSED):
    """|{x in {0,1}^n : ||Bx - t||_p <= s}| by exhaustive enumeration."""
    t = as_point(t)
    sc = _Scaled(B, t)
    test = _ball_test(s, sc.D, boundary)
    return sum(1 for x in itertools.product((0, 1), repeat=B.n) if test(sc.residual(x)))

"""Random sparsification L' = {v in L : <z, B^+ v> = 0 mod q} and target shifts."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .lattice import Basis, as_point

SMALLEST = "smallest"
RANDOM = "random"

# Deterministic Miller-Rabin witnesses, valid for n < 3.3e14 (and far beyond).
_MR_BASES = (2, 3, 5, 7, 11, 13, 17)
_MR_LIMIT = 341_550_071_728_321


class PrimePolicy(str, Enum):
    SMALLEST = SMALLEST
    RANDOM = RANDOM


def make_rng(seed=None):
    """numpy Generator from an int seed, a SeedSequence, or an existing Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def child_seed(rng) -> int:
    """Fresh 63-bit seed drawn from ``rng``; replaying it reproduces the child stream."""
    return int(rng.integers(0, 2**63 - 1))


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for sp in _MR_BASES:
        if n % sp == 0:
            return n == sp
    if n >= _MR_LIMIT:
        raise ValueError(f"{n} exceeds the deterministic Miller-Rabin range")
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def choose_prime(T: int, policy=SMALLEST, rng=None) -> int:
    """A prime q with 10 T <= q <= 20 T (one exists by Bertrand's postulate)."""
    if T < 1:
        raise ValueError("T must be >= 1")
    lo, hi = 10 * T, 20 * T
    policy = PrimePolicy(policy)
    if policy is PrimePolicy.SMALLEST:
        q = lo
        while not is_prime(q):
            q += 1
        return q
    rng = make_rng(rng)
    # rejection sampling is uniform over the primes in range
    while True:
        q = int(rng.integers(lo, hi + 1))
        if is_prime(q):
            return q


@dataclass(frozen=True)
class SparsifierDraw:
    """Randomness of one sparsification attempt."""

    q: int
    z: tuple
    c: tuple
    seed: int

    def __post_init__(self):
        if not is_prime(self.q):
            raise ValueError(f"q = {self.q} is not prime")
        if any(not 0 <= v < self.q for v in self.z + self.c):
            raise ValueError("draw entries must lie in [0, q)")

    def as_dict(self):
        return {"q": self.q, "z": list(self.z), "c": list(self.c), "seed": self.seed}


def sample_draw(q: int, n: int, rng=None, seed=None) -> SparsifierDraw:
    """Uniform independent z, c in Z_q^n.

    The vectors come from a child generator whose seed is recorded, so
    ``sample_draw(q, n, seed=draw.seed)`` replays the draw.
    """
    if seed is None:
        seed = child_seed(make_rng(rng))
    g = np.random.default_rng(seed)
    z = tuple(int(v) for v in g.integers(0, q, size=n))
    c = tuple(int(v) for v in g.integers(0, q, size=n))
    return SparsifierDraw(q, z, c, int(seed))


def coefficient_sublattice(z, q: int):
    """Basis (n x n integer rows) of {x in Z^n : <z, x> = 0 mod q}.

    With a pivot i where z_i is a unit mod q, the columns are q e_i and
    e_j - (z_j / z_i mod q) e_i for j != i; the index is q.
    """
    n = len(z)
    zr = [v % q for v in z]
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    piv = next((i for i, v in enumerate(zr) if v), None)
    if piv is None:
        return U
    inv = pow(zr[piv], -1, q)
    U[piv][piv] = q
    for j in range(n):
        if j != piv:
            U[piv][j] = -(zr[j] * inv % q)
    return U


def sparsify_basis(B: Basis, draw: SparsifierDraw) -> Basis:
    """Basis of L' = {v in L(B) : <z, B^+ v> = 0 mod q}, namely B U."""
    if len(draw.z) != B.n:
        raise ValueError("draw dimension does not match basis rank")
    return B.times_integer_matrix(coefficient_sublattice(draw.z, draw.q))


def shift_target(t, B: Basis, draw: SparsifierDraw):
    """t + B c with c read as an integer vector in [0, q)."""
    t = as_point(t)
    if len(t) != B.d or len(draw.c) != B.n:
        raise ValueError("dimension mismatch")
    shift = B.apply(draw.c)
    return tuple(a + b for a, b in zip(t, shift))

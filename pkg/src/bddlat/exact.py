"""Exact magnitudes for l_p norms with rational p.

A :class:`Magnitude` is a non-negative real ``m`` stored through its p-th
power as a combination of rational bases,

    m^p = sum_j coef_j * base_j^p        (finite p)
    m   = max_j base_j                   (p = inf)

Vector norms (coef 1, base |v_i|), rational radii (coef 1, base r), radii
given by their p-th power R (coef R, base 1), and s_p = (1/2)(n+1)^(1/p)
(coef n+1, base 1/2) all fit this shape, and it is closed under products,
which is all the reductions need. Comparisons are decided exactly: for
p = a/b the p-th powers are sums of b-th roots of rationals, grouped into
classes whose ratios are rational b-th powers. Distinct classes are
linearly independent over Q, so a sum vanishes iff every class coefficient
does; otherwise the sign is resolved with rational interval bounds from
integer roots.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

import gmpy2

INF = math.inf

# Largest denominator accepted for a rational norm order.
MAX_P_DENOMINATOR = 64


def parse_rational(value) -> Fraction:
    """Exact rational from int, Fraction, or a string like "3/4" or "0.125"."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        # floats are taken at their shortest decimal repr
        return Fraction(repr(value))
    raise TypeError(f"cannot read {value!r} as a rational")


def parse_p(value):
    """Norm order: ``inf`` or a rational >= 1 with small denominator."""
    if isinstance(value, str) and value.strip().lower() in ("inf", "infinity", "oo"):
        return INF
    if isinstance(value, float) and math.isinf(value):
        if value < 0:
            raise ValueError("norm order must be >= 1")
        return INF
    p = parse_rational(value)
    if p < 1:
        raise ValueError(f"norm order must be >= 1, got {p}")
    if p.denominator > MAX_P_DENOMINATOR:
        raise ValueError(f"norm order {p} has denominator > {MAX_P_DENOMINATOR}")
    return p


def p_to_str(p) -> str:
    return "inf" if p == INF else str(p)


def _iroot(x: int, b: int):
    r, exact = gmpy2.iroot(x, b)
    return int(r), bool(exact)


def _rational_root(t: Fraction, b: int):
    """t^(1/b) if it is rational, else None (t >= 0)."""
    rn, en = _iroot(t.numerator, b)
    if not en:
        return None
    rd, ed = _iroot(t.denominator, b)
    if not ed:
        return None
    return Fraction(rn, rd)


def _root_bounds(t: Fraction, b: int, bits: int):
    """Rational lo <= t^(1/b) <= hi with hi - lo = 1 / (den * 2^bits)."""
    num, den = t.numerator, t.denominator
    m = num * den ** (b - 1)
    r, _ = _iroot(m << (bits * b), b)
    scale = den << bits
    return Fraction(r, scale), Fraction(r + 1, scale)


def radical_sign(terms, p) -> int:
    """Sign of sum_j c_j * x_j^p for rational c_j and rational x_j >= 0."""
    p = Fraction(p)
    a, b = p.numerator, p.denominator
    live = [(Fraction(c), Fraction(x)) for c, x in terms if c != 0 and x != 0]
    if not live:
        return 0
    if b == 1:
        s = sum(c * x**a for c, x in live)
        return (s > 0) - (s < 0)

    # Cheap float decision when the sum is far from zero.
    try:
        fl = [float(c) * float(x) ** float(p) for c, x in live]
        total = math.fsum(fl)
        scale = math.fsum(abs(v) for v in fl)
        if math.isfinite(total) and abs(total) > 1e-9 * scale:
            return 1 if total > 0 else -1
    except (OverflowError, ZeroDivisionError):
        pass

    rational = Fraction(0)
    classes: list[list] = []  # [representative t, coefficient]
    for c, x in live:
        t = x**a
        root = _rational_root(t, b)
        if root is not None:
            rational += c * root
            continue
        for cls in classes:
            k = _rational_root(t / cls[0], b)
            if k is not None:
                cls[1] += c * k
                break
        else:
            classes.append([t, c])
    classes = [(t, c) for t, c in classes if c != 0]
    if not classes:
        return (rational > 0) - (rational < 0)

    bits = 32
    while True:
        lo = hi = rational
        for t, c in classes:
            rl, rh = _root_bounds(t, b, bits)
            if c > 0:
                lo += c * rl
                hi += c * rh
            else:
                lo += c * rh
                hi += c * rl
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        bits *= 2


class Magnitude:
    """Exact non-negative real measured in an l_p norm; see module docstring."""

    __slots__ = ("p", "terms")

    def __init__(self, p, terms):
        self.p = p
        cleaned = []
        for c, x in terms:
            c, x = parse_rational(c), parse_rational(x)
            if x < 0:
                raise ValueError("magnitude bases must be non-negative")
            if c < 0:
                raise ValueError("magnitude coefficients must be non-negative")
            if c != 0 and x != 0:
                cleaned.append((c, x))
        if p == INF:
            top = max((x for _, x in cleaned), default=Fraction(0))
            cleaned = [(Fraction(1), top)] if top else []
        self.terms = tuple(cleaned)

    # constructors
    @classmethod
    def rational(cls, value, p):
        return cls(p, [(1, value)])

    @classmethod
    def from_pth_power(cls, value, p):
        if p == INF:
            raise ValueError("p-th power form is meaningless for p = inf")
        return cls(p, [(value, 1)])

    @classmethod
    def norm(cls, vector, p):
        """||vector||_p."""
        if p == INF:
            return cls(p, [(1, max((abs(parse_rational(v)) for v in vector), default=0))])
        return cls(p, [(1, abs(parse_rational(v))) for v in vector])

    @classmethod
    def zero(cls, p):
        return cls(p, [])

    # arithmetic
    def __mul__(self, other):
        if isinstance(other, Magnitude):
            self._same_p(other)
            return Magnitude(
                self.p,
                [(c1 * c2, x1 * x2) for c1, x1 in self.terms for c2, x2 in other.terms],
            )
        f = parse_rational(other)
        if f < 0:
            raise ValueError("magnitudes scale by non-negative rationals only")
        return Magnitude(self.p, [(c, x * f) for c, x in self.terms])

    __rmul__ = __mul__

    def __truediv__(self, other):
        f = parse_rational(other)
        if f <= 0:
            raise ValueError("divide by a positive rational")
        return self * (1 / f)

    def reciprocal_scale(self, other: "Magnitude") -> "Magnitude":
        """self / other when ``other`` is a single-term magnitude."""
        self._same_p(other)
        if len(other.terms) != 1:
            raise ValueError("can only divide by a single-term magnitude")
        c, x = other.terms[0]
        return Magnitude(self.p, [(ci / c, xi / x) for ci, xi in self.terms])

    # comparison
    def _same_p(self, other):
        if self.p != other.p:
            raise ValueError(f"norm orders differ: {self.p} vs {other.p}")

    def compare(self, other) -> int:
        """-1, 0, 1 as self <, ==, > other."""
        if not isinstance(other, Magnitude):
            other = Magnitude.rational(other, self.p)
        self._same_p(other)
        if self.p == INF:
            a = self.terms[0][1] if self.terms else Fraction(0)
            b = other.terms[0][1] if other.terms else Fraction(0)
            return (a > b) - (a < b)
        return radical_sign(
            list(self.terms) + [(-c, x) for c, x in other.terms], self.p
        )

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    def __eq__(self, other):
        if not isinstance(other, (Magnitude, int, Fraction)):
            return NotImplemented
        return self.compare(other) == 0

    __hash__ = None  # type: ignore[assignment]

    # views
    def pth_power(self) -> Fraction:
        """Exact m^p; defined when p is an integer."""
        if self.p == INF or Fraction(self.p).denominator != 1:
            raise ValueError("p-th power is rational only for integer p")
        a = int(self.p)
        return sum((c * x**a for c, x in self.terms), Fraction(0))

    def as_rational(self):
        """The exact value if it is rational, else None."""
        if not self.terms:
            return Fraction(0)
        if self.p == INF:
            return self.terms[0][1]
        p = Fraction(self.p)
        if len(self.terms) == 1:
            c, x = self.terms[0]
            root = _rational_root(c**p.denominator, p.numerator)
            if root is None:
                return None
            return root * x
        if p.denominator == 1:
            return _rational_root(self.pth_power(), p.numerator)
        return None

    def __float__(self):
        if not self.terms:
            return 0.0
        if self.p == INF:
            return float(self.terms[0][1])
        pf = float(self.p)
        # factor out the largest base to stay in range
        top = max(x for _, x in self.terms)
        s = math.fsum(float(c) * (float(x / top) ** pf) for c, x in self.terms)
        return float(top) * s ** (1.0 / pf)

    def __repr__(self):
        return f"Magnitude(p={p_to_str(self.p)}, ~{float(self):.12g}, terms={len(self.terms)})"

    def to_json(self):
        """Rational string when exact value is rational, else explicit form."""
        q = self.as_rational()
        if q is not None:
            return str(q)
        if self.p != INF and Fraction(self.p).denominator == 1:
            return {"pth_power": str(self.pth_power())}
        return {"terms": [[str(c), str(x)] for c, x in self.terms]}

    @classmethod
    def from_json(cls, obj, p):
        if isinstance(obj, dict):
            if "pth_power" in obj:
                return cls.from_pth_power(parse_rational(obj["pth_power"]), p)
            if "terms" in obj:
                return cls(p, [(parse_rational(c), parse_rational(x)) for c, x in obj["terms"]])
            raise ValueError(f"unrecognized magnitude object {obj!r}")
        return cls.rational(parse_rational(obj), p)

    def equals_exactly(self, other: "Magnitude") -> bool:
        """Structural equality (same p, same term list)."""
        return self.p == other.p and self.terms == other.terms

"""Instance types of the reduction pipeline and their JSON file format.

File schema::

    {"kind": "gapcvp" | "stbdd" | "bdd",
     "p": "inf" | "<rational>",
     "basis": [["a/b", ...], ...],        # row-major, d rows
     "target": ["a/b", ...],
     "r": "<rational>" | {"pth_power": "<rational>"},     # stbdd
     "alpha": "<rational>" | {"pth_power": ...} | {"terms": [[c, x], ...]},
     "meta": {...}}

Rationals are always strings so files round-trip exactly.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .exact import Magnitude, p_to_str, parse_p, parse_rational
from .lattice import Basis, as_point

KINDS = ("gapcvp", "stbdd", "bdd")


class InstanceFormatError(ValueError):
    pass


def _basis_json(B: Basis):
    return [[str(v) for v in row] for row in B.rows]


def _point_json(t):
    return [str(v) for v in t]


@dataclass(frozen=True)
class GapCvpInstance:
    """YES: some binary x has ||B x - t||_p <= 1. NO: dist_p(t, L(B)) > 1."""

    basis: Basis
    target: tuple
    p: object

    def __post_init__(self):
        if len(self.target) != self.basis.d:
            raise InstanceFormatError("target length must equal the basis row count")

    def to_json(self):
        return {
            "kind": "gapcvp",
            "p": p_to_str(self.p),
            "basis": _basis_json(self.basis),
            "target": _point_json(self.target),
        }


@dataclass(frozen=True)
class StBddInstance:
    """(S,T)-BDD instance: basis, short radius r, target, relative distance alpha.

    ``alpha`` is exact (a :class:`Magnitude`); the close radius is alpha * r.
    """

    basis: Basis
    r: Fraction
    target: tuple
    alpha: Magnitude
    p: object
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if len(self.target) != self.basis.d:
            raise InstanceFormatError("target length must equal the basis row count")
        if self.r <= 0:
            raise InstanceFormatError("r must be positive")

    @property
    def close_radius(self) -> Magnitude:
        return self.alpha * self.r

    def to_json(self):
        return {
            "kind": "stbdd",
            "p": p_to_str(self.p),
            "basis": _basis_json(self.basis),
            "target": _point_json(self.target),
            "r": str(self.r),
            "alpha": self.alpha.to_json(),
            "meta": self.meta,
        }


@dataclass(frozen=True)
class BddInstance:
    """BDD instance: promise dist_p(t, L) <= alpha * lambda_1(L)."""

    basis: Basis
    target: tuple
    alpha: Magnitude
    p: object
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if len(self.target) != self.basis.d:
            raise InstanceFormatError("target length must equal the basis row count")

    def to_json(self):
        return {
            "kind": "bdd",
            "p": p_to_str(self.p),
            "basis": _basis_json(self.basis),
            "target": _point_json(self.target),
            "alpha": self.alpha.to_json(),
            "meta": self.meta,
        }


def from_json(obj):
    """Parse any of the three instance kinds from a decoded JSON object."""
    try:
        kind = obj["kind"]
        if kind not in KINDS:
            raise InstanceFormatError(f"unknown kind {kind!r}")
        p = parse_p(obj["p"])
        rows = obj["basis"]
        if not rows or any(len(r) != len(rows[0]) for r in rows):
            raise InstanceFormatError("basis must be rectangular")
        basis = Basis(rows)
        target = as_point(obj["target"])
        if kind == "gapcvp":
            return GapCvpInstance(basis, target, p)
        alpha = Magnitude.from_json(obj["alpha"], p)
        meta = obj.get("meta", {})
        if kind == "bdd":
            return BddInstance(basis, target, alpha, p, meta)
        r = obj["r"]
        if isinstance(r, dict):
            rm = Magnitude.from_json(r, p)
            rq = rm.as_rational()
            if rq is None:
                raise InstanceFormatError("r must be rational (it becomes a basis entry)")
            r = rq
        return StBddInstance(basis, parse_rational(r), target, alpha, p, meta)
    except InstanceFormatError:
        raise
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise InstanceFormatError(f"malformed instance: {exc}") from exc


def dumps(instance) -> str:
    """Canonical JSON text (sorted keys, stable layout)."""
    return json.dumps(instance.to_json(), sort_keys=True, indent=2) + "\n"


def loads(text: str):
    return from_json(json.loads(text))


def load(path):
    with open(path) as fh:
        return loads(fh.read())


def save(instance, path):
    with open(path, "w") as fh:
        fh.write(dumps(instance))

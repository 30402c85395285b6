"""Exact lattice toolkit for BDD hardness: constants, reductions, brute-force oracles."""
from ._kernels import BACKEND
from .exact import INF, Magnitude, parse_p, parse_rational
from .instances import BddInstance, GapCvpInstance, StBddInstance
from .lattice import BallQuery, Basis, closest_vector, count_points, hnf, lambda1
from .numerics import (
    AlphaResult,
    alpha_star,
    alpha_upper_bound,
    alt_upper_bound,
    crossover_p,
    mo_bound,
    sigma_star,
)
from .reductions import ParameterError, decide_cvp, full_pipeline, make_params

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "INF", "Magnitude", "parse_p", "parse_rational",
    "BddInstance", "GapCvpInstance", "StBddInstance",
    "BallQuery", "Basis", "closest_vector", "count_points", "hnf", "lambda1",
    "AlphaResult", "alpha_star", "alpha_upper_bound", "alt_upper_bound",
    "crossover_p", "mo_bound", "sigma_star",
    "ParameterError", "decide_cvp", "full_pipeline", "make_params",
]

"""Small argument checks shared by the estimators and the CLI."""

from __future__ import annotations

import math
from numbers import Integral, Real

import numpy as np


def check_positive(name: str, value, *, allow_zero: bool = False) -> float:
    if isinstance(value, bool) or not isinstance(value, Real) or not math.isfinite(value):
        raise ValueError(f"{name} must be a finite real number, got {value!r}")
    if value < 0 or (value == 0 and not allow_zero):
        raise ValueError(f"{name} must be {'non-negative' if allow_zero else 'positive'}, got {value!r}")
    return float(value)


def check_count(name: str, value, minimum: int = 1) -> int:
    if isinstance(value, bool) or not isinstance(value, Integral) or value < minimum:
        raise ValueError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)


def check_seed(value) -> int:
    if isinstance(value, bool) or not isinstance(value, Integral) or not 0 <= value < 2**64:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {value!r}")
    return int(value)


def check_grid_steps(span: float, h: float, name: str = "span") -> int:
    """Number of steps of size ``h`` covering ``span``; must be (nearly) integral."""
    n = round(span / h)
    if n < 1 or abs(n * h - span) > 1e-9 * max(1.0, span):
        raise ValueError(f"{name}={span} is not an integer multiple of h={h}")
    return int(n)


def check_finite_array(name: str, x) -> np.ndarray:
    arr = np.asarray(x, float)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr

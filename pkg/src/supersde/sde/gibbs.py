"""One-dimensional Gibbs expectations under ``exp(-m²x² - 2V(x))``."""

from __future__ import annotations

import math
import warnings
from typing import Sequence

import numpy as np
from scipy import integrate

from ..quadrature import QuadratureError
from ..scalar import ZERO, ScalarFn
from .config import SimConfig

_DENSITY_FLOOR = 1e-16


def truncation_radius(m: float, V: ScalarFn, span: float = 200.0) -> float:
    """Radius beyond which the density is below ``1e-16`` of its peak."""
    x = np.linspace(-span, span, 40001)
    vals = np.broadcast_to(V(x), x.shape)
    osc = float(vals.max() - vals.min())
    return math.sqrt((-math.log(_DENSITY_FLOOR) + 2.0 * osc) / m**2)


def _pieces(L: float, jumps: Sequence[float]) -> list[tuple[float, float]]:
    cuts = sorted(j for j in set(jumps) if -L < j < L)
    edges = [-L, *cuts, L]
    return list(zip(edges[:-1], edges[1:]))


def _quad(fn, a: float, b: float, tol: float) -> tuple[float, float]:
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, err = integrate.quad(fn, a, b, epsabs=tol, epsrel=0.0, limit=500)
        except integrate.IntegrationWarning as exc:
            raise QuadratureError(f"quad failed on [{a}, {b}]: {exc}") from exc
    if err > tol:
        raise QuadratureError(f"quad error {err:.3g} above tolerance on [{a}, {b}]", val, err)
    return val, err


def gibbs_moments(F: ScalarFn, m: float, V: ScalarFn, quad_tol: float = 1e-10,
                  jumps: Sequence[float] = ()) -> tuple[float, float]:
    """Return ``(∫F·ρ, ∫ρ)`` for ``ρ = exp(-m²x² - 2V(x))``."""
    L = truncation_radius(m, V)
    pieces = _pieces(L, jumps)
    tol = quad_tol / (4 * len(pieces))

    def density(x):
        return math.exp(-m * m * x * x - 2.0 * float(V(x)))

    num = sum(_quad(lambda x: float(F(x)) * density(x), a, b, tol)[0] for a, b in pieces)
    den = sum(_quad(density, a, b, tol)[0] for a, b in pieces)
    return num, den


def gibbs_expectation(F: ScalarFn, config: SimConfig, quad_tol: float | None = None,
                      jumps: Sequence[float] = ()) -> float:
    """``∫F e^{-m²x²-2V} / ∫e^{-m²x²-2V}`` with splitting at the jumps of ``F``."""
    num, den = gibbs_moments(F, config.m, config.V, quad_tol or config.quad_tol, jumps)
    return num / den


def gaussian_expectation(F: ScalarFn, m: float, quad_tol: float = 1e-10,
                         jumps: Sequence[float] = ()) -> float:
    """Expectation of ``F`` under ``N(0, 1/(2m²))``."""
    num, den = gibbs_moments(F, m, ZERO, quad_tol, jumps)
    return num / den

"""Path functionals: the direct weight, the Girsanov weight and super weights.

All batch functions take time-major arrays ``phi`` of shape ``(nodes, paths)``
and increments ``dB`` of shape ``(nodes - 1, paths)``. Riemann integrals use the
trapezoid rule; stochastic integrals use the midpoint (Stratonovich) rule in
both time and state.
"""

from __future__ import annotations

from math import comb
from typing import Callable

import numpy as np

from ..scalar import ScalarFn
from .config import SimConfig
from .paths import Path


def _trapezoid(values: np.ndarray, h: float) -> np.ndarray:
    return h * (values.sum(axis=0) - 0.5 * (values[0] + values[-1]))


def _column(x: np.ndarray) -> np.ndarray:
    return x[:, None] if x.ndim == 1 else x


def stratonovich_batch(times: np.ndarray, phi: np.ndarray, dB: np.ndarray,
                       g: Callable[[np.ndarray, np.ndarray], np.ndarray]) -> np.ndarray:
    """``Σ g(t_{n+½}, ½(φ_n + φ_{n+1})) ΔB_n`` for every path."""
    t_mid = 0.5 * (times[1:] + times[:-1])
    x_mid = 0.5 * (phi[1:] + phi[:-1])
    vals = np.broadcast_to(g(_column(t_mid), x_mid), dB.shape)
    return np.sum(vals * dB, axis=0)


def stratonovich_integral(path: Path, g: Callable[[np.ndarray, np.ndarray], np.ndarray]) -> float:
    """Midpoint sum of ``g(t, φ) ∘ dB`` along a single path."""
    return float(stratonovich_batch(path.times, path.phi[:, None], path.dB[:, None], g)[0])


def log_weight_direct_batch(times: np.ndarray, phi: np.ndarray, config: SimConfig) -> np.ndarray:
    """``-2 ∫ f'(t) V(φ(t)) dt`` by the trapezoid rule."""
    f1 = _column(np.asarray(config.f.derivative()(times), float))
    return -2.0 * _trapezoid(np.broadcast_to(f1 * config.V(phi), phi.shape), config.h)


def log_weight_girsanov_batch(times: np.ndarray, phi: np.ndarray, dB: np.ndarray,
                              config: SimConfig) -> np.ndarray:
    """``S(φ)``: the log density of the drifted law times the direct weight."""
    V, f = config.V, config.f
    V1, V2 = V.derivative(), V.derivative(2)
    fg = _column(np.asarray(f(times), float))
    f1 = _column(np.asarray(f.derivative()(times), float))
    riemann = 0.5 * fg * V2(phi) - 0.5 * (fg * V1(phi)) ** 2 - 2.0 * f1 * V(phi)
    stoch = stratonovich_batch(times, phi, dB, lambda t, x: f(t) * V1(x))
    return _trapezoid(np.broadcast_to(riemann, phi.shape), config.h) - stoch


def weight_direct(path: Path, config: SimConfig) -> float:
    return float(np.exp(log_weight_direct_batch(path.times, path.phi[:, None], config)[0]))


def weight_girsanov(path: Path, config: SimConfig) -> float:
    return float(np.exp(log_weight_girsanov_batch(path.times, path.phi[:, None],
                                                  path.dB[:, None], config)[0]))


def super_exponent_batch(times: np.ndarray, phi: np.ndarray, dB: np.ndarray, h: float,
                         G_empty: ScalarFn, G_top: ScalarFn, H: ScalarFn) -> tuple[np.ndarray, np.ndarray]:
    """Real part ``A`` and variance ``B`` of the super action ``∫ G·H(Φ)``.

    ``A = ½∫G_∅H''(φ) - ∫G_∅H'(φ)∘dB - ∫G_θθ̄ H(φ)`` and ``B = ∫(G_∅H'(φ))²``;
    the imaginary noise contributes ``i·N(0, B)`` given ``φ``.
    """
    H1, H2 = H.derivative(), H.derivative(2)
    g0 = _column(np.asarray(G_empty(times), float))
    g2 = _column(np.asarray(G_top(times), float))
    riemann = 0.5 * g0 * H2(phi) - g2 * H(phi)
    stoch = stratonovich_batch(times, phi, dB, lambda t, x: G_empty(t) * H1(x))
    A = _trapezoid(np.broadcast_to(riemann, phi.shape), h) - stoch
    B = _trapezoid(np.broadcast_to((g0 * H1(phi)) ** 2, phi.shape), h)
    return A, B


def complex_gaussian_moment(A: np.ndarray, B: np.ndarray, k: int) -> np.ndarray:
    """``E[(A + iY)^k]`` for ``Y ~ N(0, B)``: ``Σ_j C(k,2j) A^{k-2j} (-B)^j (2j-1)!!``."""
    out = np.zeros(np.broadcast(A, B).shape)
    dfact = 1.0
    for j in range(k // 2 + 1):
        if j:
            dfact *= 2 * j - 1
        out = out + comb(k, 2 * j) * A ** (k - 2 * j) * (-B) ** j * dfact
    return out

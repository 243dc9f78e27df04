"""Monte Carlo estimators built on the path simulators.

The estimators follow the scikit-learn parameter protocol: constructor
arguments are stored verbatim, ``fit`` runs the simulation and stores
per-path summaries in trailing-underscore attributes, and
``get_params``/``set_params``/``clone`` come from ``BaseEstimator``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ..scalar import ScalarFn
from ..superfunction import THETA, THETABAR, THETA_THETABAR, SuperFunction
from .config import SimConfig
from .gibbs import gaussian_expectation, gibbs_expectation, gibbs_moments
from .models import Observable
from .paths import map_blocks, simulate_ou_block, simulate_sde_block
from .rng import STREAM_OU, STREAM_REVERSAL, STREAM_SDE, STREAM_SUPER
from .weights import (complex_gaussian_moment, log_weight_direct_batch,
                      log_weight_girsanov_batch, super_exponent_batch)


@dataclass(frozen=True)
class Estimate:
    """Monte Carlo mean with its standard error over ``n`` paths."""

    mean: float
    std_err: float
    n: int


def mean_estimate(values: np.ndarray) -> Estimate:
    values = np.asarray(values, float)
    n = values.size
    return Estimate(float(np.mean(values)), float(np.std(values, ddof=1) / math.sqrt(n)), n)


def ratio_estimate(values: np.ndarray, log_weights: np.ndarray) -> Estimate:
    """Self-normalised ``Σ F w / Σ w`` with the delta-method standard error.

    The error is the sample deviation of ``w (F - mean) / mean(w)`` over ``√n``.
    """
    values = np.asarray(values, float)
    w = np.exp(log_weights - np.max(log_weights))
    wbar = np.mean(w)
    mean = float(np.mean(w * values) / wbar)
    resid = w * (values - mean) / wbar
    return Estimate(mean, float(np.std(resid, ddof=1) / math.sqrt(values.size)), values.size)


def _observable(F) -> ScalarFn:
    return F.fn if isinstance(F, Observable) else F


class SDEReweightingEstimator(BaseEstimator):
    """Reweighted expectations ``E[F(φ(0)) w] / E[w]``.

    ``method="direct"`` simulates the drifted SDE and uses the weight
    ``exp(-2∫f'V(φ))``; ``method="girsanov"`` simulates the Ornstein-Uhlenbeck
    process and uses ``exp(S(φ))``. Both give the Gibbs expectation.
    """

    _METHODS = ("direct", "girsanov")

    def __init__(self, config: SimConfig | None = None, method: str = "direct"):
        self.config = config
        self.method = method

    def _config(self) -> SimConfig:
        return self.config if self.config is not None else SimConfig()

    def fit(self, X=None, y=None):
        if self.method not in self._METHODS:
            raise ValueError(f"method must be one of {self._METHODS}, got {self.method!r}")
        cfg = self._config()
        if self.method == "direct":
            def block(a, b):
                batch = simulate_sde_block(cfg, a, b, stream=STREAM_SDE)
                return batch.phi[-1], log_weight_direct_batch(batch.times, batch.phi, cfg)
        else:
            def block(a, b):
                batch = simulate_ou_block(cfg, a, b, stream=STREAM_OU)
                return batch.phi[-1], log_weight_girsanov_batch(batch.times, batch.phi, batch.dB, cfg)
        parts = map_blocks(cfg, block)
        self.phi0_ = np.concatenate([p for p, _ in parts])
        self.log_weight_ = np.concatenate([w for _, w in parts])
        self.n_paths_ = self.phi0_.size
        return self

    def expectation(self, F) -> Estimate:
        check_is_fitted(self, "phi0_")
        vals = np.broadcast_to(_observable(F)(self.phi0_), self.phi0_.shape)
        return ratio_estimate(vals, self.log_weight_)

    def weight_mean(self) -> Estimate:
        """Unnormalised ``E[w]``, the numerator of the normalisation constant."""
        check_is_fitted(self, "phi0_")
        return mean_estimate(np.exp(self.log_weight_))


def _check_even_superfunction(G: SuperFunction, config: SimConfig) -> None:
    t0 = -config.T_support
    grid = np.linspace(t0, 0.0, 257)
    for key in ((THETA,), (THETABAR,)):
        vals = np.broadcast_to(G.component(key)(grid), grid.shape)
        if np.any(vals != 0.0):
            raise ValueError("G must have vanishing θ and θ̄ components")
    before = t0 - np.linspace(0.0, 20.0, 201)
    for key in ((), THETA_THETABAR):
        vals = np.broadcast_to(G.component(key)(before), before.shape)
        if np.max(np.abs(vals)) > 1e-12:
            raise ValueError("G must vanish for t <= -T_support")


def kernel_values(kernel, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """``E_Y[K(A + iY)]`` for ``Y ~ N(0, B)``; ``kernel`` is ``"exp"`` or coefficients."""
    if isinstance(kernel, str):
        if kernel != "exp":
            raise ValueError(f"kernel must be 'exp' or polynomial coefficients, got {kernel!r}")
        return np.exp(A - 0.5 * B)
    out = np.zeros_like(A)
    for k, c in enumerate(kernel):
        if c:
            out = out + float(c) * complex_gaussian_moment(A, B, k)
    return out


def super_exponents(config: SimConfig, G: SuperFunction, Hs: Sequence[ScalarFn]
                    ) -> tuple[np.ndarray, list[tuple[np.ndarray, np.ndarray]]]:
    """``φ(0)`` and ``(A, B)`` for each ``H`` on one shared set of OU paths."""
    _check_even_superfunction(G, config)
    g0, g2 = G.f_empty, G.f_thetathetabar

    def block(a, b):
        batch = simulate_ou_block(config, a, b, stream=STREAM_SUPER)
        return batch.phi[-1], [super_exponent_batch(batch.times, batch.phi, batch.dB, config.h,
                                                    g0, g2, H) for H in Hs]

    parts = map_blocks(config, block)
    phi0 = np.concatenate([p[0] for p in parts])
    AB = [(np.concatenate([p[1][i][0] for p in parts]), np.concatenate([p[1][i][1] for p in parts]))
          for i in range(len(Hs))]
    return phi0, AB


def localization_reference(F, G: SuperFunction, H: ScalarFn, m: float, kernel="exp",
                           quad_tol: float = 1e-10, jumps: Sequence[float] = ()) -> float:
    """Gaussian quadrature of ``F(x) K(-2 G_∅(0) H(x))`` under ``N(0, 1/(2m²))``."""
    c = -2.0 * float(G.f_empty(0.0))
    fn = _observable(F)
    if isinstance(kernel, str):
        integrand = ScalarFn(lambda x: fn(x) * np.exp(c * H(x)))
    else:
        coeffs = np.asarray(kernel, float)
        integrand = ScalarFn(lambda x: fn(x) * np.polynomial.polynomial.polyval(c * H(x), coeffs))
    return gaussian_expectation(integrand, m, quad_tol, jumps)


class SuperExpectationEstimator(BaseEstimator):
    """Monte Carlo meaning of ``<F(Φ(0)) K(∫ G·H(Φ))>`` over OU paths.

    ``kernel`` is ``"exp"`` or a coefficient sequence ``(c_0, c_1, ...)`` of a
    polynomial ``K``. The imaginary white noise is integrated out exactly:
    ``E[exp(A + iY)] = exp(A - B/2)`` and polynomial moments use
    :func:`complex_gaussian_moment`.
    """

    def __init__(self, G: SuperFunction | None = None, H: ScalarFn | None = None,
                 config: SimConfig | None = None, kernel="exp"):
        self.G = G
        self.H = H
        self.config = config
        self.kernel = kernel

    def _config(self) -> SimConfig:
        return self.config if self.config is not None else SimConfig()

    def fit(self, X=None, y=None):
        if self.G is None or self.H is None:
            raise ValueError("G and H are required")
        kernel_values(self.kernel, np.zeros(1), np.zeros(1))
        self.phi0_, ((A, B),) = super_exponents(self._config(), self.G, [self.H])
        self.kernel_values_ = kernel_values(self.kernel, A, B)
        return self

    def expectation(self, F) -> Estimate:
        check_is_fitted(self, "phi0_")
        vals = np.broadcast_to(_observable(F)(self.phi0_), self.phi0_.shape)
        return mean_estimate(vals * self.kernel_values_)

    def reference(self, F, quad_tol: float = 1e-10, jumps: Sequence[float] = ()) -> float:
        return localization_reference(F, self.G, self.H, self._config().m, self.kernel, quad_tol, jumps)


def super_expectation_estimate(F, G: SuperFunction, H: ScalarFn, config: SimConfig,
                               kernel="exp") -> Estimate:
    return SuperExpectationEstimator(G, H, config, kernel).fit().expectation(F)


@dataclass(frozen=True)
class ObservableCheck:
    name: str
    E1: Estimate
    E2: Estimate
    E3: float
    quad_tol: float

    @property
    def se_combined(self) -> float:
        return math.hypot(self.E1.std_err, self.E2.std_err)

    @property
    def pass_direct(self) -> bool:
        return abs(self.E1.mean - self.E3) <= 3.0 * (self.E1.std_err + self.quad_tol)

    @property
    def pass_girsanov(self) -> bool:
        return abs(self.E2.mean - self.E3) <= 3.0 * (self.E2.std_err + self.quad_tol)

    @property
    def pass_consistency(self) -> bool:
        return abs(self.E1.mean - self.E2.mean) <= 3.0 * self.se_combined

    @property
    def passed(self) -> bool:
        return self.pass_direct and self.pass_girsanov and self.pass_consistency


@dataclass(frozen=True)
class MainTheoremReport:
    checks: list[ObservableCheck]
    Z_direct: Estimate
    Z_girsanov: Estimate
    Z_reference: float
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def verify_main_theorem(config: SimConfig, observables: Sequence[Observable]) -> MainTheoremReport:
    """Three-way comparison of SDE reweighting, Girsanov reweighting and quadrature.

    The normalisation ``Z = E[w] / ∫e^{-m²x²-2V}`` is reported for both
    estimators against ``m/√π``, its value implied by localization.
    """
    direct = SDEReweightingEstimator(config, "direct").fit()
    girsanov = SDEReweightingEstimator(config, "girsanov").fit()
    checks = [ObservableCheck(ob.name, direct.expectation(ob), girsanov.expectation(ob),
                              gibbs_expectation(ob.fn, config, jumps=ob.jumps), config.quad_tol)
              for ob in observables]
    _, den = gibbs_moments(ScalarFn(lambda x: 1.0), config.m, config.V, config.quad_tol)

    def z(est: Estimate) -> Estimate:
        return Estimate(est.mean / den, est.std_err / den, est.n)

    return MainTheoremReport(checks, z(direct.weight_mean()), z(girsanov.weight_mean()),
                             config.m / math.sqrt(math.pi))


@dataclass(frozen=True)
class ReversalCheck:
    s: float
    t: float
    forward: float
    backward: float
    std_err: float

    @property
    def passed(self) -> bool:
        return abs(self.forward - self.backward) <= 3.0 * self.std_err


def time_reversal_check(config: SimConfig, pairs: Sequence[tuple[float, float]] | None = None,
                        reweighted: bool = False) -> list[ReversalCheck]:
    """Compare ``E[φ(s)φ(t)]`` with ``E[φ(-s)φ(-t)]`` for the drifted SDE on ``[-T, T]``.

    With ``reweighted=True`` paths carry the weight ``exp(-∫_{-T}^{T} f'V(φ))``,
    the time-odd part of the drifted path density relative to the OU law, and
    self-normalised means are compared instead. The standard error is that of
    the paired per-path difference.
    """
    T = config.T_support
    pairs = pairs if pairs is not None else [(0.0, T / 2), (T / 4, T / 2)]
    nodes = sorted({x for s, t in pairs for x in (s, t, -s, -t)})

    def block(a, b):
        batch = simulate_sde_block(config, a, b, t_start=-T, t_end=T, stream=STREAM_REVERSAL)
        idx = [int(round((x + T) / config.h)) for x in nodes]
        lw = 0.5 * log_weight_direct_batch(batch.times, batch.phi, config) if reweighted \
            else np.zeros(b - a)
        return batch.phi[idx], lw

    parts = map_blocks(config, block)
    vals = np.concatenate([p[0] for p in parts], axis=1)
    log_w = np.concatenate([p[1] for p in parts])
    row = {x: vals[i] for i, x in enumerate(nodes)}
    out = []
    for s, t in pairs:
        fwd, bwd = row[s] * row[t], row[-s] * row[-t]
        diff = ratio_estimate(fwd - bwd, log_w)
        out.append(ReversalCheck(s, t, ratio_estimate(fwd, log_w).mean,
                                 ratio_estimate(bwd, log_w).mean, diff.std_err))
    return out

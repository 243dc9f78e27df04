"""Superfunctions of one time variable and a few odd variables.

A :class:`SuperFunction` ``F(t, theta, thetabar)`` is stored as a map from
canonical generator monomials to :class:`~supersde.scalar.ScalarFn`
components, e.g. ``F = F_0 + F_θ θ + F_θ̄ θ̄ + F_θθ̄ θθ̄``. Products, odd
derivatives and Berezin integrals act on the monomials through the Grassmann
engine, so no component sign is written by hand in this module.

Generator indices: ``THETA = 0``, ``THETABAR = 1`` and the auxiliary odd
variable of the supersymmetry flow ``RHO = 2``.
"""

from __future__ import annotations

import math
from numbers import Real
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import grassmann as gr
from .grassmann import GrassmannElement, Key
from .quadrature import QuadratureError, adaptive_simpson
from .scalar import ZERO, ScalarFn, constant

THETA, THETABAR, RHO = 0, 1, 2
THETA_THETABAR: Key = (THETA, THETABAR)


class SupersymmetryError(ValueError):
    """Input to a localization formula is not supersymmetric."""


class SuperFunction:
    """Map from canonical monomials to scalar component functions."""

    __slots__ = ("_components",)

    def __init__(self, components: Mapping[Sequence[int], ScalarFn | float] | None = None):
        comps: dict[Key, ScalarFn] = {}
        for word, fn in (components or {}).items():
            sign, key = gr._canonical_key(tuple(word))
            if key is None:
                continue
            fn = fn if isinstance(fn, ScalarFn) else constant(fn)
            if fn is ZERO:
                continue
            fn = fn if sign == 1 else -fn
            comps[key] = comps[key] + fn if key in comps else fn
        self._components = comps

    @classmethod
    def from_parts(cls, f_empty=None, f_theta=None, f_thetabar=None,
                   f_thetathetabar=None) -> SuperFunction:
        parts = {(): f_empty, (THETA,): f_theta, (THETABAR,): f_thetabar,
                 THETA_THETABAR: f_thetathetabar}
        return cls({k: v for k, v in parts.items() if v is not None})

    @classmethod
    def constant(cls, value: GrassmannElement | float) -> SuperFunction:
        value = gr.as_element(value)
        return cls({k: constant(c) for k, c in value.terms.items()})

    def component(self, key: Sequence[int] = ()) -> ScalarFn:
        sign, canon = gr._canonical_key(tuple(key))
        if canon is None or canon not in self._components:
            return ZERO
        fn = self._components[canon]
        return fn if sign == 1 else -fn

    @property
    def components(self) -> dict[Key, ScalarFn]:
        return dict(self._components)

    @property
    def f_empty(self) -> ScalarFn:
        return self.component(())

    @property
    def f_theta(self) -> ScalarFn:
        return self.component((THETA,))

    @property
    def f_thetabar(self) -> ScalarFn:
        return self.component((THETABAR,))

    @property
    def f_thetathetabar(self) -> ScalarFn:
        return self.component(THETA_THETABAR)

    def generators(self) -> set[int]:
        return {g for key in self._components for g in key}

    def __call__(self, t: float) -> GrassmannElement:
        return GrassmannElement._from_canonical(
            {k: float(fn(t)) for k, fn in self._components.items()})

    def __add__(self, other):
        other = _as_superfunction(other)
        if other is None:
            return NotImplemented
        comps = dict(self._components)
        for k, fn in other._components.items():
            comps[k] = comps[k] + fn if k in comps else fn
        return _from_canonical(comps)

    __radd__ = __add__

    def __neg__(self):
        return _from_canonical({k: -fn for k, fn in self._components.items()})

    def __sub__(self, other):
        other = _as_superfunction(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _as_superfunction(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, Real):
            return _from_canonical({k: fn * float(other) for k, fn in self._components.items()})
        other = _as_superfunction(other)
        if other is None:
            return NotImplemented
        out: dict[Key, ScalarFn] = {}
        for ka, fa in self._components.items():
            for kb, fb in other._components.items():
                sign, key = gr.merge_sign(ka, kb)
                if key is None:
                    continue
                term = fa * fb if sign == 1 else -(fa * fb)
                out[key] = out[key] + term if key in out else term
        return _from_canonical(out)

    def __rmul__(self, other):
        if isinstance(other, Real):
            return self * other
        other = _as_superfunction(other)
        if other is None:
            return NotImplemented
        return other * self

    def time_derivative(self) -> SuperFunction:
        return _from_canonical({k: fn.derivative() for k, fn in self._components.items()})

    def odd_derivative(self, gen: int) -> SuperFunction:
        """Graded left derivative with respect to one odd variable."""
        out: dict[Key, ScalarFn] = {}
        for key, fn in self._components.items():
            sign, rest = gr.left_derivative_monomial(key, gen)
            if rest is None:
                continue
            out[rest] = fn if sign == 1 else -fn
        return _from_canonical(out)

    def berezin(self, gens: Sequence[int]) -> SuperFunction:
        """Berezin integral of every component, ``gens[0]`` innermost."""
        if len(set(gens)) != len(gens):
            raise gr.GrassmannError(f"repeated generator in Berezin measure: {list(gens)}")
        comps = self._components
        for g in gens:
            out: dict[Key, ScalarFn] = {}
            for key, fn in comps.items():
                sign, rest = gr.berezin_monomial(key, g)
                if rest is None:
                    continue
                term = fn if sign == 1 else -fn
                out[rest] = out[rest] + term if rest in out else term
            comps = out
        return _from_canonical(comps)

    def __repr__(self):
        inner = ", ".join(f"{k}: {fn.name}" for k, fn in sorted(self._components.items()))
        return f"SuperFunction({{{inner}}})"


def _from_canonical(comps: dict[Key, ScalarFn]) -> SuperFunction:
    obj = SuperFunction.__new__(SuperFunction)
    obj._components = {k: fn for k, fn in comps.items() if fn is not ZERO}
    return obj


def _as_superfunction(x) -> SuperFunction | None:
    if isinstance(x, SuperFunction):
        return x
    if isinstance(x, (GrassmannElement, Real)):
        return SuperFunction.constant(x)
    if isinstance(x, ScalarFn):
        return SuperFunction({(): x})
    return None


def lift_supersymmetric(f: ScalarFn) -> SuperFunction:
    """``f(t + 2θθ̄) = f(t) + 2 f'(t) θθ̄``."""
    return SuperFunction({(): f, THETA_THETABAR: f.derivative() * 2.0})


def compose(H: ScalarFn, F: SuperFunction) -> SuperFunction:
    """``H ∘ F`` by the terminating Taylor series around the body ``F_∅``."""
    body = F.f_empty
    nilpotent = F - SuperFunction({(): body})
    out = SuperFunction({(): H.compose(body)})
    power = SuperFunction.constant(1.0)
    deriv = H
    for k in range(1, len(F.generators()) + 1):
        power = power * nilpotent
        if not power.components:
            break
        deriv = deriv.derivative()
        out = out + SuperFunction({(): deriv.compose(body) * (1.0 / math.factorial(k))}) * power
    return out


def apply_Q(F: SuperFunction) -> SuperFunction:
    """``Q = 2θ ∂_t + ∂_θ̄``."""
    return gr.generator(THETA) * 2.0 * F.time_derivative() + F.odd_derivative(THETABAR)


def apply_Qbar(F: SuperFunction) -> SuperFunction:
    """``Q̄ = 2θ̄ ∂_t - ∂_θ``."""
    return gr.generator(THETABAR) * 2.0 * F.time_derivative() - F.odd_derivative(THETA)


def supersymmetry_defect(F: SuperFunction, grid: Iterable[float]) -> float:
    """Largest of ``|F_θ|``, ``|F_θ̄|`` and ``|F_θθ̄ - 2 F_∅'|`` over the grid."""
    grid = np.asarray(list(grid), float)
    extra = F.generators() - {THETA, THETABAR}
    if extra:
        raise ValueError(f"supersymmetry check needs a function of (θ, θ̄) only; extra {extra}")
    residual = F.f_thetathetabar - F.f_empty.derivative() * 2.0
    return max(float(np.max(np.abs(np.broadcast_to(fn(grid), grid.shape))))
               for fn in (F.f_theta, F.f_thetabar, residual))


def is_supersymmetric(F: SuperFunction, grid: Iterable[float], tol: float = 1e-10) -> bool:
    return supersymmetry_defect(F, grid) <= tol


def tau_transform(F: SuperFunction, b: float, bbar: float) -> SuperFunction:
    """Finite supersymmetry flow ``exp(ρ (b Q̄ + b̄ Q)) F`` over ``(θ, θ̄, ρ)``.

    The odd parameter ``ρ`` multiplies from the left so the generator is an
    even derivation; the series stops once every term carries ``ρ`` twice.
    """
    rho = gr.generator(RHO)

    def step(G: SuperFunction) -> SuperFunction:
        return rho * (apply_Qbar(G) * float(b) + apply_Q(G) * float(bbar))

    out, term = F, F
    for k in range(1, len(F.generators() | {THETA, THETABAR, RHO}) + 2):
        term = step(term) * (1.0 / k)
        if not term.components:
            break
        out = out + term
    else:
        raise RuntimeError("supersymmetry flow series failed to terminate")
    return out


def _lower_cutoff(integrand: ScalarFn, K: float, threshold: float = 1e-16,
                  quiet_run: float = 10.0, step: float = 0.25, limit: float = 1e4) -> float:
    """Leftmost point needed: start of a run of ``quiet_run`` below threshold."""
    t, quiet_start = K, None
    while K - t <= limit:
        if abs(float(integrand(t))) < threshold:
            if quiet_start is None:
                quiet_start = t
            elif quiet_start - t >= quiet_run:
                return quiet_start
        else:
            quiet_start = None
        t -= step
    raise QuadratureError(f"integrand does not decay below {threshold} within {limit} of K")


def reduce_integral(T: SuperFunction, F: SuperFunction, K: float, tol: float = 1e-10,
                    check_tol: float = 1e-8, check_span: float = 20.0) -> tuple[float, float]:
    """Both sides of the reduction formula on ``(-∞, K]``.

    Returns ``(lhs, rhs)`` where ``lhs`` integrates the Berezin part of
    ``T·F`` over time and ``rhs = -2 T_∅(K) F_∅(K)``.
    """
    grid = K - np.linspace(0.0, check_span, 401)
    for name, G in (("T", T), ("F", F)):
        defect = supersymmetry_defect(G, grid)
        if defect > check_tol:
            raise SupersymmetryError(f"{name} is not supersymmetric on (-inf, {K}]: defect {defect:.3g}")
    integrand = (T * F).berezin([THETA, THETABAR]).f_empty
    lower = _lower_cutoff(integrand, K)
    lhs = adaptive_simpson(integrand, lower, K, tol).value if lower < K else 0.0
    rhs = -2.0 * float(T.f_empty(K)) * float(F.f_empty(K))
    return lhs, rhs

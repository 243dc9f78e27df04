"""Scalar functions of one real variable with analytic derivatives.

A :class:`ScalarFn` is a vectorised callable plus a (lazily built) chain of
derivatives. Sums, products and compositions propagate derivatives by the
usual rules, so any finite-order derivative of a function assembled from the
factories below is available without finite differences.
"""

from __future__ import annotations

from numbers import Real
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import Polynomial

ArrayLike = float | np.ndarray


class DerivativeUnavailable(ValueError):
    """Raised when a derivative beyond the supplied order is requested."""


class ScalarFn:
    """Vectorised real function with its derivative chain.

    ``deriv`` may be another ScalarFn, a zero-argument callable returning one
    (so chains can be built lazily and recursively), or ``None`` when no
    derivative is known. ``support`` optionally records a closed interval
    outside which the function and all its derivatives vanish.
    """

    __slots__ = ("_func", "_deriv", "name", "support")

    def __init__(self, func: Callable[[ArrayLike], ArrayLike], deriv=None,
                 name: str | None = None, support: tuple[float, float] | None = None):
        self._func = func
        self._deriv = deriv
        self.name = name or getattr(func, "__name__", "fn")
        self.support = support

    def __call__(self, t):
        return self._func(t)

    def derivative(self, order: int = 1) -> ScalarFn:
        fn = self
        for _ in range(order):
            d = fn._deriv
            if d is None:
                raise DerivativeUnavailable(f"no derivative available for {fn.name}")
            if not isinstance(d, ScalarFn):
                d = d()
                fn._deriv = d
            fn = d
        return fn

    def __add__(self, other):
        other = _lift(other)
        if other is None:
            return NotImplemented
        a, b = self, other
        return ScalarFn(lambda t: a(t) + b(t),
                        lambda: a.derivative() + b.derivative(),
                        name=f"({a.name}+{b.name})", support=_union(a.support, b.support))

    __radd__ = __add__

    def __neg__(self):
        a = self
        return ScalarFn(lambda t: -a(t), lambda: -a.derivative(), name=f"-{a.name}",
                        support=a.support)

    def __sub__(self, other):
        other = _lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _lift(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, Real):
            c = float(other)
            a = self
            return ScalarFn(lambda t: c * a(t), lambda: a.derivative() * c,
                            name=f"{c:g}*{a.name}", support=a.support)
        other = _lift(other)
        if other is None:
            return NotImplemented
        a, b = self, other
        return ScalarFn(lambda t: a(t) * b(t),
                        lambda: a.derivative() * b + a * b.derivative(),
                        name=f"{a.name}*{b.name}", support=_intersect(a.support, b.support))

    __rmul__ = __mul__

    def compose(self, inner: ScalarFn) -> ScalarFn:
        """``self(inner(t))`` with chain-rule derivatives."""
        outer = self
        return ScalarFn(lambda t: outer(inner(t)),
                        lambda: outer.derivative().compose(inner) * inner.derivative(),
                        name=f"{outer.name}∘{inner.name}", support=None)

    def __repr__(self):
        return f"ScalarFn({self.name})"


def _lift(x) -> ScalarFn | None:
    if isinstance(x, ScalarFn):
        return x
    if isinstance(x, Real):
        return constant(float(x))
    return None


def _union(a, b):
    if a is None or b is None:
        return None
    return (min(a[0], b[0]), max(a[1], b[1]))


def _intersect(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return (max(a[0], b[0]), min(a[1], b[1]))


def constant(c: float) -> ScalarFn:
    c = float(c)
    if c == 0.0:
        return ZERO
    return ScalarFn(lambda t: np.full(np.shape(t), c) if np.ndim(t) else c,
                    lambda: ZERO, name=f"{c:g}")


ZERO = ScalarFn(lambda t: np.zeros(np.shape(t)) if np.ndim(t) else 0.0, None,
                name="0", support=(0.0, 0.0))
ZERO._deriv = ZERO


def polynomial(coeffs: Sequence[float] | Polynomial) -> ScalarFn:
    """Polynomial with coefficients in increasing degree."""
    p = coeffs if isinstance(coeffs, Polynomial) else Polynomial(np.asarray(coeffs, float))
    if not np.any(p.coef):
        return ZERO
    return ScalarFn(lambda t: p(t), lambda: polynomial(p.deriv()), name=f"poly{tuple(p.coef)}")


def identity() -> ScalarFn:
    return polynomial([0.0, 1.0])


def exponential(rate: float = 1.0, scale: float = 1.0) -> ScalarFn:
    """``scale * exp(rate * t)``."""
    return ScalarFn(lambda t: scale * np.exp(rate * np.asarray(t, float)),
                    lambda: exponential(rate, scale * rate), name=f"{scale:g}exp({rate:g}t)")


def harmonic(amplitude: float = 1.0, frequency: float = 1.0, phase: float = 0.0) -> ScalarFn:
    """``amplitude * cos(frequency * t + phase)``."""
    return ScalarFn(lambda t: amplitude * np.cos(frequency * np.asarray(t, float) + phase),
                    lambda: harmonic(amplitude * frequency, frequency, phase + np.pi / 2),
                    name=f"{amplitude:g}cos({frequency:g}t+{phase:g})")


def tanh() -> ScalarFn:
    fn = ScalarFn(np.tanh, name="tanh")
    fn._deriv = lambda: constant(1.0) - fn * fn
    return fn


def reciprocal(inner: ScalarFn) -> ScalarFn:
    """``1 / inner`` (caller guarantees inner has no zeros where evaluated)."""
    fn = ScalarFn(lambda t: 1.0 / inner(t), name=f"1/{inner.name}")
    fn._deriv = lambda: -(inner.derivative() * fn * fn)
    return fn


def restrict(fn: ScalarFn, inside: Callable[[np.ndarray], np.ndarray],
             support: tuple[float, float]) -> ScalarFn:
    """Evaluate ``fn`` only where ``inside(t)`` holds and return 0 elsewhere.

    Only valid when ``fn`` and all its derivatives are negligible on the
    boundary of the region, as for the smooth bump.
    """
    def func(t):
        t_arr = np.asarray(t, float)
        mask = inside(t_arr)
        out = np.zeros(t_arr.shape)
        if np.ndim(t_arr) == 0:
            return float(fn(t_arr)) if mask else 0.0
        if mask.any():
            out[mask] = fn(t_arr[mask])
        return out

    return ScalarFn(func, lambda: restrict(fn.derivative(), inside, support),
                    name=f"{fn.name}|supp", support=support)


# beyond this the bump is below exp(-699) together with every derivative factor
_BUMP_CUTOFF = 1.0 / 700.0


def bump(half_width: float = 1.0) -> ScalarFn:
    """Smooth even bump ``exp(1 - 1/(1 - (t/T)^2))`` on ``|t| < T``, zero outside.

    It equals 1 at the origin.
    """
    T = float(half_width)
    if T <= 0:
        raise ValueError(f"bump half width must be positive, got {T}")
    q = polynomial([1.0, 0.0, -1.0 / T**2])
    core = exponential().compose(constant(1.0) - reciprocal(q))
    fn = restrict(core, lambda t: (1.0 - (t / T) ** 2) > _BUMP_CUTOFF, (-T, T))
    fn.name = f"bump(T={T:g})"
    return fn


def gaussian(center: float = 0.0, width: float = 1.0, scale: float = 1.0) -> ScalarFn:
    """``scale * exp(-((t - center)/width)^2)``."""
    arg = polynomial([-(center / width) ** 2, 2 * center / width**2, -1.0 / width**2])
    return exponential(scale=scale).compose(arg)


def from_derivatives(funcs: Sequence[Callable[[ArrayLike], ArrayLike]], name: str = "fn") -> ScalarFn:
    """Hand-specified function with a finite list ``[f, f', f'', ...]``."""
    if not funcs:
        raise ValueError("need at least the function itself")
    nxt = from_derivatives(funcs[1:], name + "'") if len(funcs) > 1 else None
    return ScalarFn(funcs[0], nxt, name=name)


def step(threshold: float = 0.0) -> ScalarFn:
    """Indicator of ``t > threshold``; no derivative."""
    return ScalarFn(lambda t: (np.asarray(t, float) > threshold).astype(float) if np.ndim(t)
                    else float(t > threshold), None, name=f"1[t>{threshold:g}]")

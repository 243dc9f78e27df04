"""Named model functions: potentials ``V``, the bump ``f`` and observables ``F``."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .. import scalar as sc
from ..scalar import ScalarFn

POTENTIALS = ("zero", "constant", "cosine", "tanhpoly")
OBSERVABLES = ("cos", "tanh", "step", "one", "x2")


def make_potential(name: str, scale: float = 0.5) -> ScalarFn:
    """Bounded potentials with bounded derivatives.

    ``cosine``: ``λ cos x``; ``tanhpoly``: ``λ tanh(x)²``; ``constant``: ``λ``.
    """
    lam = float(scale)
    if name == "zero":
        return sc.ZERO
    if name == "constant":
        return sc.constant(lam)
    if name == "cosine":
        return sc.harmonic(lam, 1.0, 0.0)
    if name == "tanhpoly":
        th = sc.tanh()
        return th * th * lam
    raise ValueError(f"unknown potential {name!r}; choose from {POTENTIALS}")


@dataclass(frozen=True)
class Observable:
    name: str
    fn: ScalarFn
    jumps: tuple[float, ...] = field(default=())


def make_observable(name: str) -> Observable:
    if name == "cos":
        return Observable(name, sc.harmonic(1.0, 1.0, 0.0))
    if name == "tanh":
        return Observable(name, sc.tanh())
    if name == "step":
        return Observable(name, sc.step(0.0), jumps=(0.0,))
    if name == "one":
        return Observable(name, sc.constant(1.0))
    if name == "x2":
        return Observable(name, sc.polynomial([0.0, 0.0, 1.0]))
    raise ValueError(f"unknown observable {name!r}; choose from {OBSERVABLES}")


def check_bounded(fn: ScalarFn, orders: int = 2, span: float = 200.0, n: int = 40001,
                  bound: float = 1e6) -> None:
    """Sample ``fn`` and its first derivatives on a wide grid."""
    x = np.linspace(-span, span, n)
    g = fn
    for k in range(orders + 1):
        vals = np.broadcast_to(g(x), x.shape)
        if not np.all(np.isfinite(vals)) or np.max(np.abs(vals)) > bound:
            raise ValueError(f"derivative {k} of {fn.name} is not bounded on [-{span}, {span}]")
        g = g.derivative()

"""Simulation configuration."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property

from .. import scalar as sc
from .._validation import check_count, check_grid_steps, check_positive, check_seed
from ..scalar import ScalarFn
from .models import POTENTIALS, check_bounded, make_potential

DEFAULT_SEED = 20191216


@dataclass(frozen=True)
class SimConfig:
    """Parameters of the SDE and of the Monte Carlo runs.

    The drift switch ``f`` is the smooth bump of half width ``T_support``; the
    potential is a named bounded function scaled by ``potential_scale``.
    """

    m: float = 1.0
    h: float = 2.0**-10
    T_support: float = 1.0
    n_paths: int = 200_000
    seed: int = DEFAULT_SEED
    potential: str = "cosine"
    potential_scale: float = 0.5
    quad_tol: float = 1e-10
    workers: int = 1
    eps_list: tuple[float, ...] = field(default=(0.1, 0.05, 0.025, 0.0125))

    def __post_init__(self):
        check_positive("m", self.m)
        check_positive("h", self.h)
        check_positive("T_support", self.T_support)
        check_count("n_paths", self.n_paths)
        check_seed(self.seed)
        check_positive("quad_tol", self.quad_tol)
        check_count("workers", self.workers)
        check_grid_steps(self.T_support, self.h, "T_support")
        if self.potential not in POTENTIALS:
            raise ValueError(f"unknown potential {self.potential!r}; choose from {POTENTIALS}")
        if any(e <= 0 for e in self.eps_list):
            raise ValueError(f"eps_list entries must be positive, got {self.eps_list}")
        check_positive("|potential_scale|", abs(self.potential_scale), allow_zero=True)
        check_bounded(self.V)

    @cached_property
    def V(self) -> ScalarFn:
        return make_potential(self.potential, self.potential_scale)

    @cached_property
    def f(self) -> ScalarFn:
        return sc.bump(self.T_support)

    def with_(self, **changes) -> SimConfig:
        return replace(self, **changes)

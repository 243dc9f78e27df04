"""Path simulation for the Ornstein-Uhlenbeck field and the drifted SDE.

Both simulators start from the exact stationary law ``N(0, 1/(2m²))`` at the
left end of the window. Before ``-T_support`` the drift ``f V'`` vanishes, so
the drifted solution coincides there with the stationary OU process and no
burn-in is needed. Arrays are time-major: ``phi[n, j]`` is path ``j`` at node
``n``.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, TypeVar

import numpy as np

from .._validation import check_grid_steps
from ..scalar import ScalarFn
from .config import SimConfig
from .rng import STREAM_OU, STREAM_SDE, block_normals

BLOCK_SIZE = 2048
T = TypeVar("T")


@dataclass(frozen=True)
class Path:
    """One path on a uniform grid ending at ``t_end`` (0 by default)."""

    t0: float
    h: float
    phi: np.ndarray
    dB: np.ndarray

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.h * np.arange(self.phi.shape[0])


@dataclass(frozen=True)
class PathBatch:
    """Consecutive paths ``start .. start + n - 1`` sharing one grid."""

    times: np.ndarray
    h: float
    phi: np.ndarray
    dB: np.ndarray
    start: int

    @property
    def n_paths(self) -> int:
        return self.phi.shape[1]

    def path(self, j: int) -> Path:
        return Path(float(self.times[0]), self.h, self.phi[:, j].copy(), self.dB[:, j].copy())


def time_grid(t_start: float, t_end: float, h: float) -> np.ndarray:
    """Uniform grid whose last node is exactly ``t_end``."""
    n = check_grid_steps(t_end - t_start, h, "window length")
    return t_end - h * (n - np.arange(n + 1))


def _window(config: SimConfig, t_start, t_end) -> np.ndarray:
    t_start = -config.T_support if t_start is None else t_start
    return time_grid(t_start, t_end, config.h)


def _ou_constants(config: SimConfig) -> tuple[float, float, float]:
    m2, h = config.m**2, config.h
    decay = np.exp(-m2 * h)
    step_sd = np.sqrt(-np.expm1(-2.0 * m2 * h) / (2.0 * m2))
    return decay, step_sd, np.sqrt(1.0 / (2.0 * m2))


def _increments(phi: np.ndarray, m2: float, h: float) -> np.ndarray:
    # Brownian increments from xi = (d/dt + m^2) phi, trapezoid in the m^2 phi term
    return np.diff(phi, axis=0) + m2 * h * 0.5 * (phi[1:] + phi[:-1])


def simulate_ou_block(config: SimConfig, start: int, stop: int, t_start: float | None = None,
                      t_end: float = 0.0, stream: int = STREAM_OU) -> PathBatch:
    """Exact OU transitions ``φ' = e^{-m²h} φ + N(0, (1 - e^{-2m²h})/(2m²))``."""
    times = _window(config, t_start, t_end)
    z = block_normals(config.seed, stream, start, stop, times.size)
    decay, step_sd, stat_sd = _ou_constants(config)
    phi = np.empty_like(z)
    phi[0] = stat_sd * z[0]
    for n in range(times.size - 1):
        phi[n + 1] = decay * phi[n] + step_sd * z[n + 1]
    return PathBatch(times, config.h, phi, _increments(phi, config.m**2, config.h), start)


def simulate_sde_block(config: SimConfig, start: int, stop: int, t_start: float | None = None,
                       t_end: float = 0.0, stream: int = STREAM_SDE,
                       potential: ScalarFn | None = None) -> PathBatch:
    """Exponential Euler for ``∂_t φ + m² φ + f(t) V'(φ) = ξ``."""
    times = _window(config, t_start, t_end)
    z = block_normals(config.seed, stream, start, stop, times.size)
    decay, step_sd, stat_sd = _ou_constants(config)
    V1 = (potential if potential is not None else config.V).derivative()
    f_grid = np.asarray(config.f(times), float)
    h = config.h
    phi = np.empty_like(z)
    drift = np.zeros_like(z[:-1])
    phi[0] = stat_sd * z[0]
    for n in range(times.size - 1):
        nxt = decay * phi[n] + step_sd * z[n + 1]
        if f_grid[n] != 0.0:
            drift[n] = f_grid[n] * V1(phi[n])
            nxt -= h * decay * drift[n]
        phi[n + 1] = nxt
    dB = _increments(phi, config.m**2, h) + h * drift
    return PathBatch(times, h, phi, dB, start)


def map_blocks(config: SimConfig, fn: Callable[[int, int], T], block_size: int = BLOCK_SIZE) -> list[T]:
    """Apply ``fn(start, stop)`` to fixed path blocks, results in block order.

    The block layout depends only on ``n_paths`` and ``block_size``, never on
    ``config.workers``, so results are identical for any worker count.
    """
    bounds = [(s, min(s + block_size, config.n_paths)) for s in range(0, config.n_paths, block_size)]
    if config.workers == 1 or len(bounds) == 1:
        return [fn(a, b) for a, b in bounds]
    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        return list(pool.map(lambda ab: fn(*ab), bounds))


def sample_ou_path(config: SimConfig, index: int = 0, t_start: float | None = None,
                   t_end: float = 0.0) -> Path:
    return simulate_ou_block(config, index, index + 1, t_start, t_end).path(0)


def solve_sde_path(config: SimConfig, index: int = 0, potential: ScalarFn | None = None,
                   t_start: float | None = None, t_end: float = 0.0) -> Path:
    return simulate_sde_block(config, index, index + 1, t_start, t_end, potential=potential).path(0)

"""Deterministic quadrature rules used by the reduction and localization checks."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np


class QuadratureError(RuntimeError):
    """Quadrature did not reach the requested tolerance."""

    def __init__(self, message: str, estimate: float | None = None, error: float | None = None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


@dataclass(frozen=True)
class QuadResult:
    value: float
    error: float
    evaluations: int


def adaptive_simpson(f: Callable[[float], float], a: float, b: float, tol: float = 1e-10,
                     max_depth: int = 48, max_intervals: int = 2_000_000) -> QuadResult:
    """Adaptive Simpson rule with Richardson correction and absolute tolerance.

    Intervals are processed from an explicit stack, so the summation order is
    fixed and results are reproducible.
    """
    if a == b:
        return QuadResult(0.0, 0.0, 0)
    fa, fm, fb = float(f(a)), float(f(0.5 * (a + b))), float(f(b))
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    stack = [(a, b, fa, fm, fb, whole, tol, 0)]
    total, err_total, evals, processed = 0.0, 0.0, 3, 0
    while stack:
        lo, hi, flo, fmid, fhi, est, eps, depth = stack.pop()
        processed += 1
        if processed > max_intervals:
            raise QuadratureError("adaptive Simpson exceeded its interval budget", total, err_total)
        mid = 0.5 * (lo + hi)
        lm, rm = 0.5 * (lo + mid), 0.5 * (mid + hi)
        flm, frm = float(f(lm)), float(f(rm))
        evals += 2
        left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid)
        right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi)
        delta = left + right - est
        if abs(delta) <= 15.0 * eps or depth >= max_depth:
            if depth >= max_depth and abs(delta) > 15.0 * eps:
                raise QuadratureError(
                    f"adaptive Simpson hit depth {max_depth} on [{lo}, {hi}]",
                    total + left + right, err_total + abs(delta) / 15.0)
            total += left + right + delta / 15.0
            err_total += abs(delta) / 15.0
        else:
            # right half pushed first so the left half is summed first
            stack.append((mid, hi, fmid, frm, fhi, right, 0.5 * eps, depth + 1))
            stack.append((lo, mid, flo, flm, fmid, left, 0.5 * eps, depth + 1))
    return QuadResult(total, err_total, evals)


def gauss_legendre_panels(a: float, b: float, panels: int, order: int = 8):
    """Nodes and weights of the composite Gauss-Legendre rule on ``[a, b]``."""
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    centers = 0.5 * (edges[:-1] + edges[1:])
    nodes = (centers[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def simplex_rule(lower: float, upper: float, dim: int, panels: int, order: int = 8):
    """Collapsed-coordinate rule on ``lower < t_dim < ... < t_1 < upper``.

    Returns ``(nodes, weights)`` with ``nodes`` of shape ``(dim, N)``; row
    ``i`` holds ``t_{i+1}``.
    """
    if dim < 1:
        raise ValueError("simplex dimension must be at least 1")
    u, wu = gauss_legendre_panels(0.0, 1.0, panels, order)
    grids = np.meshgrid(*([u] * dim), indexing="ij")
    wgrids = np.meshgrid(*([wu] * dim), indexing="ij")
    us = [g.ravel() for g in grids]
    weights = np.ones_like(us[0])
    for wg in wgrids:
        weights = weights * wg.ravel()
    nodes = np.empty((dim, us[0].size))
    top = np.full(us[0].shape, upper, dtype=float)
    for i in range(dim):
        span = top - lower
        nodes[i] = lower + span * us[i]
        weights = weights * span
        top = nodes[i]
    return nodes, weights


def integrate_simplex(f: Callable[[np.ndarray], np.ndarray], lower: float, upper: float,
                      dim: int, tol: float, order: int = 8, start_panels: int = 2,
                      max_nodes: int = 600_000) -> QuadResult:
    """Integrate a vectorised ``f(nodes)`` over the ordered simplex.

    The panel count doubles until two successive estimates agree to ``tol``.
    """
    if upper <= lower:
        return QuadResult(0.0, 0.0, 0)
    panels = start_panels
    nodes, weights = simplex_rule(lower, upper, dim, panels, order)
    prev = float(np.dot(f(nodes), weights))
    evals = weights.size
    while True:
        panels *= 2
        if (panels * order) ** dim > max_nodes:
            raise QuadratureError(
                f"simplex quadrature did not converge to {tol} within {max_nodes} nodes", prev)
        nodes, weights = simplex_rule(lower, upper, dim, panels, order)
        cur = float(np.dot(f(nodes), weights))
        evals += weights.size
        err = abs(cur - prev)
        if err <= tol:
            return QuadResult(cur, err, evals)
        prev = cur

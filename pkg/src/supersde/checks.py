"""Verification suites producing report rows.

Each suite returns a list of :class:`Row`. A row passes iff
``|value - reference| <= tolerance`` on the stored floats. The CLI writes
these rows to CSV and the acceptance tests assert on them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import grassmann as gr
from . import scalar as sc
from .sde.config import SimConfig
from .sde.estimators import (kernel_values, localization_reference, mean_estimate,
                             super_exponents, verify_main_theorem)
from .sde.models import Observable, make_observable
from .sde.wong_zakai import wong_zakai_check
from .superfunction import THETA, THETABAR, lift_supersymmetric, reduce_integral
from .superwick import CovarianceSpec, corollary_lhs, fermionic_det, localization_lhs, localization_rhs

SUITE_ORDER = ("algebra-selftest", "verify-reduction", "verify-wick", "verify-localization",
               "verify-girsanov", "verify-gibbs", "wong-zakai")


@dataclass(frozen=True)
class Row:
    check_id: str
    quantity: str
    value: float
    std_err: float | None
    reference: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return abs(self.value - self.reference) <= self.tolerance


# algebra ---------------------------------------------------------------------

def _random_element(rng: np.random.Generator, n_gen: int, parity: int | None = None) -> gr.GrassmannElement:
    terms = {}
    for _ in range(int(rng.integers(1, 5))):
        mask = rng.random(n_gen) < 0.4
        if parity is not None and mask.sum() % 2 != parity:
            mask[int(rng.integers(n_gen))] ^= True
            if mask.sum() % 2 != parity:
                continue
        key = tuple(int(i) for i in np.flatnonzero(mask))
        terms[key] = terms.get(key, 0.0) + float(rng.integers(-3, 4))
    return gr.GrassmannElement(terms)


def algebra_selftest(n_elements: int = 10_000, seed: int = 0, n_gen: int = 6) -> list[Row]:
    """Exact identities on fuzzed sparse elements with integer coefficients.

    Values are violation counts, so the reference and tolerance are both 0.
    """
    rng = np.random.default_rng(seed)
    bad = dict(anticommutativity=0, associativity=0, nilpotency=0, berezin_linearity=0,
               berezin_rules=0)
    n_triples = n_elements // 5
    for _ in range(n_triples):
        a = _random_element(rng, n_gen)
        b = _random_element(rng, n_gen)
        c = _random_element(rng, n_gen)
        x = _random_element(rng, n_gen, parity=1)
        y = _random_element(rng, n_gen, parity=1)
        i, j = (int(v) for v in rng.integers(n_gen, size=2))
        gi, gj = gr.generator(i), gr.generator(j)
        if not (gi * gj == -(gj * gi) and x * y == -(y * x)):
            bad["anticommutativity"] += 1
        if not (a * b) * c == a * (b * c):
            bad["associativity"] += 1
        if not ((gi * gi).is_zero() and (x * x).is_zero()):
            bad["nilpotency"] += 1
        alpha, beta = float(rng.integers(-3, 4)), float(rng.integers(-3, 4))
        gens = [int(g) for g in rng.permutation(n_gen)[: int(rng.integers(1, 4))]]
        if not gr.berezin(alpha * a + beta * b, gens) == alpha * gr.berezin(a, gens) + beta * gr.berezin(b, gens):
            bad["berezin_linearity"] += 1
        if not (gr.berezin(gi, [i]) == gr.scalar(1.0) and gr.berezin(gr.scalar(1.0), [i]).is_zero()):
            bad["berezin_rules"] += 1
    rows = [Row("algebra-selftest", f"{name}_violations", float(v), None, 0.0, 0.0)
            for name, v in bad.items()]
    top = gr.berezin(gr.monomial(THETA, THETABAR), [THETA, THETABAR]).scalar_part
    rows.append(Row("algebra-selftest", "berezin_theta_thetabar", top, None, -1.0, 0.0))
    return rows


# reduction -------------------------------------------------------------------

def reduction_corpus() -> list[tuple[str, sc.ScalarFn, sc.ScalarFn, float]]:
    """Supersymmetric pairs ``(T, F) = (lift t, lift f)`` and the upper limit ``K``."""
    cases = []
    for a in (0.5, 1.0, 2.0):
        for K in (-1.0, 0.0, 0.7):
            cases.append((f"exp({a:g}t)*gauss(0,1)@K={K:g}", sc.exponential(a), sc.gaussian(0.0, 1.0), K))
    cases.append(("gauss(0.3,0.5)*gauss(-0.2,1.5)@K=0", sc.gaussian(0.3, 0.5), sc.gaussian(-0.2, 1.5), 0.0))
    cases.append(("gauss(1,0.8)*exp(t)@K=0.5", sc.gaussian(1.0, 0.8), sc.exponential(1.0), 0.5))
    cases.append(("exp(t)*exp(0.3t)@K=0", sc.exponential(1.0), sc.exponential(0.3), 0.0))
    return cases


def verify_reduction(tol: float = 1e-8) -> list[Row]:
    rows = []
    for name, t_fn, f_fn, K in reduction_corpus():
        lhs, rhs = reduce_integral(lift_supersymmetric(t_fn), lift_supersymmetric(f_fn), K, tol=1e-11)
        rows.append(Row("verify-reduction", name, lhs, None, rhs, tol))
    return rows


# wick ------------------------------------------------------------------------

def verify_wick(m: float = 1.0, n_max: int = 6, n_tuples: int = 100, seed: int = 0,
                tol: float = 1e-12) -> list[Row]:
    """Worst deviation of the fermionic determinant from ``2^{-n}`` per ``n``."""
    spec = CovarianceSpec(m)
    rng = np.random.default_rng(seed)
    rows = []
    for n in range(1, n_max + 1):
        ref = 2.0**-n
        worst = ref
        for _ in range(n_tuples):
            times = rng.uniform(-5.0, 5.0, n)
            while len(set(times)) < n:
                times = rng.uniform(-5.0, 5.0, n)
            val = fermionic_det(spec, times)
            if abs(val - ref) > abs(worst - ref):
                worst = val
        rows.append(Row("verify-wick", f"fermionic_det_n{n}", worst, None, ref, tol))
    return rows


# localization ----------------------------------------------------------------

LOCALIZATION_PREFACTORS = {0: [], 1: [(0.0, 2)], 2: [(0.5, 1), (-0.2, 1)]}
LOCALIZATION_POLYS = {"x": [0.0, 1.0], "x^2": [0.0, 0.0, 1.0], "x^2+x": [0.0, 1.0, 1.0]}


def verify_localization(config: SimConfig) -> list[Row]:
    spec = CovarianceSpec(config.m)
    tol = max(1e-6, config.quad_tol)
    quad = min(1e-9, config.quad_tol)
    rows = []
    for ell in (1, 2):
        for pname, P in LOCALIZATION_POLYS.items():
            for k, pre in LOCALIZATION_PREFACTORS.items():
                lhs = localization_lhs(spec, pre, config.f, P, ell, quad)
                rhs = localization_rhs(spec, pre, config.f, P, ell)
                rows.append(Row("verify-localization", f"ell={ell};P={pname};k={k}", lhs, None, rhs, tol))
    return rows


# monte carlo -----------------------------------------------------------------

def _observables(names: Sequence[str]) -> list[Observable]:
    return [make_observable(n) for n in names]


class MonteCarloSuite:
    """Runs the path-level checks, sharing one main-theorem simulation."""

    POLY_KERNEL = (0.3, 1.0, 0.5)
    POLY_CASES = (("H=x;F=x", [0.0, 1.0], 1), ("H=x^2;F=1", [0.0, 0.0, 1.0], 0),
                  ("H=x^2+x;F=x^2", [0.0, 1.0, 1.0], 2))

    def __init__(self, config: SimConfig, observables: Sequence[str] = ("cos", "tanh", "step")):
        self.config = config
        self.observables = _observables(observables)
        self._report = None

    @property
    def report(self):
        if self._report is None:
            self._report = verify_main_theorem(self.config, self.observables)
        return self._report

    def girsanov_rows(self) -> list[Row]:
        return [Row("verify-girsanov", f"E1-E2;F={c.name}", c.E1.mean, c.se_combined, c.E2.mean,
                    3.0 * c.se_combined) for c in self.report.checks]

    def gibbs_rows(self) -> list[Row]:
        rep, qt = self.report, self.config.quad_tol
        rows = []
        for c in rep.checks:
            rows.append(Row("verify-gibbs", f"E1;F={c.name}", c.E1.mean, c.E1.std_err, c.E3,
                            3.0 * (c.E1.std_err + qt)))
            rows.append(Row("verify-gibbs", f"E2;F={c.name}", c.E2.mean, c.E2.std_err, c.E3,
                            3.0 * (c.E2.std_err + qt)))
        for label, z in (("Z;direct", rep.Z_direct), ("Z;girsanov", rep.Z_girsanov)):
            rows.append(Row("verify-gibbs", label, z.mean, z.std_err, rep.Z_reference, 3.0 * z.std_err))
        return rows + self.localization_rows()

    def localization_rows(self) -> list[Row]:
        cfg = self.config
        G = lift_supersymmetric(cfg.f)
        Hs = [cfg.V] + [sc.polynomial(P) for _, P, _ in self.POLY_CASES]
        phi0, AB = super_exponents(cfg, G, Hs)
        rows = []
        w_exp = kernel_values("exp", *AB[0])
        for ob in self.observables:
            est = mean_estimate(np.broadcast_to(ob.fn(phi0), phi0.shape) * w_exp)
            ref = localization_reference(ob, G, cfg.V, cfg.m, "exp", cfg.quad_tol, ob.jumps)
            rows.append(Row("verify-gibbs", f"localization;K=exp;F={ob.name}", est.mean, est.std_err,
                            ref, 3.0 * est.std_err))
        spec = CovarianceSpec(cfg.m)
        for (label, P, power), H, (A, B) in zip(self.POLY_CASES, Hs[1:], AB[1:]):
            F = sc.polynomial([0.0] * power + [1.0])
            est = mean_estimate(F(phi0) * kernel_values(self.POLY_KERNEL, A, B))
            quad = localization_reference(F, G, H, cfg.m,
                                          self.POLY_KERNEL, cfg.quad_tol)
            symbolic = sum(c * corollary_lhs(spec, power, cfg.f, P, k, 1e-10)
                           for k, c in enumerate(self.POLY_KERNEL))
            rows.append(Row("verify-gibbs", f"localization;K=poly;{label};quadrature", est.mean,
                            est.std_err, quad, 3.0 * est.std_err))
            rows.append(Row("verify-gibbs", f"localization;K=poly;{label};superwick", est.mean,
                            est.std_err, symbolic, 3.0 * est.std_err))
        return rows

    def wong_zakai_rows(self, n_seeds: int = 32) -> list[Row]:
        results = wong_zakai_check(self.config, self.config.eps_list, n_seeds=n_seeds)
        decreased = sum(r.decreased for r in results)
        median = float(np.median([r.discrepancies[-1] for r in results]))
        return [Row("wong-zakai", f"decreasing_seeds_of_{n_seeds}", float(decreased), None,
                    float(n_seeds), float(n_seeds // 4)),
                Row("wong-zakai", f"median_discrepancy_eps={self.config.eps_list[-1]:g}", median,
                    None, 0.0, 0.05)]


def run_suite(name: str, config: SimConfig, observables: Sequence[str] = ("cos", "tanh", "step"),
              mc: MonteCarloSuite | None = None) -> list[Row]:
    mc = mc if mc is not None else MonteCarloSuite(config, observables)
    table: dict[str, Callable[[], list[Row]]] = {
        "algebra-selftest": algebra_selftest,
        "verify-reduction": verify_reduction,
        "verify-wick": lambda: verify_wick(config.m),
        "verify-localization": lambda: verify_localization(config),
        "verify-girsanov": mc.girsanov_rows,
        "verify-gibbs": mc.gibbs_rows,
        "wong-zakai": mc.wong_zakai_rows,
    }
    if name == "all":
        return [row for suite in SUITE_ORDER for row in table[suite]()]
    if name not in table:
        raise KeyError(name)
    return table[name]()

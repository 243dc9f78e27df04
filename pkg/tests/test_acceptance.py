"""Acceptance criteria 1-10 at their stated tolerances.

Each test records one PASS/FAIL line, printed together at the end of the run.
The Monte Carlo criteria share one run of the default configuration
(m = 1, V = ½cos x, bump f with T = 1, h = 2^-10, N = 2·10^5).
"""

import time

import pytest
from acceptance_log import record

from supersde.checks import (MonteCarloSuite, algebra_selftest, verify_localization,
                             verify_reduction, verify_wick)
from supersde.cli import rows_to_csv
from supersde.sde import SimConfig, time_reversal_check

DEFAULT = SimConfig()

# independent trapezoid oracle (see test_gibbs.py) and exact symmetry values
E3_ORACLE = {"cos": 0.6749423189788105, "tanh": 0.0, "step": 0.5}


def failing(rows):
    return [r for r in rows if not r.passed]


def timed(fn, *args):
    start = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - start


@pytest.fixture(scope="module")
def mc_rows():
    mc = MonteCarloSuite(DEFAULT)
    return {"girsanov": mc.girsanov_rows(), "gibbs": mc.gibbs_rows(), "wong-zakai": mc.wong_zakai_rows()}


def test_criterion_1_algebra_exactness():
    rows, secs = timed(algebra_selftest, 10_000)
    ok = not failing(rows) and secs < 5.0
    record("1", ok, f"{len(rows)} identity rows, 0 violations required, {secs:.2f}s (< 5s)")
    assert not failing(rows)
    assert secs < 5.0


def test_criterion_2_reduction_formula():
    rows, secs = timed(verify_reduction)
    worst = max(abs(r.value - r.reference) for r in rows)
    ok = not failing(rows) and worst <= 1e-8 and secs < 5.0
    record("2", ok, f"{len(rows)} supersymmetric pairs, max |lhs-rhs| = {worst:.2e} (<= 1e-8), {secs:.2f}s")
    assert ok


def test_criterion_3_fermionic_determinant():
    rows, secs = timed(verify_wick, 1.0, 6, 100)
    worst = max(abs(r.value - r.reference) for r in rows)
    ok = not failing(rows) and secs < 1.0
    record("3", ok, f"n = 1..6 x 100 tuples, max |det - 2^-n| = {worst:.2e} (<= 1e-12), {secs:.3f}s")
    assert ok


def test_criterion_4_localization():
    rows, secs = timed(verify_localization, DEFAULT)
    worst = max(abs(r.value - r.reference) for r in rows)
    ok = len(rows) == 18 and not failing(rows) and secs < 120.0
    record("4", ok, f"{len(rows)} cases (ell x P x k), max |lhs-rhs| = {worst:.2e}, {secs:.1f}s")
    assert ok


def test_criterion_5_main_theorem(mc_rows):
    rows = [r for r in mc_rows["gibbs"] if r.quantity.startswith(("E1;", "E2;"))]
    assert len(rows) == 6
    oracle_ok = all(abs(r.reference - E3_ORACLE[r.quantity.split("F=")[1]]) <= 1e-10 for r in rows)
    worst_se = max(r.std_err for r in rows)
    ok = not failing(rows) and oracle_ok and worst_se <= 5e-3
    detail = ", ".join(f"{r.quantity}={r.value:.4f}±{r.std_err:.4f} vs {r.reference:.4f}" for r in rows)
    record("5", ok, detail)
    assert oracle_ok
    assert not failing(rows)
    assert worst_se <= 5e-3


def test_criterion_6_girsanov_consistency(mc_rows):
    rows = mc_rows["girsanov"]
    ok = len(rows) == 3 and not failing(rows)
    detail = ", ".join(f"{r.quantity}: {abs(r.value - r.reference):.4f} <= {r.tolerance:.4f}" for r in rows)
    record("6", ok, detail)
    assert ok


def test_criterion_7_estimator_localization(mc_rows):
    rows = [r for r in mc_rows["gibbs"] if r.quantity.startswith("localization")]
    assert len([r for r in rows if "K=exp" in r.quantity]) == 3
    assert len([r for r in rows if r.quantity.endswith("superwick")]) == 3
    ok = not failing(rows)
    record("7", ok, f"{len(rows)} rows (exp kernel vs quadrature; degree-2 kernel vs quadrature and "
                    f"super-Wick), max |z| = {max(abs(r.value - r.reference) / r.std_err for r in rows):.2f}")
    assert ok


def test_criterion_8_wong_zakai(mc_rows):
    count, median = mc_rows["wong-zakai"]
    ok = count.value >= 24 and median.value < 0.05
    record("8", ok, f"{count.value:.0f}/32 seeds decrease, median final discrepancy {median.value:.2e}")
    assert ok


def test_criterion_9_determinism(mc_rows):
    mc = MonteCarloSuite(DEFAULT.with_(workers=3))
    again = {"girsanov": mc.girsanov_rows(), "gibbs": mc.gibbs_rows(), "wong-zakai": mc.wong_zakai_rows()}
    first = "".join(rows_to_csv(mc_rows[k]) for k in ("gibbs", "girsanov", "wong-zakai")).encode()
    second = "".join(rows_to_csv(again[k]) for k in ("gibbs", "girsanov", "wong-zakai")).encode()
    ok = first == second
    record("9", ok, f"criteria 5-8 CSV with workers=1 vs workers=3: {len(first)} bytes, identical={ok}")
    assert ok


def test_normalisation_constant(mc_rows):
    rows = [r for r in mc_rows["gibbs"] if r.quantity.startswith("Z;")]
    assert len(rows) == 2 and not failing(rows)


@pytest.mark.slow
@pytest.mark.xfail(strict=True, reason="the drifted law is not invariant under t -> -t; "
                                       "the time-odd weight exp(∫f'V) breaks the symmetry")
def test_criterion_10_time_reversal():
    checks = time_reversal_check(DEFAULT.with_(n_paths=100_000))
    ok = all(c.passed for c in checks)
    detail = ", ".join(f"(s,t)=({c.s:g},{c.t:g}): {c.forward:.4f} vs {c.backward:.4f}, "
                       f"{abs(c.forward - c.backward) / c.std_err:.1f} SE" for c in checks)
    record("10", ok, detail + " (unattainable as stated; see ledger)")
    assert ok


@pytest.mark.slow
def test_criterion_10_reweighted_time_reversal():
    checks = time_reversal_check(DEFAULT.with_(n_paths=100_000), reweighted=True)
    ok = all(c.passed for c in checks)
    detail = ", ".join(f"(s,t)=({c.s:g},{c.t:g}): {abs(c.forward - c.backward) / c.std_err:.1f} SE" for c in checks)
    record("10b", ok, "reweighted by exp(-∫f'V): " + detail)
    assert ok

import math

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from supersde import scalar as sc
from supersde.sde import (SDEReweightingEstimator, SimConfig, SuperExpectationEstimator,
                          gibbs_expectation, make_observable, ratio_estimate,
                          super_expectation_estimate, time_reversal_check, verify_main_theorem)
from supersde.superfunction import SuperFunction, lift_supersymmetric

SMALL = SimConfig(n_paths=20_000, h=2.0**-8)


def test_sklearn_parameter_protocol():
    est = SDEReweightingEstimator(SMALL, method="girsanov")
    assert est.get_params() == {"config": SMALL, "method": "girsanov"}
    twin = clone(est).set_params(method="direct")
    assert twin.method == "direct" and est.method == "girsanov"
    with pytest.raises(NotFittedError):
        est.expectation(sc.harmonic())
    with pytest.raises(ValueError):
        SDEReweightingEstimator(SMALL, method="bogus").fit()


def test_ratio_estimate_equal_weights_is_plain_mean():
    x = np.arange(10.0)
    est = ratio_estimate(x, np.zeros(10))
    assert est.mean == 4.5 and est.n == 10
    assert est.std_err == pytest.approx(np.std(x, ddof=1) / math.sqrt(10))


def test_ratio_estimate_is_scale_invariant():
    rng = np.random.default_rng(0)
    x, lw = rng.normal(size=100), rng.normal(size=100)
    a, b = ratio_estimate(x, lw), ratio_estimate(x, lw + 50.0)
    assert a.mean == pytest.approx(b.mean, rel=1e-12)


def test_zero_potential_reduces_to_gaussian():
    cfg = SMALL.with_(potential="zero")
    ob = make_observable("cos")
    e1 = SDEReweightingEstimator(cfg, "direct").fit()
    e2 = SDEReweightingEstimator(cfg, "girsanov").fit()
    assert np.all(e1.log_weight_ == 0.0) and np.all(e2.log_weight_ == 0.0)
    ref = math.exp(-0.25)
    for est in (e1.expectation(ob), e2.expectation(ob)):
        assert abs(est.mean - ref) <= 3 * est.std_err


def test_estimates_are_worker_independent():
    cfg = SMALL.with_(n_paths=5000)
    a = SDEReweightingEstimator(cfg, "girsanov").fit()
    b = SDEReweightingEstimator(cfg.with_(workers=3), "girsanov").fit()
    np.testing.assert_array_equal(a.log_weight_, b.log_weight_)
    assert a.expectation(sc.harmonic()) == b.expectation(sc.harmonic())


@pytest.mark.parametrize("potential", ["cosine", "tanhpoly"])
def test_girsanov_consistency_small(potential):
    cfg = SimConfig(n_paths=50_000, h=2.0**-8, potential=potential)
    rep = verify_main_theorem(cfg, [make_observable(n) for n in ("cos", "tanh", "step")])
    for c in rep.checks:
        assert c.pass_consistency, c
        assert c.pass_direct and c.pass_girsanov, c


def test_super_estimator_zero_G_is_gaussian_mean():
    G = SuperFunction()
    est = super_expectation_estimate(sc.harmonic(), G, SMALL.V, SMALL)
    assert abs(est.mean - math.exp(-0.25)) <= 3 * est.std_err


def test_super_estimator_constant_H_closed_form():
    G = lift_supersymmetric(SMALL.f)
    model = SuperExpectationEstimator(G, sc.constant(0.7), SMALL).fit()
    # weight exp(-∫ 2 f' · 0.7 dt) = exp(-1.4) on every path
    np.testing.assert_allclose(model.kernel_values_, math.exp(-1.4), rtol=1e-5)  # trapezoid, h = 2^-8


def test_super_estimator_localizes_for_exp_kernel():
    G = lift_supersymmetric(SMALL.f)
    model = SuperExpectationEstimator(G, SMALL.V, SMALL).fit()
    est = model.expectation(sc.harmonic())
    assert abs(est.mean - model.reference(sc.harmonic())) <= 3 * est.std_err


def test_super_estimator_rejects_odd_components():
    G = SuperFunction.from_parts(SMALL.f, SMALL.f)
    with pytest.raises(ValueError, match="θ"):
        SuperExpectationEstimator(G, SMALL.V, SMALL).fit()


def test_super_estimator_rejects_support_before_window():
    G = lift_supersymmetric(sc.gaussian(0.0, 1.0))
    with pytest.raises(ValueError, match="vanish"):
        SuperExpectationEstimator(G, SMALL.V, SMALL).fit()


def test_super_estimator_bad_kernel():
    G = lift_supersymmetric(SMALL.f)
    with pytest.raises(ValueError):
        SuperExpectationEstimator(G, SMALL.V, SMALL, kernel="cosh").fit()


def test_main_theorem_report_normalisation():
    cfg = SMALL
    rep = verify_main_theorem(cfg, [make_observable("one")])
    assert rep.checks[0].E1.mean == pytest.approx(1.0)
    assert rep.Z_reference == pytest.approx(1 / math.sqrt(math.pi))
    for z in (rep.Z_direct, rep.Z_girsanov):
        assert abs(z.mean - rep.Z_reference) <= 3 * z.std_err


def test_reversal_check_zero_potential_is_symmetric():
    cfg = SMALL.with_(potential="zero")
    for r in time_reversal_check(cfg):
        assert r.passed

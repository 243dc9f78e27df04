import math

import numpy as np
import pytest

from supersde import scalar as sc
from supersde.sde import (Path, SimConfig, sample_ou_path, solve_sde_path, stratonovich_integral,
                          weight_direct, weight_girsanov)
from supersde.sde.weights import complex_gaussian_moment, super_exponent_batch

CFG = SimConfig(n_paths=1)


def test_zero_potential_weights_are_one():
    cfg = CFG.with_(potential="zero")
    assert weight_direct(solve_sde_path(cfg), cfg) == 1.0
    assert weight_girsanov(sample_ou_path(cfg), cfg) == 1.0


def test_direct_weight_is_one_where_f_is_flat():
    path = sample_ou_path(CFG, t_start=-5.0, t_end=-2.0)
    assert weight_direct(path, CFG) == 1.0


@pytest.mark.parametrize("c", [0.5, -1.2])
def test_constant_potential_weights(c):
    cfg = CFG.with_(potential="constant", potential_scale=c)
    for idx in range(3):
        wd = weight_direct(solve_sde_path(cfg, idx), cfg)
        wg = weight_girsanov(sample_ou_path(cfg, idx), cfg)
        # trapezoid rule for ∫f' carries an O(h^2) endpoint error, about 2e-7 here
        assert wd == pytest.approx(math.exp(-2 * c), rel=1e-6)
        assert wg == pytest.approx(wd, rel=1e-12)


def test_stratonovich_constant_integrand_sums_increments():
    path = sample_ou_path(CFG)
    val = stratonovich_integral(path, lambda t, x: np.ones_like(x))
    assert val == pytest.approx(path.dB.sum(), abs=1e-12)


def test_stratonovich_chain_rule_on_brownian_path():
    rng = np.random.default_rng(3)
    h = 2.0**-10
    dB = rng.normal(0, math.sqrt(h), 1024)
    B = np.concatenate([[0.4], 0.4 + np.cumsum(dB)])
    path = Path(-1.0, h, B, dB)
    val = stratonovich_integral(path, lambda t, x: x)
    assert val == pytest.approx(0.5 * (B[-1] ** 2 - B[0] ** 2), abs=1e-10)


def test_deterministic_integrand_matches_ito_sum():
    path = sample_ou_path(CFG)
    f = CFG.f
    strat = stratonovich_integral(path, lambda t, x: f(t) + 0 * x)
    ito = float(np.sum(f(path.times[:-1]) * path.dB))
    # midpoint and left-point sums differ by Σ (f(t_mid) - f(t_n)) ΔB = O(h)
    assert abs(strat - ito) < 10 * CFG.h


def test_super_exponent_constant_H_is_deterministic():
    cfg = CFG
    times = np.linspace(-1, 0, 1025)
    phi = np.random.default_rng(0).normal(size=(1025, 5))
    dB = np.random.default_rng(1).normal(size=(1024, 5))
    g0, g2 = cfg.f, cfg.f.derivative() * 2.0
    A, B = super_exponent_batch(times, phi, dB, cfg.h, g0, g2, sc.constant(0.7))
    # -∫ 2 f' c dt = -2c (f(0) - f(-1))
    np.testing.assert_allclose(A, -1.4, rtol=1e-6)  # h = 2^-10, trapezoid O(h^2)
    np.testing.assert_array_equal(B, 0.0)


@pytest.mark.parametrize("k", range(6))
def test_complex_gaussian_moment_against_gauss_hermite(k):
    x, w = np.polynomial.hermite_e.hermegauss(20)
    w = w / w.sum()
    for A, B in [(0.3, 0.0), (-1.1, 0.4), (0.0, 2.0)]:
        ref = np.sum(w * (A + 1j * math.sqrt(B) * x) ** k)
        assert complex_gaussian_moment(np.array(A), np.array(B), k) == pytest.approx(ref.real, abs=1e-12)
        assert abs(ref.imag) < 1e-12

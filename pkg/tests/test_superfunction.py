import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from supersde import grassmann as gr
from supersde import scalar as sc
from supersde.superfunction import (RHO, THETA, THETA_THETABAR, THETABAR, SuperFunction,
                                    SupersymmetryError, apply_Q, apply_Qbar, compose,
                                    is_supersymmetric, lift_supersymmetric, reduce_integral,
                                    supersymmetry_defect, tau_transform)

GRID = np.linspace(-2.0, 1.5, 11)

amps = st.floats(-2, 2, allow_nan=False)
freqs = st.floats(0.2, 2.0)
phases = st.floats(0, 6.3)
component_fns = st.builds(sc.harmonic, amps, freqs, phases)
superfunctions = st.builds(SuperFunction.from_parts, component_fns, component_fns, component_fns, component_fns)
profiles = st.one_of(st.builds(sc.gaussian, st.floats(-1, 1), st.floats(0.3, 2.0)),
                     st.builds(sc.exponential, st.floats(0.2, 2.0)))


def same(F, G, grid=GRID, tol=1e-9):
    return all(F(t).allclose(G(t), tol) for t in grid)


def is_zero(F, grid=GRID, tol=1e-9):
    return all(F(t).allclose(0.0, tol) for t in grid)


def test_Q_on_coordinates():
    t = SuperFunction.from_parts(sc.identity())
    assert same(apply_Q(t), SuperFunction({(THETA,): 2.0}))
    assert same(apply_Qbar(t), SuperFunction({(THETABAR,): 2.0}))
    thetabar = SuperFunction({(THETABAR,): 1.0})
    assert same(apply_Q(thetabar), SuperFunction.constant(1.0))


def test_Qbar_components():
    F = SuperFunction.from_parts(sc.harmonic(1, 1, 0), sc.harmonic(1, 2, 0), sc.harmonic(1, 3, 0),
                                 sc.harmonic(1, 0.5, 0))
    got = apply_Qbar(F)
    for t in GRID:
        v = got(t)
        assert v.coefficient(()) == pytest.approx(-F.f_theta(t))
        assert v.coefficient((THETABAR,)) == pytest.approx(2 * F.f_empty.derivative()(t) - F.f_thetathetabar(t))
        assert v.coefficient((THETA,)) == pytest.approx(0.0)
        assert v.coefficient(THETA_THETABAR) == pytest.approx(-2 * F.f_theta.derivative()(t))


@given(superfunctions)
def test_Q_nilpotent(F):
    assert is_zero(apply_Q(apply_Q(F)))
    assert is_zero(apply_Qbar(apply_Qbar(F)))


@given(superfunctions)
def test_Q_Qbar_anticommute(F):
    assert is_zero(apply_Q(apply_Qbar(F)) + apply_Qbar(apply_Q(F)))


@given(superfunctions, superfunctions)
def test_Q_graded_leibniz_on_even_factor(F, G):
    # F restricted to its even part acts as an even element
    E = SuperFunction({(): F.f_empty, THETA_THETABAR: F.f_thetathetabar})
    assert same(apply_Q(E * G), apply_Q(E) * G + E * apply_Q(G))


@given(profiles)
def test_lift_is_supersymmetric(f):
    F = lift_supersymmetric(f)
    assert is_supersymmetric(F, GRID)
    assert is_zero(apply_Q(F)) and is_zero(apply_Qbar(F))


@given(superfunctions)
def test_classification_matches_generators(F):
    # annihilated by both generators iff supersymmetric in components
    annihilated = is_zero(apply_Q(F), tol=1e-12) and is_zero(apply_Qbar(F), tol=1e-12)
    assert annihilated == (supersymmetry_defect(F, GRID) <= 1e-12)


def test_non_supersymmetric_detected():
    F = SuperFunction.from_parts(sc.exponential(), None, None, sc.exponential())
    assert not is_supersymmetric(F, GRID)
    with pytest.raises(ValueError):
        supersymmetry_defect(SuperFunction({(RHO,): 1.0}), GRID)


def test_compose_examples():
    F = SuperFunction.from_parts(sc.identity(), None, None, sc.constant(1.0))
    val = compose(sc.polynomial([0, 0, 1]), F)(1.5)
    assert val == gr.GrassmannElement({(): 2.25, (0, 1): 3.0})
    E = compose(sc.exponential(), SuperFunction({THETA_THETABAR: 1.0}))(0.0)
    assert E == gr.GrassmannElement({(): 1.0, (0, 1): 1.0})


@given(profiles, st.sampled_from([sc.tanh(), sc.harmonic(0.5), sc.polynomial([0, 1, -0.3])]))
def test_compose_preserves_supersymmetry(f, H):
    assert is_supersymmetric(compose(H, lift_supersymmetric(f)), GRID, tol=1e-9)


@given(superfunctions, st.sampled_from([sc.tanh(), sc.harmonic(0.7), sc.exponential(0.3)]))
def test_compose_chain_rule(F, H):
    # the classical chain rule needs F and F' to commute, so use the even part
    E = SuperFunction({(): F.f_empty, THETA_THETABAR: F.f_thetathetabar})
    lhs = compose(H, E).time_derivative()
    rhs = compose(H.derivative(), E) * E.time_derivative()
    assert same(lhs, rhs, tol=1e-8)


@given(superfunctions, st.sampled_from([sc.tanh(), sc.harmonic(0.7), sc.exponential(0.3)]))
def test_compose_truncates_at_first_order(F, H):
    # the soul n = F - F_empty satisfies n*n = 0 for two odd generators
    soul = F - SuperFunction({(): F.f_empty})
    expected = SuperFunction({(): H.compose(F.f_empty)}) + SuperFunction({(): H.derivative().compose(F.f_empty)}) * soul
    assert same(compose(H, F), expected)


def test_tau_on_coordinates():
    b, bbar = 0.7, -1.3
    t = SuperFunction.from_parts(sc.identity())
    got = tau_transform(t, b, bbar)
    # t -> t - 2 bbar θρ - 2 b θ̄ρ
    expected = t + SuperFunction({(THETA, RHO): -2.0 * bbar, (THETABAR, RHO): -2.0 * b})
    assert same(got, expected)
    theta = SuperFunction({(THETA,): 1.0})
    assert same(tau_transform(theta, b, bbar), theta + SuperFunction({(RHO,): -b}))


@given(superfunctions, st.floats(-2, 2), st.floats(-2, 2))
def test_tau_is_first_order_generator_flow(F, b, bbar):
    rho = gr.generator(RHO)
    expected = F + rho * (apply_Qbar(F) * b + apply_Q(F) * bbar)
    assert same(tau_transform(F, b, bbar), expected)


@given(superfunctions, superfunctions, st.floats(-2, 2), st.floats(-2, 2))
def test_tau_is_multiplicative(F, G, b, bbar):
    E = SuperFunction({(): F.f_empty, THETA_THETABAR: F.f_thetathetabar})
    assert same(tau_transform(E * G, b, bbar), tau_transform(E, b, bbar) * tau_transform(G, b, bbar))


@given(profiles, st.floats(-2, 2), st.floats(-2, 2))
def test_tau_fixes_supersymmetric_functions(f, b, bbar):
    F = lift_supersymmetric(f)
    assert same(tau_transform(F, b, bbar), F)


@given(superfunctions, st.floats(-2, 2), st.floats(-2, 2))
def test_tau_commutes_with_composition(F, b, bbar):
    H = sc.tanh()
    E = SuperFunction({(): F.f_empty, THETA_THETABAR: F.f_thetathetabar})
    assert same(tau_transform(compose(H, E), b, bbar), compose(H, tau_transform(E, b, bbar)), tol=1e-8)


def test_reduction_exponential_pair():
    e = lift_supersymmetric(sc.exponential())
    lhs, rhs = reduce_integral(e, e, 0.0)
    assert rhs == -2.0
    assert lhs == pytest.approx(-2.0, abs=1e-9)


@given(profiles, profiles, st.floats(-1.0, 1.0))
def test_reduction_formula(t_fn, f_fn, K):
    lhs, rhs = reduce_integral(lift_supersymmetric(t_fn), lift_supersymmetric(f_fn), K)
    assert lhs == pytest.approx(rhs, abs=1e-8)


def test_reduction_rejects_non_supersymmetric():
    bad = SuperFunction.from_parts(sc.exponential(), None, None, sc.exponential())
    with pytest.raises(SupersymmetryError):
        reduce_integral(bad, lift_supersymmetric(sc.exponential()), 0.0)

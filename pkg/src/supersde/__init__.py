"""Supersymmetric dimensional reduction for one-dimensional SDEs.

Submodules: :mod:`grassmann` (exterior algebra and Berezin integration),
:mod:`superfunction` (superfunctions, supersymmetry generators and the
reduction formula), :mod:`superwick` (Gaussian super-expectations and
localization), :mod:`sde` (Monte Carlo verification) and :mod:`cli`.
"""

from .grassmann import GrassmannElement, berezin, generator, left_derivative, monomial, scalar
from .superfunction import (SuperFunction, apply_Q, apply_Qbar, compose, is_supersymmetric,
                            lift_supersymmetric, reduce_integral, tau_transform)
from .superwick import (CovarianceSpec, FieldSymbol, SuperInsertion, fermionic_det,
                        field_expectation, localization_lhs, localization_rhs, super_cov,
                        wick_super_expectation)

__version__ = "0.1.0"

__all__ = [
    "CovarianceSpec", "FieldSymbol", "GrassmannElement", "SuperFunction", "SuperInsertion",
    "apply_Q", "apply_Qbar", "berezin", "compose", "fermionic_det", "field_expectation",
    "generator", "is_supersymmetric", "left_derivative", "lift_supersymmetric",
    "localization_lhs", "localization_rhs", "monomial", "reduce_integral", "scalar",
    "super_cov", "tau_transform", "wick_super_expectation",
]

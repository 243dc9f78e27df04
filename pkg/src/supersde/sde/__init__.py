"""Path-level Monte Carlo: simulation, weights, estimators and checks."""

from .config import DEFAULT_SEED, SimConfig
from .estimators import (Estimate, MainTheoremReport, ObservableCheck, ReversalCheck,
                         SDEReweightingEstimator, SuperExpectationEstimator, mean_estimate,
                         ratio_estimate, super_expectation_estimate, time_reversal_check,
                         verify_main_theorem)
from .gibbs import gaussian_expectation, gibbs_expectation
from .models import Observable, make_observable, make_potential
from .paths import Path, PathBatch, sample_ou_path, solve_sde_path, time_grid
from .weights import stratonovich_integral, weight_direct, weight_girsanov
from .wong_zakai import WongZakaiResult, wong_zakai_check

__all__ = [
    "DEFAULT_SEED", "Estimate", "MainTheoremReport", "Observable", "ObservableCheck", "Path",
    "PathBatch", "ReversalCheck", "SDEReweightingEstimator", "SimConfig",
    "SuperExpectationEstimator", "WongZakaiResult", "gaussian_expectation", "gibbs_expectation",
    "make_observable", "make_potential", "mean_estimate", "ratio_estimate", "sample_ou_path",
    "solve_sde_path", "stratonovich_integral", "super_expectation_estimate", "time_grid",
    "time_reversal_check", "verify_main_theorem", "weight_direct", "weight_girsanov",
    "wong_zakai_check",
]

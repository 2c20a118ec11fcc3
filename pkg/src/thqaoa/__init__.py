"""thqaoa: closed-form performance analysis of Grover-mixer QAOA schedules.

The package models a cost landscape as a probability distribution (the
law of the cost of a uniformly random solution) and computes, in closed
form, what a Grover-mixer schedule can achieve on it:

* :mod:`thqaoa.dist_core` / :mod:`thqaoa.dist_models` -- the
  distribution layer: cdf, partial expectation ``E[X 1{X<=x}]``,
  quantiles, standardized views, equal-mass discretization, and the
  concrete families (normal, reflected gamma, binomial, reflected
  Pareto, two-point, empirical).
* :mod:`thqaoa.grover_kernel` -- the amplitude-amplification kernel:
  boosted probability ``P(rho, r)``, the certainty ratio
  ``threshold_ratio(r)``, fine-tuned binary schedules, amplification
  ratios.
* :mod:`thqaoa.gmth` -- threshold schedules: closed-form expectation at
  any threshold, exact optimization, threshold curves, certainty caps.
* :mod:`thqaoa.gmqaoa` -- raw-cost schedules: collapsed simulator,
  characteristic-function pair-sum expectation, angle optimization.
* :mod:`thqaoa.bounds` -- performance bounds: the per-layer score slope
  ``kappa``, the best-score curve ``c_th``, expectation floors from the
  amplification cap, round-count lower bounds, quantile envelopes.
* :mod:`thqaoa.maxcut` -- the complete-bipartite Max-Cut application:
  exact spectra with big-integer multiplicities and minimum round
  counts for approximation-ratio targets.
* :mod:`thqaoa.baselines` -- the classical random-sampling baseline
  (expected minimum of ``k`` draws): Blom approximation, exact
  integral/sum, Monte Carlo.
* :mod:`thqaoa.figures` -- deterministic row generators behind the
  ``thqaoa reproduce`` CLI targets.
* :mod:`thqaoa.cli` -- the ``thqaoa`` command-line interface.

The collapsed-state simulator runs on a compiled extension when
available; set ``THQAOA_BACKEND=python`` to force the pure-numpy
fallback (``thqaoa.BACKEND`` names the active one).
"""

from ._backend import BACKEND
from .baselines import (
    BLOM_CONTINUITY_CONSTANT,
    DEFAULT_EFFORT_FACTOR,
    CrsResult,
    crs_blom,
    crs_expected_min,
    crs_monte_carlo,
)
from .bounds import (
    BoundReport,
    c_th,
    grover_based_min_rounds_exact,
    kappa,
    max_amplification_floor,
    quantile_sandwich,
    score_cap_min_rounds,
    simulated_amplification,
)
from .dist_core import (
    ContinuousLaw,
    DiscreteLaw,
    DiscreteSpectrum,
    Distribution,
    StandardizedView,
    discretize_equal_mass,
)
from .dist_models import (
    BinomialLaw,
    EmpiricalLaw,
    NormalLaw,
    ReflectedGammaLaw,
    ReflectedParetoLaw,
    TwoPointLaw,
    empirical_from_file,
    make_binomial,
    make_empirical,
    make_normal,
    make_reflected_gamma,
    make_reflected_pareto,
    make_two_point,
    pareto_epsilon_for_exponent,
    pareto_limit_L,
)
from .errors import ConfigError, DomainError, NumericalError, ThqaoaError
from .gmqaoa import (
    CollapsedState,
    characteristic_function,
    expectation_from_state,
    expectation_pair_sum,
    identity_phase,
    optimize_angles,
    psi_function,
    simulate,
    threshold_phase,
)
from .gmth import (
    ThresholdCurve,
    ThresholdReport,
    certainty_threshold_cap,
    expectation_at_threshold,
    min_rounds_exact_opt,
    optimize_threshold,
    threshold_curve,
    threshold_report,
)
from .grover_kernel import (
    POLY_MAX_ROUNDS,
    AngleSchedule,
    GroverParams,
    amplification_ratio,
    grover_probability,
    grover_probability_poly,
    optimal_binary_angles,
    threshold_ratio,
)
from .maxcut import (
    BipartiteSpectrum,
    GraphInstance,
    bipartite_spectrum,
    brute_force_spectrum,
    complete_bipartite_instance,
    knn_spectrum,
    min_rounds_for_ratio,
    read_edge_list,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "BACKEND",
    # errors
    "ThqaoaError",
    "DomainError",
    "NumericalError",
    "ConfigError",
    # distribution layer
    "Distribution",
    "DiscreteSpectrum",
    "DiscreteLaw",
    "ContinuousLaw",
    "StandardizedView",
    "discretize_equal_mass",
    "NormalLaw",
    "ReflectedGammaLaw",
    "BinomialLaw",
    "ReflectedParetoLaw",
    "TwoPointLaw",
    "EmpiricalLaw",
    "make_normal",
    "make_reflected_gamma",
    "make_binomial",
    "make_reflected_pareto",
    "make_two_point",
    "make_empirical",
    "empirical_from_file",
    "pareto_epsilon_for_exponent",
    "pareto_limit_L",
    # amplification kernel
    "GroverParams",
    "AngleSchedule",
    "threshold_ratio",
    "grover_probability",
    "grover_probability_poly",
    "optimal_binary_angles",
    "amplification_ratio",
    "POLY_MAX_ROUNDS",
    # threshold schedules
    "ThresholdReport",
    "ThresholdCurve",
    "expectation_at_threshold",
    "threshold_report",
    "threshold_curve",
    "optimize_threshold",
    "certainty_threshold_cap",
    "min_rounds_exact_opt",
    # raw-cost schedules
    "CollapsedState",
    "identity_phase",
    "threshold_phase",
    "simulate",
    "expectation_from_state",
    "characteristic_function",
    "psi_function",
    "expectation_pair_sum",
    "optimize_angles",
    # bounds
    "BoundReport",
    "kappa",
    "c_th",
    "max_amplification_floor",
    "score_cap_min_rounds",
    "grover_based_min_rounds_exact",
    "quantile_sandwich",
    "simulated_amplification",
    # Max-Cut application
    "BipartiteSpectrum",
    "GraphInstance",
    "bipartite_spectrum",
    "knn_spectrum",
    "brute_force_spectrum",
    "complete_bipartite_instance",
    "read_edge_list",
    "min_rounds_for_ratio",
    # classical baseline
    "CrsResult",
    "crs_blom",
    "crs_expected_min",
    "crs_monte_carlo",
    "BLOM_CONTINUITY_CONSTANT",
    "DEFAULT_EFFORT_FACTOR",
]

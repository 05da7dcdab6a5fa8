from .constants import ConvergenceConstants, theorem2_constants
from .sn import (
    ConcentrationResult,
    DiscreteDistPair,
    concentration_bound,
    concentration_t,
    renyi_inf,
    self_normalized,
    sn_estimate,
    sn_estimates,
    sn_from_samples,
    theorem1_experiment,
)
from .suites import SUITES, run_suite
from .toys import (
    SHIPPED_TOYS,
    WIDTH_GRID,
    ConvergenceTable,
    ExactSolution,
    TinyPomdp,
    coupled_convergence_experiment,
    drift_toy,
    exact_pomdp_q,
    independent_run_gap,
    tiger_toy,
)

__all__ = [
    "SHIPPED_TOYS",
    "SUITES",
    "WIDTH_GRID",
    "ConcentrationResult",
    "ConvergenceConstants",
    "ConvergenceTable",
    "DiscreteDistPair",
    "ExactSolution",
    "TinyPomdp",
    "concentration_bound",
    "concentration_t",
    "coupled_convergence_experiment",
    "drift_toy",
    "exact_pomdp_q",
    "independent_run_gap",
    "renyi_inf",
    "run_suite",
    "self_normalized",
    "sn_estimate",
    "sn_estimates",
    "sn_from_samples",
    "theorem1_experiment",
    "theorem2_constants",
    "tiger_toy",
]

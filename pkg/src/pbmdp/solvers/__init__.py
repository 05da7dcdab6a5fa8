from .pft import PftConfig, PlanResult, SearchTree, SparsePFT, pft_plan, rollout, select_action_ucb, simulate, widened_action_set
from .ssw import NodeBudgetError, SparseSamplingOmega, SswConfig, estimate_q, estimate_v, q_values, ssw_plan

__all__ = [
    "NodeBudgetError",
    "PftConfig",
    "PlanResult",
    "SearchTree",
    "SparsePFT",
    "SparseSamplingOmega",
    "SswConfig",
    "estimate_q",
    "estimate_v",
    "pft_plan",
    "q_values",
    "rollout",
    "select_action_ucb",
    "simulate",
    "ssw_plan",
    "widened_action_set",
]

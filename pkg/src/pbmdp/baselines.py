"""Baseline policies: QMDP, uniform random, and the Light Dark heuristic.

Each policy is also usable as a belief-level rollout policy inside
Sparse-PFT.  Policies follow the estimator convention: construct with
hyperparameters, ``fit(model)``, then ``plan(belief, rng)`` returns an action.
``act`` is the unchecked variant used inside rollouts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import ConfigurationError, check_discount
from .belief import ParticleBelief
from .model import POMDP
from .rng import generator


@dataclass(frozen=True, eq=False)
class QmdpTable:
    """Fully observable ``Q_MDP(s, a)`` over an enumerated state space."""

    q: np.ndarray
    residual: float
    iterations: int


def solve_qmdp(model: POMDP, discount: float | None = None, tol: float = 1e-6, max_iter: int = 100_000) -> QmdpTable:
    """Value iteration on the model's explicit transition matrices.

    Stops once the sup-norm Bellman residual is below ``tol``.
    """
    if not hasattr(model, "transition_model"):
        raise ConfigurationError(f"{model.name} does not enumerate its state space; QMDP is unavailable")
    gamma = check_discount(model.discount if discount is None else discount)
    T, R = model.transition_model()
    S, A = R.shape
    v = np.zeros(S)
    q = R.copy()
    residual = np.inf
    it = 0
    while it < max_iter:
        it += 1
        for j in range(A):
            q[:, j] = R[:, j] + gamma * (T[j] @ v)
        v_new = q.max(axis=1)
        residual = float(np.max(np.abs(v_new - v)))
        v = v_new
        if residual < tol:
            break
    # one more backup so q is consistent with the returned residual
    for j in range(A):
        q[:, j] = R[:, j] + gamma * (T[j] @ v)
    residual = float(np.max(np.abs(q.max(axis=1) - v)))
    return QmdpTable(q, residual, it)


def qmdp_action(belief: ParticleBelief, table: QmdpTable, model: POMDP):
    """``argmax_a sum_i w_i Q_MDP(s_i, a) / sum_i w_i``; ties go to the lowest index."""
    idx = model.state_index(belief.states)
    values = belief.weights @ table.q[idx]
    return model.actions[int(np.argmax(values))]


def random_action(model: POMDP, rng: np.random.Generator):
    return model.sample_action(rng)


def _mean_std(belief: ParticleBelief):
    w = belief.normalized_weights
    pos = belief.states[:, 0].astype(float)
    mean = float(w @ pos)
    var = float(w @ (pos - mean) ** 2)
    return mean, np.sqrt(max(var, 0.0))


def lightdark_heuristic_action(belief: ParticleBelief, localized_std: float = 0.3, light: int = 10, actions=(-10, -1, 0, 1, 10)):
    """Certainty-equivalent Light Dark controller.

    Until the posterior standard deviation drops below ``localized_std`` the
    posterior mean is steered towards the light with the move minimising
    ``|mean + a - light|``.  Once localised, the mean is driven to the origin
    (``a = -10`` from the light) and the controller stops (``a = 0``) when the
    mean rounds to zero.
    """
    mean, std = _mean_std(belief)
    moves = [a for a in actions if a != 0]
    if std >= localized_std:
        return min(moves, key=lambda a: (abs(mean + a - light), actions.index(a)))
    if int(np.rint(mean)) == 0:
        return 0
    return min(moves, key=lambda a: (abs(mean + a), actions.index(a)))


class RandomPolicy(BaseEstimator):
    requires_belief = False

    def fit(self, model: POMDP):
        self.model_ = model
        return self

    def plan(self, belief, rng=None):
        check_is_fitted(self)
        return self.act(belief, generator(rng))

    def act(self, belief, rng):
        return random_action(self.model_, rng)


class QMDPPolicy(BaseEstimator):
    """Acts greedily on belief-weighted fully observable Q-values."""

    requires_belief = True

    def __init__(self, tol=1e-6):
        self.tol = tol

    def fit(self, model: POMDP):
        self.model_ = model
        self.table_ = _cached_table(model, self.tol)
        return self

    def plan(self, belief, rng=None):
        check_is_fitted(self)
        return self.act(belief, rng)

    def act(self, belief, rng):
        return qmdp_action(belief, self.table_, self.model_)


class LightDarkHeuristic(BaseEstimator):
    requires_belief = True

    def __init__(self, localized_std=None):
        self.localized_std = localized_std

    def fit(self, model: POMDP):
        if model.name != "lightdark":
            raise ConfigurationError("the Light Dark heuristic only applies to the lightdark model")
        self.model_ = model
        std = self.localized_std
        self.localized_std_ = float(model.config().get("heuristic_localized_std", 0.3) if std is None else std)
        return self

    def plan(self, belief, rng=None):
        check_is_fitted(self)
        return self.act(belief, rng)

    def act(self, belief, rng):
        return lightdark_heuristic_action(belief, self.localized_std_, self.model_.light, tuple(self.model_.actions))


_TABLES: dict = {}


def _cached_table(model, tol):
    # models are immutable, so structurally equal models share one table
    key = (model.name, repr(sorted(model.config().items())), tol)
    table = _TABLES.get(key)
    if table is None:
        table = solve_qmdp(model, tol=tol)
        if len(_TABLES) >= 8:
            _TABLES.clear()
        _TABLES[key] = table
    return table


POLICIES = {
    "random": RandomPolicy,
    "qmdp": QMDPPolicy,
    "lightdark-heuristic": LightDarkHeuristic,
}


def make_policy(name: str, model: POMDP):
    """Instantiate and fit the policy registered as ``name``."""
    try:
        cls = POLICIES[name]
    except KeyError:
        raise ConfigurationError(f"unknown policy {name!r}; known: {sorted(POLICIES)}") from None
    return cls().fit(model)

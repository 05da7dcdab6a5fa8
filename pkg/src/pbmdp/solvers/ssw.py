"""Sparse Sampling-omega: full-width recursive Q estimation over particle beliefs.

Each ``(belief, action)`` pair draws ``width`` independent particle-belief
successors with :func:`~pbmdp.belief.gen_pf` and recurses on every one of
them, so the work grows as ``(|A| * width) ** depth``.  This solver exists to
check convergence on tiny problems; a hard node budget refuses anything
larger instead of silently truncating the tree.

Random streams are addressed by position.  Action ``j`` of a belief node with
stream ``ss`` uses ``substream(ss, j)``; successor ``i`` of that action uses
``substream(ss_a, i)`` both to seed its ``gen_pf`` call and as the parent
stream of its own subtree.  Results therefore do not depend on evaluation
order, and sibling subtrees may be evaluated in parallel.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .._validation import ConfigurationError, check_belief, check_discount, check_positive_int
from ..belief import ParticleBelief, gen_pf, sample_particle_belief
from ..model import POMDP
from ..rng import as_seed_sequence, generator, substream

DEFAULT_NODE_CAP = 10**7


class NodeBudgetError(ConfigurationError):
    """The requested width and depth would expand more nodes than allowed."""


@dataclass(frozen=True)
class SswConfig:
    width: int
    depth: int
    discount: float | None = None
    max_nodes: int = DEFAULT_NODE_CAP

    def __post_init__(self):
        check_positive_int(self.width, "width")
        check_positive_int(self.depth, "depth")
        if self.discount is not None:
            check_discount(self.discount)


def node_count(n_actions: int, width: int, depth: int) -> int:
    """Leaf-level node count ``(|A| * width) ** depth`` used by the budget check."""
    return (n_actions * width) ** depth


def check_budget(cfg: SswConfig, model: POMDP) -> None:
    if not model.discrete_actions:
        raise ConfigurationError("Sparse Sampling-omega needs a finite action set")
    n = node_count(len(model.actions), cfg.width, cfg.depth)
    if n > cfg.max_nodes:
        raise NodeBudgetError(
            f"width={cfg.width}, depth={cfg.depth} with {len(model.actions)} actions expands "
            f"{n:.3g} nodes, above the cap of {cfg.max_nodes:.3g}"
        )


class _Search:
    def __init__(self, cfg: SswConfig, model: POMDP):
        self.model = model
        self.actions = tuple(model.actions)
        self.width = cfg.width
        self.depth = cfg.depth
        self.gamma = model.discount if cfg.discount is None else cfg.discount

    def value(self, belief, d, ss):
        if d >= self.depth:
            return 0.0
        return max(self.q(belief, a, d, substream(ss, j)) for j, a in enumerate(self.actions))

    def q(self, belief, action, d, ss):
        if d + 1 >= self.depth:
            # every successor value is zero here, so only the last draw's rho
            # matters; the skipped draws would not change the result
            return gen_pf(belief, action, self.model, generator(substream(ss, self.width - 1))).rho
        total = 0.0
        for i in range(self.width):
            child_ss = substream(ss, i)
            t = gen_pf(belief, action, self.model, generator(child_ss))
            total += self.value(t.next_belief, d + 1, child_ss)
        # rho comes from the final draw; it is the same for every draw when
        # rewards are a deterministic function of (s, a)
        return t.rho + self.gamma * total / self.width


def _prepare(belief, d, cfg, model):
    check_belief(belief)
    check_budget(cfg, model)
    if not 0 <= d <= cfg.depth:
        raise ValueError(f"depth index d={d} outside [0, {cfg.depth}]")


def estimate_v(belief: ParticleBelief, d: int, cfg: SswConfig, model: POMDP, rng=None) -> float:
    """``max_a estimate_q(belief, a, d)``, or 0 once ``d >= depth``."""
    _prepare(belief, d, cfg, model)
    return _Search(cfg, model).value(belief, d, as_seed_sequence(rng))


def estimate_q(belief: ParticleBelief, action, d: int, cfg: SswConfig, model: POMDP, rng=None) -> float:
    """``rho + gamma / width * sum_i estimate_v(b'_i, d + 1)`` over ``width`` fresh draws.

    With the same ``rng`` this equals the value :func:`estimate_v` computes
    for ``action`` when given ``substream(rng, index_of(action))``.
    """
    _prepare(belief, d, cfg, model)
    model.check_action(action)
    if d >= cfg.depth:
        return 0.0
    return _Search(cfg, model).q(belief, action, d, as_seed_sequence(rng))


def q_values(belief: ParticleBelief, cfg: SswConfig, model: POMDP, rng=None) -> np.ndarray:
    """Root Q estimates for every action, using the same streams as :func:`estimate_v`."""
    _prepare(belief, 0, cfg, model)
    search = _Search(cfg, model)
    ss = as_seed_sequence(rng)
    return np.array([search.q(belief, a, 0, substream(ss, j)) for j, a in enumerate(search.actions)])


def ssw_plan(belief: ParticleBelief, cfg: SswConfig, model: POMDP, rng=None):
    """Action maximising the root Q estimate; ties go to the lowest index."""
    q = q_values(belief, cfg, model, rng)
    return model.actions[int(np.argmax(q))]


class SparseSamplingOmega(BaseEstimator):
    """Estimator wrapper: ``fit(model)`` then ``plan(belief, rng)``.

    ``n_particles`` resamples the incoming belief to that many equally
    weighted particles before planning; ``None`` plans on it as given.
    """

    requires_belief = True

    def __init__(self, width=4, depth=2, n_particles=None, max_nodes=DEFAULT_NODE_CAP):
        self.width = width
        self.depth = depth
        self.n_particles = n_particles
        self.max_nodes = max_nodes

    def fit(self, model: POMDP):
        self.config_ = SswConfig(self.width, self.depth, max_nodes=self.max_nodes)
        check_budget(self.config_, model)
        if self.n_particles is not None:
            check_positive_int(self.n_particles, "n_particles")
        self.model_ = model
        return self

    def plan(self, belief, rng=None):
        check_is_fitted(self)
        ss = as_seed_sequence(rng)
        if self.n_particles is not None:
            belief = sample_particle_belief(belief, self.n_particles, generator(substream(ss, 0)))
            ss = substream(ss, 1)
        self.q_values_ = q_values(belief, self.config_, self.model_, ss)
        return self.model_.actions[int(np.argmax(self.q_values_))]

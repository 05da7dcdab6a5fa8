"""Sparse-PFT: UCT over the particle belief MDP with a cap on belief children.

Every action node keeps at most ``n_children`` sampled successor beliefs.
While below the cap a visit expands a new successor with ``gen_pf``; once
full, a visit reuses one stored successor chosen uniformly.  The PFT-DPW
variant additionally widens the action set of continuous-action problems
progressively (``max(1, floor(k_a * N ** alpha_a))`` candidates).

Depth is counted as *remaining* depth: the root is simulated with ``depth``
and each recursion decrements it, returning 0 at 0.
"""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .._validation import ConfigurationError, check_belief, check_positive_int
from ..baselines import POLICIES, make_policy
from ..belief import ParticleBelief, gen_pf, is_terminal_belief, sample_particle_belief
from ..model import POMDP
from ..rng import generator


class ActionNode:
    __slots__ = ("action", "n", "q", "children")

    def __init__(self, action):
        self.action = action
        self.n = 0
        self.q = 0.0
        # (BeliefNode, rho) pairs in creation order
        self.children = []


class BeliefNode:
    __slots__ = ("belief", "n", "actions", "terminal")

    def __init__(self, belief: ParticleBelief, terminal: bool):
        self.belief = belief
        self.n = 0
        self.actions: list[ActionNode] = []
        self.terminal = terminal


@dataclass(frozen=True)
class PftConfig:
    """Search hyperparameters.

    Exactly one of ``max_time`` (seconds) and ``n_queries`` sets the budget.
    ``n_particles`` is the particle count of the root belief handed to the
    search; ``n_children`` caps sampled successors per action node.
    """

    n_children: int = 4
    n_particles: int = 100
    c_ucb: float = 1.0
    depth: int = 20
    max_time: float | None = None
    n_queries: int | None = 1000
    rollout: str = "random"
    dpw: bool = False
    k_action: float = 10.0
    alpha_action: float = 0.0

    def __post_init__(self):
        check_positive_int(self.n_children, "n_children")
        check_positive_int(self.n_particles, "n_particles")
        check_positive_int(self.depth, "depth", minimum=0)
        if not self.c_ucb >= 0:
            raise ConfigurationError("c_ucb must be non-negative")
        if (self.max_time is None) == (self.n_queries is None):
            raise ConfigurationError("set exactly one of max_time and n_queries")
        if self.max_time is not None and not self.max_time >= 0:
            raise ConfigurationError("max_time must be non-negative")
        if self.n_queries is not None:
            check_positive_int(self.n_queries, "n_queries", minimum=0)
        if not self.k_action > 0:
            raise ConfigurationError("k_action must be positive")
        if not 0 <= self.alpha_action < 1:
            raise ConfigurationError("alpha_action must lie in [0, 1)")
        if self.rollout not in POLICIES:
            raise ConfigurationError(f"unknown rollout policy {self.rollout!r}; known: {sorted(POLICIES)}")


@dataclass
class PlanResult:
    action: object
    n_simulations: int
    fallback: bool
    tree: "SearchTree" = field(repr=False)


class SearchTree:
    """Root belief node plus the model/config needed to grow it."""

    def __init__(self, belief: ParticleBelief, cfg: PftConfig, model: POMDP, rollout_policy=None):
        if cfg.dpw and not model.discrete_actions:
            # sampling must be possible; fail now rather than mid-search
            try:
                model.sample_action(np.random.default_rng(0))
            except ConfigurationError as exc:
                raise ConfigurationError(f"action widening needs an action sampler: {exc}") from None
        self.cfg = cfg
        self.model = model
        self.gamma = model.discount
        self.rollout_policy = make_policy(cfg.rollout, model) if rollout_policy is None else rollout_policy
        self.root = self.new_node(belief)

    def new_node(self, belief: ParticleBelief) -> BeliefNode:
        node = BeliefNode(belief, is_terminal_belief(belief, self.model))
        if self.model.discrete_actions:
            node.actions = [ActionNode(a) for a in self.model.actions]
        return node

    def iter_nodes(self):
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            for an in node.actions:
                stack.extend(child for child, _ in an.children)

    def check_invariants(self) -> None:
        """Raise ``AssertionError`` if counts, caps or child bookkeeping are inconsistent."""
        cap = self.cfg.n_children
        for node in self.iter_nodes():
            visits = 0
            for an in node.actions:
                assert len(an.children) <= cap, "child cap exceeded"
                assert an.n >= len(an.children), "more children than visits"
                if an.n == 0:
                    assert an.q == 0.0 and not an.children, "unvisited action node was modified"
                visits += an.n
            assert visits == node.n, "belief visit count differs from the sum over its actions"


def widened_action_set(node: BeliefNode, tree: SearchTree, rng) -> list[ActionNode]:
    """Candidate actions of ``node``, admitting at most one new sampled action.

    Finite action sets are returned whole.  For continuous actions the set
    grows while it is smaller than ``max(1, floor(k_a * N(b) ** alpha_a))``
    (with DPW) or than ``floor(k_a)`` (without DPW, filled on first visit).
    """
    model, cfg = tree.model, tree.cfg
    if model.discrete_actions:
        return node.actions
    if cfg.dpw:
        cap = max(1, math.floor(cfg.k_action * node.n**cfg.alpha_action))
        if len(node.actions) < cap:
            node.actions.append(ActionNode(model.sample_action(rng)))
    elif not node.actions:
        node.actions = [ActionNode(model.sample_action(rng)) for _ in range(max(1, int(cfg.k_action)))]
    return node.actions


def select_action_ucb(node: BeliefNode, c_ucb: float, candidates=None) -> ActionNode:
    """UCB choice; an unvisited action wins outright, ties go to the lowest index."""
    candidates = node.actions if candidates is None else candidates
    log_n = math.log(node.n) if node.n > 0 else 0.0
    best, best_score = candidates[0], -math.inf
    for an in candidates:
        if an.n == 0:
            return an
        score = an.q + c_ucb * math.sqrt(log_n / an.n)
        if score > best_score:
            best, best_score = an, score
    return best


def rollout(belief: ParticleBelief, d: int, policy, model: POMDP, rng) -> float:
    """Discounted return of ``policy`` run for ``d`` steps on ``gen_pf`` transitions."""
    total, disc = 0.0, 1.0
    gamma = model.discount
    for _ in range(d):
        if is_terminal_belief(belief, model):
            break
        t = gen_pf(belief, policy.act(belief, rng), model, rng)
        total += disc * t.rho
        disc *= gamma
        belief = t.next_belief
    return total


def simulate(tree: SearchTree, node: BeliefNode, d: int, rng) -> float:
    """One trajectory from ``node`` with ``d`` steps of remaining depth."""
    if d <= 0 or node.terminal:
        return 0.0
    cfg = tree.cfg
    an = select_action_ucb(node, cfg.c_ucb, widened_action_set(node, tree, rng))
    if len(an.children) >= cfg.n_children:
        child, rho = an.children[int(rng.integers(len(an.children)))]
    else:
        t = gen_pf(node.belief, an.action, tree.model, rng)
        child, rho = tree.new_node(t.next_belief), t.rho
        an.children.append((child, rho))
    if node.n == 0:
        q = rho + tree.gamma * rollout(child.belief, d - 1, tree.rollout_policy, tree.model, rng)
    else:
        q = rho + tree.gamma * simulate(tree, child, d - 1, rng)
    node.n += 1
    an.n += 1
    an.q += (q - an.q) / an.n
    return q


def best_root_action(node: BeliefNode):
    """``argmax Q`` over visited root actions (lowest index on ties), or ``None``."""
    best, best_q = None, -math.inf
    for an in node.actions:
        if an.n > 0 and an.q > best_q:
            best, best_q = an, an.q
    return best


def pft_plan(belief: ParticleBelief, cfg: PftConfig, model: POMDP, rng=None, rollout_policy=None) -> PlanResult:
    """Grow a fresh tree from ``belief`` until the budget runs out and pick an action.

    The root is ``n_particles`` equally weighted draws from ``belief``.  The
    wall-clock budget is checked between simulations only.  When not a single
    simulation ran, the first action is returned and ``fallback`` is set.
    """
    rng = generator(rng)
    root_belief = sample_particle_belief(belief, cfg.n_particles, rng)
    tree = SearchTree(root_belief, cfg, model, rollout_policy)
    n = 0
    if cfg.n_queries is not None:
        for n in range(1, cfg.n_queries + 1):
            simulate(tree, tree.root, cfg.depth, rng)
        n = cfg.n_queries
    else:
        deadline = time.perf_counter() + cfg.max_time
        while time.perf_counter() < deadline:
            simulate(tree, tree.root, cfg.depth, rng)
            n += 1
    best = best_root_action(tree.root)
    if best is None:
        if model.discrete_actions:
            action = model.actions[0]
        elif tree.root.actions:
            action = tree.root.actions[0].action
        else:
            action = model.sample_action(rng)
        return PlanResult(action, n, True, tree)
    return PlanResult(best.action, n, False, tree)


class SparsePFT(BaseEstimator):
    """Sparse-PFT planner with the estimator interface.

    ``fit(model)`` validates the configuration against the model and
    prepares the rollout policy; ``plan(belief, rng)`` returns an action and
    keeps the last :class:`PlanResult` in ``last_result_``.

    Parameters
    ----------
    n_children : int
        Belief children per action node (``k_o`` in hyperparameter tables).
    n_particles : int
        Particles in the root belief.
    c_ucb : float
        Exploration constant.
    depth : int
        Search depth.
    max_time, n_queries : float or None, int or None
        Budget; set exactly one.
    rollout : str
        Rollout policy name (``random``, ``qmdp``, ``lightdark-heuristic``).
    dpw : bool
        Progressive widening of continuous action sets.
    k_action, alpha_action : float
        Widening constants.
    """

    requires_belief = True

    def __init__(
        self,
        n_children=4,
        n_particles=100,
        c_ucb=1.0,
        depth=20,
        max_time=None,
        n_queries=1000,
        rollout="random",
        dpw=False,
        k_action=10.0,
        alpha_action=0.0,
    ):
        self.n_children = n_children
        self.n_particles = n_particles
        self.c_ucb = c_ucb
        self.depth = depth
        self.max_time = max_time
        self.n_queries = n_queries
        self.rollout = rollout
        self.dpw = dpw
        self.k_action = k_action
        self.alpha_action = alpha_action

    def fit(self, model: POMDP):
        self.config_ = PftConfig(**self.get_params())
        self.rollout_policy_ = make_policy(self.rollout, model)
        self.model_ = model
        return self

    def plan(self, belief, rng=None):
        check_is_fitted(self)
        check_belief(belief)
        result = pft_plan(belief, self.config_, self.model_, rng, self.rollout_policy_)
        if result.fallback:
            warnings.warn("no simulation completed within the budget; returning the first action", RuntimeWarning)
        self.last_result_ = result
        return result.action

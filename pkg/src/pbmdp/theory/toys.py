"""Tiny tabular POMDPs with exact finite-horizon belief-MDP solutions."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .._validation import ConfigurationError, check_discount
from ..belief import init_belief
from ..model import POMDP
from ..rng import generator, substream
from ..solvers.ssw import SswConfig, q_values

MAX_SIZE = 4
MAX_DEPTH = 3
_ROW_TOL = 1e-12


class TinyPomdp(POMDP):
    """Explicit tables: ``T[a, s, s']``, ``Z[a, s', o]``, ``R[s, a]``, initial belief ``b0``.

    States are single-column integer rows, observations are integers, and
    ``horizon`` doubles as the planning depth.
    """

    def __init__(self, T, Z, R, b0, discount, horizon, name="tiny"):
        T, Z, R, b0 = (np.asarray(x, dtype=float) for x in (T, Z, R, b0))
        n_a, n_s, _ = T.shape
        if T.shape != (n_a, n_s, n_s) or Z.shape[:2] != (n_a, n_s) or R.shape != (n_s, n_a) or b0.shape != (n_s,):
            raise ValueError("inconsistent table shapes")
        for name_, table in (("T", T), ("Z", Z)):
            if np.any(table < 0) or np.any(np.abs(table.sum(axis=-1) - 1) > _ROW_TOL):
                raise ValueError(f"rows of {name_} must be probability vectors")
        if np.any(b0 < 0) or abs(b0.sum() - 1) > _ROW_TOL:
            raise ValueError("b0 must be a probability vector")
        self.T, self.Z, self.R, self.b0 = T, Z, R, b0
        self.discount = check_discount(discount)
        self.horizon = int(horizon)
        self.name = name
        self.actions = tuple(range(n_a))
        self.reward_bound = float(np.abs(R).max()) or 1.0
        self._T_cum = np.cumsum(T, axis=-1)
        self._Z_cum = np.cumsum(Z, axis=-1)

    @property
    def n_states(self):
        return self.T.shape[1]

    @property
    def n_obs(self):
        return self.Z.shape[2]

    def config(self):
        return {"name": self.name, "discount": self.discount, "horizon": self.horizon}

    @staticmethod
    def _draw(cum_rows, rng):
        idx = (cum_rows < rng.random(len(cum_rows))[:, None]).sum(axis=1)
        return np.minimum(idx, cum_rows.shape[1] - 1)

    def initial_states(self, n, rng):
        return rng.choice(self.n_states, size=n, p=self.b0)[:, None]

    def generate(self, states, action, rng):
        self.check_action(action)
        s = states[:, 0]
        sp = self._draw(self._T_cum[action, s], rng)
        o = self._draw(self._Z_cum[action, sp], rng)
        return sp[:, None], o[:, None], self.R[s, action]

    def obs_density(self, action, next_states, observation):
        return self.Z[action, next_states[:, 0], int(np.asarray(observation).reshape(-1)[0])]

    def state_index(self, states):
        return states[:, 0]

    def transition_model(self):
        return [self.T[a] for a in self.actions], self.R.copy()


@dataclass
class ExactSolution:
    """Optimal finite-horizon Q-values of the belief MDP.

    ``table`` maps ``(depth, belief tuple)`` to the Q vector at every belief
    reachable from ``b0``; ``root_q`` is the entry for ``(0, b0)``.
    """

    root_q: np.ndarray
    table: dict = field(repr=False)

    @property
    def optimal_action(self) -> int:
        return int(np.argmax(self.root_q))


def exact_pomdp_q(toy: TinyPomdp, belief=None) -> ExactSolution:
    """Backward induction over every observation branch with exact Bayes updates."""
    if max(toy.n_states, len(toy.actions), toy.n_obs) > MAX_SIZE or toy.horizon > MAX_DEPTH:
        raise ConfigurationError(f"exact backup is limited to {MAX_SIZE} states/actions/observations and depth {MAX_DEPTH}")
    b0 = toy.b0 if belief is None else np.asarray(belief, dtype=float)
    table = {}
    gamma, D = toy.discount, toy.horizon

    def q(b, d):
        key = (d, tuple(b))
        if key in table:
            return table[key]
        out = np.empty(len(toy.actions))
        for a in toy.actions:
            value = float(b @ toy.R[:, a])
            if d + 1 < D:
                pred = b @ toy.T[a]
                joint = pred[:, None] * toy.Z[a]  # P(s', o)
                p_o = joint.sum(axis=0)
                for o in range(toy.n_obs):
                    if p_o[o] > 0:
                        value += gamma * p_o[o] * q(joint[:, o] / p_o[o], d + 1).max()
            out[a] = value
        table[key] = out
        return out

    root = q(b0, 0) if D > 0 else np.zeros(len(toy.actions))
    return ExactSolution(root.copy(), table)


def tiger_toy(discount=0.95) -> TinyPomdp:
    """Two doors, listen (accuracy 3/4) or open; opening resets the tiger uniformly."""
    listen = np.eye(2)
    reset = np.full((2, 2), 0.5)
    T = np.stack([listen, reset, reset])
    hear = np.array([[0.75, 0.25], [0.25, 0.75]])
    Z = np.stack([hear, np.full((2, 2), 0.5), np.full((2, 2), 0.5)])
    # state 0: tiger behind the left door; actions listen, open-left, open-right
    R = np.array([[-1.0, -100.0, 10.0], [-1.0, 10.0, -100.0]])
    return TinyPomdp(T, Z, R, [0.5, 0.5], discount, 2, name="tiger")


def drift_toy(discount=0.9) -> TinyPomdp:
    """Two states that stay or swap with probability 3/4; reward 1 for naming the state."""
    stay = np.array([[0.75, 0.25], [0.25, 0.75]])
    swap = stay[::-1]
    T = np.stack([stay, swap])
    Z = np.stack([stay, stay])
    R = np.array([[1.0, 0.0], [0.0, 1.0]])
    return TinyPomdp(T, Z, R, [0.75, 0.25], discount, 2, name="drift")


SHIPPED_TOYS = {"tiger": tiger_toy, "drift": drift_toy}

WIDTH_GRID = (4, 16, 64, 256)


@dataclass
class ConvergenceTable:
    widths: tuple
    seeds: tuple
    errors: np.ndarray  # (len(widths), len(seeds))
    actions: np.ndarray  # root action chosen by Sparse Sampling-omega
    optimal_action: int
    exact_q: np.ndarray

    @property
    def median_errors(self) -> np.ndarray:
        return np.median(self.errors, axis=1)

    @property
    def non_increasing(self) -> bool:
        m = self.median_errors
        return bool(np.all(np.diff(m) <= 0))

    def agreement(self, width) -> int:
        """Seeds whose root action matches the exact optimum at ``width``."""
        return int(np.sum(self.actions[self.widths.index(width)] == self.optimal_action))


def coupled_convergence_experiment(toy: TinyPomdp, widths=WIDTH_GRID, seeds=range(20)) -> ConvergenceTable:
    """Root error ``max_a |Q_ssw(b0_bar, a) - Q*(b0, a)|`` over a width grid and seeds.

    For width ``C`` the root particle belief holds ``C`` draws from ``b0`` and
    the search uses width ``C`` and the toy's horizon as depth.
    """
    exact = exact_pomdp_q(toy)
    widths, seeds = tuple(int(c) for c in widths), tuple(int(s) for s in seeds)
    errors = np.empty((len(widths), len(seeds)))
    actions = np.empty((len(widths), len(seeds)), dtype=int)
    for i, c in enumerate(widths):
        cfg = SswConfig(width=c, depth=toy.horizon)
        for j, seed in enumerate(seeds):
            ss = np.random.SeedSequence(seed, spawn_key=(c,))
            b = init_belief(toy, c, generator(substream(ss, 0)))
            q = q_values(b, cfg, toy, substream(ss, 1))
            errors[i, j] = np.max(np.abs(q - exact.root_q))
            actions[i, j] = int(np.argmax(q))
    return ConvergenceTable(widths, seeds, errors, actions, exact.optimal_action, exact.root_q)


def independent_run_gap(toy: TinyPomdp, width: int, seed: int) -> tuple:
    """Largest Q gap between two independent searches, and the larger of their exact errors.

    Two runs near the same particle-belief optimum should differ by no more
    than about twice their distance to the exact POMDP values.
    """
    exact = exact_pomdp_q(toy)
    cfg = SswConfig(width=width, depth=toy.horizon)
    qs = []
    for k in range(2):
        ss = np.random.SeedSequence(seed, spawn_key=(width, 1000 + k))
        b = init_belief(toy, width, generator(substream(ss, 0)))
        qs.append(q_values(b, cfg, toy, substream(ss, 1)))
    gap = float(np.max(np.abs(qs[0] - qs[1])))
    err = float(max(np.max(np.abs(q - exact.root_q)) for q in qs))
    return gap, err

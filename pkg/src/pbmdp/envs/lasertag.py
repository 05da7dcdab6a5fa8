"""Laser Tag: find and tag an evading robot using eight noisy range beams.

State rows are ``[agent_cell, opponent_cell, parity, done]`` where cells are
flat indices ``row * cols + col``.  The agent moves N/E/S/W or tags; the
opponent steps to the free neighbouring cell farthest (Manhattan) from the
agent, but only on even time steps.  Beam distances stop at walls,
obstacles and the opponent.  All geometry is precomputed into lookup tables
at construction, so batched transitions are pure array indexing.
"""

from __future__ import annotations

import numpy as np
from scipy import sparse
from scipy.special import ndtr

from .._validation import ConfigurationError
from ..model import POMDP
from . import constants

MOVES = ((-1, 0), (0, 1), (1, 0), (0, -1))  # N, E, S, W
TAG = 4
# N, NE, E, SE, S, SW, W, NW
BEAMS = ((-1, 0), (-1, 1), (0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, -1))


def random_obstacles(rows: int, cols: int, n: int, rng) -> tuple:
    cells = rng.choice(rows * cols, size=n, replace=False)
    return tuple(sorted(int(c) for c in cells))


class LaserTag(POMDP):
    name = "lasertag"
    actions = ("N", "E", "S", "W", "tag")

    def __init__(self, obstacles=None, seed=None, **overrides):
        c = dict(constants.LASERTAG, **overrides)
        self.rows, self.cols = int(c["rows"]), int(c["cols"])
        n_cells = self.rows * self.cols
        if obstacles is None:
            obstacles = random_obstacles(self.rows, self.cols, int(c["n_obstacles"]), np.random.default_rng(seed))
        obstacles = tuple(sorted(int(o) for o in obstacles))
        if any(not 0 <= o < n_cells for o in obstacles) or len(set(obstacles)) != len(obstacles):
            raise ConfigurationError("obstacles must be distinct cells inside the grid")
        if n_cells - len(obstacles) < 2:
            raise ConfigurationError("the grid needs at least two free cells")
        self.obstacles = obstacles
        self.sensor_std = float(c["sensor_std"])
        self.discount = float(c["discount"])
        self.horizon = int(c["horizon"])
        self.step_cost = float(c["step_cost"])
        self.tag_reward = float(c["tag_reward"])
        self.tag_penalty = float(c["tag_penalty"])
        self.reward_bound = max(abs(self.step_cost), abs(self.tag_reward), abs(self.tag_penalty))
        self._c = c
        self.blocked = np.zeros(n_cells, dtype=bool)
        self.blocked[list(obstacles)] = True
        self.free_cells = np.flatnonzero(~self.blocked)
        self._build_tables()

    def config(self):
        out = {k: v for k, v in self._c.items() if k != "notes"}
        return out | {"name": self.name, "obstacles": self.obstacles}

    # -- geometry ------------------------------------------------------------
    def _inside(self, r, c):
        return 0 <= r < self.rows and 0 <= c < self.cols

    def _build_tables(self):
        R, C = self.rows, self.cols
        n = R * C
        self.move_table = np.empty((n, 4), dtype=np.int64)
        for cell in range(n):
            r, c = divmod(cell, C)
            for k, (dr, dc) in enumerate(MOVES):
                rr, cc = r + dr, c + dc
                ok = self._inside(rr, cc) and not self.blocked[rr * C + cc]
                self.move_table[cell, k] = rr * C + cc if ok else cell
        # free run length along each beam ignoring the opponent
        run = np.zeros((n, 8), dtype=np.int64)
        for cell in range(n):
            r, c = divmod(cell, C)
            for k, (dr, dc) in enumerate(BEAMS):
                steps, rr, cc = 0, r + dr, c + dc
                while self._inside(rr, cc) and not self.blocked[rr * C + cc]:
                    steps += 1
                    rr, cc = rr + dr, cc + dc
                run[cell, k] = steps
        # the opponent truncates a beam when it sits on the beam inside the free run
        cells_free = np.zeros((n, n, 8), dtype=np.int64)
        cells_free[:] = run[:, None, :]
        for cell in range(n):
            r, c = divmod(cell, C)
            for k, (dr, dc) in enumerate(BEAMS):
                for j in range(1, run[cell, k] + 1):
                    cells_free[cell, (r + j * dr) * C + (c + j * dc), k] = j - 1
        scale = np.array([np.hypot(dr, dc) for dr, dc in BEAMS])
        self.beam_distance = cells_free * scale
        # deterministic evasion: stay or step to the neighbour farthest from the agent
        self.evade_table = np.empty((n, n), dtype=np.int64)
        rows_, cols_ = np.divmod(np.arange(n), C)
        for opp in range(n):
            cand = [int(self.move_table[opp, k]) for k in range(4)] + [opp]
            cand = list(dict.fromkeys(cand))  # blocked moves collapse onto "stay"
            for agent in range(n):
                best, best_d = opp, -1
                for cell in cand:
                    if cell == agent:
                        continue
                    d = abs(rows_[cell] - rows_[agent]) + abs(cols_[cell] - cols_[agent])
                    if d > best_d:
                        best, best_d = cell, d
                self.evade_table[agent, opp] = best

    # -- generative model ----------------------------------------------------
    def initial_states(self, n, rng):
        free = self.free_cells
        a = rng.integers(len(free), size=n)
        o = rng.integers(len(free) - 1, size=n)
        o = o + (o >= a)
        zeros = np.zeros(n, dtype=np.int64)
        return np.column_stack([free[a], free[o], zeros, zeros])

    def _advance(self, states, action):
        j = self.actions.index(action)
        agent, opp, parity, done = states.T
        live = done == 0
        if j == TAG:
            hit = agent == opp
            rewards = np.where(hit, self.tag_reward, self.tag_penalty)
            new_agent = agent
            new_done = hit.astype(np.int64)
        else:
            rewards = np.full(len(states), self.step_cost)
            new_agent = self.move_table[agent, j]
            new_done = np.zeros(len(states), dtype=np.int64)
        moves = (parity == 0) & (new_done == 0)
        new_opp = np.where(moves, self.evade_table[new_agent, opp], opp)
        nxt = np.column_stack([new_agent, new_opp, 1 - parity, new_done])
        nxt = np.where(live[:, None], nxt, states)
        return nxt, np.where(live, rewards, 0.0)

    def generate(self, states, action, rng):
        self.check_action(action)
        nxt, rewards = self._advance(states, action)
        d = self.beam_distance[nxt[:, 0], nxt[:, 1]]
        obs = np.rint(d + self.sensor_std * rng.standard_normal(d.shape))
        return nxt, obs, rewards

    def beam_mass(self, observation, distances):
        """Probability of each rounded reading under ``N(distance, sensor_std)``."""
        k = np.asarray(observation, dtype=float)
        s = self.sensor_std
        return ndtr((k + 0.5 - distances) / s) - ndtr((k - 0.5 - distances) / s)

    def obs_density(self, action, next_states, observation):
        d = self.beam_distance[next_states[:, 0], next_states[:, 1]]
        return np.prod(self.beam_mass(np.asarray(observation).reshape(1, -1), d), axis=1)

    def is_terminal(self, states):
        return states[:, 3] != 0

    def perturb(self, states, scale, rng):
        """With probability ``scale`` each, nudge the agent and the opponent to a random neighbour."""
        out = states.copy()
        live = out[:, 3] == 0
        for col in (0, 1):
            jump = live & (rng.random(len(out)) < scale)
            dirs = rng.integers(4, size=len(out))
            moved = self.move_table[out[:, col], dirs]
            if col == 1:
                moved = np.where(moved == out[:, 0], out[:, 1], moved)
            out[:, col] = np.where(jump, moved, out[:, col])
        return out

    # -- enumeration for QMDP ------------------------------------------------
    @property
    def n_states(self) -> int:
        n = self.rows * self.cols
        return n * n * 2 + 1

    def state_index(self, states):
        n = self.rows * self.cols
        idx = (states[:, 0] * n + states[:, 1]) * 2 + states[:, 2]
        return np.where(states[:, 3] != 0, self.n_states - 1, idx)

    def transition_model(self):
        n = self.rows * self.cols
        S = self.n_states
        g = np.arange(S - 1)
        agent, rest = np.divmod(g, 2 * n)
        opp, parity = np.divmod(rest, 2)
        states = np.column_stack([agent, opp, parity, np.zeros_like(g)])
        T, R = [], np.zeros((S, len(self.actions)))
        for j, a in enumerate(self.actions):
            nxt, r = self._advance(states, a)
            dest = np.append(self.state_index(nxt), S - 1)
            R[:-1, j] = r
            T.append(sparse.csr_matrix((np.ones(S), (np.arange(S), dest)), shape=(S, S)))
        return T, R


def lasertag_model(obstacles=None, seed=None, **overrides) -> LaserTag:
    """Laser Tag on the default 7 x 11 grid; obstacles drawn from ``seed`` when not given."""
    return LaserTag(obstacles=obstacles, seed=seed, **overrides)

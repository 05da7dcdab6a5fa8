"""Sub Hunt: hunt an enemy submarine heading for one edge of a square grid.

State rows are ``[ax, ay, ex, ey, aware, goal, done]`` with 0-based
coordinates and ``goal`` in ``0..3`` for N, S, E, W.  The agent moves three
cells in a cardinal direction, attacks, or pings.  An unaware enemy takes two
steps forward with probability 1/2 or one diagonal step forward (left or
right) with probability 1/4 each; an aware enemy deterministically picks
whichever of those three moves ends farthest from the agent.  Reaching the
goal edge ends the episode.

Observations are eight-sector bearing readings: the sector containing the
enemy's bearing carries a range-dependent signal, all sectors carry Gaussian
noise.  A ping gives a sharp, range-coded return but alerts the enemy.
"""

from __future__ import annotations

import numpy as np
from scipy import sparse

from ..model import POMDP
from . import constants

# unit vectors of the goal directions N, S, E, W (y grows northwards)
GOALS = np.array([(0, 1), (0, -1), (1, 0), (-1, 0)])
AGENT_MOVES = {"N": (0, 1), "S": (0, -1), "E": (1, 0), "W": (-1, 0)}
_SQRT2PI = np.sqrt(2.0 * np.pi)


def _bearing_sector(dx, dy):
    ang = np.arctan2(dy, dx)
    return np.floor(np.mod(ang, 2 * np.pi) / (np.pi / 4)).astype(np.int64) % 8


class SubHunt(POMDP):
    name = "subhunt"
    actions = ("N", "S", "E", "W", "attack", "ping")

    def __init__(self, **overrides):
        c = dict(constants.SUBHUNT, **overrides)
        self.size = int(c["size"])
        self.speed = int(c["agent_speed"])
        self.start = tuple(int(v) for v in c["agent_start"])
        self.attack_range = float(c["attack_range"])
        self.discount = float(c["discount"])
        self.horizon = int(c["horizon"])
        self.step_cost = float(c["step_cost"])
        self.kill_reward = float(c["kill_reward"])
        self.escape_penalty = float(c["escape_penalty"])
        self.passive_std = float(c["passive_std"])
        self.passive_range = float(c["passive_range"])
        self.ping_std = float(c["ping_std"])
        self.reward_bound = abs(self.step_cost) + max(abs(self.kill_reward), abs(self.escape_penalty))
        self._c = c

    def config(self):
        return {k: v for k, v in self._c.items() if k != "notes"} | {"name": self.name}

    def initial_states(self, n, rng):
        """Enemy starts on the edge opposite its (uniform) goal; agent at ``agent_start``."""
        L = self.size - 1
        goal = rng.integers(4, size=n)
        lateral = rng.integers(self.size, size=n)
        ex = np.select([goal == 2, goal == 3], [0, L], lateral)
        ey = np.select([goal == 0, goal == 1], [0, L], lateral)
        ax = np.full(n, self.start[0])
        ay = np.full(n, self.start[1])
        zeros = np.zeros(n, dtype=np.int64)
        return np.column_stack([ax, ay, ex, ey, zeros, goal, zeros]).astype(np.int64)

    # -- dynamics -------------------------------------------------------------
    def enemy_options(self, ex, ey, goal):
        """The three candidate enemy moves: two forward, diagonal left, diagonal right."""
        fx, fy = GOALS[goal, 0], GOALS[goal, 1]
        lx, ly = -fy, fx
        L = self.size - 1
        opts = [
            (ex + 2 * fx, ey + 2 * fy),
            (ex + fx + lx, ey + fy + ly),
            (ex + fx - lx, ey + fy - ly),
        ]
        return [(np.clip(x, 0, L), np.clip(y, 0, L)) for x, y in opts]

    def _agent_and_reward(self, states, action):
        ax, ay, ex, ey, aware, goal, done = states.T
        L = self.size - 1
        rewards = np.full(len(states), self.step_cost)
        killed = np.zeros(len(states), dtype=bool)
        aware = aware.copy()
        if action in AGENT_MOVES:
            dx, dy = AGENT_MOVES[action]
            ax = np.clip(ax + self.speed * dx, 0, L)
            ay = np.clip(ay + self.speed * dy, 0, L)
        elif action == "attack":
            killed = np.hypot(ax - ex, ay - ey) <= self.attack_range
            rewards = np.where(killed, self.kill_reward, rewards)
            aware = np.where(killed, aware, 1)
        else:
            aware = np.ones_like(aware)
        return ax, ay, aware, killed, rewards

    def _finish(self, states, ax, ay, nx, ny, aware, killed, rewards):
        ex, ey, goal, done = states[:, 2], states[:, 3], states[:, 5], states[:, 6]
        nx = np.where(killed, ex, nx)
        ny = np.where(killed, ey, ny)
        L = self.size - 1
        at_goal = np.select([goal == 0, goal == 1, goal == 2], [ny == L, ny == 0, nx == L], nx == 0)
        escaped = at_goal & ~killed
        rewards = np.where(escaped, rewards + self.escape_penalty, rewards)
        new_done = (killed | escaped).astype(np.int64)
        nxt = np.column_stack([ax, ay, nx, ny, aware, goal, new_done])
        live = done == 0
        return np.where(live[:, None], nxt, states), np.where(live, rewards, 0.0)

    def _aware_choice(self, ax, ay, opts):
        dist = np.stack([(x - ax) ** 2 + (y - ay) ** 2 for x, y in opts])
        return np.argmax(dist, axis=0)

    def generate(self, states, action, rng):
        self.check_action(action)
        n = len(states)
        ax, ay, aware, killed, rewards = self._agent_and_reward(states, action)
        opts = self.enemy_options(states[:, 2], states[:, 3], states[:, 5])
        u = rng.random(n)
        pick = np.where(u < 0.5, 0, np.where(u < 0.75, 1, 2))
        pick = np.where(aware != 0, self._aware_choice(ax, ay, opts), pick)
        nx = np.choose(pick, [o[0] for o in opts])
        ny = np.choose(pick, [o[1] for o in opts])
        nxt, rewards = self._finish(states, ax, ay, nx, ny, aware, killed, rewards)
        mean, std = self._obs_params(action, nxt)
        obs = mean + std[:, None] * rng.standard_normal((n, 8))
        return nxt, obs, rewards

    def _obs_params(self, action, states):
        dx = states[:, 2] - states[:, 0]
        dy = states[:, 3] - states[:, 1]
        d = np.hypot(dx, dy)
        sector = _bearing_sector(dx, dy)
        mean = np.zeros((len(states), 8))
        if action == "ping":
            signal = 1.0 + d / 10.0
            std = np.full(len(states), self.ping_std)
        else:
            signal = np.exp(-d / self.passive_range)
            std = np.full(len(states), self.passive_std)
        mean[np.arange(len(states)), sector] = signal
        return mean, std

    def obs_density(self, action, next_states, observation):
        mean, std = self._obs_params(action, next_states)
        z = (np.asarray(observation, dtype=float).reshape(1, 8) - mean) / std[:, None]
        # product of eight Gaussians, computed in log space
        log_p = -0.5 * np.sum(z * z, axis=1) - 8 * np.log(std * _SQRT2PI)
        return np.exp(log_p)

    def is_terminal(self, states):
        return states[:, 6] != 0

    def perturb(self, states, scale, rng):
        """With probability ``scale`` shift the enemy by one cell in a random cardinal direction."""
        out = states.copy()
        live = out[:, 6] == 0
        jump = live & (rng.random(len(out)) < scale)
        d = GOALS[rng.integers(4, size=len(out))]
        L = self.size - 1
        out[:, 2] = np.where(jump, np.clip(out[:, 2] + d[:, 0], 0, L), out[:, 2])
        out[:, 3] = np.where(jump, np.clip(out[:, 3] + d[:, 1], 0, L), out[:, 3])
        return out

    # -- enumeration for QMDP ------------------------------------------------
    @property
    def n_states(self) -> int:
        return self.size**4 * 2 * 4 + 1

    def state_index(self, states):
        n = self.size
        ax, ay, ex, ey, aware, goal, done = states.T
        idx = ((((ax * n + ay) * n + ex) * n + ey) * 2 + aware) * 4 + goal
        return np.where(done != 0, self.n_states - 1, idx)

    def all_states(self):
        S = self.n_states - 1
        g = np.arange(S)
        rest, goal = np.divmod(g, 4)
        rest, aware = np.divmod(rest, 2)
        n = self.size
        rest, ey = np.divmod(rest, n)
        rest, ex = np.divmod(rest, n)
        ax, ay = np.divmod(rest, n)
        return np.column_stack([ax, ay, ex, ey, aware, goal, np.zeros_like(g)])

    def transition_model(self):
        """Sparse ``T[a]`` over the 1,280,000 live states plus one absorbing terminal."""
        states = self.all_states()
        S = self.n_states
        n = len(states)
        R = np.zeros((S, len(self.actions)))
        T = []
        for j, a in enumerate(self.actions):
            ax, ay, aware, killed, rewards = self._agent_and_reward(states, a)
            opts = self.enemy_options(states[:, 2], states[:, 3], states[:, 5])
            choice = self._aware_choice(ax, ay, opts)
            rows, cols, vals = [], [], []
            expected = np.zeros(n)
            for k, p in enumerate((0.5, 0.25, 0.25)):
                prob = np.where(aware != 0, (choice == k).astype(float), p)
                nxt, r = self._finish(states, ax, ay, opts[k][0], opts[k][1], aware, killed, rewards)
                rows.append(np.arange(n))
                cols.append(self.state_index(nxt))
                vals.append(prob)
                expected += prob * r
            rows.append(np.array([S - 1]))
            cols.append(np.array([S - 1]))
            vals.append(np.array([1.0]))
            T.append(sparse.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(S, S)))
            R[:-1, j] = expected
        return T, R


def subhunt_model(**overrides) -> SubHunt:
    return SubHunt(**overrides)

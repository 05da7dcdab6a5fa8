"""Van der Pol Tag: catch a target drifting along a Van der Pol vector field.

State rows are ``[ax, ay, tx, ty, done]``.  An action is ``(angle, look)``:
the agent moves ``agent_step`` along ``angle`` unless the move crosses one of
the four barrier segments of a plus shape around the origin, and ``look = 1``
buys an accurate reading at an extra cost.  The target advances one RK4 step
of the field plus small Gaussian process noise and ignores the barriers.

Observations are eight beams: the beam whose sector contains the bearing to
the target reads the target distance, the others read ``no_return_range``;
every beam carries Gaussian noise with ``look_std`` or ``normal_std``.
"""

from __future__ import annotations

import numpy as np

from .._validation import ConfigurationError
from ..model import POMDP
from . import constants

_SQRT2PI = np.sqrt(2.0 * np.pi)


def vdp_field(x, y, mu):
    """``(dx/dt, dy/dt) = (mu (x - x^3 / 3 - y), x / mu)``."""
    return mu * (x - x**3 / 3.0 - y), x / mu


def rk4_step(x, y, mu, dt):
    """One classical fourth-order Runge-Kutta step of :func:`vdp_field`."""
    k1x, k1y = vdp_field(x, y, mu)
    k2x, k2y = vdp_field(x + 0.5 * dt * k1x, y + 0.5 * dt * k1y, mu)
    k3x, k3y = vdp_field(x + 0.5 * dt * k2x, y + 0.5 * dt * k2y, mu)
    k4x, k4y = vdp_field(x + dt * k3x, y + dt * k3y, mu)
    return (
        x + dt / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x),
        y + dt / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y),
    )


def _segments_cross(p0, p1, q0, q1):
    # proper or touching intersection of segments p0-p1 and q0-q1 (batched over p)
    def orient(a, b, c):
        return (b[..., 0] - a[..., 0]) * (c[..., 1] - a[..., 1]) - (b[..., 1] - a[..., 1]) * (c[..., 0] - a[..., 0])

    d1 = orient(q0, q1, p0)
    d2 = orient(q0, q1, p1)
    d3 = orient(p0, p1, q0)
    d4 = orient(p0, p1, q1)
    return (d1 * d2 <= 0) & (d3 * d4 <= 0)


def _point_segment_distance(p, a, b):
    ab = b - a
    denom = np.einsum("ij,ij->i", ab, ab)
    t = np.where(denom > 0, np.einsum("ij,ij->i", p - a, ab) / np.where(denom > 0, denom, 1.0), 0.0)
    t = np.clip(t, 0.0, 1.0)
    closest = a + t[:, None] * ab
    return np.hypot(*(p - closest).T)


class VdpTag(POMDP):
    name = "vdptag"
    actions = None

    def __init__(self, mu=None, dt=None, discretize_actions=False, **overrides):
        c = dict(constants.VDPTAG, **overrides)
        if mu is not None:
            c["mu"] = mu
        if dt is not None:
            c["dt"] = dt
        if not (c["mu"] > 0 and c["dt"] > 0):
            raise ConfigurationError("mu and dt must be positive")
        self.mu, self.dt = float(c["mu"]), float(c["dt"])
        self.agent_step = float(c["agent_step"])
        self.capture_radius = float(c["capture_radius"])
        self.target_noise = float(c["target_noise_std"])
        self.look_std, self.normal_std = float(c["look_std"]), float(c["normal_std"])
        self.no_return = float(c["no_return_range"])
        self.init_half_width = float(c["init_half_width"])
        self.discount = float(c["discount"])
        self.horizon = int(c["horizon"])
        self.step_cost, self.look_cost = float(c["step_cost"]), float(c["look_cost"])
        self.capture_reward = float(c["capture_reward"])
        self.reward_bound = max(abs(self.capture_reward), abs(self.step_cost) + abs(self.look_cost))
        lo, hi = float(c["barrier_inner"]), float(c["barrier_outer"])
        self.barriers = np.array([[(lo, 0), (hi, 0)], [(0, lo), (0, hi)], [(-lo, 0), (-hi, 0)], [(0, -lo), (0, -hi)]], dtype=float)
        self.discretize = bool(discretize_actions)
        if self.discretize:
            self.name = "vdptag-discrete"
            n = int(c["n_discrete_angles"])
            angles = 2 * np.pi * np.arange(n) / n
            self.actions = tuple((float(a), look) for look in (0, 1) for a in angles)
        self._c = c

    def config(self):
        out = {k: v for k, v in self._c.items() if k != "notes"}
        return out | {"name": self.name, "mu": self.mu, "dt": self.dt, "discretize_actions": self.discretize}

    def check_action(self, action):
        if self.actions is not None:
            return super().check_action(action)
        try:
            angle, look = action
        except (TypeError, ValueError):
            raise ValueError(f"{action!r} is not an (angle, look) pair") from None
        if not (np.isfinite(angle) and look in (0, 1)):
            raise ValueError(f"{action!r} is not an (angle, look) pair with look in {{0, 1}}")

    def sample_action(self, rng):
        if self.actions is not None:
            return super().sample_action(rng)
        return (float(rng.uniform(0.0, 2 * np.pi)), int(rng.integers(2)))

    def initial_states(self, n, rng):
        h = self.init_half_width
        xy = rng.uniform(-h, h, size=(n, 4))
        return np.column_stack([xy, np.zeros(n)])

    def _move_agent(self, pos, angle):
        step = self.agent_step * np.array([np.cos(angle), np.sin(angle)])
        target = pos + step
        blocked = np.zeros(len(pos), dtype=bool)
        for q0, q1 in self.barriers:
            blocked |= _segments_cross(pos, target, q0[None, :], q1[None, :])
        return np.where(blocked[:, None], pos, target)

    def generate(self, states, action, rng):
        self.check_action(action)
        angle, look = action
        n = len(states)
        live = states[:, 4] == 0
        agent0 = states[:, :2]
        agent = self._move_agent(agent0, angle)
        tx, ty = rk4_step(states[:, 2], states[:, 3], self.mu, self.dt)
        target = np.column_stack([tx, ty]) + self.target_noise * rng.standard_normal((n, 2))
        caught = _point_segment_distance(target, agent0, agent) <= self.capture_radius
        rewards = self.step_cost + (self.look_cost if look else 0.0) + np.where(caught, self.capture_reward, 0.0)
        nxt = np.column_stack([agent, target, caught.astype(float)])
        nxt = np.where(live[:, None], nxt, states)
        rewards = np.where(live, rewards, 0.0)
        mean = self._beam_means(nxt)
        std = self.look_std if look else self.normal_std
        obs = mean + std * rng.standard_normal((n, 8))
        return nxt, obs, rewards

    def _beam_means(self, states):
        dx = states[:, 2] - states[:, 0]
        dy = states[:, 3] - states[:, 1]
        sector = np.floor(np.mod(np.arctan2(dy, dx), 2 * np.pi) / (np.pi / 4)).astype(np.int64) % 8
        mean = np.full((len(states), 8), self.no_return)
        mean[np.arange(len(states)), sector] = np.hypot(dx, dy)
        return mean

    def obs_density(self, action, next_states, observation):
        std = self.look_std if action[1] else self.normal_std
        z = (np.asarray(observation, dtype=float).reshape(1, 8) - self._beam_means(next_states)) / std
        return np.exp(-0.5 * np.sum(z * z, axis=1) - 8 * np.log(std * _SQRT2PI))

    def is_terminal(self, states):
        return states[:, 4] != 0

    def perturb(self, states, scale, rng):
        out = states.copy()
        live = out[:, 4] == 0
        out[live, 2:4] += scale * rng.standard_normal((int(live.sum()), 2))
        return out


def vdp_model(mu: float = 2.0, dt: float = 0.1, discretize_actions: bool = False, **overrides) -> VdpTag:
    return VdpTag(mu=mu, dt=dt, discretize_actions=discretize_actions, **overrides)

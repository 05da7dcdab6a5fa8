import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from pbmdp.belief import (
    DENSITY_FLOOR,
    ParticleBelief,
    effective_sample_size,
    gen_pf,
    init_belief,
    propagate,
    resample,
    weighted_estimate,
)
from pbmdp.model import POMDP
from pbmdp.theory import TinyPomdp

from conftest import LinearGaussian, two_state

weights_st = arrays(np.float64, st.integers(1, 40), elements=st.floats(0.01, 100.0))


class Shift(POMDP):
    """Deterministic ``s' = s + a``; constant density ``0.5``; reward = ``s``."""

    name = "shift"
    actions = (0, 1)

    def initial_states(self, n, rng):
        return np.zeros((n, 1), dtype=np.int64)

    def generate(self, states, action, rng):
        return states + action, rng.random((len(states), 1)), states[:, 0].astype(float)

    def obs_density(self, action, next_states, observation):
        return np.full(len(next_states), 0.5)


class PointMass(Shift):
    def initial_states(self, n, rng):
        return np.full((n, 1), 5)


def test_init_belief_single_particle(rng):
    b = init_belief(Shift(), 1, rng)
    assert len(b) == 1 and b.weights[0] == 1.0


def test_init_belief_point_mass(rng):
    b = init_belief(PointMass(), 100, rng)
    assert np.all(b.states == 5)
    assert np.all(b.weights == 0.01)


def test_init_belief_gaussian_clt():
    m = LinearGaussian(m0=0.0, p0=1.0)
    b = init_belief(m, 10_000, np.random.default_rng(4))
    assert abs(b.states.mean()) < 4 / np.sqrt(10_000)


def test_gen_pf_uniform_likelihood_keeps_weights(rng):
    b = ParticleBelief(np.array([[0], [1]]), np.array([0.5, 0.5]))
    t = gen_pf(b, 1, Shift(), rng)
    np.testing.assert_array_equal(t.next_belief.states[:, 0], [1, 2])
    np.testing.assert_array_equal(t.next_belief.weights, [0.25, 0.25])
    np.testing.assert_array_equal(t.next_belief.normalized_weights, [0.5, 0.5])


def test_gen_pf_rho_uses_prior_weights(rng):
    b = ParticleBelief(np.array([[2], [4]]), np.array([0.25, 0.75]))
    assert gen_pf(b, 0, Shift(), rng).rho == 3.5


def _reference_gen_pf(belief, action, model, rng):
    # literal per-particle loop with the same draw order
    w = belief.weights
    cum = np.cumsum(w)
    u = rng.random() * w.sum()
    src = min(int(np.searchsorted(cum, u, side="right")), len(w) - 1)
    _, obs, _ = model.generate(belief.states[src : src + 1], action, rng)
    nxt, _, rewards = model.generate(belief.states, action, rng)
    new_w = np.empty_like(w)
    for i in range(len(w)):
        z = model.obs_density(action, nxt[i : i + 1], obs[0])[0]
        new_w[i] = w[i] * (0.0 if z < DENSITY_FLOOR else z)
    rho = sum(w[i] * rewards[i] for i in range(len(w))) / w.sum()
    return nxt, new_w, rho


@given(weights_st, st.integers(0, 2**32 - 1))
def test_gen_pf_weight_rule_matches_reference_loop(weights, seed):
    model = LinearGaussian()
    states = np.linspace(-3, 3, len(weights))[:, None]
    b = ParticleBelief(states, weights)
    t = gen_pf(b, 1.0, model, np.random.default_rng(seed))
    nxt, new_w, rho = _reference_gen_pf(b, 1.0, model, np.random.default_rng(seed))
    np.testing.assert_array_equal(t.next_belief.states, nxt)
    if new_w.max() > 0:
        np.testing.assert_array_equal(t.next_belief.weights, new_w)
    assert t.rho == pytest.approx(rho, rel=1e-12, abs=1e-12)


def test_gen_pf_all_zero_resets_uniform(rng):
    class Impossible(Shift):
        def obs_density(self, action, next_states, observation):
            return np.zeros(len(next_states))

    b = ParticleBelief(np.zeros((4, 1), dtype=np.int64), np.full(4, 0.25))
    t = gen_pf(b, 1, Impossible(), rng)
    assert t.next_belief.degenerate
    np.testing.assert_array_equal(t.next_belief.weights, np.full(4, 0.25))


@given(weights_st, st.integers(0, 2**32 - 1))
def test_gen_pf_preserves_count_and_order(weights, seed):
    n = len(weights)
    b = ParticleBelief(np.arange(n)[:, None], weights)
    t = gen_pf(b, 1, Shift(), np.random.default_rng(seed))
    np.testing.assert_array_equal(t.next_belief.states[:, 0], np.arange(n) + 1)


def test_gen_pf_exhaustive_two_particle_distribution():
    # C=2 on a deterministic-free two-state toy: enumerate the outcome space
    # exactly (source particle, observation, two successor states) and compare
    # with the empirical law of the normalized successor belief
    toy = two_state()
    a = 0
    states = np.array([[0], [1]])
    w = np.array([0.25, 0.75])
    F = Fraction
    T = [[F(3, 4), F(1, 4)], [F(1, 4), F(3, 4)]]
    Z = T
    law = {}
    for src, so, o in itertools.product(range(2), range(2), range(2)):
        p_obs = [F(1, 4), F(3, 4)][src] * T[states[src, 0]][so] * Z[so][o]
        for s1, s2 in itertools.product(range(2), range(2)):
            p = p_obs * T[0][s1] * T[1][s2]
            nw = (F(1, 4) * Z[s1][o], F(3, 4) * Z[s2][o])
            key = (s1, s2, nw[0] / (nw[0] + nw[1]))
            law[key] = law.get(key, 0) + p
    rng = np.random.default_rng(99)
    b = ParticleBelief(states, w)
    n = 40_000
    counts = {}
    for _ in range(n):
        t = gen_pf(b, a, toy, rng)
        nb = t.next_belief
        key = (int(nb.states[0, 0]), int(nb.states[1, 0]), F(nb.normalized_weights[0]).limit_denominator(64))
        counts[key] = counts.get(key, 0) + 1
    assert set(counts) <= set(law)
    for key, p in law.items():
        p = float(p)
        assert abs(counts.get(key, 0) / n - p) < 4 * np.sqrt(p * (1 - p) / n) + 1e-9


def test_weighted_estimate_examples():
    s = np.array([[1.0], [3.0]])
    assert weighted_estimate(ParticleBelief(s, np.array([1.0, 1.0])), lambda x: x[:, 0]) == 2.0
    assert weighted_estimate(ParticleBelief(s, np.array([1.0, 3.0])), lambda x: x[:, 0]) == 2.5


@given(weights_st, st.floats(-50, 50))
def test_weighted_estimate_constant(weights, c):
    b = ParticleBelief(np.zeros((len(weights), 1)), weights)
    assert weighted_estimate(b, lambda x: np.full(len(x), c)) == pytest.approx(c, abs=1e-12)


@given(weights_st, st.floats(1e-3, 1e3))
def test_weighted_estimate_scale_invariant(weights, lam):
    s = np.arange(len(weights), dtype=float)[:, None]
    f = lambda x: x[:, 0] ** 2  # noqa: E731
    a = weighted_estimate(ParticleBelief(s, weights), f)
    b = weighted_estimate(ParticleBelief(s, lam * weights), f)
    assert a == pytest.approx(b, rel=1e-10)


def test_ess_examples():
    z = np.zeros((3, 1))
    assert effective_sample_size(ParticleBelief(np.zeros((10, 1)), np.full(10, 0.1))) == pytest.approx(10)
    assert effective_sample_size(ParticleBelief(z, np.array([0.0, 5.0, 0.0]))) == 1.0
    assert effective_sample_size(ParticleBelief(z, np.array([1.0, 1.0, 2.0]))) == pytest.approx(16 / 6)


@given(weights_st)
def test_ess_bounds(weights):
    ess = effective_sample_size(ParticleBelief(np.zeros((len(weights), 1)), weights))
    assert 1 - 1e-9 <= ess <= len(weights) + 1e-9


def test_resample_uniform_preserves_multiset(rng):
    s = np.arange(8)[:, None]
    out = resample(ParticleBelief(s, np.full(8, 1 / 8)), rng)
    assert sorted(out.states[:, 0]) == list(range(8))
    assert np.all(out.weights == 1 / 8)


def test_resample_single_positive_weight(rng):
    out = resample(ParticleBelief(np.arange(5)[:, None], np.array([0, 0, 3.0, 0, 0])), rng)
    assert np.all(out.states[:, 0] == 2)


def test_resample_expected_counts():
    w = np.array([0.1, 0.2, 0.3, 0.4])
    b = ParticleBelief(np.arange(4)[:, None], w)
    rng = np.random.default_rng(5)
    trials = 10_000
    counts = np.zeros(4)
    for _ in range(trials):
        counts += np.bincount(resample(b, rng).states[:, 0], minlength=4)
    mean = counts / trials
    # systematic resampling puts floor or ceil of C w_i copies; its variance is at most 1/4
    assert np.all(np.abs(mean - 4 * w) < 3 * 0.5 / np.sqrt(trials))


def test_sn_estimate_converges_with_particles():
    # after two GenPF steps on a discrete toy, the SN estimate of P(state 0)
    # under the exact Bayes belief improves with C on nearly every trial
    toy = two_state()
    a, o_seq = 0, (0, 1)
    b = toy.b0.copy()
    for o in o_seq:
        pred = b @ toy.T[a]
        b = pred * toy.Z[a][:, o]
        b = b / b.sum()

    def filtered(c, rng):
        s = toy.initial_states(c, rng)
        w = np.full(c, 1.0 / c)
        for o in o_seq:
            s, _, _ = toy.generate(s, a, rng)
            w = w * toy.Z[a][s[:, 0], o]
        return float(w @ (s[:, 0] == 0) / w.sum())

    big, small = [], []
    for seed in range(100):
        rng = np.random.default_rng(seed)
        big.append(abs(filtered(10_000, rng) - b[0]))
        small.append(abs(filtered(100, rng) - b[0]))
    big, small = np.array(big), np.array(small)
    # with errors roughly N(0, s) and N(0, 10 s) the larger sample wins with
    # probability 1 - 2/pi * atan(1/10) ~ 0.937; allow about 2.4 binomial sd
    assert np.sum(big < small) >= 88
    assert 5 < np.median(small) / np.median(big) < 20

import numpy as np
import pytest
from scipy import stats

from pbmdp import ConfigurationError
from pbmdp.baselines import (
    LightDarkHeuristic,
    QmdpTable,
    make_policy,
    qmdp_action,
    random_action,
    solve_qmdp,
    lightdark_heuristic_action,
)
from pbmdp.belief import ParticleBelief
from pbmdp.envs import make_env
from pbmdp.theory import TinyPomdp

from conftest import LinearGaussian, bandit


def swap_chain(gamma=0.5):
    # action 0 stays, action 1 swaps; rewards favour staying in state 0
    T = np.array([np.eye(2), np.eye(2)[::-1]])
    Z = np.ones((2, 2, 1))
    R = np.array([[1.0, 0.0], [0.0, 0.5]])
    return TinyPomdp(T, Z, R, [0.5, 0.5], gamma, 3)


def test_qmdp_single_absorbing_zero_state():
    toy = TinyPomdp(np.ones((2, 1, 1)), np.ones((2, 1, 1)), np.zeros((1, 2)), [1.0], 0.9, 2)
    assert np.all(solve_qmdp(toy).q == 0)


def test_qmdp_closed_form_two_state_chain():
    # V(0) = 1 / (1 - g) = 2; V(1) = 0.5 + g V(0) = 1.5
    table = solve_qmdp(swap_chain(0.5), tol=1e-12)
    np.testing.assert_allclose(table.q, [[2.0, 0.75], [0.75, 1.5]], atol=1e-10)


def test_qmdp_zero_discount_returns_rewards():
    toy = swap_chain(0.0)
    np.testing.assert_array_equal(solve_qmdp(toy).q, toy.R)


@pytest.mark.parametrize("name", ["lightdark", "lasertag"])
def test_qmdp_fixed_point_residual(name):
    model = make_env(name, seed=1)
    table = solve_qmdp(model, tol=1e-6)
    assert table.residual < 1e-6
    T, R = model.transition_model()
    v = table.q.max(axis=1)
    backup = np.column_stack([R[:, j] + model.discount * (T[j] @ v) for j in range(R.shape[1])])
    assert np.max(np.abs(backup - table.q)) < 1e-6


def test_qmdp_needs_enumerable_model():
    with pytest.raises(ConfigurationError):
        solve_qmdp(LinearGaussian())


def test_qmdp_action_point_mass():
    toy = swap_chain()
    table = solve_qmdp(toy)
    assert qmdp_action(ParticleBelief(np.array([[1]]), np.array([1.0])), table, toy) == 1
    assert qmdp_action(ParticleBelief(np.array([[0]]), np.array([1.0])), table, toy) == 0


def test_qmdp_action_ties_go_low():
    toy = swap_chain()
    table = QmdpTable(np.array([[3.0, 3.0], [3.0, 3.0]]), 0.0, 1)
    b = ParticleBelief(np.array([[0], [1]]), np.array([0.5, 0.5]))
    assert qmdp_action(b, table, toy) == 0


def test_qmdp_action_hand_table():
    toy = swap_chain()
    table = QmdpTable(np.array([[1.0, 4.0], [2.0, -1.0]]), 0.0, 1)
    # weights (0.25, 0.75): a0 -> 1.75, a1 -> 0.25
    b = ParticleBelief(np.array([[0], [1]]), np.array([0.25, 0.75]))
    assert qmdp_action(b, table, toy) == 0
    # weights (0.75, 0.25): a0 -> 1.25, a1 -> 2.75
    b = ParticleBelief(np.array([[0], [1]]), np.array([3.0, 1.0]))
    assert qmdp_action(b, table, toy) == 1


def test_qmdp_action_scale_invariant():
    toy = swap_chain()
    table = QmdpTable(np.array([[1.0, 4.0], [2.0, -1.0]]), 0.0, 1)
    s = np.array([[0], [1], [1]])
    for w in ([0.2, 0.5, 0.3], [1.0, 0.1, 0.1], [0.01, 3.0, 2.0]):
        w = np.array(w)
        assert qmdp_action(ParticleBelief(s, w), table, toy) == qmdp_action(ParticleBelief(s, 7.5 * w), table, toy)


def test_random_single_action(rng):
    assert random_action(bandit((1.0,)), rng) == 0


def test_random_uniform_over_five_actions():
    m = make_env("lightdark")
    rng = np.random.default_rng(0)
    n = 100_000
    draws = [random_action(m, rng) for _ in range(n)]
    counts = np.array([draws.count(a) for a in m.actions])
    sigma = np.sqrt(n * 0.2 * 0.8)
    assert np.all(np.abs(counts - n * 0.2) < 3 * sigma)


def test_random_vdp_angles_uniform():
    m = make_env("vdptag")
    rng = np.random.default_rng(1)
    draws = [random_action(m, rng) for _ in range(20_000)]
    angles = np.array([a for a, _ in draws])
    looks = np.array([k for _, k in draws])
    assert angles.min() >= 0 and angles.max() < 2 * np.pi
    hist, _ = np.histogram(angles, bins=20, range=(0, 2 * np.pi))
    assert stats.chisquare(hist).pvalue > 0.01
    assert set(looks) == {0, 1}
    assert abs(looks.mean() - 0.5) < 3 * 0.5 / np.sqrt(len(looks))


def _point_belief(mean, spread=0):
    s = np.array([[mean - spread, 0], [mean + spread, 0]])
    return ParticleBelief(s, np.array([0.5, 0.5]))


def test_heuristic_steers_towards_light():
    assert lightdark_heuristic_action(_point_belief(3, 5)) == 10


def test_heuristic_descends_from_light():
    assert lightdark_heuristic_action(_point_belief(10)) == -10


def test_heuristic_stops_at_origin():
    assert lightdark_heuristic_action(_point_belief(0)) == 0


def test_heuristic_estimator_rejects_other_models():
    with pytest.raises(ConfigurationError):
        LightDarkHeuristic().fit(make_env("subhunt"))


def test_make_policy_unknown():
    with pytest.raises(ConfigurationError):
        make_policy("nope", make_env("lightdark"))

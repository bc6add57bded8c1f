#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
.. currentmodule:: test_evaluation

Tests for the exact oracles: fractional potential, gaps, Markov values and regret
"""

from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from pyfwgames.evaluation import (
    RegretTracker,
    best_response_value,
    estimate_smoothness,
    evaluate_profile,
    exact_policy_gradient,
    expected_cost,
    fractional_potential,
    fw_gap,
    grad_fractional_potential,
    grad_potential,
    joint_policy,
    markov_player_gaps,
    nash_gap,
    occupancy_measure,
    occupancy_ratio,
    poisson_binomial_pmf,
    regret_accumulators,
    value_function,
)
from pyfwgames.evaluation.markov import evaluate_deterministic, induced_mdp
from pyfwgames.games import (
    MarkovGame,
    expected_potential,
    random_congestion_game,
    random_markov_game,
    random_potential_game,
    sample_episode,
)
from pyfwgames.games.noise import NoiseModel
from pyfwgames.strategies import PolytopePoint, uniform
from pyfwgames.utils.exceptions import NoConvergence


@pytest.mark.parametrize(
    "probs, expected",
    [
        ([], [1.0]),
        ([0.5], [0.5, 0.5]),
        ([0.5, 0.5], [0.25, 0.5, 0.25]),
        ([1.0, 0.0], [0.0, 1.0, 0.0]),
        ([0.2, 0.5, 1.0], [0.0, 0.4, 0.5, 0.1]),
    ],
)
def test_poisson_binomial_pmf(probs, expected):
    assert np.allclose(poisson_binomial_pmf(probs), expected)


def test_poisson_binomial_rejects_bad_probability():
    with pytest.raises(ValueError):
        poisson_binomial_pmf([0.2, 1.5])


def _enumerated_potential(game, x):
    cumulative = np.cumsum(game.facility_costs, axis=1)
    total = 0.0
    for used in product([0, 1], repeat=x.shape[0]):
        used = np.array(used)
        for e in range(game.d):
            prob = np.prod(np.where(used == 1, x[:, e], 1.0 - x[:, e]))
            total += prob * cumulative[e, used.sum()]
    return total


def test_fractional_potential_zero_marginals(small_congestion_game):
    """
    Arrange: Two players with all marginals zero.
    Act: Evaluate the fractional potential.
    Assert: Only the load-zero costs remain.
    """
    value = fractional_potential(small_congestion_game, np.zeros((2, 2)))

    assert value == pytest.approx(small_congestion_game.facility_costs[:, 0].sum())


def test_fractional_potential_integral_point(small_congestion_game):
    x = np.array([[1.0, 0.0], [1.0, 0.0]])

    # both players on resource 0: c(0,0) + c(0,1) + c(0,2) + c(1,0)
    assert fractional_potential(small_congestion_game, x) == pytest.approx(0.8)


@pytest.mark.parametrize("n", [1, 3, 6, 10])
def test_fractional_potential_matches_enumeration(n):
    """
    Arrange: Random congestion game with n players, d=3 and random interior marginals.
    Act: Evaluate the fractional potential by convolution and by 2^n enumeration.
    Assert: Both agree within 1e-10.
    """
    rng = np.random.default_rng(n)
    game = random_congestion_game(n, 3, 1, rng)
    x = rng.random((n, 3))

    assert abs(fractional_potential(game, x) - _enumerated_potential(game, x)) <= 1e-10


def test_grad_fractional_potential_finite_differences():
    rng = np.random.default_rng(4)
    game = random_congestion_game(4, 3, 2, rng)
    x = 0.1 + 0.8 * rng.random((4, 3))
    h = 1e-6

    for i in range(4):
        grad = grad_fractional_potential(game, x, i)
        for e in range(3):
            up, down = x.copy(), x.copy()
            up[i, e] += h
            down[i, e] -= h
            fd = (fractional_potential(game, up) - fractional_potential(game, down)) / (2 * h)
            assert fd == pytest.approx(grad[e], rel=1e-5, abs=1e-9)


def test_grad_fractional_potential_single_player():
    game = random_congestion_game(1, 3, 1, np.random.default_rng(0))

    grad = grad_fractional_potential(game, np.array([[0.3, 0.3, 0.4]]), 0)

    assert np.allclose(grad, game.facility_costs[:, 1])


def test_grad_fractional_potential_other_player_committed(small_congestion_game):
    x = np.array([[0.5, 0.5], [1.0, 0.0]])

    grad = grad_fractional_potential(small_congestion_game, x, 0)

    assert np.allclose(grad, [0.5, 0.2])


def test_grad_potential_accepts_polytope_points(small_congestion_game):
    profile = [PolytopePoint(np.eye(2), np.array([0.5, 0.5]))] * 2

    grad = grad_potential(small_congestion_game, profile, 0)

    assert np.allclose(grad, [0.5 * 0.3 + 0.5 * 0.5, 0.5 * 0.2 + 0.5 * 0.9])


def test_grad_potential_normal_form(coordination_game):
    grad = grad_potential(coordination_game, [uniform(2), uniform(2)], 0)

    assert np.allclose(grad, [0.35, 0.5])
    assert expected_cost(coordination_game, [uniform(2), uniform(2)], 0) == pytest.approx(
        0.425
    )


def test_grad_potential_is_linear_in_own_strategy(potential_game_3x3, rng):
    """
    Arrange: Random 3x3 potential game and random mixed profile.
    Act: Compare the expected cost with the inner product of strategy and gradient.
    Assert: c_i(pi) = <pi_i, grad_i> and the gradient ignores pi_i.
    """
    profile = [rng.dirichlet(np.ones(3)) for _ in range(2)]
    moved = [rng.dirichlet(np.ones(3)), profile[1]]

    grad = grad_potential(potential_game_3x3, profile, 0)
    full = np.einsum("ab,a,b->", potential_game_3x3.costs[0], *profile)

    assert profile[0] @ grad == pytest.approx(full)
    assert np.allclose(grad_potential(potential_game_3x3, moved, 0), grad)


@settings(max_examples=25, deadline=None)
@given(
    seed=st.integers(0, 2**32 - 1),
    counts=st.lists(st.integers(2, 4), min_size=2, max_size=3),
    player=st.integers(0, 2),
)
def test_grad_potential_normal_form_finite_differences(seed, counts, player):
    """
    Arrange: Random potential game and random interior profile.
    Act: Central differences of the expected potential along each own action.
    Assert: They match grad_potential up to one additive constant, the part of
        player i's cost that does not depend on its own action.
    """
    rng = np.random.default_rng(seed)
    game = random_potential_game(len(counts), counts, rng)
    i = player % len(counts)
    profile = [rng.dirichlet(np.ones(m)) for m in counts]
    h = 1e-6

    fd = np.empty(counts[i])
    for a in range(counts[i]):
        up, down = list(profile), list(profile)
        up[i] = profile[i] + h * np.eye(counts[i])[a]
        down[i] = profile[i] - h * np.eye(counts[i])[a]
        fd[a] = (expected_potential(game, up) - expected_potential(game, down)) / (2 * h)
    shift = fd - grad_potential(game, profile, i)

    assert np.ptp(shift) == pytest.approx(0.0, abs=1e-7)


@pytest.mark.parametrize(
    "profile, gap, fw",
    [
        ([[1.0, 0.0], [1.0, 0.0]], 0.0, 0.0),
        ([[0.0, 1.0], [0.0, 1.0]], 0.0, 0.0),
        ([[0.5, 0.5], [0.5, 0.5]], 0.075, 0.15),
        ([[1.0, 0.0], [0.0, 1.0]], 0.5, 0.7),
    ],
)
def test_gaps_on_coordination_game(coordination_game, profile, gap, fw):
    profile = [np.array(p) for p in profile]

    assert nash_gap(coordination_game, profile)[0] == pytest.approx(gap)
    assert fw_gap(coordination_game, profile) == pytest.approx(fw)


def test_nash_gap_bounded_by_fw_gap(potential_game_3x3, rng):
    for _ in range(20):
        profile = [rng.dirichlet(np.ones(3)) for _ in range(2)]
        metrics = evaluate_profile(potential_game_3x3, profile)
        assert metrics.nash_gap <= metrics.fw_gap + 1e-12
        assert metrics.mismatch == 1.0


def test_congestion_gaps_on_points(small_congestion_game):
    """
    Arrange: Both players on resource 0 as point masses.
    Act: Evaluate the profile.
    Assert: Each pays c(0, 2) = 0.5 and could pay c(1, 1) = 0.2, a gap of 0.3.
    """
    profile = [PolytopePoint.point_mass(np.array([1.0, 0.0]))] * 2

    metrics = evaluate_profile(small_congestion_game, profile)

    assert np.allclose(metrics.costs, [0.5, 0.5])
    assert metrics.nash_gap == pytest.approx(0.3)
    assert metrics.fw_gap == pytest.approx(0.6)


def test_estimate_smoothness(coordination_game):
    smoothness = estimate_smoothness(coordination_game, np.random.default_rng(0), pairs=20)

    assert 0.0 < smoothness < np.inf


def test_value_function_single_state(one_state_markov_game):
    """
    Arrange: One state, cost 0.4 per step, stopping probability 0.25.
    Act: Solve for the values.
    Assert: V = c / kappa = 1.6 and the occupancy is 1 / kappa = 4.
    """
    policies = [uniform(2, states=1)]

    values = value_function(one_state_markov_game, policies)
    occupancy = occupancy_measure(one_state_markov_game, policies)

    assert values.at_init[0] == pytest.approx(1.6)
    assert occupancy.d[0] == pytest.approx(4.0)
    assert occupancy.expected_length == pytest.approx(4.0)
    assert occupancy.mismatch == pytest.approx(4.0)


def test_best_response_single_state(one_state_markov_game):
    br = best_response_value(one_state_markov_game, [uniform(2, states=1)], 0)

    assert br.value == pytest.approx(1.6)
    assert br.policy.tolist() == [[1.0, 0.0]]


def test_best_response_matches_enumeration(two_state_markov_game, rng):
    """
    Arrange: Random policies in a 2-state, 2-player game.
    Act: Compute the best response by value iteration.
    Assert: Its value equals the cheapest deterministic stationary policy.
    """
    policies = [rng.dirichlet(np.ones(2), size=2) for _ in range(2)]
    costs, kernel = induced_mdp(two_state_markov_game, policies, 1)
    init = two_state_markov_game.init_dist
    enumerated = min(
        evaluate_deterministic(costs, kernel, actions) @ init
        for actions in product(range(2), repeat=2)
    )

    br = best_response_value(two_state_markov_game, policies, 1)

    assert br.value == pytest.approx(enumerated, abs=1e-9)


def test_best_response_sweep_cap(two_state_markov_game):
    policies = [uniform(2, states=2)] * 2

    with pytest.raises(NoConvergence):
        best_response_value(two_state_markov_game, policies, 0, tol=0.0, max_sweeps=1)


@pytest.mark.parametrize(
    "S, counts, seed", [(2, [2, 2], 1), (3, [2, 2, 3], 2), (4, [3, 2], 3)]
)
def test_value_function_matches_value_iteration(S, counts, seed):
    """
    Arrange: Random Markov game and random policies.
    Act: Iterate the policy's Bellman operator to a fixed point.
    Assert: The linear-solve values agree within 1e-8.
    """
    rng = np.random.default_rng(seed)
    game = random_markov_game(S, counts, rng, kappa=0.5)
    policies = [rng.dirichlet(np.ones(m), size=S) for m in counts]
    pi = joint_policy(game, policies).reshape(game.S, -1)
    kernel = np.einsum("sj,sjt->st", pi, game.continuation.reshape(game.S, -1, game.S))
    rewards = np.einsum("sj,nsj->ns", pi, game.costs.reshape(game.n, game.S, -1))
    V = np.zeros((game.n, game.S))
    for _ in range(10_000):
        updated = rewards + V @ kernel.T
        if np.max(np.abs(updated - V)) < 1e-14:
            break
        V = updated

    assert np.allclose(value_function(game, policies).V, V, atol=1e-8)


def test_exact_policy_gradient_finite_differences(two_state_markov_game, rng):
    """
    Arrange: Random policy tables.
    Act: Perturb each entry of player 0's table by +-h and resolve the values.
    Assert: Central differences match d(s) * Q(s, a) within relative 1e-5.
    """
    game = two_state_markov_game
    policies = [rng.dirichlet(np.ones(2), size=2) for _ in range(2)]
    grad = exact_policy_gradient(game, policies, 0)
    h = 1e-6

    for s, a in product(range(2), range(2)):
        up, down = policies[0].copy(), policies[0].copy()
        up[s, a] += h
        down[s, a] -= h
        v_up = value_function(game, [up, policies[1]]).at_init[0]
        v_down = value_function(game, [down, policies[1]]).at_init[0]
        assert (v_up - v_down) / (2 * h) == pytest.approx(grad[s, a], rel=1e-5)


def test_markov_gap_inequality(two_state_markov_game, rng):
    for _ in range(5):
        policies = [rng.dirichlet(np.ones(2), size=2) for _ in range(2)]
        metrics = evaluate_profile(two_state_markov_game, policies)
        assert metrics.mismatch >= 1.0
        assert metrics.nash_gap <= metrics.mismatch * metrics.fw_gap + 1e-12


def test_occupancy_ratio_reads_zero_over_zero_as_zero():
    ratio, uncovered = occupancy_ratio(np.array([2.0, 0.0]), np.array([1.0, 0.0]))

    assert ratio == pytest.approx(2.0)
    assert not uncovered


def test_occupancy_ratio_flags_unvisited_states():
    ratio, uncovered = occupancy_ratio(np.array([1.0, 0.5]), np.array([2.0, 0.0]))

    assert ratio == pytest.approx(0.5)
    assert uncovered


@pytest.fixture
def detour_game():
    """One player, zero costs; action 0 in state 0 leads to state 1, action 1 stays."""
    transitions = np.zeros((2, 2, 2))
    transitions[0, 0, 1] = 1.0
    transitions[0, 1, 0] = 1.0
    transitions[1, :, 1] = 1.0
    return MarkovGame(
        costs=np.zeros((1, 2, 2)),
        transitions=transitions,
        stop_prob=0.5,
        init_dist=np.array([1.0, 0.0]),
        noise=NoiseModel("deterministic"),
    )


def test_gap_inequality_with_unvisited_state(detour_game):
    """
    Arrange: A policy that never leaves state 0 while the greedy best response does.
    Act: Evaluate the profile.
    Assert: Both gaps are zero, the mismatch stays finite and the gap inequality holds.
    """
    policies = [np.array([[0.0, 1.0], [0.5, 0.5]])]

    metrics = evaluate_profile(detour_game, policies)

    assert metrics.nash_gap == 0.0
    assert metrics.fw_gap == 0.0
    assert np.isfinite(metrics.mismatch)
    assert metrics.nash_gap <= metrics.mismatch * metrics.fw_gap + 1e-12


def test_unvisited_state_mismatch_is_infinite_without_fw_gap(detour_game):
    policies = [np.array([[0.0, 1.0], [0.5, 0.5]])]

    _, _, mismatch = markov_player_gaps(detour_game, policies)

    assert mismatch == np.inf


@pytest.mark.slow
@pytest.mark.parametrize(
    "S, counts, seed", [(2, [2, 2], 1), (3, [2, 2, 3], 2), (4, [3, 2], 3)]
)
def test_value_function_matches_rollouts(S, counts, seed):
    """
    Arrange: Random Markov game and random policies.
    Act: Average 10^5 rolled-out episode costs per player.
    Assert: Every player's mean is within 4 standard errors of V_i(mu0).
    """
    rng = np.random.default_rng(seed)
    game = random_markov_game(S, counts, rng, kappa=0.5)
    policies = [rng.dirichlet(np.ones(m), size=S) for m in counts]
    players = [np.random.default_rng([seed, i]) for i in range(len(counts))]
    env = np.random.default_rng([seed, 2 ** 31 - 1])
    episodes = 100_000

    totals = np.empty((episodes, len(counts)))
    for k in range(episodes):
        steps = sample_episode(game, policies, players, env)
        totals[k] = np.sum([step.costs for step in steps], axis=0)

    se = totals.std(axis=0) / np.sqrt(episodes)
    exact = value_function(game, policies).at_init
    assert np.all(np.abs(totals.mean(axis=0) - exact) <= 4 * se)


def test_regret_single_iterate(coordination_game):
    nash, individual = regret_accumulators(coordination_game, [[uniform(2), uniform(2)]])

    assert nash.tolist() == pytest.approx([0.075])
    assert individual[:, 0] == pytest.approx([0.075, 0.075])


def test_regret_at_equilibrium_is_zero(coordination_game):
    pure = [np.array([1.0, 0.0]), np.array([1.0, 0.0])]

    nash, individual = regret_accumulators(coordination_game, [pure] * 4)

    assert np.all(nash == 0.0)
    assert np.all(individual == 0.0)


def test_regret_weights(coordination_game):
    """
    Arrange: One uniform profile standing for two iterations, then an equilibrium.
    Act: Accumulate.
    Assert: Nash regret is 0.15 throughout since the equilibrium adds nothing.
    """
    profiles = [[uniform(2), uniform(2)], [np.array([1.0, 0.0])] * 2]

    nash, _ = regret_accumulators(coordination_game, profiles, weights=[2.0, 1.0])

    assert nash == pytest.approx([0.15, 0.15])


def test_regret_weights_must_match(coordination_game):
    with pytest.raises(ValueError):
        regret_accumulators(coordination_game, [[uniform(2), uniform(2)]], weights=[1, 2])


def test_individual_regret_hindsight(coordination_game):
    """
    Arrange: Opponent alternates between its two actions while player 0 stays uniform.
    Act: Accumulate both iterates.
    Assert: Player 0 pays 0.85 while either fixed action would have paid 0.7 or 1.0.
    """
    e0, e1 = np.array([1.0, 0.0]), np.array([0.0, 1.0])

    _, individual = regret_accumulators(
        coordination_game, [[uniform(2), e0], [uniform(2), e1]]
    )

    assert individual[0, -1] == pytest.approx(0.85 - 0.7)


def test_markov_regret_tracker(one_state_markov_game):
    tracker = RegretTracker(one_state_markov_game)
    assert tracker.individual_regret.tolist() == [0.0]

    tracker.update([uniform(2, states=1)])

    assert tracker.nash_regret == pytest.approx(0.0)
    assert tracker.individual_regret[0] == pytest.approx(0.0)


def test_markov_regret_skips_large_policy_spaces():
    game = random_markov_game(14, [2], np.random.default_rng(0))
    tracker = RegretTracker(game)

    tracker.update([uniform(2, states=14)])

    assert np.isnan(tracker.individual_regret[0])

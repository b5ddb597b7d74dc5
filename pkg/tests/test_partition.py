# =================================================================
# Copyright (C) 2024-2024 pcrp-cluster contributors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#    http://www.apache.org/licenses/LICENSE-2.0
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# =================================================================
import itertools
import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from pytest import approx

from pcrpcluster.errors import ParameterError
from pcrpcluster.partition import (G_FUNCTIONS, UNASSIGNED, PartitionState, ProcessKind, ProcessParams,
                                   canonical_labels, enumerate_partitions, is_canonical, log_seat_weights,
                                   log_stationary_prior, partition_log_probability, sample_prior_partition,
                                   seat_weights)

sizes_strategy = st.lists(st.integers(min_value=1, max_value=500), min_size=0, max_size=12)
alpha_strategy = st.floats(min_value=1e-3, max_value=1e3, allow_nan=False, allow_infinity=False)
power_strategy = st.floats(min_value=1.0, max_value=10.0, allow_nan=False, allow_infinity=False)


def _state(sizes) -> PartitionState:
    labels = np.repeat(np.arange(len(sizes)), sizes)
    return PartitionState.from_labels(labels)


def test_seat_weights_two_singletons_crp():
    state = PartitionState.from_labels([0, 1, 2]).hold_out(2)
    weights = seat_weights(state, 2, ProcessParams.crp(1.0))
    assert weights == approx([1 / 3, 1 / 3, 1 / 3], abs=1e-15)


def test_seat_weights_all_in_one_pcrp_new_table():
    n, alpha, power = 7, 0.7, 2.5
    weights = seat_weights(_state([n]), None, ProcessParams.pcrp(alpha, power))
    assert weights[-1] == approx(alpha / (n ** power + alpha), rel=1e-12)


def test_seat_weights_pcrp_hand_evaluated():
    weights = seat_weights(_state([4, 1]), None, ProcessParams.pcrp(1.0, 2.0))
    assert weights == approx([16 / 18, 1 / 18, 1 / 18], rel=1e-12)


def test_seat_weights_pcrp_power_one_equals_crp_example():
    state = _state([2, 3])
    assert np.array_equal(seat_weights(state, None, ProcessParams.pcrp(0.5, 1.0)),
                          seat_weights(state, None, ProcessParams.crp(0.5)))


@settings(max_examples=1000)
@given(sizes_strategy, alpha_strategy)
def test_pcrp_power_one_reduces_to_crp(sizes, alpha):
    state = _state(sizes)
    crp = seat_weights(state, None, ProcessParams.crp(alpha))
    pcrp = seat_weights(state, None, ProcessParams.pcrp(alpha, 1.0))
    assert np.array_equal(crp, pcrp)


@given(sizes_strategy, alpha_strategy, power_strategy)
def test_seat_weights_are_normalized(sizes, alpha, power):
    weights = seat_weights(_state(sizes), None, ProcessParams.pcrp(alpha, power))
    assert weights.size == len(sizes) + 1
    assert np.all(weights >= 0.0)
    assert weights.sum() == approx(1.0, abs=1e-12)


@given(st.lists(st.integers(min_value=1, max_value=50), min_size=1, max_size=8),
       st.integers(min_value=2, max_value=20), alpha_strategy, power_strategy)
def test_occupied_table_conditional_is_scale_invariant(sizes, factor, alpha, power):
    params = ProcessParams.pcrp(alpha, power)
    occupied = np.exp(log_seat_weights(np.asarray(sizes), params)[:-1])
    scaled = np.exp(log_seat_weights(factor * np.asarray(sizes), params)[:-1])
    assert scaled / scaled.sum() == approx(occupied / occupied.sum(), rel=1e-10, abs=1e-300)


@given(st.integers(min_value=2, max_value=100), st.integers(min_value=1, max_value=99), alpha_strategy,
       st.floats(min_value=1.01, max_value=10.0))
def test_pcrp_amplifies_rich_get_richer(larger, smaller, alpha, power):
    if smaller >= larger:
        smaller = larger - 1
    sizes = np.array([larger, smaller])
    crp = log_seat_weights(sizes, ProcessParams.crp(alpha))
    pcrp = log_seat_weights(sizes, ProcessParams.pcrp(alpha, power))
    assert pcrp[0] - pcrp[1] > crp[0] - crp[1]


@given(alpha_strategy, st.floats(min_value=1.01, max_value=10.0))
def test_pcrp_three_customer_inequality(alpha, power):
    params = ProcessParams.pcrp(alpha, power)
    assert seat_weights(_state([2]), None, params)[-1] < seat_weights(_state([1, 1]), None, params)[-1]


def test_seat_weights_reject_empty_cluster():
    with pytest.raises(ParameterError):
        log_seat_weights(np.array([2, 0, 1]), ProcessParams.crp(1.0))


def test_seat_weights_reject_assigned_item():
    state = PartitionState.from_labels([0, 0, 1])
    with pytest.raises(ParameterError):
        seat_weights(state, 1, ProcessParams.crp(1.0))


def test_seat_weights_large_power_does_not_overflow():
    weights = seat_weights(_state([3000, 2]), None, ProcessParams.pcrp(1.0, 10.0))
    assert np.all(np.isfinite(weights))
    assert weights[0] == approx(1.0)


def test_new_table_probability_of_ten_seated_items():
    crp = ProcessParams.crp(1.0)
    pcrp = ProcessParams.pcrp(1.0, 2.0)
    singletons = _state([1] * 10)
    together = _state([10])
    # alpha / (N + alpha) against alpha / (N^r + alpha)
    assert seat_weights(singletons, None, pcrp)[-1] == approx(1 / 11, rel=1e-12)
    assert seat_weights(together, None, pcrp)[-1] == approx(1 / 101, rel=1e-12)
    assert seat_weights(singletons, None, crp)[-1] == approx(1 / 11, rel=1e-12)
    assert seat_weights(together, None, crp)[-1] == approx(1 / 11, rel=1e-12)
    assert seat_weights(_state([2]), None, pcrp)[-1] == approx(1 / 5, rel=1e-12)
    assert seat_weights(_state([2]), None, crp)[-1] == approx(1 / 3, rel=1e-12)


@pytest.mark.parametrize('alpha, power', [
    (0.0, 1.0),
    (-1.0, 1.0),
    (math.inf, 1.0),
    (math.nan, 1.5),
    (1.0, 0.5),
    (1.0, math.inf),
])
def test_process_params_rejects_invalid_values(alpha, power):
    with pytest.raises(ParameterError):
        ProcessParams(alpha=alpha, power=power, kind=ProcessKind.PCRP)


def test_process_params_crp_rejects_power():
    with pytest.raises(ParameterError):
        ProcessParams(alpha=1.0, power=2.0, kind='crp')


def test_process_params_kind_from_string():
    assert ProcessParams(alpha=1.0, power=2.0, kind='pcrp').kind is ProcessKind.PCRP
    with pytest.raises(ParameterError):
        ProcessParams(alpha=1.0, kind='pitman-yor')


def test_gcrp_validates_g():
    with pytest.raises(ParameterError):
        ProcessParams.gcrp(1.0, lambda x: np.asarray(x, dtype=float) + 1.0)
    with pytest.raises(ParameterError):
        ProcessParams.gcrp(1.0, lambda x: -np.asarray(x, dtype=float))
    with pytest.raises(ParameterError):
        ProcessParams(alpha=1.0, kind=ProcessKind.GCRP)
    with pytest.raises(ParameterError):
        ProcessParams(alpha=1.0, g=G_FUNCTIONS['square'])


def test_gcrp_warns_when_g_does_not_shrink():
    with pytest.warns(UserWarning):
        ProcessParams.gcrp(1.0, lambda x: np.sqrt(np.asarray(x, dtype=float)))


@pytest.mark.parametrize('name', sorted(G_FUNCTIONS))
def test_every_named_g_builds_a_gcrp(name):
    with warnings.catch_warnings():
        warnings.simplefilter('error')
        params = ProcessParams.gcrp(1.0, G_FUNCTIONS[name])
    log_weights = log_seat_weights(np.array([1, 50, 800]), params)
    assert np.all(np.isfinite(log_weights))
    assert np.exp(log_weights).sum() == approx(1.0)
    assert sample_prior_partition(40, params, 3).n_total == 40


def test_expm1_log_weights_stay_finite_where_g_overflows():
    g = G_FUNCTIONS['expm1']
    x = np.array([0.5, 3.0, 20.0])
    assert g.log_g(x) == approx(np.log(np.expm1(x)), rel=1e-12)
    assert g.log_g(np.array([1000.0]))[0] == approx(1000.0)
    params = ProcessParams.gcrp(1.0, g)
    assert log_stationary_prior(np.array([900, 3]), params) == approx(
        sum(math.log(math.expm1(m)) for m in (1, 2)) + sum(m + math.log(-math.expm1(-m)) for m in range(1, 900)),
        rel=1e-12)


def test_gcrp_with_square_matches_pcrp_power_two():
    with warnings.catch_warnings():
        warnings.simplefilter('error')
        gcrp = ProcessParams.gcrp(0.8, G_FUNCTIONS['square'])
    pcrp = ProcessParams.pcrp(0.8, 2.0)
    sizes = np.array([5, 3, 1])
    assert log_seat_weights(sizes, gcrp) == approx(log_seat_weights(sizes, pcrp), rel=1e-12)
    assert log_stationary_prior(sizes, gcrp) == approx(log_stationary_prior(sizes, pcrp), rel=1e-12)


def test_sample_prior_partition_single_item():
    state = sample_prior_partition(1, ProcessParams.pcrp(3.0, 2.0), 11)
    assert state.assignments.tolist() == [0]
    assert state.sizes.tolist() == [1]


def test_sample_prior_partition_is_reproducible():
    params = ProcessParams.pcrp(1.0, 1.3)
    first = sample_prior_partition(200, params, 5)
    second = sample_prior_partition(200, params, 5)
    assert np.array_equal(first.assignments, second.assignments)
    assert first.n_total == 200
    assert np.all(first.sizes >= 1)


def test_sample_prior_partition_large_power_does_not_overflow():
    # a size-2 table outweighs every singleton by 2^120, so it takes all later items
    state = sample_prior_partition(500, ProcessParams.pcrp(1.0, 120.0), 1)
    assert state.n_total == 500
    assert state.sizes.max() == 500 - (state.num_clusters - 1)
    assert state.num_clusters < 10


@pytest.mark.parametrize('n, seeds', [
    (100, 500),
    (1000, 500),
    pytest.param(10000, 500, marks=pytest.mark.slow),
])
def test_sample_prior_partition_crp_growth_follows_harmonic_sum(n, seeds):
    alpha = 1.0
    expected = sum(alpha / (alpha + i) for i in range(n))
    mean_k = np.mean([sample_prior_partition(n, ProcessParams.crp(alpha), seed).num_clusters
                      for seed in range(seeds)])
    assert mean_k == approx(expected, rel=0.1)


def test_sample_prior_partition_all_singletons_frequency():
    params = ProcessParams.pcrp(1.0, 3.0)
    draws = 20000
    singletons = sum(sample_prior_partition(3, params, seed).num_clusters == 3 for seed in range(draws))
    expected = 1.0 * 1 / 2 * 1 / 3
    assert singletons / draws == approx(expected, abs=4 * math.sqrt(expected * (1 - expected) / draws))


def test_partition_log_probability_single_item():
    assert partition_log_probability([0], ProcessParams.pcrp(2.0, 2.0)) == 0.0


def test_partition_log_probability_hand_evaluated():
    crp = ProcessParams.crp(1.0)
    pcrp = ProcessParams.pcrp(1.0, 2.0)
    assert math.exp(partition_log_probability([0, 0, 0], crp)) == approx(1 / 2 * 2 / 3)
    assert math.exp(partition_log_probability([0, 0, 0], pcrp)) == approx(1 / 2 * 4 / 5)
    assert math.exp(partition_log_probability([0, 0, 1], pcrp)) == approx(1 / 2 * 1 / 5)
    assert partition_log_probability([0, 0, 1], crp) == approx(partition_log_probability([0, 1, 0], crp))


def test_partition_log_probability_rejects_non_canonical():
    with pytest.raises(ParameterError):
        partition_log_probability([1, 0], ProcessParams.crp(1.0))


def _orderings(partition):
    """
    Distinct canonical seating sequences of the same partition under every order of the items
    """
    return {tuple(canonical_labels([partition[i] for i in order]).tolist())
            for order in itertools.permutations(range(len(partition)))}


@pytest.mark.parametrize('n', [3, 4, 5, 6])
def test_crp_is_exchangeable(n):
    params = ProcessParams.crp(0.7)
    for partition in enumerate_partitions(n):
        values = [partition_log_probability(labels, params) for labels in sorted(_orderings(partition))]
        assert values == approx([values[0]] * len(values), rel=1e-12)


def test_pcrp_is_not_exchangeable():
    params = ProcessParams.pcrp(1.0, 2.0)
    # sizes {2, 2} reached in two orders
    assert partition_log_probability([0, 0, 1, 1], params) != approx(
        partition_log_probability([0, 1, 0, 1], params))


def test_sequential_probabilities_sum_to_one():
    params = ProcessParams.pcrp(0.9, 1.7)
    total = sum(math.exp(partition_log_probability(p, params)) for p in enumerate_partitions(5))
    assert total == approx(1.0, abs=1e-12)


def test_stationary_prior_full_conditionals_are_the_seating_rule():
    params = ProcessParams.pcrp(0.6, 2.2)
    sizes = np.array([4, 2])
    # move one item of the second cluster to each possible table
    rest = np.array([4, 1])
    candidates = [np.array([5, 1]), np.array([4, 2]), np.array([4, 1, 1])]
    log_prior = np.array([log_stationary_prior(c, params) for c in candidates])
    conditional = np.exp(log_prior - log_prior.max())
    conditional /= conditional.sum()
    assert conditional == approx(np.exp(log_seat_weights(rest, params)), rel=1e-12)
    assert log_stationary_prior(sizes, params) == approx(2 * math.log(0.6) + 2.2 * math.log(6.0))


def test_enumerate_partitions_counts_bell_numbers():
    assert [sum(1 for _ in enumerate_partitions(n)) for n in range(1, 7)] == [1, 2, 5, 15, 52, 203]
    assert all(is_canonical(p) for p in enumerate_partitions(4))


def test_canonical_labels_order_of_appearance():
    assert canonical_labels([7, 7, 3, 9, 3]).tolist() == [0, 0, 1, 2, 1]
    assert is_canonical([0, 1, 0, 2])
    assert not is_canonical([1, 0])


def test_partition_state_validation_and_hold_out():
    with pytest.raises(ParameterError):
        PartitionState([0, 1, 1], [1, 1])
    state = PartitionState.from_labels([0, 1, 1, 2]).hold_out(0)
    assert state.assignments.tolist() == [UNASSIGNED, 0, 0, 1]
    assert state.sizes.tolist() == [2, 1]
    assert state.n_total == 3
    with pytest.raises(ParameterError):
        state.hold_out(0)


def test_held_out_items_keep_their_slot_but_leave_n_total():
    full = PartitionState.from_labels([0, 0, 1, 2, 2])
    assert full.n_held_out == 0
    assert full.n_total == full.n_items == 5
    state = full.hold_out(3).hold_out(2)
    assert state.n_items == 5
    assert state.n_held_out == 2
    assert state.n_total == state.n_items - state.n_held_out == 3
    assert state.assignments.tolist() == [0, 0, UNASSIGNED, UNASSIGNED, 1]


@settings(max_examples=50)
@given(st.lists(st.integers(min_value=0, max_value=5), min_size=1, max_size=30))
def test_state_from_labels_sizes_match(labels):
    state = PartitionState.from_labels(labels)
    assert state.n_total == len(labels)
    assert np.all(state.sizes >= 1)
    assert state.num_clusters == len(set(labels))

import itertools
import math
from collections import Counter

import numpy as np
import pytest

from exceptions import InvalidParamsError, StateCountOverflowError
from state_space import (QueueParams, StateSpace, enumerate_states, state_count, state_count_closed_form,
                         validate_state)

WORKED_STATES = [
    (0, 0, 0), (0, 1, 0), (0, 2, 0), (0, 0, 1), (0, 1, 1),
    (0, 0, 2), (1, 2, 0), (1, 1, 1), (1, 0, 2),
]


def params(r, c, K):
    return QueueParams(1.0, 1.0, r, c, K)


def brute_force_states(r, c, K):
    """Стани через мультимножини фаз зайнятих каналів"""
    phases = []
    for busy in range(c + 1):
        for combo in itertools.combinations_with_replacement(range(1, r + 1), busy):
            counts = Counter(combo)
            phases.append(tuple(counts.get(i, 0) for i in range(1, r + 1)))
    states = {(0,) + p for p in phases}
    states |= {(j,) + p for j in range(1, K + 1) for p in phases if sum(p) == c}
    return states


def matrix_setup(k, c):
    """Пряме відтворення лічильника z_1..z_k з переносом"""
    rows = []
    z = [0] * k
    while z[k - 1] <= c:
        if sum(z) <= c:
            rows.append(tuple(z))
        z[0] += 1
        for i in range(1, k):
            if z[i - 1] > c:
                z[i - 1] = 0
                z[i] += 1
    return rows


def test_worked_example_order(worked_params):
    space = enumerate_states(worked_params)
    assert list(space) == WORKED_STATES
    assert len(space) == 9
    assert space.empty_index == 0
    assert space.index_of((1, 1, 1)) == 7


def test_customers_vector(worked_params):
    space = enumerate_states(worked_params)
    np.testing.assert_array_equal(space.customers, [0, 1, 2, 1, 2, 2, 3, 3, 3])
    with pytest.raises(ValueError):
        space.customers[0] = 5


@pytest.mark.parametrize("r,c,K,expected", [
    (1, 1, 0, 2),
    (1, 3, 2, 6),
    (3, 2, 2, 22),
    (4, 8, 10, 2145),
    (2, 15, 10, 296),
])
def test_state_count(r, c, K, expected):
    assert state_count(r, c, K) == expected


def test_single_phase_is_birth_death():
    space = enumerate_states(params(1, 5, 3))
    assert len(space) == 9
    np.testing.assert_array_equal(space.customers, np.arange(9))


@pytest.mark.parametrize("r,c", [(r, c) for r in range(1, 6) for c in range(1, 9)])
def test_closed_form_count(r, c):
    assert state_count_closed_form(r, c) == state_count(r, c, 1)


def oracle_cases():
    for r in range(1, 201):
        for c in range(1, 201 // r + 1):
            for K in range(0, 201 // (r * c) + 1):
                if K > 0 and r * c * K > 200:
                    continue
                if state_count(r, c, K) <= 5000:
                    yield r, c, K


def test_enumeration_matches_brute_force():
    checked = 0
    for r, c, K in oracle_cases():
        space = enumerate_states(params(r, c, K))
        expected = brute_force_states(r, c, K)
        assert set(space) == expected, (r, c, K)
        assert len(space) == len(expected) == state_count(r, c, K)
        checked += 1
    assert checked > 100


@pytest.mark.parametrize("r,c,K", [(1, 3, 2), (2, 2, 1), (2, 4, 3), (3, 3, 2), (4, 2, 5), (3, 5, 0)])
def test_order_matches_counter(r, c, K):
    space = enumerate_states(params(r, c, K))
    idle = [(0,) + z for z in matrix_setup(r, c)]
    full = [z for z in matrix_setup(r, c) if sum(z) == c]
    waiting = [(j,) + z for j in range(1, K + 1) for z in full]
    assert list(space) == idle + waiting


def test_states_satisfy_invariants():
    p = params(3, 4, 3)
    for state in enumerate_states(p):
        assert validate_state(state, p)


@pytest.mark.parametrize("state", [
    (0, 0),  # довжина
    (0, -1, 1),
    (2, 2, 0),  # s0 > K
    (1, 1, 0),  # черга при вільному каналі
    (0, 2, 1),  # більше ніж c у фазах
])
def test_validate_state_rejects(worked_params, state):
    assert not validate_state(state, worked_params)


def test_duplicate_states_rejected(worked_params):
    with pytest.raises(InvalidParamsError):
        StateSpace(worked_params, [(0, 0, 0), (0, 0, 0)])


@pytest.mark.parametrize("r,c,K", [(0, 1, 1), (1, 0, 1), (1, 1, -1), (1.5, 1, 1), (True, 1, 1)])
def test_invalid_dimensions(r, c, K):
    with pytest.raises(InvalidParamsError):
        state_count(r, c, K)
    with pytest.raises(InvalidParamsError):
        QueueParams(1.0, 1.0, r, c, K)


@pytest.mark.parametrize("lambda_,mu", [(0.0, 1.0), (1.0, -1.0), (float("nan"), 1.0), (1.0, float("inf"))])
def test_invalid_rates(lambda_, mu):
    with pytest.raises(InvalidParamsError):
        QueueParams(lambda_, mu, 2, 2, 1)


def test_state_count_overflow():
    with pytest.raises(StateCountOverflowError):
        state_count(60, 60, 10)


def test_rho_and_scaling():
    p = QueueParams(2.0, 1.0, 2, 4, 3)
    assert p.rho == pytest.approx(1.0)
    assert p.offered_load == pytest.approx(4.0)
    assert p.capacity == 7
    scaled = p.scaled(3.0)
    assert scaled.rho == pytest.approx(p.rho)
    assert scaled.to_dict()["lambda"] == pytest.approx(6.0)


def test_format_table(worked_params):
    lines = enumerate_states(worked_params).format_table()
    assert lines[0].split() == ["#", "s0", "s1", "s2", "n"]
    assert lines[7].split() == ["6", "1", "2", "0", "3"]
    assert len(lines) == 10


def test_waiting_blocks_share_phase_vectors():
    space = enumerate_states(params(3, 3, 4))
    full = math.comb(3 + 3 - 1, 3)
    blocks = [[s[1:] for s in space if s[0] == j] for j in range(1, 5)]
    assert all(len(block) == full for block in blocks)
    assert all(block == blocks[0] for block in blocks)

import numpy as np
import pytest
import scipy.sparse
from scipy.sparse.csgraph import breadth_first_order

from closed_form import birth_death_generator
from exceptions import MissingStateError, NumericalError
from generator import GeneratorMatrix, build_generator
from state_space import QueueParams, StateSpace, enumerate_states


def worked_matrix(lam, mu):
    """Генератор M/E_2/2/1 у порядку станів (000, 010, 020, 001, 011, 002, 120, 111, 102)"""
    Q = np.zeros((9, 9))
    Q[0, 1] = lam
    Q[1, 2], Q[1, 3] = lam, mu
    Q[2, 6], Q[2, 4] = lam, 2 * mu
    Q[3, 4], Q[3, 0] = lam, mu
    Q[4, 7], Q[4, 5], Q[4, 1] = lam, mu, mu
    Q[5, 8], Q[5, 3] = lam, 2 * mu
    Q[6, 7] = 2 * mu
    Q[7, 8], Q[7, 2] = mu, mu
    Q[8, 4] = 2 * mu
    Q[np.diag_indices(9)] = -Q.sum(axis=1)
    return Q


@pytest.mark.parametrize("lam,mu", [(1.0, 1.0), (2.0, 3.0)])
def test_worked_example_matrix(lam, mu):
    params = QueueParams(lam, mu, 2, 2, 1)
    generator = build_generator(params, enumerate_states(params))
    np.testing.assert_array_equal(generator.toarray(), worked_matrix(lam, mu))


def test_generator_invariants():
    params = QueueParams(1.7, 0.9, 3, 4, 3)
    generator = build_generator(params, enumerate_states(params))
    Q = generator.toarray()
    off = Q - np.diag(np.diag(Q))
    assert np.all(off >= 0)
    assert np.all(np.diag(Q) <= 0)
    assert np.max(np.abs(generator.row_sums())) <= 1e-12 * generator.max_exit_rate
    assert generator.is_irreducible()


@pytest.mark.parametrize("r", [1, 2, 3, 4])
@pytest.mark.parametrize("c", [1, 2, 5])
@pytest.mark.parametrize("K", [0, 2, 5])
def test_irreducible_on_grid(r, c, K):
    params = QueueParams(0.6 * c, 1.0, r, c, K)
    generator = build_generator(params, enumerate_states(params))
    assert generator.is_irreducible()
    # Порожній стан досяжний з усіх станів і всі стани досяжні з нього
    forward = breadth_first_order(generator.matrix, 0, directed=True, return_predecessors=False)
    backward = breadth_first_order(generator.matrix.T.tocsr(), 0, directed=True, return_predecessors=False)
    assert len(forward) == generator.n
    assert len(backward) == generator.n


@pytest.mark.parametrize("c,K", [(1, 0), (1, 4), (3, 2), (6, 5)])
def test_single_phase_matches_birth_death(c, K):
    params = QueueParams(1.3, 0.7, 1, c, K)
    generator = build_generator(params, enumerate_states(params))
    np.testing.assert_allclose(generator.toarray(), birth_death_generator(1.3, 0.7, c, K), rtol=0, atol=1e-15)


def test_max_exit_rate(worked_params):
    generator = build_generator(worked_params, enumerate_states(worked_params))
    assert generator.max_exit_rate == 3.0
    assert generator.nnz == 9 + 16


def test_entries_sorted(worked_params):
    generator = build_generator(worked_params, enumerate_states(worked_params))
    entries = list(generator.entries())
    assert entries == sorted(entries, key=lambda e: (e[0], e[1]))
    assert entries[0] == (0, 0, -1.0)
    assert entries[1] == (0, 1, 1.0)


def test_coordinate_text(worked_params):
    text = build_generator(worked_params, enumerate_states(worked_params)).to_coordinate_text()
    lines = text.splitlines()
    assert lines[:3] == ["0 0 -1.0", "0 1 1.0", "1 1 -2.0"]
    assert len(lines) == 25


def test_missing_state_reported(worked_params):
    states = enumerate_states(worked_params).states[:-1]
    with pytest.raises(MissingStateError) as info:
        build_generator(worked_params, StateSpace(worked_params, states))
    assert info.value.source == (0, 0, 2)
    assert info.value.rule == 2
    assert info.value.target == (1, 0, 2)


def test_last_phase_completion_rate():
    params = QueueParams(1.0, 2.0, 3, 3, 1)
    space = enumerate_states(params)
    Q = build_generator(params, space).toarray()
    source = space.index_of((1, 0, 0, 3))
    target = space.index_of((0, 1, 0, 2))
    assert Q[source, target] == pytest.approx(3 * 2.0)


def test_check_rejects_bad_rows():
    bad = GeneratorMatrix(scipy.sparse.csr_matrix(np.array([[-1.0, 0.5], [1.0, -1.0]])))
    with pytest.raises(NumericalError):
        bad.check()
    negative = GeneratorMatrix(scipy.sparse.csr_matrix(np.array([[1.0, -1.0], [1.0, -1.0]])))
    with pytest.raises(NumericalError):
        negative.check()


def test_reducible_detected():
    Q = GeneratorMatrix(scipy.sparse.csr_matrix(np.array([[-1.0, 1.0], [0.0, 0.0]])))
    assert not Q.is_irreducible()

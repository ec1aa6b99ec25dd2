import math

import numpy as np
import pytest
import scipy.integrate

from closed_form import erlang_b, mmck_distribution, truncated_poisson
from exceptions import InvalidParamsError, NumericalError
from generator import build_generator
from measures import (AggregatedDistribution, aggregate, erlang_cdf, erlang_pdf, params_from_rho,
                      performance_measures)
from solver import solve_stationary
from state_space import QueueParams, enumerate_states

TABLE_RHOS = (0.1, 0.3, 0.5, 0.7, 0.8, 0.9, 0.95, 0.98, 0.99)


def solve(params, method="squaring"):
    space = enumerate_states(params)
    dist = solve_stationary(build_generator(params, space), method)
    agg = aggregate(dist, space)
    return agg, performance_measures(agg, params)


def test_aggregate_worked_example(worked_params):
    space = enumerate_states(worked_params)
    pi = np.arange(1, 10, dtype=float)
    pi /= pi.sum()
    agg = aggregate(pi, space)
    expected = np.array([1, 2 + 4, 3 + 5 + 6, 7 + 8 + 9]) / 45
    np.testing.assert_allclose(agg.p, expected, rtol=0, atol=1e-15)
    assert agg.capacity == 3


def test_aggregate_size_mismatch(worked_params):
    with pytest.raises(InvalidParamsError):
        aggregate(np.ones(4) / 4, enumerate_states(worked_params))


@pytest.mark.parametrize("p", [[0.5, 0.6], [1.2, -0.2]])
def test_invalid_aggregated_distribution(p):
    with pytest.raises(NumericalError):
        AggregatedDistribution(np.array(p))


@pytest.mark.parametrize("method", ["squaring", "linear"])
def test_single_phase_matches_closed_form(method):
    cases = [(lam, 1.3, c, K) for lam in (0.4, 2.5, 7.0) for c in (1, 2, 5) for K in (0, 3, 8)]
    assert len(cases) >= 20
    for lam, mu, c, K in cases:
        agg, _ = solve(QueueParams(lam, mu, 1, c, K), method)
        np.testing.assert_allclose(agg.p, mmck_distribution(lam, mu, c, K), rtol=0, atol=1e-10)


@pytest.mark.parametrize("r", [1, 2, 3, 4])
@pytest.mark.parametrize("c", [1, 3, 5])
def test_loss_system_insensitivity(r, c):
    params = QueueParams(1.7, 0.8, r, c, 0)
    agg, measures = solve(params, "linear")
    np.testing.assert_allclose(agg.p, truncated_poisson(params.offered_load, c), rtol=0, atol=1e-10)
    assert measures.p_block == pytest.approx(erlang_b(params.offered_load, c), abs=1e-10)


def test_erlang_b_blocking():
    for c in (1, 2, 6):
        _, measures = solve(QueueParams(3.0, 1.5, 1, c, 0), "linear")
        assert measures.p_block == pytest.approx(erlang_b(2.0, c), abs=1e-10)


def test_little_identities():
    params = params_from_rho(0.9, 4, 3, 1.0, 5)
    agg, m = solve(params)
    assert m.lambda_eff == params.lambda_ * (1.0 - m.p_block)
    assert m.W == m.L / m.lambda_eff
    assert m.Wq == m.Lq / m.lambda_eff
    assert 0 <= m.Lq <= m.L
    assert m.mean_in_service == pytest.approx(m.L - m.Lq)
    assert 0 < m.utilization <= 1
    assert m.p_wait == pytest.approx(agg.p[4:9].sum())
    assert m.p_block == agg.p[-1]
    # Сервер зайнятий у середньому lambda_eff * r / mu
    assert m.mean_in_service == pytest.approx(m.lambda_eff * params.r / params.mu, rel=1e-9)


def test_empty_queue_measures():
    _, m = solve(QueueParams(1.0, 1.0, 2, 3, 0))
    assert m.Lq == 0.0
    assert m.Wq == 0.0
    assert m.p_wait == 0.0


def test_near_empty_system():
    params = params_from_rho(0.001, 3, 2, 1.0, 2)
    agg, m = solve(params)
    assert agg.p[0] > 0.99
    assert m.L == pytest.approx(params.offered_load, rel=1e-2)


@pytest.mark.parametrize("rho", TABLE_RHOS)
def test_mean_size_grows_with_queue_length(rho):
    values = [solve(params_from_rho(rho, 4, 2, 1.0, K))[1].L for K in (0, 1, 3, 5, 7, 10)]
    assert all(b >= a - 1e-12 for a, b in zip(values, values[1:]))


def test_params_from_rho():
    params = params_from_rho(0.5, 4, 2, 1.0, 1)
    assert params.lambda_ == pytest.approx(1.0)
    assert params.rho == pytest.approx(0.5)
    with pytest.raises(InvalidParamsError):
        params_from_rho(0.0, 4, 2, 1.0)
    with pytest.raises(InvalidParamsError):
        params_from_rho(0.5, 4, 2, -1.0)


@pytest.mark.parametrize("mu", [1.0, 0.7, 3.0])
def test_unit_load_round_trip(mu):
    eps = np.finfo(np.float64).eps
    for c in range(1, 17):
        for r in range(1, 13):
            params = params_from_rho(1.0, c, r, mu)
            assert params.lambda_ == pytest.approx(mu * c / r, rel=eps)
            # Точна рівність недосяжна для деяких (c, r), наприклад (13, 3)
            assert abs(params.rho - 1.0) <= 2 * eps, (c, r)


def test_measures_shape_mismatch(worked_params):
    with pytest.raises(InvalidParamsError):
        performance_measures(AggregatedDistribution(np.array([0.5, 0.5])), worked_params)


@pytest.mark.parametrize("r,mu", [(1, 1.0), (2, 3.0), (4, 2.0)])
def test_erlang_pdf(r, mu):
    t = 0.7
    expected = mu * (mu * t) ** (r - 1) * math.exp(-mu * t) / math.factorial(r - 1)
    assert erlang_pdf(t, r, mu) == pytest.approx(expected, rel=1e-12)
    total, _ = scipy.integrate.quad(erlang_pdf, 0, np.inf, args=(r, mu))
    assert total == pytest.approx(1.0, abs=1e-9)
    mean, _ = scipy.integrate.quad(lambda x: x * erlang_pdf(x, r, mu), 0, np.inf)
    assert mean == pytest.approx(r / mu, rel=1e-8)
    assert erlang_cdf(t, r, mu) == pytest.approx(scipy.integrate.quad(erlang_pdf, 0, t, args=(r, mu))[0], abs=1e-12)


def test_erlang_pdf_vectorised():
    values = erlang_pdf(np.array([0.0, 1.0, 2.0]), 2, 1.0)
    np.testing.assert_allclose(values, [0.0, math.exp(-1), 2 * math.exp(-2)], rtol=1e-12)


def test_erlang_pdf_invalid():
    with pytest.raises(InvalidParamsError):
        erlang_pdf(1.0, 0, 1.0)
    with pytest.raises(InvalidParamsError):
        erlang_cdf(1.0, 2, 0.0)

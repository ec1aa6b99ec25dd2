"""
Аналітичні формули для систем M/M/c/K і систем з втратами
"""
import numpy as np
from scipy.special import gammaln

from exceptions import InvalidParamsError
from input_validator import params_validator


def _check(lambda_: float, mu: float, c: int, K: int) -> None:
    validation = params_validator.validate_queue_params(lambda_, mu, 1, c, K)
    if not validation["valid"]:
        raise InvalidParamsError(validation["message"])


def mmck_distribution(lambda_: float, mu: float, c: int, K: int) -> np.ndarray:
    """
    Стаціонарний розподіл кількості клієнтів у M/M/c/K (K - довжина черги)

    P_n ~ a^n/n! для n <= c, P_n ~ a^c/c! * (a/c)^(n-c) для n > c, a = lambda/mu.
    Обчислюється в логарифмах.

    Args:
        lambda_: Інтенсивність надходження
        mu: Інтенсивність обслуговування
        c: Кількість каналів
        K: Максимальна довжина черги

    Returns:
        Вектор P_0..P_{c+K}
    """
    _check(lambda_, mu, c, K)
    log_a = np.log(lambda_ / mu)
    n = np.arange(c + K + 1)
    busy = np.minimum(n, c)
    # log(a^n / (min(n,c)! * c^(n - min(n,c))))
    log_weights = n * log_a - gammaln(busy + 1) - (n - busy) * np.log(c)
    log_weights -= log_weights.max()
    weights = np.exp(log_weights)
    return weights / weights.sum()


def mmck_mean_system_size(lambda_: float, mu: float, c: int, K: int) -> float:
    """Середня кількість клієнтів у M/M/c/K"""
    p = mmck_distribution(lambda_, mu, c, K)
    return float(np.dot(np.arange(p.size), p))


def truncated_poisson(offered_load: float, c: int) -> np.ndarray:
    """
    Розподіл системи з втратами M/G/c/c (усічений Пуассон)

    Args:
        offered_load: Запропоноване навантаження a
        c: Кількість каналів

    Returns:
        Вектор P_0..P_c
    """
    _check(offered_load, 1.0, c, 0)
    n = np.arange(c + 1)
    log_weights = n * np.log(offered_load) - gammaln(n + 1)
    log_weights -= log_weights.max()
    weights = np.exp(log_weights)
    return weights / weights.sum()


def erlang_b(offered_load: float, c: int) -> float:
    """
    Ймовірність втрати Ерланга B, рекурсія B(k) = a*B(k-1) / (k + a*B(k-1))

    Args:
        offered_load: Запропоноване навантаження a
        c: Кількість каналів

    Returns:
        B(c, a)
    """
    _check(offered_load, 1.0, c, 0)
    blocking = 1.0
    for k in range(1, c + 1):
        blocking = offered_load * blocking / (k + offered_load * blocking)
    return blocking


def birth_death_generator(lambda_: float, mu: float, c: int, K: int) -> np.ndarray:
    """
    Щільний тридіагональний генератор M/M/c/K за кількістю клієнтів

    Args:
        lambda_: Інтенсивність надходження
        mu: Інтенсивність обслуговування
        c: Кількість каналів
        K: Максимальна довжина черги

    Returns:
        Матриця (c+K+1) x (c+K+1)
    """
    _check(lambda_, mu, c, K)
    size = c + K + 1
    Q = np.zeros((size, size))
    for n in range(size - 1):
        Q[n, n + 1] = lambda_
    for n in range(1, size):
        Q[n, n - 1] = min(n, c) * mu
    Q[np.diag_indices(size)] = -Q.sum(axis=1)
    return Q

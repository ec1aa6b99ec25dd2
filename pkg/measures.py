"""
Модуль агрегації розподілу і показників ефективності
"""
from dataclasses import asdict, dataclass
from typing import Dict, Union

import numpy as np
import scipy.stats

from exceptions import InvalidParamsError, NumericalError
from input_validator import params_validator
from solver import StationaryDistribution
from state_space import QueueParams, StateSpace

MASS_TOLERANCE = 1e-12


@dataclass
class AggregatedDistribution:
    """Ймовірності P_0..P_{c+K} мати n клієнтів у системі"""

    p: np.ndarray

    def __post_init__(self):
        self.p = np.asarray(self.p, dtype=np.float64)
        if np.any(self.p < 0):
            raise NumericalError(f"Від'ємна ймовірність P_n: {self.p.min():.3e}")
        total = float(self.p.sum())
        if abs(total - 1.0) > MASS_TOLERANCE:
            raise NumericalError(f"Сума P_n = {total!r} відрізняється від 1")

    @property
    def capacity(self) -> int:
        """c + K"""
        return int(self.p.size - 1)


@dataclass(frozen=True)
class PerformanceMeasures:
    """Показники ефективності системи"""

    L: float  # середня кількість у системі
    Lq: float  # середня довжина черги
    W: float  # середній час у системі
    Wq: float  # середній час очікування
    p_block: float  # P_{c+K}
    lambda_eff: float  # lambda * (1 - p_block)
    rho: float  # навантаження на канал
    mean_in_service: float
    utilization: float  # mean_in_service / c
    p_wait: float  # клієнта прийнято, але всі канали зайняті

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


def aggregate(pi: Union[StationaryDistribution, np.ndarray], space: StateSpace) -> AggregatedDistribution:
    """
    Сумування ймовірностей станів за кількістю клієнтів n = s0 + sum(s_i)

    Для n <= c це стани з s0 = 0 і сумою фаз n, для n > c - стани з s0 = n - c.

    Args:
        pi: Стаціонарний розподіл, узгоджений з простором станів
        space: Простір станів

    Returns:
        Агрегований розподіл
    """
    vector = pi.pi if isinstance(pi, StationaryDistribution) else np.asarray(pi, dtype=np.float64)
    if vector.size != len(space):
        raise InvalidParamsError(f"Розмір pi ({vector.size}) не відповідає кількості станів ({len(space)})")

    p = np.bincount(space.customers, weights=vector, minlength=space.params.capacity + 1)
    return AggregatedDistribution(p)


def performance_measures(agg: AggregatedDistribution, params: QueueParams) -> PerformanceMeasures:
    """
    Показники за агрегованим розподілом і законом Літтла

    Args:
        agg: Агрегований розподіл
        params: Параметри системи

    Returns:
        Показники ефективності
    """
    if agg.capacity != params.capacity:
        raise InvalidParamsError(f"Розподіл має {agg.capacity + 1} значень, очікувалось {params.capacity + 1}")

    p = agg.p
    n = np.arange(p.size)
    c = params.c

    L = float(np.dot(n, p))
    Lq = float(np.dot(np.maximum(n - c, 0), p))
    p_block = float(p[-1])
    lambda_eff = params.lambda_ * (1.0 - p_block)
    if lambda_eff <= 0:
        raise NumericalError(f"Ефективна інтенсивність надходження {lambda_eff!r} не додатна")

    mean_in_service = L - Lq
    return PerformanceMeasures(
        L=L,
        Lq=Lq,
        W=L / lambda_eff,
        Wq=Lq / lambda_eff,
        p_block=p_block,
        lambda_eff=lambda_eff,
        rho=params.rho,
        mean_in_service=mean_in_service,
        utilization=mean_in_service / c,
        p_wait=float(p[c:params.capacity].sum()),
    )


def params_from_rho(rho: float, c: int, r: int, mu: float, K: int = 0) -> QueueParams:
    """
    Параметри з щільності трафіку: lambda = rho*mu*c/r

    Args:
        rho: Щільність трафіку на канал
        c: Кількість каналів
        r: Порядок Ерланга
        mu: Інтенсивність фази
        K: Максимальна довжина черги

    Returns:
        Параметри системи
    """
    validation = params_validator.validate_rho(rho, mu)
    if not validation["valid"]:
        raise InvalidParamsError(validation["message"])
    return QueueParams(rho * mu * c / r, mu, r, c, K)


def _check_erlang(r: int, mu: float) -> None:
    validation = params_validator.validate_queue_params(1.0, mu, r, 1, 0)
    if not validation["valid"]:
        raise InvalidParamsError(validation["message"])


def erlang_pdf(t, r: int, mu: float):
    """
    Щільність Ерланга mu (mu t)^(r-1) e^(-mu t) / (r-1)!, середнє r/mu

    Args:
        t: Час (скаляр або масив, >= 0)
        r: Кількість фаз
        mu: Інтенсивність фази

    Returns:
        Значення щільності
    """
    _check_erlang(r, mu)
    value = scipy.stats.erlang.pdf(t, r, scale=1.0 / mu)
    return float(value) if np.ndim(value) == 0 else value


def erlang_cdf(t, r: int, mu: float):
    """Функція розподілу Ерланга"""
    _check_erlang(r, mu)
    value = scipy.stats.erlang.cdf(t, r, scale=1.0 / mu)
    return float(value) if np.ndim(value) == 0 else value

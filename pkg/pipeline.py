"""
Повна процедура: стани, генератор, exp(hQ), pi, агрегація, показники
"""
import itertools
import time
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np

from exceptions import SolverDisagreementError
from generator import GeneratorMatrix, build_generator
from logger import logger
from measures import AggregatedDistribution, PerformanceMeasures, aggregate, performance_measures
from solver import METHOD_SQUARING, METHODS, SolverConfig, StationaryDistribution, solve_stationary
from state_space import QueueParams, StateSpace, enumerate_states

AGREEMENT_TOLERANCE = 1e-10


@dataclass
class SolveOutcome:
    """Результат розв'язання одного екземпляра"""

    params: QueueParams
    method: str
    space: StateSpace
    generator: GeneratorMatrix
    distribution: StationaryDistribution
    aggregated: AggregatedDistribution
    measures: PerformanceMeasures
    wall_time: float
    cross_check: Dict[str, StationaryDistribution] = field(default_factory=dict)
    gaps: Dict[str, float] = field(default_factory=dict)


def compare_distributions(distributions: Dict[str, StationaryDistribution]) -> Dict[str, float]:
    """
    Попарні відстані max|pi_a - pi_b|

    Args:
        distributions: Розподіли за назвами методів

    Returns:
        Відстані з ключами "a/b"
    """
    gaps = {}
    for (name_a, dist_a), (name_b, dist_b) in itertools.combinations(distributions.items(), 2):
        gaps[f"{name_a}/{name_b}"] = float(np.max(np.abs(dist_a.pi - dist_b.pi)))
    return gaps


def solve_queue(params: QueueParams, method: str = METHOD_SQUARING, config: Optional[SolverConfig] = None,
                check_all: bool = False, agreement_tol: float = AGREEMENT_TOLERANCE) -> SolveOutcome:
    """
    Кроки 1-6 для одного екземпляра M/E_r/c/K

    Args:
        params: Параметри системи
        method: Основний метод
        config: Конфігурація розв'язувача
        check_all: Запустити всі три методи і перевірити узгодженість
        agreement_tol: Допуск попарної розбіжності

    Returns:
        Результат з усіма проміжними об'єктами
    """
    config = config or SolverConfig()
    started = time.perf_counter()

    space = enumerate_states(params)
    generator = build_generator(params, space)
    distribution = solve_stationary(generator, method, config)

    cross_check: Dict[str, StationaryDistribution] = {}
    gaps: Dict[str, float] = {}
    if check_all:
        for name in METHODS:
            cross_check[name] = distribution if name == method else solve_stationary(generator, name, config)
        gaps = compare_distributions(cross_check)
        if max(gaps.values()) > agreement_tol:
            logger.log_solver_disagreement(gaps, agreement_tol)
            raise SolverDisagreementError(gaps, agreement_tol)

    aggregated = aggregate(distribution, space)
    measures = performance_measures(aggregated, params)

    return SolveOutcome(
        params=params,
        method=method,
        space=space,
        generator=generator,
        distribution=distribution,
        aggregated=aggregated,
        measures=measures,
        wall_time=time.perf_counter() - started,
        cross_check=cross_check,
        gaps=gaps,
    )

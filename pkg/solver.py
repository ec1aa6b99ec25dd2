"""
Модуль обчислення стаціонарного розподілу pi трьома незалежними методами
"""
import math
import time
import warnings
from collections import deque
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
import scipy.linalg
import scipy.sparse
from scipy.sparse.csgraph import connected_components, shortest_path

from exceptions import (ConvergenceError, InvalidParamsError, NumericalError, ReducibleChainError,
                        ResidualError, SingularSystemError)
from generator import GeneratorMatrix
from input_validator import params_validator
from logger import logger

# Налаштування за замовчуванням
DEFAULT_DELTA = 1e-12
DEFAULT_RESIDUAL_TOL = 1e-9
DEFAULT_MAX_SQUARINGS = 60
DEFAULT_MAX_ITERATIONS = 2_000_000
DEFAULT_UNIFORMIZATION_FACTOR = 1.05

SERIES_TOLERANCE = 1e-14  # залишок ряду Тейлора для exp(A)
SCALED_NORM_BOUND = 0.5  # ||hQ / 2^s|| перед розкладом у ряд
MAX_TAYLOR_TERMS = 40
CLAMP_TOLERANCE = 1e-13  # від'ємні елементи від округлення, які можна обнулити
STOCHASTIC_TOLERANCE = 1e-12
ROW_SPREAD_TOLERANCE = 1e-8  # розкид рядків граничної матриці
UNIFORM_RATIO_WINDOW = 10

METHOD_SQUARING = "squaring"
METHOD_LINEAR = "linear"
METHOD_UNIFORM = "uniform"
METHODS = (METHOD_SQUARING, METHOD_LINEAR, METHOD_UNIFORM)


@dataclass(frozen=True)
class SolverConfig:
    """Конфігурація розв'язувача"""

    delta: float = DEFAULT_DELTA  # поріг max|P_new - P_old|
    residual_tol: float = DEFAULT_RESIDUAL_TOL  # допуск ||pi Q||
    max_squarings: int = DEFAULT_MAX_SQUARINGS
    max_iterations: int = DEFAULT_MAX_ITERATIONS  # для рівномірізації
    uniformization_factor: float = DEFAULT_UNIFORMIZATION_FACTOR
    h: Optional[float] = None  # None - 1/(factor * max|q_ii|)

    def __post_init__(self):
        validation = params_validator.validate_solver_config(
            self.delta, self.residual_tol, self.max_squarings, self.max_iterations,
            self.uniformization_factor, self.h
        )
        if not validation["valid"]:
            raise InvalidParamsError(validation["message"])


@dataclass
class StationaryDistribution:
    """Стаціонарний розподіл по станах"""

    pi: np.ndarray
    method: str
    iterations: int
    residual: float

    @property
    def n(self) -> int:
        return int(self.pi.size)


@dataclass
class TransitionMatrix:
    """Результат exp(hQ)"""

    p: np.ndarray
    h: float
    adjustment: float  # відсічена маса + максимальна корекція суми рядка
    squarings: int
    taylor_terms: int


MatrixLike = Union[GeneratorMatrix, np.ndarray, scipy.sparse.spmatrix]


def _dense(Q: MatrixLike) -> np.ndarray:
    """Щільна копія генератора"""
    if isinstance(Q, GeneratorMatrix):
        return Q.toarray()
    if scipy.sparse.issparse(Q):
        return Q.toarray()
    return np.array(Q, dtype=np.float64)


def _as_generator(Q: MatrixLike) -> GeneratorMatrix:
    """Обгортка довільної матриці у GeneratorMatrix"""
    if isinstance(Q, GeneratorMatrix):
        return Q
    return GeneratorMatrix(scipy.sparse.csr_matrix(Q, dtype=np.float64))


def default_time_step(Q: MatrixLike, factor: float = DEFAULT_UNIFORMIZATION_FACTOR) -> float:
    """
    Крок h = 1/(factor * max|q_ii|)

    Args:
        Q: Генератор
        factor: Множник запасу

    Returns:
        Крок часу (1.0 для нульового генератора)
    """
    max_exit = _as_generator(Q).max_exit_rate
    if max_exit <= 0:
        return 1.0
    return 1.0 / (factor * max_exit)


def _taylor_terms(theta: float) -> int:
    """
    Мінімальний степінь m, при якому залишок ряду exp для ||A|| = theta менший за SERIES_TOLERANCE

    Args:
        theta: Норма масштабованої матриці (<= SCALED_NORM_BOUND)

    Returns:
        Кількість членів ряду
    """
    term = 1.0
    for m in range(1, MAX_TAYLOR_TERMS + 1):
        term *= theta / m
        # Оцінка залишку: theta^(m+1)/(m+1)! / (1 - theta/(m+2))
        remainder = term * theta / (m + 1) / (1.0 - theta / (m + 2))
        if remainder < SERIES_TOLERANCE:
            return m
    return MAX_TAYLOR_TERMS


def transition_matrix(Q: MatrixLike, h: Optional[float] = None) -> TransitionMatrix:
    """
    Перехідна матриця P(h) = exp(hQ) масштабуванням і піднесенням до квадрату

    Args:
        Q: Генератор
        h: Крок часу (> 0), None - крок за замовчуванням

    Returns:
        Стохастична по рядках матриця з описом корекції
    """
    if h is None:
        h = default_time_step(Q)
    validation = params_validator.validate_time_step(h)
    if not validation["valid"]:
        raise InvalidParamsError(validation["message"])

    A = h * _dense(Q)
    n = A.shape[0]
    if not np.all(np.isfinite(A)):
        raise NumericalError(f"hQ містить нескінченні значення (h={h})")

    norm = float(np.max(np.abs(A).sum(axis=1))) if n else 0.0
    squarings = 0
    if norm > SCALED_NORM_BOUND:
        squarings = int(math.ceil(math.log2(norm / SCALED_NORM_BOUND)))
    A /= 2.0 ** squarings
    terms = _taylor_terms(norm / 2.0 ** squarings)

    # Схема Горнера: I + A(I + A/2(I + ... ))
    identity = np.eye(n)
    E = identity.copy()
    for k in range(terms, 0, -1):
        E = identity + (A @ E) / k

    for step in range(squarings):
        E = E @ E
        if not np.all(np.isfinite(E)):
            raise NumericalError(
                f"Нескінченні значення під час піднесення до квадрату | Крок {step + 1}/{squarings} | h={h} | ||hQ||={norm:.3e}"
            )

    negative = E < 0
    clamped = 0.0
    if np.any(negative):
        worst = float(-E[negative].min())
        if worst > CLAMP_TOLERANCE:
            raise NumericalError(f"exp(hQ) містить від'ємний елемент {-worst:.3e} (h={h})")
        clamped = float(-E[negative].sum())
        E[negative] = 0.0

    # Субнормальні числа сповільнюють множення матриць
    E[E < np.finfo(np.float64).tiny] = 0.0

    row_sums = E.sum(axis=1)
    adjustment = clamped + (float(np.max(np.abs(row_sums - 1.0))) if n else 0.0)
    E /= row_sums[:, np.newaxis]

    logger.log_transition_matrix(h, squarings, terms)
    logger.log_probability_clamp(clamped, adjustment)
    return TransitionMatrix(p=E, h=h, adjustment=adjustment, squarings=squarings, taylor_terms=terms)


def _ensure_ergodic(P: np.ndarray) -> None:
    """
    Перевірка що P незвідна і аперіодична (інакше P^n не прямує до матриці рангу 1)

    Args:
        P: Стохастична матриця
    """
    n = P.shape[0]
    if n == 1:
        return

    graph = scipy.sparse.csr_matrix(P > 0, dtype=np.float64)
    n_components, _ = connected_components(graph, directed=True, connection='strong')
    if n_components != 1:
        raise ReducibleChainError(f"Матриця P звідна: {n_components} сильно зв'язних компонент")

    if np.any(np.diag(P) > 0):
        return

    # Період = НСД(d(u) + 1 - d(v)) по всіх ребрах u -> v
    distances = shortest_path(graph, directed=True, unweighted=True, indices=0)
    coo = graph.tocoo()
    shifts = np.abs(distances[coo.row] + 1 - distances[coo.col]).astype(np.int64)
    period = int(np.gcd.reduce(shifts))
    if period != 1:
        raise ReducibleChainError(f"Матриця P періодична з періодом {period}")


def _finalize(pi: np.ndarray, method: str, iterations: int, config: SolverConfig,
              generator: Optional[GeneratorMatrix] = None,
              P: Optional[np.ndarray] = None) -> StationaryDistribution:
    """
    Відсікання шуму, нормування, нев'язка

    Args:
        pi: Ненормований вектор
        method: Назва методу
        iterations: Кількість ітерацій
        config: Конфігурація
        generator: Генератор для нев'язки ||pi Q||
        P: Стохастична матриця для ||pi P - pi||, якщо генератора немає

    Returns:
        Стаціонарний розподіл
    """
    pi = np.array(pi, dtype=np.float64)
    if not np.all(np.isfinite(pi)):
        raise NumericalError(f"Метод {method} дав нескінченні ймовірності")

    tiny_negative = (pi < 0) & (pi > -CLAMP_TOLERANCE)
    pi[tiny_negative] = 0.0
    if np.any(pi < 0):
        raise NumericalError(f"Метод {method} дав від'ємну ймовірність {pi.min():.3e}")

    pi /= pi.sum()

    if generator is not None:
        residual = float(np.max(np.abs(generator.matrix.T @ pi))) if pi.size else 0.0
        if residual > config.residual_tol:
            raise ResidualError(
                f"Метод {method}: ||pi Q|| = {residual:.3e} > {config.residual_tol:.1e}"
            )
    elif P is not None:
        residual = float(np.max(np.abs(pi @ P - pi)))
    else:
        residual = float("nan")

    return StationaryDistribution(pi=pi, method=method, iterations=iterations, residual=residual)


def steady_state_squaring(P: Union[np.ndarray, TransitionMatrix], config: Optional[SolverConfig] = None,
                          generator: Optional[GeneratorMatrix] = None) -> StationaryDistribution:
    """
    Ітеративне піднесення P до квадрату до стабілізації рядків

    Args:
        P: Стохастична по рядках матриця (або результат transition_matrix)
        config: Конфігурація розв'язувача
        generator: Генератор Q для нев'язки (необов'язково)

    Returns:
        Середнє рядків граничної матриці як pi
    """
    config = config or SolverConfig()
    started = time.perf_counter()

    if isinstance(P, TransitionMatrix):
        P = P.p
    P = np.asarray(P, dtype=np.float64)
    if P.ndim != 2 or P.shape[0] != P.shape[1]:
        raise NumericalError(f"P повинна бути квадратною, отримано {P.shape}")
    if not np.all(np.isfinite(P)) or np.any(P < 0):
        raise NumericalError("P містить від'ємні або нескінченні елементи")
    if np.max(np.abs(P.sum(axis=1) - 1.0)) > 1e-9:
        raise NumericalError("P не є стохастичною по рядках")

    _ensure_ergodic(P)

    old = P
    new = old @ old
    iterations = 1
    diff = float(np.max(np.abs(new - old)))
    logger.log_squaring_step(iterations, diff)

    while diff > config.delta:
        if iterations >= config.max_squarings:
            logger.log_convergence_failure(METHOD_SQUARING, iterations, diff)
            raise ConvergenceError(METHOD_SQUARING, iterations, diff)
        old = new
        new = new @ new
        iterations += 1
        diff = float(np.max(np.abs(new - old)))
        logger.log_squaring_step(iterations, diff)

    spread = float(np.max(new.max(axis=0) - new.min(axis=0)))
    if spread > ROW_SPREAD_TOLERANCE:
        raise NumericalError(f"Рядки граничної матриці не збігаються: розкид {spread:.3e}")

    result = _finalize(new.mean(axis=0), METHOD_SQUARING, iterations, config, generator=generator, P=P)
    logger.log_solver_converged(METHOD_SQUARING, iterations, result.residual, time.perf_counter() - started)
    return result


def steady_state_linear(Q: MatrixLike, config: Optional[SolverConfig] = None) -> StationaryDistribution:
    """
    Розв'язання pi Q = 0, sum(pi) = 1 через LU з частковим вибором головного елемента

    Останнє рівняння системи Q^T pi^T = 0 замінюється рядком нормування.

    Args:
        Q: Незвідний генератор
        config: Конфігурація (для допуску нев'язки)

    Returns:
        Стаціонарний розподіл
    """
    config = config or SolverConfig()
    started = time.perf_counter()
    generator = _as_generator(Q)

    if not generator.is_irreducible():
        raise ReducibleChainError("Генератор звідний, лінійна система вироджена")

    # pi Q = 0 не залежить від масштабу Q
    scale = generator.max_exit_rate or 1.0
    A = generator.toarray().T / scale
    n = A.shape[0]
    A[-1, :] = 1.0
    b = np.zeros(n)
    b[-1] = 1.0

    try:
        with warnings.catch_warnings():
            warnings.simplefilter("error", scipy.linalg.LinAlgWarning)
            lu, piv = scipy.linalg.lu_factor(A)
    except (scipy.linalg.LinAlgWarning, np.linalg.LinAlgError, ValueError) as e:
        raise SingularSystemError(f"Розклад LU неможливий: {e}") from e

    pivots = np.abs(np.diag(lu))
    if pivots.min() <= np.finfo(np.float64).eps * pivots.max():
        raise SingularSystemError(f"Вироджена система: мінімальний головний елемент {pivots.min():.3e}")

    pi = scipy.linalg.lu_solve((lu, piv), b)

    result = _finalize(pi, METHOD_LINEAR, 1, config, generator=generator)
    logger.log_solver_converged(METHOD_LINEAR, 1, result.residual, time.perf_counter() - started)
    return result


def steady_state_uniformization(Q: MatrixLike, config: Optional[SolverConfig] = None) -> StationaryDistribution:
    """
    Степеневий метод для P = I + Q/Lambda, Lambda = factor * max|q_ii|

    Зупинка, коли сусідні ітерації відрізняються не більше ніж на delta
    і геометрична оцінка залишку diff*q/(1-q) теж не більша за delta.

    Args:
        Q: Генератор
        config: Конфігурація розв'язувача

    Returns:
        Стаціонарний розподіл
    """
    config = config or SolverConfig()
    started = time.perf_counter()
    generator = _as_generator(Q)
    n = generator.n

    if n == 1:
        return _finalize(np.ones(1), METHOD_UNIFORM, 0, config, generator=generator)

    max_exit = generator.max_exit_rate
    if max_exit <= 0:
        raise ReducibleChainError("Генератор без переходів, стаціонарний розподіл не єдиний")

    rate = config.uniformization_factor * max_exit
    P = scipy.sparse.identity(n, format='csr') + generator.matrix / rate
    PT = scipy.sparse.csr_matrix(P.T)

    x = np.full(n, 1.0 / n)
    history = deque(maxlen=UNIFORM_RATIO_WINDOW)
    diff = float("inf")
    eps = np.finfo(np.float64).eps

    for iteration in range(1, config.max_iterations + 1):
        y = PT @ x
        diff = float(np.max(np.abs(y - x)))
        x = y

        if diff <= config.delta:
            # Різниця на рівні округлення - подальших змін не буде
            if diff <= 64 * eps * float(x.max()):
                break
            if history and history[0] > 0:
                ratio = (diff / history[0]) ** (1.0 / len(history))
                if ratio < 1.0 and diff * ratio / (1.0 - ratio) <= config.delta:
                    break
        history.append(diff)
    else:
        logger.log_convergence_failure(METHOD_UNIFORM, config.max_iterations, diff)
        raise ConvergenceError(METHOD_UNIFORM, config.max_iterations, diff)

    result = _finalize(x, METHOD_UNIFORM, iteration, config, generator=generator)
    logger.log_solver_converged(METHOD_UNIFORM, iteration, result.residual, time.perf_counter() - started)
    return result


def solve_stationary(generator: GeneratorMatrix, method: str = METHOD_SQUARING,
                     config: Optional[SolverConfig] = None) -> StationaryDistribution:
    """
    Вибір методу розв'язання

    Args:
        generator: Генератор Q
        method: squaring, linear або uniform
        config: Конфігурація розв'язувача

    Returns:
        Стаціонарний розподіл
    """
    config = config or SolverConfig()

    if method in (METHOD_SQUARING, METHOD_LINEAR):
        size_check = params_validator.validate_dense_size(generator.n)
        if not size_check["valid"]:
            logger.log_dense_size_warning(generator.n, size_check["max_states"], method)

    if method == METHOD_SQUARING:
        h = config.h if config.h is not None else default_time_step(generator, config.uniformization_factor)
        P = transition_matrix(generator, h)
        return steady_state_squaring(P.p, config, generator=generator)
    if method == METHOD_LINEAR:
        return steady_state_linear(generator, config)
    if method == METHOD_UNIFORM:
        return steady_state_uniformization(generator, config)

    raise InvalidParamsError(f"Невідомий метод {method!r}, доступні: {', '.join(METHODS)}")

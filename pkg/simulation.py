"""
Дискретно-подійна симуляція M/E_r/c/K як незалежна перевірка аналітичного розв'язку
"""
from collections import deque
from dataclasses import dataclass
from typing import Any, Dict, Optional

import numpy as np
import scipy.stats
import simpy

from exceptions import InvalidParamsError, SimulationInvariantError
from input_validator import params_validator
from logger import logger
from state_space import QueueParams

DEFAULT_HORIZON = 1e6
DEFAULT_BATCHES = 20
DEFAULT_WARMUP_FRACTION = 0.1
CONFIDENCE = 0.95


@dataclass(frozen=True)
class SimConfig:
    """Конфігурація симуляції"""

    params: QueueParams
    horizon: float = DEFAULT_HORIZON  # час вимірювання
    warmup: Optional[float] = None  # None - 10% від horizon
    seed: int = 0
    batches: int = DEFAULT_BATCHES

    def __post_init__(self):
        if self.warmup is None:
            object.__setattr__(self, "warmup", DEFAULT_WARMUP_FRACTION * self.horizon)
        validation = params_validator.validate_sim_config(self.horizon, self.warmup, self.batches, self.seed)
        if not validation["valid"]:
            raise InvalidParamsError(validation["message"])


@dataclass
class SimResult:
    """Оцінки симуляції з довірчими інтервалами методу батчів"""

    p_hat: np.ndarray  # часові частки P_n
    L_hat: float
    half_widths: np.ndarray  # напівширини 95% ДІ для P_n
    L_half_width: float
    events: int
    arrivals: int  # надходження у вікні вимірювання
    blocked: int  # відмови у вікні вимірювання
    seed: int

    @property
    def p_block_hat(self) -> float:
        """Частка відмов серед надходжень"""
        return self.blocked / self.arrivals if self.arrivals else 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "p_hat": [float(x) for x in self.p_hat],
            "L_hat": self.L_hat,
            "half_widths": [float(x) for x in self.half_widths],
            "L_half_width": self.L_half_width,
            "events": self.events,
            "arrivals": self.arrivals,
            "blocked": self.blocked,
            "p_block_hat": self.p_block_hat,
            "seed": self.seed,
        }


def make_rng(seed: int) -> np.random.Generator:
    """Генератор PCG64 з 64-бітним seed"""
    return np.random.Generator(np.random.PCG64(seed))


def sample_service_time(rng: np.random.Generator, r: int, mu: float, size: Optional[int] = None):
    """
    Час обслуговування як сума r незалежних Exp(mu)

    Args:
        rng: Генератор випадкових чисел
        r: Кількість фаз
        mu: Інтенсивність фази
        size: Кількість значень (None - одне число)

    Returns:
        Час або масив часів
    """
    if size is None:
        return float(rng.exponential(1.0 / mu, size=r).sum())
    return rng.exponential(1.0 / mu, size=(size, r)).sum(axis=1)


def coverage(analytic_L: float, result: SimResult) -> bool:
    """Чи потрапляє аналітичне L у довірчий інтервал симуляції"""
    return abs(analytic_L - result.L_hat) <= result.L_half_width


class QueueSimulation:
    """Клас для симуляції системи з c каналами, фазами Ерланга і обмеженою чергою FCFS"""

    def __init__(self, config: SimConfig):
        """
        Ініціалізація симуляції

        Args:
            config: Конфігурація симуляції
        """
        self.config = config
        self.params = config.params
        self.rng = make_rng(config.seed)
        self.env = simpy.Environment()

        self.channels = [False] * self.params.c
        self.queue: deque = deque()
        self.in_system = 0

        # Вікно вимірювання і батчі
        self.start = config.warmup
        self.end = config.warmup + config.horizon
        self.batch_length = config.horizon / config.batches
        self.occupancy = np.zeros((config.batches, self.params.capacity + 1))
        self.last_time = 0.0

        # Лічильники
        self.events = 0
        self.arrivals = 0
        self.blocked = 0

    def run(self) -> SimResult:
        """
        Запуск симуляції до кінця вікна вимірювання

        Returns:
            Результат симуляції
        """
        self.env.process(self._arrivals())
        self.env.run(until=self.end)
        self._advance(self.end)
        return self._summarize()

    def _arrivals(self):
        """Процес пуассонівських надходжень"""
        mean_gap = 1.0 / self.params.lambda_
        while True:
            yield self.env.timeout(self.rng.exponential(mean_gap))
            self._arrive()

    def _arrive(self) -> None:
        """Обробка надходження клієнта"""
        now = self.env.now
        self._advance(now)
        self.events += 1
        measured = now >= self.start
        if measured:
            self.arrivals += 1

        free = [i for i, busy in enumerate(self.channels) if not busy]
        if free:
            # Випадковий вибір серед вільних каналів
            channel = free[int(self.rng.integers(len(free)))]
            self.channels[channel] = True
            self.env.process(self._serve(channel))
            self.in_system += 1
        elif len(self.queue) < self.params.K:
            self.queue.append(now)
            self.in_system += 1
        else:
            # Черга повна, клієнт отримує відмову
            if measured:
                self.blocked += 1

        self._check_invariants()

    def _serve(self, channel: int):
        """Процес обслуговування в каналі"""
        yield self.env.timeout(sample_service_time(self.rng, self.params.r, self.params.mu))
        self._advance(self.env.now)
        self.events += 1
        self.in_system -= 1

        if self.queue:
            # FCFS: перший з черги займає звільнений канал
            self.queue.popleft()
            self.env.process(self._serve(channel))
        else:
            self.channels[channel] = False

        self._check_invariants()

    def _advance(self, now: float) -> None:
        """
        Накопичення часу перебування в поточному стані до моменту now
        з розбиттям по батчах вікна вимірювання

        Args:
            now: Поточний модельний час
        """
        t0 = max(self.last_time, self.start)
        t1 = min(now, self.end)
        n = self.in_system
        last_batch = self.config.batches - 1

        while t0 < t1:
            b = min(int((t0 - self.start) // self.batch_length), last_batch)
            boundary = self.end if b == last_batch else self.start + (b + 1) * self.batch_length
            if boundary <= t0:
                # Округлення на межі батчу
                b += 1
                boundary = self.end if b == last_batch else self.start + (b + 1) * self.batch_length
            segment_end = min(t1, boundary)
            self.occupancy[b, n] += segment_end - t0
            t0 = segment_end

        self.last_time = now

    def _check_invariants(self) -> None:
        """Перевірка припущень моделі після кожної події"""
        busy = sum(self.channels)
        waiting = len(self.queue)
        if busy > self.params.c or waiting > self.params.K:
            raise SimulationInvariantError(f"Зайнято {busy} каналів, у черзі {waiting}")
        if waiting > 0 and busy < self.params.c:
            raise SimulationInvariantError(f"У черзі {waiting} клієнтів при {busy} зайнятих каналах")
        if self.in_system != busy + waiting:
            raise SimulationInvariantError(f"У системі {self.in_system}, а зайнято {busy} + черга {waiting}")

    def _summarize(self) -> SimResult:
        """Оцінки методом батчів"""
        batches = self.config.batches
        batch_p = self.occupancy / self.occupancy.sum(axis=1, keepdims=True)
        n = np.arange(self.params.capacity + 1)
        batch_L = batch_p @ n

        p_hat = self.occupancy.sum(axis=0) / self.occupancy.sum()
        L_hat = float(p_hat @ n)

        quantile = scipy.stats.t.ppf(0.5 + CONFIDENCE / 2, batches - 1)
        half_widths = quantile * batch_p.std(axis=0, ddof=1) / np.sqrt(batches)
        L_half_width = float(quantile * batch_L.std(ddof=1) / np.sqrt(batches))

        return SimResult(
            p_hat=p_hat,
            L_hat=L_hat,
            half_widths=half_widths,
            L_half_width=L_half_width,
            events=self.events,
            arrivals=self.arrivals,
            blocked=self.blocked,
            seed=self.config.seed,
        )


def simulate(config: SimConfig) -> SimResult:
    """
    Симуляція системи за конфігурацією

    Args:
        config: Конфігурація симуляції

    Returns:
        Результат з довірчими інтервалами
    """
    result = QueueSimulation(config).run()
    logger.log_simulation(config.seed, result.events, result.L_hat, result.L_half_width)
    return result

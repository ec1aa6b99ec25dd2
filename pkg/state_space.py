"""
Модуль простору станів системи M/E_r/c/K
"""
import math
from dataclasses import dataclass
from typing import Dict, Iterator, List, Sequence, Tuple

import numpy as np

from exceptions import InvalidParamsError, QueueModelError, StateCountOverflowError
from input_validator import params_validator
from logger import logger

# Стан (s0, s1, ..., sr): довжина черги і кількість клієнтів у кожній фазі
StateVector = Tuple[int, ...]

# Індекси станів зберігаються в int64
MAX_STATE_COUNT = int(np.iinfo(np.int64).max)


@dataclass(frozen=True)
class QueueParams:
    """Параметри системи M/E_r/c/K"""

    lambda_: float  # інтенсивність надходження
    mu: float  # інтенсивність однієї фази на клієнта
    r: int  # порядок Ерланга
    c: int  # канали
    K: int  # максимальна довжина черги (без тих, хто обслуговується)

    def __post_init__(self):
        validation = params_validator.validate_queue_params(self.lambda_, self.mu, self.r, self.c, self.K)
        if not validation["valid"]:
            raise InvalidParamsError(validation["message"])

    @property
    def rho(self) -> float:
        """Щільність трафіку на канал lambda*r/(mu*c)"""
        return self.lambda_ * self.r / (self.mu * self.c)

    @property
    def offered_load(self) -> float:
        """Запропоноване навантаження lambda*r/mu (середня кількість зайнятих каналів без втрат)"""
        return self.lambda_ * self.r / self.mu

    @property
    def capacity(self) -> int:
        """Максимальна кількість клієнтів у системі"""
        return self.c + self.K

    def scaled(self, factor: float) -> "QueueParams":
        """Ті самі параметри з lambda і mu, помноженими на factor"""
        return QueueParams(self.lambda_ * factor, self.mu * factor, self.r, self.c, self.K)

    def to_dict(self) -> Dict[str, float]:
        """Словник параметрів для виводу"""
        return {
            "lambda": self.lambda_,
            "mu": self.mu,
            "r": self.r,
            "c": self.c,
            "K": self.K,
            "rho": self.rho,
        }


def validate_state(state: Sequence[int], params: QueueParams) -> bool:
    """
    Перевірка інваріантів вектора стану

    Args:
        state: Вектор (s0, s1, ..., sr)
        params: Параметри системи

    Returns:
        True якщо стан допустимий
    """
    if len(state) != params.r + 1:
        return False
    if any(not isinstance(s, (int, np.integer)) or s < 0 for s in state):
        return False
    s0, busy = state[0], sum(state[1:])
    if s0 > params.K or busy > params.c:
        return False
    # Клієнти чекають тільки коли всі канали зайняті
    if s0 > 0 and busy != params.c:
        return False
    return True


def _phase_vectors(r: int, c: int) -> Iterator[StateVector]:
    """
    Всі вектори (s1..sr) з сумою <= c у порядку лічильника
    (s1 змінюється найшвидше, sr найповільніше), як у алгоритмі початкового заповнення

    Args:
        r: Кількість фаз
        c: Кількість каналів

    Yields:
        Вектори фаз
    """
    def bounded(length: int, budget: int) -> Iterator[Tuple[int, ...]]:
        # Лексикографічний порядок за (sr, ..., s1)
        if length == 0:
            yield ()
            return
        for head in range(budget + 1):
            for tail in bounded(length - 1, budget - head):
                yield (head,) + tail

    for reversed_vector in bounded(r, c):
        yield tuple(reversed(reversed_vector))


class StateSpace:
    """Впорядкований і проіндексований простір станів"""

    def __init__(self, params: QueueParams, states: Sequence[StateVector]):
        """
        Ініціалізація простору станів

        Args:
            params: Параметри системи
            states: Стани у фіксованому порядку
        """
        self.params = params
        self.states: Tuple[StateVector, ...] = tuple(tuple(int(s) for s in state) for state in states)
        self.index: Dict[StateVector, int] = {state: k for k, state in enumerate(self.states)}

        if len(self.index) != len(self.states):
            raise InvalidParamsError("Простір станів містить дублікати")

        customers = np.fromiter((state[0] + sum(state[1:]) for state in self.states),
                                dtype=np.int64, count=len(self.states))
        customers.flags.writeable = False
        self.customers = customers

    def __len__(self) -> int:
        return len(self.states)

    def __iter__(self) -> Iterator[StateVector]:
        return iter(self.states)

    def __getitem__(self, k: int) -> StateVector:
        return self.states[k]

    def __contains__(self, state: object) -> bool:
        return state in self.index

    @property
    def empty_index(self) -> int:
        """Індекс порожнього стану (0, ..., 0)"""
        return self.index[(0,) * (self.params.r + 1)]

    def index_of(self, state: Sequence[int]) -> int:
        """
        Порядковий номер стану

        Args:
            state: Вектор стану

        Returns:
            Індекс у 0..N-1
        """
        return self.index[tuple(state)]

    def format_table(self) -> List[str]:
        """
        Текстова таблиця станів для команди states

        Returns:
            Рядки таблиці
        """
        r = self.params.r
        header = ["#", "s0"] + [f"s{i}" for i in range(1, r + 1)] + ["n"]
        width = max(len(str(len(self.states))), len(str(self.params.capacity)), 3)
        lines = [" ".join(col.rjust(width) for col in header)]
        for k, state in enumerate(self.states):
            row = [str(k)] + [str(s) for s in state] + [str(self.customers[k])]
            lines.append(" ".join(col.rjust(width) for col in row))
        return lines


def enumerate_states(params: QueueParams) -> StateSpace:
    """
    Перелік усіх станів системи

    Спочатку стани з s0 = 0 і сумою фаз <= c у порядку лічильника
    (включно з порожнім), потім K блоків очікування: для j = 1..K
    кожен стан з сумою фаз = c з s0 = j.

    Args:
        params: Параметри системи

    Returns:
        Простір станів
    """
    expected = state_count(params.r, params.c, params.K)

    states: List[StateVector] = []
    full: List[StateVector] = []
    for phases in _phase_vectors(params.r, params.c):
        states.append((0,) + phases)
        if sum(phases) == params.c:
            full.append(phases)

    for j in range(1, params.K + 1):
        states.extend((j,) + phases for phases in full)

    space = StateSpace(params, states)
    if len(space) != expected:
        raise QueueModelError(
            f"Перелічено {len(space)} станів, а формула дає {expected}"
        )

    logger.log_state_space(params.r, params.c, params.K, len(space))
    return space


def state_count(r: int, c: int, K: int) -> int:
    """
    Кількість станів: 1 + sum_{i=1..c} C(i+r-1, i) + K*C(c+r-1, c)

    Args:
        r: Порядок Ерланга
        c: Кількість каналів
        K: Максимальна довжина черги

    Returns:
        N
    """
    validation = params_validator.validate_dimensions(r, c, K)
    if not validation["valid"]:
        raise InvalidParamsError(validation["message"])

    idle_block = 1 + sum(math.comb(i + r - 1, i) for i in range(1, c + 1))
    waiting_block = K * math.comb(c + r - 1, c)
    total = idle_block + waiting_block

    if total > MAX_STATE_COUNT:
        raise StateCountOverflowError(
            f"Кількість станів для r={r} c={c} K={K} перевищує {MAX_STATE_COUNT}"
        )
    return total


def state_count_closed_form(r: int, c: int) -> int:
    """
    Замкнена форма для K = 1: (c+2r)/r * C(c+r-1, c)

    Args:
        r: Порядок Ерланга
        c: Кількість каналів

    Returns:
        N для K = 1
    """
    validation = params_validator.validate_dimensions(r, c, 1)
    if not validation["valid"]:
        raise InvalidParamsError(validation["message"])

    numerator = (c + 2 * r) * math.comb(c + r - 1, c)
    quotient, remainder = divmod(numerator, r)
    if remainder:
        raise ArithmeticError(f"(c+2r)*C(c+r-1,c) не ділиться на r для r={r} c={c}")
    return quotient

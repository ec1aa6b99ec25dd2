"""
Винятки розв'язувача M/E_r/c/K
"""
from typing import Optional, Tuple


class QueueModelError(Exception):
    """Базовий виняток для всіх помилок моделі"""


class InvalidParamsError(QueueModelError, ValueError):
    """Невірні параметри системи, конфігурації або симуляції"""


class StateCountOverflowError(QueueModelError, OverflowError):
    """Кількість станів не вміщується в індексний тип"""


class MissingStateError(QueueModelError, LookupError):
    """Цільовий стан переходу відсутній в індексі простору станів"""

    def __init__(self, source: Tuple[int, ...], rule: int, target: Tuple[int, ...]):
        self.source = source
        self.rule = rule
        self.target = target
        super().__init__(
            f"Стан {target} відсутній в індексі | Джерело: {source} | Правило: {rule}"
        )


class NumericalError(QueueModelError, ArithmeticError):
    """Чисельна помилка під час розв'язання"""


class ConvergenceError(NumericalError):
    """Ітераційний метод не збігся за дозволену кількість кроків"""

    def __init__(self, method: str, iterations: int, last_diff: float):
        self.method = method
        self.iterations = iterations
        self.last_diff = last_diff
        super().__init__(
            f"Метод {method} не збігся за {iterations} ітерацій | Остання різниця: {last_diff:.3e}"
        )


class ReducibleChainError(NumericalError):
    """Ланцюг звідний або періодичний, стаціонарний розподіл не єдиний"""


class SingularSystemError(NumericalError):
    """Лінійна система для pi виявилась виродженою"""


class ResidualError(NumericalError):
    """Нев'язка ||pi Q|| перевищує допуск"""


class SolverDisagreementError(NumericalError):
    """Незалежні методи дали різні стаціонарні розподіли"""

    def __init__(self, gaps: dict, tolerance: float, detail: Optional[str] = None):
        self.gaps = gaps
        self.tolerance = tolerance
        text = ", ".join(f"{pair}: {gap:.3e}" for pair, gap in gaps.items())
        message = f"Розбіжність методів перевищує {tolerance:.1e} | {text}"
        if detail:
            message += f" | {detail}"
        super().__init__(message)


class SimulationInvariantError(QueueModelError):
    """Порушено припущення моделі під час симуляції"""


class UsageError(QueueModelError):
    """Невірні або суперечливі прапорці командного рядка"""

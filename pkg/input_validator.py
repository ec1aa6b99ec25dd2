"""
Модуль для валідації вхідних даних
"""
import math
import numbers
from typing import Dict, Any, Optional

from logger import logger


class ParamsValidator:
    """Клас для валідації параметрів системи, розв'язувача та симуляції"""

    def __init__(self):
        """Ініціалізація валідатора"""
        # Налаштування
        self.max_dense_states = 5000  # Практична межа для щільних методів
        self.max_seed = 2 ** 64 - 1  # Seed генератора PCG64
        self.min_batches = 2  # Мінімум батчів для довірчого інтервалу

    def validate_queue_params(self, lambda_: float, mu: float, r: int, c: int, K: int) -> Dict[str, Any]:
        """
        Валідація параметрів системи M/E_r/c/K

        Args:
            lambda_: Інтенсивність надходження
            mu: Інтенсивність проходження однієї фази
            r: Порядок розподілу Ерланга
            c: Кількість каналів обслуговування
            K: Максимальна довжина черги

        Returns:
            Результат валідації
        """
        for name, value in (("lambda", lambda_), ("mu", mu)):
            result = self._check_positive_real(name, value)
            if not result["valid"]:
                return result

        result = self.validate_dimensions(r, c, K)
        if not result["valid"]:
            return result

        return {
            "valid": True,
            "message": "Параметри системи валідні"
        }

    def validate_dimensions(self, r: int, c: int, K: int) -> Dict[str, Any]:
        """
        Валідація цілочисельних розмірів системи

        Args:
            r: Порядок розподілу Ерланга (>= 1)
            c: Кількість каналів (>= 1)
            K: Максимальна довжина черги (>= 0)

        Returns:
            Результат валідації
        """
        for name, value, minimum in (("r", r, 1), ("c", c, 1), ("K", K, 0)):
            result = self._check_integer(name, value, minimum)
            if not result["valid"]:
                return result

        return {
            "valid": True,
            "message": "Розміри системи валідні"
        }

    def validate_rho(self, rho: float, mu: float) -> Dict[str, Any]:
        """
        Валідація щільності трафіку на канал

        Args:
            rho: Щільність трафіку
            mu: Інтенсивність фази

        Returns:
            Результат валідації
        """
        result = self._check_positive_real("rho", rho)
        if not result["valid"]:
            return result
        return self._check_positive_real("mu", mu)

    def validate_time_step(self, h: float) -> Dict[str, Any]:
        """Валідація кроку часу для exp(hQ)"""
        return self._check_positive_real("h", h)

    def validate_solver_config(self, delta: float, residual_tol: float, max_squarings: int,
                               max_iterations: int, uniformization_factor: float,
                               h: Optional[float] = None) -> Dict[str, Any]:
        """
        Валідація конфігурації розв'язувача

        Args:
            delta: Поріг збіжності
            residual_tol: Допуск нев'язки ||pi Q||
            max_squarings: Максимум піднесень до квадрату
            max_iterations: Максимум ітерацій рівномірізації
            uniformization_factor: Множник для Lambda = factor * max|q_ii|
            h: Крок часу або None

        Returns:
            Результат валідації
        """
        for name, value in (("delta", delta), ("residual_tol", residual_tol)):
            result = self._check_positive_real(name, value)
            if not result["valid"]:
                return result

        for name, value in (("max_squarings", max_squarings), ("max_iterations", max_iterations)):
            result = self._check_integer(name, value, 1)
            if not result["valid"]:
                return result

        if not self._is_real(uniformization_factor) or not uniformization_factor > 1.0:
            logger.log_error(f"Невірний множник рівномірізації: {uniformization_factor}")
            return {
                "valid": False,
                "message": f"uniformization_factor повинен бути > 1, отримано {uniformization_factor}"
            }

        if h is not None:
            return self.validate_time_step(h)

        return {
            "valid": True,
            "message": "Конфігурація розв'язувача валідна"
        }

    def validate_sim_config(self, horizon: float, warmup: float, batches: int, seed: int) -> Dict[str, Any]:
        """
        Валідація конфігурації симуляції

        Args:
            horizon: Тривалість вимірювання
            warmup: Тривалість розігріву
            batches: Кількість батчів
            seed: Seed генератора

        Returns:
            Результат валідації
        """
        result = self._check_positive_real("horizon", horizon)
        if not result["valid"]:
            return result

        if not self._is_real(warmup) or warmup < 0 or not math.isfinite(warmup):
            logger.log_error(f"Невірний розігрів: {warmup}")
            return {
                "valid": False,
                "message": f"warmup повинен бути скінченним і >= 0, отримано {warmup}"
            }

        result = self._check_integer("batches", batches, self.min_batches)
        if not result["valid"]:
            return result

        result = self._check_integer("seed", seed, 0)
        if not result["valid"]:
            return result
        if seed > self.max_seed:
            return {
                "valid": False,
                "message": f"seed повинен вміщуватись у 64 біти, отримано {seed}"
            }

        return {
            "valid": True,
            "message": "Конфігурація симуляції валідна"
        }

    def validate_dense_size(self, n_states: int) -> Dict[str, Any]:
        """
        Перевірка розміру для щільних методів

        Args:
            n_states: Кількість станів

        Returns:
            Результат перевірки (valid=False означає тільки попередження)
        """
        if n_states > self.max_dense_states:
            return {
                "valid": False,
                "message": f"N={n_states} перевищує практичну межу {self.max_dense_states} для щільних методів",
                "max_states": self.max_dense_states
            }
        return {
            "valid": True,
            "message": "Розмір прийнятний"
        }

    def _check_positive_real(self, name: str, value: Any) -> Dict[str, Any]:
        """
        Перевірка що значення є скінченним дійсним числом > 0

        Args:
            name: Назва параметра
            value: Значення

        Returns:
            Результат перевірки
        """
        if not self._is_real(value) or not math.isfinite(value) or value <= 0:
            logger.log_error(f"Невірне значення {name}: {value}")
            return {
                "valid": False,
                "message": f"{name} повинен бути скінченним і > 0, отримано {value}"
            }
        return {
            "valid": True,
            "message": f"{name} валідний"
        }

    def _check_integer(self, name: str, value: Any, minimum: int) -> Dict[str, Any]:
        """
        Перевірка що значення є цілим числом не менше minimum

        Args:
            name: Назва параметра
            value: Значення
            minimum: Мінімально допустиме значення

        Returns:
            Результат перевірки
        """
        if isinstance(value, bool) or not isinstance(value, numbers.Integral):
            logger.log_error(f"{name} не є цілим числом: {value!r}")
            return {
                "valid": False,
                "message": f"{name} повинен бути цілим числом, отримано {value!r}"
            }
        if value < minimum:
            logger.log_error(f"Невірне значення {name}: {value}")
            return {
                "valid": False,
                "message": f"{name} повинен бути >= {minimum}, отримано {value}"
            }
        return {
            "valid": True,
            "message": f"{name} валідний"
        }

    @staticmethod
    def _is_real(value: Any) -> bool:
        """Перевірка що значення є дійсним числом (не bool)"""
        return isinstance(value, numbers.Real) and not isinstance(value, bool)


# Глобальний екземпляр валідатора
params_validator = ParamsValidator()

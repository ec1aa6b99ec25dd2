"""
Модуль логування для розв'язувача M/E_r/c/K
"""
import logging
import os
from typing import Optional

from dotenv import load_dotenv

# Тільки службові налаштування, чисельні параметри задаються прапорцями
load_dotenv("config.env")

LOG_LEVEL = os.getenv("ERLANG_LOG_LEVEL", "INFO")
LOG_FILE = os.getenv("ERLANG_LOG_FILE", "")


class SolverLogger:
    """Клас для логування дій розв'язувача"""

    def __init__(self, log_file: Optional[str] = None, log_level: str = "INFO"):
        """
        Ініціалізація логера

        Args:
            log_file: Шлях до файлу логів (None або порожній рядок - тільки консоль)
            log_level: Рівень логування
        """
        self.log_file = log_file or None
        self.logger = logging.getLogger("erlang_queue")
        self.logger.setLevel(getattr(logging, log_level.upper(), logging.INFO))
        self.logger.propagate = False

        # Хендлери додаються один раз на процес
        if self.logger.handlers:
            return

        # Налаштування форматування
        formatter = logging.Formatter(
            '[%(asctime)s] %(levelname)s: %(message)s',
            datefmt='%Y-%m-%d %H:%M:%S'
        )

        # Файловий хендлер
        if self.log_file:
            file_handler = logging.FileHandler(self.log_file, encoding='utf-8')
            file_handler.setFormatter(formatter)
            self.logger.addHandler(file_handler)

        # Консольний хендлер (stderr, stdout лишається для результатів)
        console_handler = logging.StreamHandler()
        console_handler.setFormatter(formatter)
        self.logger.addHandler(console_handler)

    def log_state_space(self, r: int, c: int, K: int, n_states: int) -> None:
        """Логування побудови простору станів"""
        self.logger.info(f"Простір станів | r={r} c={c} K={K} | Станів: {n_states}")

    def log_generator(self, n_states: int, nnz: int, max_exit_rate: float) -> None:
        """Логування побудови генератора Q"""
        self.logger.info(f"Генератор Q | Розмір: {n_states}x{n_states} | Ненульових: {nnz} | max|q_ii|: {max_exit_rate:.6g}")

    def log_transition_matrix(self, h: float, squarings: int, taylor_terms: int) -> None:
        """Логування обчислення exp(hQ)"""
        self.logger.debug(f"exp(hQ) | h={h:.6g} | Піднесень до квадрату: {squarings} | Членів ряду: {taylor_terms}")

    def log_probability_clamp(self, clamped: float, adjustment: float) -> None:
        """Логування відсікання від'ємних ймовірностей"""
        self.logger.debug(f"Корекція exp(hQ) | Відсічено: {clamped:.3e} | Перенормування: {adjustment:.3e}")

    def log_squaring_step(self, step: int, diff: float) -> None:
        """Логування кроку ітеративного піднесення до квадрату"""
        self.logger.debug(f"Крок {step} | max|P_new - P_old| = {diff:.3e}")

    def log_solver_converged(self, method: str, iterations: int, residual: float, elapsed: float) -> None:
        """Логування успішного розв'язання"""
        self.logger.info(f"Метод: {method} | Ітерацій: {iterations} | Нев'язка: {residual:.3e} | Час: {elapsed:.3f}с")

    def log_convergence_failure(self, method: str, iterations: int, last_diff: float) -> None:
        """Логування відсутності збіжності"""
        self.logger.error(f"НЕМАЄ ЗБІЖНОСТІ | Метод: {method} | Ітерацій: {iterations} | Остання різниця: {last_diff:.3e}")

    def log_solver_disagreement(self, gaps: dict, tolerance: float) -> None:
        """Логування розбіжності методів"""
        text = ", ".join(f"{pair}={gap:.3e}" for pair, gap in gaps.items())
        self.logger.error(f"РОЗБІЖНІСТЬ МЕТОДІВ | Допуск: {tolerance:.1e} | {text}")

    def log_dense_size_warning(self, n_states: int, bound: int, method: str) -> None:
        """Логування завеликої щільної матриці"""
        self.logger.warning(f"ВЕЛИКА МАТРИЦЯ | Станів: {n_states} > {bound} | Метод: {method} | Рекомендовано: uniform")

    def log_simulation(self, seed: int, events: int, L_hat: float, half_width: float) -> None:
        """Логування завершення симуляції"""
        self.logger.info(f"Симуляція | Seed: {seed} | Подій: {events} | L = {L_hat:.4f} ± {half_width:.4f}")

    def log_table_cell(self, r: int, c: int, K: int, rho: float, L: float) -> None:
        """Логування клітинки таблиці"""
        self.logger.info(f"Таблиця M|E_{r}|{c}|{K} | rho={rho} | L={L:.4f}")

    def log_table_cell_failure(self, r: int, c: int, K: int, rho: float, error: str) -> None:
        """Логування помилки в клітинці таблиці"""
        self.logger.error(f"Таблиця M|E_{r}|{c}|{K} | rho={rho} | Помилка: {error}")

    def log_bench_cell(self, r: int, K: int, n_states: int, elapsed: float) -> None:
        """Логування клітинки бенчмарку"""
        self.logger.info(f"Бенчмарк | r={r} K={K} | Станів: {n_states} | Час: {elapsed:.3f}с")

    def log_info(self, message: str) -> None:
        """Логування інформаційних повідомлень"""
        self.logger.info(message)

    def log_warning(self, message: str) -> None:
        """Логування попереджень"""
        self.logger.warning(message)

    def log_error(self, error: str, context: Optional[str] = None) -> None:
        """Логування помилок"""
        if context:
            self.logger.error(f"{context} | Помилка: {error}")
        else:
            self.logger.error(f"Помилка: {error}")


# Глобальний екземпляр логера
logger = SolverLogger(LOG_FILE, LOG_LEVEL)

"""
Модуль побудови інфінітезимального генератора Q
"""
from typing import Iterator, List, Tuple

import numpy as np
import scipy.sparse
from scipy.sparse.csgraph import connected_components

from exceptions import MissingStateError, NumericalError
from logger import logger
from state_space import QueueParams, StateSpace, StateVector

# Допуск на суму рядка відносно max|q_ii|
ROW_SUM_TOLERANCE = 1e-12


class GeneratorMatrix:
    """Розріджена матриця інтенсивностей Q (CSR, впорядкована як простір станів)"""

    def __init__(self, matrix: scipy.sparse.spmatrix):
        """
        Ініціалізація генератора

        Args:
            matrix: Квадратна розріджена матриця інтенсивностей
        """
        matrix = scipy.sparse.csr_matrix(matrix, dtype=np.float64)
        matrix.sum_duplicates()
        matrix.sort_indices()
        if matrix.shape[0] != matrix.shape[1]:
            raise NumericalError(f"Генератор не квадратний: {matrix.shape}")
        self.matrix = matrix
        self.n = matrix.shape[0]

    @property
    def nnz(self) -> int:
        """Кількість збережених елементів"""
        return int(self.matrix.nnz)

    @property
    def diagonal(self) -> np.ndarray:
        """Діагональ q_ii"""
        return self.matrix.diagonal()

    @property
    def max_exit_rate(self) -> float:
        """max|q_ii|"""
        if self.n == 0:
            return 0.0
        return float(np.max(-self.diagonal))

    def toarray(self) -> np.ndarray:
        """Щільна копія Q"""
        return self.matrix.toarray()

    def entries(self) -> Iterator[Tuple[int, int, float]]:
        """
        Елементи (рядок, стовпець, інтенсивність) за зростанням рядка і стовпця

        Yields:
            Трійки елементів
        """
        indptr, indices, data = self.matrix.indptr, self.matrix.indices, self.matrix.data
        for row in range(self.n):
            for pos in range(indptr[row], indptr[row + 1]):
                yield row, int(indices[pos]), float(data[pos])

    def row_sums(self) -> np.ndarray:
        """Суми рядків (мають бути нульовими)"""
        return np.asarray(self.matrix.sum(axis=1)).ravel()

    def check(self) -> None:
        """Перевірка інваріантів: нульові суми рядків, знаки елементів"""
        scale = max(self.max_exit_rate, 1.0)
        worst = float(np.max(np.abs(self.row_sums()))) if self.n else 0.0
        if worst > ROW_SUM_TOLERANCE * scale:
            raise NumericalError(f"Сума рядка Q відхиляється від нуля на {worst:.3e}")

        coo = self.matrix.tocoo()
        off = coo.row != coo.col
        if np.any(coo.data[off] < 0):
            raise NumericalError("Q містить від'ємні позадіагональні елементи")
        if np.any(self.diagonal > 0):
            raise NumericalError("Q містить додатні діагональні елементи")

    def is_irreducible(self) -> bool:
        """
        Перевірка незвідності (граф переходів сильно зв'язний)

        Returns:
            True якщо ланцюг незвідний
        """
        if self.n <= 1:
            return True
        n_components, _ = connected_components(self.matrix, directed=True, connection='strong')
        return n_components == 1

    def to_coordinate_text(self) -> str:
        """
        Дамп Q у координатному форматі `row col rate`, рядки за зростанням

        Returns:
            Текст дампу
        """
        return "".join(f"{row} {col} {rate!r}\n" for row, col, rate in self.entries())


def _transitions(state: StateVector, params: QueueParams) -> Iterator[Tuple[int, StateVector, float]]:
    """
    Переходи зі стану за чотирма правилами

    Args:
        state: Вихідний стан
        params: Параметри системи

    Yields:
        (номер правила, цільовий стан, інтенсивність)
    """
    r, c, K = params.r, params.c, params.K
    s0 = state[0]
    busy = sum(state[1:])

    # 1. Вільний канал, клієнт починає фазу 1
    if s0 == 0 and busy < c:
        target = list(state)
        target[1] += 1
        yield 1, tuple(target), params.lambda_

    # 2. Всі канали зайняті, клієнт стає в чергу
    if s0 < K and busy == c:
        yield 2, (s0 + 1,) + tuple(state[1:]), params.lambda_

    # 3. Перехід з фази i до фази i+1
    for i in range(1, r):
        if state[i] > 0:
            target = list(state)
            target[i] -= 1
            target[i + 1] += 1
            yield 3, tuple(target), state[i] * params.mu

    # 4. Завершення останньої фази, перший з черги починає фазу 1
    if state[r] > 0:
        target = list(state)
        target[r] -= 1
        if s0 > 0:
            target[0] -= 1
            target[1] += 1
        yield 4, tuple(target), state[r] * params.mu


def build_generator(params: QueueParams, space: StateSpace) -> GeneratorMatrix:
    """
    Побудова генератора Q за правилами переходів

    Args:
        params: Параметри системи
        space: Простір станів, побудований з тих самих параметрів

    Returns:
        Генератор Q
    """
    n = len(space)
    rows: List[int] = []
    cols: List[int] = []
    rates: List[float] = []

    for k, state in enumerate(space.states):
        for rule, target, rate in _transitions(state, params):
            j = space.index.get(target)
            if j is None:
                logger.log_error(f"Стан {target} не знайдено", context=f"Правило {rule} зі стану {state}")
                raise MissingStateError(state, rule, target)
            rows.append(k)
            cols.append(j)
            rates.append(rate)

    off_count = len(rates)
    exit_rates = np.bincount(np.asarray(rows, dtype=np.int64),
                             weights=np.asarray(rates, dtype=np.float64), minlength=n)

    # Діагональ q_ii = -sum_{j != i} q_ij
    diag_index = np.arange(n, dtype=np.int64)
    all_rows = np.concatenate([np.asarray(rows, dtype=np.int64), diag_index])
    all_cols = np.concatenate([np.asarray(cols, dtype=np.int64), diag_index])
    all_rates = np.concatenate([np.asarray(rates, dtype=np.float64), -exit_rates])

    coo = scipy.sparse.coo_matrix((all_rates, (all_rows, all_cols)), shape=(n, n))
    generator = GeneratorMatrix(coo)

    # Кожна пара (row, col) зустрічається один раз, нульові виходи лишаються явними нулями діагоналі
    if generator.nnz != off_count + n:
        raise NumericalError(
            f"Дубльовані елементи генератора: очікувалось {off_count + n}, отримано {generator.nnz}"
        )

    generator.check()
    logger.log_generator(n, generator.nnz, generator.max_exit_rate)
    return generator

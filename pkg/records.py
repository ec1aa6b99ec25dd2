"""
Записи результатів: JSON для окремих розв'язків і CSV для таблиць L(K, rho)
"""
import csv
import io
import json
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence

from exceptions import InvalidParamsError
from logger import logger

ERROR_MARKER = "ERR"


@dataclass
class OutputRecord:
    """Результат розв'язання одного екземпляра"""

    params: Dict[str, Any]
    method: str
    n_states: int
    p: List[float] = field(default_factory=list)
    measures: Dict[str, float] = field(default_factory=dict)
    residual: Optional[float] = None
    wall_time: Optional[float] = None
    error: Optional[str] = None

    @classmethod
    def from_outcome(cls, outcome) -> "OutputRecord":
        """
        Створення запису з результату solve_queue

        Args:
            outcome: SolveOutcome

        Returns:
            Запис з повною точністю значень
        """
        return cls(
            params=outcome.params.to_dict(),
            method=outcome.method,
            n_states=len(outcome.space),
            p=[float(x) for x in outcome.aggregated.p],
            measures=outcome.measures.to_dict(),
            residual=float(outcome.distribution.residual),
            wall_time=float(outcome.wall_time),
        )

    @classmethod
    def failed(cls, params: Dict[str, Any], method: str, error: str) -> "OutputRecord":
        """Запис для клітинки, де розв'язувач завершився помилкою"""
        return cls(params=params, method=method, n_states=0, error=error)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "OutputRecord":
        missing = {"params", "method", "n_states"} - set(data)
        if missing:
            raise InvalidParamsError(f"У записі бракує полів: {', '.join(sorted(missing))}")
        return cls(
            params=dict(data["params"]),
            method=data["method"],
            n_states=int(data["n_states"]),
            p=[float(x) for x in data.get("p", [])],
            measures={k: float(v) for k, v in data.get("measures", {}).items()},
            residual=data.get("residual"),
            wall_time=data.get("wall_time"),
            error=data.get("error"),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "OutputRecord":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise InvalidParamsError(f"Некоректний JSON запису: {e}") from e
        return cls.from_dict(data)


def save_records(path: str, records: Sequence[OutputRecord]) -> None:
    """
    Збереження записів у JSON файл

    Args:
        path: Шлях до файлу
        records: Записи
    """
    with open(path, "w", encoding="utf-8") as f:
        json.dump([record.to_dict() for record in records], f, ensure_ascii=False, indent=2)
    logger.log_info(f"Збережено {len(records)} записів у {path}")


def load_records(path: str) -> List[OutputRecord]:
    """
    Завантаження записів з JSON файлу

    Args:
        path: Шлях до файлу

    Returns:
        Список записів
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        logger.log_error(f"Некоректний JSON: {e}", path)
        raise InvalidParamsError(f"Некоректний JSON у {path}: {e}") from e

    if not isinstance(data, list):
        raise InvalidParamsError(f"Очікувався список записів у {path}")
    return [OutputRecord.from_dict(item) for item in data]


def format_table_csv(rhos: Sequence[float], ks: Sequence[int], grid: Sequence[Sequence[Optional[float]]],
                     decimals: int = 3) -> str:
    """
    Таблиця L: заголовок K,<rho...>, рядок на кожне K

    Args:
        rhos: Значення rho (стовпці)
        ks: Значення K (рядки)
        grid: grid[i][j] = L для ks[i], rhos[j]; None - помилка
        decimals: Кількість знаків після коми

    Returns:
        Текст CSV
    """
    if len(grid) != len(ks) or any(len(row) != len(rhos) for row in grid):
        raise InvalidParamsError(f"Розмір сітки не відповідає {len(ks)} x {len(rhos)}")

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["K"] + [f"{rho:g}" for rho in rhos])
    for K, row in zip(ks, grid):
        writer.writerow([K] + [ERROR_MARKER if value is None else f"{value:.{decimals}f}" for value in row])
    return buffer.getvalue()


def parse_table_csv(text: str) -> Dict[str, Any]:
    """
    Розбір таблиці, створеної format_table_csv

    Args:
        text: Текст CSV

    Returns:
        Словник з ключами rhos, ks, grid (None для ERR)
    """
    rows = [row for row in csv.reader(io.StringIO(text)) if row]
    if not rows or rows[0][0] != "K":
        raise InvalidParamsError("Таблиця має починатися з заголовка K,<rho...>")

    rhos = [float(x) for x in rows[0][1:]]
    ks: List[int] = []
    grid: List[List[Optional[float]]] = []
    for row in rows[1:]:
        if len(row) != len(rhos) + 1:
            raise InvalidParamsError(f"Рядок K={row[0]} має {len(row) - 1} значень замість {len(rhos)}")
        ks.append(int(row[0]))
        grid.append([None if cell == ERROR_MARKER else float(cell) for cell in row[1:]])
    return {"rhos": rhos, "ks": ks, "grid": grid}

#!/usr/bin/env python3
"""
Командний рядок: розв'язання M/E_r/c/K, таблиці L(K, rho), бенчмарк, симуляція і перелік станів
"""
import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from exceptions import InvalidParamsError, QueueModelError, UsageError
from logger import logger
from measures import params_from_rho
from pipeline import solve_queue
from records import OutputRecord, format_table_csv, save_records
from simulation import DEFAULT_BATCHES, SimConfig, coverage, simulate
from solver import DEFAULT_DELTA, METHOD_SQUARING, METHODS, SolverConfig
from state_space import QueueParams, enumerate_states, state_count

# Сітка довідкових таблиць
TABLE_RHOS = (0.1, 0.3, 0.5, 0.7, 0.8, 0.9, 0.95, 0.98, 0.99)
TABLE_KS = (1, 3, 6, 8, 10)  # рядки друкованих таблиць з мітками 1, 3, 5, 7, 10

# Експеримент з часом обчислення
BENCH_RHO = 0.9
BENCH_C = 6
BENCH_RS = (2, 3, 4)
BENCH_KS = (1, 3, 6, 8, 10)

DEFAULT_MU = 1.0
DEFAULT_SIM_HORIZON = 1e6

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2


class QueueArgumentParser(argparse.ArgumentParser):
    """Парсер, що повертає код 1 для помилок використання"""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _emit(text: str, out: Optional[str]) -> None:
    """Вивід у файл або stdout"""
    if not text.endswith("\n"):
        text += "\n"
    if out:
        with open(out, "w", encoding="utf-8") as f:
            f.write(text)
        logger.log_info(f"Результат записано у {out}")
    else:
        sys.stdout.write(text)


def _params_from_args(args: argparse.Namespace, K: int) -> QueueParams:
    """
    Параметри системи з прапорців

    Args:
        args: Розібрані аргументи
        K: Максимальна довжина черги

    Returns:
        Параметри системи
    """
    if args.lambda_ is not None and args.rho is not None:
        raise UsageError("Вкажіть або --lambda, або --rho, але не обидва")
    if args.lambda_ is None and args.rho is None:
        raise UsageError("Потрібен --lambda або --rho")
    if args.rho is not None:
        return params_from_rho(args.rho, args.c, args.r, args.mu, K)
    return QueueParams(args.lambda_, args.mu, args.r, args.c, K)


def _map_cells(func: Callable, cells: Sequence, jobs: int) -> List:
    """Обчислення незалежних клітинок, порядок результатів збігається з порядком клітинок"""
    if jobs < 1:
        raise UsageError(f"--jobs має бути >= 1, отримано {jobs}")
    if jobs == 1:
        return [func(cell) for cell in cells]
    with ThreadPoolExecutor(max_workers=jobs) as executor:
        return list(executor.map(func, cells))


def cmd_solve(args: argparse.Namespace) -> int:
    """Команда solve: кроки 1-6 для одного екземпляра"""
    params = _params_from_args(args, args.K)
    config = SolverConfig(delta=args.delta)
    outcome = solve_queue(params, method=args.method, config=config, check_all=args.check_all)

    text = ""
    if args.dump_q:
        text += outcome.generator.to_coordinate_text()
    text += OutputRecord.from_outcome(outcome).to_json()
    _emit(text, args.out)
    return EXIT_OK


def cmd_table(args: argparse.Namespace) -> int:
    """Команда table: сітка L за K і rho у форматі довідкових таблиць"""
    config = SolverConfig(delta=args.delta)
    cells: List[Tuple[int, float, QueueParams]] = [
        (K, rho, params_from_rho(rho, args.c, args.r, args.mu, K))
        for K in args.K for rho in args.rho
    ]

    def solve_cell(cell: Tuple[int, float, QueueParams]) -> OutputRecord:
        K, rho, params = cell
        try:
            outcome = solve_queue(params, method=args.method, config=config, check_all=args.check_all)
        except QueueModelError as e:
            logger.log_table_cell_failure(args.r, args.c, K, rho, str(e))
            return OutputRecord.failed(params.to_dict(), args.method, str(e))
        logger.log_table_cell(args.r, args.c, K, rho, outcome.measures.L)
        return OutputRecord.from_outcome(outcome)

    records = _map_cells(solve_cell, cells, args.jobs)
    failures = sum(1 for record in records if record.error)

    if args.format == "json":
        if args.out:
            save_records(args.out, records)
        else:
            _emit(json.dumps([record.to_dict() for record in records], ensure_ascii=False, indent=2), None)
    else:
        width = len(args.rho)
        grid = [
            [None if record.error else record.measures["L"] for record in records[i * width:(i + 1) * width]]
            for i in range(len(args.K))
        ]
        _emit(format_table_csv(args.rho, args.K, grid), args.out)

    if failures:
        logger.log_warning(f"Таблиця M|E_{args.r}|{args.c}: {failures} клітинок з помилками")
        return EXIT_NUMERICAL
    return EXIT_OK


def _check_bench(rows: List[Dict[str, float]], c: int) -> None:
    """Кількість станів збігається з формулою і строго зростає за r і за K"""
    by_cell = {(row["r"], row["K"]): row for row in rows}
    rs = sorted({row["r"] for row in rows})
    ks = sorted({row["K"] for row in rows})

    for row in rows:
        expected = state_count(row["r"], c, row["K"])
        if row["n_states"] != expected:
            raise QueueModelError(f"r={row['r']} K={row['K']}: {row['n_states']} станів, формула дає {expected}")
        if row["wall_time"] <= 0:
            raise QueueModelError(f"r={row['r']} K={row['K']}: невірний час {row['wall_time']}")

    for r in rs:
        counts = [by_cell[(r, K)]["n_states"] for K in ks]
        if any(a >= b for a, b in zip(counts, counts[1:])):
            raise QueueModelError(f"Кількість станів не зростає з K при r={r}: {counts}")
    for K in ks:
        counts = [by_cell[(r, K)]["n_states"] for r in rs]
        if any(a >= b for a, b in zip(counts, counts[1:])):
            raise QueueModelError(f"Кількість станів не зростає з r при K={K}: {counts}")


def cmd_bench(args: argparse.Namespace) -> int:
    """Команда bench: час обчислення L для сітки r x K"""
    config = SolverConfig(delta=args.delta)
    cells = [(r, K) for r in sorted(set(args.r)) for K in sorted(set(args.K))]

    def run_cell(cell: Tuple[int, int]) -> Dict[str, float]:
        r, K = cell
        outcome = solve_queue(params_from_rho(args.rho, args.c, r, args.mu, K), method=args.method, config=config)
        logger.log_bench_cell(r, K, len(outcome.space), outcome.wall_time)
        return {"r": r, "K": K, "n_states": len(outcome.space), "wall_time": outcome.wall_time,
                "L": outcome.measures.L}

    rows = _map_cells(run_cell, cells, args.jobs)
    _check_bench(rows, args.c)

    if args.format == "json":
        _emit(json.dumps(rows, ensure_ascii=False, indent=2), args.out)
    else:
        lines = ["r,K,N,wall_time,L"]
        lines += [f"{row['r']},{row['K']},{row['n_states']},{row['wall_time']:.6f},{row['L']:.6f}" for row in rows]
        _emit("\n".join(lines), args.out)
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    """Команда simulate: симуляція з опційним порівнянням з аналітичним L"""
    params = _params_from_args(args, args.K)
    config = SimConfig(params=params, horizon=args.horizon, warmup=args.warmup, seed=args.seed,
                       batches=args.batches)
    result = simulate(config)

    record = {"params": params.to_dict(), "simulation": result.to_dict()}
    if args.compare:
        outcome = solve_queue(params, method=args.method, config=SolverConfig(delta=args.delta))
        record["analytic"] = {
            "method": args.method,
            "L": outcome.measures.L,
            "covered": coverage(outcome.measures.L, result),
        }
        if not record["analytic"]["covered"]:
            logger.log_warning(f"Аналітичне L={outcome.measures.L:.4f} поза довірчим інтервалом симуляції")

    _emit(json.dumps(record, ensure_ascii=False, indent=2), args.out)
    return EXIT_OK


def cmd_states(args: argparse.Namespace) -> int:
    """Команда states: перелік станів у порядку нумерації"""
    params = QueueParams(1.0, 1.0, args.r, args.c, args.K)
    space = enumerate_states(params)

    if args.format == "json":
        payload = {"r": args.r, "c": args.c, "K": args.K, "n_states": len(space),
                   "states": [list(state) for state in space]}
        _emit(json.dumps(payload, ensure_ascii=False, indent=2), args.out)
    else:
        lines = space.format_table() + [f"N = {len(space)}"]
        _emit("\n".join(lines), args.out)
    return EXIT_OK


def _add_dimensions(parser: argparse.ArgumentParser, many_k: bool = False) -> None:
    parser.add_argument("--r", type=int, required=True, help="порядок розподілу Ерланга")
    parser.add_argument("--c", type=int, required=True, help="кількість каналів")
    if many_k:
        parser.add_argument("--K", type=int, nargs="+", default=list(TABLE_KS), help="довжини черги")
    else:
        parser.add_argument("--K", type=int, required=True, help="максимальна довжина черги")


def _add_rates(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--lambda", dest="lambda_", type=float, help="інтенсивність надходження")
    parser.add_argument("--rho", type=float, help="щільність трафіку на канал")
    parser.add_argument("--mu", type=float, default=DEFAULT_MU, help="інтенсивність однієї фази")


def _add_solver(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--method", choices=METHODS, default=METHOD_SQUARING)
    parser.add_argument("--delta", type=float, default=DEFAULT_DELTA, help="поріг збіжності")


def build_parser() -> argparse.ArgumentParser:
    """
    Побудова парсера аргументів

    Returns:
        Парсер з підкомандами solve, table, simulate, bench, states
    """
    parser = QueueArgumentParser(prog="erlang-queue", description="Точний стаціонарний розв'язок M/E_r/c/K")
    commands = parser.add_subparsers(dest="command", required=True)

    solve = commands.add_parser("solve", help="розв'язати один екземпляр")
    _add_dimensions(solve)
    _add_rates(solve)
    _add_solver(solve)
    solve.add_argument("--dump-q", action="store_true", help="вивести генератор у форматі row col rate")
    solve.add_argument("--check-all", action="store_true", help="порівняти всі три методи")
    solve.add_argument("--out", help="файл результату")
    solve.set_defaults(handler=cmd_solve)

    table = commands.add_parser("table", help="таблиця L за K і rho")
    _add_dimensions(table, many_k=True)
    table.add_argument("--rho", type=float, nargs="+", default=list(TABLE_RHOS))
    table.add_argument("--mu", type=float, default=DEFAULT_MU)
    _add_solver(table)
    table.add_argument("--check-all", action="store_true")
    table.add_argument("--format", choices=("csv", "json"), default="csv")
    table.add_argument("--out")
    table.add_argument("--jobs", type=int, default=1)
    table.set_defaults(handler=cmd_table)

    bench = commands.add_parser("bench", help="час обчислення для сітки r x K")
    bench.add_argument("--rho", type=float, default=BENCH_RHO)
    bench.add_argument("--c", type=int, default=BENCH_C)
    bench.add_argument("--r", type=int, nargs="+", default=list(BENCH_RS))
    bench.add_argument("--K", type=int, nargs="+", default=list(BENCH_KS))
    bench.add_argument("--mu", type=float, default=DEFAULT_MU)
    _add_solver(bench)
    bench.add_argument("--format", choices=("csv", "json"), default="csv")
    bench.add_argument("--out")
    bench.add_argument("--jobs", type=int, default=1)
    bench.set_defaults(handler=cmd_bench)

    sim = commands.add_parser("simulate", help="дискретно-подійна симуляція")
    _add_dimensions(sim)
    _add_rates(sim)
    _add_solver(sim)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--horizon", type=float, default=DEFAULT_SIM_HORIZON)
    sim.add_argument("--warmup", type=float, default=None, help="за замовчуванням 10%% від horizon")
    sim.add_argument("--batches", type=int, default=DEFAULT_BATCHES)
    sim.add_argument("--compare", action="store_true", help="порівняти з аналітичним L")
    sim.add_argument("--out")
    sim.set_defaults(handler=cmd_simulate)

    states = commands.add_parser("states", help="перелік станів")
    _add_dimensions(states)
    states.add_argument("--format", choices=("text", "json"), default="text")
    states.add_argument("--out")
    states.set_defaults(handler=cmd_states)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Головна функція"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.handler(args)
    except (UsageError, InvalidParamsError) as e:
        logger.log_error(str(e), "Параметри")
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_USAGE
    except QueueModelError as e:
        logger.log_error(str(e), type(e).__name__)
        print(f"❌ {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())

"""Per-cell, lambda-aggregated and long-form CSV outputs.

All files are UTF-8 with LF endings, floats printed with 6 decimals, and an
optional block of ``# key=value`` comment lines recording the run
configuration ahead of the header.

cells.csv
    park,strategy,budget,lambda,dist_cap,horizon,q_min,n_agents,n_paths,
    avg_qt,avg_pop,utility,welfare,qt_ratio
aggregate.csv
    park,strategy,budget,n_cells,avg_qt_mean,avg_pop_mean,utility_mean,
    qt_ratio_mean,qt_ratio_std   (std is the population standard deviation
    of qt_ratio over the cells of the group)
series.csv
    park,strategy,budget,metric,value
"""

from __future__ import annotations

import csv
import math
import statistics
from dataclasses import dataclass
from itertools import groupby
from typing import Iterable, Mapping

from .simulation import SimulationResult

CELL_HEADER = (
    "park", "strategy", "budget", "lambda", "dist_cap", "horizon", "q_min", "n_agents", "n_paths",
    "avg_qt", "avg_pop", "utility", "welfare", "qt_ratio",
)
AGGREGATE_HEADER = (
    "park", "strategy", "budget", "n_cells", "avg_qt_mean", "avg_pop_mean", "utility_mean",
    "qt_ratio_mean", "qt_ratio_std",
)
SERIES_HEADER = ("park", "strategy", "budget", "metric", "value")
SERIES_METRICS = ("avg_qt", "avg_pop", "utility", "qt_ratio")


@dataclass(frozen=True)
class CellRow:
    park: str
    strategy: str
    budget: float
    lam: float
    avg_qt: float
    avg_pop: float
    utility: float
    qt_ratio: float

    @classmethod
    def of(cls, r: SimulationResult | CellRow) -> CellRow:
        if isinstance(r, CellRow):
            return r
        c = r.config
        return cls(r.park, c.strategy.value, float(c.budget), float(c.lam), r.avg_qt, r.avg_pop, r.utility, r.qt_ratio)


@dataclass(frozen=True)
class AggregateRow:
    park: str
    strategy: str
    budget: float
    n_cells: int
    avg_qt_mean: float
    avg_pop_mean: float
    utility_mean: float
    qt_ratio_mean: float
    qt_ratio_std: float


def _mean(xs: list[float]) -> float:
    return math.fsum(xs) / len(xs)


def aggregate(results: Iterable[SimulationResult | CellRow]) -> list[AggregateRow]:
    """Average every (park, strategy, budget) group over its lambda cells."""
    rows = [CellRow.of(r) for r in results]
    if not rows:
        raise ValueError("nothing to aggregate")
    key = lambda r: (r.park, r.strategy, r.budget)  # noqa: E731
    out = []
    for (park, strategy, budget), grp in groupby(sorted(rows, key=key), key=key):
        grp = list(grp)
        ratios = [r.qt_ratio for r in grp]
        out.append(
            AggregateRow(
                park, strategy, budget, len(grp),
                _mean([r.avg_qt for r in grp]),
                _mean([r.avg_pop for r in grp]),
                _mean([r.utility for r in grp]),
                _mean(ratios),
                statistics.pstdev(ratios),
            )
        )
    return out


def _fmt(x) -> str:
    if isinstance(x, bool):
        return str(int(x))
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        return f"{x:.6f}"
    return str(x)


def _write(path, header, rows, meta: Mapping[str, object] | None) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        for k, v in (meta or {}).items():
            fh.write(f"# {k}={v}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(x) for x in row])


def cell_values(r: SimulationResult) -> tuple:
    c = r.config
    return (
        r.park, c.strategy.value, float(c.budget), float(c.lam), float(c.dist_cap), float(c.arrival_horizon),
        float(c.q_min), r.n_agents, r.n_paths, r.avg_qt, r.avg_pop, r.utility, r.welfare, r.qt_ratio,
    )


def export_cells(results: Iterable[SimulationResult], path, meta=None) -> None:
    _write(path, CELL_HEADER, (cell_values(r) for r in results), meta)


def export_aggregate(rows: Iterable[AggregateRow], path, meta=None) -> None:
    _write(
        path,
        AGGREGATE_HEADER,
        (
            (a.park, a.strategy, a.budget, a.n_cells, a.avg_qt_mean, a.avg_pop_mean, a.utility_mean,
             a.qt_ratio_mean, a.qt_ratio_std)
            for a in rows
        ),
        meta,
    )


def export_series(rows: Iterable[AggregateRow], path, meta=None) -> None:
    def long_rows():
        for a in rows:
            vals = (a.avg_qt_mean, a.avg_pop_mean, a.utility_mean, a.qt_ratio_mean)
            for metric, v in zip(SERIES_METRICS, vals):
                yield a.park, a.strategy, a.budget, metric, v

    _write(path, SERIES_HEADER, long_rows(), meta)


def _data_lines(fh):
    return (line for line in fh if not line.startswith("#"))


def read_cells(path) -> list[CellRow]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(_data_lines(fh))
        return [
            CellRow(
                d["park"], d["strategy"], float(d["budget"]), float(d["lambda"]),
                float(d["avg_qt"]), float(d["avg_pop"]), float(d["utility"]), float(d["qt_ratio"]),
            )
            for d in reader
        ]


def read_aggregate(path) -> list[AggregateRow]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(_data_lines(fh))
        return [
            AggregateRow(
                d["park"], d["strategy"], float(d["budget"]), int(d["n_cells"]),
                *(float(d[k]) for k in AGGREGATE_HEADER[4:]),
            )
            for d in reader
        ]

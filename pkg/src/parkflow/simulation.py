"""Multi-agent arrival simulation and the parameter-grid driver.

Agents arrive every ``lam`` minutes from minute 0 until ``horizon``. Each one
gets an itinerary from the active strategy, meets the queues left by every
earlier agent, and is then added to the shared ledger.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from .baselines import Strategy, baseline_path
from .park import Park
from .paths import DEFAULT_DIST_CAP, DEFAULT_MAX_PATHS, FeasibleSet, Path, find_feasible_paths, popularity
from .queues import compile_path, realize
from .transition import DEFAULT_Q_MIN, TransitionMatrix, argmax_first, construct_tm, next_path

DEFAULT_BUDGETS = tuple(range(60, 361, 30))
# 0.01..0.09 then 0.1..1.0, written as exact decimal literals
DEFAULT_LAMBDAS = tuple(round(0.01 * k, 2) for k in range(1, 10)) + tuple(round(0.1 * k, 1) for k in range(1, 11))


class GridCellError(RuntimeError):
    """A grid cell failed; the message names the cell, ``__cause__`` holds the original error."""


@dataclass(frozen=True)
class SimulationConfig:
    strategy: Strategy
    budget: float
    lam: float
    dist_cap: float = DEFAULT_DIST_CAP
    horizon: float | None = None  # defaults to the budget
    q_min: float = DEFAULT_Q_MIN

    def __post_init__(self) -> None:
        object.__setattr__(self, "strategy", Strategy(self.strategy))
        if not self.budget > 0:
            raise ValueError("budget must be positive")
        if not self.lam > 0:
            raise ValueError("arrival interval must be positive")
        if not self.q_min > 0:
            raise ValueError("q_min must be positive")
        if self.horizon is not None and not self.horizon >= self.lam:
            raise ValueError("horizon must be at least one arrival interval")

    @property
    def arrival_horizon(self) -> float:
        return self.budget if self.horizon is None else self.horizon

    def start_minutes(self) -> list[float]:
        h = self.arrival_horizon
        starts = []
        k = 0
        while k * self.lam < h:
            starts.append(k * self.lam)
            k += 1
        return starts


@dataclass(frozen=True)
class AgentRecord:
    index: int
    start_minute: float
    facilities: tuple[int, ...]
    queue_time: float
    popularity: float
    utility: float


@dataclass(frozen=True)
class SimulationResult:
    park: str
    config: SimulationConfig
    n_agents: int
    n_paths: int  # feasible-set size, 0 for baselines
    avg_qt: float
    avg_pop: float
    utility: float  # mean per-agent utility
    welfare: float  # summed utility
    agents: tuple[AgentRecord, ...] | None = field(default=None, compare=False, repr=False)

    @property
    def qt_ratio(self) -> float:
        return self.avg_qt / self.config.budget


def run_simulation(
    park: Park,
    feasible: FeasibleSet | None,
    tm: TransitionMatrix | None,
    config: SimulationConfig,
    keep_agents: bool = True,
) -> SimulationResult:
    """Simulate one (park, budget, lam, strategy) cell."""
    strategy = config.strategy
    if strategy is Strategy.SCAIR:
        if tm is None or feasible is None:
            raise ValueError("SCAIR needs a feasible set and its transition matrix")
        if tm.size != len(feasible):
            raise ValueError(f"transition matrix is {tm.size}x{tm.size} but there are {len(feasible)} feasible paths")
        paths: Sequence[Path] = feasible.paths
    else:
        if tm is not None:
            raise ValueError("baseline strategies do not use a transition matrix")
        paths = (baseline_path(strategy, park, config.budget, config.dist_cap),)

    pops = [popularity(park, p) for p in paths]
    compiled: dict[int, tuple] = {}
    occ: dict[tuple[int, int], int] = {}
    q_min = config.q_min
    qts, ups, uts = [], [], []
    records = [] if keep_agents else None

    current = -1
    for k, start in enumerate(config.start_minutes()):
        if strategy is Strategy.SCAIR:
            current = argmax_first(pops) if current < 0 else next_path(tm, current)
        else:
            current = 0
        steps = compiled.get(current)
        if steps is None:
            steps = compiled[current] = compile_path(park, paths[current])
        q = realize(occ, steps, start)
        pop = pops[current]
        u = pop / max(q, q_min)
        qts.append(q)
        ups.append(pop)
        uts.append(u)
        if records is not None:
            records.append(AgentRecord(k, start, paths[current].facilities, q, pop, u))

    n = len(qts)
    return SimulationResult(
        park=park.name,
        config=config,
        n_agents=n,
        n_paths=len(feasible) if strategy is Strategy.SCAIR else 0,
        avg_qt=math.fsum(qts) / n,
        avg_pop=math.fsum(ups) / n,
        utility=math.fsum(uts) / n,
        welfare=math.fsum(uts),
        agents=tuple(records) if records is not None else None,
    )


def _run_budget(args) -> list[SimulationResult]:
    park, budget, lambdas, strategies, dist_cap, horizon, q_min, max_paths, keep_agents = args
    out = []
    feasible = None
    for lam in lambdas:
        for strategy in strategies:
            try:
                cfg = SimulationConfig(strategy, budget, lam, dist_cap, horizon, q_min)
                tm = None
                if cfg.strategy is Strategy.SCAIR:
                    if feasible is None:
                        feasible = find_feasible_paths(park, budget, dist_cap, max_paths)
                    tm = construct_tm(park, feasible, lam, q_min)
                out.append(run_simulation(park, feasible if tm is not None else None, tm, cfg, keep_agents))
            except Exception as exc:
                raise GridCellError(
                    f"grid cell park={park.name} budget={budget} lambda={lam} strategy={Strategy(strategy).value}: {exc}"
                ) from exc
    return out


def simulate_grid(
    parks: Sequence[Park],
    budgets: Sequence[float] = DEFAULT_BUDGETS,
    lambdas: Sequence[float] = DEFAULT_LAMBDAS,
    strategies: Sequence[Strategy] = tuple(Strategy),
    dist_cap: float = DEFAULT_DIST_CAP,
    horizon: float | None = None,
    q_min: float = DEFAULT_Q_MIN,
    workers: int = 1,
    max_paths: int | None = DEFAULT_MAX_PATHS,
    keep_agents: bool = False,
) -> list[SimulationResult]:
    """Run the full park x budget x lambda x strategy product.

    Results come back in loop order (park, budget, lambda, strategy) whatever
    ``workers`` is. The feasible set of a (park, budget) pair is enumerated
    once and shared by all its lambda cells; transition matrices are rebuilt
    per cell.
    """
    if not parks or not budgets or not lambdas or not strategies:
        raise ValueError("parks, budgets, lambdas and strategies must all be non-empty")
    strategies = tuple(Strategy(s) for s in strategies)
    jobs = [
        (park, b, tuple(lambdas), strategies, dist_cap, horizon, q_min, max_paths, keep_agents)
        for park in parks
        for b in budgets
    ]
    if workers <= 1 or len(jobs) == 1:
        chunks = map(_run_budget, jobs)
        return [r for chunk in chunks for r in chunk]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return [r for chunk in pool.map(_run_budget, jobs) for r in chunk]


"""Breadth-first enumeration of budget-feasible itineraries.

An itinerary starts at the park's start facility and never revisits a
facility. From its last facility it may step to any unvisited facility
within the hop cap; when no such facility exists it steps to the single
nearest unvisited one instead. Enumeration keeps only maximal itineraries,
i.e. those none of whose allowed extensions fits the time budget.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .park import Park

log = logging.getLogger(__name__)

DEFAULT_DIST_CAP = 200.0  # meters
DEFAULT_MAX_PATHS = 100_000


class FeasibleSetTooLarge(RuntimeError):
    pass


@dataclass(frozen=True)
class Path:
    facilities: tuple[int, ...]
    total_time: float

    def __len__(self) -> int:
        return len(self.facilities)

    def label(self) -> str:
        return "-".join(map(str, self.facilities))


@dataclass(frozen=True)
class FeasibleSet:
    paths: tuple[Path, ...]
    budget: float
    dist_cap: float

    def __len__(self) -> int:
        return len(self.paths)

    def __iter__(self):
        return iter(self.paths)

    def __getitem__(self, idx: int) -> Path:
        return self.paths[idx]

    def sequences(self) -> set[tuple[int, ...]]:
        return {p.facilities for p in self.paths}


def total_time(park: Park, facilities: Sequence[int]) -> float:
    """Visit durations plus walking time between consecutive facilities.

    Accumulates strictly left to right so that the result is bit-identical to
    the incremental totals built during enumeration.
    """
    if not facilities:
        raise ValueError("a path needs at least one facility")
    for f in facilities:
        park._check(f)
    fac = park.facilities
    trav = park.travel_times
    t = fac[facilities[0]].duration
    for a, b in zip(facilities, facilities[1:]):
        t = t + trav[a][b] + fac[b].duration
    return t


def popularity(park: Park, facilities: Sequence[int] | Path) -> float:
    """Summed popularity, correctly rounded and independent of visiting order."""
    seq = facilities.facilities if isinstance(facilities, Path) else facilities
    return math.fsum(park.facilities[f].popularity for f in seq)


def make_path(park: Park, facilities: Iterable[int]) -> Path:
    seq = tuple(facilities)
    return Path(seq, total_time(park, seq))


def next_nearest(park: Park, last: int, visited) -> int | None:
    """Closest unvisited facility to ``last``; smallest id wins ties."""
    row = park.distances[last]
    best = None
    for j in range(len(park)):
        if j in visited:
            continue
        if best is None or row[j] < row[best]:
            best = j
    return best


def candidate_steps(park: Park, last: int, visited, dist_cap: float) -> list[int]:
    """Facilities an itinerary ending at ``last`` may step to next."""
    row = park.distances[last]
    viable = [j for j in range(len(park)) if j not in visited and row[j] <= dist_cap]
    if viable:
        return viable
    nearest = next_nearest(park, last, visited)
    return [] if nearest is None else [nearest]


def is_allowed_hop(park: Park, visited, last: int, nxt: int, dist_cap: float) -> bool:
    """True when stepping ``last -> nxt`` obeys the hop cap or is the nearest-facility fallback."""
    return nxt in candidate_steps(park, last, visited, dist_cap)


def find_feasible_paths(
    park: Park,
    budget: float,
    dist_cap: float = DEFAULT_DIST_CAP,
    max_paths: int | None = DEFAULT_MAX_PATHS,
) -> FeasibleSet:
    """Enumerate every maximal feasible itinerary, sorted by facility sequence.

    Raises:
        FeasibleSetTooLarge: More than ``max_paths`` itineraries are alive at once.
    """
    if len(park) < 2:
        raise ValueError("path enumeration needs a park with at least 2 facilities")
    fac = park.facilities
    trav = park.travel_times
    n = len(park)
    start = park.start
    t0 = fac[start].duration
    if t0 > budget:
        log.warning("start facility alone (%.3f min) exceeds budget %.3f min", t0, budget)

    done: list[tuple[tuple[int, ...], float]] = []
    frontier = [((start,), t0)]
    while frontier:
        nxt_frontier = []
        for seq, tt in frontier:
            if len(seq) == n:
                done.append((seq, tt))
                continue
            last = seq[-1]
            extended = False
            # children of distinct parents are distinct, so no duplicate check is needed
            for j in candidate_steps(park, last, set(seq), dist_cap):
                t = tt + trav[last][j] + fac[j].duration
                if t <= budget:
                    nxt_frontier.append((seq + (j,), t))
                    extended = True
            if not extended:
                done.append((seq, tt))
        if max_paths is not None and len(done) + len(nxt_frontier) > max_paths:
            raise FeasibleSetTooLarge(
                f"more than {max_paths} feasible paths (budget {budget} min, {n} facilities); "
                "lower the budget or the park size, or raise the cap"
            )
        frontier = nxt_frontier
    done.sort()
    return FeasibleSet(tuple(Path(s, t) for s, t in done), float(budget), float(dist_cap))


def write_paths_csv(feasible: FeasibleSet, target, comment: str | None = None) -> None:
    """Write one row per itinerary to a file path or an open text stream."""
    if hasattr(target, "write"):
        _write_paths(feasible, target, comment)
    else:
        with open(target, "w", newline="", encoding="utf-8") as fh:
            _write_paths(feasible, fh, comment)


def _write_paths(feasible: FeasibleSet, fh, comment: str | None) -> None:
    if comment:
        for line in comment.splitlines():
            fh.write(f"# {line}\n")
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["path_index", "facilities", "total_time_min"])
    for idx, p in enumerate(feasible.paths):
        writer.writerow([idx, p.label(), f"{p.total_time:.6f}"])

"""Hour-bucketed occupancy ledger and the overlap queue model.

A facility's wait for an arriving agent is ``count * duration / capacity``
where ``count`` is the number of earlier agents whose arrival at that
facility fell in the same absolute hour (``floor(minute / 60)``). Waits
delay every later facility on the same itinerary.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .park import Park
from .paths import Path

MINUTES_PER_HOUR = 60.0


def hour_bucket(minute: float) -> int:
    return int(minute // MINUTES_PER_HOUR)


class QueueLedger:
    """Expected head-count per (facility id, hour bucket)."""

    def __init__(self, occupancy: dict[tuple[int, int], int] | None = None):
        self.occupancy: dict[tuple[int, int], int] = dict(occupancy or {})

    def count(self, facility: int, hour: int) -> int:
        return self.occupancy.get((facility, hour), 0)

    def total(self) -> int:
        return sum(self.occupancy.values())

    def copy(self) -> QueueLedger:
        return QueueLedger(self.occupancy)

    def __eq__(self, other) -> bool:
        return isinstance(other, QueueLedger) and self.occupancy == other.occupancy

    def __repr__(self) -> str:
        return f"QueueLedger({self.occupancy!r})"


@dataclass(frozen=True)
class FacilityArrival:
    facility: int
    minute: float
    wait: float = 0.0

    @property
    def hour(self) -> int:
        return hour_bucket(self.minute)


def _seq(path: Path | Sequence[int]) -> tuple[int, ...]:
    return path.facilities if isinstance(path, Path) else tuple(path)


def unit_wait(park: Park, f: int) -> float:
    fac = park.facilities[f]
    return fac.duration / fac.capacity


def facility_queue_time(park: Park, f: int, h: int, ledger: QueueLedger) -> float:
    park._check(f)
    return ledger.count(f, h) * unit_wait(park, f)


def compile_path(park: Park, path: Path | Sequence[int]) -> tuple[tuple[int, float, float, float], ...]:
    """Per-step ``(facility, unit wait, duration, walk to next)`` tuples for the hot loop."""
    seq = _seq(path)
    for f in seq:
        park._check(f)
    trav = park.travel_times
    steps = []
    for k, f in enumerate(seq):
        walk = trav[f][seq[k + 1]] if k + 1 < len(seq) else 0.0
        steps.append((f, unit_wait(park, f), park.facilities[f].duration, walk))
    return tuple(steps)


def schedule_path(
    park: Park, path: Path | Sequence[int], start_minute: float, ledger: QueueLedger
) -> list[FacilityArrival]:
    """Arrival timeline of one agent against ``ledger`` (which is not modified)."""
    occ = ledger.occupancy
    t = start_minute
    out = []
    for f, unit, dur, walk in compile_path(park, path):
        w = occ.get((f, int(t // MINUTES_PER_HOUR)), 0) * unit
        out.append(FacilityArrival(f, t, w))
        t = t + w + dur + walk
    return out


def path_queue_time(park: Park, path: Path | Sequence[int], start_minute: float, ledger: QueueLedger) -> float:
    q = 0.0
    for arr in schedule_path(park, path, start_minute, ledger):
        q += arr.wait
    return q


def commit_path(ledger: QueueLedger, arrivals: Iterable[FacilityArrival]) -> QueueLedger:
    """Record one agent's arrivals. Mutates and returns ``ledger``."""
    occ = ledger.occupancy
    for arr in arrivals:
        key = (arr.facility, arr.hour)
        occ[key] = occ.get(key, 0) + 1
    return ledger


def realize(occ: dict, steps: tuple[tuple[int, float, float, float], ...], start_minute: float) -> float:
    """Schedule and commit in one pass; returns the agent's total wait.

    Equivalent to ``schedule_path`` followed by ``commit_path``: facilities on
    an itinerary are distinct, so committing a step never changes a later
    step's lookup.
    """
    t = start_minute
    q = 0.0
    for f, unit, dur, walk in steps:
        key = (f, int(t // MINUTES_PER_HOUR))
        c = occ.get(key, 0)
        w = c * unit
        occ[key] = c + 1
        q += w
        t = t + w + dur + walk
    return q


def occupancy_histogram(ledger: QueueLedger) -> Counter:
    """Agents per facility, summed over hours."""
    hist: Counter = Counter()
    for (f, _h), c in ledger.occupancy.items():
        hist[f] += c
    return hist

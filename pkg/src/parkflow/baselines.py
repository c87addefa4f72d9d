"""Single-agent greedy itinerary strategies used for comparison.

Each strategy builds one itinerary from the start facility by repeatedly
picking the best next facility under its own criterion. When the pick does
not fit the remaining budget the itinerary ends there. Choices use static
facility properties only, so every agent following a strategy receives the
same itinerary.
"""

from __future__ import annotations

import enum

from .park import Park
from .paths import DEFAULT_DIST_CAP, Path, next_nearest

# co-located facilities would divide by zero
POD_MIN_DISTANCE = 1.0  # meters


class Strategy(str, enum.Enum):
    DISOP = "disop"
    POPOP = "popop"
    PODOP = "podop"
    SCAIR = "scair"

    @property
    def label(self) -> str:
        return {"disop": "DisOp", "popop": "PopOp", "podop": "PodOp", "scair": "SCAIR"}[self.value]

    @classmethod
    def parse(cls, text: str) -> Strategy:
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ValueError(f"unknown strategy {text!r}; choose from {', '.join(s.value for s in cls)}") from None


def _greedy(park: Park, budget: float, pick) -> Path:
    fac = park.facilities
    trav = park.travel_times
    seq = [park.start]
    visited = {park.start}
    tt = fac[park.start].duration
    while len(seq) < len(park):
        nxt = pick(seq[-1], visited)
        t = tt + trav[seq[-1]][nxt] + fac[nxt].duration
        if t > budget:
            break
        seq.append(nxt)
        visited.add(nxt)
        tt = t
    return Path(tuple(seq), tt)


def dis_op_path(park: Park, budget: float, dist_cap: float = DEFAULT_DIST_CAP) -> Path:
    """Always walk to the nearest unvisited facility (``dist_cap`` is not applied)."""
    return _greedy(park, budget, lambda last, visited: next_nearest(park, last, visited))


def pop_op_path(park: Park, budget: float, dist_cap: float = DEFAULT_DIST_CAP) -> Path:
    """Most popular unvisited facility within ``dist_cap``; nearest one if none is in reach."""
    fac = park.facilities

    def pick(last, visited):
        row = park.distances[last]
        best = None
        for j in range(len(park)):
            if j in visited or row[j] > dist_cap:
                continue
            if best is None or fac[j].popularity > fac[best].popularity:
                best = j
        return best if best is not None else next_nearest(park, last, visited)

    return _greedy(park, budget, pick)


def pod_op_path(park: Park, budget: float, dist_cap: float = DEFAULT_DIST_CAP) -> Path:
    """Highest popularity per meter among unvisited facilities within ``dist_cap``.

    Falls back to the nearest unvisited facility when none is in reach, like
    :func:`pop_op_path`, so every hop obeys the same hop rule as enumeration.
    """
    fac = park.facilities

    def pick(last, visited):
        row = park.distances[last]
        best, best_score = None, -1.0
        for j in range(len(park)):
            if j in visited or row[j] > dist_cap:
                continue
            score = fac[j].popularity / max(row[j], POD_MIN_DISTANCE)
            if score > best_score:
                best, best_score = j, score
        return best if best is not None else next_nearest(park, last, visited)

    return _greedy(park, budget, pick)


BASELINES = {
    Strategy.DISOP: dis_op_path,
    Strategy.POPOP: pop_op_path,
    Strategy.PODOP: pod_op_path,
}


def baseline_path(strategy: Strategy, park: Park, budget: float, dist_cap: float = DEFAULT_DIST_CAP) -> Path:
    try:
        fn = BASELINES[Strategy(strategy)]
    except KeyError:
        raise ValueError(f"{strategy} is not a baseline strategy") from None
    return fn(park, budget, dist_cap)

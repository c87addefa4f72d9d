"""Exhaustive reference solvers for toy-sized instances.

Both problems are exponential, so these refuse inputs beyond
:class:`OracleLimit`. They exist to cross-check the enumerator and to bound
the welfare any allocation strategy can reach.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .park import Park
from .paths import FeasibleSet, Path, popularity
from .queues import compile_path, realize


class OracleLimitExceeded(ValueError):
    pass


@dataclass(frozen=True)
class OracleLimit:
    max_facilities: int = 6
    max_agents: int = 4
    max_assignments: int = 10**7


def brute_force_paths(park: Park, budget: float, dist_cap: float, limit: OracleLimit = OracleLimit()) -> list[Path]:
    """Depth-first enumeration of every maximal itinerary, sorted by sequence."""
    n = len(park)
    if n > limit.max_facilities:
        raise OracleLimitExceeded(f"park has {n} facilities; oracle limit is {limit.max_facilities}")
    dist = park.distances
    trav = park.travel_times
    dur = [f.duration for f in park.facilities]
    found: list[Path] = []

    def options(last: int, seq: tuple[int, ...]) -> list[int]:
        free = [j for j in range(n) if j not in seq]
        near = [j for j in free if dist[last][j] <= dist_cap]
        if near or not free:
            return near
        return [min(free, key=lambda j: (dist[last][j], j))]

    def grow(seq: tuple[int, ...], tt: float) -> None:
        last = seq[-1]
        leaf = True
        for j in options(last, seq):
            t = tt + trav[last][j] + dur[j]
            if t <= budget:
                leaf = False
                grow(seq + (j,), t)
        if leaf:
            found.append(Path(seq, tt))

    grow((park.start,), dur[park.start])
    return sorted(found, key=lambda p: p.facilities)


def brute_force_welfare(
    park: Park,
    feasible: FeasibleSet,
    lam: float,
    n_agents: int,
    q_min: float,
    limit: OracleLimit = OracleLimit(),
) -> tuple[list[int], float]:
    """Best total utility over all itinerary assignments to ``n_agents`` arrivals.

    Agent ``k`` starts at ``k * lam`` and queues behind agents ``0..k-1``.
    Returns the lexicographically smallest maximizing assignment (as feasible
    set indices) and its welfare.
    """
    m = len(feasible)
    if n_agents < 1:
        raise ValueError("need at least one agent")
    if n_agents > limit.max_agents:
        raise OracleLimitExceeded(f"{n_agents} agents; oracle limit is {limit.max_agents}")
    if m**n_agents > limit.max_assignments:
        raise OracleLimitExceeded(f"{m}^{n_agents} assignments exceed {limit.max_assignments}")
    steps = [compile_path(park, p) for p in feasible]
    pops = [popularity(park, p) for p in feasible]
    best: list = [None, -math.inf]

    def go(k: int, occ: dict, chosen: list[int], utils: list[float]) -> None:
        if k == n_agents:
            w = math.fsum(utils)
            if w > best[1]:
                best[0], best[1] = list(chosen), w
            return
        for idx in range(m):
            trial = dict(occ)
            q = realize(trial, steps[idx], k * lam)
            chosen.append(idx)
            utils.append(pops[idx] / max(q, q_min))
            go(k + 1, trial, chosen, utils)
            chosen.pop()
            utils.pop()

    go(0, {}, [], [])
    return best[0], best[1]

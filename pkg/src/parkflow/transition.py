"""Row-stochastic transition matrix over feasible itineraries.

Entry ``(i, j)`` scores recommending itinerary ``j`` to an agent who starts
``lam`` minutes after a predecessor on itinerary ``i``: the popularity of
``j`` divided by the queue ``j`` would meet behind that single predecessor
(floored at ``q_min``). Rows are then normalized to sum to one.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .park import Park
from .paths import FeasibleSet, popularity
from .queues import MINUTES_PER_HOUR

DEFAULT_Q_MIN = 1.0
# relative slack under which two scores count as tied
TIE_RTOL = 1e-9
_BLOCK_ELEMS = 1 << 22


@dataclass(frozen=True, eq=False)
class TransitionMatrix:
    entries: np.ndarray  # normalized, shape (m, m)
    raw: np.ndarray  # before normalization
    lam: float
    q_min: float
    feasible: FeasibleSet

    @property
    def size(self) -> int:
        return self.entries.shape[0]


def _path_tables(park: Park, feasible: FeasibleSet):
    m = len(feasible)
    length = max(len(p) for p in feasible)
    fac = park.facilities
    trav = park.travel_times
    seq = np.full((m, length), -1, dtype=np.int64)
    dur = np.zeros((m, length))
    unit = np.zeros((m, length))
    walk = np.zeros((m, length))
    for r, p in enumerate(feasible):
        s = p.facilities
        for k, f in enumerate(s):
            seq[r, k] = f
            dur[r, k] = fac[f].duration
            unit[r, k] = fac[f].duration / fac[f].capacity
            if k + 1 < len(s):
                walk[r, k] = trav[f][s[k + 1]]
    return seq, dur, unit, walk


def _predecessor_buckets(feasible: FeasibleSet, n: int, seq, dur, walk) -> np.ndarray:
    """Hour bucket of each itinerary's (queue-free) arrival at each facility, -1 if absent."""
    m, length = seq.shape
    buckets = np.full((m, n), -1, dtype=np.int64)
    for r in range(m):
        t = 0.0
        for k in range(length):
            f = seq[r, k]
            if f < 0:
                break
            buckets[r, f] = int(t // MINUTES_PER_HOUR)
            t = t + 0.0 + dur[r, k] + walk[r, k]
    return buckets


def pairwise_queue(park: Park, feasible: FeasibleSet, lam: float) -> np.ndarray:
    """``Q[i, j]``: queue met on itinerary ``j`` started at ``lam`` behind one agent on ``i`` started at 0.

    Vectorized over all pairs; replays exactly the arithmetic of
    :func:`parkflow.queues.path_queue_time` so results agree bit for bit.
    """
    seq, dur, unit, walk = _path_tables(park, feasible)
    m, length = seq.shape
    buckets = _predecessor_buckets(feasible, len(park), seq, dur, walk)
    out = np.empty((m, m))
    block = max(1, _BLOCK_ELEMS // max(m, 1))
    for lo in range(0, m, block):
        hi = min(m, lo + block)
        pb = buckets[lo:hi]
        t = np.full((hi - lo, m), float(lam))
        q = np.zeros((hi - lo, m))
        for k in range(length):
            f = seq[:, k]
            active = f >= 0
            hb = np.floor_divide(t, MINUTES_PER_HOUR).astype(np.int64)
            shared = (pb[:, np.where(active, f, 0)] == hb) & active
            w = np.where(shared, unit[:, k], 0.0)
            q = q + w
            t = t + w + dur[:, k] + walk[:, k]
        out[lo:hi] = q
    return out


def normalize_rows(raw: np.ndarray) -> np.ndarray:
    """Divide each row by its sum; an all-zero row becomes uniform."""
    raw = np.asarray(raw, dtype=float)
    sums = raw.sum(axis=1, keepdims=True)
    uniform = np.full_like(raw, 1.0 / raw.shape[1])
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(sums > 0, raw / np.where(sums > 0, sums, 1.0), uniform)


def construct_tm(park: Park, feasible: FeasibleSet, lam: float, q_min: float = DEFAULT_Q_MIN) -> TransitionMatrix:
    if len(feasible) == 0:
        raise ValueError("cannot build a transition matrix over an empty feasible set")
    if not lam > 0:
        raise ValueError("arrival interval must be positive")
    if not q_min > 0:
        raise ValueError("q_min must be positive")
    pops = np.array([popularity(park, p) for p in feasible])
    q = pairwise_queue(park, feasible, lam)
    raw = pops[None, :] / np.maximum(q, q_min)
    return TransitionMatrix(normalize_rows(raw), raw, float(lam), float(q_min), feasible)


def argmax_first(values) -> int:
    """Index of the maximum, smallest index among near-ties (relative TIE_RTOL)."""
    values = np.asarray(values, dtype=float)
    top = values.max()
    return int(np.flatnonzero(values >= top - abs(top) * TIE_RTOL)[0])


def next_path(tm: TransitionMatrix, previous: int) -> int:
    if not 0 <= previous < tm.size:
        raise IndexError(f"path index {previous} outside 0..{tm.size - 1}")
    return argmax_first(tm.entries[previous])


def write_matrix_csv(tm: TransitionMatrix, path, comment: str | None = None) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        if comment:
            for line in comment.splitlines():
                fh.write(f"# {line}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["from"] + [str(j) for j in range(tm.size)])
        for i, row in enumerate(tm.entries):
            writer.writerow([str(i)] + [f"{v:.6f}" for v in row])

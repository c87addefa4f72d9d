"""Park CSV loading/writing and seeded synthetic park generators.

CSV schema (UTF-8, LF, '.' decimal point)::

    id,name,lat,lon,duration_min,capacity,popularity

Synthetic parks draw every number from ``random.Random(seed).random()``
(Mersenne Twister), whose output stream Python guarantees to be identical
across platforms and versions, so a spec always yields the same park.
"""

from __future__ import annotations

import csv
import math
import random
from dataclasses import dataclass
from pathlib import Path as FsPath

from .park import DEFAULT_WALKING_SPEED, EARTH_RADIUS_M, Facility, Park

HEADER = ("id", "name", "lat", "lon", "duration_min", "capacity", "popularity")

# meters per degree of latitude on the model sphere
M_PER_DEG = math.pi * EARTH_RADIUS_M / 180.0


class ParkFormatError(ValueError):
    """Raised when a park file violates the schema."""


def load_park(path, start: int = 0, walking_speed: float = DEFAULT_WALKING_SPEED, name: str | None = None) -> Park:
    """Read a park CSV file.

    Raises:
        FileNotFoundError: The file does not exist.
        ParkFormatError: Bad header, unparsable row, duplicate or
            non-contiguous ids, or a facility invariant violation. The message
            carries the offending line number.
    """
    path = FsPath(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(line for line in fh if not line.startswith("#"))
        try:
            header = next(reader)
        except StopIteration:
            raise ParkFormatError(f"{path}: empty file") from None
        if tuple(h.strip() for h in header) != HEADER:
            raise ParkFormatError(f"{path}: malformed header {header!r}; expected {','.join(HEADER)}")
        facilities: list[Facility] = []
        seen: dict[int, int] = {}
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(HEADER):
                raise ParkFormatError(f"{path}:{lineno}: expected {len(HEADER)} fields, got {len(row)}")
            try:
                fid = int(row[0])
                lat, lon, dur, cap, pop = (float(x) for x in row[2:])
            except ValueError as exc:
                raise ParkFormatError(f"{path}:{lineno}: {exc}") from None
            if fid in seen:
                raise ParkFormatError(f"{path}:{lineno}: duplicate id {fid} (first on line {seen[fid]})")
            seen[fid] = lineno
            try:
                facilities.append(Facility(fid, row[1], lat, lon, dur, cap, pop))
            except ValueError as exc:
                raise ParkFormatError(f"{path}:{lineno}: {exc}") from None
    if not facilities:
        raise ParkFormatError(f"{path}: no facilities")
    for pos, fac in enumerate(facilities):
        if fac.id != pos:
            raise ParkFormatError(f"{path}:{seen[fac.id]}: ids must be contiguous from 0 in file order; got {fac.id}")
    try:
        return Park(tuple(facilities), start, walking_speed, name or path.stem)
    except ValueError as exc:
        raise ParkFormatError(f"{path}: {exc}") from None


def park_rows(park: Park) -> list[list[str]]:
    # repr() gives the shortest string that round-trips a float exactly
    return [
        [str(f.id), f.name, repr(f.lat), repr(f.lon), repr(f.duration), repr(f.capacity), repr(f.popularity)]
        for f in park.facilities
    ]


def write_park(park: Park, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(HEADER)
        writer.writerows(park_rows(park))


@dataclass(frozen=True)
class SyntheticParkSpec:
    n_facilities: int
    seed: int = 0
    bbox: tuple[float, float, float, float] = (28.3550, 28.3600, -81.5620, -81.5560)  # lat_min, lat_max, lon_min, lon_max
    duration_range: tuple[float, float] = (10.0, 60.0)
    popularity_range: tuple[float, float] = (1.0, 100.0)
    capacity: float = 50.0

    def validate(self) -> None:
        if self.n_facilities < 2:
            raise ValueError("a synthetic park needs at least 2 facilities")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        lat_min, lat_max, lon_min, lon_max = self.bbox
        if not lat_min < lat_max or not lon_min < lon_max:
            raise ValueError("bounding box must have min < max on both axes")
        if not (-90 <= lat_min and lat_max <= 90 and -180 <= lon_min and lon_max <= 180):
            raise ValueError("bounding box outside valid coordinates")
        lo, hi = self.duration_range
        if not 0 < lo <= hi:
            raise ValueError("duration range must be positive and non-empty")
        lo, hi = self.popularity_range
        if not 0 <= lo <= hi:
            raise ValueError("popularity range must be non-negative and non-empty")
        if not self.capacity > 0:
            raise ValueError("capacity must be positive")


def generate_park(spec: SyntheticParkSpec, walking_speed: float = DEFAULT_WALKING_SPEED, name: str | None = None) -> Park:
    """Uniform random park inside ``spec.bbox``; facility 0 is the start."""
    spec.validate()
    rng = random.Random(spec.seed)
    lat_min, lat_max, lon_min, lon_max = spec.bbox
    facs = []
    for i in range(spec.n_facilities):
        lat = rng.uniform(lat_min, lat_max)
        lon = rng.uniform(lon_min, lon_max)
        dur = rng.uniform(*spec.duration_range)
        pop = rng.uniform(*spec.popularity_range)
        facs.append(Facility(i, f"F{i:02d}", lat, lon, dur, spec.capacity, pop))
    return Park(tuple(facs), 0, walking_speed, name or f"synthetic-n{spec.n_facilities}-s{spec.seed}")


@dataclass(frozen=True)
class ClusteredParkSpec:
    """Entrance at the centre with attraction clusters on a ring around it.

    With the defaults every cluster lies within 200 m of the entrance while
    distinct clusters are more than 200 m apart, so itineraries under the
    default hop cap stay inside one cluster until it is exhausted.
    """

    n_clusters: int = 3
    cluster_size: int = 3
    seed: int = 0
    center: tuple[float, float] = (28.3575, -81.5590)
    ring_radius_m: float = 150.0
    cluster_radius_m: float = 15.0
    entrance_duration: float = 1.0
    duration_range: tuple[float, float] = (20.0, 60.0)
    popularity_range: tuple[float, float] = (50.0, 100.0)
    capacity: float = 50.0

    @property
    def n_facilities(self) -> int:
        return 1 + self.n_clusters * self.cluster_size


def generate_clustered_park(
    spec: ClusteredParkSpec, walking_speed: float = DEFAULT_WALKING_SPEED, name: str | None = None
) -> Park:
    if spec.n_clusters < 1 or spec.cluster_size < 1:
        raise ValueError("need at least one non-empty cluster")
    if not 0 <= spec.seed < 2**64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    rng = random.Random(spec.seed)
    lat0, lon0 = spec.center
    m_per_deg_lon = M_PER_DEG * math.cos(math.radians(lat0))

    def at(dx: float, dy: float) -> tuple[float, float]:
        return lat0 + dy / M_PER_DEG, lon0 + dx / m_per_deg_lon

    facs = [Facility(0, "Entrance", lat0, lon0, spec.entrance_duration, spec.capacity, 0.0)]
    for c in range(spec.n_clusters):
        theta = 2 * math.pi * c / spec.n_clusters
        cx, cy = spec.ring_radius_m * math.cos(theta), spec.ring_radius_m * math.sin(theta)
        for k in range(spec.cluster_size):
            r = spec.cluster_radius_m * math.sqrt(rng.random())
            phi = 2 * math.pi * rng.random()
            lat, lon = at(cx + r * math.cos(phi), cy + r * math.sin(phi))
            dur = rng.uniform(*spec.duration_range)
            pop = rng.uniform(*spec.popularity_range)
            fid = len(facs)
            facs.append(Facility(fid, f"C{c}-{k}", lat, lon, dur, spec.capacity, pop))
    return Park(tuple(facs), 0, walking_speed, name or f"clustered-{spec.n_clusters}x{spec.cluster_size}-s{spec.seed}")

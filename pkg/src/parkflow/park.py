"""Theme park graph: facilities, great-circle distances and walking times.

The park is a complete graph, so connections are derived on demand from
facility coordinates instead of being stored.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

EARTH_RADIUS_M = 6_371_000.0
DEFAULT_WALKING_SPEED = 60.0  # m/min


def haversine(lat1: float, lon1: float, lat2: float, lon2: float) -> float:
    """Great-circle distance in meters on a sphere of radius EARTH_RADIUS_M."""
    # canonical argument order keeps d(a, b) == d(b, a) bit for bit
    if (lat1, lon1) > (lat2, lon2):
        lat1, lon1, lat2, lon2 = lat2, lon2, lat1, lon1
    phi1 = math.radians(lat1)
    phi2 = math.radians(lat2)
    dphi = math.radians(lat2 - lat1)
    dlmb = math.radians(lon2 - lon1)
    a = math.sin(dphi / 2) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(dlmb / 2) ** 2
    return 2 * EARTH_RADIUS_M * math.asin(min(1.0, math.sqrt(a)))


@dataclass(frozen=True)
class Facility:
    id: int
    name: str
    lat: float
    lon: float
    duration: float  # minutes spent at the facility
    capacity: float  # persons per service cycle
    popularity: float

    def __post_init__(self) -> None:
        if not self.duration > 0:
            raise ValueError(f"facility {self.id}: duration must be positive")
        if not self.capacity > 0:
            raise ValueError(f"facility {self.id}: capacity must be positive")
        if not self.popularity >= 0:
            raise ValueError(f"facility {self.id}: popularity must be non-negative")
        if not -90.0 <= self.lat <= 90.0:
            raise ValueError(f"facility {self.id}: latitude {self.lat} out of range")
        if not -180.0 <= self.lon <= 180.0:
            raise ValueError(f"facility {self.id}: longitude {self.lon} out of range")


@dataclass(frozen=True)
class Park:
    """Immutable park model.

    Attributes:
        facilities: Facilities indexed by their id (ids must be 0..n-1).
        start: Id of the facility every itinerary starts from.
        walking_speed: Meters per minute, used for every hop.
        name: Label carried into simulation output.
    """

    facilities: tuple[Facility, ...]
    start: int = 0
    walking_speed: float = DEFAULT_WALKING_SPEED
    name: str = field(default="park", compare=True)

    def __post_init__(self) -> None:
        object.__setattr__(self, "facilities", tuple(self.facilities))
        for idx, fac in enumerate(self.facilities):
            if fac.id != idx:
                raise ValueError(f"facility ids must be 0..n-1 in order; got {fac.id} at position {idx}")
        if not 0 <= self.start < len(self.facilities):
            raise ValueError(f"start facility {self.start} is not a valid id")
        if not self.walking_speed > 0:
            raise ValueError("walking speed must be positive")

    def __len__(self) -> int:
        return len(self.facilities)

    def _check(self, i: int) -> None:
        if not 0 <= i < len(self.facilities):
            raise IndexError(f"no facility with id {i}")

    @cached_property
    def distances(self) -> tuple[tuple[float, ...], ...]:
        n = len(self.facilities)
        rows = [[0.0] * n for _ in range(n)]
        for i in range(n):
            fi = self.facilities[i]
            for j in range(i + 1, n):
                fj = self.facilities[j]
                d = haversine(fi.lat, fi.lon, fj.lat, fj.lon)
                rows[i][j] = rows[j][i] = d
        return tuple(tuple(r) for r in rows)

    @cached_property
    def travel_times(self) -> tuple[tuple[float, ...], ...]:
        v = self.walking_speed
        return tuple(tuple(d / v for d in row) for row in self.distances)

    def distance(self, i: int, j: int) -> float:
        """Meters between facilities ``i`` and ``j``."""
        self._check(i)
        self._check(j)
        return self.distances[i][j]

    def travel_time(self, i: int, j: int) -> float:
        """Walking minutes between facilities ``i`` and ``j``."""
        self._check(i)
        self._check(j)
        return self.travel_times[i][j]

    def with_popularity_scaled(self, factor: float) -> Park:
        facs = tuple(
            Facility(f.id, f.name, f.lat, f.lon, f.duration, f.capacity, f.popularity * factor)
            for f in self.facilities
        )
        return Park(facs, self.start, self.walking_speed, self.name)

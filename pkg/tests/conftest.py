import math

import pytest

from parkflow.ingest import M_PER_DEG
from parkflow.park import EARTH_RADIUS_M, Facility, Park


def great_circle_oracle(lat1, lon1, lat2, lon2, radius=EARTH_RADIUS_M):
    """Arc length from the chord between unit vectors (independent of the haversine code)."""

    def unit(lat, lon):
        p, l = math.radians(lat), math.radians(lon)
        return (math.cos(p) * math.cos(l), math.cos(p) * math.sin(l), math.sin(p))

    a, b = unit(lat1, lon1), unit(lat2, lon2)
    chord = math.sqrt(sum((x - y) ** 2 for x, y in zip(a, b)))
    return 2 * radius * math.asin(chord / 2)


def park_from_meters(points, durations, popularity=None, capacity=50.0, speed=60.0, name="toy"):
    """Build a park near (0, 0) from (east, north) offsets in meters."""
    n = len(points)
    popularity = popularity or [10.0] * n
    caps = capacity if isinstance(capacity, (list, tuple)) else [capacity] * n
    facs = tuple(
        Facility(i, f"f{i}", y / M_PER_DEG, x / M_PER_DEG, durations[i], caps[i], popularity[i])
        for i, (x, y) in enumerate(points)
    )
    return Park(facs, 0, speed, name)


@pytest.fixture
def make_park():
    return park_from_meters

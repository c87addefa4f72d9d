import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from parkflow.baselines import Strategy, baseline_path, dis_op_path, pod_op_path, pop_op_path
from parkflow.ingest import SyntheticParkSpec, generate_park
from parkflow.paths import is_allowed_hop, total_time

from conftest import park_from_meters


def seq(path):
    return path.facilities


@pytest.mark.parametrize("fn", [dis_op_path, pop_op_path, pod_op_path])
def test_two_facilities(fn):
    park = park_from_meters([(0, 0), (100, 0)], [10, 20])
    assert seq(fn(park, 100)) == (0, 1)
    assert seq(fn(park, 25)) == (0,)


def test_disop_collinear_trace():
    # positions east of the start: f1 at 100 m, f2 at 50 m, f3 at 150 m
    park = park_from_meters([(0, 0), (100, 0), (50, 0), (150, 0)], [5, 5, 5, 5])
    p = dis_op_path(park, 1_000)
    assert seq(p) == (0, 2, 1, 3)
    assert p.total_time == total_time(park, (0, 2, 1, 3))


def test_disop_ignores_cap_but_stops_at_budget():
    park = park_from_meters([(0, 0), (400, 0), (900, 0)], [5, 5, 5])
    assert seq(dis_op_path(park, 1_000)) == (0, 1, 2)
    first_hop = 5 + park.travel_time(0, 1) + 5
    assert seq(dis_op_path(park, first_hop - 0.01)) == (0,)


def test_popop_prefers_popular_within_cap():
    park = park_from_meters([(0, 0), (50, 0), (0, 80)], [5, 5, 5], popularity=[0, 10, 90])
    assert seq(pop_op_path(park, 1_000)) == (0, 2, 1)


def test_popop_falls_back_to_nearest():
    park = park_from_meters([(0, 0), (500, 0), (0, 300)], [5, 5, 5], popularity=[0, 90, 10])
    assert seq(pop_op_path(park, 1_000))[:2] == (0, 2)


def test_popop_four_facility_trace():
    # f1 (pop 40) and f2 (pop 70) near the start, f3 (pop 99) near f1 only
    park = park_from_meters([(0, 0), (150, 0), (-100, 0), (300, 0)], [5, 5, 5, 5], popularity=[0, 40, 70, 99])
    # start: f1, f2 in reach -> f2 (70); from f2 (x=-100): f1 is 250 m, f3 is 400 m -> fallback nearest f1;
    # from f1: f3 at 150 m -> f3
    assert seq(pop_op_path(park, 1_000)) == (0, 2, 1, 3)


def test_podop_ratio():
    park = park_from_meters([(0, 0), (100, 0), (0, 50)], [5, 5, 5], popularity=[0, 50, 30])
    assert seq(pod_op_path(park, 1_000))[:2] == (0, 2)


def test_podop_equal_ratio_takes_smaller_id():
    park = park_from_meters([(0, 0), (0, 100), (100, 0)], [5, 5, 5], popularity=[0, 40, 40])
    assert seq(pod_op_path(park, 1_000))[:2] == (0, 1)


def test_podop_five_facility_trace():
    park = park_from_meters(
        [(0, 0), (40, 0), (120, 0), (0, 90), (0, 180)], [5] * 5, popularity=[0, 10, 60, 30, 80]
    )
    # ratios from 0: f1 10/40=.25, f2 60/120=.5, f3 30/90=.33, f4 80/180=.44 -> f2
    # from f2 (120,0): f1 10/80=.125, f3 30/150=.2, f4 (216 m) out of reach -> f3
    # from f3 (0,90): f1 10/98.5=.10, f4 80/90=.89 -> f4; then f1 is all that is left
    assert seq(pod_op_path(park, 1_000)) == (0, 2, 3, 4, 1)


def test_podop_colocated_floor():
    park = park_from_meters([(0, 0), (0, 0), (30, 0)], [5, 5, 5], popularity=[0, 2, 50])
    # 2 / 1 m floor = 2 beats 50 / 30 m = 1.67
    assert seq(pod_op_path(park, 1_000))[:2] == (0, 1)


def test_uniform_popularity_equal_distances_disop_equals_podop():
    park = park_from_meters([(0, 0), (0, 100), (100, 0), (0, -100), (-100, 0)], [5] * 5, popularity=[7] * 5)
    assert seq(dis_op_path(park, 11)) == seq(pod_op_path(park, 11)) == (0,)
    assert seq(dis_op_path(park, 12)) == seq(pod_op_path(park, 12)) == (0, 1)


def test_strategy_parsing():
    assert Strategy.parse(" SCAIR ") is Strategy.SCAIR
    assert Strategy.PODOP.label == "PodOp"
    with pytest.raises(ValueError, match="unknown strategy"):
        Strategy.parse("greedy")
    with pytest.raises(ValueError):
        baseline_path(Strategy.SCAIR, park_from_meters([(0, 0), (1, 0)], [1, 1]), 10)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 12), st.integers(0, 10_000), st.floats(5, 400), st.sampled_from(list(Strategy)[:3]))
def test_baseline_invariants(n, seed, budget, strategy):
    park = generate_park(SyntheticParkSpec(n_facilities=n, seed=seed))
    p = baseline_path(strategy, park, budget)
    s = p.facilities
    assert s[0] == park.start and len(set(s)) == len(s)
    assert p.total_time == total_time(park, s)
    if len(s) > 1:
        assert p.total_time <= budget
    if strategy is not Strategy.DISOP:
        for k in range(1, len(s)):
            assert is_allowed_hop(park, set(s[:k]), s[k - 1], s[k], 200.0)
    assert baseline_path(strategy, park, budget) == p

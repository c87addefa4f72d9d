import pytest

from parkflow.baselines import Strategy
from parkflow.ingest import SyntheticParkSpec, generate_park
from parkflow.paths import FeasibleSetTooLarge, find_feasible_paths, popularity
from parkflow.simulation import (
    DEFAULT_BUDGETS,
    DEFAULT_LAMBDAS,
    GridCellError,
    SimulationConfig,
    run_simulation,
    simulate_grid,
)
from parkflow.transition import construct_tm

from conftest import park_from_meters


@pytest.fixture
def line_park():
    return park_from_meters([(0, 0), (120, 0), (240, 0)], [30, 20, 10], popularity=[1, 5, 9], capacity=50)


@pytest.fixture
def fork_park():
    # two disjoint branches from a short entrance stop
    return park_from_meters([(0, 0), (150, 0), (-150, 0)], [1, 30, 30], popularity=[0, 20, 60], capacity=[50, 10, 10])


def scair(park, budget, lam, **kw):
    fs = find_feasible_paths(park, budget)
    cfg = SimulationConfig(Strategy.SCAIR, budget, lam, **kw)
    return run_simulation(park, fs, construct_tm(park, fs, lam), cfg)


def test_start_minutes():
    assert SimulationConfig("disop", 3, 1.0).start_minutes() == [0.0, 1.0, 2.0]
    assert SimulationConfig("disop", 3, 0.5, horizon=1.0).start_minutes() == [0.0, 0.5]
    assert len(SimulationConfig("disop", 60, 0.01).start_minutes()) == 6000


@pytest.mark.parametrize("strategy", list(Strategy))
def test_single_agent_has_no_queue(line_park, strategy):
    cfg = SimulationConfig(strategy, 100, 5.0, horizon=5.0)
    fs = find_feasible_paths(line_park, 100)
    tm = construct_tm(line_park, fs, 5.0) if strategy is Strategy.SCAIR else None
    res = run_simulation(line_park, fs if tm is not None else None, tm, cfg)
    assert res.n_agents == 1 and res.avg_qt == 0.0
    pop = popularity(line_park, res.agents[0].facilities)
    assert res.utility == res.welfare == pop / 1.0


def test_two_baseline_agents_hand_ledger(line_park):
    res = run_simulation(line_park, None, None, SimulationConfig("disop", 100, 0.5, horizon=1.0))
    a, b = res.agents
    assert a.facilities == b.facilities == (0, 1, 2)
    assert a.queue_time == 0.0
    # every stop of the second agent shares hour 0 with the first: 30/50 + 20/50 + 10/50
    assert b.queue_time == pytest.approx(1.2)
    assert res.avg_qt == pytest.approx(0.6)
    assert res.qt_ratio == pytest.approx(0.006)
    assert b.utility == pytest.approx(15 / 1.2)
    assert res.welfare == pytest.approx(15 + 15 / 1.2)


def test_two_scair_agents_split_over_disjoint_paths(fork_park):
    res = scair(fork_park, 40, 0.5, horizon=1.0)
    a, b = res.agents
    assert a.facilities == (0, 2)  # most popular path first
    assert b.facilities == (0, 1)
    assert a.queue_time == 0.0
    assert b.queue_time == pytest.approx(1 / 50)  # only the entrance is shared
    assert res.n_paths == 2


def test_first_agent_matches_across_lambdas(fork_park):
    firsts = {scair(fork_park, 40, lam).agents[0].facilities for lam in (0.05, 0.5, 3.0)}
    assert firsts == {(0, 2)}


def test_reproducible_and_worker_independent():
    parks = [generate_park(SyntheticParkSpec(6, seed=s, capacity=5)) for s in (1, 2)]
    kw = dict(budgets=(60, 120), lambdas=(0.5, 2.0))
    one = simulate_grid(parks, workers=1, **kw)
    assert one == simulate_grid(parks, workers=1, **kw)
    assert one == simulate_grid(parks, workers=2, **kw)


def test_grid_order_and_size():
    parks = [generate_park(SyntheticParkSpec(4, seed=3)), generate_park(SyntheticParkSpec(4, seed=4))]
    res = simulate_grid(parks, budgets=(60, 90, 120), lambdas=(1.0, 5.0))
    assert len(res) == 2 * 3 * 2 * 4
    keys = [(r.park, r.config.budget, r.config.lam, r.config.strategy) for r in res]
    expect = [(p.name, b, lam, s) for p in parks for b in (60, 90, 120) for lam in (1.0, 5.0) for s in Strategy]
    assert keys == expect
    assert len(DEFAULT_BUDGETS) * len(DEFAULT_LAMBDAS) * len(Strategy) * 2 == 1672
    assert DEFAULT_LAMBDAS[0] == 0.01 and DEFAULT_LAMBDAS[-1] == 1.0


def test_singleton_grid():
    park = generate_park(SyntheticParkSpec(5, seed=42))
    (res,) = simulate_grid([park], budgets=(120,), lambdas=(0.5,), strategies=("scair",))
    assert res.config.strategy is Strategy.SCAIR and res.n_agents == 240


@pytest.mark.parametrize("strategy", ["disop", "popop", "podop"])
def test_baseline_congestion_grows_as_arrivals_densify(strategy):
    park = generate_park(SyntheticParkSpec(10, seed=42))
    qts = [
        run_simulation(park, None, None, SimulationConfig(strategy, 180, lam)).avg_qt for lam in (2.0, 1.0, 0.5, 0.1)
    ]
    assert qts == sorted(qts) and qts[-1] > 0


def test_errors(fork_park):
    fs = find_feasible_paths(fork_park, 40)
    tm = construct_tm(fork_park, fs, 0.5)
    with pytest.raises(ValueError, match="feasible set"):
        run_simulation(fork_park, None, None, SimulationConfig("scair", 40, 0.5))
    with pytest.raises(ValueError, match="transition matrix"):
        run_simulation(fork_park, None, tm, SimulationConfig("popop", 40, 0.5))
    with pytest.raises(ValueError, match="2x2"):
        run_simulation(fork_park, find_feasible_paths(fork_park, 20), tm, SimulationConfig("scair", 20, 0.5))
    for kw in (dict(budget=0), dict(lam=-1), dict(q_min=0), dict(horizon=0.1)):
        args = dict(strategy="disop", budget=40, lam=0.5) | kw
        with pytest.raises(ValueError):
            SimulationConfig(**args)
    with pytest.raises(ValueError):
        simulate_grid([fork_park], budgets=())


def test_failing_cell_is_named():
    park = generate_park(SyntheticParkSpec(6, seed=1, bbox=(0, 0.0009, 0, 0.0009)))
    with pytest.raises(GridCellError, match="budget=300 lambda=1.0 strategy=scair") as info:
        simulate_grid([park], budgets=(300,), lambdas=(1.0,), max_paths=5)
    assert isinstance(info.value.__cause__, FeasibleSetTooLarge)

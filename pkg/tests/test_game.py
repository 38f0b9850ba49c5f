"""Coalition game: payoffs, admissibility, convergence, stability."""

import numpy as np
import pytest

from uavsteer.errors import DomainError, NonConvergenceError
from uavsteer.scenario import ScenarioConfig, UavNode, BaseStation, Topology, generate_topology
from uavsteer.game import (
    CoalitionPartition,
    characteristic,
    find_admissible_transfer,
    payoff,
    random_assignment,
    run_coalition_game,
    trace_to_csv,
    transfer_admissible,
)


def _two_uav_topology():
    """Two UAVs, two single-BS operators, everyone under its own mast.

    UAV 1's serving site under operator 0 sits 200 m away while UAV 0
    interferes from 20 m, so with both UAVs on operator 0 the transfer of
    UAV 1 to operator 1 is admissible by construction.
    """
    uavs = [UavNode(0, 400.0, 480.0, 80.0, 23.0),
            UavNode(1, 600.0, 480.0, 80.0, 23.0)]
    bss = [BaseStation(0, 0, 400.0, 500.0, 25.0),
           BaseStation(1, 1, 600.0, 500.0, 25.0)]
    serving = {(0, 0): 0, (0, 1): 1, (1, 0): 0, (1, 1): 1}
    return Topology(uavs, bss, serving)


def _two_uav_config():
    return ScenarioConfig(uav_count=2, mno_count=2, bs_per_mno=1, gamma_th=1.0)


def test_hand_built_transfer_is_admissible():
    topo, cfg = _two_uav_topology(), _two_uav_config()
    both = CoalitionPartition({0: 0, 1: 0}, {})
    assert payoff(1, [0, 1], 0, topo, cfg) < 0.01
    assert payoff(1, [1], 1, topo, cfg) > 0.99
    assert transfer_admissible(1, 0, 1, both, topo, cfg)
    # splitting the pair is strictly better for the pooled value too
    joint = characteristic([0, 1], 0, topo, cfg)
    split = characteristic([0], 0, topo, cfg) + characteristic([1], 1, topo, cfg)
    assert split > joint


def test_hand_built_split_is_stable():
    topo, cfg = _two_uav_topology(), _two_uav_config()
    both = CoalitionPartition({0: 0, 1: 0}, {})
    assert find_admissible_transfer(both, topo, cfg) == (0, 0, 1)
    split = CoalitionPartition({0: 0, 1: 1}, {})
    assert find_admissible_transfer(split, topo, cfg) is None


def test_transfer_admissible_rejects_wrong_membership():
    topo, cfg = _two_uav_topology(), _two_uav_config()
    both = CoalitionPartition({0: 0, 1: 0}, {})
    with pytest.raises(DomainError):
        transfer_admissible(1, 1, 0, both, topo, cfg)
    assert transfer_admissible(1, 0, 0, both, topo, cfg) is False


def test_payoff_requires_membership():
    topo, cfg = _two_uav_topology(), _two_uav_config()
    with pytest.raises(DomainError):
        payoff(1, [0], 0, topo, cfg)


def test_characteristic_is_sum_of_member_payoffs():
    cfg = ScenarioConfig(uav_count=10, mno_count=2, bs_per_mno=3)
    topo = generate_topology(cfg, 8)
    coalition = [0, 2, 5, 7]
    total = characteristic(coalition, 1, topo, cfg)
    parts = sum(payoff(u, coalition, 1, topo, cfg) for u in coalition)
    assert total == pytest.approx(parts, abs=1e-12)
    assert characteristic([], 0, topo, cfg) == 0.0


def test_random_assignment_properties():
    cfg = ScenarioConfig(uav_count=30, mno_count=3, bs_per_mno=4)
    topo = generate_topology(cfg, 17)
    part = random_assignment(topo, cfg, 5)
    assert set(part.assignment) == set(range(30))
    assert all(0 <= o < 3 for o in part.assignment.values())
    assert set(part.payoffs) == set(range(30))
    assert all(0.0 <= v <= 1.0 for v in part.payoffs.values())
    assert part.transfer_count == 0
    assert not part.stable
    again = random_assignment(topo, cfg, 5)
    assert again.assignment == part.assignment
    assert again.payoffs == part.payoffs
    other = random_assignment(topo, cfg, 6)
    assert other.assignment != part.assignment


def test_game_run_is_deterministic_and_stable():
    cfg = ScenarioConfig(uav_count=20, mno_count=3, bs_per_mno=4)
    topo = generate_topology(cfg, 23)
    p1, t1 = run_coalition_game(topo, cfg, 99)
    p2, t2 = run_coalition_game(topo, cfg, 99)
    assert p1.assignment == p2.assignment
    assert t1.transfers == t2.transfers
    assert p1.stable
    assert find_admissible_transfer(p1, topo, cfg) is None


def test_game_history_bookkeeping():
    cfg = ScenarioConfig(uav_count=20, mno_count=3, bs_per_mno=4)
    topo = generate_topology(cfg, 23)
    part, trace = run_coalition_game(topo, cfg, 99)
    hist = trace.sum_payoff_history
    assert len(hist) == part.transfer_count + 1
    assert len(trace.transfers) == part.transfer_count
    assert all(b > a for a, b in zip(hist, hist[1:]))
    assert hist[-1] == pytest.approx(sum(part.payoffs.values()), abs=1e-9)
    # start equals the paired random assignment's total payoff
    start = random_assignment(topo, cfg, 99)
    assert hist[0] == pytest.approx(sum(start.payoffs.values()), abs=1e-12)


def test_game_payoff_cache_matches_fresh_evaluation():
    cfg = ScenarioConfig(uav_count=15, mno_count=3, bs_per_mno=4)
    topo = generate_topology(cfg, 31)
    part, _ = run_coalition_game(topo, cfg, 7)
    for u, o in part.assignment.items():
        coalition = [v for v, oo in part.assignment.items() if oo == o]
        fresh = payoff(u, coalition, o, topo, cfg)
        assert part.payoffs[u] == pytest.approx(fresh, abs=1e-12)


def test_single_operator_means_no_transfers():
    cfg = ScenarioConfig(uav_count=12, mno_count=1, bs_per_mno=4)
    topo = generate_topology(cfg, 2)
    part, trace = run_coalition_game(topo, cfg, 3)
    assert part.transfer_count == 0
    assert part.stable
    assert trace.transfers == []


def test_single_uav_hops_at_most_once_per_operator():
    cfg = ScenarioConfig(uav_count=1, mno_count=4, bs_per_mno=3)
    topo = generate_topology(cfg, 12)
    part, _ = run_coalition_game(topo, cfg, 4)
    assert part.transfer_count <= cfg.mno_count - 1
    assert part.stable


def test_exhausted_pass_budget_raises():
    cfg = ScenarioConfig(uav_count=6, mno_count=2, bs_per_mno=2)
    topo = generate_topology(cfg, 9)
    with pytest.raises(NonConvergenceError):
        run_coalition_game(topo, cfg, 1, max_passes=0)


def test_members_listing_is_sorted():
    part = CoalitionPartition({3: 0, 1: 0, 2: 1}, {})
    assert part.members(0) == [1, 3]
    assert part.members(1) == [2]
    assert part.members(2) == []


def test_trace_csv_dump(tmp_path):
    cfg = ScenarioConfig(uav_count=10, mno_count=3, bs_per_mno=3)
    topo = generate_topology(cfg, 5)
    part, trace = run_coalition_game(topo, cfg, 2)
    path = tmp_path / "trace.csv"
    trace_to_csv(trace, path)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "index,uav_id,from_mno,to_mno,sum_payoff_after"
    assert len(lines) == 1 + part.transfer_count


def test_every_applied_transfer_was_admissible_on_the_spot():
    # replay the trace and check both conditions at each step
    cfg = ScenarioConfig(uav_count=12, mno_count=3, bs_per_mno=3, gamma_th=0.01)
    topo = generate_topology(cfg, 44)
    part, trace = run_coalition_game(topo, cfg, 10)
    state = dict(random_assignment(topo, cfg, 10).assignment)
    for (u, i, j) in trace.transfers:
        assert state[u] == i
        replay = CoalitionPartition(dict(state), {})
        assert transfer_admissible(u, i, j, replay, topo, cfg)
        state[u] = j
    assert state == part.assignment

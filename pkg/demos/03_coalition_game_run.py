"""One coalition-formation run, watched closely.

40 UAVs pick between 3 operators.  Starting from a uniform random
assignment, admissible transfers (strict self-improvement plus strict
pooled-value improvement) are applied until none remains; the total
payoff climbs monotonically and the final partition passes an exhaustive
stability audit.
"""

import numpy as np

from uavsteer import ScenarioConfig, generate_topology
from uavsteer.game import random_assignment, run_coalition_game, find_admissible_transfer

cfg = ScenarioConfig(uav_count=40, mno_count=3)
topo = generate_topology(cfg, seed=2024)

start = random_assignment(topo, cfg, seed=11)
partition, trace = run_coalition_game(topo, cfg, seed=11)

n = cfg.uav_count
print(f"{n} UAVs, {cfg.mno_count} operators, {cfg.bs_per_mno} BS each")
print(f"random start: sum payoff {sum(start.payoffs.values()):.4f}  "
      f"mean outage {1 - sum(start.payoffs.values()) / n:.3e}")
print(f"converged:    sum payoff {sum(partition.payoffs.values()):.4f}  "
      f"mean outage {1 - sum(partition.payoffs.values()) / n:.3e}  "
      f"after {partition.transfer_count} transfers")

print("\ncoalition sizes before -> after:")
for o in range(cfg.mno_count):
    before = sum(1 for v in start.assignment.values() if v == o)
    after = len(partition.members(o))
    print(f"  operator {o}: {before:2d} -> {after:2d}")

print("\nfirst ten transfers (uav, from, to, total payoff after):")
for k, (u, i, j) in enumerate(trace.transfers[:10]):
    print(f"  {k:2d}: uav {u:3d}  {i} -> {j}   {trace.sum_payoff_history[k + 1]:.6f}")

hist = np.array(trace.sum_payoff_history)
print(f"\npayoff history is strictly increasing: {bool(np.all(np.diff(hist) > 0))}")
print(f"exhaustive audit finds another admissible transfer: "
      f"{find_admissible_transfer(partition, topo, cfg)}")

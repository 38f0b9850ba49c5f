"""A reduced sweep over swarm size and operator count.

Runs the game and its paired random baseline on a small grid (3 trials
per cell so the whole thing takes well under a minute), prints the trend
table, and writes the three CSV artifacts next to this script.  The
full-scale protocol is the same thing with more cells and 9 trials; see
the sweep-* subcommands of the CLI.
"""

import os

import numpy as np

from uavsteer import ScenarioConfig
from uavsteer.experiments import SweepSpec, sweep_outage, sweep_payoff, sweep_transfers

here = os.path.dirname(os.path.abspath(__file__))
out = lambda name: os.path.join(here, name)

cfg = ScenarioConfig()
uav_counts = [20, 40, 60]
mno_counts = [2, 3, 4]
trials = 3

spec = SweepSpec(uav_counts, mno_counts, trials, 42, out("sweep_outage.csv"))
results = sweep_outage(spec, cfg)

print("trial-averaged mean outage, game / random:")
print("  U \\ O   " + "   ".join(f"{o:^21d}" for o in mno_counts))
for u in uav_counts:
    cells = []
    for o in mno_counts:
        rs = [r for r in results if r.uav_count == u and r.mno_count == o]
        game = np.mean([r.mean_outage_game for r in rs])
        rand = np.mean([r.mean_outage_random for r in rs])
        cells.append(f"{game:.2e} / {rand:.2e}")
    print(f"  {u:5d}  " + "   ".join(cells))
print("more operators and fewer UAVs both mean less interference;")
print("the game never does worse than the random start it grew from\n")

spec = SweepSpec([60], mno_counts, trials, 42, out("sweep_payoff.csv"))
pay = sweep_payoff(spec, cfg)
print("sum payoff at 60 UAVs (game - random gap):")
for o in mno_counts:
    rs = [r for r in pay if r.mno_count == o]
    gap = np.mean([r.sum_payoff_game - r.sum_payoff_random for r in rs])
    print(f"  {o} operators: +{gap:.4f}")

spec = SweepSpec(uav_counts, mno_counts, trials, 42, out("sweep_transfers.csv"))
tra = sweep_transfers(spec, cfg)
print("\nmean transfers to convergence:")
for o in mno_counts:
    row = [np.mean([r.transfer_count for r in tra
                    if r.uav_count == u and r.mno_count == o]) for u in uav_counts]
    print(f"  {o} operators: " + "  ".join(f"{v:5.1f}" for v in row))

print("\nwrote sweep_outage.csv, sweep_payoff.csv, sweep_transfers.csv")

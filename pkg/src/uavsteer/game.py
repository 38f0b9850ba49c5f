"""Coalition formation over operators: each UAV joins exactly one MNO.

A partition assigns every UAV to one operator; the UAVs sharing an
operator form a coalition and interfere with each other at their serving
base stations (other coalitions transmit on other operators' spectrum and
do not interfere).  A UAV's payoff is 1 minus its closed-form outage
inside its coalition; the characteristic value of a coalition is the sum
of its members' payoffs.

A transfer of UAV u from coalition S_i to S_j is admissible when both
(a) u's own payoff strictly improves, and
(b) the summed value w(S_i \\ u) + w(S_j + u) strictly exceeds
    w(S_i) + w(S_j),
each with a tiny relative margin so floating-point noise can neither
create nor sustain cycles.  Condition (b) makes the total payoff a strict
potential, so repeatedly applying admissible transfers terminates in a
stable partition.
"""

from dataclasses import dataclass, field

import numpy as np

from .channel import get_link_table
from .errors import DomainError, NonConvergenceError
from .outage import closed_form_outage_batch, order_chain

# Relative strictness margin for both admissibility conditions.
STRICT_MARGIN = 1e-12


@dataclass
class CoalitionPartition:
    """Assignment of UAVs to operators plus cached per-UAV payoffs."""

    assignment: dict
    payoffs: dict
    transfer_count: int = 0
    stable: bool = False

    def members(self, mno_id):
        return sorted(u for u, o in self.assignment.items() if o == mno_id)


@dataclass
class GameTrace:
    """History of one game run: total payoff after start and each transfer."""

    sum_payoff_history: list = field(default_factory=list)
    transfers: list = field(default_factory=list)


def _strictly_greater(x, y):
    return x > y + STRICT_MARGIN * max(1.0, abs(x), abs(y))


class _Engine:
    """Array-side payoff evaluation for one (topology, config) pair."""

    def __init__(self, topology, config):
        table = get_link_table(topology, config)
        self.p = table.p_los
        self.a = table.a_mean
        self.b = table.b_mean
        self.serving_bs = table.serving_bs
        self.m = config.nakagami_m
        self.gamma_th = config.gamma_th
        self.chain = order_chain(config.laguerre_order)

    def coalition_payoffs(self, members, mno):
        """Payoffs of every member of one coalition, aligned with ``members``.

        members must be sorted ascending; member t interferes with member r
        at r's serving base station.
        """
        mem = np.asarray(members, dtype=np.int64)
        n = len(mem)
        if n == 0:
            return np.empty(0)
        bs = self.serving_bs[mem, mno]
        cross_p = self.p[mem[None, :], bs[:, None]]  # [r, t] = stats of t at r's BS
        cross_a = self.a[mem[None, :], bs[:, None]]
        cross_b = self.b[mem[None, :], bs[:, None]]
        keep = ~np.eye(n, dtype=bool)
        probs, _ = closed_form_outage_batch(
            self.p[mem, bs], self.a[mem, bs], self.b[mem, bs],
            cross_p[keep].reshape(n, n - 1),
            cross_a[keep].reshape(n, n - 1),
            cross_b[keep].reshape(n, n - 1),
            self.m, self.gamma_th, self.chain,
        )
        return 1.0 - probs

    def prospective_payoffs(self, candidates, target_members, mno):
        """Payoff each candidate would get after joining the target coalition.

        Candidates are outside the coalition; every candidate row sees the
        full current membership as interferers at the candidate's own
        serving base station under ``mno``.
        """
        cand = np.asarray(candidates, dtype=np.int64)
        tgt = np.asarray(target_members, dtype=np.int64)
        bs = self.serving_bs[cand, mno]
        probs, _ = closed_form_outage_batch(
            self.p[cand, bs], self.a[cand, bs], self.b[cand, bs],
            self.p[tgt[None, :], bs[:, None]],
            self.a[tgt[None, :], bs[:, None]],
            self.b[tgt[None, :], bs[:, None]],
            self.m, self.gamma_th, self.chain,
        )
        return 1.0 - probs


def payoff(u, coalition, mno, topology, config):
    """Payoff of UAV u inside ``coalition`` (which contains u) on ``mno``."""
    members = sorted(set(coalition))
    if u not in members:
        raise DomainError(f"uav {u} is not in the coalition")
    eng = _Engine(topology, config)
    others = [t for t in members if t != u]
    return float(eng.prospective_payoffs([u], others, mno)[0])


def characteristic(coalition, mno, topology, config):
    """Coalition value w(S): sum of member payoffs; empty coalitions are 0."""
    members = sorted(set(coalition))
    if not members:
        return 0.0
    eng = _Engine(topology, config)
    return float(eng.coalition_payoffs(members, mno).sum())


def transfer_admissible(u, from_mno, to_mno, partition, topology, config):
    """Check both transfer conditions for moving u from one MNO to another."""
    if partition.assignment.get(u) != from_mno:
        raise DomainError(f"uav {u} is not assigned to operator {from_mno}")
    if from_mno == to_mno:
        return False
    eng = _Engine(topology, config)
    s_i = partition.members(from_mno)
    s_j = partition.members(to_mno)
    cur = float(eng.coalition_payoffs(s_i, from_mno)[s_i.index(u)])
    new = float(eng.prospective_payoffs([u], s_j, to_mno)[0])
    if not _strictly_greater(new, cur):
        return False
    w_i = float(eng.coalition_payoffs(s_i, from_mno).sum())
    w_j = float(eng.coalition_payoffs(s_j, to_mno).sum()) if s_j else 0.0
    rest = [t for t in s_i if t != u]
    w_i_new = float(eng.coalition_payoffs(rest, from_mno).sum()) if rest else 0.0
    w_j_new = float(eng.coalition_payoffs(sorted(s_j + [u]), to_mno).sum())
    return _strictly_greater(w_i_new + w_j_new, w_i + w_j)


def random_assignment(topology, config, seed):
    """Uniform random partition with payoffs computed, flagged unstable."""
    rng = np.random.default_rng(seed)
    uav_ids = np.array(sorted(u.id for u in topology.uavs))
    alloc = rng.integers(0, config.mno_count, size=len(uav_ids))
    eng = _Engine(topology, config)
    assignment = {int(u): int(o) for u, o in zip(uav_ids, alloc)}
    payoffs = {}
    for o in range(config.mno_count):
        mem = uav_ids[alloc == o]
        vals = eng.coalition_payoffs(mem, o)
        for u, v in zip(mem, vals):
            payoffs[int(u)] = float(v)
    return CoalitionPartition(assignment, payoffs, 0, False)


def run_coalition_game(topology, config, seed, max_passes=100_000):
    """Play admissible transfers to convergence from a random start.

    Scans ordered coalition pairs (S_i, S_j), i != j, in index order; the
    members of S_i are visited in ascending id using a snapshot taken when
    the pair is entered, and admissible transfers apply immediately.  The
    run terminates when a full pass applies no transfer; exceeding
    ``max_passes`` raises NonConvergenceError (the strict potential makes
    that unreachable in practice).

    Returns (CoalitionPartition, GameTrace); the trace's payoff history
    has the starting total followed by the total after each transfer.
    """
    eng = _Engine(topology, config)
    n_mno = config.mno_count
    start = random_assignment(topology, config, seed)

    members = [np.array(start.members(o), dtype=np.int64) for o in range(n_mno)]
    pay = [np.array([start.payoffs[int(u)] for u in members[o]]) for o in range(n_mno)]
    w = np.array([float(v.sum()) if len(v) else 0.0 for v in pay])
    assignment = dict(start.assignment)

    trace = GameTrace()
    trace.sum_payoff_history.append(float(w.sum()))
    transfer_count = 0

    for _ in range(int(max_passes)):
        moved_this_pass = 0
        for i in range(n_mno):
            for j in range(n_mno):
                if i == j:
                    continue
                snapshot = members[i].copy()
                prospects = None  # lazily batched; drops after any mutation
                for u in snapshot:
                    u = int(u)
                    if assignment[u] != i:
                        continue  # moved away earlier in this pass
                    if prospects is None:
                        live = [t for t in snapshot if assignment[int(t)] == i]
                        live_ids = np.array(live, dtype=np.int64)
                        vals = eng.prospective_payoffs(live_ids, members[j], j)
                        prospects = dict(zip(map(int, live_ids), vals))
                    cur = pay[i][np.searchsorted(members[i], u)]
                    if not _strictly_greater(float(prospects[u]), float(cur)):
                        continue
                    rest = members[i][members[i] != u]
                    joined = np.sort(np.append(members[j], u))
                    pay_i_new = eng.coalition_payoffs(rest, i)
                    pay_j_new = eng.coalition_payoffs(joined, j)
                    w_i_new = float(pay_i_new.sum()) if len(rest) else 0.0
                    w_j_new = float(pay_j_new.sum())
                    if not _strictly_greater(w_i_new + w_j_new, float(w[i] + w[j])):
                        continue
                    # apply the transfer, reusing the hypothetical payoffs
                    members[i], pay[i] = rest, pay_i_new
                    members[j], pay[j] = joined, pay_j_new
                    w[i], w[j] = w_i_new, w_j_new
                    assignment[u] = j
                    transfer_count += 1
                    moved_this_pass += 1
                    trace.transfers.append((u, i, j))
                    trace.sum_payoff_history.append(float(w.sum()))
                    prospects = None
        if moved_this_pass == 0:
            payoffs = {}
            for o in range(n_mno):
                for u, v in zip(members[o], pay[o]):
                    payoffs[int(u)] = float(v)
            return (
                CoalitionPartition(assignment, payoffs, transfer_count, True),
                trace,
            )
    raise NonConvergenceError(f"no stable partition within {max_passes} passes")


def find_admissible_transfer(partition, topology, config):
    """Exhaustive stability audit: first admissible (u, from, to) or None.

    Scans in the same order as the game loop and re-derives every payoff
    from scratch, so a freshly converged partition must return None.
    """
    eng = _Engine(topology, config)
    n_mno = config.mno_count
    members = [np.array(partition.members(o), dtype=np.int64) for o in range(n_mno)]
    pay = [eng.coalition_payoffs(members[o], o) for o in range(n_mno)]
    w = [float(v.sum()) if len(v) else 0.0 for v in pay]
    for i in range(n_mno):
        for j in range(n_mno):
            if i == j or len(members[i]) == 0:
                continue
            prospects = eng.prospective_payoffs(members[i], members[j], j)
            for k, u in enumerate(members[i]):
                if not _strictly_greater(float(prospects[k]), float(pay[i][k])):
                    continue
                rest = members[i][members[i] != u]
                joined = np.sort(np.append(members[j], u))
                w_i_new = float(eng.coalition_payoffs(rest, i).sum()) if len(rest) else 0.0
                w_j_new = float(eng.coalition_payoffs(joined, j).sum())
                if _strictly_greater(w_i_new + w_j_new, w[i] + w[j]):
                    return (int(u), i, j)
    return None


def trace_to_csv(trace, path):
    """Write a game trace as CSV rows (index, uav_id, from, to, sum_payoff_after)."""
    import csv

    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["index", "uav_id", "from_mno", "to_mno", "sum_payoff_after"])
        for k, (u, i, j) in enumerate(trace.transfers):
            wr.writerow([k, u, i, j, trace.sum_payoff_history[k + 1]])

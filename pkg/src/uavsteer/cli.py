"""Command-line front end.

Exit codes: 0 on success, 1 on usage/config errors, 2 when a numerical
validation gate fails or a computation is numerically untrustworthy.
"""

import argparse
import sys

from .channel import get_link_table, link_table_to_csv
from .errors import (
    ConfigurationError, DomainError, ModelApplicabilityError,
    NumericalInstabilityError, NonConvergenceError, TopologyError,
)
from .experiments import (
    SweepSpec, mix_seed, sweep_outage, sweep_payoff, sweep_transfers,
    validate_outage, validation_to_csv,
)
from .game import random_assignment, run_coalition_game, trace_to_csv
from .scenario import ScenarioConfig, generate_topology, parse_config_file, topology_to_csv

USAGE_ERROR = 1
NUMERICAL_ERROR = 2


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad usage; this tool reserves 2 for numerical
    # failures, so usage problems exit 1 instead.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def _int_list(text):
    try:
        return [int(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _load_config(args):
    cfg = parse_config_file(args.config) if args.config else ScenarioConfig()
    return cfg


def build_parser():
    p = _Parser(
        prog="uavsteer",
        description="Uplink outage and operator-selection games for UAV swarms.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, out_required=True):
        sp.add_argument("--config", help="plain-text key=value scenario config")
        sp.add_argument("--seed", type=int, default=None, help="base seed (default: config rng_seed)")
        sp.add_argument("--out", required=out_required, help="output CSV path")
        sp.add_argument("--trials", type=int, default=None, help="trials per cell (default: config)")
        sp.add_argument("--parallel", type=int, default=1, help="worker processes")

    sp = sub.add_parser("run", help="one game run on one random topology")
    sp.add_argument("--config", help="plain-text key=value scenario config")
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--out", help="write the transfer trace CSV here")
    sp.add_argument("--dump-topology", help="write node positions CSV here")
    sp.add_argument("--dump-links", help="write per-link statistics CSV here")

    sp = sub.add_parser("sweep-outage", help="mean outage vs swarm size, game vs random")
    common(sp)
    sp.add_argument("--uav-counts", type=_int_list, default=[20, 40, 60, 80, 100, 120])
    sp.add_argument("--mno-counts", type=_int_list, default=[2, 3, 4])

    sp = sub.add_parser("sweep-payoff", help="total payoff vs operator count")
    common(sp)
    sp.add_argument("--uav-count", type=int, default=120)
    sp.add_argument("--mno-counts", type=_int_list, default=[2, 3, 4])

    sp = sub.add_parser("sweep-transfers", help="transfers to convergence per cell")
    common(sp)
    sp.add_argument("--uav-counts", type=_int_list, default=[20, 40, 60, 80, 100, 120])
    sp.add_argument("--mno-counts", type=_int_list, default=[2, 3, 4])

    sp = sub.add_parser("validate-outage", help="closed form vs Monte Carlo gate")
    sp.add_argument("--instances", type=int, default=100)
    sp.add_argument("--samples", type=int, default=1_000_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", help="optional per-instance report CSV")
    return p


def _cmd_run(args):
    cfg = _load_config(args)
    seed = cfg.rng_seed if args.seed is None else args.seed
    topology = generate_topology(cfg, mix_seed(seed, 1))
    baseline = random_assignment(topology, cfg, mix_seed(seed, 2))
    partition, trace = run_coalition_game(topology, cfg, mix_seed(seed, 2))
    n = cfg.uav_count
    print(f"uavs={n} mnos={cfg.mno_count} transfers={partition.transfer_count}")
    print(f"sum_payoff: random={sum(baseline.payoffs.values()):.6f} "
          f"game={sum(partition.payoffs.values()):.6f}")
    print(f"mean_outage: random={1 - sum(baseline.payoffs.values()) / n:.6g} "
          f"game={1 - sum(partition.payoffs.values()) / n:.6g}")
    if args.out:
        trace_to_csv(trace, args.out)
    if args.dump_topology:
        topology_to_csv(topology, args.dump_topology)
    if args.dump_links:
        link_table_to_csv(get_link_table(topology, cfg), args.dump_links)
    return 0


def _make_spec(args, cfg, uav_counts):
    seed = cfg.rng_seed if args.seed is None else args.seed
    trials = cfg.trials if args.trials is None else args.trials
    return SweepSpec(uav_counts, args.mno_counts, trials, seed, args.out)


def _cmd_sweep_outage(args):
    cfg = _load_config(args)
    spec = _make_spec(args, cfg, args.uav_counts)
    sweep_outage(spec, cfg, parallel=args.parallel)
    print(f"wrote {spec.output_path}")
    return 0


def _cmd_sweep_payoff(args):
    cfg = _load_config(args)
    spec = _make_spec(args, cfg, [args.uav_count])
    sweep_payoff(spec, cfg, parallel=args.parallel)
    print(f"wrote {spec.output_path}")
    return 0


def _cmd_sweep_transfers(args):
    cfg = _load_config(args)
    spec = _make_spec(args, cfg, args.uav_counts)
    sweep_transfers(spec, cfg, parallel=args.parallel)
    print(f"wrote {spec.output_path}")
    return 0


def _cmd_validate(args):
    report = validate_outage(args.instances, args.samples, args.seed)
    for r in report.rows:
        print(f"instance {r.instance:3d}  N={r.n_interferers}  "
              f"cf={r.closed_form:.6g}  mc={r.monte_carlo:.6g}  "
              f"delta={r.abs_delta:.3g}  tol={r.tolerance:.3g}  "
              f"{'pass' if r.passed else 'FAIL'}")
    print(f"passed {report.passed_count}/{len(report.rows)} (need {report.required_count})")
    if args.out:
        validation_to_csv(report, args.out)
    return 0 if report.ok else NUMERICAL_ERROR


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "run": _cmd_run,
        "sweep-outage": _cmd_sweep_outage,
        "sweep-payoff": _cmd_sweep_payoff,
        "sweep-transfers": _cmd_sweep_transfers,
        "validate-outage": _cmd_validate,
    }
    try:
        return handlers[args.command](args)
    except (ConfigurationError, TopologyError, ModelApplicabilityError, DomainError, OSError) as exc:
        print(f"uavsteer: error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (NumericalInstabilityError, NonConvergenceError) as exc:
        print(f"uavsteer: numerical failure: {exc}", file=sys.stderr)
        return NUMERICAL_ERROR


def console_main():
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())

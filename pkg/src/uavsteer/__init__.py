"""Uplink outage modeling and operator-selection games for UAV swarms."""

from .scenario import (
    ScenarioConfig, UavNode, BaseStation, Topology,
    generate_topology, associate_serving_bs, parse_config_file,
)
from .channel import LinkStatistics, los_probability, path_loss_db, link_statistics
from .numerics import (
    LaguerreRule, PartialFractionCoefficients,
    gauss_laguerre_rule, gamma_int, upper_incomplete_gamma,
    partial_fraction_decompose,
)
from .outage import OutageResult, outage_closed_form, outage_no_interference
from .montecarlo import McConfig, sample_snr, monte_carlo_outage
from .game import (
    CoalitionPartition, GameTrace,
    payoff, characteristic, transfer_admissible,
    random_assignment, run_coalition_game, find_admissible_transfer,
)
from .experiments import SweepSpec, mix_seed, run_cell, validate_outage

__all__ = [
    "ScenarioConfig", "UavNode", "BaseStation", "Topology",
    "generate_topology", "associate_serving_bs", "parse_config_file",
    "LinkStatistics", "los_probability", "path_loss_db", "link_statistics",
    "LaguerreRule", "PartialFractionCoefficients",
    "gauss_laguerre_rule", "gamma_int", "upper_incomplete_gamma",
    "partial_fraction_decompose",
    "OutageResult", "outage_closed_form", "outage_no_interference",
    "McConfig", "sample_snr", "monte_carlo_outage",
    "CoalitionPartition", "GameTrace",
    "payoff", "characteristic", "transfer_admissible",
    "random_assignment", "run_coalition_game", "find_admissible_transfer",
    "SweepSpec", "mix_seed", "run_cell", "validate_outage",
]

__version__ = "0.1.0"

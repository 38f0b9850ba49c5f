"""Scenario geometry: deployment area, UAV swarm, operator base stations.

A scenario is a rectangular service area containing one swarm of UAVs and
several mobile network operators (MNOs), each operating its own set of
ground base stations.  Every UAV keeps one serving base station per
operator, chosen when the topology is generated.
"""

from dataclasses import dataclass, fields, replace
import math

import numpy as np

from .errors import ConfigurationError, TopologyError

# Validity range of the aerial channel model used downstream.
ALT_MODEL_MIN_M = 22.5
ALT_MODEL_MAX_M = 300.0


@dataclass
class ScenarioConfig:
    """All knobs of a simulation scenario.

    Defaults reproduce the reference urban-macro setup: 1 km x 1 km area,
    120 UAVs, 3 operators with 12 base stations each, 2 GHz carrier,
    23 dBm UAV transmit power, -130 dBm noise floor.
    """

    area_width_m: float = 1000.0
    area_depth_m: float = 1000.0
    uav_count: int = 120
    mno_count: int = 3
    bs_per_mno: int = 12
    bs_height_m: float = 25.0
    uav_alt_min_m: float = 22.5
    uav_alt_max_m: float = 300.0
    tx_power_dbm: float = 23.0
    noise_dbm: float = -130.0
    carrier_ghz: float = 2.0
    nakagami_m: int = 2
    gamma_th: float = 1e-3
    laguerre_order: int = 30
    trials: int = 9
    rng_seed: int = 1
    # Alternatives kept from the design space; defaults are the adopted ones.
    bs_placement: str = "uniform"        # or "grid"
    association_metric: str = "distance" # or "los_path_loss"

    def __post_init__(self):
        self.validate()

    def validate(self):
        def bad(name, why):
            raise ConfigurationError(f"{name}: {why}")

        if not self.area_width_m > 0:
            bad("area_width_m", "must be positive")
        if not self.area_depth_m > 0:
            bad("area_depth_m", "must be positive")
        for name in ("uav_count", "mno_count", "bs_per_mno"):
            v = getattr(self, name)
            if not (isinstance(v, (int, np.integer)) and v >= 1):
                bad(name, "must be an integer >= 1")
        if not self.bs_height_m > 0:
            bad("bs_height_m", "must be positive")
        if not ALT_MODEL_MIN_M <= self.uav_alt_min_m <= ALT_MODEL_MAX_M:
            bad("uav_alt_min_m", f"must lie in [{ALT_MODEL_MIN_M}, {ALT_MODEL_MAX_M}]")
        if not ALT_MODEL_MIN_M <= self.uav_alt_max_m <= ALT_MODEL_MAX_M:
            bad("uav_alt_max_m", f"must lie in [{ALT_MODEL_MIN_M}, {ALT_MODEL_MAX_M}]")
        if self.uav_alt_min_m > self.uav_alt_max_m:
            bad("uav_alt_min_m", "must not exceed uav_alt_max_m")
        if not self.carrier_ghz > 0:
            bad("carrier_ghz", "must be positive")
        if not (isinstance(self.nakagami_m, (int, np.integer)) and self.nakagami_m >= 1):
            bad("nakagami_m", "must be an integer >= 1")
        if not self.gamma_th > 0:
            bad("gamma_th", "must be positive")
        if not (isinstance(self.laguerre_order, (int, np.integer)) and self.laguerre_order >= 2):
            bad("laguerre_order", "must be an integer >= 2")
        if not (isinstance(self.trials, (int, np.integer)) and self.trials >= 1):
            bad("trials", "must be an integer >= 1")
        if self.bs_placement not in ("uniform", "grid"):
            bad("bs_placement", "must be 'uniform' or 'grid'")
        if self.association_metric not in ("distance", "los_path_loss"):
            bad("association_metric", "must be 'distance' or 'los_path_loss'")

    def with_overrides(self, **kwargs):
        return replace(self, **kwargs)


@dataclass(frozen=True)
class UavNode:
    id: int
    x: float
    y: float
    h_u: float
    tx_power_dbm: float


@dataclass(frozen=True)
class BaseStation:
    id: int
    mno_id: int
    x: float
    y: float
    height_m: float


@dataclass(eq=False)
class Topology:
    """UAV fleet, base stations, and the serving-BS map.

    ``serving`` maps (uav_id, mno_id) to the id of the base station that
    would serve the UAV if it joined that operator.  The map is total:
    every UAV has exactly one entry per operator.
    """

    uavs: list
    base_stations: list
    serving: dict


def distance_3d(uav, bs):
    d2 = (uav.x - bs.x) ** 2 + (uav.y - bs.y) ** 2
    return math.sqrt(d2 + (uav.h_u - bs.height_m) ** 2)


def associate_serving_bs(uav, mno_bss):
    """Pick the serving base station for one UAV from one operator's list.

    Minimum 3D distance; ties resolve to the lowest base-station id.
    The LoS path-loss metric is monotone in 3D distance, so both configured
    metrics are computed here from the same distances.
    """
    if not mno_bss:
        raise TopologyError("operator has no base stations to associate with")
    best = min(mno_bss, key=lambda bs: (distance_3d(uav, bs), bs.id))
    return best.id


def generate_topology(config, seed):
    """Draw a random topology for a scenario, deterministically per seed.

    UAV positions are uniform over the area with uniform altitudes in
    [uav_alt_min_m, uav_alt_max_m]; base stations are placed per operator
    either uniformly at random (default) or on a fixed grid.  Draw order
    is fixed (UAV x, y, h arrays first, then per-operator BS x, y arrays)
    so results are reproducible bit for bit.
    """
    if not isinstance(config, ScenarioConfig):
        raise ConfigurationError("config: expected a ScenarioConfig")
    config.validate()
    rng = np.random.default_rng(seed)

    xs = rng.uniform(0.0, config.area_width_m, config.uav_count)
    ys = rng.uniform(0.0, config.area_depth_m, config.uav_count)
    hs = rng.uniform(config.uav_alt_min_m, config.uav_alt_max_m, config.uav_count)
    uavs = [
        UavNode(i, float(xs[i]), float(ys[i]), float(hs[i]), config.tx_power_dbm)
        for i in range(config.uav_count)
    ]

    base_stations = []
    bs_id = 0
    for mno in range(config.mno_count):
        if config.bs_placement == "uniform":
            bx = rng.uniform(0.0, config.area_width_m, config.bs_per_mno)
            by = rng.uniform(0.0, config.area_depth_m, config.bs_per_mno)
        else:
            bx, by = _grid_positions(config.bs_per_mno, config.area_width_m, config.area_depth_m)
        for k in range(config.bs_per_mno):
            base_stations.append(
                BaseStation(bs_id, mno, float(bx[k]), float(by[k]), config.bs_height_m)
            )
            bs_id += 1

    serving = {}
    by_mno = [[bs for bs in base_stations if bs.mno_id == o] for o in range(config.mno_count)]
    for uav in uavs:
        for o in range(config.mno_count):
            serving[(uav.id, o)] = associate_serving_bs(uav, by_mno[o])
    return Topology(uavs, base_stations, serving)


def _grid_positions(count, width, depth):
    """Centers of a near-square grid covering the area, row-major order."""
    cols = math.ceil(math.sqrt(count))
    rows = math.ceil(count / cols)
    xs, ys = [], []
    for k in range(count):
        r, c = divmod(k, cols)
        xs.append((c + 0.5) * width / cols)
        ys.append((r + 0.5) * depth / rows)
    return np.asarray(xs), np.asarray(ys)


def topology_to_csv(topology, path):
    """Dump nodes as CSV rows (kind, id, mno_id, x, y, z).

    UAV rows carry mno_id = -1 since swarm membership is operator-free.
    """
    import csv

    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["kind", "id", "mno_id", "x", "y", "z"])
        for u in topology.uavs:
            w.writerow(["uav", u.id, -1, u.x, u.y, u.h_u])
        for b in topology.base_stations:
            w.writerow(["bs", b.id, b.mno_id, b.x, b.y, b.height_m])


def parse_config_file(path):
    """Read a plain-text ``key = value`` config file into a ScenarioConfig.

    Lines starting with ``#`` and blank lines are ignored.  Keys must match
    ScenarioConfig field names; unknown keys raise a ConfigurationError
    naming the key.
    """
    known = {f.name: f.type for f in fields(ScenarioConfig)}
    int_fields = {
        "uav_count", "mno_count", "bs_per_mno", "nakagami_m",
        "laguerre_order", "trials", "rng_seed",
    }
    str_fields = {"bs_placement", "association_metric"}
    overrides = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigurationError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if key not in known:
                raise ConfigurationError(f"{path}:{lineno}: unknown config key {key!r}")
            try:
                if key in str_fields:
                    overrides[key] = value
                elif key in int_fields:
                    overrides[key] = int(value)
                else:
                    overrides[key] = float(value)
            except ValueError:
                raise ConfigurationError(f"{path}:{lineno}: bad value for {key}: {value!r}") from None
    return ScenarioConfig(**overrides)

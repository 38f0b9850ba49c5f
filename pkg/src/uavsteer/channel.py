"""Air-to-ground uplink channel: LoS probability, path loss, SNR statistics.

Urban-macro aerial channel per 3GPP TR 36.777 (UMa-AV), valid for UAV
altitudes between 22.5 m and 300 m.  Small-scale fading is Nakagami-m on
LoS links and Rayleigh on NLoS links, so the received SNR is a two-branch
mixture: with probability p_los a Gamma variable with shape m and mean
``a_mean``, otherwise an exponential variable with mean ``b_mean``.  The
mixture weights stay attached to the branches; the branch means are never
blended together.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import ModelApplicabilityError, DomainError
from .scenario import ALT_MODEL_MIN_M, ALT_MODEL_MAX_M


@dataclass(frozen=True)
class LinkStatistics:
    """Sufficient statistics of one UAV-to-BS uplink SNR.

    ``a_mean``/``b_mean`` are the mean *linear* SNRs of the LoS (Gamma)
    and NLoS (exponential) branches; both are already normalized by the
    noise power, so no separate noise term appears downstream.
    """

    p_los: float
    a_mean: float
    b_mean: float
    nakagami_m: int

    def __post_init__(self):
        if not 0.0 <= self.p_los <= 1.0:
            raise DomainError(f"p_los must lie in [0, 1], got {self.p_los}")
        if not (self.a_mean > 0 and self.b_mean > 0):
            raise DomainError("branch mean SNRs must be positive")
        if not self.nakagami_m >= 1:
            raise DomainError("nakagami_m must be a positive integer")


def _check_altitude(h_u):
    h = np.asarray(h_u, dtype=float)
    if np.any(h < ALT_MODEL_MIN_M) or np.any(h > ALT_MODEL_MAX_M):
        raise ModelApplicabilityError(
            f"UAV altitude {h_u} m outside model range "
            f"[{ALT_MODEL_MIN_M}, {ALT_MODEL_MAX_M}] m"
        )


def los_probability(h_u, d2d_m):
    """Line-of-sight probability for UAV altitude h_u and ground distance d2d.

    Above 100 m the link is always LoS.  Below, the TR 36.777 expression
    applies with d1 = max(460 log10(h) - 700, 18) and
    p1 = 4300 log10(h) - 3800; inside d1 the probability is 1.
    """
    _check_altitude(h_u)
    if d2d_m < 0:
        raise DomainError("ground distance must be non-negative")
    return float(_los_probability_array(np.asarray(h_u, float), np.asarray(d2d_m, float)))


def _los_probability_array(h, d2d):
    lg = np.log10(h)
    d1 = np.maximum(460.0 * lg - 700.0, 18.0)
    p1 = 4300.0 * lg - 3800.0
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        far = d1 / d2d + np.exp(-d2d / p1) * (1.0 - d1 / d2d)
    p = np.where((h > 100.0) | (d2d <= d1), 1.0, far)
    return np.clip(p, 0.0, 1.0)


def path_loss_db(h_u, d3d_m, fc_ghz, los):
    """UMa-AV path loss in dB for a LoS or NLoS link."""
    _check_altitude(h_u)
    if not d3d_m > 0:
        raise DomainError("3D distance must be positive")
    if not fc_ghz > 0:
        raise DomainError("carrier frequency must be positive")
    h = np.asarray(h_u, float)
    d = np.asarray(d3d_m, float)
    if los:
        return float(_path_loss_los(d, fc_ghz))
    return float(_path_loss_nlos(h, d, fc_ghz))


def _path_loss_los(d3d, fc_ghz):
    return 28.0 + 22.0 * np.log10(d3d) + 20.0 * math.log10(fc_ghz)


def _path_loss_nlos(h, d3d, fc_ghz):
    return (
        -17.5
        + (46.0 - 7.0 * np.log10(h)) * np.log10(d3d)
        + 20.0 * math.log10(40.0 * math.pi * fc_ghz / 3.0)
    )


def link_statistics(uav, bs, config):
    """SNR statistics of the uplink from one UAV to one base station."""
    dx, dy = uav.x - bs.x, uav.y - bs.y
    d2d = math.sqrt(dx * dx + dy * dy)
    d3d = math.sqrt(d2d * d2d + (uav.h_u - bs.height_m) ** 2)
    p = los_probability(uav.h_u, d2d)
    snr0_db = uav.tx_power_dbm - config.noise_dbm
    a = 10.0 ** ((snr0_db - path_loss_db(uav.h_u, d3d, config.carrier_ghz, True)) / 10.0)
    b = 10.0 ** ((snr0_db - path_loss_db(uav.h_u, d3d, config.carrier_ghz, False)) / 10.0)
    return LinkStatistics(p, a, b, config.nakagami_m)


@dataclass(eq=False)
class LinkTable:
    """Dense per-pair link statistics for a whole topology.

    Arrays are indexed [uav_id, bs_id].  ``serving_bs[u, o]`` gives the
    serving base station of UAV u under operator o.
    """

    p_los: np.ndarray
    a_mean: np.ndarray
    b_mean: np.ndarray
    nakagami_m: int
    serving_bs: np.ndarray

    def stats(self, uav_id, bs_id):
        return LinkStatistics(
            float(self.p_los[uav_id, bs_id]),
            float(self.a_mean[uav_id, bs_id]),
            float(self.b_mean[uav_id, bs_id]),
            self.nakagami_m,
        )


def build_link_table(topology, config):
    """Vectorized link statistics for every (UAV, BS) pair."""
    ux = np.array([u.x for u in topology.uavs])
    uy = np.array([u.y for u in topology.uavs])
    uh = np.array([u.h_u for u in topology.uavs])
    up = np.array([u.tx_power_dbm for u in topology.uavs])
    _check_altitude(uh)
    bx = np.array([b.x for b in topology.base_stations])
    by = np.array([b.y for b in topology.base_stations])
    bh = np.array([b.height_m for b in topology.base_stations])

    d2d = np.hypot(ux[:, None] - bx[None, :], uy[:, None] - by[None, :])
    d3d = np.sqrt(d2d**2 + (uh[:, None] - bh[None, :]) ** 2)
    h = uh[:, None] + np.zeros_like(d2d)

    p = _los_probability_array(h, d2d)
    snr0_db = up[:, None] + np.zeros_like(d2d) - config.noise_dbm
    a = 10.0 ** ((snr0_db - _path_loss_los(d3d, config.carrier_ghz)) / 10.0)
    b = 10.0 ** ((snr0_db - _path_loss_nlos(h, d3d, config.carrier_ghz)) / 10.0)

    mnos = sorted({bs.mno_id for bs in topology.base_stations})
    serving = np.empty((len(topology.uavs), len(mnos)), dtype=np.int64)
    for u in topology.uavs:
        for o in mnos:
            serving[u.id, o] = topology.serving[(u.id, o)]
    return LinkTable(p, a, b, config.nakagami_m, serving)


_link_table_cache = []


def get_link_table(topology, config):
    """Per-topology cache so the game never recomputes pair statistics.

    Keyed by object identity with strong references kept, so a recycled
    id() can never alias a dead topology.  Only a handful of entries are
    retained; sweeps touch one topology at a time.
    """
    for topo, cfg, table in _link_table_cache:
        if topo is topology and cfg is config:
            return table
    table = build_link_table(topology, config)
    if len(_link_table_cache) >= 4:
        _link_table_cache.pop(0)
    _link_table_cache.append((topology, config, table))
    return table


def link_table_to_csv(table, path):
    """Debug dump of per-link statistics (long format)."""
    import csv

    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["uav_id", "bs_id", "p_los", "a_mean", "b_mean"])
        n_u, n_b = table.p_los.shape
        for u in range(n_u):
            for b in range(n_b):
                w.writerow([u, b, table.p_los[u, b], table.a_mean[u, b], table.b_mean[u, b]])

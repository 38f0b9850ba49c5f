"""Monte Carlo outage estimation: the sampling route the closed form must match.

Kept deliberately independent of the analytic machinery; the only shared
inputs are the LinkStatistics themselves.  Gamma branch variates are built
as sums of m exponentials of mean a_mean / m (valid because m is integer),
so the sampler exercises the same distributional assumptions as the
closed form without reusing any of its code.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DomainError
from .outage import OutageResult

_CHUNK = 1 << 18  # fixed chunk size keeps the draw stream reproducible


@dataclass(frozen=True)
class McConfig:
    samples: int
    seed: int

    def __post_init__(self):
        if not (isinstance(self.samples, (int, np.integer)) and self.samples >= 10_000):
            raise ConfigurationError("samples: must be an integer >= 10000")


def sample_snr(stats, rng, size=None):
    """Draw linear SNR(s) from a link's LoS/NLoS mixture.

    With probability p_los: Gamma(shape m, mean a_mean) as a sum of m
    exponentials; otherwise: exponential with mean b_mean.  ``size=None``
    returns a scalar.
    """
    n = 1 if size is None else int(size)
    m = stats.nakagami_m
    los = rng.random(n) < stats.p_los
    gamma_part = rng.exponential(1.0, (m, n)).sum(axis=0) * (stats.a_mean / m)
    ray_part = rng.exponential(1.0, n) * stats.b_mean
    out = np.where(los, gamma_part, ray_part)
    return float(out[0]) if size is None else out


def monte_carlo_outage(serving, interferers, gamma_th, mc):
    """Estimate P[SINR < gamma_th] by direct simulation.

    SINR = gamma_serving / (1 + sum of interferer SNRs); the std error is
    the binomial sqrt(p(1-p)/n), floored at 1/n when the count is 0 or n
    so the estimate never claims zero uncertainty.
    """
    if not gamma_th > 0:
        raise DomainError(f"gamma_th must be positive, got {gamma_th!r}")
    links = [serving] + list(interferers)
    m = serving.nakagami_m
    for it in links:
        if it.nakagami_m != m:
            raise DomainError("all links must share one Nakagami shape")
    p = np.array([it.p_los for it in links])[:, None]
    a = np.array([it.a_mean for it in links])[:, None]
    b = np.array([it.b_mean for it in links])[:, None]
    n_links = len(links)

    rng = np.random.default_rng(mc.seed)
    failures = 0
    done = 0
    while done < mc.samples:
        c = min(_CHUNK, mc.samples - done)
        los = rng.random((n_links, c)) < p
        gamma_part = rng.exponential(1.0, (n_links, m, c)).sum(axis=1) * (a / m)
        ray_part = rng.exponential(1.0, (n_links, c)) * b
        snr = np.where(los, gamma_part, ray_part)
        sinr = snr[0] / (1.0 + snr[1:].sum(axis=0))
        failures += int(np.count_nonzero(sinr < gamma_th))
        done += c

    p_hat = failures / mc.samples
    se = float(np.sqrt(p_hat * (1.0 - p_hat) / mc.samples))
    if failures in (0, mc.samples):
        se = max(se, 1.0 / mc.samples)
    return OutageResult(p_hat, "monte_carlo", se, 0)

"""Uplink outage probability under mixed LoS/NLoS fading with interference.

The SINR at the serving base station is  gamma_u / (1 + sum_t gamma_t)
where every gamma is an already noise-normalized linear SNR drawn from the
two-branch mixture described in `channel`.  Outage is P[SINR < gamma_th].

The closed form conditions on the interference level I and integrates the
serving CCDF against the interference density.  With alpha = m / A_s and
beta = 1 / B_s this gives

    P_out = 1 - sum_j beta1_j / (Gamma(j) alpha^j) * E[Gamma(j, alpha g (1 + I))]
              - (beta21 / beta) e^{-beta g} * L_I(beta g),

where L_I is the Laplace transform of I, expanded by partial fractions
into the delta coefficients, and the expectations over I reduce to
integrals  int t^{j'-1} e^{-t} Gamma(j, alpha g (1 + t / rate)) dt
evaluated with Gauss-Laguerre quadrature.  Everything here works on
batches of rows so coalition-sized problems cost a handful of numpy ops.
"""

from dataclasses import dataclass
import logging
import math

import numpy as np

from .errors import DomainError, NumericalInstabilityError
from .numerics import (
    POLE_DISTINCTNESS_RTOL,
    gauss_laguerre_rule,
    interference_partial_fractions,
    _upper_gamma_int,
)

log = logging.getLogger(__name__)

# |result(n) - result(2n)| above this triggers quadrature escalation.
ORDER_ESCALATION_ATOL = 1e-6
# Raw probabilities may stray this far outside [0, 1] before we call it
# an instability instead of benign rounding.
CLAMP_BAND = 1e-6
# Perturbation ladder for (near-)coincident poles.
PERTURB_BASE_REL = 1e-7
PERTURB_MAX_TRIES = 5
# Decomposition rows whose partial fractions disagree with the directly
# multiplied transform by more than this (at s = 0 and at the two serving
# evaluation rates) carry too much residue cancellation for the
# pole-residue assembly and are evaluated in factored form instead.
NORM_STABLE_TOL = 1e-9
# Highest escalation order (shared with the quadrature builder's cap).
MAX_ORDER = 128


@dataclass(frozen=True)
class OutageResult:
    """One outage evaluation: value, route, and accuracy bookkeeping."""

    probability: float
    method: str
    std_error: float
    laguerre_order_used: int

    def __post_init__(self):
        if self.method not in ("closed_form", "monte_carlo"):
            raise DomainError(f"unknown method {self.method!r}")
        if not 0.0 <= self.probability <= 1.0:
            raise DomainError(f"probability {self.probability!r} outside [0, 1]")
        if self.method == "closed_form" and self.std_error != 0.0:
            raise DomainError("closed-form results carry no sampling error")
        if self.method == "monte_carlo":
            if not self.std_error > 0.0:
                raise DomainError("monte carlo results need a positive std_error")
            if self.laguerre_order_used != 0:
                raise DomainError("monte carlo results use no quadrature")


def order_chain(base_order):
    """Escalation ladder: base, doubled, then the cap."""
    chain = [int(base_order)]
    if 2 * base_order < MAX_ORDER:
        chain.append(2 * int(base_order))
    if chain[-1] < MAX_ORDER:
        chain.append(MAX_ORDER)
    return chain


def outage_closed_form(serving, interferers, gamma_th, rule=None):
    """Closed-form outage for one serving link against a set of interferers.

    With ``rule`` given, that exact quadrature order is used.  Otherwise
    the default order (30) is validated against its doubling and escalated
    up to 128 when the two disagree by more than 1e-6; the order that
    passed validation is reported in ``laguerre_order_used`` (0 when no
    interferers are present, since no quadrature is involved then).
    """
    if not gamma_th > 0:
        raise DomainError(f"gamma_th must be positive, got {gamma_th!r}")
    m = serving.nakagami_m
    for it in interferers:
        if it.nakagami_m != m:
            raise DomainError("all links must share one Nakagami shape")
    sp = np.array([serving.p_los])
    sA = np.array([serving.a_mean])
    sB = np.array([serving.b_mean])
    pi = np.array([[it.p_los for it in interferers]], dtype=float)
    ai = np.array([[it.a_mean for it in interferers]], dtype=float)
    bi = np.array([[it.b_mean for it in interferers]], dtype=float)
    chain = [rule.order] if rule is not None else order_chain(30)
    probs, orders = closed_form_outage_batch(sp, sA, sB, pi, ai, bi, m, gamma_th, chain)
    return OutageResult(float(probs[0]), "closed_form", 0.0, int(orders[0]))


def outage_no_interference(serving, gamma_th):
    """Outage of an isolated link: the mixture CDF at gamma_th.

    Written as the direct CDF rather than through the batch kernel so it
    doubles as an independent cross-check of the closed form's
    empty-interferer limit.
    """
    if not gamma_th > 0:
        raise DomainError(f"gamma_th must be positive, got {gamma_th!r}")
    m = serving.nakagami_m
    gamma_cdf = 1.0 - float(_upper_gamma_int(m, np.asarray(m * gamma_th / serving.a_mean))) / math.factorial(m - 1)
    ray_cdf = 1.0 - math.exp(-gamma_th / serving.b_mean)
    p = serving.p_los * gamma_cdf + (1.0 - serving.p_los) * ray_cdf
    return OutageResult(min(max(p, 0.0), 1.0), "closed_form", 0.0, 0)


def closed_form_outage_batch(sp, sA, sB, pi, ai, bi, m, gamma_th, chain):
    """Vectorized closed form over R rows.

    Row r: serving link (sp, sA, sB)[r] against interferers (pi, ai, bi)[r, :].
    ``chain`` is the quadrature-order ladder; consecutive entries validate
    each other and rows escalate independently.  Returns (probabilities,
    orders_used) as arrays of length R.
    """
    sp = np.ascontiguousarray(sp, dtype=float)
    sA = np.ascontiguousarray(sA, dtype=float)
    sB = np.ascontiguousarray(sB, dtype=float)
    pi = np.ascontiguousarray(pi, dtype=float)
    ai = np.ascontiguousarray(ai, dtype=float)
    bi = np.ascontiguousarray(bi, dtype=float)
    rows, n_int = pi.shape
    if rows == 0:
        return np.empty(0), np.empty(0, dtype=np.int64)

    parts, factored = _decompose_rows(sp, sA, sB, pi, ai, bi, m, gamma_th)

    if n_int == 0:
        raw = _assemble(parts, m, gamma_th, None)
        probs = _band_clip(raw)
        return probs, np.zeros(rows, dtype=np.int64)

    raw = np.empty(rows)
    orders = np.empty(rows, dtype=np.int64)

    if np.any(factored):
        sub = _slice_parts(parts, factored)
        raw[factored] = _assemble_factored(sub, m, gamma_th)
        orders[factored] = 0

    active = np.flatnonzero(~factored)
    if len(active) > 0:
        cur = _slice_parts(parts, ~factored)
        prev = _assemble(cur, m, gamma_th, gauss_laguerre_rule(chain[0]))
        for k in range(1, len(chain)):
            nxt = _assemble(cur, m, gamma_th, gauss_laguerre_rule(chain[k]))
            ok = np.abs(nxt - prev) <= ORDER_ESCALATION_ATOL
            raw[active[ok]] = prev[ok]
            orders[active[ok]] = chain[k - 1]
            if np.all(ok):
                break
            active = active[~ok]
            cur = _slice_parts(cur, ~ok)
            prev = nxt[~ok]
        else:
            # ran out of orders; keep the cap's values but say so
            if len(chain) > 1:
                log.warning(
                    "quadrature not settled at order %d for %d row(s); using cap values",
                    chain[-1], len(active),
                )
            raw[active] = prev
            orders[active] = chain[-1]

    # Last line of defense: a pole-residue row straying out of band means
    # the stability probe missed some cancellation, so redo it factored.
    pf_rows = np.flatnonzero(~factored)
    if len(pf_rows) > 0:
        vals = raw[pf_rows]
        oob = (vals < -CLAMP_BAND) | (vals > 1.0 + CLAMP_BAND)
        if np.any(oob):
            redo = np.zeros(rows, dtype=bool)
            redo[pf_rows[oob]] = True
            log.info("%d pole-residue row(s) out of band; re-evaluating factored",
                     int(redo.sum()))
            raw[redo] = _assemble_factored(_slice_parts(parts, redo), m, gamma_th)
            orders[redo] = 0

    probs = _band_clip(raw, np.arange(rows))
    return probs, orders


def _band_clip(raw, row_ids=None):
    raw = np.atleast_1d(raw)
    low, high = -CLAMP_BAND, 1.0 + CLAMP_BAND
    bad = (raw < low) | (raw > high)
    if np.any(bad):
        k = int(np.argmax(bad))
        where = f" (row {int(np.atleast_1d(row_ids)[k])})" if row_ids is not None else ""
        raise NumericalInstabilityError(
            f"closed-form outage {raw[k]!r} outside [{low}, {high}]{where}",
            raw=float(raw[k]),
        )
    return np.clip(raw, 0.0, 1.0)


class _Parts:
    """Per-row link rates and partial-fraction data, order-independent."""

    __slots__ = ("sp", "sgam", "sray", "beta21", "delta", "delta_prime",
                 "igam", "iray", "pi", "ai", "bi")

    def __init__(self, **kw):
        for k, v in kw.items():
            setattr(self, k, v)


def _slice_parts(parts, mask):
    out = _Parts(
        sp=parts.sp[mask], sgam=parts.sgam[mask], sray=parts.sray[mask],
        beta21=parts.beta21[mask],
        delta=parts.delta[mask], delta_prime=parts.delta_prime[mask],
        igam=parts.igam[mask], iray=parts.iray[mask],
        pi=parts.pi[mask], ai=parts.ai[mask], bi=parts.bi[mask],
    )
    return out


def _decompose_rows(sp, sA, sB, pi, ai, bi, m, gamma_th):
    """Partial fractions per row, with a stability verdict for each.

    Rows with (near-)coincident poles get their means nudged by a tiny
    index-dependent factor (relative 1e-7, escalating) and are retried.
    After decomposition, the residues are checked against the directly
    multiplied transform at s = 0 (where L_I(0) = 1 exactly) and at the
    two serving rates the assembly actually evaluates; rows disagreeing
    by more than 1e-9 are flagged so the caller evaluates them through
    the factored form instead, since no perturbation can repair
    intrinsic residue cancellation.  Returns (parts, factored_mask).
    """
    rows, n_int = pi.shape
    sA, sB, ai, bi = sA.copy(), sB.copy(), ai.copy(), bi.copy()
    delta = np.zeros((rows, n_int, m))
    delta_prime = np.zeros((rows, n_int))
    factored = np.zeros(rows, dtype=bool)
    pending = np.arange(rows)
    for attempt in range(PERTURB_MAX_TRIES + 1):
        sgam = m / sA[pending]
        sray = 1.0 / sB[pending]
        igam = m / ai[pending]
        iray = 1.0 / bi[pending]
        distinct = _poles_distinct(np.concatenate(
            [sgam[:, None], sray[:, None], igam, iray], axis=1))
        idx = np.flatnonzero(distinct)
        if n_int > 0 and len(idx) > 0:
            d, dp = interference_partial_fractions(
                pi[pending[idx]], igam[idx], iray[idx], m)
            err = _residue_probe_error(d, dp, pi[pending[idx]], igam[idx], iray[idx],
                                       m, sgam[idx] * gamma_th, sray[idx] * gamma_th)
            stable = err <= NORM_STABLE_TOL
            delta[pending[idx[stable]]] = d[stable]
            delta_prime[pending[idx[stable]]] = dp[stable]
            # distinct but badly conditioned: hand over to the factored form
            factored[pending[idx[~stable]]] = True
        pending = pending[~distinct]
        if len(pending) == 0:
            break
        if attempt == PERTURB_MAX_TRIES:
            log.info("%d row(s) keep coincident poles; using factored form", len(pending))
            factored[pending] = True
            break
        rel = PERTURB_BASE_REL * 10.0**attempt
        log.info("perturbing %d row(s) with coincident poles by %.0e", len(pending), rel)
        n_pole = 2 * n_int + 2
        factors = 1.0 + rel * (np.arange(n_pole) + 1.0) / n_pole
        sA[pending] *= factors[0]
        sB[pending] *= factors[1]
        if n_int > 0:
            ai[pending] *= factors[2:2 + n_int]
            bi[pending] *= factors[2 + n_int:]
    parts = _Parts(
        sp=sp, sgam=m / sA, sray=1.0 / sB,
        beta21=(1.0 - sp) / sB,
        delta=delta, delta_prime=delta_prime,
        igam=m / ai, iray=1.0 / bi,
        pi=pi, ai=ai, bi=bi,
    )
    return parts, factored


def _residue_probe_error(d, dp, pi, igam, iray, m, s1, s2):
    """Worst relative mismatch of the partial fractions at three probes.

    At s = 0 the summed residues must give exactly 1; at the Gamma and
    Rayleigh serving rates s1, s2 they must reproduce the product of the
    per-interferer transforms.  Heavy residue cancellation shows up as a
    mismatch at one of these points even when the others look fine.
    """
    jpow = np.arange(1, m + 1)
    norm = np.sum(dp / iray, axis=1)
    norm = norm + np.sum(d / igam[:, :, None] ** jpow, axis=(1, 2))
    err = np.abs(norm - 1.0)
    qi = 1.0 - pi
    for s in (s1, s2):
        pf = np.sum(dp / (s[:, None] + iray), axis=1)
        pf = pf + np.sum(d / (s[:, None, None] + igam[:, :, None]) ** jpow, axis=(1, 2))
        direct = np.prod(
            pi * (igam / (s[:, None] + igam)) ** m + qi * iray / (s[:, None] + iray),
            axis=1,
        )
        err = np.maximum(err, np.abs(pf - direct) / np.maximum(np.abs(direct), 1e-300))
    return err


def _poles_distinct(poles):
    """Row-wise distinctness: True where all pole rates are well separated."""
    srt = np.sort(poles, axis=1)
    gaps = np.diff(srt, axis=1)
    scale = np.maximum(np.abs(srt[:, :-1]), np.abs(srt[:, 1:]))
    return ~np.any(gaps <= POLE_DISTINCTNESS_RTOL * scale, axis=1)


# Keep row chunks below ~4M elements of (rows, N, nodes) scratch.
_CHUNK_ELEMS = 4_000_000


def _assemble(parts, m, gamma_th, rule):
    """Evaluate the closed form for decomposed rows at one quadrature order."""
    s1 = parts.sgam * gamma_th
    s2 = parts.sray * gamma_th
    fact_m = math.factorial(m - 1)

    if parts.delta.shape[1] == 0:
        serving_ccdf = _upper_gamma_int(m, s1) / fact_m
        return 1.0 - parts.sp * serving_ccdf - (parts.beta21 / parts.sray) * np.exp(-s2)

    rows, n_int, _ = parts.delta.shape
    # order-independent pieces
    jfact = np.array([math.factorial(j - 1) for j in range(1, m + 1)])
    l2 = np.sum(parts.delta_prime / (s2[:, None] + parts.iray), axis=1)
    l2 = l2 + np.sum(
        parts.delta / (s2[:, None, None] + parts.igam[:, :, None]) ** np.arange(1, m + 1),
        axis=(1, 2),
    )

    # The tail integrals  int t^{j'-1} e^{-t} Gamma(m, s1 (1 + t S)) dt
    # are evaluated after the exact substitution u = (1 + s1 S) t, which
    # folds the integrand's own exponential decay into the quadrature
    # weight.  The remaining factor is a low-degree polynomial in u, so
    # the rule integrates it exactly regardless of how dominant the
    # interference is; shift_a/shift_b below are the substituted rates.
    shift_a = parts.igam + s1[:, None]
    shift_b = parts.iray + s1[:, None]
    dcoef = parts.delta / (jfact * shift_a[:, :, None] ** np.arange(1, m + 1))
    bcoef = parts.delta_prime / shift_b

    theta, lam = rule.nodes, rule.weights
    tmat = lam * theta[None, :] ** np.arange(m)[:, None]  # [j', p]
    tail = np.empty(rows)
    chunk = max(1, _CHUNK_ELEMS // max(1, n_int * rule.order))
    for lo in range(0, rows, chunk):
        hi = min(rows, lo + chunk)
        s1c = s1[lo:hi, None, None]
        za = s1c * (1.0 + theta[None, None, :] / shift_a[lo:hi, :, None])
        zb = s1c * (1.0 + theta[None, None, :] / shift_b[lo:hi, :, None])
        ga = _scaled_gamma_poly(m, za, s1c)   # [r, i, p]
        gb = _scaled_gamma_poly(m, zb, s1c)
        fa = ga @ tmat.T                      # [r, i, j']
        fb = gb @ lam
        tail[lo:hi] = np.sum(dcoef[lo:hi] * fa, axis=(1, 2)) + np.sum(bcoef[lo:hi] * fb, axis=1)
    return 1.0 - parts.sp * tail / fact_m - (parts.beta21 / parts.sray) * np.exp(-s2) * l2


def _assemble_factored(parts, m, gamma_th):
    """Same closed form, evaluated without partial fractions.

    The interference transform L_I and its first m-1 derivatives are taken
    directly from the product of per-interferer transforms: each factor's
    truncated Taylor expansion at the evaluation point has coefficients of
    alternating sign, so tracking (-1)^k * coefficient keeps every number
    nonnegative and the convolutions cancellation-free.  With
    M_r = E[I^r e^{-s1 I}] = r! * jet_r this gives

        P = 1 - p e^{-s1} sum_{k<m} s1^k/k! sum_{r<=k} C(k,r) M_r
              - (1-p) e^{-s2} L_I(s2),

    which is algebraically identical to the pole-residue assembly but
    stays accurate when the residues carry heavy cancellation.
    """
    s1 = parts.sgam * gamma_th
    s2 = parts.sray * gamma_th
    igam, iray, pi = parts.igam, parts.iray, parts.pi
    qi = 1.0 - pi

    # L_I at the Rayleigh evaluation point: plain product of transforms.
    l2 = np.prod(
        pi * (igam / (s2[:, None] + igam)) ** m + qi * iray / (s2[:, None] + iray),
        axis=1,
    )

    # Absolute jets of each factor at s1: ajet[r, i, k] >= 0.
    rows, n_int = pi.shape
    ga = igam + s1[:, None]
    ra = iray + s1[:, None]
    ajet = np.empty((rows, n_int, m))
    gterm = pi * (igam / ga) ** m
    rterm = qi * iray / ra
    binom = 1.0
    for k in range(m):
        if k > 0:
            binom = binom * (m + k - 1) / k
            gterm = gterm / ga
            rterm = rterm / ra
        ajet[:, :, k] = binom * gterm + rterm
    # product jet over interferers, truncated at order m - 1
    prod = np.zeros((rows, m))
    prod[:, 0] = 1.0
    for t in range(n_int):
        new = np.empty_like(prod)
        for k in range(m):
            acc = prod[:, 0] * ajet[:, t, k]
            for u in range(1, k + 1):
                acc = acc + prod[:, u] * ajet[:, t, k - u]
            new[:, k] = acc
        prod = new

    # E[Gamma(m, s1 (1 + I))] / (m-1)! = e^{-s1} sum_k s1^k/k! E[(1+I)^k e^{-s1 I}]
    alive = s1 <= 745.0
    es1 = np.exp(np.where(alive, -s1, 0.0)) * alive
    s1 = np.where(alive, s1, 0.0)  # dead rows contribute 0 anyway
    succ = np.zeros(rows)
    s1_pow = np.ones(rows)
    kfact = 1.0
    for k in range(m):
        if k > 0:
            s1_pow = s1_pow * s1
            kfact *= k
        ckr = 1.0
        inner = np.zeros(rows)
        rfact = 1.0
        for r in range(k + 1):
            if r > 0:
                ckr = ckr * (k - r + 1) / r
                rfact *= r
            inner = inner + ckr * rfact * prod[:, r]
        succ = succ + (s1_pow / kfact) * inner
    succ = es1 * succ

    return 1.0 - parts.sp * succ - (parts.beta21 / parts.sray) * np.exp(-s2) * l2


def _scaled_gamma_poly(j, z, c):
    """e^{z-c} Gamma(j, z) for integer j: (j-1)! e^{-c} sum_{k<j} z^k / k!.

    This is the upper-gamma factor of the substituted tail integrand with
    the exponential rebalanced onto the quadrature weight; z stays within
    c + O(nodes), so the polynomial part never overflows.
    """
    alive = c <= 745.0
    cs = np.where(alive, c, 0.0)
    zs = np.where(alive, z, 0.0)
    poly = np.ones_like(zs)
    term = np.ones_like(zs)
    for k in range(1, j):
        term = term * zs / k
        poly = poly + term
    out = math.factorial(j - 1) * np.exp(-cs) * poly
    return np.where(alive, out, 0.0)

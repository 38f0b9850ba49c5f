"""Special functions and decompositions behind the closed-form outage.

Three ingredients live here:

* Gauss-Laguerre quadrature rules (nodes/weights for weight e^-t on
  [0, inf)), built from scratch with Newton iterations on the recurrence
  so the accuracy contract does not depend on any library's choices.
* Integer-argument and real-argument upper incomplete gamma functions.
* Partial-fraction machinery for products of link SNR Laplace transforms.
  Each link contributes a two-branch transform

      phi(s) = p * g^m / (s + g)^m + (1 - p) * r / (s + r),

  with g = m / a_mean the Gamma-branch rate and r = 1 / b_mean the
  exponential-branch rate.  A product of such transforms decomposes into
  first-order terms at the Rayleigh poles and terms of order up to m at
  the Gamma poles.  Residues at repeated poles are extracted with
  truncated Taylor (jet) products, never with symbolic differentiation
  and never by dividing out near-zero factors.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import DomainError, DegeneratePoleError, NonConvergenceError, NumericalInstabilityError

GAUSS_LAGUERRE_MIN_ORDER = 2
GAUSS_LAGUERRE_MAX_ORDER = 128

# Relative gap under which two poles are considered coincident.
POLE_DISTINCTNESS_RTOL = 1e-9

# exp(-z) underflows to zero (double precision) past this point; the
# unnormalized upper gamma is then far below every tolerance in use.
_EXP_UNDERFLOW_Z = 745.0


@dataclass(frozen=True)
class LaguerreRule:
    """Gauss-Laguerre nodes and weights of a given order.

    Exact for polynomial integrands of degree <= 2*order - 1 against the
    weight e^-t; weights sum to 1 (the integral of the weight itself).
    """

    order: int
    nodes: np.ndarray
    weights: np.ndarray


_rule_cache = {}


def gauss_laguerre_rule(n):
    """Build (and cache) the order-n Gauss-Laguerre rule.

    Nodes are the roots of the Laguerre polynomial L_n, found by Newton
    iteration on the three-term recurrence; weights come from the
    identity  w_p = x_p / ((n+1) * L_{n+1}(x_p))^2.
    """
    if not (isinstance(n, (int, np.integer)) and GAUSS_LAGUERRE_MIN_ORDER <= n <= GAUSS_LAGUERRE_MAX_ORDER):
        raise DomainError(
            f"quadrature order must be an integer in "
            f"[{GAUSS_LAGUERRE_MIN_ORDER}, {GAUSS_LAGUERRE_MAX_ORDER}], got {n}"
        )
    n = int(n)
    rule = _rule_cache.get(n)
    if rule is None:
        rule = _build_rule(n)
        _rule_cache[n] = rule
    return rule


def _laguerre_pair(n, x):
    """Evaluate (L_n(x), L_{n-1}(x)) by upward recurrence."""
    prev = np.ones_like(x)
    cur = 1.0 - x
    for k in range(1, n):
        prev, cur = cur, ((2.0 * k + 1.0 - x) * cur - k * prev) / (k + 1.0)
    return cur, prev


def _build_rule(n):
    # Roots found one by one, smallest first; each initial guess
    # extrapolates from the two previously converged roots, so the guess
    # cascade tracks the actual root spacing.
    z = np.empty(n)
    for i in range(n):
        if i == 0:
            zi = 3.0 / (1.0 + 2.4 * n)
        elif i == 1:
            zi = z[0] + 15.0 / (1.0 + 2.5 * n)
        else:
            ai = i - 1.0
            zi = z[i - 1] + ((1.0 + 2.55 * ai) / (1.9 * ai)) * (z[i - 1] - z[i - 2])
        for attempt in range(100):
            ln, lnm1 = _laguerre_pair(n, zi)
            step = ln / (n * (ln - lnm1) / zi)
            zi -= step
            if abs(step) <= 1e-14 * max(zi, 1.0):
                break
        else:
            raise NonConvergenceError(f"Laguerre root search stalled at order {n}")
        for _ in range(2):  # polish inside the convergence basin
            ln, lnm1 = _laguerre_pair(n, zi)
            zi -= ln / (n * (ln - lnm1) / zi)
        z[i] = zi
    lnp1, _ = _laguerre_pair(n + 1, z)
    w = z / ((n + 1.0) * lnp1) ** 2

    if np.any(z <= 0) or np.any(np.diff(z) <= 0) or np.any(w <= 0):
        raise NumericalInstabilityError(f"degenerate Laguerre rule at order {n}")
    if abs(w.sum() - 1.0) > 1e-9:
        raise NumericalInstabilityError(
            f"Laguerre weights at order {n} sum to {w.sum()!r}", raw=w.sum()
        )
    z.setflags(write=False)
    w.setflags(write=False)
    return LaguerreRule(n, z, w)


def gamma_int(j):
    """Gamma(j) = (j-1)! for positive integer j."""
    if not (isinstance(j, (int, np.integer)) and j >= 1):
        raise DomainError(f"gamma_int needs a positive integer, got {j!r}")
    try:
        return float(math.factorial(int(j) - 1))
    except OverflowError:
        raise OverflowError(f"gamma_int({j}) overflows double precision") from None


def upper_incomplete_gamma(a, z):
    """Upper incomplete gamma Gamma(a, z) for real a > 0, z >= 0.

    Integer a uses the exact finite sum
    Gamma(j, z) = (j-1)! e^-z sum_{k<j} z^k / k!; real a uses the
    regularized series (z < a + 1) or a modified Lentz continued fraction,
    scaled back by Gamma(a).
    """
    if not (np.isfinite(a) and a > 0):
        raise DomainError(f"shape must be positive and finite, got {a!r}")
    if not (np.isfinite(z) and z >= 0):
        raise DomainError(f"lower limit must be >= 0 and finite, got {z!r}")
    if z == 0.0:
        return float(math.gamma(a))  # OverflowError surfaces for extreme a
    if float(a).is_integer() and a <= 170:
        return float(_upper_gamma_int(int(a), np.asarray(z, float)))
    if a > 170:
        raise OverflowError(f"Gamma({a}, {z}) overflows double precision")
    if z < a + 1.0:
        return math.gamma(a) * (1.0 - _reg_lower_series(a, z))
    return math.gamma(a) * _reg_upper_cf(a, z)


def _reg_lower_series(a, z):
    ap = a
    term = total = 1.0 / a
    for _ in range(500):
        ap += 1.0
        term *= z / ap
        total += term
        if abs(term) < abs(total) * 1e-16:
            return total * math.exp(-z + a * math.log(z) - math.lgamma(a))
    raise NonConvergenceError("incomplete gamma series stalled")


def _reg_upper_cf(a, z):
    tiny = 1e-300
    b = z + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 500):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            return math.exp(-z + a * math.log(z) - math.lgamma(a)) * h
    raise NonConvergenceError("incomplete gamma continued fraction stalled")


def _upper_gamma_int(j, z):
    """Unnormalized Gamma(j, z) for integer j >= 1, vectorized over z.

    Where exp(-z) underflows, the true value is below ~1e-300 and is
    returned as exactly zero to avoid 0 * inf artifacts downstream.
    """
    z = np.asarray(z, dtype=float)
    alive = z <= _EXP_UNDERFLOW_Z
    zs = np.where(alive, z, 0.0)
    poly = np.ones_like(zs)
    term = np.ones_like(zs)
    for k in range(1, j):
        term = term * zs / k
        poly = poly + term
    out = math.factorial(j - 1) * np.exp(-zs) * poly
    return np.where(alive, out, 0.0)


@dataclass(frozen=True)
class PartialFractionCoefficients:
    """Pole-residue form of serving transform x interference product.

    ``beta1[j-1]`` multiplies 1/(s + serving_gamma_rate)^j and ``beta21``
    multiplies 1/(s + serving_rayleigh_rate); these decompose the serving
    link's own transform.  ``delta[i, j-1]`` and ``delta_prime[i]`` do the
    same for the product of the interferers' transforms at interferer i's
    Gamma pole (order j) and Rayleigh pole.
    """

    beta1: np.ndarray
    beta21: float
    delta: np.ndarray
    delta_prime: np.ndarray
    serving_gamma_rate: float
    serving_rayleigh_rate: float
    interferer_gamma_rates: np.ndarray
    interferer_rayleigh_rates: np.ndarray
    nakagami_m: int

    def serving_transform(self, s):
        s = np.asarray(s, dtype=float)
        out = np.zeros_like(s) + self.beta21 / (s + self.serving_rayleigh_rate)
        for j in range(1, self.nakagami_m + 1):
            out = out + self.beta1[j - 1] / (s + self.serving_gamma_rate) ** j
        return out

    def interference_transform(self, s):
        s = np.asarray(s, dtype=float)
        if len(self.delta_prime) == 0:
            return np.ones_like(s)  # empty product of transforms
        out = np.zeros_like(s)
        for i in range(len(self.delta_prime)):
            out = out + self.delta_prime[i] / (s + self.interferer_rayleigh_rates[i])
            for j in range(1, self.nakagami_m + 1):
                out = out + self.delta[i, j - 1] / (s + self.interferer_gamma_rates[i]) ** j
        return out

    def reconstruct(self, s):
        """The full transform product rebuilt from the coefficients."""
        return self.serving_transform(s) * self.interference_transform(s)


def check_pole_distinctness(poles, rtol=POLE_DISTINCTNESS_RTOL):
    """Raise if any two pole rates are closer than rtol (relative)."""
    poles = np.sort(np.asarray(poles, dtype=float))
    if len(poles) < 2:
        return
    gaps = np.diff(poles)
    scale = np.maximum(np.abs(poles[:-1]), np.abs(poles[1:]))
    bad = gaps <= rtol * scale
    if np.any(bad):
        k = int(np.argmax(bad))
        raise DegeneratePoleError(
            f"pole rates {poles[k]!r} and {poles[k + 1]!r} coincide "
            f"within relative {rtol}"
        )


def partial_fraction_decompose(serving, interferers, m):
    """Decompose serving and interference SNR transforms into pole residues.

    ``serving`` and each interferer are LinkStatistics.  All 2N + 2 pole
    rates must be pairwise distinct (relative 1e-9); otherwise a
    DegeneratePoleError is raised and the caller is expected to perturb
    the offending mean and retry.
    """
    if not (isinstance(m, (int, np.integer)) and m >= 1):
        raise DomainError(f"nakagami shape must be a positive integer, got {m!r}")
    m = int(m)
    sg = m / serving.a_mean
    sr = 1.0 / serving.b_mean
    p = np.array([it.p_los for it in interferers], dtype=float)
    ig = np.array([m / it.a_mean for it in interferers], dtype=float)
    ir = np.array([1.0 / it.b_mean for it in interferers], dtype=float)

    check_pole_distinctness(np.concatenate(([sg, sr], ig, ir)))

    beta1 = np.zeros(m)
    beta1[m - 1] = serving.p_los * sg**m
    beta21 = (1.0 - serving.p_los) * sr

    delta, delta_prime = interference_partial_fractions(
        p[None, :], ig[None, :], ir[None, :], m
    )
    return PartialFractionCoefficients(
        beta1=beta1,
        beta21=float(beta21),
        delta=delta[0],
        delta_prime=delta_prime[0],
        serving_gamma_rate=float(sg),
        serving_rayleigh_rate=float(sr),
        interferer_gamma_rates=ig,
        interferer_rayleigh_rates=ir,
        nakagami_m=m,
    )


def interference_partial_fractions(p, grate, rrate, m):
    """Pole residues of prod_t phi_t(s) for a batch of interferer sets.

    Inputs are (R, N) arrays: per row, N interferers with LoS probability
    p, Gamma rate grate = m / a_mean and Rayleigh rate rrate = 1 / b_mean.
    Returns (delta, delta_prime) with shapes (R, N, m) and (R, N).

    Rayleigh residues are plain cover-up products of the other transforms
    evaluated at the pole.  Gamma residues of order j come from the jet
    (truncated Taylor) product of the other transforms around the pole:
    delta[i, j] = p_i grate_i^m * J_i[m - j], where J_i is the product jet
    truncated at order m - 1.  Jets are multiplied by sequential
    convolution, which stays stable even when a transform is tiny at the
    expansion point.
    """
    p = np.asarray(p, dtype=float)
    grate = np.asarray(grate, dtype=float)
    rrate = np.asarray(rrate, dtype=float)
    rows, n = p.shape
    q = 1.0 - p
    if n == 0:
        return np.zeros((rows, 0, m)), np.zeros((rows, 0))

    gm = p * grate**m  # LoS branch numerators
    rb = q * rrate     # NLoS branch numerators

    # --- Rayleigh poles: delta_prime[r, i] = rb_i * prod_{t != i} phi_t(-rrate_i)
    dg = grate[:, :, None] - rrate[:, None, :]   # [r, t, i]
    dr = rrate[:, :, None] - rrate[:, None, :]
    eye = np.eye(n, dtype=bool)
    with np.errstate(divide="ignore", invalid="ignore"):
        phi_at = gm[:, :, None] / dg**m + rb[:, :, None] / dr
    phi_at[:, eye] = 1.0
    delta_prime = rb * np.prod(phi_at, axis=1)

    # --- Gamma poles: jet products around s = -grate_i, truncated at m - 1
    gg = grate[:, :, None] - grate[:, None, :]   # [r, t, i]
    rg = rrate[:, :, None] - grate[:, None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        coef = np.empty((rows, n, n, m))
        sign = 1.0
        binom = 1.0  # C(m + k - 1, k)
        gg_pow = gg**m
        rg_pow = rg.copy()
        for k in range(m):
            if k > 0:
                sign = -sign
                binom = binom * (m + k - 1) / k
                gg_pow = gg_pow * gg
                rg_pow = rg_pow * rg
            coef[:, :, :, k] = sign * (
                binom * gm[:, :, None] / gg_pow + rb[:, :, None] / rg_pow
            )
    coef[:, eye, :] = 0.0  # t == i entries are never used; drop their infs
    # sequential truncated convolution over t, skipping t == i
    jet = np.zeros((rows, n, m))
    jet[:, :, 0] = 1.0
    for t in range(n):
        ct = coef[:, t, :, :]  # [r, i, k]
        new = np.empty_like(jet)
        for k in range(m):
            acc = jet[:, :, 0] * ct[:, :, k]
            for u in range(1, k + 1):
                acc = acc + jet[:, :, u] * ct[:, :, k - u]
            new[:, :, k] = acc
        keep = eye[t]  # row i == t keeps its old jet
        jet = np.where(keep[None, :, None], jet, new)

    delta = np.empty((rows, n, m))
    for j in range(1, m + 1):
        delta[:, :, j - 1] = gm * jet[:, :, m - j]
    return delta, delta_prime

"""Closed-form outage: frozen oracles, route agreement, and invariants.

The two "oracle" literals with long mantissas were produced by direct
high-precision numerical integration (mpmath, 40 digits) of
E_I[F_serving(gamma_th (1 + I))] with the interference density written as
an explicit mixture convolution; they share no code with the package.
"""

import math

import numpy as np
import pytest

from uavsteer.errors import DomainError, NumericalInstabilityError
from uavsteer.channel import LinkStatistics
from uavsteer.montecarlo import McConfig, monte_carlo_outage
from uavsteer.numerics import gauss_laguerre_rule
from uavsteer.outage import (
    CLAMP_BAND,
    OutageResult,
    order_chain,
    outage_closed_form,
    outage_no_interference,
    closed_form_outage_batch,
    _assemble,
    _assemble_factored,
    _band_clip,
    _decompose_rows,
)


# ------------------------------------------------------------ frozen oracles

def test_gamma_branch_only_frozen_value():
    # pure LoS, m = 2, A = 10, gamma_th = 1:
    # P = 1 - e^-0.2 (1 + 0.2) = 0.017523096306421904
    serving = LinkStatistics(1.0, 10.0, 1.0, 2)
    r = outage_no_interference(serving, 1.0)
    assert r.probability == pytest.approx(0.017523096306421904, rel=1e-14)
    assert r.laguerre_order_used == 0


def test_mixture_frozen_value():
    # half LoS as above, half Rayleigh with B = 10: adds (1 - e^-0.1)/2
    serving = LinkStatistics(0.5, 10.0, 10.0, 2)
    r = outage_no_interference(serving, 1.0)
    assert r.probability == pytest.approx(0.05634283913523119, rel=1e-14)


def test_one_interferer_against_integration_oracle():
    serving = LinkStatistics(0.6, 5.0, 1.0, 2)
    interferer = LinkStatistics(0.3, 8.0, 2.0, 2)
    r = outage_closed_form(serving, [interferer], 0.7)
    assert r.probability == pytest.approx(0.53371270629371521, abs=1e-10)
    assert r.laguerre_order_used == 30


def test_two_interferers_against_integration_oracle():
    serving = LinkStatistics(0.6, 5.0, 1.0, 2)
    ints = [LinkStatistics(0.3, 8.0, 2.0, 2), LinkStatistics(0.8, 3.0, 0.5, 2)]
    r = outage_closed_form(serving, ints, 0.7)
    assert r.probability == pytest.approx(0.68780351674471899, abs=1e-10)


# ------------------------------------------------------- degenerate reductions

def test_empty_interferer_matches_direct_cdf():
    rng = np.random.default_rng(4)
    for _ in range(50):
        p = float(rng.uniform(0, 1))
        a = 10.0 ** float(rng.uniform(-2, 6))
        b = a * 10.0 ** float(-rng.uniform(0, 3))
        g = 10.0 ** float(rng.uniform(-4, 1))
        serving = LinkStatistics(p, a, b, 2)
        cf = outage_closed_form(serving, [], g)
        direct = outage_no_interference(serving, g)
        assert abs(cf.probability - direct.probability) <= 1e-9
        assert cf.laguerre_order_used == 0


def test_interference_free_limit_as_interferers_vanish():
    # an interferer with negligible mean SNR changes nothing measurable
    serving = LinkStatistics(0.6, 50.0, 5.0, 2)
    ghost = LinkStatistics(0.5, 1e-9, 1e-10, 2)
    with_ghost = outage_closed_form(serving, [ghost], 0.3)
    without = outage_no_interference(serving, 0.3)
    assert with_ghost.probability == pytest.approx(without.probability, abs=1e-7)


# ------------------------------------------------------------ MC cross-checks

@pytest.mark.parametrize("n_int,seed", [(1, 10), (2, 11), (4, 12), (8, 13)])
def test_matches_monte_carlo(n_int, seed):
    rng = np.random.default_rng(seed)

    def draw():
        p = float(rng.uniform(0, 1))
        a = 10.0 ** float(rng.uniform(-2, 6))
        return LinkStatistics(p, a, a * 10.0 ** float(-rng.uniform(0, 3)), 2)

    serving = draw()
    ints = [draw() for _ in range(n_int)]
    g = 10.0 ** float(rng.uniform(-3, 0.5))
    cf = outage_closed_form(serving, ints, g)
    mc = monte_carlo_outage(serving, ints, g, McConfig(300_000, seed + 1000))
    tol = max(4.0 * mc.std_error, 4e-3)
    assert abs(cf.probability - mc.probability) <= tol


# --------------------------------------------------------------- monotonicity

def test_outage_increases_with_threshold():
    serving = LinkStatistics(0.7, 20.0, 2.0, 2)
    ints = [LinkStatistics(0.4, 5.0, 1.0, 2)]
    probs = [outage_closed_form(serving, ints, g).probability
             for g in (0.01, 0.1, 1.0, 10.0)]
    assert all(b >= a for a, b in zip(probs, probs[1:]))


def test_outage_increases_with_interference():
    serving = LinkStatistics(0.7, 20.0, 2.0, 2)
    weak = [LinkStatistics(0.4, 0.5, 0.1, 2)]
    strong = [LinkStatistics(0.4, 50.0, 10.0, 2)]
    assert (outage_closed_form(serving, strong, 0.5).probability
            > outage_closed_form(serving, weak, 0.5).probability)


def test_outage_decreases_with_serving_strength():
    ints = [LinkStatistics(0.4, 2.0, 0.4, 2)]
    weak = LinkStatistics(0.7, 5.0, 0.5, 2)
    strong = LinkStatistics(0.7, 500.0, 50.0, 2)
    assert (outage_closed_form(strong, ints, 0.5).probability
            < outage_closed_form(weak, ints, 0.5).probability)


# ------------------------------------------------------- quadrature plumbing

def test_order_chain_shapes():
    assert order_chain(30) == [30, 60, 128]
    assert order_chain(64) == [64, 128]
    assert order_chain(128) == [128]


def test_explicit_rule_pins_the_order():
    serving = LinkStatistics(0.6, 5.0, 1.0, 2)
    ints = [LinkStatistics(0.3, 8.0, 2.0, 2)]
    r = outage_closed_form(serving, ints, 0.7, rule=gauss_laguerre_rule(45))
    assert r.laguerre_order_used == 45
    assert r.probability == pytest.approx(0.53371270629371521, abs=1e-10)


def test_successive_orders_agree():
    serving = LinkStatistics(0.6, 5.0, 1.0, 2)
    ints = [LinkStatistics(0.3, 8.0, 2.0, 2), LinkStatistics(0.8, 3.0, 0.5, 2)]
    r30 = outage_closed_form(serving, ints, 0.7, rule=gauss_laguerre_rule(30))
    r60 = outage_closed_form(serving, ints, 0.7, rule=gauss_laguerre_rule(60))
    assert abs(r30.probability - r60.probability) < 1e-6


def test_dominant_interferer_stays_accurate():
    # interference far above the serving link once broke the plain rule;
    # the substituted quadrature must handle it at the base order
    serving = LinkStatistics(0.9, 1.0, 0.1, 2)
    bully = LinkStatistics(0.9, 1e6, 1e5, 2)
    cf = outage_closed_form(serving, [bully], 0.1)
    mc = monte_carlo_outage(serving, [bully], 0.1, McConfig(300_000, 7))
    assert abs(cf.probability - mc.probability) <= max(4 * mc.std_error, 4e-3)
    assert cf.laguerre_order_used == 30


# --------------------------------------------------- stability and fallbacks

def test_identical_interferers_are_perturbed_not_fatal():
    serving = LinkStatistics(0.6, 5.0, 1.0, 2)
    twin = LinkStatistics(0.3, 8.0, 2.0, 2)
    r = outage_closed_form(serving, [twin, twin], 0.7)
    assert 0.0 <= r.probability <= 1.0
    mc = monte_carlo_outage(serving, [twin, twin], 0.7, McConfig(300_000, 3))
    assert abs(r.probability - mc.probability) <= max(4 * mc.std_error, 4e-3)


def test_many_similar_interferers_route_through_factored_form():
    # similar-strength interferers make the residues cancel catastrophically;
    # the probe must reroute those rows and still match Monte Carlo
    rng = np.random.default_rng(15)
    serving = LinkStatistics(0.7, 40.0, 8.0, 2)
    ints = [LinkStatistics(float(rng.uniform(0.3, 0.7)),
                           float(30.0 * rng.uniform(0.9, 1.1)),
                           float(6.0 * rng.uniform(0.9, 1.1)), 2)
            for _ in range(8)]
    cf = outage_closed_form(serving, ints, 0.05)
    mc = monte_carlo_outage(serving, ints, 0.05, McConfig(400_000, 5))
    assert abs(cf.probability - mc.probability) <= max(4 * mc.std_error, 4e-3)


def test_factored_and_pole_residue_assemblies_agree():
    rng = np.random.default_rng(3)
    rule = gauss_laguerre_rule(30)
    checked = 0
    for k in range(120):
        n_int = int(rng.integers(1, 7))
        g = 10.0 ** float(rng.uniform(-3, 0.5))
        sp = np.array([float(rng.uniform(0, 1))])
        sA = np.array([10.0 ** float(rng.uniform(-1, 5))])
        sB = sA * 10.0 ** np.array([float(-rng.uniform(0, 3))])
        pi = rng.uniform(0, 1, (1, n_int))
        ai = 10.0 ** rng.uniform(-1, 5, (1, n_int))
        bi = ai * 10.0 ** (-rng.uniform(0, 3, (1, n_int)))
        parts, factored = _decompose_rows(sp, sA, sB, pi, ai, bi, 2, g)
        if factored[0]:
            continue  # intrinsically ill-conditioned; only one route is valid
        v_pf = float(_assemble(parts, 2, g, rule)[0])
        v_fac = float(_assemble_factored(parts, 2, g)[0])
        assert abs(v_pf - v_fac) < 1e-8, f"case {k}"
        checked += 1
    assert checked > 60  # most random rows must remain on the primary route


def test_band_clip_tolerates_rounding_noise():
    vals = np.array([-0.5 * CLAMP_BAND, 0.3, 1.0 + 0.5 * CLAMP_BAND])
    out = _band_clip(vals)
    assert out[0] == 0.0
    assert out[1] == 0.3
    assert out[2] == 1.0


def test_band_clip_raises_beyond_band_with_raw_value():
    with pytest.raises(NumericalInstabilityError) as err:
        _band_clip(np.array([1.5]))
    assert err.value.raw == pytest.approx(1.5)


def test_batch_handles_empty_input():
    probs, orders = closed_form_outage_batch(
        np.empty(0), np.empty(0), np.empty(0),
        np.empty((0, 3)), np.empty((0, 3)), np.empty((0, 3)),
        2, 0.5, [30])
    assert probs.shape == (0,)
    assert orders.shape == (0,)


def test_batch_mixes_interferer_free_rows():
    sp = np.array([0.5, 0.9])
    sA = np.array([10.0, 30.0])
    sB = np.array([1.0, 3.0])
    probs, orders = closed_form_outage_batch(
        sp, sA, sB, np.empty((2, 0)), np.empty((2, 0)), np.empty((2, 0)),
        2, 1.0, [30])
    for row in range(2):
        direct = outage_no_interference(
            LinkStatistics(sp[row], sA[row], sB[row], 2), 1.0)
        assert probs[row] == pytest.approx(direct.probability, abs=1e-12)
    assert list(orders) == [0, 0]


# ----------------------------------------------------------------- interfaces

def test_rejects_non_positive_threshold():
    serving = LinkStatistics(0.5, 2.0, 0.5, 2)
    with pytest.raises(DomainError):
        outage_closed_form(serving, [], 0.0)
    with pytest.raises(DomainError):
        outage_no_interference(serving, -1.0)


def test_rejects_mixed_nakagami_shapes():
    serving = LinkStatistics(0.5, 2.0, 0.5, 2)
    odd = LinkStatistics(0.5, 2.0, 0.5, 3)
    with pytest.raises(DomainError):
        outage_closed_form(serving, [odd], 0.5)


def test_result_invariants_are_enforced():
    with pytest.raises(DomainError):
        OutageResult(0.5, "guesswork", 0.0, 0)
    with pytest.raises(DomainError):
        OutageResult(1.5, "closed_form", 0.0, 30)
    with pytest.raises(DomainError):
        OutageResult(0.5, "closed_form", 0.1, 30)
    with pytest.raises(DomainError):
        OutageResult(0.5, "monte_carlo", 0.0, 0)
    with pytest.raises(DomainError):
        OutageResult(0.5, "monte_carlo", 0.01, 30)
    ok = OutageResult(0.5, "monte_carlo", 0.01, 0)
    assert ok.std_error == 0.01

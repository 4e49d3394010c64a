import math

import numpy as np
import pytest

from gsalab import estimators, polytope, radial, specfun
from gsalab.polytope import NazParams
from gsalab.radial import (ChainViolationError, QuadratureSpec, choose_s,
                           expected_gsa, expected_influence_quadrature,
                           lower_bound_chain, optimal_c1, optimize_s, scan_report,
                           shell_for)

C1_CLOSED_FORM = math.sqrt(2.0 * math.pi) * math.exp(-0.25)


def test_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(rho_lo=-1.0, rho_hi=2.0)
    with pytest.raises(ValueError):
        QuadratureSpec(rho_lo=2.0, rho_hi=1.0)
    with pytest.raises(ValueError):
        QuadratureSpec(rho_lo=0.0, rho_hi=1.0, nodes=8)
    with pytest.raises(ValueError):
        QuadratureSpec(rho_lo=0.0, rho_hi=1.0, rule="monte-carlo")


def test_spec_default_window():
    spec = QuadratureSpec.for_dimension(16)
    assert spec.rho_lo == 0.0
    assert spec.rho_hi == pytest.approx(16.0)
    spec = QuadratureSpec.for_dimension(4096)
    assert spec.rho_lo == pytest.approx(52.0)
    assert spec.rho_hi == pytest.approx(76.0)


def test_shell_fields():
    shell = shell_for(256)
    assert shell.t == pytest.approx(4.0)
    assert shell.rho_min == pytest.approx(12.0)
    assert shell.rho_max == pytest.approx(20.0)
    with pytest.raises(ValueError):
        shell_for(2)  # sqrt(2) - 2^(1/4) < 0


def test_single_halfspace_closed_form():
    # with one facet the expected influence is r * phi(r), independent of n
    for n, r in ((5, 1.0), (16, 2.0), (64, 2.0), (256, 4.0), (1024, 0.5)):
        got = expected_influence_quadrature(n, r, 1.0)
        want = r * specfun.gaussian_pdf(r)
        assert got == pytest.approx(want, rel=1e-10), (n, r)


def test_influence_quadrature_validation():
    with pytest.raises(ValueError):
        expected_influence_quadrature(3, 1.0, 2.0)
    with pytest.raises(ValueError):
        expected_influence_quadrature(16, -1.0, 2.0)
    with pytest.raises(ValueError):
        expected_influence_quadrature(16, 1.0, 0.5)


def test_influence_monotone_in_small_s():
    assert expected_influence_quadrature(16, 2.0, 2.0) > \
        expected_influence_quadrature(16, 2.0, 1.0)


def test_influence_single_cap_against_mc():
    # one-facet draws: the moment estimator must recover r * phi(r)
    n, r = 5, 1.0
    values = np.empty(200)
    for d in range(200):
        K = polytope.sample_naz(NazParams(n=n, offset=r, s=1), seed=7000 + d)
        values[d] = estimators.estimate_influence_spectral(K, 10_000, seed=7500 + d).value
    stderr = values.std(ddof=1) / math.sqrt(values.size)
    quad = expected_influence_quadrature(n, r, 1.0)
    assert abs(values.mean() - quad) <= 4 * stderr


def test_adaptive_rule_matches_composite():
    composite = expected_influence_quadrature(16, 2.0, 32.0)
    adaptive = expected_influence_quadrature(
        16, 2.0, 32.0, QuadratureSpec.for_dimension(16, rule="adaptive"))
    assert adaptive == pytest.approx(composite, rel=1e-8)


def test_expected_gsa_identity_and_cap():
    n, r, s = 64, 64**0.25, 300.0
    gsa = expected_gsa(n, r, s)
    assert gsa * r == pytest.approx(expected_influence_quadrature(n, r, s), rel=1e-14)
    assert gsa <= math.sqrt(2.0 * n) / r + 1e-9


def test_expected_gsa_matches_facet_mc():
    n, r, s = 16, 2.0, 32
    draws = 200
    values = np.empty(draws)
    for d in range(draws):
        K = polytope.sample_naz(NazParams(n=n, offset=r, s=s), seed=9000 + d)
        values[d] = estimators.estimate_gsa_facets(K, 1000, seed=9500 + d).value
    stderr = values.std(ddof=1) / math.sqrt(draws)
    assert abs(values.mean() - expected_gsa(n, r, float(s))) <= 4 * stderr


def test_choose_s_frozen_regression():
    # s = round(c1 / F(sqrt(n) - n^(1/4))) at n = 64, r = 64^(1/4); value
    # frozen from a direct evaluation of F at the inner shell edge
    c1_star, _ = optimal_c1()
    assert choose_s(64, 64**0.25, c1_star) == 182160


def test_choose_s_linear_in_c1():
    c1_star, _ = optimal_c1()
    s1 = choose_s(64, 64**0.25, c1_star)
    s2 = choose_s(64, 64**0.25, 2.0 * c1_star)
    assert abs(s2 - 2 * s1) <= 1


def test_choose_s_monotonicity_guard_passes():
    c1_star, _ = optimal_c1()
    for n in (64, 256, 1024, 4096):
        assert choose_s(n, n**0.25, c1_star) >= 1


def test_choose_s_degenerate_shell_rejected():
    with pytest.raises(ValueError):
        choose_s(16, 16**0.25, 1.9)  # sqrt(16) - 16^(1/4) == r exactly


def test_choose_s_detects_nonmonotone_dilation_factor():
    # tiny r puts the peak of F inside the shell, breaking the inner-edge rule
    with pytest.raises(RuntimeError):
        choose_s(64, 0.9, 1.9)


def test_optimal_c1_closed_forms():
    c_star, value = optimal_c1()
    assert abs(c_star - C1_CLOSED_FORM) <= 1e-8
    assert abs(value - math.exp(-1.25)) <= 1e-9


def test_optimal_c1_is_interior_max():
    c_star, value = optimal_c1()
    rate = math.exp(0.25) / math.sqrt(2.0 * math.pi)

    def objective(c):
        return c / math.sqrt(2.0 * math.pi) * math.exp(-rate * c)

    assert objective(c_star / 2.0) < value
    assert objective(2.0 * c_star) < value


def test_optimize_s_dominates_selection_rule():
    c1_star, _ = optimal_c1()
    n, r = 4096, 4096**0.25
    s_star, gsa_star = optimize_s(n, r)
    gsa_rule = expected_gsa(n, r, float(choose_s(n, r, c1_star)))
    assert gsa_star >= gsa_rule - 1e-9


def test_optimize_s_unimodal_neighborhood():
    n, r = 256, 4.0
    s_star, gsa_star = optimize_s(n, r)
    assert gsa_star > expected_gsa(n, r, max(1.0, s_star / 2.0))
    assert gsa_star > expected_gsa(n, r, 2.0 * s_star)


@pytest.mark.xfail(
    strict=True,
    reason="measured: the selection rule pins s to the inner shell edge where the "
    "integrand is negligible; at n=4096 it lands four orders of magnitude above "
    "the true optimum (2.9e19 vs 1.8e15), not within a factor of 3")
def test_optimize_s_within_factor_three_of_rule():
    c1_star, _ = optimal_c1()
    n, r = 4096, 4096**0.25
    s_star, _ = optimize_s(n, r)
    s_rule = choose_s(n, r, c1_star)
    assert s_rule / 3.0 <= s_star <= s_rule * 3.0


def test_chain_ordering_moderate_config():
    # a configuration where nothing underflows: all four steps are positive
    rep = lower_bound_chain(64, 64**0.25, 502.0)
    assert rep.exact_quadrature > 0.0
    assert 0.0 < rep.bernoulli_value <= rep.chain_value <= rep.exact_quadrature
    assert rep.log_chain_value == pytest.approx(math.log(rep.chain_value), rel=1e-12)
    assert rep.gsa_lower == pytest.approx(rep.chain_value / rep.r, rel=1e-14)


def test_chain_ordering_at_selection_rule():
    c1_star, _ = optimal_c1()
    s = float(choose_s(256, 4.0, c1_star))
    rep = lower_bound_chain(256, 4.0, s)
    assert rep.chain_value <= rep.exact_quadrature + 1e-10
    assert rep.c1 == pytest.approx(c1_star, rel=1e-9)


def test_chain_stitch_factor_near_one_at_large_n():
    c1_star, _ = optimal_c1()
    n = 4096
    s = float(choose_s(n, n**0.25, c1_star))
    rep = lower_bound_chain(n, n**0.25, s)
    assert 0.99 < rep.stitch_factor_min <= 1.0


@pytest.mark.xfail(
    strict=True,
    reason="measured: the complement bound G is not flat across the shell; its log "
    "varies by about 2 n^(1/4) (sup/inf - 1 is 1.9e7 at n=4096 and grows with n)")
def test_chain_complement_bound_flat_on_shell():
    c1_star, _ = optimal_c1()
    flatness = []
    for n in (256, 1024, 4096):
        s = float(choose_s(n, n**0.25, c1_star))
        rep = lower_bound_chain(n, n**0.25, s)
        flatness.append(rep.sup_G / rep.inf_G - 1.0)
    assert flatness[-1] <= 0.25
    assert flatness[0] >= flatness[1] >= flatness[2]


def test_shell_volume_nearly_full():
    for n in (256, 1024, 4096):
        rep = lower_bound_chain(n, n**0.25, 100.0)
        assert rep.vol_shell > 0.95


def test_chain_dominance_across_scan():
    for rep in scan_report([64, 256], [0.75, 1.0, 1.25]):
        assert rep.chain_value <= rep.exact_quadrature + 1e-10
        assert rep.bernoulli_value <= rep.chain_value + 1e-10


def test_scan_threaded_matches_serial():
    serial = scan_report([64, 256], [1.0], threads=1)
    threaded = scan_report([64, 256], [1.0], threads=4)
    for a, b in zip(serial, threaded):
        assert a == b


def test_scan_ratios_below_raic_coefficient():
    from gsalab import bounds

    for rep in scan_report([256, 1024], [1.0]):
        assert rep.ratio_to_n14 <= bounds.raic_upper(rep.n) / rep.n**0.25


@pytest.mark.xfail(
    strict=True,
    reason="measured: the optimized ratio decreases toward its limit from above "
    "(0.3269 at n=256 down to 0.3046 at n=16384); it is not nondecreasing")
def test_scan_ratio_nondecreasing_in_n():
    reports = scan_report([256, 1024, 4096], [1.0])
    ratios = [rep.ratio_to_n14 for rep in reports]
    assert all(b >= a - 1e-4 for a, b in zip(ratios, ratios[1:]))


@pytest.mark.xfail(
    strict=True,
    reason="measured: at n=4096 the grid argmax of the optimized ratio sits at "
    "alpha=1.25 (0.3181) rather than alpha=1.0 (0.3080)")
def test_scan_alpha_grid_peaks_at_one():
    reports = scan_report([4096], [0.5, 0.75, 1.0, 1.25, 1.5])
    best = max(reports, key=lambda rep: rep.ratio_to_n14)
    assert best.alpha == pytest.approx(1.0)


def test_log_integrand_extremes_stay_representable():
    # no overflow/underflow surprises at s = 1e9, n = 1e5
    n = 100_000
    r = n**0.25
    spec = QuadratureSpec.for_dimension(n)
    for rho in (spec.rho_lo, r + 1e-6, math.sqrt(n), spec.rho_hi):
        value = radial.influence_log_integrand(n, r, 1e9, rho)
        assert not math.isnan(value)
        assert value < math.inf


def test_naz_prime_expected_influence_scales_like_sqrt_n():
    # Gaussian-normal variant at w = n^(3/4) with s = exp(Theta(sqrt(n)))
    for n in (64, 256, 1024):
        w = n**0.75
        s = max(1.0, round(1.0 / specfun.gaussian_tail(n**0.25)))
        value = radial.expected_influence_naz_prime(n, w, s)
        assert value / math.sqrt(n) >= 0.25, (n, value)


def test_naz_prime_quadrature_against_mc():
    n, w, s = 8, 8.0**0.75, 20
    params = NazParams(n=n, offset=w, s=s, variant=polytope.GAUSSIAN)
    values = np.empty(150)
    for d in range(values.size):
        K = polytope.sample_naz_prime(params, seed=60_000 + d)
        values[d] = estimators.estimate_influence_spectral(K, 20_000, seed=61_000 + d).value
    stderr = values.std(ddof=1) / math.sqrt(values.size)
    quad = radial.expected_influence_naz_prime(n, w, float(s))
    assert abs(values.mean() - quad) <= 4 * stderr


def test_chain_never_trips_on_valid_configs():
    c1_star, _ = optimal_c1()
    for n, r, s in ((64, 2.0, 50.0), (256, 4.0, 35720.0),
                    (1024, 1024**0.25, 2000.0),
                    (4096, 8.0, float(choose_s(4096, 8.0, c1_star)))):
        try:
            lower_bound_chain(n, r, s)
        except ChainViolationError as exc:
            pytest.fail(f"chain violation on valid config: {exc}")

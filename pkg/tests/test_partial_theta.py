"""Alternating partial sums, the tail split identity, and the bound."""

import math

import numpy as np
import pytest
from mpmath import mp, mpf

import geokernel as gk
from geokernel.partial_theta import PartialThetaError


def _direct_sum(mu, r, n, dps, terms):
    # brute reference at elevated precision
    with mp.workdps(dps):
        mu = mpf(mu)
        r = mpf(r)
        return mp.fsum(
            (-1) ** k * mp.exp(-mu * k * k / n ** 2 - r * k / n)
            for k in range(terms)
        )


def test_query_validation():
    with pytest.raises(PartialThetaError):
        gk.PartialThetaQuery(mu=1.0, r=0.0, n=0)
    with pytest.raises(PartialThetaError):
        gk.PartialThetaQuery(mu=1.0, r=0.0, n=2.5)
    with pytest.raises(Exception):
        gk.PartialThetaQuery(mu=1.0, r=0.0, n=4, precision_digits=1000)


def test_value_matches_direct_summation():
    for mu, r, n in [(1.0, 0.0, 4), (10.0, 1.0, 8), (40.0, 0.1, 128), (2.5, 100.0, 12)]:
        res = gk.partial_theta(gk.PartialThetaQuery(mu=mu, r=r, n=n, precision_digits=30))
        ref = _direct_sum(mu, r, n, 60, 20 * res.terms_used + 50)
        assert abs(res.value - ref) <= mpf("1e-30")


def test_truncation_bound_is_honest():
    res = gk.partial_theta(gk.PartialThetaQuery(mu=3.0, r=0.0, n=16, precision_digits=30))
    ref = _direct_sum(3.0, 0.0, 16, 60, 20 * res.terms_used + 50)
    assert abs(res.value - ref) <= res.truncation_bound
    assert res.truncation_bound < mpf("1e-35")  # cutoff is digits + 5


def test_value_stable_across_precision():
    lo = gk.partial_theta(gk.PartialThetaQuery(mu=3.0, r=0.5, n=12, precision_digits=30))
    hi = gk.partial_theta(gk.PartialThetaQuery(mu=3.0, r=0.5, n=12, precision_digits=50))
    assert abs(lo.value - hi.value) <= mpf("1e-28")


def test_damped_sums_dominate_undamped():
    # the r-damped sum never drops below the r = 0 sum
    for mu in (1.0, 40.0):
        for n in (4, 64):
            base = gk.s0(mu, n, 30)
            for r in (0.1, 1.0, 10.0, 100.0):
                res = gk.partial_theta(
                    gk.PartialThetaQuery(mu=mu, r=r, n=n, precision_digits=30)
                )
                assert res.value >= base - mpf("1e-28")


def test_s0_convenience_matches_query():
    direct = gk.partial_theta(gk.PartialThetaQuery(mu=7.0, r=0.0, n=8, precision_digits=30))
    assert gk.s0(7.0, 8, 30) == direct.value


def test_tail_decomposition_identity():
    rng = np.random.default_rng(17)
    for _ in range(8):
        mu = float(rng.uniform(0.5, 50.0))
        n = int(4 * rng.integers(1, 33))
        residual = gk.tail_decomposition_check(mu, n, 40)
        assert residual <= mpf("1e-35")


def test_tail_decomposition_needs_quarter_order():
    with pytest.raises(PartialThetaError):
        gk.tail_decomposition_check(1.0, 6, 30)


def test_w_half_never_exceeds_bound():
    for mu in (1.0, 10.0, 40.0):
        for n in (4, 8, 20):
            w = gk.w_half(mu, n, 30)
            b = gk.bound_rhs(mu, n, 30)
            assert w <= b + mpf("1e-28")


def test_leading_term_closed_form_and_sign():
    for mu, n in [(1.0, 8), (3.0, 16), (2.0, 4)]:
        expect = math.exp(-mu / 4.0) * (2.0 * mu - mu * mu) / n ** 2
        assert gk.leading_term(mu, n) == pytest.approx(expect, rel=1e-15, abs=1e-300)
    assert gk.leading_term(2.0, 8) == 0.0
    assert gk.leading_term(1.9, 8) > 0.0
    assert gk.leading_term(2.1, 8) < 0.0
    wide = gk.leading_term(mpf(3), 16, 30)
    assert abs(float(wide) - gk.leading_term(3.0, 16)) <= 1e-16


def test_bringmann_coefficient():
    assert gk.bringmann_coefficient(0) == 0.5
    for a in (1, 2, 7):
        assert gk.bringmann_coefficient(a) == 0.0
    for bad in (-1, 0.5):
        with pytest.raises(PartialThetaError):
            gk.bringmann_coefficient(bad)


def test_bringmann_coefficient_against_derivatives():
    # the closed form is the 2a-th scaled derivative of 1/(1 + e^{2 pi i u})
    # at u = 0; the odd tangent part kills every order above zero
    with mp.workdps(60):
        h = lambda u: 1 / (1 + mp.e ** (2j * mp.pi * u))
        for a in range(4):
            numeric = mp.diff(h, 0, 2 * a) * (-1) ** a / (2 * mp.pi) ** (2 * a)
            assert abs(numeric.real - gk.bringmann_coefficient(a)) < mpf("1e-40")
            assert abs(numeric.imag) < mpf("1e-40")


def test_mu_lambda_maps_are_inverse():
    for lam in (0.01, 0.1, 1.0, 3.7):
        assert gk.lambda_of_mu(gk.mu_of_lambda(lam)) == pytest.approx(lam, rel=1e-15)
    # the sign threshold mu = 2 sits at lambda = 1/(2 pi^2)
    assert gk.lambda_of_mu(2.0) == pytest.approx(1.0 / (2.0 * math.pi ** 2), rel=1e-15)

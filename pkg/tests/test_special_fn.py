import math

import mpmath as mp
import pytest
import scipy.special as sc
from hypothesis import given, settings
from hypothesis import strategies as st

from binv.errors import DomainError
from binv.special_fn import (
    erfc,
    gamma_star,
    inc_beta_ref,
    inverfc,
    log1pmx,
    log_beta,
    log_gamma_star,
)

mp.mp.dps = 40


def test_erfc_basics():
    assert erfc(0.0) == 1.0
    assert erfc(-0.7) == pytest.approx(2.0 - erfc(0.7), abs=1e-16)


def test_erfc_matches_quadrature():
    ref = 2 / mp.sqrt(mp.pi) * mp.quad(lambda t: mp.exp(-t * t), [1, mp.inf])
    assert abs(erfc(1.0) - float(ref)) <= 1e-14 * float(ref)


@pytest.mark.parametrize("z", [math.inf, -math.inf, math.nan])
def test_erfc_rejects_non_finite(z):
    with pytest.raises(DomainError):
        erfc(z)


def test_inverfc_fixed_values():
    assert inverfc(1.0) == 0.0
    assert inverfc(1.02) == pytest.approx(-0.0177264, rel=5e-6)
    for y in (1e-8, 0.3, 1.7):
        assert erfc(inverfc(y)) == pytest.approx(y, rel=1e-14)


@settings(max_examples=400, deadline=None)
@given(st.floats(min_value=1e-10, max_value=2.0 - 1e-10))
def test_inverfc_round_trip(y):
    assert abs(erfc(inverfc(y)) - y) <= 1e-13 * y


@given(st.floats(min_value=1e-300, max_value=1.999999))
def test_inverfc_agrees_with_scipy(y):
    z = inverfc(y)
    ref = sc.erfcinv(y)
    assert z == pytest.approx(ref, rel=1e-13, abs=1e-15)


@pytest.mark.parametrize("y", [0.0, 2.0, -0.1, 2.5, math.nan])
def test_inverfc_domain(y):
    with pytest.raises(DomainError):
        inverfc(y)


def test_gamma_star_values():
    assert gamma_star(1.0) == pytest.approx(math.e / math.sqrt(2 * math.pi), rel=1e-15)
    assert abs(gamma_star(1e6) - 1.0) < 1e-6
    assert abs(gamma_star(100.0) - (1 + 1 / 1200)) < 1e-4


@given(st.floats(min_value=0.01, max_value=1e6))
def test_log_gamma_star_against_mpmath(x):
    mx = mp.mpf(x)
    ref = mp.loggamma(mx) - (mx - 0.5) * mp.log(mx) + mx - 0.5 * mp.log(2 * mp.pi)
    assert abs(log_gamma_star(x) - float(ref)) <= 2e-15 * max(1.0, abs(float(ref)))


def test_log_gamma_star_continuous_at_series_switch():
    below = log_gamma_star(math.nextafter(10.0, 0.0))
    assert below == pytest.approx(log_gamma_star(10.0), rel=1e-14)


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=0.01, max_value=1e5), st.floats(min_value=0.01, max_value=1e5))
def test_log_beta_against_mpmath(a, b):
    ref = float(mp.log(mp.beta(a, b)))
    assert abs(log_beta(a, b) - ref) <= 4e-15 * max(1.0, abs(ref))


def test_log_beta():
    assert log_beta(1.0, 1.0) == 0.0
    assert log_beta(3.5, 7.25) == log_beta(7.25, 3.5)
    ref = math.lgamma(30) + math.lgamma(21) - math.lgamma(51)
    assert abs(log_beta(30.0, 21.0) - ref) <= 1e-13
    with pytest.raises(DomainError):
        log_beta(0.0, 1.0)


@given(st.floats(min_value=-0.999, max_value=10.0))
def test_log1pmx_against_mpmath(t):
    mt = mp.mpf(t)
    if abs(t) < 1e-3:
        ref = float(mp.fsum((-1) ** (k + 1) * mt**k / k for k in range(2, 40)))
    else:
        ref = float(mp.log1p(mt) - mt)
    assert log1pmx(t) == pytest.approx(ref, rel=2e-15, abs=1e-300)


def test_inc_beta_ref_trivial_cases():
    assert inc_beta_ref(0.37, 1.0, 1.0) == pytest.approx(0.37, rel=1e-15)
    assert inc_beta_ref(0.3, 5.0, 7.0) + inc_beta_ref(0.7, 7.0, 5.0) == pytest.approx(1.0, abs=1e-15)
    assert inc_beta_ref(0.0, 2.0, 3.0) == 0.0
    assert inc_beta_ref(1.0, 2.0, 3.0) == 1.0


def test_inc_beta_ref_binomial_relation():
    p = mp.mpf("0.4")
    exact = mp.fsum(mp.binomial(50, k) * p**k * (1 - p) ** (50 - k) for k in range(21))
    assert abs(inc_beta_ref(0.6, 30.0, 21.0) - float(exact)) <= 1e-12


@settings(max_examples=200, deadline=None)
@given(
    st.floats(min_value=0.001, max_value=0.999),
    st.floats(min_value=0.05, max_value=400.0),
    st.floats(min_value=0.05, max_value=400.0),
)
def test_inc_beta_ref_against_mpmath(y, a, b):
    ref = float(mp.betainc(a, b, 0, y, regularized=True))
    assert abs(inc_beta_ref(y, a, b) - ref) <= 1e-13 + 1e-12 * ref


@settings(max_examples=60, deadline=None)
@given(
    st.floats(min_value=0.01, max_value=0.99),
    st.integers(min_value=1, max_value=3000),
    st.integers(min_value=1, max_value=3000),
)
def test_inc_beta_ref_against_binomial_sum(y, a, b):
    # I_y(a, b) = P(Bin(a + b - 1, y) >= a) for integer a, b
    m, my = a + b - 1, mp.mpf(y)
    ref = float(mp.fsum(mp.binomial(m, j) * my**j * (1 - my) ** (m - j) for j in range(a, m + 1)))
    assert abs(inc_beta_ref(y, a, b) - ref) <= 1e-13 + 1e-12 * ref


@settings(max_examples=200, deadline=None)
@given(
    st.floats(min_value=0.001, max_value=0.999),
    st.floats(min_value=0.5, max_value=5000.0),
    st.floats(min_value=0.5, max_value=5000.0),
)
def test_inc_beta_ref_complement(y, a, b):
    assert abs(inc_beta_ref(y, a, b) + inc_beta_ref(1.0 - y, b, a) - 1.0) <= 1e-14


@pytest.mark.parametrize("args", [(-0.1, 1.0, 1.0), (1.1, 1.0, 1.0), (0.5, 0.0, 1.0), (0.5, 1.0, -2.0)])
def test_inc_beta_ref_domain(args):
    with pytest.raises(DomainError):
        inc_beta_ref(*args)

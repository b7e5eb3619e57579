import math
import warnings

import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from binv import beta_asym as ba
from binv.beta_asym import (
    DEFAULT_CONFIG,
    AsymptoticConfig,
    EtaTransform,
    ck_coefficients,
    eta_from_x,
    f_nu_infinity,
    f_nu_infinity_series,
    f_of_zeta,
    fk_coefficients,
    inc_beta_asym,
    inc_beta_asym_terms,
    taylor_f,
    x_from_eta,
)
from binv.errors import AccuracyWarning, DomainError, OutOfRangeError
from binv.special_fn import inc_beta_ref, log_gamma_star

xis = st.floats(min_value=0.02, max_value=0.98)


# ---------------------------------------------------------------- eta <-> x


def test_eta_zero_at_xi():
    assert eta_from_x(0.4, 0.4) == 0.0
    assert x_from_eta(0.0, 0.25) == 0.25


def test_eta_for_worked_example_pair():
    assert eta_from_x(0.4, 0.40172) == pytest.approx(-0.0035103, rel=1e-4)


def test_eta_sign_follows_x_minus_xi():
    assert eta_from_x(0.3, 0.5) < 0.0 < eta_from_x(0.7, 0.5)


@given(st.floats(min_value=1e-6, max_value=1 - 1e-6), xis)
def test_eta_reflection(x, xi):
    assert eta_from_x(x, xi) == pytest.approx(-eta_from_x(1.0 - x, 1.0 - xi), rel=1e-9, abs=1e-12)


@settings(max_examples=300)
@given(st.floats(min_value=-8.0, max_value=8.0), xis)
def test_x_from_eta_inverts_eta_from_x(eta, xi):
    try:
        x = x_from_eta(eta, xi)
    except OutOfRangeError:
        # only when the root lies beyond the doubles next to 0 or 1
        w, wc = (xi, 1.0 - xi) if eta < 0 else (1.0 - xi, xi)
        log_gap = math.log(w) - (0.5 * eta * eta - wc * math.log(wc)) / w
        assert log_gap < math.log(2.0**-53)
        return
    assert 0.0 < x < 1.0
    # rounding x to a double moves eta by |d eta / dx| * ulp(x)
    slope = abs(x - xi) / (x * (1.0 - x) * abs(eta)) if abs(eta) > 1e-100 else 1.0 / (x * (1.0 - x))
    tol = 1e-13 * max(1.0, abs(eta)) + 4.0 * slope * math.ulp(x)
    assert abs(eta_from_x(x, xi) - eta) <= tol


def test_x_from_eta_deep_tail_and_range():
    # eta is unbounded as x -> 0, so eta = -10 is attainable
    x = x_from_eta(-10.0, 0.5)
    assert 0.0 < x < 1e-40
    with pytest.raises(OutOfRangeError):
        x_from_eta(-40.0, 0.5)
    with pytest.raises(OutOfRangeError):
        x_from_eta(math.inf, 0.5)


def test_eta_transform_fields():
    tr = EtaTransform.from_beta(0.6, 30.0, 21.0)
    assert tr.nu == 51.0
    assert tr.xi == pytest.approx(30 / 51)
    assert tr.lam == pytest.approx(math.sqrt(tr.xi * (1 - tr.xi)))
    assert tr.eta == eta_from_x(0.6, tr.xi)


@pytest.mark.parametrize("x, xi", [(0.0, 0.5), (1.0, 0.5), (0.5, 0.0), (0.5, 1.0)])
def test_eta_domain(x, xi):
    with pytest.raises(DomainError):
        eta_from_x(x, xi)


# ---------------------------------------------------------------- f and C_k


@given(xis)
def test_f_at_zero_and_first_coefficient(xi):
    lam = math.sqrt(xi * (1 - xi))
    a = taylor_f(xi)
    assert a[0] == pytest.approx(1.0)
    assert a[1] == pytest.approx((2 * xi - 1) / (3 * lam), rel=1e-12, abs=1e-14)
    assert a[2] == pytest.approx((1 - xi + xi * xi) / (12 * lam**2), rel=1e-12)
    assert f_of_zeta(0.0, xi) == 1.0


def test_f_odd_coefficient_vanishes_at_half():
    assert taylor_f(0.5)[1] == pytest.approx(0.0, abs=1e-15)


@settings(max_examples=200)
@given(st.floats(min_value=-3.0, max_value=3.0), xis)
def test_f_is_positive(zeta, xi):
    assert f_of_zeta(zeta, xi) > 0.0


@pytest.mark.parametrize("xi", [0.05, 0.2, 0.5, 0.8, 0.95])
def test_f_continuous_across_switch(xi):
    r = ba._switch_radius(xi, DEFAULT_CONFIG)
    for z in (r, -r):
        taylor = f_of_zeta(z, xi)
        t = x_from_eta(z, xi)
        direct = z * math.sqrt(xi * (1 - xi)) / (t - xi)
        assert abs(taylor - direct) <= 1e-11


@settings(max_examples=100)
@given(st.floats(min_value=-1.0, max_value=1.0), st.floats(min_value=0.1, max_value=0.9))
def test_c0_defining_relation(eta, xi):
    c0 = ck_coefficients(eta, xi, 0)[0]
    assert c0 * eta + 1.0 == pytest.approx(f_of_zeta(eta, xi), rel=1e-12)


def test_c0_limit():
    xi = 0.3
    assert ck_coefficients(0.0, xi, 0)[0] == pytest.approx((2 * xi - 1) / (3 * math.sqrt(xi * (1 - xi))))


def _mp_f(zeta, xi):
    """f(zeta) at high precision from the defining transformation."""
    xi = mp.mpf(xi)
    zeta = mp.mpf(zeta)
    lam = mp.sqrt(xi * (1 - xi))

    def signed_eta(t):
        h = -(xi * mp.log(t / xi) + (1 - xi) * mp.log((1 - t) / (1 - xi)))
        return mp.sign(t - xi) * mp.sqrt(2 * h)

    # Newton from the double-precision root; d eta / dt = (t - xi) / (t (1 - t) eta)
    t = mp.mpf(x_from_eta(float(zeta), float(xi)))
    for _ in range(8):
        t -= (signed_eta(t) - zeta) * t * (1 - t) * zeta / (t - xi)
    return zeta * lam / (t - xi)


def _mp_c1(eta, xi):
    """C_1 = (f_1(eta) - f_1(0)) / eta with f_1 = C_0' differentiated numerically."""
    mxi = mp.mpf(xi)
    f1_zero = (1 - mxi + mxi**2) / (12 * mxi * (1 - mxi))

    def c0(z):
        return (_mp_f(z, xi) - 1) / z

    return (mp.diff(c0, mp.mpf(eta)) - f1_zero) / mp.mpf(eta)


def test_c1_against_finite_differences():
    with mp.workdps(60):
        ref = float(_mp_c1(0.1, 0.3))
    assert ck_coefficients(0.1, 0.3, 1)[1] == pytest.approx(ref, abs=1e-8)


@pytest.mark.parametrize("xi", [0.1, 0.3, 0.5, 0.7, 0.9])
def test_c1_on_both_sides_of_switch(xi):
    r = ba._switch_radius(xi, DEFAULT_CONFIG)
    with mp.workdps(60):
        for eta in (0.005, 0.3 * r, 0.9 * r, -0.9 * r, 1.1 * r, -1.5 * r):
            ref = float(_mp_c1(eta, xi))
            assert ck_coefficients(eta, xi, 1)[1] == pytest.approx(ref, abs=1e-11)
            # passing the beta argument must not change the result
            t = x_from_eta(eta, xi)
            assert ck_coefficients(eta, xi, 1, t=t)[1] == pytest.approx(ref, abs=1e-11)


def test_higher_ck_outside_radius_warn():
    with pytest.warns(AccuracyWarning):
        ck_coefficients(1.5, 0.5, 2)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        ck_coefficients(1.5, 0.5, 1)


def test_ck_order_limit():
    with pytest.raises(ValueError):
        ck_coefficients(0.1, 0.5, DEFAULT_CONFIG.taylor_order // 2)


# ---------------------------------------------------------------- F_nu(inf)


def test_f_nu_infinity_limit():
    assert abs(f_nu_infinity(1e7, 1e7) - 1.0) < 1e-7


@pytest.mark.parametrize("xi", [0.2, 0.5, 0.7])
def test_fk_series_against_gamma_star_ratio(xi):
    mp.mp.dps = 40
    fk = fk_coefficients(xi)
    for nu in (200.0, 400.0):
        a, b = xi * nu, (1 - xi) * nu

        def lgs(x):
            x = mp.mpf(x)
            return mp.loggamma(x) - (x - 0.5) * mp.log(x) + x - mp.log(2 * mp.pi) / 2

        exact = mp.exp(lgs(a) + lgs(b) - lgs(nu))
        rem3 = float(exact - sum(mp.mpf(fk[k]) / nu**k for k in range(3)))
        # the third-order remainder is F_3 / nu^3 up to O(nu^-4)
        assert rem3 == pytest.approx(fk[3] / nu**3, rel=5.0 / nu)
    assert f_nu_infinity_series(a, b, 4) == pytest.approx(f_nu_infinity(a, b), rel=1e-10)


def test_fk_series_terms_validation():
    with pytest.raises(ValueError):
        f_nu_infinity_series(10.0, 10.0, 5)


# ---------------------------------------------------------------- I_x(a, b)


def test_symmetric_point_is_half():
    assert inc_beta_asym(0.5, 500.0, 500.0) == pytest.approx(0.5, abs=1e-15)


def test_large_worked_example_parameters():
    v = inc_beta_asym(0.6, 900.05764, 600.94236)
    assert abs(v - 0.51000026659) <= 5e-7
    assert abs(v - inc_beta_ref(0.6, 900.05764, 600.94236)) <= 1e-9


def _max_error(nu, xi_grid, x_grid, cfg=DEFAULT_CONFIG):
    worst = 0.0
    for xi in xi_grid:
        a, b = xi * nu, (1 - xi) * nu
        for x in x_grid:
            worst = max(worst, abs(inc_beta_asym(x, a, b, cfg) - inc_beta_ref(x, a, b)))
    return worst


GRID_XI = [0.1 + 0.05 * i for i in range(17)]
GRID_X = [0.05 + 0.05 * i for i in range(19)]


@pytest.mark.filterwarnings("ignore::binv.errors.AccuracyWarning")
def test_agreement_with_reference_at_nu_1000():
    assert _max_error(1000.0, GRID_XI, GRID_X) <= 1e-6


@pytest.mark.filterwarnings("ignore::binv.errors.AccuracyWarning")
def test_error_shrinks_with_nu():
    assert _max_error(2000.0, GRID_XI, GRID_X) < _max_error(200.0, GRID_XI, GRID_X)


@pytest.mark.filterwarnings("ignore::binv.errors.AccuracyWarning")
def test_more_terms_help():
    cfg3 = AsymptoticConfig(max_ck_terms=3)
    assert _max_error(1000.0, GRID_XI, GRID_X, cfg3) < _max_error(1000.0, GRID_XI, GRID_X)


@settings(max_examples=100)
@given(st.floats(min_value=0.05, max_value=0.95), st.floats(min_value=0.1, max_value=0.9),
       st.floats(min_value=500.0, max_value=1e5))
def test_complement_consistency(x, xi, nu):
    a, b = xi * nu, (1 - xi) * nu
    assert inc_beta_asym(x, a, b) + inc_beta_asym(1.0 - x, b, a) == pytest.approx(1.0, abs=1e-9)


def test_erfc_minus_remainder_orientation():
    # I_x(a,b) = erfc(-eta sqrt(nu/2))/2 - R; the opposite orientation misses by 2R
    x, a, b = 0.55, 300.0, 200.0
    nu, xi = a + b, a / (a + b)
    eta = eta_from_x(x, xi)
    main = 0.5 * math.erfc(-eta * math.sqrt(nu / 2))
    ref = inc_beta_ref(x, a, b)
    value, _ = inc_beta_asym_terms(x, a, b)
    r = main - value
    assert abs(value - ref) < 1e-7
    assert abs((main + r) - ref) > 100 * abs(value - ref)


def test_last_term_reported():
    value, last = inc_beta_asym_terms(0.55, 3000.0, 2000.0)
    assert 0.0 < last < 1e-4


def test_strip_warning():
    with pytest.warns(AccuracyWarning):
        inc_beta_asym(0.001, 1.0, 999.0)


def test_config_validation():
    with pytest.raises(ValueError):
        AsymptoticConfig(max_fk_terms=5)
    with pytest.raises(ValueError):
        AsymptoticConfig(taylor_switch_radius=0.0)
    with pytest.raises(ValueError):
        AsymptoticConfig(newton_tol=-1.0)


def test_log_gamma_star_used_consistently():
    assert f_nu_infinity(30.0, 21.0) == pytest.approx(
        math.exp(log_gamma_star(30.0) + log_gamma_star(21.0) - log_gamma_star(51.0))
    )

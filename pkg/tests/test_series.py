import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from binv import series

N = 12


def _exp_series(n):
    return [1.0 / math.factorial(k) for k in range(n)]


def test_reciprocal_of_one_minus_z():
    assert series.reciprocal([1.0, -1.0], N) == pytest.approx([1.0] * N)


def test_sqrt_squares_back():
    a = [4.0, 1.0, -0.5, 0.25]
    r = series.sqrt(a, N)
    assert series.mul(r, r, N)[:4] == pytest.approx(a, abs=1e-15)
    assert series.mul(r, r, N)[4:] == pytest.approx([0.0] * (N - 4), abs=1e-15)


def test_log_of_exp_is_identity():
    out = series.log(_exp_series(N), N)
    assert out == pytest.approx([0.0, 1.0] + [0.0] * (N - 2), abs=1e-15)


def test_log1p_linear_matches_log():
    assert series.log1p_linear(0.3, N) == pytest.approx(series.log([1.0, 0.3], N), abs=1e-16)


def test_revert_log1p_gives_expm1():
    g = series.revert(series.log1p_linear(1.0, N), N)
    assert g == pytest.approx([0.0] + _exp_series(N)[1:], rel=1e-13)


def test_compose_with_inverse_is_identity():
    a = [0.0, 2.0, -1.0, 0.5, 0.125]
    g = series.revert(a, N)
    assert series.compose(a, g, N) == pytest.approx([0.0, 1.0] + [0.0] * (N - 2), abs=1e-13)


def test_revert_requires_simple_zero():
    with pytest.raises(ValueError):
        series.revert([1.0, 1.0], N)
    with pytest.raises(ValueError):
        series.revert([0.0, 0.0, 1.0], N)


def test_compose_requires_vanishing_inner():
    with pytest.raises(ValueError):
        series.compose([1.0, 1.0], [0.5, 1.0], N)


@given(st.floats(min_value=-0.5, max_value=0.5))
def test_evaluate_exp(z):
    assert series.evaluate(_exp_series(20), z) == pytest.approx(math.exp(z), rel=1e-15)


def test_derivative():
    assert series.derivative([5.0, 1.0, 2.0, 3.0]) == [1.0, 4.0, 9.0]

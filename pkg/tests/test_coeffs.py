import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from commutant_lab.coeffs import ExpPoly, FuncCoeff


def fd2(f, y, h=1e-5):
    return (f(y + h) - f(y - h)) / (2 * h)


def test_polynomial_eval_and_derivative():
    p = ExpPoly.polynomial((1.0, -2.0, 3.0))  # 1 - 2y + 3y^2
    assert p(0.5) == pytest.approx(1 - 1 + 0.75)
    assert p(0.5, order=1) == pytest.approx(-2 + 3.0)
    assert p(0.5, order=2) == pytest.approx(6.0)
    assert p(0.5, order=3) == 0


def test_exponential_derivatives_match_closed_form():
    rate = 0.7 - 1.3j
    f = ExpPoly.exponential(rate, (2.0, 1.0))  # (2 + y) e^{ry}
    y = 0.31
    expected = rate * (2 + y) * np.exp(rate * y) + np.exp(rate * y)
    assert f(y, order=1) == pytest.approx(expected)
    d = f.derivative()
    assert d(y) == pytest.approx(expected)


def test_cosh_sinh_helpers():
    lam = 1.4 + 0.2j
    c = ExpPoly.cosh(lam)
    s = ExpPoly.sinh(lam)
    y = -0.4
    assert c(y) == pytest.approx(np.cosh(lam * y))
    assert s(y) == pytest.approx(np.sinh(lam * y))
    assert c(y, order=1) == pytest.approx(lam * np.sinh(lam * y))
    # degenerate rates
    assert ExpPoly.cosh(0.0, 3.0)(y) == pytest.approx(3.0)
    assert ExpPoly.sinh(0.0)(y) == 0


def test_conjugate_on_real_axis():
    f = ExpPoly.exponential(1j * 2.0, (1.0 + 1j,))
    g = f.conjugate()
    y = 0.37
    assert g(y) == pytest.approx(np.conjugate(f(y)))
    assert g(y, order=1) == pytest.approx(np.conjugate(f(y, order=1)))


def test_exp_shift_multiplies_by_exponential():
    f = ExpPoly.polynomial((1.0, 2.0))
    g = f.exp_shift(0.5j)
    y = np.linspace(-1, 1, 7)
    np.testing.assert_allclose(g(y), f(y) * np.exp(0.5j * y), rtol=1e-14)


def test_taylor_coefficients():
    f = ExpPoly.exponential(2.0)  # e^{2y}
    t = f.taylor(0.0, 5)
    np.testing.assert_allclose(t, [2.0**n / math.factorial(n) for n in range(5)])


@settings(max_examples=25, deadline=None)
@given(
    rate=st.complex_numbers(max_magnitude=2.0, allow_nan=False, allow_infinity=False),
    y=st.floats(-1.0, 1.0),
)
def test_derivative_matches_finite_differences(rate, y):
    f = ExpPoly.exponential(rate, (0.3, -1.0, 0.5)) + ExpPoly.polynomial((1.0, 2.0))
    num = fd2(lambda t: f(t), y)
    assert abs(f(y, order=1) - num) < 1e-7 * (1 + abs(num))


def test_funccoeff_orders_and_algebra():
    f = FuncCoeff((np.sin, np.cos))
    assert f(0.3) == pytest.approx(np.sin(0.3))
    assert f(0.3, order=1) == pytest.approx(np.cos(0.3))
    with pytest.raises(ValueError):
        f(0.3, order=2)
    g = 2.0 * f + ExpPoly.constant(1.0)
    assert g(0.3) == pytest.approx(2 * np.sin(0.3) + 1)
    assert g.derivative()(0.3) == pytest.approx(2 * np.cos(0.3))

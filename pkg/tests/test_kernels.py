import numpy as np
import pytest

from commutant_lab import General, eval_kernel, kernel_derivs, kernel_values, make_general_pair


@pytest.fixture(scope="module")
def wide_lambda_pair():
    # pi <= |lambda| < 2pi branch: denominator zeros at +-5/3 are removable
    return make_general_pair(
        General(lam=1.2j * np.pi, mu=0.9j * np.pi, alpha1=0.0, alpha2=1.0)
    )


def test_kernel_finite_on_interval(wide_lambda_pair):
    z = np.linspace(-2.0, 2.0, 2001)
    z = z[np.abs(z) > 1e-3]
    (vals,) = kernel_values(wide_lambda_pair.kernel, z, orders=(0,))
    assert np.all(np.isfinite(vals))


def test_removable_zero_is_continuous(wide_lambda_pair):
    z0 = 2.0 / 1.2
    limit = eval_kernel(wide_lambda_pair, z0)
    assert np.isfinite(limit.real)
    for dz in (1e-2, 1e-4):
        assert eval_kernel(wide_lambda_pair, z0 + dz) == pytest.approx(limit, rel=2e-2)
    assert eval_kernel(wide_lambda_pair, z0 + 1e-7) == pytest.approx(limit, rel=1e-9)


def test_derivatives_match_finite_differences(analytic_pair, case2_pair):
    h = 1e-6
    for pair, z in ((analytic_pair, 0.7), (case2_pair, 0.45), (case2_pair, -1.2)):
        k0, k1, k2 = kernel_derivs(pair, z)
        fd1 = (eval_kernel(pair, z + h) - eval_kernel(pair, z - h)) / (2 * h)
        fd2 = (
            eval_kernel(pair, z + h) - 2 * eval_kernel(pair, z) + eval_kernel(pair, z - h)
        ) / h**2
        assert k1 == pytest.approx(fd1, rel=1e-8)
        assert k2 == pytest.approx(fd2, rel=1e-3)


def test_derivatives_near_pole_match_laurent(case4_pair):
    # k = 1/z: closed-form derivatives, inside and outside the switch radius
    for z in (5e-4, 0.02):
        k0, k1, k2 = kernel_derivs(case4_pair, z)
        assert k0 == pytest.approx(1 / z, rel=1e-12)
        assert k1 == pytest.approx(-1 / z**2, rel=1e-12)
        assert k2 == pytest.approx(2 / z**3, rel=1e-12)


def test_series_matches_sympy_general():
    sympy = pytest.importorskip("sympy")
    pair = make_general_pair(General(lam=1.0, mu=2.0, alpha1=1.0, alpha2=0.0))
    z = sympy.symbols("z")
    expr = sympy.sinh(2 * z) / (2 * sympy.sinh(z / 2))
    ser = sympy.series(expr, z, 0, 10).removeO()
    for n in range(10):
        expected = complex(ser.coeff(z, n))
        assert pair.kernel.series[n] == pytest.approx(expected, abs=1e-13)


def test_scalar_and_array_evaluation_agree(case2_pair):
    zs = np.array([0.3, -0.7, 1.9])
    (arr,) = kernel_values(case2_pair.kernel, zs, orders=(0,))
    for z, v in zip(zs, arr):
        assert eval_kernel(case2_pair, float(z)) == pytest.approx(complex(v))

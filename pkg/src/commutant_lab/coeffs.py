"""Coefficient functions with exact derivatives.

Every coefficient of the differential operators handled here (and every
numerator/denominator of the classified kernels) is a finite sum of
polynomials multiplied by exponentials,

    f(y) = sum_t P_t(y) * exp(rate_t * y),

which is closed under addition, scalar multiplication, differentiation,
multiplication by an exponential factor and (on the real axis) complex
conjugation.  :class:`ExpPoly` implements that algebra exactly, so all
derivative evaluations are analytic rather than finite differences.

:class:`FuncCoeff` wraps user-supplied callables (value plus explicit
derivatives) for fixtures that fall outside the exponential-polynomial
class, e.g. sqrt(1 - y^2) factors in normality fixtures.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np


class Coefficient:
    """A complex-valued function of a real variable with derivative access.

    Subclasses implement ``__call__(y, order)``.  The generic algebra
    (sums, scalar multiples, conjugation) is provided by small wrapper
    classes so that arbitrary coefficients can be combined.
    """

    def __call__(self, y, order: int = 0):
        raise NotImplementedError

    def derivative(self, order: int = 1) -> "Coefficient":
        return _Shifted(self, order)

    def conjugate(self) -> "Coefficient":
        return _Conjugated(self)

    def __add__(self, other: "Coefficient") -> "Coefficient":
        return _Sum((self, other))

    def __sub__(self, other: "Coefficient") -> "Coefficient":
        return _Sum((self, _Scaled(other, -1.0)))

    def __mul__(self, scalar: complex) -> "Coefficient":
        return _Scaled(self, complex(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> "Coefficient":
        return _Scaled(self, -1.0)


def _polyder(coeffs: tuple[complex, ...], order: int) -> tuple[complex, ...]:
    c = list(coeffs)
    for _ in range(order):
        c = [c[k] * k for k in range(1, len(c))]
    return tuple(c)


def _polyval(coeffs: tuple[complex, ...], y):
    out = np.zeros_like(np.asarray(y, dtype=complex))
    for c in reversed(coeffs):
        out = out * y + c
    return out


def _trim(coeffs: tuple[complex, ...]) -> tuple[complex, ...]:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class ExpPoly(Coefficient):
    """Finite sum of terms P(y) * exp(rate * y), stored as (rate, poly) pairs.

    Polynomials are ascending coefficient tuples; rate 0 holds the plain
    polynomial part.  Terms are kept merged by rate.
    """

    terms: tuple[tuple[complex, tuple[complex, ...]], ...]

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero() -> "ExpPoly":
        return ExpPoly(())

    @staticmethod
    def polynomial(coeffs) -> "ExpPoly":
        c = _trim(tuple(complex(v) for v in coeffs))
        return ExpPoly(((0j, c),)) if c else ExpPoly(())

    @staticmethod
    def constant(value: complex) -> "ExpPoly":
        return ExpPoly.polynomial((value,))

    @staticmethod
    def exponential(rate: complex, coeffs=(1.0,)) -> "ExpPoly":
        c = _trim(tuple(complex(v) for v in coeffs))
        if not c:
            return ExpPoly(())
        if rate == 0:
            return ExpPoly.polynomial(c)
        return ExpPoly(((complex(rate), c),))

    @staticmethod
    def cosh(rate: complex, scale: complex = 1.0) -> "ExpPoly":
        """scale * cosh(rate*y); degenerates to the constant scale at rate 0."""
        if rate == 0:
            return ExpPoly.constant(scale)
        h = complex(scale) / 2.0
        return ExpPoly.exponential(rate, (h,)) + ExpPoly.exponential(-rate, (h,))

    @staticmethod
    def sinh(rate: complex, scale: complex = 1.0) -> "ExpPoly":
        """scale * sinh(rate*y); degenerates to zero at rate 0."""
        if rate == 0:
            return ExpPoly.zero()
        h = complex(scale) / 2.0
        return ExpPoly.exponential(rate, (h,)) + ExpPoly.exponential(-rate, (-h,))

    # -- algebra -------------------------------------------------------

    def __add__(self, other: Coefficient) -> Coefficient:
        if not isinstance(other, ExpPoly):
            return super().__add__(other)
        merged: dict[complex, list[complex]] = {}
        for rate, poly in self.terms + other.terms:
            acc = merged.setdefault(rate, [])
            for k, c in enumerate(poly):
                if k < len(acc):
                    acc[k] += c
                else:
                    acc.append(c)
        out = []
        for rate, poly in merged.items():
            p = _trim(tuple(poly))
            if p:
                out.append((rate, p))
        out.sort(key=lambda t: (t[0].real, t[0].imag))
        return ExpPoly(tuple(out))

    def __mul__(self, scalar: complex) -> Coefficient:
        s = complex(scalar)
        if s == 0:
            return ExpPoly(())
        return ExpPoly(tuple((r, tuple(s * c for c in p)) for r, p in self.terms))

    __rmul__ = __mul__

    def __sub__(self, other: Coefficient) -> Coefficient:
        return self + (other * (-1.0))

    def __neg__(self) -> Coefficient:
        return self * (-1.0)

    def derivative(self, order: int = 1) -> "ExpPoly":
        cur = self
        for _ in range(order):
            out = ExpPoly(())
            for rate, poly in cur.terms:
                dp = _polyder(poly, 1)
                out = out + ExpPoly.exponential(rate, dp)
                if rate != 0:
                    out = out + ExpPoly.exponential(rate, tuple(rate * c for c in poly))
            cur = out
        return cur

    def conjugate(self) -> "ExpPoly":
        # valid pointwise for real arguments only
        return ExpPoly(
            tuple(
                (rate.conjugate(), tuple(c.conjugate() for c in poly))
                for rate, poly in self.terms
            )
        )

    def exp_shift(self, tau: complex) -> "ExpPoly":
        """Multiply by exp(tau*y)."""
        if tau == 0:
            return self
        out = ExpPoly(())
        for rate, poly in self.terms:
            out = out + ExpPoly.exponential(rate + complex(tau), poly)
        return out

    # -- evaluation ----------------------------------------------------

    def __call__(self, y, order: int = 0):
        arr = np.asarray(y, dtype=complex)
        out = np.zeros_like(arr)
        for rate, poly in self.terms:
            acc = np.zeros_like(arr)
            # d^m/dy^m [P e^{ry}] = e^{ry} sum_j C(m,j) r^j P^{(m-j)}
            for j in range(order + 1):
                dp = _polyder(poly, order - j)
                if not dp:
                    continue
                acc = acc + _binom(order, j) * (rate**j) * _polyval(dp, arr)
            if rate != 0:
                acc = acc * np.exp(rate * arr)
            out = out + acc
        if np.isscalar(y):
            return complex(out)
        return out

    def taylor(self, z0: complex, nterms: int) -> tuple[complex, ...]:
        """Taylor coefficients (f(z0), f'(z0), f''(z0)/2!, ...) of length nterms."""
        fact = 1.0
        out = []
        for j in range(nterms):
            if j > 1:
                fact *= j
            out.append(complex(self(complex(z0), order=j)) / fact)
        return tuple(out)

    def is_zero(self) -> bool:
        return not self.terms

    def max_rate(self) -> float:
        return max((abs(r) for r, _ in self.terms), default=0.0)


def _binom(n: int, k: int) -> float:
    out = 1.0
    for i in range(k):
        out = out * (n - i) / (i + 1)
    return out


@dataclass(frozen=True)
class FuncCoeff(Coefficient):
    """Coefficient given by explicit callables for value and derivatives."""

    derivs: tuple[Callable, ...]

    def __call__(self, y, order: int = 0):
        if order >= len(self.derivs):
            raise ValueError(
                f"derivative of order {order} not provided (have {len(self.derivs)})"
            )
        arr = np.asarray(y, dtype=complex)
        out = np.asarray(self.derivs[order](arr), dtype=complex)
        if np.isscalar(y):
            return complex(out)
        return out

    def derivative(self, order: int = 1) -> Coefficient:
        return _Shifted(self, order)


@dataclass(frozen=True)
class _Shifted(Coefficient):
    base: Coefficient
    shift: int

    def __call__(self, y, order: int = 0):
        return self.base(y, order=order + self.shift)

    def derivative(self, order: int = 1) -> Coefficient:
        return _Shifted(self.base, self.shift + order)


@dataclass(frozen=True)
class _Conjugated(Coefficient):
    base: Coefficient

    def __call__(self, y, order: int = 0):
        val = self.base(y, order=order)
        return np.conjugate(val) if not np.isscalar(val) else complex(val).conjugate()

    def conjugate(self) -> Coefficient:
        return self.base


@dataclass(frozen=True)
class _Sum(Coefficient):
    parts: tuple[Coefficient, ...]

    def __call__(self, y, order: int = 0):
        vals = [p(y, order=order) for p in self.parts]
        out = vals[0]
        for v in vals[1:]:
            out = out + v
        return out


@dataclass(frozen=True)
class _Scaled(Coefficient):
    base: Coefficient
    factor: complex

    def __call__(self, y, order: int = 0):
        return self.factor * self.base(y, order=order)

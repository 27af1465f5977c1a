"""Kernel evaluation for the classified convolution kernels.

Every kernel in the classification is a ratio N(z)/D(z) of entire
exponential-polynomial functions whose denominator has a simple zero at
z = 0.  The kernel is analytic at 0 when N(0) = 0 (removable) and has a
simple pole there otherwise.  Admissible parameters leave at most
removable zeros of D elsewhere in [-2, 2] (e.g. z = +-2 for the
cos/sin kernels), where direct evaluation loses digits.

Evaluation strategy:

* away from all zeros of D: direct ratio, with quotient-rule derivatives;
* within the switch radius of z = 0: stored Taylor data (Taylor series of
  z*k for singular kernels, of k itself for regular ones);
* within the switch radius of a removable zero z0: a local Taylor
  expansion of k at z0, precomputed by series division.

The switch radius translates the fixed argument window 1e-3 through the
denominator's fastest rate, matching the accuracy targets of 1e-12 away
from a switch and 1e-10 at it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .coeffs import ExpPoly
from .errors import PoleError

SERIES_TERMS = 16
SWITCH_ARG = 1e-3


def _series_div(num, den, nterms: int) -> tuple[complex, ...]:
    """Taylor coefficients of num/den given Taylor data with den[0] != 0."""
    out = []
    for k in range(nterms):
        s = num[k] if k < len(num) else 0j
        for j in range(1, min(k, len(den) - 1) + 1):
            s -= den[j] * out[k - j]
        out.append(s / den[0])
    return tuple(out)


@dataclass(frozen=True)
class KernelSpec:
    """Evaluatable kernel with singularity metadata and Taylor data at 0.

    ``series`` holds plain Taylor coefficients: of z*k(z) when ``singular``
    (so series[0] is the residue at 0), of k(z) otherwise (so series[n] is
    the n-th derivative over n!).
    """

    numerator: ExpPoly
    denominator: ExpPoly
    singular: bool
    series: tuple[complex, ...]
    trivial: bool
    removable_zeros: tuple[float, ...] = ()
    switch_radius: float = SWITCH_ARG
    local_series: dict = field(default_factory=dict, compare=False, repr=False)

    def residue(self) -> complex:
        if not self.singular:
            return 0j
        return self.series[0]

    def value_at_zero(self) -> complex:
        if self.singular:
            raise PoleError("kernel has a simple pole at z = 0")
        return self.series[0]


def build_kernel(
    numerator: ExpPoly,
    denominator: ExpPoly,
    singular: bool,
    trivial: bool,
) -> KernelSpec:
    """Assemble a KernelSpec from entire numerator/denominator data.

    The denominator must have a simple zero at z = 0.  Removable zeros of
    D elsewhere on [-2, 2] are located from its exponential rates and a
    local expansion of k is prepared at each.
    """
    den_taylor = denominator.taylor(0.0, SERIES_TERMS + 2)
    if abs(den_taylor[0]) > 1e-12 or den_taylor[1] == 0:
        raise ValueError("denominator must vanish to first order at z = 0")
    num_taylor = numerator.taylor(0.0, SERIES_TERMS + 2)
    dtilde = den_taylor[1:]  # Taylor of D(z)/z
    if singular:
        series = _series_div(num_taylor, dtilde, SERIES_TERMS)
    else:
        if abs(num_taylor[0]) > 1e-9 * max(abs(c) for c in num_taylor):
            raise ValueError("regular kernel requires N(0) = 0")
        series = _series_div(num_taylor[1:], dtilde, SERIES_TERMS)

    rate = denominator.max_rate()
    switch = SWITCH_ARG / max(rate, 1.0)

    zeros = []
    local = {}
    for z0 in _real_denominator_zeros(denominator):
        nt = numerator.taylor(z0, SERIES_TERMS + 2)
        dt = denominator.taylor(z0, SERIES_TERMS + 2)
        if abs(nt[0]) > 1e-8 * max(abs(c) for c in nt):
            # non-removable; admissibility screens these out upstream
            continue
        zeros.append(z0)
        local[z0] = _series_div(nt[1:], dt[1:], SERIES_TERMS)

    return KernelSpec(
        numerator=numerator,
        denominator=denominator,
        singular=singular,
        series=series,
        trivial=trivial,
        removable_zeros=tuple(zeros),
        switch_radius=switch,
        local_series=local,
    )


def _real_denominator_zeros(den: ExpPoly) -> list[float]:
    """Real zeros z != 0 of the denominator inside [-2, 2].

    For D built from sinh(rho*z)-type terms the zeros lie at i*pi*k/rho,
    which are real exactly when rho is purely imaginary.
    """
    zeros: set[float] = set()
    for rate, _ in den.terms:
        if rate == 0:
            continue
        if abs(rate.real) > 1e-12 * abs(rate):
            continue
        sigma = abs(rate.imag)
        k = 1
        while True:
            z0 = np.pi * k / sigma
            if z0 > 2.0 + 1e-9:
                break
            for s in (z0, -z0):
                if abs(den(complex(s))) < 1e-9:
                    zeros.add(round(float(s), 12))
            k += 1
    return sorted(zeros)


def _laurent_eval(series, z, order: int):
    """Evaluate d^order/dz^order of (sum series[j] z^j)/z."""
    out = np.zeros_like(z)
    for j, c in enumerate(series):
        p = j - 1  # power of z
        if order == 0:
            out = out + c * z**p
        else:
            f = 1.0
            for i in range(order):
                f *= p - i
            if f != 0.0:
                out = out + c * f * z ** (p - order)
    return out


def _taylor_eval(series, z, order: int):
    coeffs = list(series)
    for _ in range(order):
        coeffs = [coeffs[k] * k for k in range(1, len(coeffs))]
    out = np.zeros_like(z)
    for c in reversed(coeffs):
        out = out * z + c
    return out


def kernel_values(spec: KernelSpec, z, orders: tuple[int, ...] = (0,)):
    """Evaluate k and requested derivative orders at (array of) points z.

    Returns a tuple of arrays matching ``orders``.  Raises PoleError if a
    singular kernel is evaluated at exactly z = 0.
    """
    arr = np.atleast_1d(np.asarray(z, dtype=complex))
    if spec.singular and np.any(arr == 0):
        raise PoleError("singular kernel evaluated at its pole z = 0")

    out = [np.zeros_like(arr) for _ in orders]
    near0 = np.abs(arr) < spec.switch_radius
    handled = near0.copy()
    for i, m in enumerate(orders):
        if np.any(near0):
            if spec.singular:
                out[i][near0] = _laurent_eval(spec.series, arr[near0], m)
            else:
                out[i][near0] = _taylor_eval(spec.series, arr[near0], m)

    for z0 in spec.removable_zeros:
        mask = (np.abs(arr - z0) < spec.switch_radius) & ~handled
        if np.any(mask):
            delta = arr[mask] - z0
            for i, m in enumerate(orders):
                out[i][mask] = _taylor_eval(spec.local_series[z0], delta, m)
            handled |= mask

    rest = ~handled
    if np.any(rest):
        zz = arr[rest]
        need = max(orders)
        nd = [spec.numerator(zz, order=j) for j in range(need + 1)]
        dd = [spec.denominator(zz, order=j) for j in range(need + 1)]
        for i, m in enumerate(orders):
            out[i][rest] = _ratio_derivative(nd, dd, m)

    if np.isscalar(z) or np.asarray(z).ndim == 0:
        return tuple(complex(o[0]) for o in out)
    return tuple(o.reshape(np.shape(z)) for o in out)


def _ratio_derivative(nd, dd, order: int):
    n0, d0 = nd[0], dd[0]
    if order == 0:
        return n0 / d0
    n1, d1 = nd[1], dd[1]
    if order == 1:
        return (n1 * d0 - n0 * d1) / d0**2
    n2, d2 = nd[2], dd[2]
    if order == 2:
        return (n2 * d0**2 - 2 * n1 * d1 * d0 - n0 * d2 * d0 + 2 * n0 * d1**2) / d0**3
    raise ValueError(f"kernel derivatives implemented up to order 2, got {order}")

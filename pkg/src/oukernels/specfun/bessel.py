"""Bessel J, Y (real argument) and modified Bessel K (complex argument).

J and Y delegate to well-tested real-argument routines. K_nu accepts any
complex z off the cut (-infinity, 0]:

  * z real > 0:            direct real evaluation,
  * purely imaginary z:    the J/Y decomposition of K on the imaginary axis,
  * |z| >= ASYM_RADIUS:    the standard exponential asymptotic expansion,
  * moderate |z|, Re z>0:  ascending series (via I_{+-nu}, or the
                           logarithmic form for integer order),
  * Re z < 0:              analytic continuation across the imaginary axis.

Orders are real and modest (nu <= ~6 in this library). Relative error is
~1e-12 or better on the axes and for |z| outside the 8..12 annulus; inside
that annulus the series/asymptotic handover limits complex arguments to
~1e-7 worst case, which downstream modules only touch in spot checks.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import special as _sp

from ..errors import BranchCutError, DomainError

# |z| at which K/I switch from ascending series to asymptotic expansions.
# The ascending series loses ~e^{|z|} to cancellation while the asymptotic
# error is ~e^{-2|z|}; 11 balances the two at ~1e-9 for integer orders
# (half-integer orders are exact on the asymptotic side).
ASYM_RADIUS = 11.0
_SERIES_TERMS = 200


def _nu_value(nu) -> float:
    """Accept a bare float or an object with a .nu attribute."""
    v = getattr(nu, "nu", nu)
    v = float(v)
    if not math.isfinite(v) or v < 0.0:
        raise DomainError(f"order must be finite and >= 0, got {v}")
    return v


def bessel_j(nu, x):
    """Bessel function of the first kind J_nu(x), x > 0, nu >= 0."""
    v = _nu_value(nu)
    xf = float(x)
    if xf <= 0.0:
        raise DomainError(f"bessel_j requires x > 0, got {xf}")
    return float(_sp.jv(v, xf))


def bessel_y(nu, x):
    """Bessel function of the second kind Y_nu(x), x > 0, nu >= 0."""
    v = _nu_value(nu)
    xf = float(x)
    if xf <= 0.0:
        raise DomainError(f"bessel_y requires x > 0, got {xf}")
    return float(_sp.yv(v, xf))


def bessel_j_dx(nu, x):
    """J_nu'(x) via the downward recurrence J_{nu-1} - (nu/x) J_nu."""
    v = _nu_value(nu)
    xf = float(x)
    if xf <= 0.0:
        raise DomainError("bessel_j_dx requires x > 0")
    return float(_sp.jv(v - 1.0, xf) - v / xf * _sp.jv(v, xf))


def bessel_y_dx(nu, x):
    """Y_nu'(x) via the downward recurrence Y_{nu-1} - (nu/x) Y_nu."""
    v = _nu_value(nu)
    xf = float(x)
    if xf <= 0.0:
        raise DomainError("bessel_y_dx requires x > 0")
    return float(_sp.yv(v - 1.0, xf) - v / xf * _sp.yv(v, xf))


def _asym_coeffs(v: float, z: complex, nterms: int = 30):
    """Partial sums of sum_k a_k(v)/z^k, truncated at the smallest term."""
    acc = 1.0 + 0.0j
    term = 1.0 + 0.0j
    prev = math.inf
    for k in range(1, nterms):
        term = term * (4.0 * v * v - (2.0 * k - 1.0) ** 2) / (8.0 * k * z)
        mag = abs(term)
        if mag >= prev or mag < 1e-18:
            if mag < 1e-18:
                acc += term
            break
        acc += term
        prev = mag
    return acc


def _k_asymptotic(v: float, z: complex) -> complex:
    # K_nu(z) ~ sqrt(pi/2z) e^{-z} sum_k a_k(nu)/z^k
    return complex(np.sqrt(math.pi / (2.0 * z)) * np.exp(-z) * _asym_coeffs(v, z))


def _i_asymptotic(v: float, z: complex) -> complex:
    # I_nu(z) ~ [e^z sum (-1)^k a_k/z^k + e^{+-(nu+1/2) pi i} e^{-z}
    #            sum a_k/z^k] / sqrt(2 pi z),  Re z >= 0
    s = 1.0 if z.imag >= 0.0 else -1.0
    t1 = np.exp(z) * _asym_coeffs(v, -z)
    t2 = np.exp(s * 1j * math.pi * (v + 0.5)) * np.exp(-z) * _asym_coeffs(v, z)
    return complex((t1 + t2) / np.sqrt(2.0 * math.pi * z))


def _i_series(v: float, z: complex) -> complex:
    half = z / 2.0
    term = np.exp(v * np.log(half) - _sp.loggamma(complex(v + 1.0)))
    acc = term
    zz = half * half
    for k in range(1, _SERIES_TERMS):
        term = term * zz / (k * (v + k))
        acc += term
        if abs(term) < 1e-18 * max(abs(acc), 1e-300):
            return complex(acc)
    return complex(acc)


def bessel_i(nu, z):
    """Modified Bessel I_nu(z) for complex z with Re z >= 0."""
    v = _nu_value(nu)
    zc = complex(z)
    if zc == 0:
        return complex(1.0 if v == 0.0 else 0.0)
    if abs(zc) >= ASYM_RADIUS:
        return _i_asymptotic(v, zc)
    return _i_series(v, zc)


def _k_series_noninteger(v: float, z: complex) -> complex:
    return complex(
        math.pi / (2.0 * math.sin(math.pi * v)) * (_i_series(-v, z) - _i_series(v, z))
    )


def _k_series_integer(n: int, z: complex) -> complex:
    # ascending series with logarithmic term (principal branch of log):
    # K_n = (1/2)(z/2)^{-n} sum_{k<n} ((n-k-1)!/k!)(-z^2/4)^k
    #       + (-1)^{n+1} log(z/2) I_n(z)
    #       + (-1)^n (1/2)(z/2)^n sum_k [psi(k+1)+psi(n+k+1)](z^2/4)^k/(k!(n+k)!)
    half = z / 2.0
    lg = np.log(half)
    fin = 0.0 + 0.0j
    for k in range(n):
        c = math.factorial(n - k - 1) / math.factorial(k)
        fin += 0.5 * c * (-1.0) ** k * np.exp((2.0 * k - n) * lg)
    s = 0.0 + 0.0j
    term = np.exp(n * lg - _sp.loggamma(n + 1.0))
    for k in range(_SERIES_TERMS):
        psi_sum = _sp.digamma(k + 1.0) + _sp.digamma(n + k + 1.0)
        s += term * (0.5 * psi_sum - lg)
        term = term * (half * half) / ((k + 1.0) * (n + k + 1.0))
        if abs(term) < 1e-18 * max(abs(s), 1e-300) and k > 2:
            break
    return complex(fin + (-1.0) ** n * s)


def bessel_k(nu, z):
    """Modified Bessel K_nu(z) on the cut plane |arg z| < pi.

    Raises BranchCutError on (-infinity, 0) and DomainError at z=0.
    """
    v = _nu_value(nu)
    zc = complex(z)
    if zc == 0:
        raise DomainError("bessel_k is singular at z=0")
    if zc.imag == 0.0:
        if zc.real < 0.0:
            raise BranchCutError("bessel_k branch cut on the negative real axis")
        return complex(_sp.kv(v, zc.real))
    if zc.real == 0.0:
        # K_nu(ix) = -(i pi / 2) e^{-i nu pi / 2} (J_nu(x) - i Y_nu(x)), x > 0
        x = zc.imag
        if x > 0.0:
            jj, yy = _sp.jv(v, x), _sp.yv(v, x)
            return complex(
                -0.5j * math.pi * np.exp(-0.5j * math.pi * v) * (jj - 1j * yy)
            )
        return complex(np.conjugate(bessel_k(v, np.conjugate(zc))))
    if zc.real < 0.0:
        # continuation across the imaginary axis:
        # K(z e^{+- i pi}) = e^{-+ i nu pi} K(z) -+ i pi I(z)
        zeta = -zc  # Re > 0
        if zc.imag > 0.0:
            return complex(
                np.exp(-1j * math.pi * v) * bessel_k(v, zeta)
                - 1j * math.pi * bessel_i(v, zeta)
            )
        return complex(
            np.exp(1j * math.pi * v) * bessel_k(v, zeta)
            + 1j * math.pi * bessel_i(v, zeta)
        )
    if abs(zc) >= ASYM_RADIUS:
        return _k_asymptotic(v, zc)
    if abs(v - round(v)) < 1e-9:
        return _k_series_integer(int(round(v)), zc)
    return _k_series_noninteger(v, zc)

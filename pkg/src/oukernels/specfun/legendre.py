"""Legendre functions of the first and second kind for complex degree/order.

Everything is routed through hypergeometric representations:

  P_a^b(x) = ((1+x)/|1-x|)^{b/2} / Gamma(1-b) * 2F1(-a, a+1; 1-b; (1-x)/2)

for x > -1, with the x > 1 branch rewritten (Pfaff) so the series argument
is (x-1)/(x+1) in [0, 1); Q_a^b uses the 1/x^2 representation on x > 1.

Degree and order may both be complex and may be numpy arrays (broadcast);
this is what the Bromwich-line kernels rely on. Stable for degrees with
imaginary part up to several hundred (no cancellation growth, see hyper).
"""

from __future__ import annotations

import math

import numpy as np
from scipy import special as _sp

from ..errors import DivergenceError, DomainError, NotSupportedError, PoleError
from .gamma import is_near_pole
from .hyper import hyp2f1_any, hyp2f1_series


def _rgamma(z):
    """1/Gamma(z), entire; complex arrays accepted."""
    return _sp.rgamma(np.asarray(z, dtype=complex))


def legendre_p(a, b, x):
    """Legendre function of the first kind P_a^b(x), x > -1.

    a (degree) and b (order) may be complex scalars or arrays.
    Raises PoleError when 1-b is a nonpositive integer and DomainError
    for x <= -1. At x=1 the limit is 1 for b=0 and 0 for Re b < 0.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    xf = float(x)
    if xf <= -1.0:
        raise DomainError(f"legendre_p requires x > -1, got {xf}")
    scalar = a.ndim == 0 and b.ndim == 0
    if np.any(_nonpos_int(1.0 - b)):
        raise PoleError("legendre_p order with 1-b at a nonpositive integer")

    if xf == 1.0:
        res = np.where(
            np.abs(b) == 0.0,
            1.0 + 0.0j,
            np.where(b.real < 0.0, 0.0 + 0.0j, np.nan + 0.0j),
        )
        res = np.broadcast_to(res, np.broadcast_shapes(a.shape, b.shape)).copy()
        if np.any(np.isnan(res.real)):
            raise DivergenceError("legendre_p diverges at x=1 for Re b > 0")
        return complex(res) if scalar else res

    if xf > 1.0:
        u = (xf - 1.0) / (xf + 1.0)
        pw = np.exp(
            0.5 * b * math.log((xf + 1.0) / (xf - 1.0))
            + a * math.log((1.0 + xf) / 2.0)
        )
        f = hyp2f1_series(-a, -a - b, 1.0 - b, u)
        out = _rgamma(1.0 - b) * pw * f
    else:
        w = (1.0 - xf) / 2.0
        pw = np.exp(0.5 * b * math.log((1.0 + xf) / (1.0 - xf)))
        f = hyp2f1_any(-a, a + 1.0, 1.0 - b, w)
        out = _rgamma(1.0 - b) * pw * f
    return complex(out) if scalar and np.ndim(out) == 0 else out


def legendre_p_dx(a, b, x):
    """d/dx P_a^b(x) on -1 < x < 1 (analytic, via the 2F1 derivative)."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    xf = float(x)
    if not -1.0 < xf < 1.0:
        raise NotSupportedError("legendre_p_dx implemented on (-1, 1) only")
    w = (1.0 - xf) / 2.0
    R = (1.0 + xf) / (1.0 - xf)
    pw = R ** (0.5 * b)
    f = hyp2f1_any(-a, a + 1.0, 1.0 - b, w)
    fp = (-a) * (a + 1.0) / (1.0 - b) * hyp2f1_any(1.0 - a, a + 2.0, 2.0 - b, w)
    dR = 2.0 / (1.0 - xf) ** 2
    out = _rgamma(1.0 - b) * (
        0.5 * b * R ** (0.5 * b - 1.0) * dR * f + pw * fp * (-0.5)
    )
    return complex(out) if np.ndim(out) == 0 else out


def legendre_q(a, b, x):
    """Legendre function of the second kind Q_a^b(x), x > 1.

    Unbounded as x -> 1+ (logarithmically for the orders used here).
    """
    a = complex(a)
    b = complex(b)
    xf = float(x)
    if xf <= 1.0:
        raise DomainError(f"legendre_q requires x > 1, got {xf}")
    if is_near_pole(a + 1.5):
        raise PoleError("legendre_q with a+3/2 at a nonpositive integer")
    lg = _sp.loggamma
    pref = (
        np.exp(1j * math.pi * b)
        * math.sqrt(math.pi)
        * np.exp(lg(a + b + 1.0) - lg(a + 1.5) - (a + 1.0) * math.log(2.0))
        * (xf * xf - 1.0) ** (0.5 * b)
        * xf ** (-a - b - 1.0)
    )
    f = hyp2f1_any(0.5 * (a + b) + 1.0, 0.5 * (a + b + 1.0), a + 1.5, 1.0 / xf**2)
    return complex(pref * f)


def _nonpos_int(v, tol=1e-12):
    v = np.asarray(v, dtype=complex)
    k = np.round(v.real)
    return (k <= 0) & (np.hypot(v.real - k, v.imag) < tol)

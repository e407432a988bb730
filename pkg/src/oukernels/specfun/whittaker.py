"""Whittaker M function with complex second parameter.

M(k, mu, x) = e^{-x/2} x^{mu+1/2} 1F1(mu - k + 1/2; 1 + 2 mu; x), x > 0.

mu may be a complex array (contour use); k is real. The confluent series
is used up to hyper.HYP1F1_ASYMPTOTIC_X and the large-x expansion beyond,
which covers radii lambda*r^2 well past any sensible drift strength.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import DomainError, PoleError
from .hyper import hyp1f1, hyp1f1_deriv
from .legendre import _nonpos_int


def whittaker_m(k, mu, x):
    """Whittaker M(k, mu, x) for real k, complex (array) mu, x > 0."""
    mu = np.asarray(mu, dtype=complex)
    xf = float(x)
    if xf <= 0.0:
        raise DomainError(f"whittaker_m requires x > 0, got {xf}")
    if np.any(_nonpos_int(1.0 + 2.0 * mu)):
        raise PoleError("whittaker_m with 1+2mu at a nonpositive integer")
    f = hyp1f1(mu - k + 0.5, 1.0 + 2.0 * mu, xf)
    out = np.exp(-0.5 * xf + (mu + 0.5) * math.log(xf)) * f
    return complex(out) if np.ndim(out) == 0 else out


def whittaker_m_dx(k, mu, x):
    """d/dx M(k, mu, x) (analytic product rule, no finite differences)."""
    mu = np.asarray(mu, dtype=complex)
    xf = float(x)
    if xf <= 0.0:
        raise DomainError("whittaker_m_dx requires x > 0")
    a = mu - k + 0.5
    b = 1.0 + 2.0 * mu
    f = hyp1f1(a, b, xf)
    fp = hyp1f1_deriv(a, b, xf)
    pw = np.exp(-0.5 * xf + (mu + 0.5) * math.log(xf))
    out = pw * ((-0.5 + (mu + 0.5) / xf) * f + fp)
    return complex(out) if np.ndim(out) == 0 else out


def whittaker_m_dxx(k, mu, x):
    """d^2/dx^2 M(k, mu, x), analytic (for ODE residual checks)."""
    mu = np.asarray(mu, dtype=complex)
    xf = float(x)
    if xf <= 0.0:
        raise DomainError("whittaker_m_dxx requires x > 0")
    a = mu - k + 0.5
    b = 1.0 + 2.0 * mu
    f = hyp1f1(a, b, xf)
    fp = hyp1f1_deriv(a, b, xf)
    fpp = a * (a + 1.0) / (b * (b + 1.0)) * hyp1f1(a + 2.0, b + 2.0, xf)
    g = -0.5 + (mu + 0.5) / xf
    gp = -(mu + 0.5) / (xf * xf)
    pw = np.exp(-0.5 * xf + (mu + 0.5) * math.log(xf))
    out = pw * ((g * g + gp) * f + 2.0 * g * fp + fpp)
    return complex(out) if np.ndim(out) == 0 else out


def whittaker_m_ratio(k, mu, x_num, x_den):
    """M(k, mu, x_num) / M(k, mu, x_den), stable for large arguments.

    Works in logarithms so the e^{x/2} x^{mu+1/2} factors cancel before
    exponentiation; mu may be an array.
    """
    mu = np.asarray(mu, dtype=complex)
    xn, xd = float(x_num), float(x_den)
    if xn <= 0.0 or xd <= 0.0:
        raise DomainError("whittaker_m_ratio requires positive arguments")
    a = mu - k + 0.5
    b = 1.0 + 2.0 * mu
    fn = hyp1f1(a, b, xn)
    fd = hyp1f1(a, b, xd)
    lead = -0.5 * (xn - xd) + (mu + 0.5) * math.log(xn / xd)
    out = np.exp(lead) * fn / fd
    return complex(out) if np.ndim(out) == 0 else out

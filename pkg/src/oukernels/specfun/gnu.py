"""The Bessel cross-product ratio g_nu and its continuous extension.

g_nu(x, t) = [J_nu(t) Y_nu(t x) - J_nu(t x) Y_nu(t)]
             / (t^{2 nu} (x - 1) (J_nu(t)^2 + Y_nu(t)^2))

on (1, infinity) x (0, infinity), extended continuously to the closed
quadrant [1, infinity) x [0, infinity):

  t -> 0:  pi (x^nu - x^{-nu}) / (nu 2^{2 nu} Gamma(nu)^2 (x - 1)),
           i.e. pi * sum_{k=0}^{2 nu - 1} x^k / (2^{2 nu} Gamma(nu)
           Gamma(nu+1) x^nu) in geometric-sum form,
  x -> 1:  2 / (pi t^{2 nu} (J_nu(t)^2 + Y_nu(t)^2)).

The half-space integrands are always evaluated through this extension so
the 0/0 corners never reach the quadrature engine.
"""

from __future__ import annotations

import math

from scipy import special as _sp

from ..errors import DomainError
from .bessel import _nu_value

# Below these offsets the limit formulas are used; their truncation error
# is O(t^2) resp. O(x-1), far below the switch thresholds' magnitude.
T_SWITCH = 1e-7
X_SWITCH = 1e-9


def gnu_limit_t0(nu, x) -> float:
    """Limit of g_nu(x, t) as t -> 0+ for x >= 1."""
    v = _nu_value(nu)
    if v <= 0.5:
        raise DomainError("g_nu requires nu > 1/2")
    xf = float(x)
    if xf < 1.0:
        raise DomainError("g_nu requires x >= 1")
    g2 = math.gamma(v) ** 2
    if xf == 1.0:
        return math.pi / (2.0 ** (2.0 * v - 1.0) * g2)
    # (x^nu - x^{-nu})/(x-1) without cancellation near x=1
    lnx = math.log(xf)
    ratio = 2.0 * math.sinh(v * lnx) / (xf - 1.0)
    return math.pi * ratio / (v * 2.0 ** (2.0 * v) * g2)


def gnu_limit_x1(nu, t) -> float:
    """Limit of g_nu(x, t) as x -> 1+ for t > 0."""
    v = _nu_value(nu)
    if v <= 0.5:
        raise DomainError("g_nu requires nu > 1/2")
    tf = float(t)
    if tf <= 0.0:
        return gnu_limit_t0(v, 1.0)
    jj = _sp.jv(v, tf)
    yy = _sp.yv(v, tf)
    return 2.0 / (math.pi * tf ** (2.0 * v) * (jj * jj + yy * yy))


def g_nu(nu, x, t) -> float:
    """Continuous extension of g_nu on [1, infinity) x [0, infinity)."""
    v = _nu_value(nu)
    if v <= 0.5:
        raise DomainError("g_nu requires nu > 1/2")
    xf = float(x)
    tf = float(t)
    if xf < 1.0 or tf < 0.0:
        raise DomainError(f"g_nu domain is [1,inf)x[0,inf), got ({xf}, {tf})")
    if tf <= T_SWITCH:
        return gnu_limit_t0(v, xf)
    if xf - 1.0 <= X_SWITCH:
        return gnu_limit_x1(v, tf)
    jt = _sp.jv(v, tf)
    yt = _sp.yv(v, tf)
    jtx = _sp.jv(v, tf * xf)
    ytx = _sp.yv(v, tf * xf)
    num = jt * ytx - jtx * yt
    den = tf ** (2.0 * v) * (xf - 1.0) * (jt * jt + yt * yt)
    return num / den


def bracket_ratio(nu, x, t) -> float:
    """[J_nu(t)Y_nu(tx) - J_nu(tx)Y_nu(t)] / (J_nu^2(t) + Y_nu^2(t)).

    Evaluated through g_nu's extension; vanishes like t^{2 nu} at t=0 and
    like (x-1) at the boundary. This is the numerator of every half-space
    integrand.
    """
    v = _nu_value(nu)
    xf = float(x)
    tf = float(t)
    if tf == 0.0 or xf == 1.0:
        return 0.0
    return g_nu(v, xf, tf) * tf ** (2.0 * v) * (xf - 1.0)

"""Gamma function for real and complex argument, with explicit pole guards."""

from __future__ import annotations

import math

from scipy import special as _sp

from ..errors import PoleError

# Absolute distance to a nonpositive integer below which we refuse to evaluate.
POLE_TOL = 1e-12


def is_near_pole(z, tol: float = POLE_TOL) -> bool:
    """True when z is within tol of a nonpositive integer (a Gamma pole)."""
    z = complex(z)
    k = round(z.real)
    if k > 0:
        return False
    return math.hypot(z.real - k, z.imag) < tol


def gamma_fn(z):
    """Gamma function of a complex (or real) argument.

    Raises PoleError when z is within POLE_TOL of a nonpositive integer.
    Relative accuracy is ~1e-14 away from poles; negative real parts go
    through the reflection formula of the backing implementation.
    """
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise PoleError(f"gamma_fn requires a finite argument, got {z}")
    if is_near_pole(z):
        raise PoleError(f"gamma_fn pole at or near z = {z}")
    out = complex(_sp.gamma(z))
    if z.imag == 0.0:
        return complex(out.real, 0.0)
    return out


def loggamma(z):
    """Principal branch of log Gamma; accepts complex scalars or arrays."""
    return _sp.loggamma(z)


def digamma(z):
    """Digamma (psi) function; accepts complex scalars or arrays."""
    return _sp.digamma(z)

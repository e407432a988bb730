"""Special-function kernel shared by the half-space and ball modules."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import DomainError
from .bessel import (
    ASYM_RADIUS,
    bessel_i,
    bessel_j,
    bessel_j_dx,
    bessel_k,
    bessel_y,
    bessel_y_dx,
)
from .gamma import POLE_TOL, digamma, gamma_fn, is_near_pole, loggamma
from .gnu import bracket_ratio, g_nu, gnu_limit_t0, gnu_limit_x1
from .hyper import (
    HYP1F1_ASYMPTOTIC_X,
    NEAR_ONE_CROSSOVER,
    hyp1f1,
    hyp1f1_deriv,
    hyp2f1,
    hyp2f1_any,
    hyp2f1_deriv,
    hyp2f1_series,
)
from .legendre import legendre_p, legendre_p_dx, legendre_q
from .whittaker import whittaker_m, whittaker_m_dx, whittaker_m_dxx, whittaker_m_ratio


@dataclass(frozen=True)
class Order:
    """Bessel/Legendre order with the two dimension conventions kept apart.

    The half-space formulas run on nu = (n-1)/2 while the ball formulas run
    on nu = n/2 - 1; constructing through the named factories makes it
    impossible to hand one module the other's convention.
    """

    nu: float

    def __post_init__(self):
        if not math.isfinite(self.nu) or self.nu < 0.0:
            raise DomainError(f"order must be finite and >= 0, got {self.nu}")

    @classmethod
    def for_halfspace(cls, n: int) -> "Order":
        """nu = (n-1)/2 for the half-space kernel in dimension n."""
        if n < 3:
            raise DomainError(f"half-space kernels require n >= 3, got {n}")
        return cls((n - 1) / 2.0)

    @classmethod
    def for_ball(cls, n: int) -> "Order":
        """nu = n/2 - 1 for the ball kernels in dimension n."""
        if n < 3:
            raise DomainError(f"ball kernels require n >= 3, got {n}")
        return cls(n / 2.0 - 1.0)


def validate_complex(z) -> complex:
    """Reject NaN/infinite components at construction time."""
    zc = complex(z)
    if not (math.isfinite(zc.real) and math.isfinite(zc.imag)):
        raise DomainError(f"complex value must have finite parts, got {zc}")
    return zc


__all__ = [
    "ASYM_RADIUS",
    "HYP1F1_ASYMPTOTIC_X",
    "NEAR_ONE_CROSSOVER",
    "POLE_TOL",
    "Order",
    "bessel_i",
    "bessel_j",
    "bessel_j_dx",
    "bessel_k",
    "bessel_y",
    "bessel_y_dx",
    "bracket_ratio",
    "digamma",
    "g_nu",
    "gamma_fn",
    "gnu_limit_t0",
    "gnu_limit_x1",
    "hyp1f1",
    "hyp1f1_deriv",
    "hyp2f1",
    "hyp2f1_any",
    "hyp2f1_deriv",
    "hyp2f1_series",
    "is_near_pole",
    "legendre_p",
    "legendre_p_dx",
    "legendre_q",
    "loggamma",
    "validate_complex",
    "whittaker_m",
    "whittaker_m_dx",
    "whittaker_m_dxx",
    "whittaker_m_ratio",
]

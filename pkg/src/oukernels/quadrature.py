"""Adaptive quadrature policy shared by the real-integral kernels."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from scipy import integrate as _integrate

from .errors import QuadratureError


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and truncation policy for the real-line integrals.

    tail_cutoff is the integrand-magnitude level (relative to its scale)
    at which exponentially damped tails are truncated.
    """

    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_subdivisions: int = 200
    tail_cutoff: float = 1e-12

    def __post_init__(self):
        if self.rel_tol < 1e-12:
            raise ValueError("rel_tol must be >= 1e-12")
        if self.abs_tol <= 0.0 or self.tail_cutoff <= 0.0:
            raise ValueError("abs_tol and tail_cutoff must be positive")
        if self.max_subdivisions < 10:
            raise ValueError("max_subdivisions must be >= 10")


DEFAULT_QUAD = QuadratureSpec()


def integrate(f, a, b, spec: QuadratureSpec = DEFAULT_QUAD, points=None) -> float:
    """Adaptive quadrature of f on [a, b] honoring a QuadratureSpec.

    Raises QuadratureError when the requested tolerance is unreachable
    within spec.max_subdivisions.
    """
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", _integrate.IntegrationWarning)
        val, err = _integrate.quad(
            f,
            a,
            b,
            epsabs=spec.abs_tol,
            epsrel=spec.rel_tol,
            limit=spec.max_subdivisions,
            points=points,
        )
    # QUADPACK reports its final error bound; accept a modest slack over
    # the requested tolerances before declaring failure.
    if err > max(100.0 * spec.abs_tol, 100.0 * spec.rel_tol * abs(val)):
        raise QuadratureError(
            f"quadrature on [{a}, {b}] stalled: value={val:.6g}, error={err:.3g}"
        )
    return float(val)

"""Bromwich-line quadrature shared by the two ball kernels.

The inversion integrals run along a vertical line Re z = c < 0 whose
integrands decay like exp(-kappa sqrt(|Im z|)). A uniform trapezoid rule
is spectrally accurate here, but its error scales like exp(-2 pi d / h)
where d is the distance from the line to the nearest pole (the integrands
have one at z = 0, so d = |c|); node spacing must resolve that scale.
Conjugate symmetry halves the work: only the upper half-line is evaluated
and the real part doubled.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ContourError, DomainError

# Truncation-tail and imaginary-residual acceptance thresholds.
TAIL_RTOL = 1e-6
IMAG_RTOL = 1e-8


@dataclass(frozen=True)
class ContourSpec:
    """Bromwich line placement and trapezoid resolution.

    c is the (negative) abscissa; None selects the default -(n-2)^2/16.
    `nodes` counts quadrature points across the full truncated line
    [c - i*height, c + i*height] and must be odd so z = c is a node.
    """

    c: float | None = None
    height: float = 200.0
    nodes: int = 4001

    def __post_init__(self):
        if self.c is not None and not self.c < 0.0:
            raise DomainError("contour abscissa must be negative")
        if self.height <= 0.0:
            raise DomainError("contour height must be positive")
        if self.nodes < 5 or self.nodes % 2 == 0:
            raise DomainError("nodes must be an odd integer >= 5")

    def resolve_c(self, n: int) -> float:
        return self.c if self.c is not None else -((n - 2.0) ** 2) / 16.0

    def upper_grid(self, n: int):
        """(z nodes on the upper half-line incl. the real axis, spacing)."""
        half = (self.nodes - 1) // 2
        h = self.height / half
        ys = np.arange(half + 1) * h
        return self.resolve_c(n) + 1j * ys, h


def default_spec_for(n: int) -> ContourSpec:
    """Spacing fine enough for the z=0 pole at distance (n-2)^2/16 and a
    height whose exp(-kappa sqrt(y)) tail clears the residual checks."""
    d = (n - 2.0) ** 2 / 16.0
    h = min(0.05, d / 3.0)
    height = 500.0
    half = int(math.ceil(height / h))
    return ContourSpec(c=None, height=height, nodes=2 * half + 1)


def bromwich_real(f, n: int, spec: ContourSpec, tail_rtol: float = TAIL_RTOL) -> float:
    """(1/2 pi i) Int_{c-iH}^{c+iH} f(z) dz for conjugate-symmetric f.

    f must accept a complex numpy array. Raises ContourError when the
    estimated truncation tail exceeds tail_rtol relative to the result.
    """
    zs, h = spec.upper_grid(n)
    vals = np.asarray(f(zs), dtype=complex)
    re = vals.real
    total = h * (0.5 * re[0] + re[1:-1].sum() + 0.5 * re[-1]) / math.pi
    _check_tail(vals, zs, h, total, tail_rtol)
    return float(total)


def bromwich_full(
    f,
    n: int,
    spec: ContourSpec,
    tail_rtol: float = TAIL_RTOL,
    imag_rtol: float = IMAG_RTOL,
) -> complex:
    """Full-line evaluation without the symmetry shortcut.

    Used by validation tests to confirm the assembled integral is real;
    raises ContourError when the imaginary residual exceeds imag_rtol.
    """
    zs, h = spec.upper_grid(n)
    upper = np.asarray(f(zs), dtype=complex)
    lower = np.asarray(f(np.conjugate(zs[1:])), dtype=complex)
    w_up = np.ones(len(zs))
    w_up[-1] = 0.5
    w_lo = np.ones(len(zs) - 1)
    w_lo[-1] = 0.5
    total = h * (np.sum(upper * w_up) + np.sum(lower * w_lo)) / (2.0 * math.pi)
    if abs(total.imag) > imag_rtol * max(abs(total.real), 1e-300):
        raise ContourError(
            f"imaginary residual {total.imag:.3g} vs real part {total.real:.3g}"
        )
    _check_tail(upper, zs, h, total.real, tail_rtol)
    return complex(total)


def _check_tail(vals, zs, h, total, tail_rtol):
    """Extrapolate the exp(-kappa sqrt(y)) tail beyond the truncation."""
    mag_end = abs(vals[-1])
    if mag_end == 0.0:
        return
    k = len(vals) - 1
    j = max(1, k - max(2, k // 20))
    mag_j = abs(vals[j])
    ye, yj = zs[-1].imag, zs[j].imag
    if mag_j <= mag_end or ye <= yj:
        raise ContourError("contour integrand is not decaying at the truncation height")
    kappa = (math.log(mag_j) - math.log(mag_end)) / (math.sqrt(ye) - math.sqrt(yj))
    # Int_H^inf |f(H)| e^{-kappa (sqrt(y) - sqrt(H))} dy
    tail = mag_end * 2.0 * (math.sqrt(ye) * kappa + 1.0) / (kappa * kappa) / math.pi
    if tail > tail_rtol * max(abs(total), 1e-300) + 1e-300:
        raise ContourError(
            f"estimated truncation tail {tail:.3g} exceeds tolerance for "
            f"result {total:.6g}; increase the contour height"
        )


def shift_for_pole_safety(
    c: float, min_distance: float, threshold: float = 1e-8, step: float = 1e-3
) -> float:
    """Move the abscissa left when a scan found a singularity too close."""
    if min_distance >= threshold:
        return c
    warnings.warn(
        f"contour node within {min_distance:.2e} of a Gamma pole; "
        f"shifting abscissa by -{step}",
        RuntimeWarning,
        stacklevel=2,
    )
    return c - step

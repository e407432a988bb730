"""Poisson kernel of a ball for the drifted generator (1/2) Laplacian
+ lambda x . grad, lambda > 0.

Shares the contour machinery of the hyperbolic ball; only the radial
Laplace-transform factor changes, to a ratio of Whittaker M functions

  M(k, mu(w), lambda |x|^2) / M(k, mu(w), lambda r^2),
  mu(w) = sqrt((n-2)^2 + 8 w)/4.

Two normalization conventions are exposed (`convention` argument):

  * "derivation" (default): prefactor exp(lambda (r^2-|x|^2)/2) and
    Whittaker index k = -n/4. This is the chain consistent with the
    Girsanov weight exp(-(1/2) int (lambda^2 |W|^2 + n lambda) ds) whose
    Ito derivation is unambiguous; it yields total mass one and matches
    the Monte Carlo oracle and the zero-drift ball kernel as lambda -> 0.
  * "displayed": hyperbolic-style prefactor ((1-|x|^2)/(1-r^2))^{(n-2)/2}
    (with the commonly quoted n-denominator constant) and k = -n/2. Kept
    for side-by-side comparison reports; it does not integrate to one.

The comparison is arbitrated empirically by `convention_report` /
the mc-compare CLI command, never assumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ball_hyperbolic import BallContourEvaluator, coef_a_neg, sphere_mass
from .contour import ContourSpec, default_spec_for
from .errors import DomainError
from .quadrature import QuadratureSpec
from .specfun import validate_complex
from .specfun.whittaker import whittaker_m_ratio

CONVENTIONS = ("derivation", "displayed")


@dataclass(frozen=True)
class OUBallQuery:
    """Evaluation point for the drifted-ball kernel.

    n >= 3, drift strength lam > 0, ball radius r > 0 (unconstrained),
    0 < x_norm < r, angle phi in [0, pi].
    """

    n: int
    lam: float
    r: float
    x_norm: float
    phi: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 3:
            raise DomainError(f"dimension must be an integer >= 3, got {self.n}")
        if not self.lam > 0.0:
            raise DomainError(f"drift strength must be positive, got {self.lam}")
        if not self.r > 0.0:
            raise DomainError(f"radius must be positive, got {self.r}")
        if not 0.0 < self.x_norm < self.r:
            raise DomainError(
                f"x_norm must lie in (0, r), got {self.x_norm} with r={self.r}"
            )
        if not 0.0 <= self.phi <= math.pi:
            raise DomainError(f"phi must lie in [0, pi], got {self.phi}")


def whittaker_index(n: int, tau_coeff: float) -> float:
    """Index k of the Whittaker factor for time-discount coefficient
    tau_coeff * lambda in the exit functional; k = -tau_coeff/2."""
    return -0.5 * tau_coeff


def laplace_mu_ou(q: OUBallQuery, w, tau_coeff: float | None = None) -> complex:
    """Laplace transform (in the radial clock) of the drifted exit measure.

    (r/y)^{n/2} M(k, mu(w), lambda y^2) / M(k, mu(w), lambda r^2) with
    y = x_norm and mu(w) = sqrt((n-2)^2+8w)/4, holomorphic on
    Re w > -(n-2)^2/8.

    tau_coeff selects the exponential time-discount coefficient of the
    underlying functional E[exp(-lambda^2/2 int R^2 - tau_coeff*lambda*tau
    - w*clock)]: the harmonic-measure chain uses n/2 (default, k=-n/4);
    tau_coeff=n reproduces the frequently written k=-n/2 variant.
    """
    wc = validate_complex(w)
    n = q.n
    if wc.real <= -((n - 2.0) ** 2) / 8.0:
        raise DomainError(
            f"laplace_mu_ou requires Re w > {-((n - 2.0) ** 2) / 8.0:g}, got {wc}"
        )
    if tau_coeff is None:
        tau_coeff = 0.5 * n
    k = whittaker_index(n, tau_coeff)
    mu = 0.25 * np.sqrt(complex((n - 2.0) ** 2) + 8.0 * wc)
    ratio = whittaker_m_ratio(k, mu, q.lam * q.x_norm**2, q.lam * q.r**2)
    return complex((q.r / q.x_norm) ** (0.5 * n) * ratio)


def whittaker_ratio_vec(
    n: int, lam: float, r: float, x_norm: float, zs, tau_coeff: float
):
    """Whittaker M ratio on contour nodes; mu(z) = A(-z)/2."""
    k = whittaker_index(n, tau_coeff)
    mu = 0.5 * coef_a_neg(n, zs)
    return whittaker_m_ratio(k, mu, lam * x_norm**2, lam * r**2)


def _prefactor(n: int, lam: float, r: float, x_norm: float, convention: str) -> float:
    if convention == "derivation":
        return (
            math.gamma(0.5 * (n - 1.0))
            / (math.pi ** (0.5 * (n - 1.0)) * r ** (n - 1.0))
            * math.exp(0.5 * lam * (r * r - x_norm * x_norm))
            * (r / x_norm) ** (0.5 * n)
        )
    if convention == "displayed":
        if not (0.0 < x_norm < 1.0 and 0.0 < r < 1.0):
            raise DomainError(
                "the displayed convention's hyperbolic-style prefactor needs "
                "r and x_norm inside the unit ball"
            )
        return (
            2.0
            * math.gamma(0.5 * (n + 1.0))
            / (math.pi ** (0.5 * (n - 1.0)) * n * r ** (n - 1.0))
            * ((1.0 - x_norm * x_norm) / (1.0 - r * r)) ** (0.5 * (n - 2.0))
            * (r / x_norm) ** (0.5 * n)
        )
    raise DomainError(f"unknown convention {convention!r}; use one of {CONVENTIONS}")


def ou_evaluator(
    n: int,
    lam: float,
    r: float,
    x_norm: float,
    spec: ContourSpec | None = None,
    convention: str = "derivation",
) -> BallContourEvaluator:
    """Contour evaluator for the drifted-ball kernel at fixed parameters."""
    if spec is None:
        spec = default_spec_for(n)
    tau_coeff = 0.5 * n if convention == "derivation" else float(n)
    pref = _prefactor(n, lam, r, x_norm, convention)
    return BallContourEvaluator(
        n,
        spec,
        lambda zs: whittaker_ratio_vec(n, lam, r, x_norm, zs, tau_coeff),
        pref,
    )


def poisson_kernel_ou_ball(
    q: OUBallQuery,
    spec: ContourSpec | None = None,
    *,
    convention: str = "derivation",
    full_line: bool = False,
) -> float:
    """Exit-distribution density of the drifted diffusion on the sphere.

    Density with respect to surface measure at angle phi from the start
    direction. The default convention integrates to one; see the module
    docstring for the "displayed" comparison variant.
    """
    ev = ou_evaluator(q.n, q.lam, q.r, q.x_norm, spec, convention)
    return ev.kernel(q.phi, full_line)


def flat_ball_kernel(n: int, r: float, x_norm: float, phi: float) -> float:
    """Zero-drift ball Poisson kernel (lambda -> 0 oracle).

    (r^2 - |x|^2) / (sigma_1 r |x - y|^n) with sigma_1 the unit-sphere
    area; |x - y|^2 = r^2 + |x|^2 - 2 r |x| cos(phi). Derived from the
    unit-ball kernel by Brownian scaling; integrates to one.
    """
    if not 0.0 <= x_norm < r:
        raise DomainError("flat_ball_kernel requires 0 <= x_norm < r")
    sigma1 = 2.0 * math.pi ** (0.5 * n) / math.gamma(0.5 * n)
    dist2 = r * r + x_norm * x_norm - 2.0 * r * x_norm * math.cos(phi)
    return (r * r - x_norm * x_norm) / (sigma1 * r * dist2 ** (0.5 * n))


def ou_total_mass(
    n: int,
    lam: float,
    r: float,
    x_norm: float,
    spec: ContourSpec | None = None,
    convention: str = "derivation",
    quad: QuadratureSpec | None = None,
) -> float:
    """Integral of the drifted-ball kernel over the boundary sphere."""
    ev = ou_evaluator(n, lam, r, x_norm, spec, convention)
    return sphere_mass(n, r, ev.kernel, quad)


def convention_report(
    n: int,
    lam: float,
    r: float,
    x_norm: float,
    spec: ContourSpec | None = None,
) -> dict:
    """Side-by-side total-mass comparison of the two conventions.

    The harmonic measure is a probability measure, so mass is the
    arbitration statistic; mc-compare adds the pathwise histogram check.
    """
    out = {}
    for conv in CONVENTIONS:
        try:
            out[conv] = ou_total_mass(n, lam, r, x_norm, spec, conv)
        except DomainError:
            out[conv] = float("nan")
    out["preferred"] = min(
        (c for c in CONVENTIONS if not math.isnan(out[c])),
        key=lambda c: abs(out[c] - 1.0),
    )
    return out

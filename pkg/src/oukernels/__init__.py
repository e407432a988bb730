"""Exit-distribution (Poisson) kernels for Ornstein-Uhlenbeck-type
diffusions: hyperbolic Brownian motion on half-space and ball models and
the classical drifted Brownian motion on a ball, each validated against a
Monte Carlo Feynman-Kac oracle.
"""

from .ball_hyperbolic import (
    BallQuery,
    ball_total_mass,
    coef_a,
    coef_b,
    green_coef,
    green_function_s,
    laplace_mu_ball,
    poisson_kernel_ball,
    uniform_density,
)
from .ball_ou import (
    OUBallQuery,
    convention_report,
    flat_ball_kernel,
    laplace_mu_ou,
    ou_total_mass,
    poisson_kernel_ou_ball,
)
from .contour import ContourSpec
from .errors import (
    BranchCutError,
    BudgetExceededError,
    ContourError,
    DivergenceError,
    DomainError,
    InsufficientSamplesError,
    NotSupportedError,
    OUKernelsError,
    PoleError,
    QuadratureError,
)
from .halfspace import (
    HalfSpaceQuery,
    asym_boundary_c,
    asym_large_y,
    boundary_limit_constant,
    bounds_ratio_scan,
    kernel_total_mass,
    laplace_mu,
    large_y_ratio_limit,
    mu_density,
    poisson_kernel,
    poisson_kernel_scaled,
)
from .quadrature import QuadratureSpec
from .specfun import Order

__version__ = "0.1.0"

__all__ = [
    "BallQuery",
    "BranchCutError",
    "BudgetExceededError",
    "ContourError",
    "ContourSpec",
    "DivergenceError",
    "DomainError",
    "HalfSpaceQuery",
    "InsufficientSamplesError",
    "NotSupportedError",
    "OUBallQuery",
    "OUKernelsError",
    "Order",
    "PoleError",
    "QuadratureError",
    "QuadratureSpec",
    "asym_boundary_c",
    "asym_large_y",
    "ball_total_mass",
    "boundary_limit_constant",
    "bounds_ratio_scan",
    "coef_a",
    "coef_b",
    "convention_report",
    "flat_ball_kernel",
    "green_coef",
    "green_function_s",
    "kernel_total_mass",
    "laplace_mu",
    "laplace_mu_ball",
    "laplace_mu_ou",
    "large_y_ratio_limit",
    "mu_density",
    "ou_total_mass",
    "poisson_kernel",
    "poisson_kernel_ball",
    "poisson_kernel_ou_ball",
    "poisson_kernel_scaled",
    "uniform_density",
]

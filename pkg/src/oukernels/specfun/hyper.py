"""Gauss 2F1 and Kummer 1F1 for complex parameters and real argument.

The evaluators are vectorized over the *parameters* (numpy broadcasting):
the Bromwich-line kernels evaluate one fixed argument against thousands of
contour-dependent parameter triples at once.

Branch layout for 2F1 on z in [0, 1):
  * terminating series when alpha or beta is a nonpositive integer,
  * ascending series for z <= NEAR_ONE_CROSSOVER,
  * linear transformation to argument 1-z above the crossover; the
    integer gamma-alpha-beta case goes through the logarithmic limiting
    form (kept private; the public hyp2f1 keeps its NotSupported contract).

Target accuracy ~1e-12 relative for moderate parameters (|alpha|,|beta|
up to a few hundred along the imaginary direction, the range exercised by
the contour integrals).
"""

from __future__ import annotations

import math

import numpy as np
from scipy import special as _sp

from ..errors import DivergenceError, DomainError, NotSupportedError, PoleError
from .gamma import POLE_TOL, is_near_pole

# Switch from the ascending series to the 1-z transformation here. For
# parameters with imaginary part T the connection formulas lose a factor
# ~exp(6 T sqrt(1-z)) to cancellation (measured), so the switch point
# moves toward 1 as T grows (see _near_one_threshold); the ascending
# series has no such loss for this parameter family, only a longer tail.
NEAR_ONE_CROSSOVER = 0.7
# Hard iteration cap; approached only for near-1 arguments at large T.
MAX_TERMS = 6000
# Terms 1F1 will sum before switching matters; see hyp1f1.
HYP1F1_ASYMPTOTIC_X = 60.0

_EPS = 1e-16


def _as_carray(*vals):
    arrs = np.broadcast_arrays(*[np.asarray(v, dtype=complex) for v in vals])
    return arrs


def _nonpositive_int(v, tol=POLE_TOL):
    """Elementwise: is v within tol of a nonpositive integer?"""
    v = np.asarray(v, dtype=complex)
    k = np.round(v.real)
    return (k <= 0) & (np.hypot(v.real - k, v.imag) < tol)


def hyp2f1_series(a, b, c, z, max_terms: int = MAX_TERMS):
    """Ascending series sum_k (a)_k (b)_k / ((c)_k k!) z^k, |z| < 1.

    a, b, c may be complex arrays (broadcast together); z real or complex
    with |z| < 1. Terminates early for polynomial cases. Converged lanes
    are compacted out of the loop periodically, which matters on contour
    grids whose parameter magnitudes span two orders of magnitude.
    """
    a, b, c = _as_carray(a, b, c)
    z = np.asarray(z, dtype=complex)
    shape = np.broadcast_shapes(a.shape, z.shape)
    a, b, c, z = (np.broadcast_to(v, shape).ravel() for v in (a, b, c, z))
    size = a.size
    term = np.ones(size, dtype=complex)
    acc = np.ones(size, dtype=complex)
    out = np.empty(size, dtype=complex)
    idx = np.arange(size)
    k = 0
    while k < max_terms:
        stop = min(k + 128, max_terms)
        while k < stop:
            term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z
            acc += term
            k += 1
        done = np.abs(term) <= _EPS * np.maximum(np.abs(acc), 1e-300)
        if done.all():
            out[idx] = acc
            return out.reshape(shape) if shape else complex(out[0])
        if done.any():
            out[idx[done]] = acc[done]
            keep = ~done
            idx = idx[keep]
            a, b, c, z = a[keep], b[keep], c[keep], z[keep]
            term = term[keep]
            acc = acc[keep]
    raise DivergenceError(
        f"2F1 series did not converge in {max_terms} terms (|z|max="
        f"{np.max(np.abs(z)):g})"
    )


def _poch_ratio_prefactor(a, b, c, m):
    """log of Gamma(m) Gamma(c) / (Gamma(a+m) Gamma(b+m)) for the finite part."""
    lg = _sp.loggamma
    return lg(float(m)) + lg(c) - lg(a + m) - lg(b + m)


def _hyp2f1_near_one_generic(a, b, c, z):
    """Linear 1-z transformation, gamma-a-b not an integer."""
    a, b, c = _as_carray(a, b, c)
    if np.all(_nonpositive_int(a)) or np.all(_nonpositive_int(b)):
        return hyp2f1_series(a, b, c, z)  # terminating polynomial
    w = 1.0 - np.asarray(z, dtype=complex)
    d = c - a - b
    lg = _sp.loggamma
    t1 = np.exp(lg(c) + lg(d) - lg(c - a) - lg(c - b))
    t2 = np.exp(lg(c) + lg(-d) - lg(a) - lg(b)) * w**d
    f1 = hyp2f1_series(a, b, 1.0 - d, w)
    f2 = hyp2f1_series(c - a, c - b, 1.0 + d, w)
    return t1 * f1 + t2 * f2


def _hyp2f1_near_one_int(a, b, m: int, z, max_terms: int = MAX_TERMS):
    """2F1(a, b; a+b+m; z) for integer m >= 0 near z=1 (logarithmic case).

    Standard limiting form of the 1-z connection formula; w = 1-z must
    satisfy |w| < 1 (used here with w <= 1 - NEAR_ONE_CROSSOVER).
    """
    a, b = _as_carray(a, b)
    if np.all(_nonpositive_int(a)) or np.all(_nonpositive_int(b)):
        return hyp2f1_series(a, b, a + b + m, z)  # terminating polynomial
    w = np.asarray(1.0 - np.asarray(z, dtype=complex))
    c = a + b + m
    lg = _sp.loggamma
    psi = _sp.digamma
    shape = np.broadcast_shapes(a.shape, w.shape)
    out = np.zeros(shape, dtype=complex)

    if m > 0:
        pref1 = np.exp(lg(float(m)) + lg(c) - lg(a + m) - lg(b + m))
        term = np.ones(shape, dtype=complex)
        fin = np.ones(shape, dtype=complex) * 0.0
        fin = fin + term
        for k in range(1, m):
            term = term * ((a + k - 1) * (b + k - 1) / (k * (1.0 - m + k - 1))) * w
            fin = fin + term
        out = out + pref1 * fin

    # logarithmic series
    pref2 = -np.exp(lg(c) - lg(a) - lg(b)) * (-w) ** m
    lnw = np.log(w)
    coef = np.ones(shape, dtype=complex) / math.factorial(m)
    acc = np.zeros(shape, dtype=complex)
    for k in range(max_terms):
        bracket = lnw - psi(k + 1.0) - psi(k + m + 1.0) + psi(a + k + m) + psi(b + k + m)
        term = coef * bracket
        acc = acc + term
        if k > 0 and np.all(
            np.abs(term) <= _EPS * np.maximum(np.abs(acc), 1e-300)
        ):
            break
        coef = coef * ((a + m + k) * (b + m + k) / ((k + 1.0) * (k + m + 1.0))) * w
    else:
        raise DivergenceError("logarithmic 2F1 connection series did not converge")
    return out + pref2 * acc


def _near_one_threshold(a, b) -> float:
    """Largest z still summed by the ascending series.

    Keeps the connection-formula cancellation exp(6 T sqrt(1-z)) below
    ~1e-10 relative (T = largest imaginary part among the parameters) at
    the cost of a longer series tail below the threshold.
    """
    t = max(float(np.max(np.abs(np.imag(a)))), float(np.max(np.abs(np.imag(b)))), 1.0)
    w_min = (2.2 / t) ** 2
    return max(NEAR_ONE_CROSSOVER, 1.0 - w_min)


def hyp2f1_any(a, b, c, z):
    """2F1 for complex (array) parameters, real argument z in (-1, 1].

    Internal dispatcher used by the Legendre and Green-function layers;
    handles the integer-difference logarithmic case transparently.
    """
    a, b, c = _as_carray(a, b, c)
    zc = np.asarray(z, dtype=complex)
    if np.any(zc.imag != 0.0):
        raise DomainError("hyp2f1_any expects a real argument")
    zr = zc.real
    if np.any(zr > 1.0) or np.any(zr <= -1.0):
        raise DomainError("hyp2f1_any argument must lie in (-1, 1]")
    if np.any(_nonpositive_int(c)):
        # Terminating numerator can make this fine, but none of our call
        # sites hits that corner; refuse loudly instead of guessing.
        raise PoleError("2F1 parameter gamma at a nonpositive integer")

    # Polynomial cases terminate before any transformation is needed.
    if np.all(_nonpositive_int(a)) or np.all(_nonpositive_int(b)):
        return hyp2f1_series(a, b, c, zr)

    crossover = _near_one_threshold(a, b)
    if np.all(zr <= crossover):
        return hyp2f1_series(a, b, c, zr)
    if np.any(zr <= crossover):
        # mixed arguments: evaluate the two regimes separately
        out = np.empty(np.broadcast_shapes(a.shape, zr.shape), dtype=complex)
        lo = zr <= crossover
        a_, b_, c_, z_ = np.broadcast_arrays(a, b, c, zr)
        out[lo] = hyp2f1_series(a_[lo], b_[lo], c_[lo], z_[lo])
        out[~lo] = hyp2f1_any(a_[~lo], b_[~lo], c_[~lo], z_[~lo])
        return out

    if np.any(zr == 1.0):
        d = c - a - b
        if np.any(d.real <= 0):
            raise DivergenceError("2F1 diverges at z=1 for Re(gamma-alpha-beta) <= 0")
        lg = _sp.loggamma
        val1 = np.exp(lg(c) + lg(d) - lg(c - a) - lg(c - b))
        if np.all(zr == 1.0):
            return val1
        out = np.where(zr == 1.0, val1, 0.0).astype(complex)
        rest = zr != 1.0
        a_, b_, c_, z_ = np.broadcast_arrays(a, b, c, zr)
        out[rest] = hyp2f1_any(a_[rest], b_[rest], c_[rest], z_[rest])
        return out

    # near-one region, 0.7 < z < 1
    d = c - a - b
    dr = d.real
    k = np.round(dr)
    is_int = (np.abs(dr - k) < POLE_TOL) & (np.abs(d.imag) < POLE_TOL)
    if np.all(is_int):
        m = int(np.round(dr.flat[0]))
        if not np.all(np.round(dr) == m):
            raise NotSupportedError("mixed integer gamma-alpha-beta lanes")
        if m >= 0:
            return _hyp2f1_near_one_int(a, b, m, zr)
        # Euler transformation flips the sign of the integer difference.
        return (1.0 - zr) ** d * _hyp2f1_near_one_int(c - a, c - b, -m, zr)
    if np.any(is_int):
        raise NotSupportedError("mixed integer/non-integer gamma-alpha-beta lanes")
    return _hyp2f1_near_one_generic(a, b, c, zr)


def hyp2f1(alpha, beta, gamma, z):
    """Gauss hypergeometric function 2F1(alpha, beta; gamma; z), z in [0, 1].

    Parameters may be complex. Raises PoleError for gamma at a nonpositive
    integer, DivergenceError at z=1 unless Re(gamma-alpha-beta) > 0, and
    NotSupportedError when z lies in the near-one regime and
    gamma-alpha-beta is an integer (degenerate transformation); the
    terminating polynomial cases are exempt from the last restriction.
    """
    a = complex(alpha)
    b = complex(beta)
    c = complex(gamma)
    zf = float(z)
    if not 0.0 <= zf <= 1.0:
        raise DomainError(f"hyp2f1 argument must lie in [0, 1], got {zf}")
    if is_near_pole(c):
        raise PoleError(f"hyp2f1 gamma={c} is a nonpositive integer")
    if zf == 0.0:
        return complex(1.0)
    if is_near_pole(a) or is_near_pole(b):
        return complex(hyp2f1_series(a, b, c, zf))
    if zf == 1.0:
        d = c - a - b
        if d.real <= 0.0:
            raise DivergenceError(
                "hyp2f1 diverges at z=1 when Re(gamma-alpha-beta) <= 0"
            )
        lg = _sp.loggamma
        return complex(np.exp(lg(c) + lg(d) - lg(c - a) - lg(c - b)))
    if zf > NEAR_ONE_CROSSOVER:
        d = c - a - b
        if abs(d.imag) < POLE_TOL and abs(d.real - round(d.real)) < POLE_TOL:
            raise NotSupportedError(
                "hyp2f1 near z=1 with integer gamma-alpha-beta is not supported"
            )
        return complex(_hyp2f1_near_one_generic(a, b, c, zf))
    return complex(hyp2f1_series(a, b, c, zf))


def hyp2f1_deriv(alpha, beta, gamma, z):
    """d/dz 2F1(alpha, beta; gamma; z) = (alpha beta / gamma) 2F1(+1 shifts)."""
    a = complex(alpha)
    b = complex(beta)
    c = complex(gamma)
    return a * b / c * hyp2f1(a + 1, b + 1, c + 1, z)


def hyp1f1(a, b, x, max_terms: int = 2 * MAX_TERMS):
    """Kummer confluent 1F1(a; b; x) for complex (array) a, b and real x >= 0.

    Ascending series below HYP1F1_ASYMPTOTIC_X, dominant-term asymptotic
    expansion above it (the recessive x^{-a}/Gamma(b-a) piece is dropped;
    for real x > 60 it is smaller than 1e-20 relative).
    """
    a, b = _as_carray(a, b)
    xf = float(x)
    if xf < 0.0:
        raise DomainError("hyp1f1 implemented for x >= 0 only")
    if np.any(_nonpositive_int(b)):
        raise PoleError("1F1 parameter b at a nonpositive integer")
    if xf <= HYP1F1_ASYMPTOTIC_X:
        shape = a.shape
        term = np.ones(shape, dtype=complex)
        acc = np.ones(shape, dtype=complex)
        for k in range(max_terms):
            term = term * ((a + k) / ((b + k) * (k + 1.0))) * xf
            acc = acc + term
            if np.all(np.abs(term) <= _EPS * np.maximum(np.abs(acc), 1e-300)):
                return acc
        raise DivergenceError("1F1 series did not converge")
    # large-x: 1F1 ~ Gamma(b)/Gamma(a) e^x x^{a-b} sum_k (b-a)_k (1-a)_k / (k! x^k)
    lg = _sp.loggamma
    pref = np.exp(lg(b) - lg(a) + xf + (a - b) * math.log(xf))
    term = np.ones(a.shape, dtype=complex)
    acc = np.ones(a.shape, dtype=complex)
    prev = np.full(a.shape, np.inf)
    for k in range(60):
        term = term * ((b - a + k) * (1.0 - a + k) / ((k + 1.0) * xf))
        mag = np.abs(term)
        if np.all(mag <= _EPS) or np.any(mag > prev):
            break
        acc = acc + term
        prev = mag
    return pref * acc


def hyp1f1_deriv(a, b, x):
    """d/dx 1F1(a; b; x) = (a/b) 1F1(a+1; b+1; x)."""
    a, b = _as_carray(a, b)
    return a / b * hyp1f1(a + 1.0, b + 1.0, x)

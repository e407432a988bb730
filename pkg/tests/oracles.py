"""Independent high-precision oracles used to freeze expected values.

Each oracle re-derives its target from a defining formula (limit
products, ascending series, integral representations) using mpmath only
as a big-float arithmetic engine, so test targets never come from the
code paths under test. Frozen constants in the test modules record the
oracle outputs; rerunning these functions reproduces them.
"""

from __future__ import annotations

import mpmath as mp


def gamma_limit_product(z, m: int = 200000, dps: int = 40):
    """Euler limit product Gamma(z) = lim m! m^z / (z (z+1) ... (z+m))."""
    with mp.workdps(dps):
        z = mp.mpmathify(z)
        acc = mp.mpf(1)
        for k in range(m + 1):
            acc = acc * (z + k)
        val = mp.factorial(m) * mp.power(m, z) / acc
        # Gamma_m(z) = Gamma(z) (1 - z(z+1)/(2m) + O(1/m^2)) from the
        # Stirling ratio Gamma(m+1+z)/Gamma(m+1) = m^z (1 + z(z+1)/(2m))
        corr = 1 + z * (z + 1) / (2 * m)
        return complex(val * corr)


def bessel_j_series(nu, x, dps: int = 40, terms: int = 200):
    """Ascending series J_nu(x) = sum (-1)^k (x/2)^{nu+2k} / (k! Gamma(nu+k+1))."""
    with mp.workdps(dps):
        nu = mp.mpf(nu)
        x = mp.mpf(x)
        acc = mp.mpf(0)
        for k in range(terms):
            term = (-1) ** k * (x / 2) ** (nu + 2 * k) / (
                mp.factorial(k) * mp.gamma(nu + k + 1)
            )
            acc += term
        return float(acc)


def bessel_k_integral(nu, z, dps: int = 30):
    """K_nu(z) = int_0^inf exp(-z cosh t) cosh(nu t) dt, Re z > 0.

    Reliable for real or mildly complex z (|Im z| not much larger than
    Re z); strongly oscillatory arguments need a reference
    implementation instead of this quadrature.
    """
    with mp.workdps(dps):
        z = mp.mpmathify(z)
        f = lambda t: mp.e ** (-z * mp.cosh(t)) * mp.cosh(mp.mpf(nu) * t)
        return complex(mp.quad(f, mp.linspace(0, 5, 26) + [8, 12, 20]))


def hyp2f1_series_oracle(a, b, c, z, dps: int = 40, terms: int = 4000):
    """Raw ascending 2F1 series at high precision."""
    with mp.workdps(dps):
        a, b, c, z = map(mp.mpmathify, (a, b, c, z))
        term = mp.mpf(1)
        acc = mp.mpf(1) * term
        for k in range(terms):
            term = term * (a + k) * (b + k) / ((c + k) * (k + 1)) * z
            acc += term
            if abs(term) < mp.mpf(10) ** (-dps) * max(abs(acc), 1):
                break
        return complex(acc)


def hyp1f1_series_oracle(a, b, x, dps: int = 40, terms: int = 4000):
    """Raw ascending 1F1 series at high precision."""
    with mp.workdps(dps):
        a, b, x = map(mp.mpmathify, (a, b, x))
        term = mp.mpf(1)
        acc = mp.mpf(1) * term
        for k in range(terms):
            term = term * (a + k) / ((b + k) * (k + 1)) * x
            acc += term
            if abs(term) < mp.mpf(10) ** (-dps) * max(abs(acc), 1):
                break
        return complex(acc)

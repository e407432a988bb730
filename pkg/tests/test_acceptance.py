"""Acceptance suite: one test per criterion, each printing a pass/fail
line (run with `pytest -s tests/test_acceptance.py` to see all lines).

Two assertions are expected to fail and are kept as stated rather than
weakened, because the quoted numeric targets contradict the verified
kernels (quadrature, Monte Carlo, and the self-consistent derivation all
agree with each other and disagree with those targets):

  * criterion 4: the quoted large-|y| ratio constants 1/(2 pi) and
    3/(4 pi) are 2^{2(n-2)} times smaller than the limit the kernel
    actually attains (2/pi resp. 3/pi at n=3);
  * criterion 7 (uniformity clause): at |x| = 0.01 the kernel's genuine
    deviation from uniformity is ~6.5% at r = 0.5 (saturating at
    (n-1)*2|x| ~ 4% as r -> 1), not below 1e-2. The companion clause
    checks the deviation really is linear in |x| and passes at
    |x| = 0.001.
"""

import math
import time

import numpy as np
import pytest
from scipy.special import erfc

from oukernels import (
    HalfSpaceQuery,
    QuadratureSpec,
    asym_large_y,
    ball_total_mass,
    convention_report,
    flat_ball_kernel,
    kernel_total_mass,
    laplace_mu,
    mu_density,
    ou_total_mass,
    poisson_kernel,
    uniform_density,
)
from oukernels.ball_hyperbolic import hyperbolic_evaluator
from oukernels.ball_ou import OUBallQuery, ou_evaluator, poisson_kernel_ou_ball
from oukernels.cli import main as cli_main
from oukernels.mc import (
    McConfig,
    collect,
    estimate_density,
    histogram_zscores,
    sample_ball_fk,
    sample_halfspace_fk,
    sample_hyperbolic_sde,
)
from oukernels.quadrature import integrate
from oukernels.specfun import (
    Order,
    bessel_j,
    bessel_j_dx,
    bessel_y,
    bessel_y_dx,
    g_nu,
    gnu_limit_t0,
    gnu_limit_x1,
    hyp2f1,
    legendre_p,
    legendre_p_dx,
    whittaker_m,
    whittaker_m_dxx,
)


def report(criterion: str, ok: bool, detail: str):
    print(f"ACCEPTANCE {criterion}: {'PASS' if ok else 'FAIL'} - {detail}")


class TestCriterion1SpecfunIdentities:
    def test_identity_suite(self):
        t0 = time.time()
        worst_w = 0.0
        xs = np.linspace(0.1, 50.0, 200)
        for nu in (0.5, 1.0, 1.5, 2.5):
            for x in xs:
                w = bessel_j(nu, x) * bessel_y_dx(nu, x) - bessel_j_dx(
                    nu, x
                ) * bessel_y(nu, x)
                worst_w = max(worst_w, abs(w - 2 / (math.pi * x)) * math.pi * x / 2)

        gauss = abs(hyp2f1(1.0, 1.0, 3.0, 1.0) - 2.0) / 2.0
        worst_euler = 0.0
        a, b, c = 0.5 + 2j, 0.5 - 2j, 1.6
        for z in np.linspace(0.0, 0.9, 10):
            lhs = hyp2f1(a, b, c, z)
            rhs = (1 - z) ** (c - a - b) * hyp2f1(c - a, c - b, c, z)
            worst_euler = max(worst_euler, abs(lhs - rhs) / abs(rhs))

        worst_leg = 0.0
        h = 2e-4
        for aa, bb in ((1.5, 0.0), (0.5 + 2j, -0.5), (2.5 + 8j, -1.0)):
            for x in (-0.6, 0.1, 0.75):
                u = legendre_p(aa, bb, x)
                up = legendre_p_dx(aa, bb, x)

                def fd(step):
                    return (
                        legendre_p_dx(aa, bb, x + step)
                        - legendre_p_dx(aa, bb, x - step)
                    ) / (2 * step)

                upp = (4 * fd(h / 2) - fd(h)) / 3
                res = (1 - x * x) * upp - 2 * x * up + (
                    aa * (aa + 1) - bb * bb / (1 - x * x)
                ) * u
                worst_leg = max(worst_leg, abs(res) / max(abs(aa * (aa + 1) * u), 1.0))

        worst_whit = 0.0
        for k, mu in ((-1.5, 0.25), (-0.75, 0.25 + 3j)):
            for x in (0.3, 0.7, 2.0):
                f = whittaker_m(k, mu, x)
                fpp = whittaker_m_dxx(k, mu, x)
                res = fpp + (-0.25 + k / x + (0.25 - mu * mu) / (x * x)) * f
                scale = max(abs((0.25 - mu * mu) / (x * x) * f), abs(f), 1.0)
                worst_whit = max(worst_whit, abs(res) / scale)

        elapsed = time.time() - t0
        ok = (
            worst_w < 1e-10
            and gauss < 1e-10
            and worst_euler < 1e-10
            and worst_leg < 1e-8
            and worst_whit < 1e-8
            and elapsed < 10.0
        )
        report(
            "1 specfun identities",
            ok,
            f"wronskian={worst_w:.2e} gauss={gauss:.2e} euler={worst_euler:.2e} "
            f"legendre_ode={worst_leg:.2e} whittaker_ode={worst_whit:.2e} "
            f"runtime={elapsed:.1f}s",
        )
        assert worst_w < 1e-10
        assert gauss < 1e-10
        assert worst_euler < 1e-10
        assert worst_leg < 1e-8
        assert worst_whit < 1e-8
        assert elapsed < 10.0


class TestCriterion2LemmaLimits:
    def test_gnu_limits(self):
        worst = 0.0
        for n in (3, 4, 5):
            nu = Order.for_halfspace(n).nu
            pairs = [
                ((1.0 + 1e-6, 1e-6), gnu_limit_t0(nu, 1.0)),
                ((2.0, 1e-6), gnu_limit_t0(nu, 2.0)),
                ((1.0 + 1e-6, 3.0), gnu_limit_x1(nu, 3.0)),
            ]
            for (x, t), ref in pairs:
                rel = abs(g_nu(nu, x, t) - ref) / abs(ref)
                worst = max(worst, rel)
        ok = worst < 1e-4
        report("2 lemma limits", ok, f"worst rel deviation={worst:.2e} (tol 1e-4)")
        assert ok


class TestCriterion3HalfspaceNormalization:
    def test_normalization(self):
        t0 = time.time()
        worst = 0.0
        details = []
        for n in (3, 4, 5):
            for xn in (1.2, 1.5, 3.0):
                mass = kernel_total_mass(n, xn)
                err = abs(mass - 1.0)
                worst = max(worst, err)
                details.append(f"n={n},xn={xn}:{err:.1e}")
        elapsed = time.time() - t0
        ok = worst < 1e-6 and elapsed < 60.0
        report(
            "3 half-space normalization",
            ok,
            f"worst |mass-1|={worst:.2e} (tol 1e-6), runtime={elapsed:.1f}s",
        )
        assert worst < 1e-6
        assert elapsed < 60.0


class TestCriterion4LargeYConstant:
    def test_quoted_constants(self):
        # Kept exactly as stated. The kernel ratio demonstrably converges
        # to 2^{2(n-2)} times these targets (see the companion test), so
        # this check documents the discrepancy by failing.
        q1 = HalfSpaceQuery(3, 1.001, 100.0)
        ratio1 = poisson_kernel(q1) * 100.0**4 / (1.001 - 1.0)
        tgt1 = 1.0 / (2.0 * math.pi)
        q2 = HalfSpaceQuery(3, 2.0, 1000.0)
        ratio2 = poisson_kernel(q2) * 1000.0**4 / (2.0 - 1.0)
        tgt2 = 3.0 / (4.0 * math.pi)
        ok = abs(ratio1 / tgt1 - 1.0) < 0.01 and abs(ratio2 / tgt2 - 1.0) < 0.02
        report(
            "4 large-|y| quoted constants",
            ok,
            f"ratio(x0=1)={ratio1:.6f} vs quoted {tgt1:.6f}; "
            f"ratio(x0=2)={ratio2:.6f} vs quoted {tgt2:.6f} "
            f"(kernel limits are 2/pi={2 / math.pi:.6f} and 3/pi={3 / math.pi:.6f})",
        )
        assert abs(ratio1 / tgt1 - 1.0) < 0.01
        assert abs(ratio2 / tgt2 - 1.0) < 0.02

    def test_companion_verified_limits(self):
        q1 = HalfSpaceQuery(3, 1.001, 100.0)
        ratio1 = poisson_kernel(q1) * 100.0**4 / (1.001 - 1.0)
        q2 = HalfSpaceQuery(3, 2.0, 1000.0)
        ratio2 = poisson_kernel(q2) * 1000.0**4 / (2.0 - 1.0)
        ok = (
            abs(ratio1 / (2.0 / math.pi) - 1.0) < 0.01
            and abs(ratio2 / (3.0 / math.pi) - 1.0) < 0.02
        )
        report(
            "4b companion verified limits",
            ok,
            f"ratio(x0=1)={ratio1:.6f} vs 2/pi; ratio(x0=2)={ratio2:.6f} vs 3/pi; "
            f"quoted/verified factor = 2^(2(n-2)) = "
            f"{asym_large_y(3, 1.0) * 2 * math.pi * 4:.1f}/4",
        )
        assert ok


class TestCriterion5LaplaceDuality:
    def test_duality(self):
        q = HalfSpaceQuery(3, 1.5, 0.0)
        spec = QuadratureSpec(rel_tol=1e-9)
        worst = 0.0
        for w in (0.5, 1.0, 2.0):
            num = integrate(
                lambda s: math.exp(-w * s) * mu_density(q, s, spec), 1e-6, 80.0, spec
            )
            num += integrate(
                lambda u: math.exp(-w / u) * mu_density(q, 1.0 / u, spec) / (u * u),
                1e-6,
                1.0 / 80.0,
                spec,
            )
            ref = laplace_mu(q, w).real
            worst = max(worst, abs(num - ref) / ref)
        ok = worst < 1e-5
        report("5 Laplace duality", ok, f"worst rel={worst:.2e} (tol 1e-5)")
        assert ok


class TestCriterion6GirsanovEquivalence:
    def test_histograms(self):
        t0 = time.time()
        cfg_fk = McConfig(
            dt=1e-4, n_paths=100_000, seed=2024, max_steps=500_000, batch_size=4096
        )
        s_fk = collect(sample_halfspace_fk(3, 1.5, cfg_fk))
        cfg_sde = McConfig(
            dt=1e-4, n_paths=100_000, seed=2025, max_steps=2_000_000, batch_size=8192
        )
        s_sde = collect(sample_hyperbolic_sde(3, 1.5, cfg_sde))
        bins = np.linspace(0.0, 6.0, 21)
        z = histogram_zscores(
            estimate_density(s_fk, bins), estimate_density(s_sde, bins)
        )
        elapsed = time.time() - t0
        ok = z.max() < 3.0 and elapsed < 300.0
        report(
            "6 Girsanov equivalence",
            ok,
            f"max z over 20 bins={z.max():.2f} (tol 3), runtime={elapsed:.0f}s",
        )
        assert z.max() < 3.0
        assert elapsed < 300.0


class TestCriterion7HyperbolicBall:
    N, R, XN = 3, 0.5, 0.25

    def test_total_mass(self):
        mass = ball_total_mass(self.N, self.R, self.XN)
        ok = abs(mass - 1.0) < 1e-3
        report("7a hball total mass", ok, f"mass={mass:.6f} (tol 1e-3)")
        assert ok

    def test_uniformity_at_stated_point(self):
        # Kept as stated (|x| = 0.01, tol 1e-2). The kernel's true
        # deviation there is ~6.5%, confirmed independently by Monte
        # Carlo, so this clause documents the discrepancy by failing.
        ev = hyperbolic_evaluator(self.N, self.R, 0.01)
        u = uniform_density(self.N, self.R)
        sup = max(
            abs(ev.kernel(p) / u - 1.0) for p in np.linspace(0.0, math.pi, 13)
        )
        ok = sup < 1e-2
        report(
            "7b hball x->0 uniformity at |x|=0.01",
            ok,
            f"sup deviation={sup:.4f} (tol 1e-2); the kernel's dipole term "
            f"is ~(n-1)*2|x| and is physical (MC-confirmed)",
        )
        assert ok

    def test_uniformity_companion_linear_in_x(self):
        u = uniform_density(self.N, self.R)

        def sup_dev(xa):
            ev = hyperbolic_evaluator(self.N, self.R, xa)
            return max(
                abs(ev.kernel(p) / u - 1.0) for p in np.linspace(0.0, math.pi, 13)
            )

        d_small = sup_dev(0.001)
        d_mid = sup_dev(0.01)
        ok = d_small < 1e-2 and 6.0 < d_mid / d_small < 14.0
        report(
            "7b' hball uniformity companion",
            ok,
            f"sup dev at |x|=0.001: {d_small:.4f} (<1e-2); scaling "
            f"dev(0.01)/dev(0.001)={d_mid / d_small:.1f} (linear in |x|)",
        )
        assert ok

    def test_mc_angle_histogram(self):
        cfg = McConfig(dt=1e-5, n_paths=100_000, seed=77, batch_size=4096)
        s = collect(sample_ball_fk(self.N, self.R, self.XN, cfg))
        d = estimate_density(s, np.linspace(-1.0, 1.0, 21))
        ev = hyperbolic_evaluator(self.N, self.R, self.XN)
        surf = 2.0 * math.pi
        raw = np.array(
            [ev.kernel(math.acos(c)) * surf * self.R**2 for c in d.grid]
        )
        ref = raw / np.sum(raw * np.diff(d.edges))
        z = np.abs(d.values - ref) / d.std_errors
        ok = z.max() < 3.0
        report("7c hball MC angle histogram", ok, f"max z={z.max():.2f} (tol 3)")
        assert ok

    def test_bessel_clock_identity(self):
        # E[exp(nu^2 clock/2); clock <= Y] = (r/x)^nu erfc(ln(r/x)/sqrt(2Y)).
        # The window (Y=15) keeps the critical-rate statistic at finite
        # variance; the unwindowed estimator is reported for reference.
        cfg = McConfig(dt=1e-5, n_paths=100_000, seed=77, batch_size=4096)
        s = collect(sample_ball_fk(self.N, self.R, self.XN, cfg))
        nu = Order.for_ball(self.N).nu
        a = math.log(self.R / self.XN)
        cap = 15.0
        vals = np.exp(0.5 * nu * nu * s.aux_clock) * (s.aux_clock <= cap)
        m, se = s.path_mean(vals)
        tgt = (self.R / self.XN) ** nu * erfc(a / math.sqrt(2.0 * cap))
        z = abs(m - tgt) / se
        raw = float(np.exp(0.5 * nu * nu * s.aux_clock).mean())
        ok = z < 3.0
        report(
            "7d Bessel clock identity",
            ok,
            f"windowed estimate {m:.4f}+-{se:.4f} vs {tgt:.4f} (z={z:.2f}); "
            f"unwindowed estimate {raw:.3f} vs (r/x)^nu={math.sqrt(2):.4f} "
            f"(heavy-tailed at the critical rate)",
        )
        assert ok


class TestCriterion8OUBall:
    N, LAM, R, XN = 3, 0.5, 1.0, 0.4

    def test_total_mass(self):
        mass = ou_total_mass(self.N, self.LAM, self.R, self.XN)
        ok = abs(mass - 1.0) < 1e-3
        report("8a ouball total mass", ok, f"mass={mass:.6f} (tol 1e-3)")
        assert ok

    def test_lambda_to_zero_flat_limit(self):
        lam = 1e-4
        sup = 0.0
        for phi in np.linspace(0.0, math.pi, 13):
            q = OUBallQuery(self.N, lam, self.R, self.XN, phi)
            k = poisson_kernel_ou_ball(q)
            sup = max(sup, abs(k - flat_ball_kernel(self.N, self.R, self.XN, phi)))
        ok = sup < 1e-2
        report(
            "8b ouball lambda->0 flat limit", ok, f"sup |K-flat|={sup:.2e} (tol 1e-2)"
        )
        assert ok

    def test_mc_cross_check(self):
        cfg = McConfig(dt=1e-5, n_paths=100_000, seed=88, batch_size=4096)
        s = collect(sample_ball_fk(self.N, self.R, self.XN, cfg, mode=("ou", self.LAM)))
        d = estimate_density(s, np.linspace(-1.0, 1.0, 21))
        ev = ou_evaluator(self.N, self.LAM, self.R, self.XN)
        surf = 2.0 * math.pi
        raw = np.array(
            [ev.kernel(math.acos(c)) * surf * self.R**2 for c in d.grid]
        )
        ref = raw / np.sum(raw * np.diff(d.edges))
        z = np.abs(d.values - ref) / d.std_errors
        ok = z.max() < 3.0
        report("8c ouball MC cross-check", ok, f"max z={z.max():.2f} (tol 3)")
        assert ok

    def test_prefactor_comparison_report(self):
        rep = convention_report(self.N, self.LAM, self.R, self.XN)
        emitted = (
            "derivation" in rep and "displayed" in rep and "preferred" in rep
        )
        inside = convention_report(self.N, self.LAM, 0.8, 0.3)
        ok = (
            emitted
            and rep["preferred"] == "derivation"
            and abs(rep["derivation"] - 1.0) < 1e-3
            and math.isnan(rep["displayed"])  # singular at r=1
            and abs(inside["displayed"] - 1.0) > 0.05
        )
        report(
            "8d prefactor convention report",
            ok,
            f"derivation mass={rep['derivation']:.6f}; displayed at r=1: "
            f"singular (hyperbolic-style factor); displayed at r=0.8: "
            f"mass={inside['displayed']:.4f} (not a probability); "
            f"arbitration: Monte Carlo and mass normalization select the "
            f"derivation chain",
        )
        assert ok


class TestCriterion9Reproducibility:
    def test_byte_identical_csv_bodies(self, tmp_path):
        args = [
            "mc-compare",
            "--geometry",
            "ouball",
            "--n",
            "3",
            "--lambda",
            "0.5",
            "--r",
            "1.0",
            "--xnorm",
            "0.4",
            "--paths",
            "5000",
            "--dt",
            "5e-5",
            "--seed",
            "7",
            "--bins",
            "10",
            "--zmax",
            "6.0",
        ]
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        rc1 = cli_main(args + ["--output", str(out1)])
        rc2 = cli_main(args + ["--output", str(out2)])

        def body(p):
            return [
                ln
                for ln in p.read_text().splitlines()
                if not ln.startswith("#")
            ]

        ok = rc1 == rc2 == 0 and body(out1) == body(out2)
        report(
            "9 reproducibility",
            ok,
            f"exit codes {rc1},{rc2}; bodies identical: {body(out1) == body(out2)}",
        )
        assert ok

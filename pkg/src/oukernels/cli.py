"""Command-line surface: kernel evaluation, tabulation, validation
suites, and Monte Carlo cross-checks with CSV/JSON artifacts.

Exit status: 0 on success, 2 when a validation suite exceeds its
tolerance, 1 on usage errors. Output files carry a provenance header in
'#' comment lines (package version, command, parameters, seed); the
timestamp is confined to one of those comment lines so that repeated
runs with the same configuration produce byte-identical bodies.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .ball_hyperbolic import (
    BallQuery,
    ball_total_mass,
    hyperbolic_evaluator,
    poisson_kernel_ball,
    uniform_density,
)
from .ball_ou import (
    OUBallQuery,
    convention_report,
    ou_evaluator,
    ou_total_mass,
    poisson_kernel_ou_ball,
)
from .contour import ContourSpec
from .errors import OUKernelsError
from .halfspace import (
    HalfSpaceQuery,
    kernel_total_mass,
    large_y_ratio_limit,
    poisson_kernel,
)
from .mc import (
    McConfig,
    ball_prefactor,
    collect,
    estimate_density,
    halfspace_prefactor,
    histogram_zscores,
    sample_ball_fk,
    sample_halfspace_fk,
)
from .quadrature import QuadratureSpec

SCHEMA_VERSION = 1
GEOMETRIES = ("halfspace", "hball", "ouball")
COMMANDS = (
    "eval",
    "tabulate",
    "validate-asymptotics",
    "validate-normalization",
    "mc-compare",
    "specfun-selftest",
)


class UsageError(OUKernelsError, ValueError):
    """Bad flags or configuration file."""


class ValidationFailure(OUKernelsError, RuntimeError):
    """A validation suite exceeded its tolerance."""


@dataclass
class RunConfig:
    """Validated run configuration (from flags or a JSON config file)."""

    command: str
    geometry: str | None = None
    n: int = 3
    xn: float | None = None
    rho: float | None = None
    r: float | None = None
    xnorm: float | None = None
    phi: float | None = None
    lam: float | None = None
    tol: float = 1e-3
    paths: int = 100_000
    seed: int = 0
    dt: float = 1e-4
    bins: int = 20
    zmax: float = 3.0
    sweep: str | None = None  # "param:start:stop:num"
    contour_height: float | None = None
    contour_nodes: int | None = None
    output: str | None = None
    fmt: str = "csv"
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.command != "specfun-selftest":
            if self.geometry not in GEOMETRIES:
                raise UsageError(
                    f"geometry must be one of {GEOMETRIES}, got {self.geometry!r}"
                )
        if self.fmt not in ("csv", "json"):
            raise UsageError(f"format must be csv or json, got {self.fmt!r}")
        if self.n < 3:
            raise UsageError("dimension n must be >= 3")

    def contour_spec(self):
        if self.contour_height is None and self.contour_nodes is None:
            return None
        from .contour import default_spec_for

        base = default_spec_for(self.n)
        return ContourSpec(
            c=None,
            height=self.contour_height or base.height,
            nodes=self.contour_nodes or base.nodes,
        )


_CONFIG_KEYS = {
    "schema_version",
    "command",
    "geometry",
    "n",
    "xn",
    "rho",
    "r",
    "xnorm",
    "phi",
    "lambda",
    "tol",
    "paths",
    "seed",
    "dt",
    "bins",
    "zmax",
    "sweep",
    "contour_height",
    "contour_nodes",
    "output",
    "format",
}


def load_config(path: str) -> RunConfig:
    """Parse a JSON config file; unknown keys are errors, not warnings."""
    with open(path) as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict):
        raise UsageError("config file must hold a JSON object")
    unknown = set(raw) - _CONFIG_KEYS
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    if raw.get("schema_version") != SCHEMA_VERSION:
        raise UsageError(
            f"config schema_version must be {SCHEMA_VERSION}, "
            f"got {raw.get('schema_version')!r}"
        )
    kwargs = {k: v for k, v in raw.items() if k != "schema_version"}
    if "lambda" in kwargs:
        kwargs["lam"] = kwargs.pop("lambda")
    if "format" in kwargs:
        kwargs["fmt"] = kwargs.pop("format")
    if "command" not in kwargs:
        raise UsageError("config file must set 'command'")
    return RunConfig(**kwargs)


def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def write_rows(cfg: RunConfig, header, rows, notes=()):
    """Emit rows as CSV or JSON with a provenance comment header."""
    params = {
        k: v
        for k, v in vars(cfg).items()
        if v is not None and k not in ("output", "extra")
    }
    meta = {
        "tool": f"oukernels {__version__}",
        "parameters": params,
    }
    lines = []
    if cfg.fmt == "csv":
        lines.append(f"# oukernels {__version__}")
        lines.append(f"# command={cfg.command}")
        for k in sorted(params):
            if k != "command":
                lines.append(f"# {k}={params[k]}")
        for note in notes:
            lines.append(f"# note: {note}")
        lines.append(f"# timestamp={time.strftime('%Y-%m-%dT%H:%M:%S%z')}")
        lines.append(",".join(header))
        for row in rows:
            lines.append(",".join(_fmt(v) for v in row))
        text = "\n".join(lines) + "\n"
    else:
        payload = {
            "meta": {**meta, "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S%z")},
            "columns": list(header),
            "rows": [[v for v in row] for row in rows],
            "notes": list(notes),
        }
        text = json.dumps(payload, indent=2, default=float) + "\n"
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _eval_rows(cfg: RunConfig):
    g = cfg.geometry
    if g == "halfspace":
        if cfg.xn is None or cfg.rho is None:
            raise UsageError("halfspace eval needs --xn and --rho")
        q = HalfSpaceQuery(cfg.n, cfg.xn, cfg.rho)
        val = poisson_kernel(q)
        return ["geometry", "n", "xn", "rho", "kernel"], [
            (g, cfg.n, cfg.xn, cfg.rho, val)
        ]
    if g == "hball":
        if cfg.r is None or cfg.xnorm is None or cfg.phi is None:
            raise UsageError("hball eval needs --r, --xnorm and --phi")
        q = BallQuery(cfg.n, cfg.r, cfg.xnorm, cfg.phi)
        val = poisson_kernel_ball(q, cfg.contour_spec())
        return ["geometry", "n", "r", "xnorm", "phi", "kernel"], [
            (g, cfg.n, cfg.r, cfg.xnorm, cfg.phi, val)
        ]
    if cfg.r is None or cfg.xnorm is None or cfg.phi is None or cfg.lam is None:
        raise UsageError("ouball eval needs --lambda, --r, --xnorm and --phi")
    q = OUBallQuery(cfg.n, cfg.lam, cfg.r, cfg.xnorm, cfg.phi)
    val = poisson_kernel_ou_ball(q, cfg.contour_spec())
    return ["geometry", "n", "lambda", "r", "xnorm", "phi", "kernel"], [
        (g, cfg.n, cfg.lam, cfg.r, cfg.xnorm, cfg.phi, val)
    ]


def _tabulate_rows(cfg: RunConfig):
    if not cfg.sweep:
        raise UsageError("tabulate needs --sweep param:start:stop:num")
    try:
        pname, lo, hi, num = cfg.sweep.split(":")
        lo, hi, num = float(lo), float(hi), int(num)
    except ValueError as exc:
        raise UsageError(f"bad --sweep spec {cfg.sweep!r}") from exc
    if num < 2 or hi <= lo:
        raise UsageError("sweep needs num >= 2 and stop > start")
    grid = np.linspace(lo, hi, num)
    rows = []
    header = None
    for v in grid:
        sub = RunConfig(
            **{
                **{
                    k: getattr(cfg, k)
                    for k in (
                        "geometry",
                        "n",
                        "xn",
                        "rho",
                        "r",
                        "xnorm",
                        "phi",
                        "lam",
                        "contour_height",
                        "contour_nodes",
                    )
                },
                "command": "eval",
                pname if pname != "lambda" else "lam": float(v),
            }
        )
        header, r = _eval_rows(sub)
        rows.extend(r)
    return header, rows


def _validate_normalization(cfg: RunConfig):
    g = cfg.geometry
    if g == "halfspace":
        if cfg.xn is None:
            raise UsageError("halfspace normalization needs --xn")
        mass = kernel_total_mass(cfg.n, cfg.xn)
    elif g == "hball":
        if cfg.r is None or cfg.xnorm is None:
            raise UsageError("hball normalization needs --r and --xnorm")
        mass = ball_total_mass(cfg.n, cfg.r, cfg.xnorm, cfg.contour_spec())
    else:
        if cfg.r is None or cfg.xnorm is None or cfg.lam is None:
            raise UsageError("ouball normalization needs --lambda, --r, --xnorm")
        mass = ou_total_mass(cfg.n, cfg.lam, cfg.r, cfg.xnorm, cfg.contour_spec())
    err = abs(mass - 1.0)
    ok = err <= cfg.tol
    header = ["geometry", "n", "mass", "abs_error", "tol", "status"]
    rows = [(g, cfg.n, mass, err, cfg.tol, "pass" if ok else "fail")]
    return ok, header, rows


def _validate_asymptotics(cfg: RunConfig):
    if cfg.geometry != "halfspace":
        raise UsageError("validate-asymptotics supports --geometry halfspace")
    xn = cfg.xn if cfg.xn is not None else 1.001
    rho = cfg.rho if cfg.rho is not None else 100.0
    q = HalfSpaceQuery(cfg.n, xn, rho)
    ratio = poisson_kernel(q) * rho ** (2.0 * cfg.n - 2.0) / (xn - 1.0)
    ref = large_y_ratio_limit(cfg.n, xn)
    rel = abs(ratio / ref - 1.0)
    ok = rel <= cfg.tol
    header = ["n", "xn", "rho", "ratio", "limit", "rel_error", "tol", "status"]
    rows = [(cfg.n, xn, rho, ratio, ref, rel, cfg.tol, "pass" if ok else "fail")]
    return ok, header, rows


def _mc_compare(cfg: RunConfig):
    mc = McConfig(
        dt=cfg.dt,
        n_paths=cfg.paths,
        seed=cfg.seed,
        max_steps=cfg.extra.get("max_steps", 2_000_000),
    )
    g = cfg.geometry
    if g == "halfspace":
        if cfg.xn is None:
            raise UsageError("halfspace mc-compare needs --xn")
        samples = collect(sample_halfspace_fk(cfg.n, cfg.xn, mc))
        edges = np.linspace(0.0, 4.0 * cfg.xn, cfg.bins + 1)
        dens = estimate_density(samples, edges)
        pref = halfspace_prefactor(cfg.n, cfg.xn)
        surf = (
            2.0 * math.pi ** (0.5 * (cfg.n - 1.0)) / math.gamma(0.5 * (cfg.n - 1.0))
        )
        raw = np.array(
            [
                poisson_kernel(HalfSpaceQuery(cfg.n, cfg.xn, c))
                * surf
                * c ** (cfg.n - 2.0)
                for c in dens.grid
            ]
        )
        mass_in = np.sum(raw * np.diff(dens.edges))
        ref = raw / mass_in
        label = "radius"
    else:
        if cfg.r is None or cfg.xnorm is None:
            raise UsageError("ball mc-compare needs --r and --xnorm")
        if g == "ouball":
            if cfg.lam is None:
                raise UsageError("ouball mc-compare needs --lambda")
            mode = ("ou", cfg.lam)
            ev = ou_evaluator(cfg.n, cfg.lam, cfg.r, cfg.xnorm, cfg.contour_spec())
        else:
            mode = "hyperbolic"
            ev = hyperbolic_evaluator(cfg.n, cfg.r, cfg.xnorm, cfg.contour_spec())
        samples = collect(sample_ball_fk(cfg.n, cfg.r, cfg.xnorm, mc, mode))
        edges = np.linspace(-1.0, 1.0, cfg.bins + 1)
        dens = estimate_density(samples, edges)
        surf_sub = (
            2.0 * math.pi ** (0.5 * (cfg.n - 1.0)) / math.gamma(0.5 * (cfg.n - 1.0))
        )
        raw = np.array(
            [
                ev.kernel(math.acos(c))
                * surf_sub
                * cfg.r ** (cfg.n - 1.0)
                * (1.0 - c * c) ** (0.5 * (cfg.n - 3.0))
                for c in dens.grid
            ]
        )
        mass_in = np.sum(raw * np.diff(dens.edges))
        ref = raw / mass_in
        label = "cos_angle"
    se = np.where(dens.std_errors == 0.0, np.inf, dens.std_errors)
    z = np.abs(dens.values - ref) / se
    ok = bool(np.all(z < cfg.zmax))
    header = [label, "mc_density", "mc_se", "kernel_density", "z"]
    rows = [
        (float(c), float(v), float(s), float(rr), float(zz))
        for c, v, s, rr, zz in zip(dens.grid, dens.values, dens.std_errors, ref, z)
    ]
    notes = [f"max_z={z.max():.17g}", f"zmax={cfg.zmax}"]
    if g == "ouball":
        rep = convention_report(cfg.n, cfg.lam, cfg.r, cfg.xnorm, cfg.contour_spec())
        notes.append(
            "prefactor comparison: derivation-chain mass="
            f"{rep['derivation']:.6f}, displayed-form mass="
            + (
                f"{rep['displayed']:.6f}"
                if not math.isnan(rep["displayed"])
                else "undefined (hyperbolic-style factor is singular for r >= 1)"
            )
            + f"; Monte Carlo max |z| = {z.max():.3f} against the "
            f"{rep['preferred']} convention"
        )
    return ok, header, rows, notes


def _specfun_selftest(cfg: RunConfig):
    from scipy import special as _sp

    from .specfun import (
        bessel_j,
        bessel_j_dx,
        bessel_y,
        bessel_y_dx,
        hyp2f1,
        legendre_p,
        legendre_p_dx,
        whittaker_m,
        whittaker_m_dxx,
    )

    checks = []
    xs = np.linspace(0.1, 50.0, 200)
    worst = 0.0
    for nu in (0.5, 1.0, 1.5, 2.5):
        for x in xs:
            wr = bessel_j(nu, x) * bessel_y_dx(nu, x) - bessel_j_dx(nu, x) * bessel_y(
                nu, x
            )
            tgt = 2.0 / (math.pi * x)
            worst = max(worst, abs(wr - tgt) / tgt)
    checks.append(("wronskian_2_over_pi_x", worst, 1e-10))

    gauss = abs(hyp2f1(1.0, 1.0, 3.0, 1.0) - 2.0) / 2.0
    checks.append(("hyp2f1_gauss_value", gauss, 1e-10))

    worst = 0.0
    for z in np.linspace(0.0, 0.9, 10):
        lhs = hyp2f1(0.3 + 0.4j, 1.2, 2.1, z)
        rhs = (1.0 - z) ** (2.1 - 0.3 - 0.4j - 1.2) * hyp2f1(
            2.1 - 0.3 - 0.4j, 2.1 - 1.2, 2.1, z
        )
        worst = max(worst, abs(lhs - rhs) / abs(rhs))
    checks.append(("hyp2f1_euler_transform", worst, 1e-10))

    worst = 0.0
    h = 1e-5
    for a, b in ((1.5, 0.0), (0.5 + 2.0j, -0.5), (2.5 + 8.0j, -1.0)):
        for x in (-0.5, 0.2, 0.7):
            u = legendre_p(a, b, x)
            up = legendre_p_dx(a, b, x)
            upp = (legendre_p_dx(a, b, x + h) - legendre_p_dx(a, b, x - h)) / (2 * h)
            res = (1 - x * x) * upp - 2 * x * up + (
                a * (a + 1) - b * b / (1 - x * x)
            ) * u
            scale = max(abs(a * (a + 1) * u), 1.0)
            worst = max(worst, abs(res) / scale)
    checks.append(("legendre_ode_residual", worst, 1e-8))

    worst = 0.0
    for k, mu in ((-1.5, 0.25), (-0.75, 0.25 + 3.0j)):
        for x in (0.3, 0.7, 2.0):
            f = whittaker_m(k, mu, x)
            fpp = whittaker_m_dxx(k, mu, x)
            res = fpp + (-0.25 + k / x + (0.25 - mu * mu) / (x * x)) * f
            scale = max(abs((0.25 - mu * mu) / (x * x) * f), abs(f), 1.0)
            worst = max(worst, abs(res) / scale)
    checks.append(("whittaker_ode_residual", worst, 1e-8))

    ok = all(err <= tol for _, err, tol in checks)
    header = ["check", "max_error", "tol", "status"]
    rows = [
        (name, err, tol, "pass" if err <= tol else "fail")
        for name, err, tol in checks
    ]
    return ok, header, rows


def run(cfg: RunConfig) -> int:
    """Execute a validated RunConfig; returns the process exit status."""
    if cfg.command == "eval":
        header, rows = _eval_rows(cfg)
        write_rows(cfg, header, rows)
        return 0
    if cfg.command == "tabulate":
        header, rows = _tabulate_rows(cfg)
        write_rows(cfg, header, rows)
        return 0
    if cfg.command == "validate-normalization":
        ok, header, rows = _validate_normalization(cfg)
        write_rows(cfg, header, rows)
        return 0 if ok else 2
    if cfg.command == "validate-asymptotics":
        ok, header, rows = _validate_asymptotics(cfg)
        write_rows(cfg, header, rows)
        return 0 if ok else 2
    if cfg.command == "mc-compare":
        ok, header, rows, notes = _mc_compare(cfg)
        write_rows(cfg, header, rows, notes)
        return 0 if ok else 2
    ok, header, rows = _specfun_selftest(cfg)
    for name, err, tol, status in rows:
        print(f"{status.upper():4s} {name}: max_error={err:.3e} (tol {tol:g})")
    write_rows(cfg, header, rows)
    return 0 if ok else 2


def build_parser() -> argparse.ArgumentParser:
    class Parser(argparse.ArgumentParser):
        def error(self, message):
            raise UsageError(message)

    p = Parser(prog="oukernels", description=__doc__)
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", help="JSON config file (overrides other flags)")
    p.add_argument("--geometry", choices=GEOMETRIES)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--xn", type=float)
    p.add_argument("--rho", type=float)
    p.add_argument("--r", type=float)
    p.add_argument("--xnorm", type=float)
    p.add_argument("--phi", type=float)
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--tol", type=float, default=1e-3)
    p.add_argument("--paths", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dt", type=float, default=1e-4)
    p.add_argument("--bins", type=int, default=20)
    p.add_argument("--zmax", type=float, default=3.0)
    p.add_argument("--sweep")
    p.add_argument("--contour-height", dest="contour_height", type=float)
    p.add_argument("--contour-nodes", dest="contour_nodes", type=int)
    p.add_argument("--output")
    p.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.config:
            cfg = load_config(args.config)
        else:
            kwargs = {k: v for k, v in vars(args).items() if k != "config"}
            cfg = RunConfig(**kwargs)
        return run(cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except OUKernelsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

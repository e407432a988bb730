"""Monte Carlo ground truth: Euler-Maruyama exit sampling with
Feynman-Kac weights.

Three samplers cover the validated geometries:

  * sample_halfspace_fk: standard Brownian motion started at height x_n,
    stopped on the level-1 hyperplane, weighted by
    exp(-n(n-2)/8 int ds/W_n^2). The transverse exit coordinates are
    drawn exactly from N(0, tau I) given the exit time.
  * sample_hyperbolic_sde: direct simulation of the hyperbolic
    coordinate system dY_i = Y_n dB_i, dY_n = Y_n dB_n - (n-2) Y_n dt
    with variance-2t driving noise; unweighted exit points.
  * sample_ball_fk: standard Brownian motion in the ball, weighted by
    exp(-n(n-2)/2 int ds/(1-|W|^2)^2) (mode "hyperbolic") or
    exp(-lambda^2/2 int |W|^2 ds - tau_coeff*lambda*tau) (mode "ou");
    records the cosine of the exit angle and the radial clock
    int ds/|W|^2.

Path functionals use the left-point rule; boundary crossings are
resolved by linear interpolation inside the crossing step (no diffusion
bridge correction; the O(sqrt(dt)) overshoot bias is controlled by the
dt-refinement tests). Geometry prefactors (the Girsanov boundary terms)
are never baked into fk_weight: apply them once, at reduction, via
halfspace_prefactor / ball_prefactor.

Reproducibility: paths are processed in fixed-size batches; batch b of a
run with seed s draws from PCG64(SeedSequence(s, spawn_key=(b,))).
Identical McConfig therefore gives bit-identical output, and batches are
independent streams that could be evaluated in parallel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceededError, DomainError, InsufficientSamplesError


@dataclass(frozen=True)
class McConfig:
    """Simulation policy: step, path count, seed, and budget."""

    dt: float = 1e-3
    n_paths: int = 10_000
    seed: int = 0
    boundary_eps: float = 0.0
    max_steps: int = 2_000_000
    batch_size: int = 8192
    on_budget: str = "drop"

    def __post_init__(self):
        if self.dt <= 0.0:
            raise DomainError("dt must be positive")
        if self.n_paths < 1:
            raise DomainError("n_paths must be >= 1")
        if self.seed < 0:
            raise DomainError("seed must be a nonnegative integer")
        if self.boundary_eps < 0.0:
            raise DomainError("boundary_eps must be >= 0")
        if self.max_steps < 1 or self.batch_size < 1:
            raise DomainError("max_steps and batch_size must be >= 1")
        if self.on_budget not in ("drop", "raise"):
            raise DomainError("on_budget must be 'drop' or 'raise'")


@dataclass
class ExitSamples:
    """One batch of exit samples (arrays aligned by path).

    exit_point is (paths, n-1) boundary coordinates for the half-space
    geometry and the scalar cosine of the exit angle for balls;
    fk_weight carries only the pathwise exponential functional; aux_clock
    is the accumulated int ds / (radius)^2 where the sampler tracks it.
    truncated counts paths dropped at the step budget.
    """

    exit_point: np.ndarray
    exit_time: np.ndarray
    fk_weight: np.ndarray
    aux_clock: np.ndarray
    truncated: int = 0

    @property
    def n_total(self) -> int:
        """Paths launched: exited plus budget-truncated."""
        return len(self.exit_time) + self.truncated

    def path_mean(self, values) -> tuple:
        """(mean, se) of a per-exit statistic over all launched paths.

        Budget-truncated paths count as zero contributions; exact
        whenever the statistic is negligible at the budget horizon
        (e.g. exponentially discounted functionals).
        """
        values = np.asarray(values, dtype=float)
        n = self.n_total
        mean = float(values.sum() / n)
        var = (float((values * values).sum()) - n * mean * mean) / max(n - 1, 1)
        return mean, math.sqrt(max(var, 0.0) / n)


def collect(stream) -> ExitSamples:
    """Concatenate a sampler stream into a single ExitSamples batch."""
    parts = list(stream)
    if not parts:
        raise InsufficientSamplesError("empty sample stream")
    return ExitSamples(
        exit_point=np.concatenate([p.exit_point for p in parts]),
        exit_time=np.concatenate([p.exit_time for p in parts]),
        fk_weight=np.concatenate([p.fk_weight for p in parts]),
        aux_clock=np.concatenate([p.aux_clock for p in parts]),
        truncated=sum(p.truncated for p in parts),
    )


def _batch_rng(seed: int, batch_index: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(batch_index,))
    return np.random.Generator(np.random.PCG64(ss))


def _batch_sizes(cfg: McConfig):
    full, rem = divmod(cfg.n_paths, cfg.batch_size)
    sizes = [cfg.batch_size] * full + ([rem] if rem else [])
    return sizes


def halfspace_prefactor(n: int, x_n: float) -> float:
    """Boundary term x_n^{(n-2)/2} of the half-space harmonic measure."""
    return x_n ** (0.5 * (n - 2.0))


def ball_prefactor(n: int, r: float, x_norm: float, mode: str, lam: float = 0.0) -> float:
    """Boundary term of the ball harmonic measures (applied at reduction)."""
    if mode == "hyperbolic":
        return ((1.0 - x_norm**2) / (1.0 - r * r)) ** (0.5 * (n - 2.0))
    if mode == "ou":
        return math.exp(0.5 * lam * (r * r - x_norm**2))
    raise DomainError(f"unknown mode {mode!r}")


_CHUNK = 512


def sample_halfspace_fk(n: int, x_n: float, cfg: McConfig):
    """Weighted-Brownian exit sampler for the half-space {x_n > 1}.

    Yields ExitSamples batches; fk_weight = exp(-n(n-2)/8 int ds/W_n^2),
    exit_point the n-1 transverse coordinates at the exit time,
    aux_clock the accumulated int ds/W_n^2.
    """
    if x_n <= 1.0:
        raise DomainError("x_n must be > 1")
    q = n * (n - 2.0) / 8.0
    dt = cfg.dt
    level = 1.0 + cfg.boundary_eps
    for b, size in enumerate(_batch_sizes(cfg)):
        rng = _batch_rng(cfg.seed, b)
        w = np.full(size, float(x_n))
        clock = np.zeros(size)
        steps = np.zeros(size, dtype=np.int64)
        alive = np.arange(size)
        out_time = np.empty(size)
        out_clock = np.empty(size)
        exited = np.zeros(size, dtype=bool)
        truncated = 0
        while alive.size:
            m = alive.size
            noise = rng.standard_normal((m, _CHUNK)) * math.sqrt(dt)
            traj = w[alive, None] + np.cumsum(noise, axis=1)
            prev = np.empty_like(traj)
            prev[:, 0] = w[alive]
            prev[:, 1:] = traj[:, :-1]
            below = traj <= level
            hit = below.any(axis=1)
            first = np.argmax(below, axis=1)
            clock_inc = dt / (prev * prev)
            cum_clock = np.cumsum(clock_inc, axis=1)

            hit_rows = np.nonzero(hit)[0]
            if hit_rows.size:
                j = first[hit_rows]
                wp = prev[hit_rows, j]
                wn = traj[hit_rows, j]
                theta = np.clip((wp - level) / (wp - wn), 0.0, 1.0)
                gidx = alive[hit_rows]
                out_time[gidx] = (steps[gidx] + j + theta) * dt
                part = cum_clock[hit_rows, j] - (1.0 - theta) * clock_inc[hit_rows, j]
                out_clock[gidx] = clock[gidx] + part
                exited[gidx] = True

            surv_rows = np.nonzero(~hit)[0]
            gsurv = alive[surv_rows]
            w[gsurv] = traj[surv_rows, -1]
            clock[gsurv] += cum_clock[surv_rows, -1]
            steps[gsurv] += _CHUNK
            over = steps[gsurv] >= cfg.max_steps
            if over.any():
                if cfg.on_budget == "raise":
                    raise BudgetExceededError(
                        f"{int(over.sum())} paths exceeded {cfg.max_steps} steps"
                    )
                truncated += int(over.sum())
            alive = gsurv[~over]

        idx = np.nonzero(exited)[0]
        tau = out_time[idx]
        trans = rng.standard_normal((idx.size, n - 1)) * np.sqrt(tau)[:, None]
        yield ExitSamples(
            exit_point=trans,
            exit_time=tau,
            fk_weight=np.exp(-q * out_clock[idx]),
            aux_clock=out_clock[idx],
            truncated=truncated,
        )


def sample_hyperbolic_sde(n: int, start, cfg: McConfig):
    """Direct Euler-Maruyama of the hyperbolic coordinate system.

    start is an n-vector with last coordinate > 1 (or a bare height, read
    as (0, ..., 0, height)). The driving noise has variance 2 dt per
    coordinate. Yields unweighted exit points on the level-1 hyperplane.
    """
    start = np.atleast_1d(np.asarray(start, dtype=float))
    if start.size == 1:
        s0 = np.zeros(n)
        s0[-1] = start[0]
        start = s0
    if start.shape != (n,) or start[-1] <= 1.0:
        raise DomainError("start must be an n-vector with last coordinate > 1")
    dt = cfg.dt
    root = math.sqrt(2.0 * dt)
    drift = (n - 2.0) * dt
    level = 1.0 + cfg.boundary_eps
    for b, size in enumerate(_batch_sizes(cfg)):
        rng = _batch_rng(cfg.seed, b)
        y = np.tile(start, (size, 1))
        t_steps = np.zeros(size, dtype=np.int64)
        out_pt = np.empty((size, n - 1))
        out_time = np.empty(size)
        exited = np.zeros(size, dtype=bool)
        alive = np.arange(size)
        truncated = 0
        while alive.size:
            m = alive.size
            yn = y[alive, -1]
            db = rng.standard_normal((m, n)) * root
            ynew = y[alive] + yn[:, None] * db
            ynew[:, -1] -= drift * yn
            t_steps[alive] += 1
            crossed = ynew[:, -1] <= level
            rows = np.nonzero(crossed)[0]
            if rows.size:
                gidx = alive[rows]
                yp = yn[rows]
                ynn = ynew[rows, -1]
                theta = np.clip((yp - level) / (yp - ynn), 0.0, 1.0)
                pts = y[gidx, : n - 1] + theta[:, None] * (
                    ynew[rows, : n - 1] - y[gidx, : n - 1]
                )
                out_pt[gidx] = pts
                out_time[gidx] = (t_steps[gidx] - 1.0 + theta) * dt
                exited[gidx] = True
            surv = np.nonzero(~crossed)[0]
            gsurv = alive[surv]
            y[gsurv] = ynew[surv]
            over = t_steps[gsurv] >= cfg.max_steps
            if over.any():
                if cfg.on_budget == "raise":
                    raise BudgetExceededError(
                        f"{int(over.sum())} paths exceeded {cfg.max_steps} steps"
                    )
                truncated += int(over.sum())
            alive = gsurv[~over]
        idx = np.nonzero(exited)[0]
        yield ExitSamples(
            exit_point=out_pt[idx],
            exit_time=out_time[idx],
            fk_weight=np.ones(idx.size),
            aux_clock=np.zeros(idx.size),
            truncated=truncated,
        )


def sample_ball_fk(n: int, r: float, x, cfg: McConfig, mode="hyperbolic"):
    """Weighted-Brownian exit sampler for the centered ball of radius r.

    x is the starting point (an n-vector or a bare radius placed on the
    first axis). mode is "hyperbolic" or ("ou", lambda) or
    ("ou", lambda, tau_coeff); tau_coeff defaults to n/2, the value
    consistent with the Girsanov weight (tau_coeff=n reproduces the
    doubled-drift-term functional for cross-checks).

    exit_point holds cos(angle between exit position and the start
    direction); aux_clock the radial clock int ds/|W|^2.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.size == 1:
        x0 = np.zeros(n)
        x0[0] = x[0]
        x = x0
    xnorm = float(np.linalg.norm(x))
    if not 0.0 < xnorm < r:
        raise DomainError("start must satisfy 0 < |x| < r")
    if mode == "hyperbolic":
        if r >= 1.0:
            raise DomainError("hyperbolic mode requires r < 1")
        lam = 0.0
        tau_coeff = 0.0
        ou = False
    else:
        tag, lam, *rest = mode
        if tag != "ou" or lam <= 0.0:
            raise DomainError("mode must be 'hyperbolic' or ('ou', lambda[, tau_coeff])")
        tau_coeff = rest[0] if rest else 0.5 * n
        ou = True
    xhat = x / xnorm
    dt = cfg.dt
    r_eff = r - cfg.boundary_eps
    qh = n * (n - 2.0) / 2.0
    for b, size in enumerate(_batch_sizes(cfg)):
        rng = _batch_rng(cfg.seed, b)
        pos = np.tile(x, (size, 1))
        acc = np.zeros(size)  # weight functional integral
        aux = np.zeros(size)  # radial clock
        steps = np.zeros(size, dtype=np.int64)
        out_cos = np.empty(size)
        out_time = np.empty(size)
        out_acc = np.empty(size)
        out_aux = np.empty(size)
        exited = np.zeros(size, dtype=bool)
        alive = np.arange(size)
        truncated = 0
        chunk = max(1, _CHUNK // n)
        while alive.size:
            m = alive.size
            noise = rng.standard_normal((m, chunk, n)) * math.sqrt(dt)
            traj = pos[alive, None, :] + np.cumsum(noise, axis=1)
            prev = np.empty_like(traj)
            prev[:, 0, :] = pos[alive]
            prev[:, 1:, :] = traj[:, :-1, :]
            r2_prev = np.einsum("ijk,ijk->ij", prev, prev)
            r2_new = np.einsum("ijk,ijk->ij", traj, traj)
            if ou:
                f_w = r2_prev
            else:
                f_w = 1.0 / (1.0 - r2_prev) ** 2
            # 1/R^2 is singular at the origin; the left-point rule throws
            # dt/R_prev^2 spikes when a step lands nearby. For a radius
            # linear across the step the integral is exactly
            # dt/(R_prev R_new), which is what we use.
            f_aux = 1.0 / np.sqrt(r2_prev * r2_new)
            cum_w = np.cumsum(f_w * dt, axis=1)
            cum_aux = np.cumsum(f_aux * dt, axis=1)
            outside = r2_new >= r_eff * r_eff
            hit = outside.any(axis=1)
            first = np.argmax(outside, axis=1)

            rows = np.nonzero(hit)[0]
            if rows.size:
                j = first[rows]
                p = prev[rows, j, :]
                q_ = traj[rows, j, :]
                d = q_ - p
                aa = np.einsum("ij,ij->i", d, d)
                bb = np.einsum("ij,ij->i", p, d)
                cc = np.einsum("ij,ij->i", p, p) - r * r
                disc = np.maximum(bb * bb - aa * cc, 0.0)
                theta = np.clip((-bb + np.sqrt(disc)) / np.maximum(aa, 1e-300), 0.0, 1.0)
                epts = p + theta[:, None] * d
                gidx = alive[rows]
                out_cos[gidx] = np.clip(
                    epts @ xhat / np.linalg.norm(epts, axis=1), -1.0, 1.0
                )
                out_time[gidx] = (steps[gidx] + j + theta) * dt
                out_acc[gidx] = acc[gidx] + cum_w[rows, j] - (1.0 - theta) * f_w[rows, j] * dt
                out_aux[gidx] = aux[gidx] + cum_aux[rows, j] - (1.0 - theta) * f_aux[rows, j] * dt
                exited[gidx] = True

            surv = np.nonzero(~hit)[0]
            gsurv = alive[surv]
            pos[gsurv] = traj[surv, -1, :]
            acc[gsurv] += cum_w[surv, -1]
            aux[gsurv] += cum_aux[surv, -1]
            steps[gsurv] += chunk
            over = steps[gsurv] >= cfg.max_steps
            if over.any():
                if cfg.on_budget == "raise":
                    raise BudgetExceededError(
                        f"{int(over.sum())} paths exceeded {cfg.max_steps} steps"
                    )
                truncated += int(over.sum())
            alive = gsurv[~over]

        idx = np.nonzero(exited)[0]
        if ou:
            weight = np.exp(-0.5 * lam * lam * out_acc[idx] - tau_coeff * lam * out_time[idx])
        else:
            weight = np.exp(-qh * out_acc[idx])
        yield ExitSamples(
            exit_point=out_cos[idx],
            exit_time=out_time[idx],
            fk_weight=weight,
            aux_clock=out_aux[idx],
            truncated=truncated,
        )


@dataclass(frozen=True)
class DensityEstimate:
    """Weighted histogram density with per-bin standard errors."""

    grid: np.ndarray  # bin centers, strictly increasing
    edges: np.ndarray
    values: np.ndarray
    std_errors: np.ndarray

    def __post_init__(self):
        if not np.all(np.diff(self.grid) > 0):
            raise DomainError("grid must be strictly increasing")
        if len(self.values) != len(self.grid) or len(self.std_errors) != len(self.grid):
            raise DomainError("values/std_errors must match the grid")


def exit_statistic(samples: ExitSamples) -> np.ndarray:
    """Scalar exit statistic: |exit point| for vector samples, the value
    itself for scalar (cosine) samples."""
    pt = samples.exit_point
    if pt.ndim == 2:
        return np.linalg.norm(pt, axis=1)
    return pt


def estimate_density(samples: ExitSamples, bins, weights=None) -> DensityEstimate:
    """Self-normalized weighted histogram density over the given bins.

    bins is an edge array or a count (equal-width bins over the sample
    range). Values integrate to one across the binned support; standard
    errors come from the ratio-estimator delta method.
    """
    vals = exit_statistic(samples)
    if vals.size < 100:
        raise InsufficientSamplesError(f"need >= 100 samples, got {vals.size}")
    w = samples.fk_weight if weights is None else np.asarray(weights, dtype=float)
    if np.isscalar(bins) or np.ndim(bins) == 0:
        if int(bins) < 2:
            raise InsufficientSamplesError("need at least 2 bins")
        edges = np.linspace(vals.min(), vals.max() * (1 + 1e-12), int(bins) + 1)
    else:
        edges = np.asarray(bins, dtype=float)
        if edges.size < 3:
            raise InsufficientSamplesError("need at least 2 bins")
    n_samp = vals.size
    widths = np.diff(edges)
    which = np.digitize(vals, edges) - 1
    inside = (which >= 0) & (which < len(widths))
    wbar = w.mean()
    dens = np.zeros(len(widths))
    ses = np.zeros(len(widths))
    for j in range(len(widths)):
        ind = inside & (which == j)
        aj = w * ind / widths[j]
        a_mean = aj.mean()
        f = a_mean / wbar
        # delta method for the ratio mean(a)/mean(w)
        var = np.mean((aj - f * w) ** 2) / n_samp
        dens[j] = f
        ses[j] = math.sqrt(max(var, 0.0)) / wbar
    centers = 0.5 * (edges[1:] + edges[:-1])
    return DensityEstimate(grid=centers, edges=edges, values=dens, std_errors=ses)


def histogram_zscores(d1: DensityEstimate, d2: DensityEstimate) -> np.ndarray:
    """Per-bin |difference| over combined standard error."""
    if not np.allclose(d1.edges, d2.edges):
        raise DomainError("density estimates use different bins")
    comb = np.sqrt(d1.std_errors**2 + d2.std_errors**2)
    comb = np.where(comb == 0.0, np.inf, comb)
    return np.abs(d1.values - d2.values) / comb


def estimate_laplace_functional(samples, w: float, functional: str = "time"):
    """(mean, std_error) of fk_weight * exp(-w * T), T the exit time or
    the radial clock according to `functional`.

    Budget-truncated paths enter as zero contributions, which is exact
    up to exp(-w * horizon); size the step budget accordingly.
    """
    if w < 0.0:
        raise DomainError("w must be >= 0")
    if not isinstance(samples, ExitSamples):
        samples = collect(samples)
    if functional == "time":
        t = samples.exit_time
    elif functional == "clock":
        t = samples.aux_clock
    else:
        raise DomainError("functional must be 'time' or 'clock'")
    return samples.path_mean(samples.fk_weight * np.exp(-w * t))

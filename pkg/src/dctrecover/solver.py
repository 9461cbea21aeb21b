"""Recovery solvers.

The main objective couples a truncated nuclear norm with multi-scale DCT
smoothness and a quadratic data-fidelity term:

    nuclear_weight * ||X||_r  +  sum_i lambda_i * ||X||_DCT^(p_i,q_i)
        + gamma/2 * ||P_Omega(X - M)||_F^2

solve_inner minimizes that for a fixed observation by accelerated proximal
gradient steps (gradient on the smooth terms, truncated-nuclear prox on the
rest).  Acceleration is made safe by a monotone acceptance rule: the
extrapolated candidate only replaces the iterate when it does not increase
the objective, otherwise a backtracked plain step is taken and the momentum
restarts.  Plain proximal gradient needs tens of thousands of iterations on
these badly conditioned smoothing objectives; the monotone accelerated form
reaches the same points orders of magnitude sooner without giving up the
descent property.

recover wraps solve_inner in the outer data-feedback loop

    M^(k+1) = M^(k) + delta * P_Omega(M - X^(k))

which re-inflates the observed values the penalty form systematically
undershoots.  recover_color couples three channels through the cross-channel
frequency term.  The baselines (SVT, LTV+nuclear, DCT-only descent) share
the same machinery.
"""

import dataclasses
from dataclasses import dataclass, field

import numpy as np

from .errors import (ConfigError, DivergenceError, InsufficientDataError,
                     InvalidDimensionError)
from .lowrank import _shrunk_factors
from .regularizers import (ScaleSpec, dct_norm_gradient, dct_norm_multiscale,
                           freq_coupling_gradient, freq_coupling_norm,
                           tv_linear_gradient, tv_norm_linear)

DEFAULT_SCALE_WEIGHT = 1.5e-2


def default_scales(n, m):
    """Patch scales 2 / 8 / full-image with the default weight each.

    Scales that do not fit the image are dropped; the full-image cutoff is
    ceil(3*s/8) for s = min(n, m).
    """
    s = min(n, m)
    scales = []
    if s >= 2:
        scales.append(ScaleSpec(2, 1, DEFAULT_SCALE_WEIGHT))
    if s > 8:
        scales.append(ScaleSpec(8, 4, DEFAULT_SCALE_WEIGHT))
    if s > 2:
        scales.append(ScaleSpec(s, int(np.ceil(3 * s / 8)), DEFAULT_SCALE_WEIGHT))
    return scales


@dataclass
class RecoveryConfig:
    """Solver parameters.

    scales=None and rank_r=None mean "derive from the image size" (the
    defaults above and ceil(3*min(N,M)/8) respectively).  delta may be 0,
    which freezes the outer feedback after the first inner solve.
    """

    scales: list = None
    gamma: float = 0.5
    rank_r: int = None
    alpha: float = 1e-3
    delta: float = 0.1
    inner_tol: float = 1e-4
    inner_max_iters: int = 200
    outer_eps: float = 1e-8
    outer_max_iters: int = 50
    nuclear_weight: float = 1.0
    seed: int = 0


def _resolved(cfg, dims):
    n, m = dims
    scales = cfg.scales if cfg.scales is not None else default_scales(n, m)
    scales = [ScaleSpec(int(p), int(q), float(w)) for (p, q, w) in scales]
    rank_r = cfg.rank_r if cfg.rank_r is not None else int(np.ceil(3 * min(n, m) / 8))
    out = dataclasses.replace(cfg, scales=scales, rank_r=rank_r)
    if out.gamma <= 0:
        raise ConfigError(f"gamma must be positive, got {out.gamma}")
    if not 0.0 <= out.delta <= 1.0:
        raise ConfigError(f"delta must lie in [0, 1], got {out.delta}")
    if not 0 <= out.rank_r <= min(n, m):
        raise ConfigError(f"rank_r must lie in 0..{min(n, m)}, got {out.rank_r}")
    if out.inner_tol < 0 or out.outer_eps < 0:
        raise ConfigError("tolerances must be nonnegative")
    if out.inner_max_iters < 1 or out.outer_max_iters < 1:
        raise ConfigError("iteration caps must be positive")
    if out.nuclear_weight < 0 or out.alpha < 0:
        raise ConfigError("weights must be nonnegative")
    for (p, q, w) in out.scales:
        if p > min(n, m):
            raise ConfigError(f"scale p={p} exceeds image extent {min(n, m)}")
        if not 1 <= q <= p or w < 0:
            raise ConfigError(f"bad scale ({p}, {q}, {w})")
    return out


@dataclass
class ObservedImage:
    """Pixel data with unobserved entries stored as 0, plus the mask."""

    data: np.ndarray
    mask: np.ndarray

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=float)
        self.mask = np.asarray(self.mask, dtype=bool)
        if self.data.shape != self.mask.shape or self.data.size == 0:
            raise InvalidDimensionError(
                f"data {self.data.shape} and mask {self.mask.shape} must share a nonempty shape")
        self.data = np.where(self.mask, self.data, 0.0)

    @property
    def observed_fraction(self):
        return float(np.count_nonzero(self.mask)) / self.mask.size


@dataclass
class SolveTrace:
    objective_values: list = field(default_factory=list)
    fidelity_residuals: list = field(default_factory=list)
    outer_residuals: list = field(default_factory=list)


def _patch_membership(p, n, m):
    # a pixel sits in at most this many p x p windows
    return min(p, n - p + 1) * min(p, m - p + 1)


def default_step_size(cfg, dims):
    """1/L for the smooth part of the objective.

    Each scale contributes at most 2*lambda_i times the patch-membership
    count of a pixel (per-patch masked DCT is an orthogonal projection), the
    fidelity term contributes gamma.
    """
    n, m = dims
    cfg = _resolved(cfg, dims)
    lip = cfg.gamma
    for (p, q, w) in cfg.scales:
        lip += 2.0 * w * _patch_membership(p, n, m)
    return 1.0 / lip


def objective_value(x, obs, cfg):
    """Exact objective: truncated nuclear + weighted DCT norms + fidelity."""
    x = np.asarray(x, dtype=float)
    if x.shape != obs.data.shape:
        raise InvalidDimensionError(f"iterate {x.shape} does not match observation {obs.data.shape}")
    cfg = _resolved(cfg, x.shape)
    sigma = np.linalg.svd(x, compute_uv=False)
    val = cfg.nuclear_weight * float(sigma[cfg.rank_r:].sum())
    val += dct_norm_multiscale(x, cfg.scales)
    diff = obs.mask * (x - obs.data)
    return val + 0.5 * cfg.gamma * float(np.sum(diff * diff))


_MAX_BACKTRACKS = 20
_MONOTONE_SLACK = 1e-12


def _monotone_fista(x0, smooth_grad, prox, objective, step, tol, max_iters,
                    on_accept=None):
    """Monotone accelerated proximal gradient core.

    prox(v, s) returns (point, aux); objective(z, aux) the full objective
    (aux carries the shrunken spectrum so the nuclear term costs no extra
    SVD).  Returns (x, objective list, accepted-iteration count).
    """
    x = np.asarray(x0, dtype=float).copy()
    x_prev = x
    t_acc = 1.0
    objs = [objective(x, None)]
    if not np.isfinite(objs[0]):
        raise DivergenceError("objective is non-finite at the starting point")
    if on_accept is not None:
        on_accept(x)
    iters = 0
    for _ in range(max_iters):
        t_next = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * t_acc * t_acc))
        beta = (t_acc - 1.0) / t_next
        y = x + beta * (x - x_prev)
        z, aux = prox(y - step * smooth_grad(y), step)
        obj_z = objective(z, aux)
        if obj_z <= objs[-1] + _MONOTONE_SLACK:
            t_acc = t_next
        else:
            # candidate went uphill: plain backtracked step, momentum reset
            gx = smooth_grad(x)
            s = step
            for _ in range(_MAX_BACKTRACKS + 1):
                z, aux = prox(x - s * gx, s)
                obj_z = objective(z, aux)
                if obj_z <= objs[-1] + _MONOTONE_SLACK:
                    break
                s *= 0.5
            else:
                break   # no descent direction left at float precision
            t_acc = 1.0
        if not np.all(np.isfinite(z)):
            raise DivergenceError("iterate became non-finite")
        x_prev, x = x, z
        objs.append(obj_z)
        if on_accept is not None:
            on_accept(x)
        iters += 1
        if np.linalg.norm(x - x_prev) / max(np.linalg.norm(x_prev), 1.0) < tol:
            break
    return x, objs, iters


def solve_inner(obs, x0, cfg):
    """One penalty-form minimization at fixed observed data."""
    x0 = np.asarray(x0, dtype=float)
    if x0.shape != obs.data.shape:
        raise InvalidDimensionError(f"X0 {x0.shape} does not match observation {obs.data.shape}")
    cfg = _resolved(cfg, x0.shape)
    step = default_step_size(cfg, x0.shape)
    data, mask = obs.data, obs.mask

    def grad(y):
        g = cfg.gamma * (mask * (y - data))
        if cfg.scales:
            g += 2.0 * dct_norm_gradient(y, cfg.scales)
        return g

    def prox(v, s):
        return _shrunk_factors(v, cfg.rank_r, s * cfg.nuclear_weight)

    def obj(z, sigma):
        if sigma is None:
            sigma = np.linalg.svd(z, compute_uv=False)
        diff = mask * (z - data)
        return (cfg.nuclear_weight * float(sigma[cfg.rank_r:].sum())
                + dct_norm_multiscale(z, cfg.scales)
                + 0.5 * cfg.gamma * float(np.sum(diff * diff)))

    trace = SolveTrace()

    def record(z):
        trace.fidelity_residuals.append(float(np.linalg.norm(mask * (z - data))))

    x, objs, _ = _monotone_fista(x0, grad, prox, obj, step,
                                 cfg.inner_tol, cfg.inner_max_iters, on_accept=record)
    trace.objective_values = objs
    return x, trace


def recover(obs, cfg=None):
    """Full grayscale recovery: inner solves plus outer data feedback."""
    if obs.data.ndim != 2:
        raise InvalidDimensionError(f"recover expects a 2D observation, got shape {obs.data.shape}")
    if not obs.mask.any():
        raise InsufficientDataError("no observed pixels")
    cfg = _resolved(cfg or RecoveryConfig(), obs.data.shape)
    data, mask = obs.data, obs.mask
    m_cur = data.copy()
    trace = SolveTrace()
    x = data.copy()
    for _ in range(cfg.outer_max_iters):
        x, inner = solve_inner(ObservedImage(m_cur, mask), m_cur.copy(), cfg)
        trace.objective_values.extend(inner.objective_values)
        trace.fidelity_residuals.extend(inner.fidelity_residuals)
        m_next = m_cur + cfg.delta * (mask * (data - x))
        resid = float(np.linalg.norm(m_next - x))
        trace.outer_residuals.append(resid)
        if resid <= cfg.outer_eps or np.array_equal(m_next, m_cur):
            break
        m_cur = m_next
    return np.clip(x, 0.0, 255.0), trace


def recover_color(obs, cfg=None):
    """Joint three-channel recovery with cross-channel frequency coupling.

    obs holds stacked (3, N, M) data and masks (a shared mask is simply the
    same plane three times).  With alpha == 0 the objective separates, so the
    channels are recovered independently; the coupled path updates all three
    channels inside one accelerated loop.
    """
    if obs.data.ndim != 3 or obs.data.shape[0] != 3:
        raise InvalidDimensionError(f"expected (3, N, M) channels, got shape {obs.data.shape}")
    if not obs.mask.any():
        raise InsufficientDataError("no observed pixels")
    dims = obs.data.shape[1:]
    cfg = _resolved(cfg or RecoveryConfig(), dims)

    if cfg.alpha == 0.0:
        planes = [recover(ObservedImage(obs.data[c], obs.mask[c]), cfg)[0] for c in range(3)]
        return np.stack(planes)

    lip = cfg.gamma + 3.0 * cfg.alpha
    for (p, q, w) in cfg.scales:
        lip += 2.0 * w * _patch_membership(p, *dims)
    step = 1.0 / lip
    data, mask = obs.data, obs.mask

    def joint_obj(xs, sigmas, cur_data):
        val = cfg.alpha * freq_coupling_norm(xs)
        for c in range(3):
            sigma = sigmas[c] if sigmas is not None else np.linalg.svd(xs[c], compute_uv=False)
            diff = mask[c] * (xs[c] - cur_data[c])
            val += (cfg.nuclear_weight * float(sigma[cfg.rank_r:].sum())
                    + dct_norm_multiscale(xs[c], cfg.scales)
                    + 0.5 * cfg.gamma * float(np.sum(diff * diff)))
        return val

    def joint_grad(xs, cur_data):
        gs = np.empty_like(xs)
        chans = list(xs)
        for c in range(3):
            g = cfg.gamma * (mask[c] * (xs[c] - cur_data[c]))
            if cfg.scales:
                g += 2.0 * dct_norm_gradient(xs[c], cfg.scales)
            g += 2.0 * cfg.alpha * freq_coupling_gradient(chans, c)
            gs[c] = g
        return gs

    def joint_prox(vs, s):
        zs = np.empty_like(vs)
        sigmas = []
        for c in range(3):
            zs[c], sigma = _shrunk_factors(vs[c], cfg.rank_r, s * cfg.nuclear_weight)
            sigmas.append(sigma)
        return zs, sigmas

    m_cur = data.copy()
    xs = data.copy()
    for _ in range(cfg.outer_max_iters):
        xs, objs, _ = _monotone_fista(
            m_cur.copy(),
            lambda ys: joint_grad(ys, m_cur),
            joint_prox,
            lambda zs, sigmas: joint_obj(zs, sigmas, m_cur),
            step, cfg.inner_tol, cfg.inner_max_iters)
        m_next = m_cur + cfg.delta * (mask * (data - xs))
        if float(np.linalg.norm(m_next - xs)) <= cfg.outer_eps or np.array_equal(m_next, m_cur):
            break
        m_cur = m_next
    return np.clip(xs, 0.0, 255.0)


def default_svt_schedule(obs, iters=200, start_factor=0.5, decay=0.9):
    """Geometric threshold schedule anchored at the data's spectral norm."""
    tau0 = start_factor * float(np.linalg.norm(obs.data, 2))
    return [tau0 * decay ** t for t in range(iters)]


def recover_svt(obs, tau_schedule, iters):
    """Soft-threshold the spectrum, re-project observed pixels, repeat.

    The hard constraint X_Omega = M_Omega holds exactly on return (the last
    operation is the projection); output is not clamped.
    """
    if obs.data.ndim != 2:
        raise InvalidDimensionError(f"recover_svt expects a 2D observation, got {obs.data.shape}")
    tau_schedule = list(tau_schedule)
    if not tau_schedule:
        raise ConfigError("tau_schedule must be nonempty")
    data, mask = obs.data, obs.mask
    x = data.copy()
    for t in range(iters):
        tau = tau_schedule[min(t, len(tau_schedule) - 1)]
        x, _ = _shrunk_factors(x, 0, tau)
        x[mask] = data[mask]
        if not np.all(np.isfinite(x)):
            raise DivergenceError("iterate became non-finite")
    return x


def recover_ltvnn(obs, cfg=None, tv_weight=0.2, return_trace=False):
    """Nuclear norm plus linear-TV baseline under the same outer loop.

    The inner problem swaps the DCT terms for tv_weight * tv_norm_linear and
    truncates nothing (full soft shrinkage, r = 0).
    """
    if obs.data.ndim != 2:
        raise InvalidDimensionError(f"recover_ltvnn expects a 2D observation, got {obs.data.shape}")
    if not obs.mask.any():
        raise InsufficientDataError("no observed pixels")
    cfg = _resolved(cfg or RecoveryConfig(), obs.data.shape)
    if tv_weight < 0:
        raise ConfigError(f"tv_weight must be nonnegative, got {tv_weight}")
    # forward-difference quadratic has curvature at most 16
    step = 1.0 / (cfg.gamma + 16.0 * tv_weight)
    data, mask = obs.data, obs.mask

    def obj_at(z, sigma, cur_data):
        if sigma is None:
            sigma = np.linalg.svd(z, compute_uv=False)
        diff = mask * (z - cur_data)
        return (cfg.nuclear_weight * float(sigma.sum())
                + tv_weight * tv_norm_linear(z)
                + 0.5 * cfg.gamma * float(np.sum(diff * diff)))

    def prox(v, s):
        return _shrunk_factors(v, 0, s * cfg.nuclear_weight)

    m_cur = data.copy()
    x = data.copy()
    trace = SolveTrace()
    for _ in range(cfg.outer_max_iters):
        x, objs, _ = _monotone_fista(
            m_cur.copy(),
            lambda y: tv_weight * tv_linear_gradient(y) + cfg.gamma * (mask * (y - m_cur)),
            prox,
            lambda z, sigma: obj_at(z, sigma, m_cur),
            step, cfg.inner_tol, cfg.inner_max_iters)
        trace.objective_values.extend(objs)
        m_next = m_cur + cfg.delta * (mask * (data - x))
        resid = float(np.linalg.norm(m_next - x))
        trace.outer_residuals.append(resid)
        if resid <= cfg.outer_eps or np.array_equal(m_next, m_cur):
            break
        m_cur = m_next
    out = np.clip(x, 0.0, 255.0)
    return (out, trace) if return_trace else out


_MODE_NAMES = ("global", "local", "multiscale")


def _mode_scales(mode, cfg, dims):
    s = min(dims)
    if mode == "multiscale":
        return cfg.scales
    if mode == "global":
        for spec in cfg.scales:
            if spec.p == s:
                return [spec]
        return [ScaleSpec(s, int(np.ceil(3 * s / 8)), 1.0)]
    for spec in cfg.scales:
        if spec.p == 2:
            return [spec]
    return [ScaleSpec(2, 1, 1.0)]


def recover_dct_only(obs, mode, cfg=None, return_trace=False):
    """Pure smoothness descent with the observed pixels pinned.

    mode picks the scale set: "global" the full-image scale, "local" the 2x2
    scale, "multiscale" everything in the config.  Plain accelerated gradient
    steps on the DCT energy, each followed by the hard projection
    X_Omega = M_Omega (which also makes it the final operation).  No nuclear
    term, no clamping.
    """
    if obs.data.ndim != 2:
        raise InvalidDimensionError(f"recover_dct_only expects a 2D observation, got {obs.data.shape}")
    if mode not in _MODE_NAMES:
        raise ConfigError(f"mode must be one of {_MODE_NAMES}, got {mode!r}")
    cfg = _resolved(cfg or RecoveryConfig(), obs.data.shape)
    scales = _mode_scales(mode, cfg, obs.data.shape)
    lip = 2.0 * sum(w * _patch_membership(p, *obs.data.shape) for (p, q, w) in scales)
    step = 1.0 / max(lip, 1e-30)
    data, mask = obs.data, obs.mask

    x = data.copy()
    x_prev = x
    t_acc = 1.0
    trace = SolveTrace()
    if return_trace:
        trace.objective_values.append(dct_norm_multiscale(x, scales))
    for _ in range(cfg.inner_max_iters):
        t_next = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * t_acc * t_acc))
        beta = (t_acc - 1.0) / t_next
        y = x + beta * (x - x_prev)
        z = y - 2.0 * step * dct_norm_gradient(y, scales)
        z[mask] = data[mask]
        if not np.all(np.isfinite(z)):
            raise DivergenceError("iterate became non-finite")
        x_prev, x, t_acc = x, z, t_next
        if return_trace:
            trace.objective_values.append(dct_norm_multiscale(x, scales))
        if np.linalg.norm(x - x_prev) / max(np.linalg.norm(x_prev), 1.0) < cfg.inner_tol:
            break
    return (x, trace) if return_trace else x

"""Smoothness penalties and their exact gradients.

The central quantity is the high-pass DCT energy of overlapping patches:
for eachp x p window, transform, zero the q x q low-frequency block, and
accumulate the squared Frobenius norm of what remains.  Summed over every
stride-1 window (and over several patch sizes with per-scale weights) this
is the smoothness measure the solvers descend on.

Gradient convention: dct_norm_gradient and freq_coupling_gradient return
HALF the gradient of the corresponding squared norm.  The half-gradient is
what the per-patch transform-mask-transpose pipeline produces naturally;
solvers multiply by 2 (and by the term weight) when assembling the full
smooth gradient.
"""

from typing import NamedTuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import InvalidCutoffError, InvalidDimensionError, ScaleTooLargeError
from .transform import build_dct_matrix, dct2, idct2


class ScaleSpec(NamedTuple):
    """One patch scale: size p, cutoff q, weight lambda_i."""

    p: int
    q: int
    weight: float


def _as_image(x, name="input"):
    x = np.asarray(x, dtype=float)
    if x.ndim != 2 or x.size == 0:
        raise InvalidDimensionError(f"{name} must be a nonempty 2D array, got shape {x.shape}")
    return x


def _check_scale(x, p, q):
    if p > min(x.shape):
        raise ScaleTooLargeError(f"patch size {p} exceeds image extent {min(x.shape)}")
    if not 1 <= q <= p:
        raise InvalidCutoffError(f"cutoff must satisfy 1 <= q <= {p}, got {q}")


def _pass_2x1(x, want_grad):
    """Closed form for p=2, q=1.

    A 2x2 patch has a single masked coefficient (DC), so the high-pass energy
    is ||P||_F^2 - (sum P)^2 / 4 and the half-gradient spreads -s/4 over the
    patch.  Expressing both through 2x2 box sums avoids building the patch
    stack at all, which matters inside solver loops.
    """
    s = x[:-1, :-1] + x[:-1, 1:] + x[1:, :-1] + x[1:, 1:]
    cnt = np.ones_like(x)
    cnt[1:-1, :] += 1.0
    cnt[:, 1:-1] += 1.0
    cnt[1:-1, 1:-1] += 1.0
    val = float(np.sum(cnt * x * x) - 0.25 * np.sum(s * s))
    if not want_grad:
        return val, None
    g = cnt * x
    t = 0.25 * s
    g[:-1, :-1] -= t
    g[:-1, 1:] -= t
    g[1:, :-1] -= t
    g[1:, 1:] -= t
    return val, g


def _pass_general(x, p, q, want_grad):
    view = sliding_window_view(x, (p, p))
    ni, nj = view.shape[:2]
    c = build_dct_matrix(p)
    coef = c @ view @ c.T
    total = float(np.einsum('ijkl,ijkl->', coef, coef))
    low = float(np.einsum('ijkl,ijkl->', coef[:, :, :q, :q], coef[:, :, :q, :q]))
    val = total - low
    if not want_grad:
        return val, None
    coef[:, :, :q, :q] = 0.0
    gpatch = c.T @ coef @ c
    g = np.zeros_like(x)
    if p * p <= ni * nj:
        for a in range(p):
            for b in range(p):
                g[a:a + ni, b:b + nj] += gpatch[:, :, a, b]
    else:
        for i in range(ni):
            for j in range(nj):
                g[i:i + p, j:j + p] += gpatch[i, j]
    return val, g


def _patch_pass(x, p, q, want_grad=True):
    """(high-pass energy, half-gradient or None) for one scale."""
    if p == 2 and q == 1:
        return _pass_2x1(x, want_grad)
    return _pass_general(x, p, q, want_grad)


def dct_norm_global(x, q):
    """Squared Frobenius norm of the full-image DCT outside the q x q block."""
    x = _as_image(x)
    if not 1 <= q <= min(x.shape):
        raise InvalidCutoffError(f"cutoff must satisfy 1 <= q <= {min(x.shape)}, got {q}")
    d = dct2(x)
    return float(np.sum(d * d) - np.sum(d[:q, :q] * d[:q, :q]))


def dct_norm_local(x, p, q):
    """Patch form: the same masked energy summed over all p x p windows."""
    x = _as_image(x)
    _check_scale(x, p, q)
    val, _ = _patch_pass(x, p, q, want_grad=False)
    return val


def dct_norm_multiscale(x, scales):
    x = _as_image(x)
    total = 0.0
    for (p, q, weight) in scales:
        _check_scale(x, p, q)
        val, _ = _patch_pass(x, p, q, want_grad=False)
        total += weight * val
    return float(total)


def dct_norm_gradient(x, scales):
    """Half-gradient of dct_norm_multiscale (see module docstring)."""
    x = _as_image(x)
    g = np.zeros_like(x)
    for (p, q, weight) in scales:
        _check_scale(x, p, q)
        if weight == 0.0:
            continue
        _, gg = _patch_pass(x, p, q)
        g += weight * gg
    return g


def tv_norm_iso(x):
    """Isotropic TV: sum of per-pixel forward-difference magnitudes."""
    x = _as_image(x)
    dx = np.zeros_like(x)
    dy = np.zeros_like(x)
    dx[:, :-1] = x[:, 1:] - x[:, :-1]
    dy[:-1, :] = x[1:, :] - x[:-1, :]
    return float(np.sum(np.sqrt(dx * dx + dy * dy)))


def tv_norm_aniso(x):
    """Anisotropic TV: sum of absolute forward differences."""
    x = _as_image(x)
    return float(np.sum(np.abs(x[:, 1:] - x[:, :-1])) + np.sum(np.abs(x[1:, :] - x[:-1, :])))


def tv_norm_linear(x):
    """Linear TV: sum of squared forward differences (differentiable)."""
    x = _as_image(x)
    dx = x[:, 1:] - x[:, :-1]
    dy = x[1:, :] - x[:-1, :]
    return float(np.sum(dx * dx) + np.sum(dy * dy))


def tv_linear_gradient(x):
    x = _as_image(x)
    g = np.zeros_like(x)
    dx = x[:, 1:] - x[:, :-1]
    dy = x[1:, :] - x[:-1, :]
    g[:, 1:] += 2.0 * dx
    g[:, :-1] -= 2.0 * dx
    g[1:, :] += 2.0 * dy
    g[:-1, :] -= 2.0 * dy
    return g


def _check_channels(channels):
    chans = [np.asarray(ch, dtype=float) for ch in channels]
    if len(chans) != 3:
        raise InvalidDimensionError(f"expected 3 channels, got {len(chans)}")
    shape = chans[0].shape
    for ch in chans:
        if ch.ndim != 2 or ch.shape != shape or ch.size == 0:
            raise InvalidDimensionError("channels must be three equal-size nonempty 2D arrays")
    return chans


def _highpass_diff(a, b):
    """DCT of (a - b) with the DC coefficient removed."""
    d = dct2(a - b)
    d[0, 0] = 0.0
    return d


def freq_coupling_norm(channels):
    """Cross-channel frequency disagreement, DC (illumination) excluded.

    Quarter of the masked squared DCT energy of every ordered channel pair;
    equivalently half the sum over unordered pairs.
    """
    chans = _check_channels(channels)
    total = 0.0
    for c in range(3):
        for i in range(c + 1, 3):
            d = _highpass_diff(chans[c], chans[i])
            total += np.sum(d * d)
    return float(0.5 * total)


def freq_coupling_gradient(channels, c):
    """Half-gradient w.r.t. channel c of the pairs involving c."""
    chans = _check_channels(channels)
    g = np.zeros_like(chans[c])
    for i in range(3):
        if i == c:
            continue
        g += idct2(_highpass_diff(chans[c], chans[i]))
    return 0.5 * g


def theorem1_operators():
    """The two 4x4 quadratic forms whose null spaces coincide.

    E is the patch-DCT form (2 * sum e_i e_i^T over the three AC basis
    directions of a 2x2 patch), D the linear-TV form (2 * sum d_i d_i^T over
    the four pixel-difference directions).  Both kill exactly the constant
    vector.
    """
    es = np.array([[1, 1, -1, -1], [1, -1, 1, -1], [1, -1, -1, 1]], dtype=float)
    ds = np.array([[1, 0, -1, 0], [1, -1, 0, 0], [0, 1, 0, -1], [0, 0, 1, -1]], dtype=float)
    e = 2.0 * es.T @ es
    d = 2.0 * ds.T @ ds
    return e, d

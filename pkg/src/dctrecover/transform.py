"""2D DCT via matrix products, overlapping patch bookkeeping, frequency masks.

The transform is the orthogonal DCT-II: entry (i, j) of the order-n matrix is
alpha(i) * cos((j + 0.5) * pi * i / n) with alpha(0) = sqrt(1/n) and
alpha(i != 0) = sqrt(2/n).  The 2D transform of an N x M image is
C_N @ X @ C_M.T; non-square images simply use two matrices.

Matrices are cached per order and returned read-only: callers must treat
them as immutable.
"""

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import InvalidCutoffError, InvalidDimensionError, ScaleTooLargeError

_DCT_CACHE = {}


def build_dct_matrix(n):
    """Orthogonal DCT-II matrix of order n (cached, read-only)."""
    if n < 1:
        raise InvalidDimensionError(f"DCT order must be positive, got {n}")
    c = _DCT_CACHE.get(n)
    if c is None:
        i = np.arange(n).reshape(-1, 1)
        j = np.arange(n).reshape(1, -1)
        c = np.cos((j + 0.5) * np.pi * i / n)
        c[0] *= np.sqrt(1.0 / n)
        c[1:] *= np.sqrt(2.0 / n)
        c.setflags(write=False)
        _DCT_CACHE[n] = c
    return c


def _check_2d(x, name):
    x = np.asarray(x, dtype=float)
    if x.ndim != 2 or x.size == 0:
        raise InvalidDimensionError(f"{name} must be a nonempty 2D array, got shape {x.shape}")
    return x


def dct2(x):
    """2D DCT coefficients C_N @ X @ C_M.T."""
    x = _check_2d(x, "dct2 input")
    n, m = x.shape
    return build_dct_matrix(n) @ x @ build_dct_matrix(m).T


def idct2(coeffs):
    """Exact inverse of dct2 (the transform is orthogonal)."""
    coeffs = _check_2d(coeffs, "idct2 input")
    n, m = coeffs.shape
    return build_dct_matrix(n).T @ coeffs @ build_dct_matrix(m)


@dataclass
class PatchStack:
    """All overlapping p x p windows of an image, one window per column.

    columns is p^2 x L with L = (N-p+1)(M-p+1).  Column l holds window
    (i, j) = divmod(l, M-p+1) flattened in row-major order, i.e. patches are
    ordered row-major by their top-left corner.
    """

    patch_size: int
    source_dims: tuple
    columns: np.ndarray


def extract_patches(x, p):
    x = _check_2d(x, "extract_patches input")
    n, m = x.shape
    if p < 1:
        raise InvalidDimensionError(f"patch size must be positive, got {p}")
    if p > min(n, m):
        raise ScaleTooLargeError(f"patch size {p} exceeds image extent {min(n, m)}")
    view = sliding_window_view(x, (p, p))
    ni, nj = view.shape[:2]
    cols = view.reshape(ni * nj, p * p).T.copy()
    return PatchStack(patch_size=p, source_dims=(n, m), columns=cols)


def fold_patches(stack, dims):
    """Adjoint of extract_patches: add every patch entry back to its pixel.

    Overlap counts accumulate; no averaging, so <extract(X), P> == <X, fold(P)>.
    """
    n, m = dims
    p = stack.patch_size
    ni, nj = n - p + 1, m - p + 1
    if ni < 1 or nj < 1 or stack.columns.shape != (p * p, ni * nj):
        raise InvalidDimensionError(
            f"patch stack {stack.columns.shape} inconsistent with dims {dims} at p={p}")
    patches = stack.columns.T.reshape(ni, nj, p, p)
    out = np.zeros((n, m))
    # p^2 shifted slab additions; cheaper than touching patches one by one
    for a in range(p):
        for b in range(p):
            out[a:a + ni, b:b + nj] += patches[:, :, a, b]
    return out


@dataclass
class FrequencyMask:
    """High-pass selector: zero on the q x q low-frequency block, one elsewhere."""

    scale: int
    cutoff: int
    entries: np.ndarray


def build_freq_mask(p, q):
    if p < 1:
        raise InvalidDimensionError(f"mask size must be positive, got {p}")
    if not 1 <= q <= p:
        raise InvalidCutoffError(f"cutoff must satisfy 1 <= q <= {p}, got {q}")
    entries = np.ones((p, p))
    entries[:q, :q] = 0.0
    return FrequencyMask(scale=p, cutoff=q, entries=entries)

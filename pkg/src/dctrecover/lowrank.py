"""Singular-value machinery: nuclear norms and the shrinkage operators."""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, InvalidRankError


@dataclass
class SvdFactors:
    u: np.ndarray       # N x k, orthonormal columns
    sigma: np.ndarray   # k nonincreasing nonnegative values
    v: np.ndarray       # M x k, orthonormal columns


def svd(x):
    """Thin SVD with factors arranged so u @ diag(sigma) @ v.T reconstructs x."""
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise InvalidInputError("SVD input contains non-finite entries")
    u, s, vh = np.linalg.svd(x, full_matrices=False)
    return SvdFactors(u=u, sigma=s, v=vh.T)


def nuclear_norm(x):
    return float(svd(x).sigma.sum())


def _check_rank(r, k):
    if not 0 <= r <= k:
        raise InvalidRankError(f"rank must satisfy 0 <= r <= {k}, got {r}")


def truncated_nuclear_norm(x, r):
    """Sum of all but the r largest singular values."""
    f = svd(x)
    _check_rank(r, len(f.sigma))
    return float(f.sigma[r:].sum())


def _shrunk_factors(x, r, tau):
    """Shared core: keep the top r singular values, soft-shrink the rest.

    Returns (matrix, shrunk sigma); the sigma of the output matrix equals the
    returned vector exactly, which solver loops exploit to avoid a second SVD.
    """
    if tau < 0:
        raise InvalidInputError(f"shrinkage amount must be nonnegative, got {tau}")
    x = np.asarray(x, dtype=float)
    if r >= min(x.shape):
        # every singular value is kept, so the operator is the identity;
        # skip the SVD roundtrip and its floating-point noise
        _check_rank(r, min(x.shape))
        if not np.all(np.isfinite(x)):
            raise InvalidInputError("SVD input contains non-finite entries")
        return x.copy(), None
    f = svd(x)
    _check_rank(r, len(f.sigma))
    s = f.sigma.copy()
    s[r:] = np.maximum(s[r:] - tau, 0.0)
    return (f.u * s) @ f.v.T, s


def prox_truncated_nuclear(x, r, tau):
    """Proximal operator of tau * (sum of singular values beyond the top r)."""
    out, _ = _shrunk_factors(x, r, tau)
    return out


def svt_shrink(x, tau):
    """Soft-threshold every singular value by tau (the r = 0 special case)."""
    out, _ = _shrunk_factors(x, 0, tau)
    return out

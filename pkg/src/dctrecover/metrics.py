"""PSNR and SSIM on [0, 255] images."""

import math
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import gaussian_filter

from .errors import InvalidDimensionError


@dataclass
class QualityReport:
    psnr_db: float
    ssim: float
    missing_ratio: float
    method: str
    seconds: float


def _pair(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 2 or x.size == 0:
        raise InvalidDimensionError(f"images must share a nonempty 2D shape, got {x.shape} vs {y.shape}")
    return x, y


def psnr(x, y):
    """10*log10(255^2/MSE) over all pixels; inf for identical images."""
    x, y = _pair(x, y)
    mse = float(np.mean((x - y) ** 2))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(255.0 ** 2 / mse)


# Standard SSIM constants for 8-bit range.
_K1, _K2, _L = 0.01, 0.03, 255.0
_SIGMA = 1.5
_RADIUS = 5   # 11x11 window


def _win_mean(a):
    # truncate=3.5 sigma gives exactly the 11-tap kernel at sigma 1.5
    return gaussian_filter(a, sigma=_SIGMA, truncate=_RADIUS / _SIGMA, mode="reflect")


def ssim(x, y):
    """Mean local SSIM, 11x11 Gaussian window (sigma 1.5), K1/K2 = 0.01/0.03.

    Border pixels whose window leaves the image are cropped from the mean,
    matching the usual Gaussian-weighted reference implementation.
    """
    x, y = _pair(x, y)
    if min(x.shape) < 2 * _RADIUS + 1:
        raise InvalidDimensionError(f"SSIM needs images at least 11 pixels per side, got {x.shape}")
    c1 = (_K1 * _L) ** 2
    c2 = (_K2 * _L) ** 2
    mx = _win_mean(x)
    my = _win_mean(y)
    vx = _win_mean(x * x) - mx * mx
    vy = _win_mean(y * y) - my * my
    cxy = _win_mean(x * y) - mx * my
    smap = ((2.0 * mx * my + c1) * (2.0 * cxy + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2))
    r = _RADIUS
    return float(np.mean(smap[r:-r, r:-r]))

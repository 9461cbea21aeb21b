"""Seeded observation masks and image corruption.

Two patterns: "random" drops exactly round(phi*N*M) uniformly chosen pixels
under the stated seed; "text-overlay" rasterizes a fixed pangram in a 5x7
block font scaled to the image (the classic text-removal corruption, so seed
and ratio do not apply).
"""

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError, InsufficientDataError, InvalidDimensionError
from ..solver import ObservedImage

PATTERNS = ("random", "text-overlay")


@dataclass
class MaskSpec:
    missing_ratio: float
    seed: int = 0
    pattern: str = "random"


_FONT = {
    'A': ("01110", "10001", "10001", "11111", "10001", "10001", "10001"),
    'B': ("11110", "10001", "10001", "11110", "10001", "10001", "11110"),
    'C': ("01110", "10001", "10000", "10000", "10000", "10001", "01110"),
    'D': ("11100", "10010", "10001", "10001", "10001", "10010", "11100"),
    'E': ("11111", "10000", "10000", "11110", "10000", "10000", "11111"),
    'F': ("11111", "10000", "10000", "11110", "10000", "10000", "10000"),
    'G': ("01110", "10001", "10000", "10111", "10001", "10001", "01111"),
    'H': ("10001", "10001", "10001", "11111", "10001", "10001", "10001"),
    'I': ("01110", "00100", "00100", "00100", "00100", "00100", "01110"),
    'J': ("00111", "00010", "00010", "00010", "00010", "10010", "01100"),
    'K': ("10001", "10010", "10100", "11000", "10100", "10010", "10001"),
    'L': ("10000", "10000", "10000", "10000", "10000", "10000", "11111"),
    'M': ("10001", "11011", "10101", "10101", "10001", "10001", "10001"),
    'N': ("10001", "10001", "11001", "10101", "10011", "10001", "10001"),
    'O': ("01110", "10001", "10001", "10001", "10001", "10001", "01110"),
    'P': ("11110", "10001", "10001", "11110", "10000", "10000", "10000"),
    'Q': ("01110", "10001", "10001", "10001", "10101", "10010", "01101"),
    'R': ("11110", "10001", "10001", "11110", "10100", "10010", "10001"),
    'S': ("01111", "10000", "10000", "01110", "00001", "00001", "11110"),
    'T': ("11111", "00100", "00100", "00100", "00100", "00100", "00100"),
    'U': ("10001", "10001", "10001", "10001", "10001", "10001", "01110"),
    'V': ("10001", "10001", "10001", "10001", "10001", "01010", "00100"),
    'W': ("10001", "10001", "10001", "10101", "10101", "11011", "10001"),
    'X': ("10001", "10001", "01010", "00100", "01010", "10001", "10001"),
    'Y': ("10001", "10001", "01010", "00100", "00100", "00100", "00100"),
    'Z': ("11111", "00001", "00010", "00100", "01000", "10000", "11111"),
    ' ': ("00000", "00000", "00000", "00000", "00000", "00000", "00000"),
}
_PANGRAM = "THE QUICK BROWN FOX JUMPS OVER THE LAZY DOG "


def _text_mask(n, m):
    mask = np.ones((n, m), dtype=bool)
    scale = max(1, round(min(n, m) / 128))
    advance, leading, pad = 6 * scale, 10 * scale, 2 * scale
    k = 0
    row = pad
    while row + 7 * scale <= n - pad:
        col = pad
        while col + 5 * scale <= m - pad:
            glyph = _FONT[_PANGRAM[k % len(_PANGRAM)]]
            k += 1
            for r in range(7):
                for c in range(5):
                    if glyph[r][c] == "1":
                        mask[row + r * scale: row + (r + 1) * scale,
                             col + c * scale: col + (c + 1) * scale] = False
            col += advance
        row += leading
    return mask


def gen_mask(dims, spec):
    """Boolean observation mask (True = observed) for the given pattern."""
    n, m = int(dims[0]), int(dims[1])
    if n < 1 or m < 1:
        raise InvalidDimensionError(f"mask dims must be positive, got {(n, m)}")
    if spec.pattern not in PATTERNS:
        raise ConfigError(f"pattern must be one of {PATTERNS}, got {spec.pattern!r}")
    phi = float(spec.missing_ratio)
    if phi >= 1.0:
        raise InsufficientDataError(f"missing_ratio must be < 1, got {phi}")
    if phi < 0.0:
        raise ConfigError(f"missing_ratio must be nonnegative, got {phi}")
    if spec.pattern == "text-overlay":
        return _text_mask(n, m)
    n_missing = int(np.floor(phi * n * m + 0.5))
    mask = np.ones(n * m, dtype=bool)
    rng = np.random.default_rng(spec.seed)
    mask[rng.choice(n * m, size=n_missing, replace=False)] = False
    return mask.reshape(n, m)


def corrupt(image, mask):
    """Zero the unobserved pixels and bundle with the mask.

    A 2D mask applied to a (3, N, M) image masks every channel the same way.
    """
    image = np.asarray(image, dtype=float)
    mask = np.asarray(mask, dtype=bool)
    if image.ndim == 3 and image.shape[0] == 3 and mask.ndim == 2:
        mask = np.broadcast_to(mask, image.shape).copy()
    if image.shape != mask.shape:
        raise InvalidDimensionError(f"image {image.shape} and mask {mask.shape} do not align")
    return ObservedImage(image, mask)

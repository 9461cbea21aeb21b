"""8-bit image files (PGM, PPM, PNG) as float arrays in [0, 255].

Grayscale loads as (N, M); RGB loads channel-first as (3, N, M). Anything
that is not 8 bits per sample is rejected, so a save/load round trip is
lossless.
"""

import numpy as np
from PIL import Image as _PilImage

from ..errors import InvalidDimensionError

_GRAY_EXTS = (".pgm", ".png")
_COLOR_EXTS = (".ppm", ".png")
_HIGH_DEPTH_MODES = ("I", "I;16", "I;16B", "I;16L", "I;16N", "F")


def load_image(path):
    path = str(path)
    with _PilImage.open(path) as img:
        img.load()
        if img.mode in _HIGH_DEPTH_MODES:
            raise OSError(f"unsupported bit depth (want 8-bit samples): {path}")
        if img.mode == "1":
            img = img.convert("L")
        elif img.mode == "P":
            img = img.convert("RGB")
        if img.mode == "L":
            return np.asarray(img, dtype=float)
        if img.mode == "RGB":
            return np.asarray(img, dtype=float).transpose(2, 0, 1)
        raise OSError(f"unsupported image mode {img.mode!r}: {path}")


def _ext(path):
    path = str(path)
    dot = path.rfind(".")
    return path[dot:].lower() if dot >= 0 else ""


def save_image(image, path):
    """Clip to [0, 255], round half away from zero, write 8-bit file."""
    image = np.asarray(image, dtype=float)
    path = str(path)
    # values are nonnegative after the clip, so floor(x + 0.5) is half-away
    arr = np.floor(np.clip(image, 0.0, 255.0) + 0.5).astype(np.uint8)
    ext = _ext(path)
    if image.ndim == 2:
        if ext not in _GRAY_EXTS:
            raise OSError(f"grayscale images go to .pgm or .png, not {ext!r}: {path}")
        pil = _PilImage.fromarray(arr, mode="L")
    elif image.ndim == 3 and image.shape[0] == 3:
        if ext not in _COLOR_EXTS:
            raise OSError(f"color images go to .ppm or .png, not {ext!r}: {path}")
        pil = _PilImage.fromarray(arr.transpose(1, 2, 0), mode="RGB")
    else:
        raise InvalidDimensionError(f"expected (N, M) or (3, N, M) image, got shape {image.shape}")
    pil.save(path)


def save_mask(mask, path):
    """Observation mask as a grayscale file: 255 = observed, 0 = missing."""
    mask = np.asarray(mask)
    if mask.ndim != 2:
        raise InvalidDimensionError(f"mask must be 2D, got shape {mask.shape}")
    save_image(np.where(mask, 255.0, 0.0), path)


def load_mask(path):
    arr = load_image(path)
    if arr.ndim != 2:
        raise OSError(f"mask file must be grayscale: {path}")
    return arr >= 128.0

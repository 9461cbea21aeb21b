"""Reproducibility surface: image files, masks, config, benchmark, CLI."""

from .bench import (METHODS, AggregateRow, BenchResult, BenchRow, cell_seed,
                    run_bench, to_gray)
from .config import load_config, parse_scales
from .image_io import load_image, load_mask, save_image, save_mask
from .masks import PATTERNS, MaskSpec, corrupt, gen_mask

__all__ = [
    "METHODS", "AggregateRow", "BenchResult", "BenchRow", "cell_seed",
    "run_bench", "to_gray", "load_config", "parse_scales", "load_image",
    "load_mask", "save_image", "save_mask", "PATTERNS", "MaskSpec",
    "corrupt", "gen_mask",
]

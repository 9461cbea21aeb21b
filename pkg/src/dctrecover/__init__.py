"""Image recovery from heavily undersampled pixels.

Truncated-nuclear-norm completion coupled with multi-scale DCT smoothness,
plus the SVT / LTV+nuclear / DCT-only baselines, quality metrics, and a
seeded benchmark harness.
"""

from .errors import (ConfigError, DivergenceError, InsufficientDataError,
                     InvalidCutoffError, InvalidDimensionError,
                     InvalidInputError, InvalidRankError, ScaleTooLargeError)
from .lowrank import (SvdFactors, nuclear_norm, prox_truncated_nuclear, svd,
                      svt_shrink, truncated_nuclear_norm)
from .metrics import QualityReport, psnr, ssim
from .regularizers import (ScaleSpec, dct_norm_global, dct_norm_gradient,
                           dct_norm_local, dct_norm_multiscale,
                           freq_coupling_gradient, freq_coupling_norm,
                           theorem1_operators, tv_linear_gradient,
                           tv_norm_aniso, tv_norm_iso, tv_norm_linear)
from .solver import (ObservedImage, RecoveryConfig, SolveTrace,
                     default_scales, default_step_size, default_svt_schedule,
                     objective_value, recover, recover_color, recover_dct_only,
                     recover_ltvnn, recover_svt, solve_inner)
from .transform import (FrequencyMask, PatchStack, build_dct_matrix,
                        build_freq_mask, dct2, extract_patches, fold_patches,
                        idct2)
from . import harness

__version__ = "0.1.0"

__all__ = [
    "ConfigError", "DivergenceError", "InsufficientDataError",
    "InvalidCutoffError", "InvalidDimensionError", "InvalidInputError",
    "InvalidRankError", "ScaleTooLargeError",
    "SvdFactors", "nuclear_norm", "prox_truncated_nuclear", "svd",
    "svt_shrink", "truncated_nuclear_norm",
    "QualityReport", "psnr", "ssim",
    "ScaleSpec", "dct_norm_global", "dct_norm_gradient", "dct_norm_local",
    "dct_norm_multiscale", "freq_coupling_gradient", "freq_coupling_norm",
    "theorem1_operators", "tv_linear_gradient", "tv_norm_aniso",
    "tv_norm_iso", "tv_norm_linear",
    "ObservedImage", "RecoveryConfig", "SolveTrace", "default_scales",
    "default_step_size", "default_svt_schedule", "objective_value",
    "recover", "recover_color", "recover_dct_only", "recover_ltvnn",
    "recover_svt", "solve_inner",
    "FrequencyMask", "PatchStack", "build_dct_matrix", "build_freq_mask",
    "dct2", "extract_patches", "fold_patches", "idct2",
    "harness", "__version__",
]

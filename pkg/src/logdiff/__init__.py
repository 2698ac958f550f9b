"""Wavelet Bayesian shrinkage for regression with long-memory ARFIMA errors."""

from .arfima import ArfimaSpec, autocovariance, frac_diff_coeffs, sample_acf, simulate
from .errors import DataError, DomainError
from .pipeline import denoise_direct, denoise_logdiff, difference, initial_value, integrate
from .shrinkage import ShrinkageConfig, apply_rule, estimate_sigma, logistic_shrink, universal_soft
from .wavelet import WaveletDecomposition, WaveletFilter, dwt, dwt_matrix, get_filter, idwt

__all__ = [
    "ArfimaSpec",
    "DataError",
    "DomainError",
    "ShrinkageConfig",
    "WaveletDecomposition",
    "WaveletFilter",
    "apply_rule",
    "autocovariance",
    "denoise_direct",
    "denoise_logdiff",
    "difference",
    "dwt",
    "dwt_matrix",
    "estimate_sigma",
    "frac_diff_coeffs",
    "get_filter",
    "idwt",
    "initial_value",
    "integrate",
    "logistic_shrink",
    "sample_acf",
    "simulate",
    "universal_soft",
]

"""Signal estimators: Log-Diff and the two direct wavelet baselines.

Log-Diff differences the ``2**J + 1`` observations, denoises the ``2**J``
increments in the wavelet domain, and integrates back starting from the
average of y[0:20]. The direct estimators denoise the raw
``2**J`` observations.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DataError
from .shrinkage import ShrinkageConfig, apply_rule
from .wavelet import WaveletFilter, dwt, get_filter, idwt

ANCHOR_COUNT = 20
MIN_LOGDIFF_J = 3
# levels coarser than this are left in the scaling block and never shrunk; a
# per-level MAD over 1..16 coefficients measures signal, not noise
DEFAULT_COARSE_LEVEL = 5


@dataclass
class EstimatorOutput:
    f_hat: np.ndarray
    method: str
    config: ShrinkageConfig
    filter: str
    levels: int | None = None
    extras: dict = field(default_factory=dict, repr=False)


def as_finite(y, name: str = "y") -> np.ndarray:
    """1-d float array; raises on the first non-finite entry."""
    arr = np.asarray(y, dtype=float)
    if arr.ndim != 1:
        raise DataError(f"{name} must be one-dimensional")
    bad = np.flatnonzero(~np.isfinite(arr))
    if bad.size:
        raise DataError(f"{name} has a non-finite value at index {bad[0]}: {arr[bad[0]]}")
    return arr


def _is_pow2(n: int) -> bool:
    return n >= 1 and not n & (n - 1)


def resolve_levels(n: int, levels: int | None = None, coarse_level: int | None = DEFAULT_COARSE_LEVEL) -> int:
    """Number of detail levels for a length-``n`` transform.

    An explicit ``levels`` wins. Otherwise levels ``coarse_level .. J-1`` are
    decomposed (at least one); ``coarse_level=None`` or 0 means full depth.
    """
    J = n.bit_length() - 1
    if levels is not None:
        return levels
    if not coarse_level:
        return J
    return max(1, J - coarse_level)


def difference(y) -> np.ndarray:
    """``z_i = y_{i+1} - y_i``."""
    y = as_finite(y)
    if y.size < 2:
        raise DataError("need at least 2 observations to difference")
    return y[1:] - y[:-1]


def integrate(g_hat, f1: float) -> np.ndarray:
    """Cumulative sum of increments anchored at ``f1``; output is one longer."""
    g = as_finite(g_hat, "g_hat")
    return f1 + np.concatenate([[0.0], np.cumsum(g)])


def initial_value(y, count: int = ANCHOR_COUNT) -> float:
    """Mean of the first ``count`` observations."""
    y = as_finite(y)
    if y.size < count:
        raise DataError(f"need at least {count} observations for the anchor, got {y.size}")
    return float(np.mean(y[:count]))


def denoise_logdiff(
    y,
    filter: str | WaveletFilter = "d4",
    config: ShrinkageConfig = ShrinkageConfig(),
    levels: int | None = None,
    coarse_level: int | None = DEFAULT_COARSE_LEVEL,
) -> EstimatorOutput:
    """Difference, shrink the increments in the wavelet domain, integrate back."""
    y = as_finite(y)
    n = y.size - 1
    if not _is_pow2(n) or n < 2**MIN_LOGDIFF_J:
        raise DataError(f"Log-Diff needs 2**J + 1 observations with J >= {MIN_LOGDIFF_J}, got {y.size}")
    filt = get_filter(filter)
    z = difference(y)
    levels = resolve_levels(n, levels, coarse_level)
    decomp = dwt(z, filt, levels)
    g_hat = idwt(apply_rule(decomp, config, n))
    f1 = initial_value(y)
    return EstimatorOutput(integrate(g_hat, f1), "logdiff", config, filt.name, levels, {"g_hat": g_hat, "f1": f1})


def denoise_direct(
    y,
    rule: str | None = None,
    filter: str | WaveletFilter = "d4",
    config: ShrinkageConfig = ShrinkageConfig(),
    levels: int | None = None,
    coarse_level: int | None = DEFAULT_COARSE_LEVEL,
) -> EstimatorOutput:
    """Shrink the wavelet coefficients of the observations themselves.

    ``rule`` overrides ``config.rule`` when given.
    """
    y = as_finite(y)
    if not _is_pow2(y.size) or y.size < 2:
        raise DataError(f"direct estimators need 2**J observations, got {y.size}")
    if rule is not None:
        config = config.with_rule(rule)
    filt = get_filter(filter)
    levels = resolve_levels(y.size, levels, coarse_level)
    f_hat = idwt(apply_rule(dwt(y, filt, levels), config, y.size))
    return EstimatorOutput(f_hat, config.rule, config, filt.name, levels)

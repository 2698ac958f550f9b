"""Fractionally integrated noise, ARFIMA(0, d, 0).

The error model is ``(1 - B)**d e_i = a_i`` with iid Gaussian innovations of
standard deviation ``sigma_a``. Sampling is exact: Durbin-Levinson recursion
on the closed-form autocovariance, O(n**2) time and O(n) memory.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import gammaln, gammasgn

from .errors import DataError, DomainError

SEED_MAX = 2**64 - 1


@dataclass(frozen=True)
class ArfimaSpec:
    """Parameters of an ARFIMA(0, d, 0) noise generator.

    ``d`` may lie anywhere in (-0.5, 0.5): the long-memory regime is
    0 < d < 0.5, d = 0 is white noise and negative values describe
    antipersistent (e.g. differenced) processes.
    """

    d: float
    sigma_a: float = 1.0
    n: int = 1
    seed: int = 0

    def __post_init__(self):
        _check_d(self.d)
        if not (math.isfinite(self.sigma_a) and self.sigma_a > 0):
            raise DomainError(f"sigma_a must be positive, got {self.sigma_a}")
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"n must be a positive integer, got {self.n}")
        if int(self.seed) != self.seed or not 0 <= self.seed <= SEED_MAX:
            raise DomainError(f"seed must be an integer in [0, 2**64), got {self.seed}")

    @property
    def long_memory(self) -> bool:
        return 0 < self.d < 0.5


@dataclass(frozen=True)
class AcfSeries:
    values: np.ndarray

    @property
    def maxlag(self) -> int:
        return self.values.size - 1

    def rows(self):
        return ((k, float(v)) for k, v in enumerate(self.values))


def _check_d(d: float) -> None:
    if not math.isfinite(d):
        raise DomainError(f"d must be finite, got {d}")
    if not -0.5 < d < 0.5:
        raise DomainError(f"d must lie in the open interval (-0.5, 0.5), got {d}")


def frac_diff_coeffs(d: float, count: int) -> np.ndarray:
    """Coefficients ``b_0 .. b_count`` of the expansion of ``(1 - B)**d``.

    Uses the recurrence ``b_j = b_{j-1} (j - 1 - d) / j``, equal to the
    gamma ratio ``Gamma(j - d) / (Gamma(j + 1) Gamma(-d))``.
    """
    if not math.isfinite(d):
        raise DomainError(f"d must be finite, got {d}")
    if count < 0:
        raise ValueError("count must be non-negative")
    j = np.arange(1, count + 1, dtype=float)
    return np.concatenate([[1.0], np.cumprod((j - 1 - d) / j)])


def frac_diff(x, d: float, count: int | None = None) -> np.ndarray:
    """Apply the truncated filter ``sum_{j<=count} b_j(d) B**j`` to ``x``.

    Values before the start of ``x`` are taken as zero.
    """
    x = np.asarray(x, dtype=float)
    count = x.size - 1 if count is None else count
    b = frac_diff_coeffs(d, count)
    return np.convolve(x, b)[: x.size]


def _signed_gamma_ratio(num, den):
    """``prod Gamma(num_i) / prod Gamma(den_i)`` evaluated in log space."""
    num = [np.asarray(a, dtype=float) for a in num]
    den = [np.asarray(a, dtype=float) for a in den]
    log = sum(gammaln(a) for a in num) - sum(gammaln(a) for a in den)
    sign = np.prod([gammasgn(a) for a in num], axis=0) * np.prod([gammasgn(a) for a in den], axis=0)
    return sign * np.exp(log)


def variance_inflation(d: float) -> float:
    """``gamma(0) / sigma_a**2 = Gamma(1 - 2d) / Gamma(1 - d)**2``."""
    _check_d(d)
    return float(_signed_gamma_ratio([1 - 2 * d], [1 - d, 1 - d]))


def autocovariance(spec: ArfimaSpec | float, maxlag: int, sigma_a: float | None = None) -> np.ndarray:
    """Autocovariances ``gamma(0) .. gamma(maxlag)``.

    ``gamma(k) = sigma_a**2 Gamma(1-2d) Gamma(k+d) / (Gamma(d) Gamma(1-d) Gamma(k+1-d))``.
    Accepts either an :class:`ArfimaSpec` or a bare ``d`` (with optional
    ``sigma_a``, default 1).
    """
    if isinstance(spec, ArfimaSpec):
        d, s = spec.d, spec.sigma_a
    else:
        d, s = float(spec), 1.0 if sigma_a is None else sigma_a
    _check_d(d)
    if maxlag < 0:
        raise ValueError("maxlag must be non-negative")
    var = s**2 * variance_inflation(d)
    if d == 0:
        out = np.zeros(maxlag + 1)
        out[0] = var
        return out
    k = np.arange(maxlag + 1, dtype=float)
    # Gamma(1-d)/Gamma(d) * Gamma(k+d)/Gamma(k+1-d); at k=0 this is exactly 1
    ratio = _signed_gamma_ratio([k + d, np.full_like(k, 1 - d)], [np.full_like(k, d), k + 1 - d])
    ratio[0] = 1.0
    return var * ratio


def acf(d: float, maxlag: int) -> np.ndarray:
    """Theoretical autocorrelations at lags 0..maxlag."""
    g = autocovariance(d, maxlag)
    return g / g[0]


def increment_acf(d: float, maxlag: int) -> np.ndarray:
    """Theoretical autocorrelations of the first differences ``e_{i+1} - e_i``."""
    g = autocovariance(d, maxlag + 1)
    lag = np.arange(maxlag + 1)
    upper = g[lag + 1]
    lower = g[np.abs(lag - 1)]
    cov = 2 * g[lag] - upper - lower
    return cov / cov[0]


def durbin_levinson(gamma: np.ndarray, innovations: np.ndarray) -> np.ndarray:
    """Colour standard-normal ``innovations`` (shape ``(..., n)``) to autocovariance ``gamma``.

    Each row is built one sample at a time from its best linear predictor
    plus the scaled innovation, which gives an exact Gaussian draw.
    """
    z = np.atleast_2d(np.asarray(innovations, dtype=float))
    n = z.shape[-1]
    if gamma.size < n:
        raise ValueError("need autocovariances up to lag n - 1")
    # time-reversed, sample-major buffer: rev[n-1-t] holds x_t for every row, so
    # the predictor window x_{t-1}, ..., x_0 is the contiguous slice rev[n-t:]
    rev = np.empty((n, z.shape[0]))
    phi = np.zeros(n)  # phi[k-1] = phi_{t,k}
    v = gamma[0]
    rev[n - 1] = math.sqrt(v) * z[:, 0]
    for t in range(1, n):
        prev = phi[: t - 1]
        pacf = (gamma[t] - prev @ gamma[t - 1 : 0 : -1]) / v
        phi[: t - 1] = prev - pacf * prev[::-1]
        phi[t - 1] = pacf
        v *= 1.0 - pacf * pacf
        if v <= 0:
            raise np.linalg.LinAlgError("autocovariance is not positive definite")
        rev[n - 1 - t] = phi[:t] @ rev[n - t :] + math.sqrt(v) * z[:, t]
    out = rev[::-1].T.copy()
    return out if np.ndim(innovations) > 1 else out[0]


def simulate(spec: ArfimaSpec) -> np.ndarray:
    """Exact stationary Gaussian sample ``e_1 .. e_n``; deterministic in ``spec.seed``."""
    return simulate_many(spec.d, spec.sigma_a, spec.n, [spec.seed])[0]


def simulate_many(d: float, sigma_a: float, n: int, seeds: Sequence[int]) -> np.ndarray:
    """One series per seed, shape ``(len(seeds), n)``, sharing a single recursion."""
    specs = [ArfimaSpec(d, sigma_a, n, int(s)) for s in seeds]
    z = np.stack([np.random.default_rng(s.seed).standard_normal(n) for s in specs])
    return durbin_levinson(autocovariance(d, n - 1, sigma_a), z)


def sample_acf(series, maxlag: int, mean: float | None = None) -> AcfSeries:
    """Sample autocorrelations at lags 0..maxlag.

    ``rho(k) = sum_t (x_t - m)(x_{t+k} - m) / sum_t (x_t - m)**2`` with ``m``
    the sample mean, or the supplied ``mean`` when the process mean is known.
    Under long memory the sample-mean version is biased downward by roughly
    ``Var(mean) / gamma(0)``, which decays only like ``n**(2d - 1)``.
    """
    x = np.asarray(series, dtype=float)
    if x.ndim != 1 or x.size < 2:
        raise DataError("need a one-dimensional series of length >= 2")
    if not 0 <= maxlag < x.size:
        raise DataError(f"maxlag must lie in 0..{x.size - 1}, got {maxlag}")
    x = x - (x.mean() if mean is None else mean)
    den = float(x @ x)
    if den == 0:
        raise DataError("sample ACF undefined for a constant series")
    vals = np.array([x[: x.size - k] @ x[k:] for k in range(maxlag + 1)]) / den
    vals[0] = 1.0
    return AcfSeries(vals)

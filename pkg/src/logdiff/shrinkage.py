"""Coefficient-wise estimation rules for wavelet detail blocks.

Two rules are provided:

* ``logistic``: the posterior mean of a coefficient under a prior mixing a
  point mass at zero (weight ``alpha``) with a zero-centred logistic density
  of scale ``tau``, observed in Gaussian noise of level-specific scale.
* ``universal``: level-dependent soft thresholding at ``sigma_j * sqrt(2 ln n)``.

Scaling (coarse) coefficients are never modified.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from functools import lru_cache
from typing import Callable, Union

import numpy as np

from .errors import DataError, DomainError
from .wavelet import WaveletDecomposition

MAD_CONSTANT = 0.6745
RULES = ("logistic", "universal")
SIGMA_POLICIES = ("per-level-mad", "finest-level-mad")

SigmaPolicy = Union[str, float]


@dataclass(frozen=True)
class ShrinkageConfig:
    """Rule selection and hyperparameters.

    ``sigma_policy`` is ``"per-level-mad"``, ``"finest-level-mad"`` or a
    positive float giving a fixed noise scale for every level.
    """

    rule: str = "logistic"
    alpha: float = 0.8
    tau: float = 5.0
    quad_order: int = 64
    sigma_policy: SigmaPolicy = "per-level-mad"

    def __post_init__(self):
        if self.rule not in RULES:
            raise ValueError(f"rule must be one of {RULES}, got {self.rule!r}")
        if not 0 < self.alpha < 1:
            raise DomainError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not (math.isfinite(self.tau) and self.tau > 0):
            raise DomainError(f"tau must be positive, got {self.tau}")
        if self.quad_order < 16 or self.quad_order % 2:
            raise ValueError(f"quad_order must be even and >= 16, got {self.quad_order}")
        parse_sigma_policy(self.sigma_policy)

    def with_rule(self, rule: str) -> ShrinkageConfig:
        return ShrinkageConfig(rule, self.alpha, self.tau, self.quad_order, self.sigma_policy)

    def to_dict(self) -> dict:
        return asdict(self)


def parse_sigma_policy(policy) -> SigmaPolicy:
    """Normalise ``policy``; accepts the policy names, a float, or ``"fixed:<sigma>"``."""
    if isinstance(policy, str):
        if policy in SIGMA_POLICIES:
            return policy
        if policy.startswith("fixed:"):
            policy = policy[len("fixed:") :]
        try:
            policy = float(policy)
        except ValueError:
            raise ValueError(
                f"sigma policy must be one of {SIGMA_POLICIES} or fixed:<sigma>, got {policy!r}"
            ) from None
    sigma = float(policy)
    if not (math.isfinite(sigma) and sigma > 0):
        raise DomainError(f"fixed sigma must be positive, got {sigma}")
    return sigma


def estimate_sigma(coeffs) -> float:
    """Median absolute deviation about the median, divided by 0.6745."""
    c = np.asarray(coeffs, dtype=float)
    if c.size == 0:
        raise DataError("cannot estimate noise scale from an empty block")
    return float(np.median(np.abs(c - np.median(c))) / MAD_CONSTANT)


def level_sigmas(decomp: WaveletDecomposition, policy: SigmaPolicy = "per-level-mad") -> dict[int, float]:
    """Noise scale for every detail level.

    A zero per-level estimate falls back to the finest-level estimate. A
    returned 0 means the level should be passed through unshrunk.
    """
    policy = parse_sigma_policy(policy)
    if not isinstance(policy, str):
        return {j: policy for j in decomp.level_indices}
    finest = estimate_sigma(decomp.details[-1])
    if policy == "finest-level-mad":
        return {j: finest for j in decomp.level_indices}
    out = {}
    for j, block in decomp.items():
        s = estimate_sigma(block)
        out[j] = s if s > 0 else finest
    return out


@lru_cache(maxsize=None)
def _hermite_raw(order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.hermite.hermgauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@lru_cache(maxsize=None)
def _hermite(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights for expectations under N(0, 1)."""
    x, w = _hermite_raw(order)
    nodes, weights = math.sqrt(2.0) * x, w / math.sqrt(math.pi)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def gaussian_expectation(integrand: Callable[[np.ndarray], np.ndarray], quad_order: int = 64) -> float:
    """``E[integrand(U)]`` for ``U ~ N(0, 1)`` by Gauss-Hermite quadrature."""
    nodes, weights = _hermite(quad_order)
    return float(weights @ integrand(nodes))


def logistic_log_density(theta, tau: float) -> np.ndarray:
    """Log of the zero-centred logistic density with scale ``tau``."""
    a = np.abs(np.asarray(theta, dtype=float)) / tau
    return -a - math.log(tau) - 2.0 * np.log1p(np.exp(-a))


def _slab_mode(a: np.ndarray, sigma: float, tau: float) -> np.ndarray:
    """Mode of ``h(theta) * phi((theta - a) / sigma)`` for ``a >= 0`` (bisection on [0, a])."""
    lo, hi = np.zeros_like(a), a.copy()
    for _ in range(64):
        mid = 0.5 * (lo + hi)
        up = -np.tanh(mid / (2 * tau)) / tau - (mid - a) / sigma**2 > 0
        lo = np.where(up, mid, lo)
        hi = np.where(up, hi, mid)
    return 0.5 * (lo + hi)


def _log_slab(theta, a, sigma: float, tau: float):
    return (
        logistic_log_density(theta, tau)
        - 0.5 * ((theta - a) / sigma) ** 2
        - math.log(sigma * math.sqrt(2 * math.pi))
    )


def _slab_nodes(a: np.ndarray, sigma: float, tau: float, quad_order: int):
    """Nodes ``theta`` and log-weights for ``int g(theta) h(theta) phi_sigma(theta - a) dtheta``.

    For ``sigma <= 2 tau`` a Gauss-Hermite rule centred on the integrand mode
    and scaled by its curvature (plain ``u = (theta - a) / sigma`` when
    ``tau >> sigma``). A narrower logistic factor defeats Gauss-Hermite, so
    for ``sigma > 2 tau`` a trapezoid rule with step ``tau / 2`` is used; the
    integrand is analytic in a strip of half-width ``pi tau``, which bounds
    its error near ``exp(-4 pi**2)``.
    """
    if sigma <= 2 * tau:
        x, weights = _hermite_raw(quad_order)
        mode = _slab_mode(a, sigma, tau)
        # 1 / cosh(u)**2 written as 4 e^{-2u} / (1 + e^{-2u})**2 to avoid overflow
        e = np.exp(-mode / tau)
        curvature = 4 * e / (1 + e) ** 2 / (2 * tau * tau) + 1 / sigma**2
        scale = math.sqrt(2.0) / np.sqrt(curvature)
        theta = mode[:, None] + scale[:, None] * x[None, :]
        log_w = np.log(weights)[None, :] + (x * x)[None, :] + np.log(scale)[:, None]
    else:
        lo = np.minimum(a - 9 * sigma, -40 * tau)
        hi = np.maximum(a + 9 * sigma, 40 * tau)
        count = int(np.ceil(np.max(hi - lo) / (0.5 * tau))) + 1
        t = np.linspace(0.0, 1.0, count)
        theta = lo[:, None] + (hi - lo)[:, None] * t[None, :]
        step = (hi - lo) / (count - 1)
        log_w = np.broadcast_to(np.log(step)[:, None], theta.shape)
    return theta, log_w + _log_slab(theta, a[:, None], sigma, tau)


def logistic_shrink(w, sigma: float, alpha: float = 0.8, tau: float = 5.0, quad_order: int = 64):
    """Posterior-mean shrinkage of empirical coefficient(s) ``w``.

    Numerator and denominator integrals share one set of quadrature nodes
    (see ``_slab_nodes``) and the ratio is assembled in log space, so large
    ``|w| / sigma`` cannot underflow the point-mass term. Odd in ``w`` by
    construction.
    """
    if not (math.isfinite(sigma) and sigma > 0):
        raise DomainError(f"sigma must be positive, got {sigma}")
    if not 0 < alpha < 1:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    if not tau > 0:
        raise DomainError(f"tau must be positive, got {tau}")
    w = np.asarray(w, dtype=float)
    if not np.all(np.isfinite(w)):
        raise DataError("coefficients must be finite")
    a = np.abs(w).ravel()

    theta, log_terms = _slab_nodes(a, sigma, tau, quad_order)
    peak = log_terms.max(axis=1)
    scaled = np.exp(log_terms - peak[:, None])
    slab_mass = scaled.sum(axis=1)
    slab_first_moment = (scaled * theta).sum(axis=1)

    log_point = math.log(alpha / sigma) - 0.5 * (a / sigma) ** 2 - 0.5 * math.log(2 * math.pi)
    den = np.exp(log_point - peak) + (1 - alpha) * slab_mass
    est = np.sign(w.ravel()) * (1 - alpha) * slab_first_moment / den
    return float(est[0]) if w.ndim == 0 else est.reshape(w.shape)


def soft_threshold(w, lam: float) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    return np.sign(w) * np.maximum(np.abs(w) - lam, 0.0)


def universal_threshold(sigma: float, n: int) -> float:
    return sigma * math.sqrt(2.0 * math.log(n))


def universal_soft(
    decomp: WaveletDecomposition, n: int | None = None, sigma_policy: SigmaPolicy = "per-level-mad"
) -> WaveletDecomposition:
    """Soft-threshold each detail level at ``sigma_j * sqrt(2 ln n)``."""
    n = decomp.n if n is None else n
    if n < 2:
        raise DataError("universal threshold needs n >= 2")
    sigmas = level_sigmas(decomp, sigma_policy)
    return decomp.map_details(lambda j, d: soft_threshold(d, universal_threshold(sigmas[j], n)))


def apply_rule(
    decomp: WaveletDecomposition, config: ShrinkageConfig = ShrinkageConfig(), n: int | None = None
) -> WaveletDecomposition:
    """Apply the configured rule to every detail block; scaling block untouched."""
    if config.rule == "universal":
        return universal_soft(decomp, n, config.sigma_policy)
    sigmas = level_sigmas(decomp, config.sigma_policy)

    def shrink(j, block):
        if sigmas[j] == 0:
            return block
        return logistic_shrink(block, sigmas[j], config.alpha, config.tau, config.quad_order)

    return decomp.map_details(shrink)

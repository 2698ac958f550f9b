"""Donoho-Johnstone test signals and SNR-based noise calibration.

Closed forms and knot/height tables follow Donoho & Johnstone (1994),
"Ideal spatial adaptation by wavelet shrinkage", Biometrika 81(3), as
distributed in WaveLab's MakeSignal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import arfima
from .errors import DomainError

NAMES = ("bumps", "blocks", "doppler", "heavisine")
DEFAULT_TARGET_SD = 7.0

_KNOTS = np.array([0.10, 0.13, 0.15, 0.23, 0.25, 0.40, 0.44, 0.65, 0.76, 0.78, 0.81])
_BLOCK_HEIGHTS = np.array([4, -5, 3, -4, 5, -4.2, 2.1, 4.3, -3.1, 2.1, -4.2])
_BUMP_HEIGHTS = np.array([4, 5, 3, 4, 5, 4.2, 2.1, 4.3, 3.1, 5.1, 4.2])
_BUMP_WIDTHS = np.array([0.005, 0.005, 0.006, 0.01, 0.01, 0.03, 0.01, 0.01, 0.005, 0.008, 0.005])


def blocks(x):
    # step taken as right-continuous so a grid point on a knot adds no extra level
    steps = np.heaviside(x[:, None] - _KNOTS[None, :], 1.0)
    return steps @ _BLOCK_HEIGHTS


def bumps(x):
    atoms = (1 + np.abs((x[:, None] - _KNOTS[None, :]) / _BUMP_WIDTHS[None, :])) ** -4
    return atoms @ _BUMP_HEIGHTS


def doppler(x):
    return np.sqrt(x * (1 - x)) * np.sin(2 * np.pi * 1.05 / (x + 0.05))


def heavisine(x):
    return 4 * np.sin(4 * np.pi * x) - np.sign(x - 0.3) - np.sign(0.72 - x)


_FUNCS = {"bumps": bumps, "blocks": blocks, "doppler": doppler, "heavisine": heavisine}


@dataclass(frozen=True)
class TestSignal:
    name: str
    samples: np.ndarray
    target_sd: float

    __test__ = False  # not a pytest class

    @property
    def sd(self) -> float:
        return float(np.std(self.samples, ddof=1))

    def __len__(self):
        return self.samples.size


def grid(n_plus_1: int) -> np.ndarray:
    """Equally spaced abscissae ``i / n_plus_1`` for ``i = 0 .. n_plus_1 - 1``."""
    return np.arange(n_plus_1) / n_plus_1


def rescale(samples, target_sd: float) -> np.ndarray:
    """Affine map to sample sd ``target_sd``, keeping the mean."""
    samples = np.asarray(samples, dtype=float)
    mean = samples.mean()
    return mean + (samples - mean) * (target_sd / np.std(samples, ddof=1))


def generate(name: str, n_plus_1: int, target_sd: float = DEFAULT_TARGET_SD) -> TestSignal:
    """Evaluate a test function on the uniform grid and rescale it."""
    key = name.lower()
    if key not in _FUNCS:
        raise ValueError(f"unknown test signal {name!r}; choose from {', '.join(NAMES)}")
    if n_plus_1 < 2:
        raise ValueError("need at least 2 grid points")
    if not target_sd > 0:
        raise DomainError(f"target_sd must be positive, got {target_sd}")
    raw = _FUNCS[key](grid(n_plus_1))
    return TestSignal(key, rescale(raw, target_sd), float(target_sd))


def calibrate_sigma_a(signal: TestSignal | np.ndarray, snr: float, d: float) -> float:
    """Innovation sd giving stationary noise sd equal to ``sd(signal) / snr``."""
    if not (snr > 0):
        raise DomainError(f"snr must be positive, got {snr}")
    samples = signal.samples if isinstance(signal, TestSignal) else np.asarray(signal, dtype=float)
    sd = float(np.std(samples, ddof=1))
    return sd / (snr * math.sqrt(arfima.variance_inflation(d)))

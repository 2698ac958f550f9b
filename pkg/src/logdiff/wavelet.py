"""Orthogonal periodic discrete wavelet transform (pyramidal algorithm).

Coefficients are laid out coarsest first: the scaling block, then detail
blocks from the coarsest level ``j0 = J - levels`` up to the finest level
``J - 1``. Detail block ``j`` holds ``2**j`` coefficients, so for a full
decomposition the flat vector is ``[s_0, d_0, d_1 (2), d_2 (4), ...]`` and
matches the row order of :func:`dwt_matrix`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np
from scipy import sparse

from ._filters import DAUBECHIES
from .errors import DataError

MAX_MATRIX_SIZE = 4096

_ALIASES = {"haar": "db1"}
# tap-count names, the other common convention (d4 is the 4-tap filter db2)
_TAP_ALIASES = {f"d{2 * k}": f"db{k}" for k in range(2, 11)}


@dataclass(frozen=True)
class WaveletFilter:
    """Orthonormal two-channel filter pair.

    The highpass taps follow the quadrature-mirror relation
    ``g[l] = (-1)**l * h[L-1-l]``.
    """

    name: str
    lowpass: np.ndarray = field(repr=False)

    def __post_init__(self):
        h = np.asarray(self.lowpass, dtype=float)
        if h.ndim != 1 or h.size < 2 or h.size % 2:
            raise ValueError("lowpass must be a 1-d tap sequence of even length")
        h.setflags(write=False)
        object.__setattr__(self, "lowpass", h)

    @property
    def highpass(self) -> np.ndarray:
        h = self.lowpass
        signs = np.where(np.arange(h.size) % 2 == 0, 1.0, -1.0)
        return signs * h[::-1]

    @property
    def length(self) -> int:
        return self.lowpass.size

    @property
    def vanishing_moments(self) -> int:
        return self.lowpass.size // 2

    def __eq__(self, other):
        if not isinstance(other, WaveletFilter):
            return NotImplemented
        return self.name == other.name and np.array_equal(self.lowpass, other.lowpass)

    def __hash__(self):
        return hash((self.name, self.lowpass.tobytes()))


def available_filters() -> list[str]:
    """Canonical names plus the tap-count aliases ``d4`` .. ``d20``."""
    return ["haar"] + list(DAUBECHIES) + list(_TAP_ALIASES)


def get_filter(name: str | WaveletFilter) -> WaveletFilter:
    """Look up a filter by name.

    ``dbN`` counts vanishing moments (``2N`` taps) while ``dM`` counts taps,
    so ``d4`` and ``db2`` are the same filter. ``haar`` is ``db1``.
    """
    if isinstance(name, WaveletFilter):
        return name
    key = _ALIASES.get(name.lower(), name.lower())
    key = _TAP_ALIASES.get(key, key)
    if key not in DAUBECHIES:
        raise ValueError(
            f"unknown wavelet filter {name!r}; choose from {', '.join(available_filters())}"
        )
    return WaveletFilter("haar" if key == "db1" else key, np.array(DAUBECHIES[key]))


def _log2_exact(n: int) -> int:
    if n < 1 or n & (n - 1):
        raise DataError(f"length must be a power of two, got {n}")
    return n.bit_length() - 1


@dataclass
class WaveletDecomposition:
    """Detail blocks (coarsest first), the coarse scaling block and provenance."""

    details: list[np.ndarray]
    scaling: np.ndarray
    filter: WaveletFilter
    n: int

    def __post_init__(self):
        self.details = [np.asarray(d, dtype=float) for d in self.details]
        self.scaling = np.asarray(self.scaling, dtype=float)
        self.validate()

    def validate(self) -> None:
        J = _log2_exact(self.n)
        levels = len(self.details)
        if not 1 <= levels <= J:
            raise DataError(f"need 1..{J} detail levels for n={self.n}, got {levels}")
        if self.scaling.shape != (2 ** (J - levels),):
            raise DataError(
                f"scaling block has {self.scaling.size} entries, expected {2 ** (J - levels)}"
            )
        for j, block in zip(self.level_indices, self.details):
            if block.shape != (2**j,):
                raise DataError(f"detail level {j} has {block.size} entries, expected {2**j}")

    @property
    def J(self) -> int:
        return self.n.bit_length() - 1

    @property
    def levels(self) -> int:
        return len(self.details)

    @property
    def coarsest_level(self) -> int:
        return self.J - self.levels

    @property
    def level_indices(self) -> range:
        return range(self.coarsest_level, self.J)

    def items(self) -> Iterator[tuple[int, np.ndarray]]:
        """Yield ``(level, block)`` pairs, coarsest first."""
        return zip(self.level_indices, self.details)

    def flat(self) -> np.ndarray:
        return np.concatenate([self.scaling, *self.details])

    @classmethod
    def from_flat(cls, coeffs, filter: WaveletFilter, levels: int) -> WaveletDecomposition:
        coeffs = np.asarray(coeffs, dtype=float)
        n = coeffs.size
        J = _log2_exact(n)
        start = 2 ** (J - levels)
        details = []
        for j in range(J - levels, J):
            details.append(coeffs[start : start + 2**j])
            start += 2**j
        return cls(details, coeffs[: 2 ** (J - levels)], filter, n)

    def map_details(self, fn: Callable[[int, np.ndarray], np.ndarray]) -> WaveletDecomposition:
        """Return a copy with each detail block replaced by ``fn(level, block)``."""
        return WaveletDecomposition(
            [np.asarray(fn(j, d.copy()), dtype=float) for j, d in self.items()],
            self.scaling.copy(),
            self.filter,
            self.n,
        )

    def energy(self) -> float:
        return float(np.sum(self.flat() ** 2))

    def rows(self) -> Iterator[tuple[str, int, int, float]]:
        """Serialisation rows ``(block, level, index, value)`` in layout order.

        The scaling block is tagged ``scaling`` and carries the coarsest level
        index; detail rows are tagged ``detail``.
        """
        for i, v in enumerate(self.scaling):
            yield "scaling", self.coarsest_level, i, float(v)
        for j, block in self.items():
            for i, v in enumerate(block):
                yield "detail", j, i, float(v)


def _window(m: int, length: int) -> np.ndarray:
    # index matrix of the periodised, decimated filter: row k reads a[(2k + l) mod m]
    return (2 * np.arange(m // 2)[:, None] + np.arange(length)[None, :]) % m


def _check_levels(n: int, levels: int | None) -> int:
    J = _log2_exact(n)
    if J < 1:
        raise DataError("need at least 2 samples")
    if levels is None:
        return J
    if not 1 <= levels <= J:
        raise DataError(f"levels must lie in 1..{J} for length {n}, got {levels}")
    return levels


def dwt(signal, filter: str | WaveletFilter = "d4", levels: int | None = None) -> WaveletDecomposition:
    """Forward transform of a length ``2**J`` signal; full depth by default."""
    x = np.asarray(signal, dtype=float)
    if x.ndim != 1:
        raise DataError("signal must be one-dimensional")
    filt = get_filter(filter)
    levels = _check_levels(x.size, levels)
    h, g = filt.lowpass, filt.highpass
    approx = x
    details = []
    for _ in range(levels):
        windows = approx[_window(approx.size, filt.length)]
        details.append(windows @ g)
        approx = windows @ h
    details.reverse()
    return WaveletDecomposition(details, approx, filt, x.size)


def idwt(decomp: WaveletDecomposition) -> np.ndarray:
    """Inverse of :func:`dwt`."""
    decomp.validate()
    h, g = decomp.filter.lowpass, decomp.filter.highpass
    approx = decomp.scaling
    for detail in decomp.details:
        m = 2 * approx.size
        idx = _window(m, h.size)
        contrib = approx[:, None] * h[None, :] + detail[:, None] * g[None, :]
        approx = np.bincount(idx.ravel(), weights=contrib.ravel(), minlength=m)
    return approx


def _analysis_matrices(m: int, filt: WaveletFilter):
    rows = np.repeat(np.arange(m // 2), filt.length)
    cols = ((2 * np.arange(m // 2)[:, None] + np.arange(filt.length)[None, :]) % m).ravel()
    # coo -> csr sums duplicate entries, which is what periodisation needs when m < L
    H = sparse.coo_matrix((np.tile(filt.lowpass, m // 2), (rows, cols)), shape=(m // 2, m))
    G = sparse.coo_matrix((np.tile(filt.highpass, m // 2), (rows, cols)), shape=(m // 2, m))
    return H.tocsr(), G.tocsr()


def dwt_matrix(n: int, filter: str | WaveletFilter = "d4", levels: int | None = None) -> np.ndarray:
    """Dense orthogonal matrix ``W`` with ``W @ x == dwt(x).flat()``.

    Built from explicit per-level filter matrices, independently of the
    pyramidal code path, so it can serve as a test oracle.
    """
    if n > MAX_MATRIX_SIZE:
        raise ValueError(f"dense transform matrix limited to n <= {MAX_MATRIX_SIZE}, got {n}")
    filt = get_filter(filter)
    levels = _check_levels(n, levels)
    rows = []
    cascade = np.eye(n)
    m = n
    for _ in range(levels):
        H, G = _analysis_matrices(m, filt)
        rows.append(G @ cascade)
        cascade = H @ cascade
        m //= 2
    rows.append(cascade)
    return np.vstack(rows[::-1])

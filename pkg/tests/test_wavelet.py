import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from logdiff.errors import DataError
from logdiff.wavelet import (
    WaveletDecomposition,
    available_filters,
    dwt,
    dwt_matrix,
    get_filter,
    idwt,
)

FILTERS = available_filters()
finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


@pytest.mark.parametrize("name", FILTERS)
def test_filter_invariants(name):
    f = get_filter(name)
    h, g = f.lowpass, f.highpass
    assert np.sum(h**2) == pytest.approx(1.0, abs=1e-14)
    assert np.sum(h) == pytest.approx(math.sqrt(2), abs=1e-14)
    assert abs(h @ g) < 1e-14
    for shift in range(2, h.size, 2):
        assert abs(h[shift:] @ h[:-shift]) < 1e-14
        assert abs(g[shift:] @ g[:-shift]) < 1e-14
        assert abs(h[shift:] @ g[:-shift]) < 1e-14
        assert abs(g[shift:] @ h[:-shift]) < 1e-14


def test_filter_lookup():
    assert get_filter("Haar") == get_filter("db1")
    assert get_filter("db4").length == 8
    assert get_filter("db10").vanishing_moments == 10
    with pytest.raises(ValueError, match="unknown wavelet filter"):
        get_filter("sym4")


def test_haar_matrix_n2():
    r = 1 / math.sqrt(2)
    np.testing.assert_allclose(dwt_matrix(2, "haar"), [[r, r], [r, -r]], atol=1e-15)


def test_small_signal_matches_matrix():
    x = np.array([1.0, 2.0, 3.0, 4.0])
    w = dwt(x, "haar", 1)
    np.testing.assert_allclose(w.flat(), dwt_matrix(4, "haar", 1) @ x, rtol=1e-10, atol=1e-14)
    # scaling (1+2)/r2, (3+4)/r2 then details (1-2)/r2, (3-4)/r2
    r = math.sqrt(2)
    np.testing.assert_allclose(w.flat(), [3 / r, 7 / r, -1 / r, -1 / r])


@pytest.mark.parametrize("levels", [1, 2, 3, 5])
def test_constant_signal_haar(levels):
    c = 2.5
    w = dwt(np.full(32, c), "haar", levels)
    for block in w.details:
        np.testing.assert_allclose(block, 0, atol=1e-13)
    np.testing.assert_allclose(w.scaling, c * math.sqrt(2**levels))


@pytest.mark.parametrize("name", ["haar", "db2", "db4", "db8", "db10"])
@pytest.mark.parametrize("n", [2, 8, 64, 256])
def test_matrix_orthogonal_and_matches_pyramid(name, n):
    rng = np.random.default_rng(n)
    J = n.bit_length() - 1
    for levels in {1, J}:
        W = dwt_matrix(n, name, levels)
        assert np.max(np.abs(W @ W.T - np.eye(n))) < 1e-10
        X = rng.standard_normal((10, n))
        for x in X:
            np.testing.assert_allclose(dwt(x, name, levels).flat(), W @ x, atol=1e-10)


@pytest.mark.parametrize("name", FILTERS)
def test_perfect_reconstruction_all_levels(name):
    rng = np.random.default_rng(1)
    for J in range(3, 13):
        x = rng.standard_normal(2**J)
        for levels in range(1, J + 1):
            assert np.max(np.abs(idwt(dwt(x, name, levels)) - x)) < 1e-10


def test_zero_coefficients_give_zero_signal():
    w = dwt(np.zeros(16), "db4")
    assert np.all(idwt(w) == 0)


@pytest.mark.parametrize("name", ["haar", "db4"])
def test_unit_coefficient_is_matrix_column(name):
    n, levels = 64, 4
    W = dwt_matrix(n, name, levels)
    for pos in (0, 5, 20, 63):
        e = np.zeros(n)
        e[pos] = 1.0
        out = idwt(WaveletDecomposition.from_flat(e, get_filter(name), levels))
        np.testing.assert_allclose(out, W.T[:, pos], atol=1e-12)
        assert np.linalg.norm(out) == pytest.approx(1.0)


@pytest.mark.parametrize("k", range(1, 11))
def test_vanishing_moments(k):
    name = f"db{k}"
    f = get_filter(name)
    n = 256
    x = np.arange(n) / n
    for degree in range(k):
        w = dwt(x**degree, name, 1)
        # interior coefficients: window 2j .. 2j + L - 1 does not wrap
        interior = w.details[-1][: (n - f.length) // 2 + 1]
        assert np.max(np.abs(interior)) < 1e-9


@settings(max_examples=60, deadline=None)
@given(
    J=st.integers(1, 9),
    name=st.sampled_from(FILTERS),
    data=st.data(),
)
def test_parseval_and_linearity(J, name, data):
    n = 2**J
    x = data.draw(arrays(np.float64, n, elements=finite))
    y = data.draw(arrays(np.float64, n, elements=finite))
    a, b = data.draw(finite), data.draw(finite)
    wx = dwt(x, name)
    energy = float(x @ x)
    assert abs(wx.energy() - energy) <= 1e-8 * energy + 1e-300
    lhs = dwt(a * x + b * y, name).flat()
    rhs = a * wx.flat() + b * dwt(y, name).flat()
    scale = 1 + np.max(np.abs(lhs))
    assert np.max(np.abs(lhs - rhs)) <= 1e-10 * scale


def test_layout_is_coarsest_first():
    w = dwt(np.random.default_rng(0).standard_normal(32), "db2", 3)
    assert w.coarsest_level == 2
    assert [b.size for b in w.details] == [4, 8, 16]
    assert w.scaling.size == 4
    assert list(w.level_indices) == [2, 3, 4]
    assert sum(b.size for b in w.details) + w.scaling.size == 32
    rebuilt = WaveletDecomposition.from_flat(w.flat(), w.filter, 3)
    np.testing.assert_array_equal(rebuilt.flat(), w.flat())


def test_rows_serialisation():
    w = dwt(np.arange(8.0), "haar", 2)
    rows = list(w.rows())
    assert len(rows) == 8
    assert rows[0][:3] == ("scaling", 1, 0)
    assert rows[2][:3] == ("detail", 1, 0)
    assert rows[-1][:3] == ("detail", 2, 3)
    np.testing.assert_array_equal([r[3] for r in rows], w.flat())


@pytest.mark.parametrize("n", [0, 3, 12, 100])
def test_rejects_non_power_of_two(n):
    with pytest.raises(DataError):
        dwt(np.ones(n))


@pytest.mark.parametrize("levels", [0, 4])
def test_rejects_bad_levels(levels):
    with pytest.raises(DataError):
        dwt(np.ones(8), "haar", levels)


def test_inconsistent_decomposition():
    w = dwt(np.ones(8), "haar", 2)
    with pytest.raises(DataError):
        WaveletDecomposition([w.details[0], np.ones(3)], w.scaling, w.filter, 8)


def test_matrix_size_guard():
    with pytest.raises(ValueError, match="4096"):
        dwt_matrix(8192, "haar")

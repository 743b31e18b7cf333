"""The numba kernels and the numpy fallbacks must agree exactly."""

import numpy as np
import pytest

from ordpat import _kernels


needs_numba = pytest.mark.skipif(
    not _kernels._HAVE_NUMBA, reason="numba backend not active"
)


def test_window_count():
    assert _kernels.window_count(10, 4, 1) == 7
    assert _kernels.window_count(10, 4, 4) == 2
    assert _kernels.window_count(4, 4, 1) == 1
    assert _kernels.window_count(3, 4, 1) == 0


def test_encode_windows_numpy_known_values():
    codes = _kernels.encode_windows_numpy(np.array([5, 5, 5, 4]), 4, 1)
    assert codes.tolist() == [[2, 2, 2, 1]]
    codes = _kernels.encode_windows_numpy(np.array([1, 2, 4, 3, 3]), 4, 1)
    assert codes.tolist() == [[1, 2, 4, 3], [1, 3, 2, 2]]


def test_encode_windows_stride():
    values = np.array([3, 1, 4, 1, 5, 9, 2, 6])
    by_stride = _kernels.encode_windows_numpy(values, 2, 3)
    assert by_stride.shape == (3, 2)
    assert by_stride.tolist() == [[2, 1], [1, 2], [1, 2]]


@needs_numba
@pytest.mark.parametrize("dtype", [np.int64, np.float64])
@pytest.mark.parametrize("n,stride", [(1, 1), (2, 1), (4, 1), (4, 4), (6, 2), (8, 1)])
def test_encode_windows_backends_agree(dtype, n, stride):
    rng = np.random.default_rng(101)
    values = rng.integers(-3, 4, size=500).astype(dtype)
    nb = _kernels.encode_windows_numba(values, n, stride)
    ref = _kernels.encode_windows_numpy(values, n, stride)
    np.testing.assert_array_equal(nb, ref)


@needs_numba
@pytest.mark.parametrize("n", [1, 2, 3, 4, 6, 8])
def test_distance_backends_agree(n):
    rng = np.random.default_rng(7)
    a = _kernels.encode_windows_numpy(rng.integers(0, n + 1, size=300), n, 1)
    b = _kernels.encode_windows_numpy(rng.integers(0, n + 1, size=300), n, 1)
    np.testing.assert_array_equal(_kernels.df_rows_numba(a, b), _kernels.df_rows_numpy(a, b))
    np.testing.assert_array_equal(_kernels.l1_rows_numba(a, b), _kernels.l1_rows_numpy(a, b))
    sa, sb = a[:40], b[:50]
    np.testing.assert_array_equal(_kernels.df_cross_numba(sa, sb), _kernels.df_cross_numpy(sa, sb))
    np.testing.assert_array_equal(_kernels.l1_cross_numba(sa, sb), _kernels.l1_cross_numpy(sa, sb))


def test_flag_controls_backend(monkeypatch):
    import importlib
    import ordpat._kernels as kernels_module

    monkeypatch.setenv(kernels_module._FLAG, "1")
    reloaded = importlib.reload(kernels_module)
    try:
        assert reloaded.BACKEND == "numpy"
        assert reloaded.encode_windows is reloaded.encode_windows_numpy
    finally:
        monkeypatch.delenv(kernels_module._FLAG)
        importlib.reload(kernels_module)

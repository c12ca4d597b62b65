import numpy as np
import pytest

from lexivar import _kernels
from lexivar._kernels import _fallback

native = pytest.importorskip(
    "lexivar._kernels._native", reason="compiled kernel not built"
)


def reference_recursion(coefs, preset, initial):
    """Textbook per-element loop, kept independent of both backends."""
    coefs = np.asarray(coefs, dtype=float)
    preset = np.asarray(preset, dtype=float)
    initial = np.asarray(initial, dtype=float)
    p, k = coefs.shape[0], coefs.shape[1]
    history = list(initial)  # oldest first
    out = []
    for t in range(preset.shape[0]):
        y = preset[t].copy()
        for i in range(1, p + 1):
            y = y + coefs[i - 1] @ history[-i]
        out.append(y)
        history.append(y)
    return np.array(out).reshape(preset.shape[0], k)


def test_backend_constant():
    assert _kernels.BACKEND in ("native", "python")
    # the extension imported above, so the package must have picked it
    assert _kernels.BACKEND == "native"
    assert _kernels.var_recursion is native.var_recursion


def test_scalar_ar1_by_hand():
    coefs = [[[0.5]]]
    preset = [[1.0], [1.0], [1.0]]
    initial = [[4.0]]
    expected = [[3.0], [2.5], [2.25]]
    for impl in (native.var_recursion, _fallback.var_recursion):
        assert np.array_equal(impl(coefs, preset, initial), expected)


def test_two_lag_ordering():
    # A_1 reads y[t-1], A_2 reads y[t-2]; a kernel that swaps them fails here.
    coefs = np.array([[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]])
    preset = np.zeros((2, 2))
    initial = np.array([[7.0, 0.0], [3.0, 0.0]])  # y[-2]=(7,0), y[-1]=(3,0)
    expected = np.array([[3.0, 7.0], [3.0, 3.0]])
    for impl in (native.var_recursion, _fallback.var_recursion):
        assert np.array_equal(impl(coefs, preset, initial), expected)


@pytest.mark.parametrize(
    "p,k,t_len",
    [(1, 1, 8), (1, 3, 50), (2, 2, 40), (3, 4, 25), (5, 2, 30)],
)
def test_backends_agree(p, k, t_len):
    rng = np.random.default_rng(1000 + 10 * p + k)
    coefs = rng.normal(scale=0.3 / np.sqrt(p * k), size=(p, k, k))
    preset = rng.normal(size=(t_len, k))
    initial = rng.normal(size=(p, k))
    got_native = native.var_recursion(coefs, preset, initial)
    got_python = _fallback.var_recursion(coefs, preset, initial)
    expected = reference_recursion(coefs, preset, initial)
    np.testing.assert_allclose(got_native, got_python, rtol=1e-12, atol=1e-13)
    np.testing.assert_allclose(got_native, expected, rtol=1e-10, atol=1e-12)


@pytest.mark.parametrize("impl", [native.var_recursion, _fallback.var_recursion])
def test_shapes_and_dtype(impl):
    out = impl(np.zeros((2, 3, 3)), np.zeros((11, 3)), np.zeros((2, 3)))
    assert out.shape == (11, 3)
    assert out.dtype == np.float64


@pytest.mark.parametrize("impl", [native.var_recursion, _fallback.var_recursion])
def test_empty_horizon(impl):
    out = impl(np.zeros((1, 2, 2)), np.zeros((0, 2)), np.zeros((1, 2)))
    assert out.shape == (0, 2)


@pytest.mark.parametrize("impl", [native.var_recursion, _fallback.var_recursion])
def test_accepts_noncontiguous_input(impl):
    rng = np.random.default_rng(3)
    coefs = rng.normal(scale=0.2, size=(2, 2, 2))
    wide = rng.normal(size=(12, 4))
    preset = wide[:, ::2]  # strided view
    initial = rng.normal(size=(2, 2))
    expected = reference_recursion(coefs, np.ascontiguousarray(preset), initial)
    np.testing.assert_allclose(impl(coefs, preset, initial), expected, rtol=1e-10)

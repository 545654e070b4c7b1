"""conv2d semantics, shape formula, and gradient checks."""

import numpy as np
import pytest

from patchback.tensor import ShapeError, Tensor
from patchback.tensor.conv import conv2d, conv_output_size

from gradcheck import check_grad


def test_identity_kernel_preserves_input():
    x = np.arange(9.0).reshape(1, 3, 3)
    out = conv2d(Tensor(x), Tensor(np.ones((1, 1, 1, 1))), stride=1, pad=0)
    assert np.array_equal(out.data, x)


def test_hand_cross_correlation_2x2():
    x = Tensor(np.array([[[1.0, 2.0], [3.0, 4.0]]]))
    k = Tensor(np.array([[[[1.0, 0.0], [0.0, 1.0]]]]))
    out = conv2d(x, k, stride=1, pad=0)
    assert out.data.shape == (1, 1, 1)
    assert out.data[0, 0, 0] == pytest.approx(5.0)


def test_encoder_scale_shape():
    x = Tensor(np.zeros((3, 84, 84)))
    k = Tensor(np.zeros((8, 3, 3, 3)))
    out = conv2d(x, k, stride=2, pad=1)
    assert out.shape == (8, 42, 42)


@pytest.mark.parametrize("h,k,stride,pad", [
    (84, 8, 4, 0), (84, 3, 2, 1), (9, 3, 2, 0), (16, 3, 1, 1),
    (7, 7, 1, 0), (10, 4, 3, 2),
])
def test_output_size_formula(h, k, stride, pad):
    out = conv_output_size(h, k, stride, pad)
    assert out == (h + 2 * pad - k) // stride + 1
    x = Tensor(np.zeros((1, 1, h, h)))
    w = Tensor(np.zeros((2, 1, k, k)))
    assert conv2d(x, w, stride=stride, pad=pad).shape == (1, 2, out, out)


def test_channel_mismatch_rejected():
    with pytest.raises(ShapeError, match="channels"):
        conv2d(Tensor(np.zeros((3, 8, 8))), Tensor(np.zeros((4, 2, 3, 3))))


def test_oversized_kernel_rejected():
    with pytest.raises(ShapeError):
        conv2d(Tensor(np.zeros((1, 4, 4))), Tensor(np.zeros((1, 1, 6, 6))), pad=0)


def test_matches_naive_convolution():
    rng = np.random.default_rng(0)
    x = rng.uniform(-1, 1, (2, 3, 9, 9))
    w = rng.uniform(-1, 1, (4, 3, 3, 3))
    stride, pad = 2, 1
    out = conv2d(Tensor(x), Tensor(w), stride=stride, pad=pad).data

    xp = np.pad(x, ((0, 0), (0, 0), (pad, pad), (pad, pad)))
    ho = wo = (9 + 2 * pad - 3) // stride + 1
    ref = np.zeros((2, 4, ho, wo))
    for n in range(2):
        for o in range(4):
            for i in range(ho):
                for j in range(wo):
                    win = xp[n, :, i * stride:i * stride + 3, j * stride:j * stride + 3]
                    ref[n, o, i, j] = np.sum(win * w[o])
    assert np.allclose(out, ref, atol=1e-12)


@pytest.mark.parametrize("seed,stride,pad", [(0, 1, 0), (1, 2, 1), (2, 3, 2), (3, 2, 0)])
def test_kernel_gradient_matches_finite_differences(seed, stride, pad):
    rng = np.random.default_rng(seed)
    x = Tensor(rng.uniform(-1, 1, (2, 2, 8, 8)))
    w0 = rng.uniform(-1, 1, (3, 2, 3, 3))
    check_grad(lambda w: conv2d(x, w, stride=stride, pad=pad).square().mean(), w0)


@pytest.mark.parametrize("seed,stride,pad", [(0, 1, 0), (1, 2, 1), (2, 2, 2)])
def test_input_gradient_matches_finite_differences(seed, stride, pad):
    rng = np.random.default_rng(10 + seed)
    w = Tensor(rng.uniform(-1, 1, (3, 2, 3, 3)))
    x0 = rng.uniform(-1, 1, (1, 2, 7, 7))
    check_grad(lambda x: conv2d(x, w, stride=stride, pad=pad).square().mean(), x0)


def test_bias_gradient():
    rng = np.random.default_rng(42)
    x = Tensor(rng.uniform(-1, 1, (2, 1, 5, 5)))
    w = Tensor(rng.uniform(-1, 1, (2, 1, 3, 3)))
    b0 = rng.uniform(-1, 1, (2,))
    check_grad(lambda b: conv2d(x, w, stride=1, pad=0, bias=b).square().mean(), b0)

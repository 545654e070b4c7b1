"""2-d cross-correlation via im2col so the inner products run on BLAS.

Forward caches the column matrix; the backward pass reuses it for the
kernel gradient and scatters the input gradient back with one strided
slice-add per kernel offset (no np.add.at).
"""

from __future__ import annotations

import numpy as np

from .autodiff import ShapeError, Tensor


def conv_output_size(n: int, k: int, stride: int, pad: int) -> int:
    return (n + 2 * pad - k) // stride + 1


def _im2col(x: np.ndarray, k: int, stride: int) -> np.ndarray:
    """[N,C,H,W] -> [N*H'*W', C*k*k] patch matrix (copies once)."""
    n, c, h, w = x.shape
    ho = (h - k) // stride + 1
    wo = (w - k) // stride + 1
    sn, sc, sh, sw = x.strides
    windows = np.lib.stride_tricks.as_strided(
        x,
        shape=(n, c, k, k, ho, wo),
        strides=(sn, sc, sh, sw, sh * stride, sw * stride),
        writeable=False,
    )
    cols = np.ascontiguousarray(windows.transpose(0, 4, 5, 1, 2, 3))
    return cols.reshape(n * ho * wo, c * k * k)


def _col2im(grad_cols: np.ndarray, x_shape: tuple, k: int, stride: int) -> np.ndarray:
    """Adjoint of _im2col: scatter-add patch gradients back onto the input."""
    n, c, h, w = x_shape
    ho = (h - k) // stride + 1
    wo = (w - k) // stride + 1
    gx = np.zeros(x_shape, dtype=grad_cols.dtype)
    g6 = grad_cols.reshape(n, ho, wo, c, k, k).transpose(0, 3, 4, 5, 1, 2)
    for i in range(k):
        hi = i + stride * ho
        for j in range(k):
            wj = j + stride * wo
            gx[:, :, i:hi:stride, j:wj:stride] += g6[:, :, i, j, :, :]
    return gx


def conv2d_forward(x: np.ndarray, w: np.ndarray, stride: int, pad: int):
    """Plain-ndarray conv used by the no-grad inference path.

    Returns (out[N,C_out,H',W'], cols) with cols reusable for backward.
    """
    n, c, h, hw = x.shape
    c_out, c_in, k, k2 = w.shape
    if k != k2:
        raise ShapeError(f"kernel must be square, got {w.shape}")
    if c != c_in:
        raise ShapeError(f"input has {c} channels but kernel expects {c_in}")
    if stride < 1:
        raise ShapeError(f"stride must be >= 1, got {stride}")
    if k > h + 2 * pad or k > hw + 2 * pad:
        raise ShapeError(f"kernel {k} larger than padded input {h + 2 * pad}x{hw + 2 * pad}")
    if pad > 0:
        x = np.pad(x, ((0, 0), (0, 0), (pad, pad), (pad, pad)))
    ho = conv_output_size(h, k, stride, pad)
    wo = conv_output_size(hw, k, stride, pad)
    cols = _im2col(x, k, stride)
    out = cols @ w.reshape(c_out, -1).T
    out = out.reshape(n, ho, wo, c_out).transpose(0, 3, 1, 2)
    return np.ascontiguousarray(out), cols


def conv2d(x: Tensor, w: Tensor, stride: int = 1, pad: int = 0,
           bias: Tensor | None = None) -> Tensor:
    """Differentiable cross-correlation.

    Accepts [C,H,W] or [N,C,H,W] input with a [C_out,C_in,k,k] kernel;
    optional bias is one scalar per output channel.
    """
    unbatched = x.data.ndim == 3
    xb = x.reshape((1,) + x.shape) if unbatched else x
    if xb.data.ndim != 4 or w.data.ndim != 4:
        raise ShapeError(f"conv2d expects [N,C,H,W] x [O,C,k,k], got {x.shape} x {w.shape}")
    n, c, h, hw = xb.shape
    c_out, c_in, k, _ = w.shape
    out_data, cols = conv2d_forward(xb.data, w.data, stride, pad)
    ho, wo = out_data.shape[2], out_data.shape[3]

    def backward(g):
        g2 = g.transpose(0, 2, 3, 1).reshape(n * ho * wo, c_out)
        if w.requires_grad:
            w._accumulate((g2.T @ cols).reshape(w.shape))
        if xb.requires_grad:
            grad_cols = g2 @ w.data.reshape(c_out, -1)
            padded_shape = (n, c, h + 2 * pad, hw + 2 * pad)
            gx = _col2im(grad_cols, padded_shape, k, stride)
            if pad > 0:
                gx = gx[:, :, pad:pad + h, pad:pad + hw]
            xb._accumulate(gx)

    out = Tensor._result(out_data, (xb, w), backward)
    if bias is not None:
        out = out + bias.reshape(1, c_out, 1, 1)
    return out.reshape(out.shape[1:]) if unbatched else out

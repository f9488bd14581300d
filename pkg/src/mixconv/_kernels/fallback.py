"""NumPy convolution kernels (pure-Python fallback backend).

Forward kernels accumulate taps in the documented order (row tap outer,
column tap inner, then input channel for dense conv), one multiply-add
per tap, so every output element is bit-identical to the compiled
backend and to a naive loop nest using the same order. Out-of-image taps
are skipped, never added as zeros.

Backward kernels are exact adjoints but reduce with vectorized NumPy
sums; they agree with the compiled backend to rounding error, not bitwise.
"""
from __future__ import annotations

import numpy as np

NAME = "fallback"


def _tap_range(out_extent: int, in_extent: int, stride: int, offset: int):
    """Output index range [lo, hi) whose input row/col stays in bounds.

    The tap reads input ``p*stride + offset`` for output index ``p``.
    """
    # smallest p with p*stride + offset >= 0
    lo = (-offset + stride - 1) // stride if offset < 0 else 0
    # largest p with p*stride + offset <= in_extent - 1
    hi = min(out_extent - 1, (in_extent - 1 - offset) // stride)
    return lo, hi + 1


def depthwise_forward(x, w, stride, dilation, pad_top, pad_left, out_h, out_w):
    n, h, width, c = x.shape
    k = w.shape[0]
    m = w.shape[3]
    y = np.zeros((n, out_h, out_w, c * m))
    for a in range(k):
        off_r = a * dilation - pad_top
        p_lo, p_hi = _tap_range(out_h, h, stride, off_r)
        if p_lo >= p_hi:
            continue
        rows = slice(p_lo * stride + off_r, (p_hi - 1) * stride + off_r + 1, stride)
        for b in range(k):
            off_c = b * dilation - pad_left
            q_lo, q_hi = _tap_range(out_w, width, stride, off_c)
            if q_lo >= q_hi:
                continue
            cols = slice(q_lo * stride + off_c, (q_hi - 1) * stride + off_c + 1, stride)
            xs = x[:, rows, cols, :]
            prod = xs[..., :, None] * w[a, b]
            y[:, p_lo:p_hi, q_lo:q_hi, :] += prod.reshape(xs.shape[:3] + (c * m,))
    return y


def depthwise_backward(x, w, dy, stride, dilation, pad_top, pad_left):
    n, h, width, c = x.shape
    k = w.shape[0]
    m = w.shape[3]
    out_h, out_w = dy.shape[1], dy.shape[2]
    dyv = dy.reshape(n, out_h, out_w, c, m)
    dx = np.zeros_like(x)
    dw = np.zeros_like(w)
    for a in range(k):
        off_r = a * dilation - pad_top
        p_lo, p_hi = _tap_range(out_h, h, stride, off_r)
        if p_lo >= p_hi:
            continue
        rows = slice(p_lo * stride + off_r, (p_hi - 1) * stride + off_r + 1, stride)
        for b in range(k):
            off_c = b * dilation - pad_left
            q_lo, q_hi = _tap_range(out_w, width, stride, off_c)
            if q_lo >= q_hi:
                continue
            cols = slice(q_lo * stride + off_c, (q_hi - 1) * stride + off_c + 1, stride)
            g = dyv[:, p_lo:p_hi, q_lo:q_hi, :, :]
            dx[:, rows, cols, :] += (g * w[a, b]).sum(axis=4)
            dw[a, b] += np.einsum("npqc,npqcm->cm", x[:, rows, cols, :], g)
    return dx, dw


def conv_forward(x, w, stride, dilation, pad_top, pad_left, out_h, out_w):
    n, h, width, c_in = x.shape
    k = w.shape[0]
    c_out = w.shape[3]
    y = np.zeros((n, out_h, out_w, c_out))
    for a in range(k):
        off_r = a * dilation - pad_top
        p_lo, p_hi = _tap_range(out_h, h, stride, off_r)
        if p_lo >= p_hi:
            continue
        rows = slice(p_lo * stride + off_r, (p_hi - 1) * stride + off_r + 1, stride)
        for b in range(k):
            off_c = b * dilation - pad_left
            q_lo, q_hi = _tap_range(out_w, width, stride, off_c)
            if q_lo >= q_hi:
                continue
            cols = slice(q_lo * stride + off_c, (q_hi - 1) * stride + off_c + 1, stride)
            xs = x[:, rows, cols, :]
            region = y[:, p_lo:p_hi, q_lo:q_hi, :]
            for ci in range(c_in):
                region += xs[..., ci, None] * w[a, b, ci]
    return y


def conv_backward(x, w, dy, stride, dilation, pad_top, pad_left):
    n, h, width, c_in = x.shape
    k = w.shape[0]
    out_h, out_w = dy.shape[1], dy.shape[2]
    dx = np.zeros_like(x)
    dw = np.zeros_like(w)
    for a in range(k):
        off_r = a * dilation - pad_top
        p_lo, p_hi = _tap_range(out_h, h, stride, off_r)
        if p_lo >= p_hi:
            continue
        rows = slice(p_lo * stride + off_r, (p_hi - 1) * stride + off_r + 1, stride)
        for b in range(k):
            off_c = b * dilation - pad_left
            q_lo, q_hi = _tap_range(out_w, width, stride, off_c)
            if q_lo >= q_hi:
                continue
            cols = slice(q_lo * stride + off_c, (q_hi - 1) * stride + off_c + 1, stride)
            g = dy[:, p_lo:p_hi, q_lo:q_hi, :]
            dx[:, rows, cols, :] += np.einsum("npqo,co->npqc", g, w[a, b])
            dw[a, b] += np.einsum("npqc,npqo->co", x[:, rows, cols, :], g)
    return dx, dw

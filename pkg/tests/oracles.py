"""Independent reference implementations used as test oracles.

Everything here is deliberately naive: plain Python loop nests and
brute-force finite differences. None of it shares code with the package
kernels beyond NumPy array storage.
"""
from __future__ import annotations

import numpy as np


def same_pad_before(extent: int, kernel: int, stride: int, dilation: int = 1) -> int:
    """Leading pad under ceil-mode same padding (extra pixel trails)."""
    k_eff = (kernel - 1) * dilation + 1
    out = -(-extent // stride)
    total = max((out - 1) * stride + k_eff - extent, 0)
    return total // 2


def naive_depthwise(x, w, stride=1, dilation=1, padding="same"):
    """Direct loop-nest depthwise convolution.

    Taps accumulate row-major (row tap outer, column tap inner); taps
    falling outside the image are skipped. This matches the documented
    kernel order, so results must be bit-identical to the library.
    """
    n, h, width, c = x.shape
    k, _, _, m = w.shape
    k_eff = (k - 1) * dilation + 1
    if padding == "same":
        out_h, out_w = -(-h // stride), -(-width // stride)
        pt = same_pad_before(h, k, stride, dilation)
        pl = same_pad_before(width, k, stride, dilation)
    else:
        out_h, out_w = (h - k_eff) // stride + 1, (width - k_eff) // stride + 1
        pt = pl = 0
    y = np.zeros((n, out_h, out_w, c * m))
    for i in range(n):
        for p in range(out_h):
            for q in range(out_w):
                for ci in range(c):
                    for mi in range(m):
                        acc = 0.0
                        for a in range(k):
                            row = p * stride + a * dilation - pt
                            if row < 0 or row >= h:
                                continue
                            for b in range(k):
                                col = q * stride + b * dilation - pl
                                if col < 0 or col >= width:
                                    continue
                                acc += x[i, row, col, ci] * w[a, b, ci, mi]
                        y[i, p, q, ci * m + mi] = acc
    return y


def naive_conv(x, w, stride=1, padding="same"):
    """Direct loop-nest dense convolution (input channel innermost)."""
    n, h, width, c_in = x.shape
    k, _, _, c_out = w.shape
    if padding == "same":
        out_h, out_w = -(-h // stride), -(-width // stride)
        pt = same_pad_before(h, k, stride)
        pl = same_pad_before(width, k, stride)
    else:
        out_h, out_w = (h - k) // stride + 1, (width - k) // stride + 1
        pt = pl = 0
    y = np.zeros((n, out_h, out_w, c_out))
    for i in range(n):
        for p in range(out_h):
            for q in range(out_w):
                for o in range(c_out):
                    acc = 0.0
                    for a in range(k):
                        row = p * stride + a - pt
                        if row < 0 or row >= h:
                            continue
                        for b in range(k):
                            col = q * stride + b - pl
                            if col < 0 or col >= width:
                                continue
                            for ci in range(c_in):
                                acc += x[i, row, col, ci] * w[a, b, ci, o]
                    y[i, p, q, o] = acc
    return y


def naive_pointwise(x, w2d):
    """Per-pixel matmul oracle for 1x1 convolution."""
    n, h, width, c_in = x.shape
    c_out = w2d.shape[1]
    y = np.zeros((n, h, width, c_out))
    for i in range(n):
        for p in range(h):
            for q in range(width):
                y[i, p, q, :] = x[i, p, q, :] @ w2d
    return y


def central_diff(f, arrays, step=1e-5):
    """Central finite-difference gradients of scalar ``f`` in each array."""
    grads = []
    for arr in arrays:
        g = np.zeros_like(arr)
        flat = arr.reshape(-1)
        gf = g.reshape(-1)
        for i in range(flat.size):
            orig = flat[i]
            flat[i] = orig + step
            fp = f()
            flat[i] = orig - step
            fm = f()
            flat[i] = orig
            gf[i] = (fp - fm) / (2.0 * step)
        grads.append(g)
    return grads


def rel_err(analytic: np.ndarray, numeric: np.ndarray) -> float:
    """Worst elementwise relative error |a - f| / max(|a|, |f|, 1e-8)."""
    denom = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), 1e-8)
    return float(np.max(np.abs(analytic - numeric) / denom))

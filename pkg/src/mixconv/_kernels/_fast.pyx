# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled convolution kernels (hot path).

Loop order matches the documented contract: every output element
accumulates taps with the row tap outer, column tap inner, and input
channel innermost for dense conv. Out-of-image taps are skipped.
"""
import numpy as np

cimport numpy as cnp

cnp.import_array()

NAME = "compiled"


def depthwise_forward(const double[:, :, :, ::1] x, const double[:, :, :, ::1] w,
                      int stride, int dilation, int pad_top, int pad_left,
                      int out_h, int out_w):
    cdef Py_ssize_t n = x.shape[0], h = x.shape[1], width = x.shape[2], c = x.shape[3]
    cdef Py_ssize_t k = w.shape[0], m = w.shape[3]
    y_arr = np.zeros((n, out_h, out_w, c * m))
    cdef double[:, :, :, ::1] y = y_arr
    cdef Py_ssize_t i, p, q, ci, mi, a, b
    cdef Py_ssize_t row, col
    cdef double acc
    for i in range(n):
        for p in range(out_h):
            for q in range(out_w):
                for ci in range(c):
                    for mi in range(m):
                        acc = 0.0
                        for a in range(k):
                            row = p * stride + a * dilation - pad_top
                            if row < 0 or row >= h:
                                continue
                            for b in range(k):
                                col = q * stride + b * dilation - pad_left
                                if col < 0 or col >= width:
                                    continue
                                acc = acc + x[i, row, col, ci] * w[a, b, ci, mi]
                        y[i, p, q, ci * m + mi] = acc
    return y_arr


def depthwise_backward(const double[:, :, :, ::1] x, const double[:, :, :, ::1] w,
                       const double[:, :, :, ::1] dy,
                       int stride, int dilation, int pad_top, int pad_left):
    cdef Py_ssize_t n = x.shape[0], h = x.shape[1], width = x.shape[2], c = x.shape[3]
    cdef Py_ssize_t k = w.shape[0], m = w.shape[3]
    cdef Py_ssize_t out_h = dy.shape[1], out_w = dy.shape[2]
    dx_arr = np.zeros((n, h, width, c))
    dw_arr = np.zeros((k, k, c, m))
    cdef double[:, :, :, ::1] dx = dx_arr
    cdef double[:, :, :, ::1] dw = dw_arr
    cdef Py_ssize_t i, p, q, ci, mi, a, b
    cdef Py_ssize_t row, col
    cdef double g
    for i in range(n):
        for p in range(out_h):
            for q in range(out_w):
                for ci in range(c):
                    for mi in range(m):
                        g = dy[i, p, q, ci * m + mi]
                        if g == 0.0:
                            continue
                        for a in range(k):
                            row = p * stride + a * dilation - pad_top
                            if row < 0 or row >= h:
                                continue
                            for b in range(k):
                                col = q * stride + b * dilation - pad_left
                                if col < 0 or col >= width:
                                    continue
                                dx[i, row, col, ci] += g * w[a, b, ci, mi]
                                dw[a, b, ci, mi] += g * x[i, row, col, ci]
    return dx_arr, dw_arr


def conv_forward(const double[:, :, :, ::1] x, const double[:, :, :, ::1] w,
                 int stride, int dilation, int pad_top, int pad_left,
                 int out_h, int out_w):
    cdef Py_ssize_t n = x.shape[0], h = x.shape[1], width = x.shape[2], c_in = x.shape[3]
    cdef Py_ssize_t k = w.shape[0], c_out = w.shape[3]
    y_arr = np.zeros((n, out_h, out_w, c_out))
    cdef double[:, :, :, ::1] y = y_arr
    cdef Py_ssize_t i, p, q, o, ci, a, b
    cdef Py_ssize_t row, col
    cdef double acc
    for i in range(n):
        for p in range(out_h):
            for q in range(out_w):
                for o in range(c_out):
                    acc = 0.0
                    for a in range(k):
                        row = p * stride + a * dilation - pad_top
                        if row < 0 or row >= h:
                            continue
                        for b in range(k):
                            col = q * stride + b * dilation - pad_left
                            if col < 0 or col >= width:
                                continue
                            for ci in range(c_in):
                                acc = acc + x[i, row, col, ci] * w[a, b, ci, o]
                    y[i, p, q, o] = acc
    return y_arr


def conv_backward(const double[:, :, :, ::1] x, const double[:, :, :, ::1] w,
                  const double[:, :, :, ::1] dy,
                  int stride, int dilation, int pad_top, int pad_left):
    cdef Py_ssize_t n = x.shape[0], h = x.shape[1], width = x.shape[2], c_in = x.shape[3]
    cdef Py_ssize_t k = w.shape[0], c_out = w.shape[3]
    cdef Py_ssize_t out_h = dy.shape[1], out_w = dy.shape[2]
    dx_arr = np.zeros((n, h, width, c_in))
    dw_arr = np.zeros((k, k, c_in, c_out))
    cdef double[:, :, :, ::1] dx = dx_arr
    cdef double[:, :, :, ::1] dw = dw_arr
    cdef Py_ssize_t i, p, q, o, ci, a, b
    cdef Py_ssize_t row, col
    cdef double g
    for i in range(n):
        for p in range(out_h):
            for q in range(out_w):
                for o in range(c_out):
                    g = dy[i, p, q, o]
                    if g == 0.0:
                        continue
                    for a in range(k):
                        row = p * stride + a * dilation - pad_top
                        if row < 0 or row >= h:
                            continue
                        for b in range(k):
                            col = q * stride + b * dilation - pad_left
                            if col < 0 or col >= width:
                                continue
                            for ci in range(c_in):
                                dx[i, row, col, ci] += g * w[a, b, ci, o]
                                dw[a, b, ci, o] += g * x[i, row, col, ci]
    return dx_arr, dw_arr

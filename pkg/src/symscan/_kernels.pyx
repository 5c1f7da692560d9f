# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled per-pixel kernels.

Bit-for-bit equivalent to the reference implementations in
``_kernels_py.py``; the test suite asserts parity on random inputs.
"""

import numpy as np

cdef double TAN_22_5 = 0.41421356237309503
cdef double TAN_67_5 = 2.414213562373095


def dilate3x3(unsigned char[:, ::1] img):
    cdef Py_ssize_t h = img.shape[0], w = img.shape[1]
    out_arr = np.zeros((h, w), dtype=np.uint8)
    cdef unsigned char[:, ::1] out = out_arr
    cdef Py_ssize_t i, j, i0, i1, j0, j1, ni, nj
    cdef unsigned char v
    for i in range(h):
        i0 = i - 1 if i > 0 else 0
        i1 = i + 1 if i < h - 1 else h - 1
        for j in range(w):
            j0 = j - 1 if j > 0 else 0
            j1 = j + 1 if j < w - 1 else w - 1
            v = 0
            for ni in range(i0, i1 + 1):
                for nj in range(j0, j1 + 1):
                    if img[ni, nj]:
                        v = 1
                        break
                if v:
                    break
            out[i, j] = v
    return out_arr


def erode3x3(unsigned char[:, ::1] img, int border=0):
    cdef Py_ssize_t h = img.shape[0], w = img.shape[1]
    out_arr = np.zeros((h, w), dtype=np.uint8)
    cdef unsigned char[:, ::1] out = out_arr
    cdef Py_ssize_t i, j, ni, nj
    cdef unsigned char v
    cdef unsigned char fill = 1 if border else 0
    for i in range(h):
        for j in range(w):
            v = 1
            for ni in range(i - 1, i + 2):
                for nj in range(j - 1, j + 2):
                    if 0 <= ni < h and 0 <= nj < w:
                        if not img[ni, nj]:
                            v = 0
                            break
                    elif not fill:
                        v = 0
                        break
                if not v:
                    break
            out[i, j] = v
    return out_arr


def suppress_nonmax(double[:, ::1] mag, double[:, ::1] gx, double[:, ::1] gy):
    cdef Py_ssize_t h = mag.shape[0], w = mag.shape[1]
    out_arr = np.zeros((h, w), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, j, di, dj
    cdef double ax, ay, c, n1, n2
    for i in range(h):
        for j in range(w):
            c = mag[i, j]
            if c <= 0:
                continue
            ax = gx[i, j]
            ay = gy[i, j]
            if ax < 0:
                ax = -ax
            if ay < 0:
                ay = -ay
            if ay <= TAN_22_5 * ax:
                di = 0
                dj = 1
            elif ay >= TAN_67_5 * ax:
                di = 1
                dj = 0
            elif gx[i, j] * gy[i, j] > 0:
                di = 1
                dj = 1
            else:
                di = 1
                dj = -1
            n1 = 0.0
            n2 = 0.0
            if 0 <= i + di < h and 0 <= j + dj < w:
                n1 = mag[i + di, j + dj]
            if 0 <= i - di < h and 0 <= j - dj < w:
                n2 = mag[i - di, j - dj]
            if c >= n1 and c >= n2:
                out[i, j] = c
    return out_arr


def hysteresis(unsigned char[:, ::1] strong, unsigned char[:, ::1] weak):
    cdef Py_ssize_t h = strong.shape[0], w = strong.shape[1]
    out_arr = np.zeros((h, w), dtype=np.uint8)
    cdef unsigned char[:, ::1] out = out_arr
    stack_arr = np.empty(h * w, dtype=np.intp)
    cdef Py_ssize_t[::1] stack = stack_arr
    cdef Py_ssize_t top = 0, i, j, ni, nj, pos
    for i in range(h):
        for j in range(w):
            if strong[i, j] and weak[i, j] and not out[i, j]:
                out[i, j] = 1
                stack[top] = i * w + j
                top += 1
                while top > 0:
                    top -= 1
                    pos = stack[top]
                    for ni in range(pos // w - 1, pos // w + 2):
                        for nj in range(pos % w - 1, pos % w + 2):
                            if 0 <= ni < h and 0 <= nj < w:
                                if weak[ni, nj] and not out[ni, nj]:
                                    out[ni, nj] = 1
                                    stack[top] = ni * w + nj
                                    top += 1
    return out_arr


def level_crossings(double[:, ::1] field, double[::1] levels):
    cdef Py_ssize_t h = field.shape[0], w = field.shape[1]
    out_arr = np.zeros((h, w), dtype=np.uint8)
    cdef unsigned char[:, ::1] out = out_arr
    cdef Py_ssize_t i, j, k, nlev = levels.shape[0]
    cdef double lo, hi, v
    for i in range(h - 1):
        for j in range(w - 1):
            lo = field[i, j]
            hi = lo
            v = field[i, j + 1]
            if v < lo: lo = v
            if v > hi: hi = v
            v = field[i + 1, j]
            if v < lo: lo = v
            if v > hi: hi = v
            v = field[i + 1, j + 1]
            if v < lo: lo = v
            if v > hi: hi = v
            for k in range(nlev):
                if lo <= levels[k] <= hi:
                    out[i, j] = 1
                    break
    return out_arr

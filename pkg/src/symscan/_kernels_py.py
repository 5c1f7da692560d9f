"""Pure-NumPy implementations of the per-pixel hot kernels.

Same contracts as the compiled versions in ``_kernels.pyx``; the active
backend is chosen at import time by :mod:`symscan.kernels`.  All binary
images are uint8 arrays holding 0/1.
"""

from __future__ import annotations

import numpy as np

TAN_22_5 = 0.41421356237309503  # tan(pi/8)
TAN_67_5 = 2.414213562373095    # tan(3*pi/8)


def _padded(img: np.ndarray, fill: int) -> np.ndarray:
    return np.pad(img, 1, mode="constant", constant_values=fill)


def dilate3x3(img: np.ndarray) -> np.ndarray:
    """3x3 full-square dilation; pixels outside the image count as 0."""
    p = _padded(img, 0)
    out = np.zeros_like(img)
    for di in range(3):
        for dj in range(3):
            np.logical_or(out, p[di:di + img.shape[0], dj:dj + img.shape[1]], out=out)
    return out.astype(np.uint8)


def erode3x3(img: np.ndarray, border: int = 0) -> np.ndarray:
    """3x3 full-square erosion; pixels outside the image count as `border`."""
    p = _padded(img, 1 if border else 0)
    out = np.ones_like(img)
    for di in range(3):
        for dj in range(3):
            np.logical_and(out, p[di:di + img.shape[0], dj:dj + img.shape[1]], out=out)
    return out.astype(np.uint8)


def suppress_nonmax(mag: np.ndarray, gx: np.ndarray, gy: np.ndarray) -> np.ndarray:
    """Zero out gradient magnitudes that are not local maxima along the
    quantized gradient direction (4 directions); outside pixels count as 0."""
    h, w = mag.shape
    p = np.pad(mag, 1, mode="constant")
    ax = np.abs(gx)
    ay = np.abs(gy)

    horiz = ay <= TAN_22_5 * ax
    vert = ay >= TAN_67_5 * ax
    diag = ~(horiz | vert)
    main_diag = diag & (gx * gy > 0)   # gradient along (+1,+1) in (col,row)
    anti_diag = diag & ~main_diag

    n1 = np.empty_like(mag)
    n2 = np.empty_like(mag)
    c = p[1:h + 1, 1:w + 1]
    for sel, (di, dj) in (
        (horiz, (0, 1)),
        (vert, (1, 0)),
        (main_diag, (1, 1)),
        (anti_diag, (1, -1)),
    ):
        n1[sel] = p[1 + di:h + 1 + di, 1 + dj:w + 1 + dj][sel]
        n2[sel] = p[1 - di:h + 1 - di, 1 - dj:w + 1 - dj][sel]

    keep = (c >= n1) & (c >= n2) & (c > 0)
    out = np.zeros_like(mag)
    out[keep] = mag[keep]
    return out


def hysteresis(strong: np.ndarray, weak: np.ndarray) -> np.ndarray:
    """8-connected flood fill: every weak pixel reachable from a strong one.

    `strong` must be a subset of `weak`.
    """
    reached = (strong & weak).astype(np.uint8)
    while True:
        grown = dilate3x3(reached) & weak
        if np.array_equal(grown, reached):
            return reached
        reached = grown


def level_crossings(field: np.ndarray, levels: np.ndarray) -> np.ndarray:
    """Mark the top-left pixel of every 2x2 cell whose value range spans a
    level (marching-squares crossing test).  Last row/column stay 0."""
    h, w = field.shape
    out = np.zeros((h, w), dtype=np.uint8)
    a = field[:-1, :-1]
    b = field[:-1, 1:]
    c = field[1:, :-1]
    d = field[1:, 1:]
    lo = np.minimum(np.minimum(a, b), np.minimum(c, d))
    hi = np.maximum(np.maximum(a, b), np.maximum(c, d))
    hit = np.zeros(lo.shape, dtype=bool)
    for lev in np.asarray(levels, dtype=np.float64):
        hit |= (lo <= lev) & (lev <= hi)
    out[:-1, :-1] = hit
    return out

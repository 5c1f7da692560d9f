"""Image preprocessing: fields to contours, edges, trimasks, pixel samples.

The chain for a potential is render -> contour_lines -> skeletonize ->
make_trimask -> sample_pixels; for a grayscale image the contour step is
replaced by canny_edges.  All binary images are uint8 arrays of 0/1.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from symscan import kernels
from symscan.errors import DegenerateMaskError, NoContoursError
from symscan.potentials import GRID_N, PotentialSpec, cell_centers, eval_potential

# trimask pixel codes
TM_BACKGROUND = 0
TM_GAP = 1
TM_CONTOUR = 2


@dataclass(frozen=True)
class ScalarField:
    """A potential sampled at the cell centers of the 256x256 grid."""

    values: np.ndarray
    lo: float = -1.0
    hi: float = 1.0


@dataclass(frozen=True)
class TriMask:
    """Ternary pixel labels: 0 background, 1 gap, 2 contour."""

    pixels: np.ndarray

    @property
    def contour(self) -> np.ndarray:
        return (self.pixels == TM_CONTOUR).astype(np.uint8)

    @property
    def background(self) -> np.ndarray:
        return (self.pixels == TM_BACKGROUND).astype(np.uint8)

    @property
    def gap(self) -> np.ndarray:
        return (self.pixels == TM_GAP).astype(np.uint8)


@dataclass(frozen=True)
class PixelDataset:
    """Balanced labeled pixel coordinates in [-1,1]^2.

    Label 0 is contour, label 1 is background (the fingerprint channel
    assignment relies on this).
    """

    coords: np.ndarray  # (N, 2) float64, columns x, y
    labels: np.ndarray  # (N,) uint8

    def __len__(self) -> int:
        return self.coords.shape[0]

    @property
    def class_counts(self) -> tuple[int, int]:
        return int((self.labels == 0).sum()), int((self.labels == 1).sum())


def render_field(spec: PotentialSpec, n: int = GRID_N) -> ScalarField:
    """Evaluate the potential at grid-cell centers; row i is y, column j is x."""
    xs = cell_centers(n)
    gx, gy = np.meshgrid(xs, xs)
    return ScalarField(eval_potential(spec, gx, gy))


def contour_lines(field, n_levels: int = 5) -> np.ndarray:
    """Mark pixels whose 2x2 cell spans one of the contour level values.

    Levels are evenly spaced between the 5th and 95th percentile of the
    field so extreme values cannot produce degenerate contours.
    """
    values = np.asarray(getattr(field, "values", field), dtype=np.float64)
    if n_levels < 1:
        raise ValueError("n_levels must be >= 1")
    vmin, vmax = float(values.min()), float(values.max())
    if vmin == vmax:
        raise NoContoursError("constant field has no level crossings")
    p5, p95 = np.percentile(values, [5.0, 95.0])
    if p5 == p95:
        raise NoContoursError("field is constant between the 5th and 95th "
                              "percentile")
    levels = np.linspace(p5, p95, n_levels)
    return kernels.level_crossings(np.ascontiguousarray(values), levels)


def _gaussian_kernel1d(sigma: float) -> np.ndarray:
    radius = int(math.ceil(3.0 * sigma))
    t = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-0.5 * (t / sigma) ** 2)
    return k / k.sum()


def _convolve_separable(img: np.ndarray, k: np.ndarray) -> np.ndarray:
    r = len(k) // 2
    p = np.pad(img, ((r, r), (0, 0)), mode="reflect")
    out = np.zeros_like(img)
    for t in range(len(k)):
        out += k[t] * p[t:t + img.shape[0], :]
    p = np.pad(out, ((0, 0), (r, r)), mode="reflect")
    out = np.zeros_like(img)
    for t in range(len(k)):
        out += k[t] * p[:, t:t + img.shape[1]]
    return out


def _sobel(img: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    p = np.pad(img, 1, mode="reflect")
    gx = ((p[:-2, 2:] + 2 * p[1:-1, 2:] + p[2:, 2:])
          - (p[:-2, :-2] + 2 * p[1:-1, :-2] + p[2:, :-2]))
    gy = ((p[2:, :-2] + 2 * p[2:, 1:-1] + p[2:, 2:])
          - (p[:-2, :-2] + 2 * p[:-2, 1:-1] + p[:-2, 2:]))
    return gx, gy


def canny_edges(image: np.ndarray, low: float = 0.1, high: float = 0.2,
                sigma: float = 1.4) -> np.ndarray:
    """Canny detector: smooth, gradient, non-maximum suppression, hysteresis.

    `low` and `high` are fractions of the maximum gradient magnitude.
    """
    if not 0.0 <= low <= high:
        raise ValueError("need 0 <= low <= high")
    img = np.asarray(image, dtype=np.float64)
    smoothed = _convolve_separable(img, _gaussian_kernel1d(sigma)) if sigma > 0 else img
    gx, gy = _sobel(smoothed)
    mag = np.hypot(gx, gy)
    mmax = float(mag.max())
    if mmax == 0.0:
        return np.zeros(img.shape, dtype=np.uint8)
    thin = kernels.suppress_nonmax(np.ascontiguousarray(mag),
                                   np.ascontiguousarray(gx),
                                   np.ascontiguousarray(gy))
    strong = ((thin >= high * mmax) & (thin > 0)).astype(np.uint8)
    weak = ((thin >= low * mmax) & (thin > 0)).astype(np.uint8)
    return kernels.hysteresis(strong, weak)


def skeletonize(edges: np.ndarray, max_iter: int = 50) -> np.ndarray:
    """Iterate 3x3 closing (dilate then erode) to a fixed point.

    Closing bridges 1-pixel gaps in contour strokes; the loop stops at the
    first repeated image.  Warns if max_iter is hit first.
    """
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    cur = np.ascontiguousarray(edges, dtype=np.uint8)
    for _ in range(max_iter):
        nxt = kernels.erode3x3(kernels.dilate3x3(cur), border=1)
        if np.array_equal(nxt, cur):
            return cur
        cur = nxt
    warnings.warn("skeletonize stopped at max_iter before reaching a fixed "
                  "point", RuntimeWarning, stacklevel=2)
    return cur


def make_trimask(skeleton: np.ndarray, gap_width: int = 2) -> TriMask:
    """Label pixels contour/background/gap, carving a no-man's-land of
    `gap_width` erosions around the contour."""
    if gap_width < 0:
        raise ValueError("gap_width must be >= 0")
    sk = np.ascontiguousarray(skeleton, dtype=np.uint8)
    n_on = int(sk.sum())
    if n_on == 0 or n_on == sk.size:
        raise DegenerateMaskError("skeleton is empty or covers the image")
    bg = np.ascontiguousarray(1 - sk)
    for _ in range(gap_width):
        bg = kernels.erode3x3(bg, border=1)
    if not bg.any():
        raise DegenerateMaskError("background vanished while carving the gap")
    pixels = np.full(sk.shape, TM_GAP, dtype=np.uint8)
    pixels[bg.astype(bool)] = TM_BACKGROUND
    pixels[sk.astype(bool)] = TM_CONTOUR
    return TriMask(pixels)


def sample_pixels(mask: TriMask, cap: int = 10000, seed: int = 0) -> PixelDataset:
    """Draw a balanced sample of contour and background pixels.

    min(cap, #contour, #background) pixels per class, uniformly without
    replacement; gap pixels are never drawn.  Coordinates are the cell
    centers in [-1,1]^2.
    """
    if cap < 1:
        raise ValueError("cap must be >= 1")
    px = mask.pixels
    contour_idx = np.flatnonzero(px == TM_CONTOUR)
    bg_idx = np.flatnonzero(px == TM_BACKGROUND)
    if contour_idx.size == 0 or bg_idx.size == 0:
        raise DegenerateMaskError("a pixel class is empty")
    n = min(cap, contour_idx.size, bg_idx.size)
    rng = np.random.default_rng([3, seed])
    take_c = rng.choice(contour_idx, size=n, replace=False)
    take_b = rng.choice(bg_idx, size=n, replace=False)
    centers = cell_centers(px.shape[0])
    idx = np.concatenate([take_c, take_b])
    rows, cols = np.divmod(idx, px.shape[1])
    coords = np.stack([centers[cols], centers[rows]], axis=1)
    labels = np.concatenate([np.zeros(n, np.uint8), np.ones(n, np.uint8)])
    return PixelDataset(coords, labels)


def _resize_weights(n_in: int, n_out: int) -> np.ndarray:
    """Row-stochastic (n_out, n_in) matrix of box-overlap weights."""
    w = np.zeros((n_out, n_in))
    scale = n_in / n_out
    for i in range(n_out):
        lo = i * scale
        hi = (i + 1) * scale
        j0 = int(math.floor(lo))
        j1 = min(int(math.ceil(hi)), n_in)
        for j in range(j0, j1):
            w[i, j] = min(hi, j + 1) - max(lo, j)
    return w / scale


def resize_area(img: np.ndarray, shape: tuple[int, int] = (GRID_N, GRID_N)) -> np.ndarray:
    """Resample by exact box averaging (fractional overlap weights)."""
    r = _resize_weights(img.shape[0], shape[0])
    c = _resize_weights(img.shape[1], shape[1])
    return r @ np.asarray(img, dtype=np.float64) @ c.T


def to_grayscale(rgb: np.ndarray) -> np.ndarray:
    """Rec.709 luminance of an (H, W, 3) array in [0,1]."""
    return (0.2126 * rgb[..., 0] + 0.7152 * rgb[..., 1]
            + 0.0722 * rgb[..., 2])


def load_grayscale(path) -> np.ndarray:
    """Read an image file as a 256x256 grayscale array in [0,1].

    Color inputs are converted with Rec.709 luminance weights; resizing
    uses area averaging.
    """
    from PIL import Image

    with Image.open(path) as im:
        if im.mode in ("L", "I", "I;16", "F", "P", "1"):
            arr = np.asarray(im.convert("F"), dtype=np.float64)
            if im.mode != "F":
                arr = arr / 255.0
            gray = arr
        else:
            rgb = np.asarray(im.convert("RGB"), dtype=np.float64) / 255.0
            gray = to_grayscale(rgb)
    if gray.shape != (GRID_N, GRID_N):
        gray = resize_area(gray, (GRID_N, GRID_N))
    return np.clip(gray, 0.0, 1.0)


MANDELBROT_RE = (-2.5, 1.0)
MANDELBROT_IM = (-1.75, 1.75)


def escape_shade(c_re: float, c_im: float, max_iter: int) -> float:
    """Escape-time shade: 1.0 for immediate escape, 0.0 for interior."""
    z = complex(0.0, 0.0)
    c = complex(c_re, c_im)
    for t in range(1, max_iter + 1):
        z = z * z + c
        if abs(z) >= 2.0:
            return 1.0 - (t - 1) / max_iter
    return 0.0


def render_mandelbrot(max_iter: int = 60) -> np.ndarray:
    """Escape-time shading of the standard viewport on the 256x256 grid."""
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    n = GRID_N
    re = MANDELBROT_RE[0] + (np.arange(n) + 0.5) * ((MANDELBROT_RE[1] - MANDELBROT_RE[0]) / n)
    im = MANDELBROT_IM[0] + (np.arange(n) + 0.5) * ((MANDELBROT_IM[1] - MANDELBROT_IM[0]) / n)
    c = re[None, :] + 1j * im[:, None]
    z = np.zeros_like(c)
    out = np.zeros(c.shape, dtype=np.float64)
    active = np.ones(c.shape, dtype=bool)
    for t in range(1, max_iter + 1):
        z[active] = z[active] ** 2 + c[active]
        escaped = active & (np.abs(z) >= 2.0)
        out[escaped] = 1.0 - (t - 1) / max_iter
        active &= ~escaped
        if not active.any():
            break
    return out

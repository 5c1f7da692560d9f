"""Random 2D potentials with symmetry true by construction.

Each symmetry class gets its own functional family, built so the label is
guaranteed: radial profiles for rotation, even functions of one frame
coordinate for reflection, functions of a single coordinate for continuous
translation, trigonometric polynomials of fixed period for discrete
translation, and an oracle-filtered free mixture for the asymmetric class.
A random frame rotation hides the symmetry axis direction from downstream
consumers.  ``verify_symmetry`` is the independent brute-force probe used
as ground truth.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from symscan.errors import GenerationFailedError

DOMAIN_LO = -1.0
DOMAIN_HI = 1.0
GRID_N = 256


class SymmetryClass(enum.Enum):
    O2 = "O2"      # continuous rotation about a center
    Z2 = "Z2"      # reflection across an axis
    T = "T"        # continuous translation along a direction
    TN = "Tn"      # discrete translation with a fixed period
    NONE = "NONE"  # none of the above


SYMMETRIC_CLASSES = (
    SymmetryClass.O2,
    SymmetryClass.Z2,
    SymmetryClass.T,
    SymmetryClass.TN,
)

FAMILY_OF_CLASS = {
    SymmetryClass.O2: "radial",
    SymmetryClass.Z2: "mirror",
    SymmetryClass.T: "ridge",
    SymmetryClass.TN: "grating",
    SymmetryClass.NONE: "freeform",
}

_CLASS_INDEX = {c: i for i, c in enumerate(SymmetryClass)}


@dataclass(frozen=True)
class PotentialSpec:
    """A parametric potential on [-1,1]^2 with a declared symmetry label.

    ``params`` fully determines evaluation; its layout is family specific
    (see the ``_eval_*`` functions) with the frame rotation angle first.
    ``bumps`` holds the additive perturbation field of ``perturb`` as
    (amplitude, x0, y0, sigma) rows in world coordinates.
    """

    family: str
    params: tuple[float, ...]
    center: tuple[float, float]
    label: SymmetryClass
    seed: int
    approximate: bool = False
    bumps: tuple[tuple[float, float, float, float], ...] = ()


@dataclass(frozen=True)
class SymmetryProbeResult:
    max_deviation: float
    n_probes: int
    passed: bool


def cell_centers(n: int = GRID_N) -> np.ndarray:
    """Cell-center coordinates of an n-bin grid over [-1,1]."""
    return DOMAIN_LO + (np.arange(n) + 0.5) * ((DOMAIN_HI - DOMAIN_LO) / n)


def _frame_coords(spec: PotentialSpec, x, y):
    rho = spec.params[0]
    dx = np.asarray(x, dtype=np.float64) - spec.center[0]
    dy = np.asarray(y, dtype=np.float64) - spec.center[1]
    c, s = math.cos(rho), math.sin(rho)
    return c * dx + s * dy, -s * dx + c * dy


def _eval_radial(p, u, v):
    # p = [rho, (a, w, phase) x 3]
    r = np.sqrt(u * u + v * v)
    out = np.zeros_like(r)
    for k in range(3):
        a, w, ph = p[1 + 3 * k:4 + 3 * k]
        out += a * np.cos(w * r + ph)
    return out


def _eval_mirror(p, u, v):
    # p = [rho, (a, wu, wv, psi) x 3, q]; even in u by construction
    out = p[13] * u * u
    for k in range(3):
        a, wu, wv, psi = p[1 + 4 * k:5 + 4 * k]
        out = out + a * np.cos(wu * u) * np.cos(wv * v + psi)
    return out


def _eval_ridge(p, u, v):
    # p = [rho, (a, w, phase) x 3]; constant along u
    out = np.zeros_like(v)
    for k in range(3):
        a, w, ph = p[1 + 3 * k:4 + 3 * k]
        out += a * np.cos(w * v + ph)
    return out


def _eval_grating(p, u, v):
    # p = [rho, period, (a, phase, wv, psi) x 2, c0, wv0, psi0]
    period = p[1]
    out = p[10] * np.cos(p[11] * v + p[12])
    for k in range(2):
        a, ph, wv, psi = p[2 + 4 * k:6 + 4 * k]
        out = out + a * np.cos(2.0 * math.pi * (k + 1) * u / period + ph) \
            * np.cos(wv * v + psi)
    return out


def _eval_freeform(p, u, v):
    # p = [rho, (a, u0, v0, sx, sy) x 3, (b, wx, phase, wy, psi) x 2]
    out = np.zeros_like(u)
    for k in range(3):
        a, u0, v0, sx, sy = p[1 + 5 * k:6 + 5 * k]
        out = out + a * np.exp(-((u - u0) ** 2 / (2 * sx * sx)
                                 + (v - v0) ** 2 / (2 * sy * sy)))
    for k in range(2):
        b, wx, ph, wy, psi = p[16 + 5 * k:21 + 5 * k]
        out = out + b * np.cos(wx * u + ph) * np.cos(wy * v + psi)
    return out


_EVAL = {
    "radial": _eval_radial,
    "mirror": _eval_mirror,
    "ridge": _eval_ridge,
    "grating": _eval_grating,
    "freeform": _eval_freeform,
}


def eval_potential(spec: PotentialSpec, x, y):
    """Evaluate the potential at (x, y); arrays broadcast elementwise.

    Raises ValueError for points outside [-1,1]^2.
    """
    xa = np.asarray(x, dtype=np.float64)
    ya = np.asarray(y, dtype=np.float64)
    if (np.abs(xa) > DOMAIN_HI).any() or (np.abs(ya) > DOMAIN_HI).any():
        raise ValueError("point outside the [-1,1]^2 domain")
    out = _eval_unchecked(spec, xa, ya)
    if xa.ndim == 0 and ya.ndim == 0:
        return float(out)
    return out


def _eval_unchecked(spec: PotentialSpec, xa, ya):
    u, v = _frame_coords(spec, xa, ya)
    out = _EVAL[spec.family](spec.params, u, v)
    for amp, x0, y0, sig in spec.bumps:
        out = out + amp * np.exp(-((xa - x0) ** 2 + (ya - y0) ** 2)
                                 / (2 * sig * sig))
    return out


def _signed(rng, lo, hi, n=None):
    mag = rng.uniform(lo, hi, n)
    sign = 1.0 - 2.0 * rng.integers(0, 2, n)
    return mag * sign


def _sample_center(rng):
    return tuple(float(t) for t in rng.uniform(-0.35, 0.35, 2))


def _build_radial(rng, seed):
    params = [0.0]
    for _ in range(3):
        params += [float(_signed(rng, 0.5, 1.0)), float(rng.uniform(2.0, 5.5)),
                   float(rng.uniform(0.0, 2 * math.pi))]
    return PotentialSpec("radial", tuple(params), _sample_center(rng),
                         SymmetryClass.O2, seed)


def _build_mirror(rng, seed):
    params = [float(rng.uniform(0.0, 2 * math.pi))]
    for _ in range(3):
        params += [float(_signed(rng, 0.5, 1.0)),
                   float(rng.uniform(1.5, 4.5)),
                   float(rng.uniform(1.5, 4.5)),
                   float(rng.uniform(0.0, 2 * math.pi))]
    params.append(float(rng.uniform(-0.8, 0.8)))
    return PotentialSpec("mirror", tuple(params), _sample_center(rng),
                         SymmetryClass.Z2, seed)


def _build_ridge(rng, seed):
    params = [float(rng.uniform(0.0, 2 * math.pi))]
    for _ in range(3):
        params += [float(_signed(rng, 0.5, 1.0)), float(rng.uniform(2.0, 5.5)),
                   float(rng.uniform(0.0, 2 * math.pi))]
    return PotentialSpec("ridge", tuple(params), _sample_center(rng),
                         SymmetryClass.T, seed)


def _build_grating(rng, seed):
    params = [float(rng.uniform(0.0, 2 * math.pi)), float(rng.uniform(0.2, 0.6))]
    for _ in range(2):
        params += [float(_signed(rng, 0.5, 1.0)),
                   float(rng.uniform(0.0, 2 * math.pi)),
                   float(rng.uniform(1.5, 4.5)),
                   float(rng.uniform(0.0, 2 * math.pi))]
    params += [float(_signed(rng, 0.3, 0.7)), float(rng.uniform(1.5, 4.5)),
               float(rng.uniform(0.0, 2 * math.pi))]
    return PotentialSpec("grating", tuple(params), _sample_center(rng),
                         SymmetryClass.TN, seed)


def _build_freeform(rng, seed):
    params = [float(rng.uniform(0.0, 2 * math.pi))]
    for _ in range(3):
        params += [float(_signed(rng, 0.7, 1.3)),
                   float(rng.uniform(-0.8, 0.8)),
                   float(rng.uniform(-0.8, 0.8)),
                   float(rng.uniform(0.18, 0.45)),
                   float(rng.uniform(0.18, 0.45))]
    for _ in range(2):
        params += [float(_signed(rng, 0.3, 0.7)),
                   float(rng.uniform(1.5, 4.5)),
                   float(rng.uniform(0.0, 2 * math.pi)),
                   float(rng.uniform(1.5, 4.5)),
                   float(rng.uniform(0.0, 2 * math.pi))]
    return PotentialSpec("freeform", tuple(params), _sample_center(rng),
                         SymmetryClass.NONE, seed)


_BUILDERS = {
    SymmetryClass.O2: _build_radial,
    SymmetryClass.Z2: _build_mirror,
    SymmetryClass.T: _build_ridge,
    SymmetryClass.TN: _build_grating,
    SymmetryClass.NONE: _build_freeform,
}

_NONE_FILTER_MARGIN = 1e-3
_NONE_MAX_ATTEMPTS = 25


def sample_potential(cls: SymmetryClass, seed: int) -> PotentialSpec:
    """Draw a random potential of the given symmetry class.

    Deterministic in (cls, seed).  Asymmetric candidates are re-drawn until
    the probe oracle clearly rejects all four symmetry classes.
    """
    if cls is not SymmetryClass.NONE:
        rng = np.random.default_rng([_CLASS_INDEX[cls], seed])
        return _BUILDERS[cls](rng, seed)

    for attempt in range(_NONE_MAX_ATTEMPTS):
        rng = np.random.default_rng([_CLASS_INDEX[cls], seed, attempt])
        cand = _build_freeform(rng, seed)
        if _clearly_asymmetric(cand, seed):
            return cand
    raise GenerationFailedError(
        f"no clearly asymmetric candidate after {_NONE_MAX_ATTEMPTS} "
        f"attempts (seed {seed})")


def _clearly_asymmetric(spec: PotentialSpec, seed: int) -> bool:
    for cls in SYMMETRIC_CLASSES:
        res = verify_symmetry(spec, cls, tolerance=_NONE_FILTER_MARGIN,
                              n_probes=400, seed=seed + 1)
        if res.passed:
            return False
    return True


def _rotate_about(pts, center, theta):
    d = pts - center
    c = np.cos(theta)
    s = np.sin(theta)
    rx = c * d[:, 0] - s * d[:, 1]
    ry = s * d[:, 0] + c * d[:, 1]
    return center + np.stack([rx, ry], axis=1)


def _reflect_about(pts, center, angles):
    # reflection across the line through `center` with direction `angles`
    d = pts - center
    ax = np.cos(angles)
    ay = np.sin(angles)
    proj = d[:, 0] * ax + d[:, 1] * ay
    rx = 2 * proj * ax - d[:, 0]
    ry = 2 * proj * ay - d[:, 1]
    return center + np.stack([rx, ry], axis=1)


def _transformed_probes(spec, cls, pts, rng):
    n = pts.shape[0]
    center = np.asarray(spec.center)
    declared = spec.label is cls
    if cls is SymmetryClass.O2:
        theta = rng.uniform(0.0, 2 * math.pi, n)
        return _rotate_about(pts, center, theta)
    if cls is SymmetryClass.Z2:
        if declared and spec.family == "mirror":
            # mirror axis: u = 0, i.e. direction rho + pi/2 through center
            angles = np.full(n, spec.params[0] + math.pi / 2)
        else:
            angles = rng.uniform(0.0, math.pi, n)
        return _reflect_about(pts, center, angles)
    if cls is SymmetryClass.T:
        if declared and spec.family == "ridge":
            angles = np.full(n, spec.params[0])
        else:
            angles = rng.uniform(0.0, 2 * math.pi, n)
        t = _signed(rng, 0.1, 0.6, n)
        return pts + t[:, None] * np.stack([np.cos(angles), np.sin(angles)], 1)
    if cls is SymmetryClass.TN:
        if declared and spec.family == "grating":
            angles = np.full(n, spec.params[0])
            periods = np.full(n, spec.params[1])
        else:
            angles = rng.uniform(0.0, 2 * math.pi, n)
            periods = rng.uniform(0.2, 0.6, n)
        k = rng.choice([-2, -1, 1, 2], n)
        shift = (k * periods)[:, None]
        return pts + shift * np.stack([np.cos(angles), np.sin(angles)], 1)
    raise ValueError(f"unsupported class {cls}")


def verify_symmetry(spec: PotentialSpec, cls: SymmetryClass,
                    tolerance: float = 1e-9, n_probes: int = 1000,
                    seed: int = 0) -> SymmetryProbeResult:
    """Probe |V(transform(p)) - V(p)| at random points.

    When `cls` matches the spec's label the declared symmetry element
    (center, axis, direction, period) is used with random transformation
    magnitudes; otherwise random candidate elements are probed.  Probes
    whose transformed point leaves the domain are discarded.
    """
    if cls is SymmetryClass.NONE:
        raise ValueError("verify NONE by rejecting the four symmetry classes")
    if tolerance <= 0 or n_probes < 1:
        raise ValueError("tolerance must be > 0 and n_probes >= 1")
    rng = np.random.default_rng([7, seed])
    pts = rng.uniform(-0.95, 0.95, (n_probes, 2))
    tpts = _transformed_probes(spec, cls, pts, rng)
    ok = (np.abs(tpts) <= DOMAIN_HI).all(axis=1)
    if not ok.any():
        return SymmetryProbeResult(math.inf, 0, False)
    base = _eval_unchecked(spec, pts[ok, 0], pts[ok, 1])
    moved = _eval_unchecked(spec, tpts[ok, 0], tpts[ok, 1])
    max_dev = float(np.max(np.abs(moved - base)))
    return SymmetryProbeResult(max_dev, int(ok.sum()), max_dev < tolerance)


def perturb(spec: PotentialSpec, epsilon: float, seed: int = 0) -> PotentialSpec:
    """Add a smooth random bump field of amplitude epsilon * (field range).

    The label is kept but the spec is flagged approximate.  epsilon = 0
    returns the spec unchanged.
    """
    if epsilon < 0:
        raise ValueError("epsilon must be >= 0")
    if epsilon == 0.0:
        return spec
    xs = cell_centers()
    gx, gy = np.meshgrid(xs, xs)
    values = _eval_unchecked(spec, gx, gy)
    vrange = float(values.max() - values.min())

    rng = np.random.default_rng([11, seed, spec.seed])
    raw = []
    for _ in range(4):
        raw.append((float(_signed(rng, 0.5, 1.0)),
                    float(rng.uniform(-0.9, 0.9)),
                    float(rng.uniform(-0.9, 0.9)),
                    float(rng.uniform(0.15, 0.35))))
    bump_field = np.zeros_like(values)
    for amp, x0, y0, sig in raw:
        bump_field += amp * np.exp(-((gx - x0) ** 2 + (gy - y0) ** 2)
                                   / (2 * sig * sig))
    peak = float(np.abs(bump_field).max())
    scale = epsilon * vrange / peak if peak > 0 else 0.0
    bumps = tuple((amp * scale, x0, y0, sig) for amp, x0, y0, sig in raw)
    return replace(spec, approximate=True, bumps=spec.bumps + bumps)


def spec_to_dict(spec: PotentialSpec) -> dict:
    d = {
        "family": spec.family,
        "params": list(spec.params),
        "center": list(spec.center),
        "label": spec.label.value,
        "seed": spec.seed,
    }
    if spec.approximate:
        d["approximate"] = True
    if spec.bumps:
        d["bumps"] = [list(b) for b in spec.bumps]
    return d


def spec_from_dict(d: dict) -> PotentialSpec:
    return PotentialSpec(
        family=d["family"],
        params=tuple(float(p) for p in d["params"]),
        center=(float(d["center"][0]), float(d["center"][1])),
        label=SymmetryClass(d["label"]),
        seed=int(d["seed"]),
        approximate=bool(d.get("approximate", False)),
        bumps=tuple(tuple(float(v) for v in b) for b in d.get("bumps", ())),
    )

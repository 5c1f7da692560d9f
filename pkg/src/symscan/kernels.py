"""Select the kernel backend: compiled extension if present, NumPy otherwise.

Both backends expose the same five functions with identical semantics:
``dilate3x3``, ``erode3x3``, ``suppress_nonmax``, ``hysteresis`` and
``level_crossings``.  Environment variable ``SYMSCAN_FORCE_PY=1`` forces
the pure-NumPy backend (used by the parity tests and the benchmark).
"""

from __future__ import annotations

import os

from symscan import _kernels_py

if os.environ.get("SYMSCAN_FORCE_PY") == "1":
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from symscan import _kernels as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

dilate3x3 = _impl.dilate3x3
erode3x3 = _impl.erode3x3
suppress_nonmax = _impl.suppress_nonmax
hysteresis = _impl.hysteresis
level_crossings = _impl.level_crossings

__all__ = [
    "BACKEND",
    "dilate3x3",
    "erode3x3",
    "suppress_nonmax",
    "hysteresis",
    "level_crossings",
]

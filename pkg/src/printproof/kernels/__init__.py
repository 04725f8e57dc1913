"""Hot per-pixel kernels: Sobel gradients and windowed median.

A compiled Cython core is used when available; otherwise a numpy fallback
with identical numerics. Selection happens at import (set PRINTPROOF_NO_EXT=1
to force the fallback). PRINTPROOF_THREADS caps row-band parallelism
(0 or unset = auto); results are independent of the schedule because bands
write disjoint output rows from a shared read-only padded input.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import _fallback

if os.environ.get("PRINTPROOF_NO_EXT"):
    _core = None
else:
    try:
        from . import _core  # type: ignore[attr-defined]
    except ImportError:
        _core = None

_MIN_ROWS_PER_BAND = 64


def backend_name() -> str:
    return "compiled" if _core is not None else "numpy"


def _impl():
    return _core if _core is not None else _fallback


def thread_count() -> int:
    raw = os.environ.get("PRINTPROOF_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n <= 0:
        n = min(4, os.cpu_count() or 1)
    return n


def _run_banded(fn, height: int, *args) -> None:
    n = thread_count()
    if n <= 1 or height < 2 * _MIN_ROWS_PER_BAND:
        fn(*args, 0, height)
        return
    bands = min(n, max(1, height // _MIN_ROWS_PER_BAND))
    edges = np.linspace(0, height, bands + 1, dtype=int)
    with ThreadPoolExecutor(max_workers=bands) as ex:
        futures = [
            ex.submit(fn, *args, int(edges[i]), int(edges[i + 1]))
            for i in range(bands)
        ]
        for f in futures:
            f.result()


def sobel_gradients(plane: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """3x3 Sobel derivatives with replicate padding.

    gx > 0 where values increase left-to-right, gy > 0 where they increase
    top-to-bottom; a linear ramp of slope s per pixel responds with 8*s.
    """
    plane = np.ascontiguousarray(plane, dtype=np.float64)
    h, w = plane.shape
    padded = np.pad(plane, 1, mode="edge")
    gx = np.empty((h, w), dtype=np.float64)
    gy = np.empty((h, w), dtype=np.float64)
    _run_banded(_impl().sobel_band, h, padded, gx, gy)
    return gx, gy


def median_filter(plane: np.ndarray, radius: int) -> np.ndarray:
    """Median over the (2*radius+1)^2 window, replicate-padded."""
    if radius < 1:
        raise ValueError("radius must be >= 1")
    plane = np.ascontiguousarray(plane, dtype=np.float64)
    h, w = plane.shape
    padded = np.pad(plane, radius, mode="edge")
    out = np.empty((h, w), dtype=np.float64)
    _run_banded(_impl().median_band, h, padded, out, radius)
    return out

"""Median-residual noise map. The windowed median estimates local content;
what remains is sensor noise, grain, or whatever was pasted in."""

from __future__ import annotations

import numpy as np

from ..core import AnalysisMap, RasterImage, make_map
from ..kernels import median_filter
from .params import NoiseParams


def noise_map(img: RasterImage, params: NoiseParams | None = None) -> AnalysisMap:
    p = params or NoiseParams()
    px = img.pixels.astype(np.float64) / 255.0
    shifted = np.empty_like(px)
    for c in range(3):
        residual = px[:, :, c] - median_filter(px[:, :, c], p.radius)
        shifted[:, :, c] = np.clip(0.5 + p.gain * residual, 0.0, 1.0)
    r, g, b = shifted[:, :, 0], shifted[:, :, 1], shifted[:, :, 2]
    lum = b + 0.299 * (r - b) + 0.587 * (g - b)
    return make_map(np.clip(lum, 0.0, 1.0), "noise", p.digest())

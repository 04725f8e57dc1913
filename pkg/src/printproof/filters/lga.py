"""Luminance gradient analysis: Sobel derivatives of one channel rendered as
an RGB field (x-slope in red, y-slope in green, magnitude in blue)."""

from __future__ import annotations

import numpy as np

from ..core import AnalysisMap, RasterImage, extract_channel, make_map
from ..errors import ImageTooSmall
from ..kernels import sobel_gradients
from .params import LgaParams


def lga_map(img: RasterImage, params: LgaParams | None = None) -> AnalysisMap:
    p = params or LgaParams()
    if img.width < 3 or img.height < 3:
        raise ImageTooSmall("gradient analysis needs at least 3x3 pixels")
    plane = extract_channel(img, p.channel)
    gx, gy = sobel_gradients(plane)
    if p.normalized:
        peak = max(float(np.abs(gx).max()), float(np.abs(gy).max()))
        gain = (p.intensity / 100.0) / peak if peak > 0 else 0.0
    else:
        gain = (p.intensity / 100.0) * 4.0
    out = np.empty((img.height, img.width, 3), dtype=np.float64)
    out[:, :, 0] = 0.5 + gain * gx
    out[:, :, 1] = 0.5 + gain * gy
    out[:, :, 2] = gain * np.sqrt(gx * gx + gy * gy)
    np.clip(out, 0.0, 1.0, out=out)
    return make_map(out, "lga", p.digest())

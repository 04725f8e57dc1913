"""Error level analysis: recompress, difference, amplify, stretch.

The recompression baseline is always a fresh baseline JPEG at the requested
quality with 4:2:0 subsampling and standard scaled tables, regardless of the
source's own encoding, so maps are comparable across images.
"""

from __future__ import annotations

import io

import numpy as np
from PIL import Image

from ..core import AnalysisMap, RasterImage, make_map, nearest_rank_percentile
from ..errors import EncodeFailure
from .params import ElaParams


def recompress(img: RasterImage, quality: int) -> np.ndarray:
    buf = io.BytesIO()
    try:
        Image.fromarray(np.asarray(img.pixels), mode="RGB").save(
            buf, "JPEG", quality=quality, subsampling=2)
        buf.seek(0)
        with Image.open(buf) as re_im:
            return np.asarray(re_im.convert("RGB"), dtype=np.float64) / 255.0
    except (OSError, ValueError) as exc:
        raise EncodeFailure(f"recompression failed: {exc}") from exc


def ela_map(img: RasterImage, params: ElaParams | None = None) -> AnalysisMap:
    p = params or ElaParams()
    baseline = recompress(img, p.quality)
    diff = np.abs(img.pixels.astype(np.float64) / 255.0 - baseline)
    amplified = np.clip(diff * (p.scale / 10.0), 0.0, 1.0)
    nonzero = amplified[amplified > 0]
    if nonzero.size:
        pct = 100 - p.contrast
        # contrast=100 degenerates to stretching by the smallest nonzero value
        top = nearest_rank_percentile(nonzero, pct) if pct > 0 else float(nonzero.min())
        if top > 0:
            amplified = np.clip(amplified / top, 0.0, 1.0)
    return make_map(amplified, "ela", p.digest())

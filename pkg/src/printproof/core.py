"""Pixel buffer model, decoding, hashing, channel math and map normalization.

Everything downstream (filters, metrology, reports) works on the types
defined here. All pixel math is float64; 8-bit only at file boundaries.
"""

from __future__ import annotations

import hashlib
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np
from PIL import Image, PngImagePlugin, UnidentifiedImageError

from .errors import CorruptStream, InvalidPercentile, UnsupportedFormat

_JPEG_MAGIC = b"\xff\xd8"
_PNG_MAGIC = b"\x89PNG\r\n\x1a\n"

CHANNELS = ("red", "green", "blue", "luminance")

MAP_KINDS = ("ela", "pca_projection", "pca_distance", "lga", "noise")


@dataclass(frozen=True)
class ContentHash:
    digest: str
    algorithm: str = "SHA-256"

    def __post_init__(self):
        if len(self.digest) != 64 or self.digest != self.digest.lower():
            raise ValueError("digest must be 64 lowercase hex chars")

    def __str__(self):
        return self.digest


def compute_hash(data: bytes) -> ContentHash:
    return ContentHash(hashlib.sha256(bytes(data)).hexdigest())


@dataclass(frozen=True)
class RasterImage:
    width: int
    height: int
    pixels: np.ndarray  # (height, width, 3) uint8, read-only
    source_bytes_hash: ContentHash
    source_format: str  # "jpeg" | "png"

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("dimensions must be >= 1")
        if self.pixels.shape != (self.height, self.width, 3):
            raise ValueError("pixel buffer shape mismatch")
        if self.pixels.dtype != np.uint8:
            raise ValueError("pixel buffer must be uint8")
        self.pixels.setflags(write=False)


def load_image(data: bytes) -> RasterImage:
    """Decode JPEG or PNG bytes into an RGB raster.

    Raises UnsupportedFormat for unknown magic bytes and CorruptStream when
    the decoder fails mid-stream.
    """
    if data.startswith(_JPEG_MAGIC):
        fmt = "jpeg"
    elif data.startswith(_PNG_MAGIC):
        fmt = "png"
    else:
        raise UnsupportedFormat("input is neither JPEG nor PNG")
    try:
        with Image.open(io.BytesIO(data)) as im:
            im.load()
            rgb = im.convert("RGB")
            pixels = np.asarray(rgb, dtype=np.uint8).copy()
    except (OSError, SyntaxError, UnidentifiedImageError, ValueError) as exc:
        raise CorruptStream(f"{fmt} decode failed: {exc}") from exc
    h, w = pixels.shape[:2]
    return RasterImage(
        width=w,
        height=h,
        pixels=pixels,
        source_bytes_hash=compute_hash(data),
        source_format=fmt,
    )


def extract_channel(img: RasterImage, channel: str) -> np.ndarray:
    """Single-channel float plane in [0,1].

    Luminance uses Rec.601 weights on [0,1]-scaled channels, arranged so an
    achromatic pixel maps to its channel value bit-exactly.
    """
    if channel not in CHANNELS:
        raise ValueError(f"unknown channel {channel!r}")
    px = img.pixels.astype(np.float64) / 255.0
    if channel == "red":
        return px[:, :, 0]
    if channel == "green":
        return px[:, :, 1]
    if channel == "blue":
        return px[:, :, 2]
    r, g, b = px[:, :, 0], px[:, :, 1], px[:, :, 2]
    return b + 0.299 * (r - b) + 0.587 * (g - b)


def nearest_rank_percentile(values: np.ndarray, p: float) -> float:
    """Nearest-rank percentile: the element of rank ceil(p/100 * N) in the
    sorted sequence. Deterministic across platforms."""
    if not 0 < p <= 100:
        raise InvalidPercentile(f"percentile {p} outside (0, 100]")
    flat = np.sort(np.asarray(values, dtype=np.float64).ravel())
    if flat.size == 0:
        raise ValueError("empty value set")
    rank = math.ceil(p / 100.0 * flat.size)
    return float(flat[max(rank - 1, 0)])


def normalize_map(values: np.ndarray, mode: str = "global_max",
                  percentile: float | None = None) -> np.ndarray:
    """Scale a float plane into [0,1].

    global_max divides by the max absolute value (all-zero planes pass
    through untouched). percentile clips at the nearest-rank percentile of
    absolute values, then divides.
    """
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        raise ValueError("empty plane")
    mag = np.abs(arr)
    if mode == "global_max":
        top = float(mag.max())
    elif mode == "percentile":
        if percentile is None:
            raise InvalidPercentile("percentile mode needs a value")
        top = nearest_rank_percentile(mag, percentile)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if top == 0.0:
        return np.zeros_like(arr)
    return np.clip(mag / top, 0.0, 1.0)


@dataclass(frozen=True)
class AnalysisMap:
    width: int
    height: int
    channels: int  # 1 or 3
    values: np.ndarray  # (h, w) or (h, w, 3) float64 in [0,1]
    kind: str
    params_digest: str

    def __post_init__(self):
        if self.kind not in MAP_KINDS:
            raise ValueError(f"unknown map kind {self.kind!r}")
        if self.channels not in (1, 3):
            raise ValueError("channels must be 1 or 3")
        expected = (self.height, self.width) if self.channels == 1 else (self.height, self.width, 3)
        if self.values.shape != expected:
            raise ValueError("value buffer shape mismatch")
        self.values.setflags(write=False)

    def summary_stats(self) -> dict:
        vals = self.values
        return {
            "mean": float(vals.mean()),
            "p95": nearest_rank_percentile(vals, 95),
            "max": float(vals.max()),
        }


def make_map(values: np.ndarray, kind: str, params_digest: str) -> AnalysisMap:
    values = np.asarray(values, dtype=np.float64)
    if values.ndim == 2:
        h, w = values.shape
        ch = 1
    elif values.ndim == 3 and values.shape[2] == 3:
        h, w, _ = values.shape
        ch = 3
    else:
        raise ValueError("expect (h,w) or (h,w,3) values")
    return AnalysisMap(width=w, height=h, channels=ch, values=values,
                       kind=kind, params_digest=params_digest)


def map_to_png(m: AnalysisMap) -> bytes:
    """8-bit grayscale or RGB PNG with the generating-parameter digest in a
    text chunk. Byte-deterministic for identical inputs."""
    quant = np.clip(np.round(m.values * 255.0), 0, 255).astype(np.uint8)
    mode = "L" if m.channels == 1 else "RGB"
    info = PngImagePlugin.PngInfo()
    info.add_text("printproof:kind", m.kind)
    info.add_text("printproof:params", m.params_digest)
    buf = io.BytesIO()
    Image.fromarray(quant, mode=mode).save(buf, "PNG", pnginfo=info)
    return buf.getvalue()


def raster_to_png(img: RasterImage) -> bytes:
    buf = io.BytesIO()
    Image.fromarray(np.asarray(img.pixels), mode="RGB").save(buf, "PNG")
    return buf.getvalue()


def _round_floats(obj, sig=6):
    if isinstance(obj, float):
        if math.isfinite(obj):
            return float(f"{obj:.{sig}g}")
        raise ValueError("non-finite float in canonical JSON")
    if isinstance(obj, dict):
        return {k: _round_floats(v, sig) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v, sig) for v in obj]
    return obj


def canonical_json(obj) -> bytes:
    """UTF-8 JSON with sorted keys, no insignificant whitespace, floats
    rounded to 6 significant digits. The hashable source of truth for
    reports and parameter digests."""
    return json.dumps(
        _round_floats(obj), sort_keys=True, separators=(",", ":"), ensure_ascii=False
    ).encode("utf-8")


def digest_params(kind: str, params: dict) -> str:
    return hashlib.sha256(canonical_json({"kind": kind, "params": params})).hexdigest()

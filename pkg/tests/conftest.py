"""Shared fixture builders: crafted JPEG streams, embedded metadata blocks,
and the splice-scene generator used by the ELA tests."""

import io
import struct

import numpy as np
import pytest
from PIL import Image


# --- image synthesis ---------------------------------------------------------

def smooth_scene(rng, w=256, h=256):
    """Low-frequency gradient scene; compresses almost losslessly."""
    yy, xx = np.mgrid[0:h, 0:w].astype(np.float64)
    img = np.zeros((h, w, 3))
    gx, gy = rng.uniform(-0.3, 0.3, 2)
    for c in range(3):
        img[:, :, c] = 110 + gx * xx * rng.uniform(0.5, 1) + gy * yy * rng.uniform(0.5, 1)
    for _ in range(3):
        cx, cy = rng.uniform(0, w), rng.uniform(0, h)
        sx, sy = rng.uniform(w / 2, 2 * w), rng.uniform(h / 2, 2 * h)
        amp = rng.uniform(20, 60)
        blob = amp * np.exp(-(((xx - cx) / sx) ** 2 + ((yy - cy) / sy) ** 2))
        for c in range(3):
            img[:, :, c] += blob * rng.uniform(0.4, 1.0)
    return np.clip(img, 0, 255).astype(np.uint8)


def textured_scene(rng, w=256, h=256):
    """Noise and hard rectangles on top of a smooth base; rich spectrum."""
    img = smooth_scene(rng, w, h).astype(np.float64)
    img += rng.normal(0, 14, img.shape)
    for _ in range(12):
        x0, y0 = rng.integers(0, w - 40), rng.integers(0, h - 40)
        ww, hh = rng.integers(8, 40), rng.integers(8, 40)
        img[y0:y0 + hh, x0:x0 + ww] += rng.uniform(-60, 60)
    return np.clip(img, 0, 255).astype(np.uint8)


def jpeg_bytes(arr, quality=85, progressive=False, subsampling=2):
    buf = io.BytesIO()
    Image.fromarray(arr).save(buf, "JPEG", quality=quality,
                              progressive=progressive, subsampling=subsampling)
    return buf.getvalue()


def jpeg_roundtrip(arr, quality):
    with Image.open(io.BytesIO(jpeg_bytes(arr, quality=quality))) as im:
        return np.asarray(im.convert("RGB"))


def png_bytes(arr):
    buf = io.BytesIO()
    Image.fromarray(arr).save(buf, "PNG")
    return buf.getvalue()


def make_splice_fixture(seed, patch_quality):
    """Composite raster: smooth base settled at q=90 with a textured patch
    carrying a coarser compression history pasted off the block grid.
    Returns (pixels, patch mask)."""
    rng = np.random.default_rng(seed)
    base = jpeg_roundtrip(smooth_scene(rng), 90)
    patched = jpeg_roundtrip(textured_scene(rng), patch_quality)
    ph = pw = 96
    py = int(rng.integers(8, 256 - ph - 8))
    px = int(rng.integers(8, 256 - pw - 8))
    sy = int(rng.integers(0, 256 - ph))
    sx = int(rng.integers(0, 256 - pw))
    comp = base.copy()
    comp[py:py + ph, px:px + pw] = patched[sy:sy + ph, sx:sx + pw]
    mask = np.zeros(comp.shape[:2], dtype=bool)
    mask[py:py + ph, px:px + pw] = True
    return comp, mask


# --- JPEG container crafting ---------------------------------------------------

def segment_bytes(marker, payload):
    return bytes((0xFF, marker)) + struct.pack(">H", len(payload) + 2) + payload


def insert_segment(jpeg, marker, payload):
    """Splice a metadata segment right after SOI (and APP0 if present)."""
    pos = 2
    if jpeg[2:4] == b"\xff\xe0":
        size = struct.unpack(">H", jpeg[4:6])[0]
        pos = 4 + size
    return jpeg[:pos] + segment_bytes(marker, payload) + jpeg[pos:]


def build_exif_app1(entries, byte_order="II"):
    """Minimal TIFF with one IFD0. entries: list of
    (tag, type_code, count, value_bytes); 4-byte values stored inline,
    longer ones appended after the IFD."""
    endian = "<" if byte_order == "II" else ">"
    n = len(entries)
    ifd_start = 8
    data_start = ifd_start + 2 + 12 * n + 4
    blob = b""
    body = struct.pack(endian + "H", n)
    for tag, type_code, count, value in entries:
        if len(value) <= 4:
            inline = value + b"\x00" * (4 - len(value))
        else:
            inline = struct.pack(endian + "L", data_start + len(blob))
            blob += value
        body += struct.pack(endian + "HHL", tag, type_code, count) + inline
    body += struct.pack(endian + "L", 0)
    order = b"II" if byte_order == "II" else b"MM"
    tiff = order + struct.pack(endian + "HL", 42, ifd_start) + body + blob
    return b"Exif\x00\x00" + tiff


def iim_dataset(record, dataset, value):
    return bytes((0x1C, record, dataset)) + struct.pack(">H", len(value)) + value


def build_iptc_app13(datasets):
    """Photoshop APP13 resource carrying IIM datasets.
    datasets: list of (record, dataset, bytes)."""
    iim = b"".join(iim_dataset(r, d, v) for r, d, v in datasets)
    resource = b"8BIM" + struct.pack(">H", 0x0404) + b"\x00\x00"
    resource += struct.pack(">L", len(iim)) + iim
    if len(iim) % 2:
        resource += b"\x00"
    return b"Photoshop 3.0\x00" + resource


def build_icc_profile(description="Adobe RGB (1998)"):
    """Display-class RGB profile shaped like the 1999 Adobe RGB header, with
    desc and wtpt tags."""
    def s15(v):
        return struct.pack(">l", int(round(v * 65536)))

    desc_ascii = description.encode("ascii") + b"\x00"
    desc_tag = (b"desc" + b"\x00" * 4 + struct.pack(">L", len(desc_ascii))
                + desc_ascii + b"\x00" * 12 + b"\x00" * 67)
    wtpt_tag = b"XYZ " + b"\x00" * 4 + s15(0.95045) + s15(1.0) + s15(1.08905)
    tags = [(b"desc", desc_tag), (b"wtpt", wtpt_tag)]
    table = struct.pack(">L", len(tags))
    offset = 128 + 4 + 12 * len(tags)
    body = b""
    for sig, payload in tags:
        table += sig + struct.pack(">LL", offset + len(body), len(payload))
        body += payload
    size = 128 + len(table) + len(body)
    header = struct.pack(">L", size)
    header += b"ADBE"                            # CMM type
    header += bytes((0x02, 0x10, 0x00, 0x00))    # version 2.1.0
    header += b"mntr" + b"RGB " + b"XYZ "
    header += struct.pack(">6H", 1999, 6, 3, 0, 0, 0)
    header += b"acsp" + b"APPL"
    header += b"\x00" * 4                        # flags
    header += b"none" + b"\x00" * 4              # manufacturer, model
    header += b"\x00" * 8                        # attributes
    header += struct.pack(">L", 0)               # perceptual intent
    header += s15(0.9642) + s15(1.0) + s15(0.82491)
    header += b"ADBE"
    header += b"\x00" * (128 - len(header))
    return header + table + body


def icc_app2_chunks(profile, n_chunks=1):
    if n_chunks == 1:
        return [b"ICC_PROFILE\x00" + bytes((1, 1)) + profile]
    step = (len(profile) + n_chunks - 1) // n_chunks
    return [
        b"ICC_PROFILE\x00" + bytes((i + 1, n_chunks)) + profile[i * step:(i + 1) * step]
        for i in range(n_chunks)
    ]


@pytest.fixture(scope="session")
def jpeg_634x821():
    """634x821 baseline fixture for the field-listing checks."""
    rng = np.random.default_rng(11)
    arr = smooth_scene(rng, w=634, h=821)
    return jpeg_bytes(arr, quality=88)


@pytest.fixture(scope="session")
def small_jpeg():
    rng = np.random.default_rng(12)
    return jpeg_bytes(textured_scene(rng, w=96, h=80), quality=80)

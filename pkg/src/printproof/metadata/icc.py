"""ICC profile reassembly (multi-chunk APP2) and header/desc parsing."""

from __future__ import annotations

import struct
from dataclasses import dataclass

from ..errors import BadProfileSignature, MissingChunk

ICC_CHUNK_HEADER = b"ICC_PROFILE\x00"

_DEVICE_CLASSES = {
    "scnr": "Input Device Profile",
    "mntr": "Display Device Profile",
    "prtr": "Output Device Profile",
    "link": "Device Link Profile",
    "spac": "Color Space Conversion Profile",
    "abst": "Abstract Profile",
    "nmcl": "Named Color Profile",
}

_RENDERING_INTENTS = {
    0: "Perceptual",
    1: "Media-Relative Colorimetric",
    2: "Saturation",
    3: "ICC-Absolute Colorimetric",
}


@dataclass(frozen=True)
class IccSummary:
    profile_cmm_type: str
    version: str
    device_class: str
    color_space: str
    description: str
    creation_datetime: str
    rendering_intent: str
    white_point: tuple[float, float, float] | None


def _fourcc(raw: bytes) -> str:
    return raw.decode("ascii", errors="replace").strip("\x00 ")


def _s15fixed16(raw: bytes) -> float:
    (v,) = struct.unpack(">l", raw)
    return v / 65536.0


def reassemble_chunks(app2_chunks: list[bytes]) -> bytes:
    """Order APP2 payloads by their (index, count) bytes; indices must cover
    1..count exactly."""
    pieces = {}
    total = None
    for chunk in app2_chunks:
        if not chunk.startswith(ICC_CHUNK_HEADER) or len(chunk) < len(ICC_CHUNK_HEADER) + 2:
            raise MissingChunk("APP2 payload without ICC_PROFILE chunk header")
        idx = chunk[len(ICC_CHUNK_HEADER)]
        cnt = chunk[len(ICC_CHUNK_HEADER) + 1]
        total = cnt if total is None else total
        if cnt != total:
            raise MissingChunk("inconsistent chunk counts")
        pieces[idx] = chunk[len(ICC_CHUNK_HEADER) + 2:]
    if total is None or sorted(pieces) != list(range(1, total + 1)):
        raise MissingChunk(f"expected chunks 1..{total}, got {sorted(pieces)}")
    return b"".join(pieces[i] for i in range(1, total + 1))


def parse_icc(app2_chunks: list[bytes]) -> IccSummary:
    profile = reassemble_chunks(app2_chunks)
    if len(profile) < 128:
        raise BadProfileSignature("profile shorter than its 128-byte header")
    if profile[36:40] != b"acsp":
        raise BadProfileSignature("missing acsp signature")
    major = profile[8]
    minor = profile[9] >> 4
    bugfix = profile[9] & 0x0F
    y, mo, d, h, mi, s = struct.unpack(">6H", profile[24:36])
    (intent,) = struct.unpack(">L", profile[64:68])
    device_class_cc = _fourcc(profile[12:16])
    summary = {
        "profile_cmm_type": _fourcc(profile[4:8]),
        "version": f"{major}.{minor}.{bugfix}",
        "device_class": _DEVICE_CLASSES.get(device_class_cc, device_class_cc),
        "color_space": _fourcc(profile[16:20]),
        "description": "",
        "creation_datetime": f"{y:04d}:{mo:02d}:{d:02d} {h:02d}:{mi:02d}:{s:02d}",
        "rendering_intent": _RENDERING_INTENTS.get(intent, str(intent)),
        "white_point": None,
    }
    summary.update(_parse_tags(profile))
    return IccSummary(**summary)


def _parse_tags(profile: bytes) -> dict:
    found: dict = {}
    if len(profile) < 132:
        return found
    (count,) = struct.unpack(">L", profile[128:132])
    for k in range(min(count, 1024)):
        base = 132 + 12 * k
        if base + 12 > len(profile):
            break
        sig = _fourcc(profile[base:base + 4])
        off, size = struct.unpack(">LL", profile[base + 4:base + 12])
        if off + size > len(profile) or size < 8:
            continue
        body = profile[off:off + size]
        if sig == "desc":
            found["description"] = _parse_desc(body)
        elif sig == "wtpt" and body[:4] == b"XYZ " and size >= 20:
            found["white_point"] = (
                _s15fixed16(body[8:12]),
                _s15fixed16(body[12:16]),
                _s15fixed16(body[16:20]),
            )
    return found


def _parse_desc(body: bytes) -> str:
    if body[:4] == b"desc" and len(body) >= 12:
        (n,) = struct.unpack(">L", body[8:12])
        raw = body[12:12 + n]
        return raw.split(b"\x00")[0].decode("ascii", errors="replace")
    if body[:4] == b"mluc" and len(body) >= 28:
        # first record of a v4 multi-localized string
        (ln, off) = struct.unpack(">LL", body[20:28])
        raw = body[off:off + ln]
        try:
            return raw.decode("utf-16-be")
        except UnicodeDecodeError:
            return ""
    return ""

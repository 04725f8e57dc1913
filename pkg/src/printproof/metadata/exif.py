"""TIFF/EXIF IFD walker for APP1 payloads.

Byte order follows the TIFF header; rationals stay as (numerator,
denominator) pairs. Out-of-bounds offsets stop the walk and are reported as
warnings on the partial result instead of raising.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

from ..errors import BadTiffHeader

EXIF_HEADER = b"Exif\x00\x00"

_EXIF_IFD_POINTER = 0x8769
_GPS_IFD_POINTER = 0x8825

# type code -> (struct letter, element size)
_TYPES = {
    1: ("B", 1), 2: (None, 1), 3: ("H", 2), 4: ("L", 4), 5: (None, 8),
    6: ("b", 1), 7: (None, 1), 8: ("h", 2), 9: ("l", 4), 10: (None, 8),
    11: ("f", 4), 12: ("d", 8),
}

TAG_NAMES = {
    0x0100: "Image Width", 0x0101: "Image Height", 0x010E: "Image Description",
    0x010F: "Make", 0x0110: "Model", 0x0112: "Orientation",
    0x011A: "X Resolution", 0x011B: "Y Resolution", 0x0128: "Resolution Unit",
    0x0131: "Software", 0x0132: "Date/Time", 0x013B: "Artist",
    0x8298: "Copyright", 0x829A: "Exposure Time", 0x829D: "F Number",
    0x8827: "ISO", 0x9003: "Date/Time Original", 0x9004: "Date/Time Created",
    0x920A: "Focal Length", 0xA002: "Exif Image Width", 0xA003: "Exif Image Height",
    0x9286: "User Comment", 0xA430: "Owner Name", 0x927C: "Maker Note",
}


@dataclass(frozen=True)
class ExifEntry:
    tag_id: int
    ifd: str  # IFD0 | ExifIFD | GPS
    type_code: int
    value: object

    @property
    def name(self) -> str:
        return TAG_NAMES.get(self.tag_id, f"Tag 0x{self.tag_id:04X}")


@dataclass
class ExifData:
    entries: list[ExifEntry] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def lookup(self, tag_id: int) -> ExifEntry | None:
        for e in self.entries:
            if e.tag_id == tag_id:
                return e
        return None


def _decode_value(raw: bytes, type_code: int, count: int, endian: str):
    letter, size = _TYPES.get(type_code, (None, 1))
    if type_code == 2:  # ASCII
        return raw[:count].split(b"\x00")[0].decode("ascii", errors="replace")
    if type_code == 7 or letter is None and type_code not in (5, 10):
        return raw[:count]
    if type_code in (5, 10):  # RATIONAL / SRATIONAL
        fmt = "l" if type_code == 10 else "L"
        vals = []
        for k in range(count):
            num, den = struct.unpack(endian + fmt + fmt, raw[8 * k:8 * k + 8])
            vals.append((num, den))
        return vals[0] if count == 1 else tuple(vals)
    vals = struct.unpack(f"{endian}{count}{letter}", raw[:count * size])
    return vals[0] if count == 1 else tuple(vals)


def _walk_ifd(tiff: bytes, pos: int, endian: str, ifd_name: str, out: ExifData,
              pointers: dict) -> None:
    if pos + 2 > len(tiff):
        out.warnings.append(f"{ifd_name}: IfdOffsetOutOfBounds at {pos}")
        return
    (count,) = struct.unpack(endian + "H", tiff[pos:pos + 2])
    for k in range(count):
        base = pos + 2 + 12 * k
        if base + 12 > len(tiff):
            out.warnings.append(f"{ifd_name}: IfdOffsetOutOfBounds entry {k}")
            return
        tag, type_code, n = struct.unpack(endian + "HHL", tiff[base:base + 8])
        _, el_size = _TYPES.get(type_code, (None, 1))
        total = el_size * n
        if total <= 4:
            raw = tiff[base + 8:base + 8 + max(total, 4)]
        else:
            (off,) = struct.unpack(endian + "L", tiff[base + 8:base + 12])
            if off + total > len(tiff):
                out.warnings.append(
                    f"{ifd_name}: IfdOffsetOutOfBounds tag 0x{tag:04X}")
                continue
            raw = tiff[off:off + total]
        if tag in (_EXIF_IFD_POINTER, _GPS_IFD_POINTER) and type_code == 4:
            try:
                (sub,) = struct.unpack(endian + "L", raw[:4])
            except struct.error:
                continue
            pointers[tag] = sub
            continue
        try:
            value = _decode_value(raw, type_code, n, endian)
        except (struct.error, ValueError):
            value = raw
        out.entries.append(ExifEntry(tag, ifd_name, type_code, value))


def parse_exif(app1_payload: bytes) -> ExifData:
    if not app1_payload.startswith(EXIF_HEADER):
        raise BadTiffHeader("missing Exif\\0\\0 preamble")
    tiff = app1_payload[len(EXIF_HEADER):]
    if len(tiff) < 8:
        raise BadTiffHeader("TIFF header truncated")
    order = tiff[:2]
    if order == b"II":
        endian = "<"
    elif order == b"MM":
        endian = ">"
    else:
        raise BadTiffHeader(f"unknown byte order {order!r}")
    magic, ifd0 = struct.unpack(endian + "HL", tiff[2:8])
    if magic != 42:
        raise BadTiffHeader(f"TIFF magic {magic} != 42")
    data = ExifData()
    pointers: dict = {}
    _walk_ifd(tiff, ifd0, endian, "IFD0", data, pointers)
    if _EXIF_IFD_POINTER in pointers:
        _walk_ifd(tiff, pointers[_EXIF_IFD_POINTER], endian, "ExifIFD", data, {})
    if _GPS_IFD_POINTER in pointers:
        _walk_ifd(tiff, pointers[_GPS_IFD_POINTER], endian, "GPS", data, {})
    return data

"""JPEG marker-segment walker.

The tree keeps every byte of the stream (payloads, entropy-coded spans,
padding 0xFF fill, trailing garbage) so serialize(parse(x)) == x. Structural
damage never raises past NotAJpeg: the walk stops and the partial tree is
returned with the truncated flag set.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import MultipleFrameHeaders, NoFrameHeader, NotAJpeg

# markers without a length field
_BARE = {0xD8, 0xD9, 0x01} | set(range(0xD0, 0xD8))

_KIND = {
    0xC0: "SOF0", 0xC2: "SOF2", 0xC4: "DHT",
    0xD8: "SOI", 0xD9: "EOI", 0xDA: "SOS", 0xDB: "DQT", 0xFE: "COM",
}

SUBSAMPLING_NAMES = {
    (1, 1): "4:4:4", (1, 2): "4:4:0", (2, 1): "4:2:2",
    (2, 2): "4:2:0", (4, 1): "4:1:1", (4, 2): "4:1:0",
}


def marker_kind(marker: int) -> str:
    if 0xE0 <= marker <= 0xEF:
        return f"APP{marker - 0xE0}"
    return _KIND.get(marker, "other")


@dataclass(frozen=True)
class Segment:
    marker: int
    kind: str
    offset: int        # byte index of the 0xFF marker prefix
    length: int        # payload bytes (size field minus 2; 0 for bare markers)
    payload: bytes
    pad_before: int = 0  # fill 0xFF bytes preceding the marker
    entropy: bytes = b""  # scan data following an SOS payload


@dataclass
class SegmentTree:
    segments: list[Segment] = field(default_factory=list)
    truncated: bool = False
    trailing: bytes = b""

    def find(self, kind: str) -> list[Segment]:
        return [s for s in self.segments if s.kind == kind]


def parse_segments(data: bytes) -> SegmentTree:
    if len(data) < 2 or data[0] != 0xFF or data[1] != 0xD8:
        raise NotAJpeg("stream does not begin with an SOI marker")
    tree = SegmentTree()
    n = len(data)
    i = 0
    saw_eoi = False
    while i < n:
        pad = 0
        # tolerate fill bytes: 0xFF repeated before the marker code
        while i + 1 < n and data[i] == 0xFF and data[i + 1] == 0xFF:
            pad += 1
            i += 1
        if i + 1 >= n or data[i] != 0xFF:
            tree.truncated = True
            break
        marker = data[i + 1]
        offset = i - pad
        if marker in _BARE:
            seg = Segment(marker, marker_kind(marker), offset, 0, b"", pad)
            tree.segments.append(seg)
            i += 2
            if marker == 0xD9:
                saw_eoi = True
                tree.trailing = bytes(data[i:])
                break
            continue
        if i + 4 > n:
            tree.truncated = True
            break
        size = (data[i + 2] << 8) | data[i + 3]
        if size < 2 or i + 2 + size > n:
            tree.truncated = True
            break
        payload = bytes(data[i + 4:i + 2 + size])
        i += 2 + size
        entropy = b""
        if marker == 0xDA:
            j = i
            while j + 1 < n:
                if data[j] == 0xFF and data[j + 1] != 0x00 and not (0xD0 <= data[j + 1] <= 0xD7):
                    break
                j += 1
            else:
                j = n  # ran off the end: the rest is entropy data
            entropy = bytes(data[i:j])
            i = j
        tree.segments.append(
            Segment(marker, marker_kind(marker), offset, size - 2, payload, pad, entropy)
        )
    if not saw_eoi:
        tree.truncated = True
    return tree


def serialize(tree: SegmentTree) -> bytes:
    out = bytearray()
    for seg in tree.segments:
        out += b"\xff" * seg.pad_before
        out += bytes((0xFF, seg.marker))
        if seg.marker not in _BARE:
            size = seg.length + 2
            out += bytes(((size >> 8) & 0xFF, size & 0xFF))
            out += seg.payload
        out += seg.entropy
    out += tree.trailing
    return bytes(out)


def parse_sof(seg: Segment) -> dict:
    """Decode a frame header payload: precision, dimensions, per-component
    sampling factors."""
    p = seg.payload
    if len(p) < 6:
        raise ValueError("frame header payload too short")
    precision = p[0]
    height = (p[1] << 8) | p[2]
    width = (p[3] << 8) | p[4]
    ncomp = p[5]
    comps = []
    for c in range(ncomp):
        base = 6 + 3 * c
        if base + 3 > len(p):
            break
        comps.append({
            "id": p[base],
            "h": p[base + 1] >> 4,
            "v": p[base + 1] & 0x0F,
            "tq": p[base + 2],
        })
    return {
        "precision": precision,
        "width": width,
        "height": height,
        "components": comps,
    }


def subsampling_string(sof: dict) -> str:
    comps = sof["components"]
    if len(comps) < 3:
        return ""
    luma = comps[0]
    ratio = SUBSAMPLING_NAMES.get((luma["h"], luma["v"]))
    if ratio is None:
        ratio = f"{luma['h']}x{luma['v']}"
    return f"YCbCr{ratio} ({luma['h']} {luma['v']})"


def detect_encoding(tree: SegmentTree) -> dict:
    """Encoding process, subsampling, sample precision and component count
    from the single frame header."""
    frames = tree.find("SOF0") + tree.find("SOF2")
    if not frames:
        raise NoFrameHeader("no SOF0/SOF2 segment")
    if len(frames) > 1:
        raise MultipleFrameHeaders(f"{len(frames)} frame headers")
    seg = frames[0]
    try:
        sof = parse_sof(seg)
    except ValueError as exc:
        raise NoFrameHeader(f"frame header unparseable: {exc}") from exc
    process = ("Baseline DCT, Huffman coding" if seg.kind == "SOF0"
               else "Progressive DCT, Huffman coding")
    return {
        "encoding_process": process,
        "subsampling": subsampling_string(sof),
        "bits": sof["precision"],
        "components": len(sof["components"]),
    }

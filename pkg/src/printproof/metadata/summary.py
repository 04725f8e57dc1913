"""Flattened metadata listing composed from all container parsers.

Field names and formats mirror common forensic dump conventions
(colon-separated listing, dates as YYYY:MM:DD) so outputs diff cleanly
against published metadata dumps.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..core import ContentHash, compute_hash
from ..errors import PrintproofError
from .exif import EXIF_HEADER, ExifData, parse_exif
from .icc import ICC_CHUNK_HEADER, IccSummary, parse_icc
from .iptc import IptcData, parse_iptc
from .quality import estimate_quality
from .segments import SegmentTree, detect_encoding, parse_segments, parse_sof

_JFIF_UNITS = {0: "none", 1: "inches", 2: "cm"}


@dataclass
class MetadataSummary:
    file_size: int
    file_hash: ContentHash
    mime: str
    jfif_version: str | None
    resolution_x: int | None
    resolution_y: int | None
    resolution_unit: str | None
    encoding_process: str | None
    bits_per_sample: int | None
    color_components: int | None
    subsampling: str | None
    image_width: int | None
    image_height: int | None
    image_size: str | None
    megapixels: float | None
    comment: str | None
    exif: ExifData
    iptc: IptcData
    icc: IccSummary | None
    dqt_quality: dict | None
    truncated: bool
    warnings: list[str] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "file": {"size": self.file_size, "hash": str(self.file_hash)},
            "mime": self.mime,
            "jfif": {
                "version": self.jfif_version,
                "resolution_x": self.resolution_x,
                "resolution_y": self.resolution_y,
                "resolution_unit": self.resolution_unit,
            },
            "sof": {
                "encoding_process": self.encoding_process,
                "bits_per_sample": self.bits_per_sample,
                "color_components": self.color_components,
                "subsampling": self.subsampling,
                "image_width": self.image_width,
                "image_height": self.image_height,
                "image_size": self.image_size,
                "megapixels": self.megapixels,
            },
            "exif": [
                {
                    "tag": f"0x{e.tag_id:04X}",
                    "name": e.name,
                    "ifd": e.ifd,
                    "value": _exif_json_value(e.value),
                }
                for e in self.exif.entries
            ],
            "iptc": [
                {"dataset": f"{r.record}:{r.dataset}", "name": r.name, "value": r.value}
                for r in self.iptc.records
            ],
            "icc": _icc_json(self.icc),
            "dqt": self.dqt_quality,
            "comment": self.comment,
            "truncated": self.truncated,
            "warnings": list(self.warnings),
        }

    def to_listing(self) -> str:
        rows: list[tuple[str, object]] = []
        add = rows.append
        add(("File Size", _format_size(self.file_size)))
        add(("MIME Type", self.mime))
        add(("SHA-256", str(self.file_hash)))
        if self.jfif_version is not None:
            add(("JFIF Version", self.jfif_version))
            add(("Resolution Unit", self.resolution_unit))
            add(("X Resolution", self.resolution_x))
            add(("Y Resolution", self.resolution_y))
        for r in self.iptc.records:
            add((r.name, r.value))
        if self.icc is not None:
            add(("Profile CMM Type", self.icc.profile_cmm_type))
            add(("Profile Version", self.icc.version))
            add(("Profile Class", self.icc.device_class))
            add(("Color Space Data", self.icc.color_space))
            add(("Profile Date Time", self.icc.creation_datetime))
            add(("Rendering Intent", self.icc.rendering_intent))
            if self.icc.white_point is not None:
                add(("Media White Point",
                     " ".join(_trim_float(v) for v in self.icc.white_point)))
            add(("Profile Description", self.icc.description))
        for e in self.exif.entries:
            add((e.name, _exif_listing_value(e.value)))
        if self.comment is not None:
            add(("Comment", self.comment))
        if self.image_width is not None:
            add(("Image Width", self.image_width))
            add(("Image Height", self.image_height))
            add(("Encoding Process", self.encoding_process))
            add(("Bits Per Sample", self.bits_per_sample))
            add(("Color Components", self.color_components))
            if self.subsampling:
                add(("Y Cb Cr Sub Sampling", self.subsampling))
            add(("Image Size", self.image_size))
            add(("Megapixels", f"{self.megapixels:.3f}"))
        if self.dqt_quality is not None:
            add(("Estimated Quality",
                 f"{self.dqt_quality['quality']} ({self.dqt_quality['confidence']})"))
        if self.truncated:
            add(("Truncated", "yes"))
        for w in self.warnings:
            add(("Warning", w))
        width = max(len(name) for name, _ in rows)
        return "\n".join(f"{name:<{width}} : {value}" for name, value in rows)


def _format_size(n: int) -> str:
    if n >= 1024:
        return f"{n / 1024:.0f} kB"
    return f"{n} bytes"


def _trim_float(v: float) -> str:
    s = f"{v:.5f}".rstrip("0").rstrip(".")
    return s if s else "0"


def _exif_listing_value(value) -> str:
    if isinstance(value, tuple) and len(value) == 2 and all(isinstance(x, int) for x in value):
        num, den = value
        if den == 1:
            return str(num)
        if den != 0:
            return _trim_float(num / den)
        return f"{num}/{den}"
    if isinstance(value, bytes):
        return f"(binary {len(value)} bytes)"
    return str(value)


def _exif_json_value(value):
    if isinstance(value, bytes):
        return {"binary_length": len(value)}
    if isinstance(value, tuple):
        return list(_exif_json_value(v) for v in value)
    return value


def _icc_json(icc: IccSummary | None):
    if icc is None:
        return None
    return {
        "cmm_type": icc.profile_cmm_type,
        "version": icc.version,
        "device_class": icc.device_class,
        "color_space": icc.color_space,
        "description": icc.description,
        "creation_datetime": icc.creation_datetime,
        "rendering_intent": icc.rendering_intent,
        "white_point": list(icc.white_point) if icc.white_point else None,
    }


def summarize(data: bytes) -> MetadataSummary:
    """Parse everything the container offers; per-parser failures degrade to
    warnings so a summary is always produced for decodable files."""
    tree = parse_segments(data)
    warnings: list[str] = []

    jfif_version = resolution_unit = None
    resolution_x = resolution_y = None
    for seg in tree.find("APP0"):
        p = seg.payload
        if p.startswith(b"JFIF\x00") and len(p) >= 12:
            jfif_version = f"{p[5]}.{p[6]:02d}"
            resolution_unit = _JFIF_UNITS.get(p[7], str(p[7]))
            resolution_x = (p[8] << 8) | p[9]
            resolution_y = (p[10] << 8) | p[11]
            break

    sof_info: dict = {}
    try:
        sof_info = detect_encoding(tree)
    except PrintproofError as exc:
        warnings.append(f"{exc.code}: {exc}")
    width = height = None
    frames = tree.find("SOF0") + tree.find("SOF2")
    if len(frames) == 1:
        try:
            parsed = parse_sof(frames[0])
            width, height = parsed["width"], parsed["height"]
        except ValueError as exc:
            warnings.append(f"BAD_SOF: {exc}")

    exif = ExifData()
    for seg in tree.find("APP1"):
        if seg.payload.startswith(EXIF_HEADER):
            try:
                exif = parse_exif(seg.payload)
                warnings.extend(exif.warnings)
            except PrintproofError as exc:
                warnings.append(f"{exc.code}: {exc}")
            break

    iptc = IptcData()
    for seg in tree.find("APP13"):
        try:
            iptc = parse_iptc(seg.payload)
        except PrintproofError as exc:
            warnings.append(f"{exc.code}: {exc}")
        break

    icc = None
    icc_chunks = [seg.payload for seg in tree.find("APP2")
                  if seg.payload.startswith(ICC_CHUNK_HEADER)]
    if icc_chunks:
        try:
            icc = parse_icc(icc_chunks)
        except PrintproofError as exc:
            warnings.append(f"{exc.code}: {exc}")

    comment = None
    for seg in tree.find("COM"):
        comment = seg.payload.decode("latin-1")
        break

    dqt_quality = None
    try:
        dqt_quality = estimate_quality(tree)
    except PrintproofError as exc:
        warnings.append(f"{exc.code}: {exc}")

    return MetadataSummary(
        file_size=len(data),
        file_hash=compute_hash(data),
        mime="image/jpeg",
        jfif_version=jfif_version,
        resolution_x=resolution_x,
        resolution_y=resolution_y,
        resolution_unit=resolution_unit,
        encoding_process=sof_info.get("encoding_process"),
        bits_per_sample=sof_info.get("bits"),
        color_components=sof_info.get("components"),
        subsampling=sof_info.get("subsampling"),
        image_width=width,
        image_height=height,
        image_size=f"{width}x{height}" if width is not None else None,
        megapixels=round(width * height / 1e6, 3) if width is not None else None,
        comment=comment,
        exif=exif,
        iptc=iptc,
        icc=icc,
        dqt_quality=dqt_quality,
        truncated=tree.truncated,
        warnings=warnings,
    )

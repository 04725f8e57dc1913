"""IPTC-IIM datasets from the Photoshop APP13 resource block."""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

PHOTOSHOP_HEADER = b"Photoshop 3.0\x00"
_8BIM = b"8BIM"
_IPTC_RESOURCE = 0x0404

DATASET_NAMES = {
    (1, 90): "Coded Character Set",
    (2, 0): "Record Version",
    (2, 5): "Object Name",
    (2, 10): "Urgency",
    (2, 15): "Category",
    (2, 20): "Supplemental Categories",
    (2, 25): "Keywords",
    (2, 40): "Special Instructions",
    (2, 55): "Date Created",
    (2, 60): "Time Created",
    (2, 62): "Digital Creation Date",
    (2, 63): "Digital Creation Time",
    (2, 65): "Originating Program",
    (2, 70): "Program Version",
    (2, 80): "By-line",
    (2, 85): "By-line Title",
    (2, 90): "City",
    (2, 95): "Province-State",
    (2, 100): "Country-Primary Location Code",
    (2, 101): "Country-Primary Location Name",
    (2, 103): "Original Transmission Reference",
    (2, 105): "Headline",
    (2, 110): "Credit",
    (2, 115): "Source",
    (2, 116): "Copyright Notice",
    (2, 120): "Caption-Abstract",
    (2, 122): "Writer-Editor",
}

_DATE_DATASETS = {(2, 30), (2, 35), (2, 55), (2, 62)}
_TIME_DATASETS = {(2, 60), (2, 63)}


@dataclass(frozen=True)
class IptcRecord:
    record: int
    dataset: int
    value: str

    @property
    def name(self) -> str:
        return DATASET_NAMES.get((self.record, self.dataset),
                                 f"IPTC {self.record}:{self.dataset}")


@dataclass
class IptcData:
    records: list[IptcRecord] = field(default_factory=list)

    def values(self, record: int, dataset: int) -> list[str]:
        return [r.value for r in self.records
                if r.record == record and r.dataset == dataset]

    def first(self, record: int, dataset: int) -> str | None:
        vals = self.values(record, dataset)
        return vals[0] if vals else None


def _format_value(record: int, dataset: int, raw: bytes) -> str:
    key = (record, dataset)
    if key == (2, 0) and len(raw) == 2:  # record version is binary
        return str(struct.unpack(">H", raw)[0])
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError:
        text = raw.decode("latin-1")
    if key in _DATE_DATASETS and len(text) == 8 and text.isdigit():
        return f"{text[0:4]}:{text[4:6]}:{text[6:8]}"
    if key in _TIME_DATASETS and len(text) >= 6:
        hms = f"{text[0:2]}:{text[2:4]}:{text[4:6]}"
        zone = text[6:]
        if len(zone) == 5 and zone[0] in "+-":
            hms += f"{zone[0]}{zone[1:3]}:{zone[3:5]}"
        return hms
    return text


def _iter_iim(block: bytes):
    i = 0
    n = len(block)
    while i + 5 <= n:
        if block[i] != 0x1C:
            i += 1
            continue
        record, dataset = block[i + 1], block[i + 2]
        size = (block[i + 3] << 8) | block[i + 4]
        i += 5
        if size & 0x8000:
            # extended dataset: the low 15 bits give the length-field width
            width = size & 0x7FFF
            if width > 4 or i + width > n:
                return
            size = int.from_bytes(block[i:i + width], "big")
            i += width
        if i + size > n:
            return
        yield record, dataset, block[i:i + size]
        i += size


def parse_iptc(app13_payload: bytes) -> IptcData:
    """Decode IIM datasets from the 0x0404 Photoshop image resource.

    A payload without that resource (or without the Photoshop preamble)
    yields an empty IptcData; absence is not a fault.
    """
    data = IptcData()
    p = app13_payload
    if not p.startswith(PHOTOSHOP_HEADER):
        return data
    i = len(PHOTOSHOP_HEADER)
    n = len(p)
    while i + 12 <= n:
        if p[i:i + 4] != _8BIM:
            break
        resource_id = (p[i + 4] << 8) | p[i + 5]
        name_len = p[i + 6]
        name_span = 1 + name_len
        if name_span % 2:
            name_span += 1
        j = i + 6 + name_span
        if j + 4 > n:
            break
        size = int.from_bytes(p[j:j + 4], "big")
        j += 4
        if j + size > n:
            break
        if resource_id == _IPTC_RESOURCE:
            for record, dataset, raw in _iter_iim(p[j:j + size]):
                data.records.append(
                    IptcRecord(record, dataset, _format_value(record, dataset, raw)))
        i = j + size + (size % 2)
    return data

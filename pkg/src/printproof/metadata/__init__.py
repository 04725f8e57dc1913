from .exif import ExifData, ExifEntry, parse_exif
from .icc import IccSummary, parse_icc
from .iptc import IptcData, IptcRecord, parse_iptc
from .quality import estimate_quality, parse_dqt_tables, scale_table
from .segments import (
    Segment,
    SegmentTree,
    detect_encoding,
    parse_segments,
    serialize,
)
from .summary import MetadataSummary, summarize

__all__ = [
    "ExifData", "ExifEntry", "parse_exif",
    "IccSummary", "parse_icc",
    "IptcData", "IptcRecord", "parse_iptc",
    "estimate_quality", "parse_dqt_tables", "scale_table",
    "Segment", "SegmentTree", "detect_encoding", "parse_segments", "serialize",
    "MetadataSummary", "summarize",
]

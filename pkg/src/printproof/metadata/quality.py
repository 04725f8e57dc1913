"""Quantization-table quality estimation.

Inverts the standard IJG scaling of the reference luminance table: the
scaled candidate table is regenerated for every q and compared against the
parsed one. Integer arithmetic mirrors the reference encoder exactly, so
files produced by an IJG-lineage encoder match with confidence "exact".
"""

from __future__ import annotations

from ..errors import NoQuantTables
from .segments import SegmentTree

# reference tables in natural (row-major) order
LUMA_BASE = (
    16, 11, 10, 16, 24, 40, 51, 61,
    12, 12, 14, 19, 26, 58, 60, 55,
    14, 13, 16, 24, 40, 57, 69, 56,
    14, 17, 22, 29, 51, 87, 80, 62,
    18, 22, 37, 56, 68, 109, 103, 77,
    24, 35, 55, 64, 81, 104, 113, 92,
    49, 64, 78, 87, 103, 121, 120, 101,
    72, 92, 95, 98, 112, 100, 103, 99,
)

CHROMA_BASE = (
    17, 18, 24, 47, 99, 99, 99, 99,
    18, 21, 26, 66, 99, 99, 99, 99,
    24, 26, 56, 99, 99, 99, 99, 99,
    47, 66, 99, 99, 99, 99, 99, 99,
    99, 99, 99, 99, 99, 99, 99, 99,
    99, 99, 99, 99, 99, 99, 99, 99,
    99, 99, 99, 99, 99, 99, 99, 99,
    99, 99, 99, 99, 99, 99, 99, 99,
)

# zigzag scan order: ZIGZAG[k] = natural index of the k-th stored coefficient
ZIGZAG = (
    0, 1, 8, 16, 9, 2, 3, 10,
    17, 24, 32, 25, 18, 11, 4, 5,
    12, 19, 26, 33, 40, 48, 41, 34,
    27, 20, 13, 6, 7, 14, 21, 28,
    35, 42, 49, 56, 57, 50, 43, 36,
    29, 22, 15, 23, 30, 37, 44, 51,
    58, 59, 52, 45, 38, 31, 39, 46,
    53, 60, 61, 54, 47, 55, 62, 63,
)


def scale_table(base: tuple, quality: int) -> tuple:
    """IJG quality scaling with the baseline clamp to [1, 255]."""
    if not 1 <= quality <= 100:
        raise ValueError("quality must be in 1..100")
    scale = 5000 // quality if quality < 50 else 200 - quality * 2
    return tuple(min(max((v * scale + 50) // 100, 1), 255) for v in base)


def parse_dqt_tables(tree: SegmentTree) -> dict[int, tuple]:
    """All quantization tables keyed by table id, de-zigzagged to natural
    order. Malformed entries are skipped."""
    tables: dict[int, tuple] = {}
    for seg in tree.find("DQT"):
        p = seg.payload
        i = 0
        while i < len(p):
            pq = p[i] >> 4
            tq = p[i] & 0x0F
            i += 1
            width = 2 if pq == 1 else 1
            need = 64 * width
            if pq > 1 or tq > 3 or i + need > len(p):
                break
            natural = [0] * 64
            for k in range(64):
                if width == 1:
                    v = p[i + k]
                else:
                    v = (p[i + 2 * k] << 8) | p[i + 2 * k + 1]
                natural[ZIGZAG[k]] = v
            tables[tq] = tuple(natural)
            i += need
    return tables


def estimate_quality(tree: SegmentTree) -> dict:
    """{"quality": 1..100, "confidence": "exact"|"approximate"} from the
    luminance table (id 0, or the first table present)."""
    tables = parse_dqt_tables(tree)
    if not tables:
        raise NoQuantTables("no parseable DQT table")
    observed = tables.get(0) or next(iter(tables.values()))
    best_q, best_err = 1, None
    for q in range(100, 0, -1):
        ref = scale_table(LUMA_BASE, q)
        err = sum(abs(a - b) for a, b in zip(observed, ref))
        if err == 0:
            return {"quality": q, "confidence": "exact"}
        if best_err is None or err < best_err:
            best_q, best_err = q, err
    return {"quality": best_q, "confidence": "approximate"}

"""printproof: forensic image analysis toolkit.

Library surface re-exported here; see the cli module for the command-line
front end and server for the HTTP service.
"""

from .core import (
    AnalysisMap,
    ContentHash,
    RasterImage,
    compute_hash,
    extract_channel,
    load_image,
    map_to_png,
    normalize_map,
)

__version__ = "0.1.0"

__all__ = [
    "AnalysisMap",
    "ContentHash",
    "RasterImage",
    "compute_hash",
    "extract_channel",
    "load_image",
    "map_to_png",
    "normalize_map",
    "__version__",
]

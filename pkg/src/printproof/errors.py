"""Exception hierarchy. Every error carries a stable machine code used by the
CLI ("error[CODE]: ...") and the HTTP layer."""


class PrintproofError(Exception):
    code = "ERROR"

    def __init__(self, message=""):
        super().__init__(message or self.__doc__ or self.code)


# --- image decoding -------------------------------------------------------

class UnsupportedFormat(PrintproofError):
    """Input magic bytes match neither JPEG nor PNG."""
    code = "UNSUPPORTED_FORMAT"


class CorruptStream(PrintproofError):
    """Decoder failed mid-stream."""
    code = "CORRUPT_STREAM"


class InvalidPercentile(PrintproofError):
    """Percentile must lie in (0, 100]."""
    code = "INVALID_PERCENTILE"


# --- container / metadata parsing ------------------------------------------

class NotAJpeg(PrintproofError):
    """Byte stream does not start with an SOI marker."""
    code = "NOT_A_JPEG"


class NoFrameHeader(PrintproofError):
    """No baseline or progressive frame header present."""
    code = "NO_FRAME_HEADER"


class MultipleFrameHeaders(PrintproofError):
    """More than one frame header present."""
    code = "MULTIPLE_FRAME_HEADERS"


class BadTiffHeader(PrintproofError):
    """APP1 payload does not carry a valid TIFF header."""
    code = "BAD_TIFF_HEADER"


class MissingChunk(PrintproofError):
    """ICC profile chunks are not contiguous 1..count."""
    code = "MISSING_CHUNK"


class BadProfileSignature(PrintproofError):
    """ICC profile header lacks the 'acsp' signature."""
    code = "BAD_PROFILE_SIGNATURE"


class NoQuantTables(PrintproofError):
    """No DQT segment to estimate quality from."""
    code = "NO_QUANT_TABLES"


# --- filters ----------------------------------------------------------------

class EncodeFailure(PrintproofError):
    """JPEG re-encode step failed."""
    code = "ENCODE_FAILURE"


class ImageTooSmall(PrintproofError):
    """Image smaller than the filter's minimum support."""
    code = "IMAGE_TOO_SMALL"


class InvalidParameter(PrintproofError):
    """A filter or metrology parameter is out of range."""
    code = "BAD_FLAG"

    def __init__(self, field, message):
        super().__init__(message)
        self.field = field


# --- metrology ---------------------------------------------------------------

class TooFewSegments(PrintproofError):
    """A vanishing direction needs at least two segments."""
    code = "TOO_FEW_SEGMENTS"


class DegenerateSegments(PrintproofError):
    """Segments too short or all collinear; vanishing point undefined."""
    code = "DEGENERATE_SEGMENTS"


class IdenticalVPs(PrintproofError):
    """Two coincident vanishing points define no horizon."""
    code = "IDENTICAL_VPS"


class HorizonThroughBase(PrintproofError):
    """A base point lies on the horizon; the height is unmeasurable."""
    code = "HORIZON_THROUGH_BASE"


class MissingReference(PrintproofError):
    """No reference-height segment with a physical height."""
    code = "MISSING_REFERENCE"


class ZeroLengthSegment(PrintproofError):
    """Tilt comparison segment has zero length."""
    code = "ZERO_LENGTH_SEGMENT"


class ChainTooShort(PrintproofError):
    """A straightness chain needs at least three points."""
    code = "CHAIN_TOO_SHORT"


class AnnotationError(PrintproofError):
    """Annotation set violates its invariants."""
    code = "BAD_ANNOTATION"

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


# --- report -------------------------------------------------------------------

class HashMismatch(PrintproofError):
    """An analysis references a different image than the report's subject."""
    code = "HASH_MISMATCH"

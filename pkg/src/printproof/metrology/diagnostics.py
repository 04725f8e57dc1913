"""Camera tilt from equal-length feature pairs and lens distortion from
straightness chains."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import ChainTooShort, ZeroLengthSegment
from .annotations import LineSegment

_FLAT_THRESHOLD = 0.001  # normalized sagitta below this counts as straight


@dataclass(frozen=True)
class TiltReport:
    lr_ratio: float
    tb_ratio: float
    verdict: str  # level | tilt_left | tilt_right
    threshold: float

    def to_json_dict(self) -> dict:
        return {
            "lr_ratio": self.lr_ratio,
            "tb_ratio": self.tb_ratio,
            "verdict": self.verdict,
            "threshold": self.threshold,
        }


def tilt_report(left: LineSegment, right: LineSegment, top: LineSegment,
                bottom: LineSegment, threshold: float = 0.01) -> TiltReport:
    """Compare annotated images of real-world equal-length features.

    A longer left edge means that side of the scene sat closer to the
    reproduction camera, i.e. the camera was tilted to the right.
    """
    for seg in (left, right, top, bottom):
        if seg.length() == 0.0:
            raise ZeroLengthSegment(f"segment {seg.id!r} has zero length")
    lr = left.length() / right.length()
    tb = top.length() / bottom.length()
    if lr > 1.0 + threshold:
        verdict = "tilt_right"
    elif lr < 1.0 - threshold:
        verdict = "tilt_left"
    else:
        verdict = "level"
    return TiltReport(lr_ratio=lr, tb_ratio=tb, verdict=verdict, threshold=threshold)


@dataclass(frozen=True)
class DistortionProfile:
    max_sagitta_px: float
    normalized_sagitta: float
    sign: str  # pincushion | barrel | none

    def to_json_dict(self) -> dict:
        return {
            "max_sagitta_px": self.max_sagitta_px,
            "normalized_sagitta": self.normalized_sagitta,
            "sign": self.sign,
        }


def distortion_profile(chain: list[tuple[float, float]],
                       image_center: tuple[float, float]) -> DistortionProfile:
    """Bow of a known-straight edge.

    The sagitta is the perpendicular deviation of interior chain points from
    the chord between the endpoints. A bulge away from the image center is
    pincushion distortion; toward it, barrel.
    """
    if len(chain) < 3:
        raise ChainTooShort(f"need >= 3 points, got {len(chain)}")
    p0, pn = chain[0], chain[-1]
    chord = math.hypot(pn[0] - p0[0], pn[1] - p0[1])
    if chord == 0.0:
        raise ChainTooShort("chain endpoints coincide")
    nx = -(pn[1] - p0[1]) / chord
    ny = (pn[0] - p0[0]) / chord
    sagittas = [
        (q[0] - p0[0]) * nx + (q[1] - p0[1]) * ny
        for q in chain[1:-1]
    ]
    peak = max(sagittas, key=abs)
    normalized = abs(peak) / chord
    center_side = (image_center[0] - p0[0]) * nx + (image_center[1] - p0[1]) * ny
    if normalized < _FLAT_THRESHOLD or center_side == 0.0:
        sign = "none"
    elif (peak > 0) == (center_side > 0):
        sign = "barrel"
    else:
        sign = "pincushion"
    return DistortionProfile(max_sagitta_px=abs(peak),
                             normalized_sagitta=normalized, sign=sign)

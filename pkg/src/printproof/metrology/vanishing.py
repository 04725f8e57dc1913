"""Vanishing points and the horizon in homogeneous coordinates.

Lines are normalized so their first two components form a unit normal; the
dot product with a finite homogeneous point is then the signed point-to-line
distance in pixels.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateSegments, IdenticalVPs, TooFewSegments
from .annotations import LineSegment

_INFINITY_RATIO = 1e-9
_COLLINEAR_RATIO = 1e-10
_MIN_SEGMENT_PX = 2.0


def hpoint(x: float, y: float) -> np.ndarray:
    return np.array([x, y, 1.0])


def normalize_line(line: np.ndarray) -> np.ndarray:
    n = np.hypot(line[0], line[1])
    if n == 0.0:
        n = np.linalg.norm(line)
    if n == 0.0:
        raise ValueError("zero line vector")
    return line / n


def line_through(a: tuple[float, float], b: tuple[float, float]) -> np.ndarray:
    line = np.cross(hpoint(*a), hpoint(*b))
    return normalize_line(line)


@dataclass(frozen=True)
class VanishingPoint:
    homogeneous: np.ndarray  # unit 3-vector
    rms_residual: float      # pixels for finite VPs, sin(angle) at infinity
    support: int

    def __post_init__(self):
        self.homogeneous.setflags(write=False)

    @property
    def is_infinite(self) -> bool:
        v = self.homogeneous
        return abs(v[2]) <= _INFINITY_RATIO * np.hypot(v[0], v[1])

    def point(self) -> tuple[float, float] | None:
        v = self.homogeneous
        if self.is_infinite:
            return None
        return (v[0] / v[2], v[1] / v[2])

    def direction(self) -> tuple[float, float]:
        v = self.homogeneous
        n = np.hypot(v[0], v[1])
        if n == 0.0:
            return (0.0, 0.0)
        return (v[0] / n, v[1] / n)

    def to_json_dict(self) -> dict:
        return {
            "point": list(self.point()) if not self.is_infinite else None,
            "direction": list(self.direction()),
            "homogeneous": [float(c) for c in self.homogeneous],
            "rms_residual": self.rms_residual,
            "support": self.support,
        }


def fit_vanishing_point(segments: list[LineSegment]) -> VanishingPoint:
    """Least-squares intersection of the segments' lines.

    The unit homogeneous vector minimizing the summed squared line-point
    products is the smallest eigenvector of the lines' scatter matrix.
    """
    if len(segments) < 2:
        raise TooFewSegments(f"need >= 2 segments, got {len(segments)}")
    short = [s.id for s in segments if s.length() <= _MIN_SEGMENT_PX]
    if short:
        raise DegenerateSegments(f"segments too short: {short}")
    lines = [line_through(s.a, s.b) for s in segments]
    scatter = np.zeros((3, 3))
    for line in lines:
        scatter += np.outer(line, line)
    evals, evecs = np.linalg.eigh(scatter)
    if evals[1] <= _COLLINEAR_RATIO * max(evals[2], 1.0):
        raise DegenerateSegments("all segments lie on one line")
    v = evecs[:, 0]
    v = v / np.linalg.norm(v)
    # canonical orientation: positive last coordinate, else positive x
    if v[2] < 0 or (v[2] == 0 and v[0] < 0):
        v = -v
    vp = VanishingPoint(homogeneous=v, rms_residual=0.0, support=len(segments))
    residual = _rms_residual(vp, lines)
    return VanishingPoint(homogeneous=v, rms_residual=residual, support=len(segments))


def _rms_residual(vp: VanishingPoint, lines: list[np.ndarray]) -> float:
    if vp.is_infinite:
        dx, dy = vp.direction()
        errs = [line[0] * dx + line[1] * dy for line in lines]
    else:
        x, y = vp.point()
        p = hpoint(x, y)
        errs = [float(line @ p) for line in lines]
    return float(np.sqrt(np.mean(np.square(errs))))


def fit_horizon(vp_a: VanishingPoint, vp_b: VanishingPoint) -> np.ndarray:
    """Vanishing line through two vanishing points of ground-parallel
    directions. Normalized like any other line when finite; the line at
    infinity (both VPs infinite) is returned as (0, 0, 1)."""
    h = np.cross(vp_a.homogeneous, vp_b.homogeneous)
    norm = np.linalg.norm(h)
    if norm < 1e-12:
        raise IdenticalVPs("vanishing points coincide")
    if np.hypot(h[0], h[1]) <= _INFINITY_RATIO * norm:
        return np.array([0.0, 0.0, 1.0])
    return normalize_line(h)

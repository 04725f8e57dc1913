"""Reference-based height transfer along vertical vanishing geometry.

The reference and target segments stand on the ground plane (their `a`
endpoint is the base). The reference top is carried onto the target's
vertical through the horizon; the remaining ratio of image distances,
anchored at the vertical vanishing point, is projectively the ratio of
world heights.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from ..errors import HorizonThroughBase, MissingReference
from .annotations import AnnotationSet, LineSegment
from .vanishing import VanishingPoint, hpoint

_TINY = 1e-9

METHOD_NAME = "cross-ratio single-view metrology"


@dataclass(frozen=True)
class HeightEstimate:
    target_id: str
    height_cm: float
    interval_cm: tuple[float, float]
    method: str = METHOD_NAME

    def to_json_dict(self) -> dict:
        return {
            "target_id": self.target_id,
            "height_cm": self.height_cm,
            "interval_cm": list(self.interval_cm),
            "method": self.method,
        }


def _dist(p: tuple[float, float], q: tuple[float, float]) -> float:
    return math.hypot(p[0] - q[0], p[1] - q[1])


def height_from_points(b, t, b_ref, t_ref, ref_height_cm: float,
                       vertical_vp: VanishingPoint, horizon: np.ndarray) -> float:
    """One evaluation of the transfer construction for explicit endpoints."""
    bh = hpoint(*b)
    if abs(float(horizon @ bh)) < _TINY:
        raise HorizonThroughBase("target base lies on the horizon")
    if _dist(b, b_ref) < _TINY:
        t_tilde = t_ref  # shared base: the reference top is already on the target vertical
    else:
        base_dir = np.cross(bh, hpoint(*b_ref))
        u = np.cross(base_dir, horizon)
        transfer = np.cross(u, hpoint(*t_ref))
        vertical = np.cross(bh, vertical_vp.homogeneous)
        tt = np.cross(transfer, vertical)
        if abs(tt[2]) < _TINY * max(np.hypot(tt[0], tt[1]), 1.0):
            raise HorizonThroughBase("height transfer degenerates to infinity")
        t_tilde = (tt[0] / tt[2], tt[1] / tt[2])
    d_tb = _dist(t, b)
    d_ttb = _dist(t_tilde, b)
    if d_ttb < _TINY:
        raise HorizonThroughBase("transferred reference height collapses onto the base")
    if vertical_vp.is_infinite:
        return ref_height_cm * d_tb / d_ttb
    v = vertical_vp.point()
    d_vt = _dist(v, t)
    d_vtt = _dist(v, t_tilde)
    if d_vt < _TINY:
        raise HorizonThroughBase("target top coincides with the vertical vanishing point")
    return ref_height_cm * (d_tb * d_vtt) / (d_ttb * d_vt)


_CORNERS = ((-1.0, -1.0), (-1.0, 1.0), (1.0, -1.0), (1.0, 1.0))


def _corner_assignments(n_points: int, rng: np.random.Generator | None):
    if n_points <= 4:
        yield from itertools.product(range(4), repeat=n_points)
        return
    gen = rng if rng is not None else np.random.default_rng(0)
    for _ in range(256):
        yield tuple(int(c) for c in gen.integers(0, 4, size=n_points))


def perturbed_range(evaluate, points: list[tuple[float, float]], magnitude: float,
                    rng: np.random.Generator | None = None) -> tuple[float, float]:
    """Min/max of evaluate() over corner displacements of every point.

    Up to four points are swept exhaustively (all 4^k corner combinations);
    more points fall back to 256 seeded random corner draws. Evaluations that
    land on a degenerate configuration are skipped.
    """
    lo = math.inf
    hi = -math.inf
    for combo in _corner_assignments(len(points), rng):
        moved = [
            (p[0] + magnitude * _CORNERS[c][0], p[1] + magnitude * _CORNERS[c][1])
            for p, c in zip(points, combo)
        ]
        try:
            val = evaluate(moved)
        except HorizonThroughBase:
            continue
        lo = min(lo, val)
        hi = max(hi, val)
    return lo, hi


def estimate_height(ann: AnnotationSet, vertical_vp: VanishingPoint,
                    horizon: np.ndarray, target: LineSegment | None = None,
                    perturb_px: float = 2.0,
                    rng: np.random.Generator | None = None) -> HeightEstimate:
    """Height of one target segment with a perturbation interval.

    The interval re-runs the construction with every annotation endpoint
    displaced by +/-perturb_px corner offsets and reports the min/max.
    """
    refs = ann.by_role("reference_height")
    if not refs or ann.reference_height_cm is None:
        raise MissingReference("annotation set carries no usable reference height")
    ref = refs[0]
    if target is None:
        targets = ann.by_role("target_height")
        if not targets:
            raise MissingReference("no target_height segment to measure")
        target = targets[0]
    z_ref = float(ann.reference_height_cm)

    nominal = height_from_points(target.a, target.b, ref.a, ref.b, z_ref,
                                 vertical_vp, horizon)

    def evaluate(moved):
        b, t, b_r, t_r = moved
        return height_from_points(b, t, b_r, t_r, z_ref, vertical_vp, horizon)

    lo, hi = perturbed_range(evaluate, [target.a, target.b, ref.a, ref.b],
                             perturb_px, rng)
    lo = min(lo, nominal)
    hi = max(hi, nominal)
    return HeightEstimate(target_id=target.id, height_cm=nominal,
                          interval_cm=(lo, hi))

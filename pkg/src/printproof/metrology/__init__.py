"""Single-view geometric analysis over an annotation set.

`analyze` is the one entry point the CLI and server share: it fits the
available vanishing points, derives the horizon, and runs the tilt,
distortion, and height measurements the annotations support. Per-item
failures land in `notes` instead of aborting the whole analysis.
"""

from __future__ import annotations

import numpy as np

from ..errors import PrintproofError
from .annotations import AXES, ROLES, AnnotationSet, LineSegment
from .diagnostics import DistortionProfile, TiltReport, distortion_profile, tilt_report
from .height import HeightEstimate, estimate_height, height_from_points, perturbed_range
from .vanishing import VanishingPoint, fit_horizon, fit_vanishing_point
from . import synthetic

__all__ = [
    "AXES", "ROLES", "AnnotationSet", "LineSegment",
    "DistortionProfile", "TiltReport", "distortion_profile", "tilt_report",
    "HeightEstimate", "estimate_height", "height_from_points", "perturbed_range",
    "VanishingPoint", "fit_horizon", "fit_vanishing_point",
    "analyze", "chain_points", "synthetic",
]

_TILT_IDS = ("left", "right", "top", "bottom")


def chain_points(segments: list[LineSegment]) -> list[tuple[float, float]]:
    """Flatten consecutive straightness-chain segments into an ordered point
    list, merging shared endpoints."""
    points: list[tuple[float, float]] = []
    for seg in segments:
        if not points:
            points.append(seg.a)
        elif points[-1] != seg.a:
            points.append(seg.a)
        points.append(seg.b)
    return points


def analyze(ann: AnnotationSet, image_width: int | None = None,
            image_height: int | None = None, seed: int = 0) -> dict:
    ann.validate(image_width, image_height)
    rng = np.random.default_rng(seed)
    notes: list[str] = []
    result: dict = {
        "image_hash": ann.image_hash,
        "seed": seed,
        "vanishing_points": {},
        "horizon": None,
        "tilt": None,
        "distortion": None,
        "heights": [],
        "notes": notes,
    }

    vps: dict[str, VanishingPoint] = {}
    for axis in ("x", "y", "z_vertical"):
        segs = ann.by_axis(axis)
        if len(segs) < 2:
            continue
        try:
            vps[axis] = fit_vanishing_point(segs)
            result["vanishing_points"][axis] = vps[axis].to_json_dict()
        except PrintproofError as exc:
            notes.append(f"vanishing point {axis}: {exc.code}: {exc}")

    horizon = None
    if "x" in vps and "y" in vps:
        try:
            horizon = fit_horizon(vps["x"], vps["y"])
            result["horizon"] = [float(c) for c in horizon]
        except PrintproofError as exc:
            notes.append(f"horizon: {exc.code}: {exc}")
    else:
        notes.append("horizon: needs vanishing points for both the x and y axes")

    tilt_segs = {sid: ann.by_id(sid) for sid in _TILT_IDS}
    if all(tilt_segs.values()):
        try:
            result["tilt"] = tilt_report(*(tilt_segs[sid] for sid in _TILT_IDS)).to_json_dict()
        except PrintproofError as exc:
            notes.append(f"tilt: {exc.code}: {exc}")

    chain_segs = ann.by_role("straightness_chain")
    if chain_segs:
        if image_width and image_height:
            try:
                profile = distortion_profile(
                    chain_points(chain_segs),
                    (image_width / 2.0, image_height / 2.0))
                result["distortion"] = profile.to_json_dict()
            except PrintproofError as exc:
                notes.append(f"distortion: {exc.code}: {exc}")
        else:
            notes.append("distortion: image dimensions required to place the center")

    targets = ann.by_role("target_height")
    if targets:
        if "z_vertical" not in vps:
            notes.append("heights: needs >= 2 z_vertical segments for the vertical vanishing point")
        elif horizon is None:
            notes.append("heights: needs a horizon")
        else:
            for target in targets:
                try:
                    est = estimate_height(ann, vps["z_vertical"], horizon,
                                          target=target, rng=rng)
                    result["heights"].append(est.to_json_dict())
                except PrintproofError as exc:
                    notes.append(f"height {target.id}: {exc.code}: {exc}")
    return result

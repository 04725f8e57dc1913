"""Ideal pinhole projection of labeled 3D scenes.

This is the ground-truth generator behind the geometry tests and the shipped
demo scene: a camera with known intrinsics and pose projects world points
(cm; X right, Y depth, Z up; ground plane Z=0) onto an image (px; x right,
y down). Vanishing points and the horizon follow analytically from the
camera, so estimates can be checked against exact values.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import numpy as np
from PIL import Image, ImageDraw

from .annotations import AnnotationSet, LineSegment

FULL_FRAME_WIDTH_MM = 36.0


@dataclass(frozen=True)
class PinholeCamera:
    width: int
    height: int
    focal_px: float
    rotation: np.ndarray  # (3,3) world -> camera
    position: np.ndarray  # (3,) world, cm

    def __post_init__(self):
        self.rotation.setflags(write=False)
        self.position.setflags(write=False)

    def project(self, point) -> tuple[float, float]:
        p = self.rotation @ (np.asarray(point, dtype=np.float64) - self.position)
        if p[2] <= 1e-9:
            raise ValueError("point behind the camera")
        u = self.focal_px * p[0] / p[2] + self.width / 2.0
        v = self.focal_px * p[1] / p[2] + self.height / 2.0
        return (u, v)

    def vanishing_point_h(self, direction) -> np.ndarray:
        """Homogeneous image of a world direction (unnormalized)."""
        d = self.rotation @ np.asarray(direction, dtype=np.float64)
        return np.array([
            self.focal_px * d[0] + (self.width / 2.0) * d[2],
            self.focal_px * d[1] + (self.height / 2.0) * d[2],
            d[2],
        ])

    def horizon_h(self) -> np.ndarray:
        h = np.cross(self.vanishing_point_h((1.0, 0.0, 0.0)),
                     self.vanishing_point_h((0.0, 1.0, 0.0)))
        n = np.hypot(h[0], h[1])
        return h / n if n > 0 else h


def make_camera(focal_mm: float, width: int, height: int, position,
                yaw_deg: float = 0.0, pitch_deg: float = 0.0,
                roll_deg: float = 0.0) -> PinholeCamera:
    """Camera standing at `position` (cm), looking toward +Y; yaw turns right,
    pitch raises the view, roll twists about the optical axis."""
    yaw = math.radians(yaw_deg)
    pitch = math.radians(pitch_deg)
    roll = math.radians(roll_deg)
    forward = np.array([
        math.sin(yaw) * math.cos(pitch),
        math.cos(yaw) * math.cos(pitch),
        math.sin(pitch),
    ])
    right = np.array([math.cos(yaw), -math.sin(yaw), 0.0])
    down = np.cross(forward, right)
    right, down = (
        math.cos(roll) * right + math.sin(roll) * down,
        -math.sin(roll) * right + math.cos(roll) * down,
    )
    rotation = np.vstack([right, down, forward])
    return PinholeCamera(
        width=width, height=height,
        focal_px=focal_mm * width / FULL_FRAME_WIDTH_MM,
        rotation=rotation,
        position=np.asarray(position, dtype=np.float64),
    )


@dataclass
class SyntheticScene:
    camera: PinholeCamera
    annotations: AnnotationSet
    target_truth_cm: dict[str, float]
    reference_height_cm: float
    world_segments: dict[str, tuple] = field(default_factory=dict)

    @property
    def analytic_vps(self) -> dict[str, np.ndarray]:
        return {
            "x": self.camera.vanishing_point_h((1.0, 0.0, 0.0)),
            "y": self.camera.vanishing_point_h((0.0, 1.0, 0.0)),
            "z_vertical": self.camera.vanishing_point_h((0.0, 0.0, 1.0)),
        }


def _seg(cam: PinholeCamera, seg_id: str, p0, p1, axis: str, role: str) -> LineSegment:
    return LineSegment(id=seg_id, a=cam.project(p0), b=cam.project(p1),
                       axis=axis, role=role)


def build_scene(camera: PinholeCamera, reference_height_cm: float,
                reference_pos, targets: dict[str, tuple],
                structure: dict[str, tuple]) -> SyntheticScene:
    """Assemble an annotation set from labeled world segments.

    `targets` maps segment id -> (x, y, height_cm); `structure` maps
    id -> (p0, p1, axis).
    """
    segments = []
    world: dict[str, tuple] = {}
    for seg_id, (p0, p1, axis) in structure.items():
        segments.append(_seg(camera, seg_id, p0, p1, axis, "structure"))
        world[seg_id] = (p0, p1)
    rx, ry = reference_pos
    ref_w = ((rx, ry, 0.0), (rx, ry, reference_height_cm))
    segments.append(_seg(camera, "reference", *ref_w, "z_vertical", "reference_height"))
    world["reference"] = ref_w
    truths = {}
    for seg_id, (tx, ty, h) in targets.items():
        tgt_w = ((tx, ty, 0.0), (tx, ty, h))
        segments.append(_seg(camera, seg_id, *tgt_w, "z_vertical", "target_height"))
        world[seg_id] = tgt_w
        truths[seg_id] = h
    ann = AnnotationSet(image_hash="", segments=segments,
                        reference_height_cm=reference_height_cm)
    return SyntheticScene(camera=camera, annotations=ann,
                          target_truth_cm=truths,
                          reference_height_cm=reference_height_cm,
                          world_segments=world)


def random_scene(rng: np.random.Generator, width: int = 800,
                 height: int = 600) -> SyntheticScene:
    """A randomized, well-conditioned indoor scene: floor grid for the x/y
    vanishing directions, vertical posts, one reference and one target."""
    for _ in range(200):
        cam = make_camera(
            focal_mm=float(rng.uniform(20, 50)),
            width=width, height=height,
            position=(float(rng.uniform(-60, 60)), 0.0, float(rng.uniform(120, 180))),
            yaw_deg=float(rng.uniform(-12, 12)),
            pitch_deg=float(rng.uniform(-6, 2)),
            roll_deg=float(rng.uniform(-2, 2)),
        )
        depth = float(rng.uniform(350, 650))
        half_span = depth * width / (2.5 * cam.focal_px)
        structure = {}
        for i, z in enumerate((0.0, float(rng.uniform(120, 260)))):
            y = depth + float(rng.uniform(-80, 80))
            structure[f"x{i}"] = ((-half_span, y, z), (half_span, y, z), "x")
        for i, x in enumerate((-half_span * 0.8, half_span * 0.8)):
            structure[f"y{i}"] = ((x, depth - 120.0, 0.0), (x, depth + 120.0, 0.0), "y")
        for i in range(2):
            x = float(rng.uniform(-half_span * 0.7, half_span * 0.7))
            y = depth + float(rng.uniform(-60, 60))
            structure[f"v{i}"] = ((x, y, 0.0), (x, y, float(rng.uniform(150, 250))), "z_vertical")
        ref_h = float(rng.uniform(180, 220))
        ref_pos = (float(rng.uniform(-half_span * 0.6, half_span * 0.6)),
                   depth + float(rng.uniform(-60, 60)))
        tgt_h = float(rng.uniform(150, 200))
        tgt_pos = (float(rng.uniform(-half_span * 0.6, half_span * 0.6)),
                   depth + float(rng.uniform(-60, 60)))
        try:
            scene = build_scene(cam, ref_h, ref_pos, {"subject": (*tgt_pos, tgt_h)},
                                structure)
        except ValueError:
            continue
        if _well_conditioned(scene, width, height):
            return scene
    raise RuntimeError("could not draw a well-conditioned scene")


def _well_conditioned(scene: SyntheticScene, width: int, height: int) -> bool:
    margin_x, margin_y = 0.1 * width, 0.1 * height
    for seg in scene.annotations.segments:
        for px, py in (seg.a, seg.b):
            if not (-margin_x <= px <= width + margin_x
                    and -margin_y <= py <= height + margin_y):
                return False
        if seg.role in ("reference_height", "target_height") and seg.length() < 80:
            return False
        if seg.role == "structure" and seg.length() < 60:
            return False
    return True


def noisy_annotations(ann: AnnotationSet, rng: np.random.Generator,
                      magnitude: float = 1.0) -> AnnotationSet:
    """Uniform +/-magnitude jitter on every endpoint coordinate."""
    segs = [
        LineSegment(
            id=s.id,
            a=(s.a[0] + float(rng.uniform(-magnitude, magnitude)),
               s.a[1] + float(rng.uniform(-magnitude, magnitude))),
            b=(s.b[0] + float(rng.uniform(-magnitude, magnitude)),
               s.b[1] + float(rng.uniform(-magnitude, magnitude))),
            axis=s.axis, role=s.role,
        )
        for s in ann.segments
    ]
    return AnnotationSet(image_hash=ann.image_hash, segments=segs,
                         reference_height_cm=ann.reference_height_cm,
                         notes=ann.notes)


# --- shipped demo scene -------------------------------------------------------

DEMO_WIDTH = 800
DEMO_HEIGHT = 600
DEMO_REFERENCE_CM = 198.0  # door edge
DEMO_TARGET_CM = 183.0     # standing figure


def demo_camera() -> PinholeCamera:
    return make_camera(focal_mm=28.0, width=DEMO_WIDTH, height=DEMO_HEIGHT,
                       position=(10.0, 0.0, 160.0), yaw_deg=4.0, pitch_deg=-1.5)


def demo_scene() -> SyntheticScene:
    cam = demo_camera()
    structure = {
        "x_floor": ((-220.0, 430.0, 0.0), (200.0, 430.0, 0.0), "x"),
        "x_lintel": ((-220.0, 430.0, 205.0), (200.0, 430.0, 205.0), "x"),
        "y_floor_left": ((-180.0, 310.0, 0.0), (-180.0, 560.0, 0.0), "y"),
        "y_floor_right": ((170.0, 310.0, 0.0), (170.0, 560.0, 0.0), "y"),
        "door_far_edge": ((-160.0, 430.0, 0.0), (-160.0, 430.0, 198.0), "z_vertical"),
        "post": ((150.0, 470.0, 0.0), (150.0, 470.0, 210.0), "z_vertical"),
        # equal-length wall features for the tilt comparison
        "left": ((-200.0, 420.0, 40.0), (-200.0, 420.0, 160.0), "free"),
        "right": ((190.0, 420.0, 40.0), (190.0, 420.0, 160.0), "free"),
        "top": ((-120.0, 425.0, 200.0), (120.0, 425.0, 200.0), "free"),
        "bottom": ((-120.0, 425.0, 10.0), (120.0, 425.0, 10.0), "free"),
    }
    scene = build_scene(
        cam, DEMO_REFERENCE_CM, (-100.0, 430.0),
        targets={"figure": (55.0, 460.0, DEMO_TARGET_CM)},
        structure=structure,
    )
    # straightness chain: collinear samples along the lintel
    p0, p1 = structure["x_lintel"][:2]
    chain_pts = [cam.project(np.asarray(p0) + t * (np.asarray(p1) - np.asarray(p0)))
                 for t in (0.0, 0.25, 0.5, 0.75, 1.0)]
    chain_segs = [
        LineSegment(id=f"chain_{i}", a=chain_pts[i], b=chain_pts[i + 1],
                    axis="free", role="straightness_chain")
        for i in range(len(chain_pts) - 1)
    ]
    scene.annotations.segments.extend(chain_segs)
    return scene


def render_demo_image() -> bytes:
    """Deterministic PNG of the demo scene: projected structure drawn over a
    plain vignette so the examiner UI has something to annotate."""
    scene = demo_scene()
    yy, xx = np.mgrid[0:DEMO_HEIGHT, 0:DEMO_WIDTH].astype(np.float64)
    shade = 205 - 35 * (yy / DEMO_HEIGHT) - 12 * np.abs(xx / DEMO_WIDTH - 0.5)
    base = np.stack([shade + 8, shade + 4, shade], axis=2)
    img = Image.fromarray(np.clip(base, 0, 255).astype(np.uint8), mode="RGB")
    draw = ImageDraw.Draw(img)
    colors = {
        "structure": (60, 60, 70),
        "reference_height": (140, 60, 40),
        "target_height": (40, 80, 140),
        "straightness_chain": (90, 90, 90),
    }
    for seg in scene.annotations.segments:
        draw.line([seg.a, seg.b], fill=colors.get(seg.role, (60, 60, 70)), width=3)
    buf = io.BytesIO()
    img.save(buf, "PNG")
    return buf.getvalue()

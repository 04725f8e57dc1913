"""Analyst-drawn line segments and the annotation-set container.

Coordinates are sub-pixel image positions (x right, y down). Axis tags give
the world direction a segment's 3D original runs along; roles mark what the
segment is used for.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from ..errors import AnnotationError

AXES = ("x", "y", "z_vertical", "free")
ROLES = ("structure", "reference_height", "target_height", "straightness_chain")


@dataclass(frozen=True)
class LineSegment:
    id: str
    a: tuple[float, float]
    b: tuple[float, float]
    axis: str = "free"
    role: str = "structure"

    def length(self) -> float:
        return math.hypot(self.b[0] - self.a[0], self.b[1] - self.a[1])

    def to_json_dict(self) -> dict:
        return {"id": self.id, "a": list(self.a), "b": list(self.b),
                "axis": self.axis, "role": self.role}


@dataclass
class AnnotationSet:
    image_hash: str
    segments: list[LineSegment] = field(default_factory=list)
    reference_height_cm: float | None = None
    notes: str = ""

    def by_axis(self, axis: str) -> list[LineSegment]:
        return [s for s in self.segments if s.axis == axis]

    def by_role(self, role: str) -> list[LineSegment]:
        return [s for s in self.segments if s.role == role]

    def by_id(self, seg_id: str) -> LineSegment | None:
        for s in self.segments:
            if s.id == seg_id:
                return s
        return None

    def validate(self, image_width: int | None = None,
                 image_height: int | None = None) -> None:
        """Raise AnnotationError listing every violated invariant."""
        problems = []
        seen = set()
        for s in self.segments:
            if s.id in seen:
                problems.append(f"duplicate segment id {s.id!r}")
            seen.add(s.id)
            if s.axis not in AXES:
                problems.append(f"{s.id}: unknown axis {s.axis!r}")
            if s.role not in ROLES:
                problems.append(f"{s.id}: unknown role {s.role!r}")
            if s.a == s.b:
                problems.append(f"{s.id}: endpoints coincide")
            if image_width and image_height:
                mx, my = 0.1 * image_width, 0.1 * image_height
                for px, py in (s.a, s.b):
                    if not (-mx <= px <= image_width + mx and -my <= py <= image_height + my):
                        problems.append(
                            f"{s.id}: point ({px}, {py}) outside bounds plus 10% margin")
        refs = self.by_role("reference_height")
        if refs and self.reference_height_cm is None:
            problems.append("reference segment present but reference_height_cm missing")
        if len(refs) > 1:
            problems.append("more than one reference_height segment")
        if self.reference_height_cm is not None and not self.reference_height_cm > 0:
            problems.append("reference_height_cm must be > 0")
        if problems:
            raise AnnotationError(problems)

    def to_json_dict(self) -> dict:
        return {
            "image_hash": self.image_hash,
            "segments": [s.to_json_dict() for s in self.segments],
            "reference_height_cm": self.reference_height_cm,
            "notes": self.notes,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json_dict(cls, obj: dict) -> "AnnotationSet":
        try:
            segments = [
                LineSegment(
                    id=str(s["id"]),
                    a=(float(s["a"][0]), float(s["a"][1])),
                    b=(float(s["b"][0]), float(s["b"][1])),
                    axis=s.get("axis", "free"),
                    role=s.get("role", "structure"),
                )
                for s in obj.get("segments", [])
            ]
            ref = obj.get("reference_height_cm")
            return cls(
                image_hash=str(obj.get("image_hash", "")),
                segments=segments,
                reference_height_cm=float(ref) if ref is not None else None,
                notes=str(obj.get("notes", "")),
            )
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise AnnotationError([f"malformed annotation JSON: {exc}"]) from exc

    @classmethod
    def from_json(cls, text: str | bytes) -> "AnnotationSet":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise AnnotationError([f"invalid JSON: {exc}"]) from exc
        if not isinstance(obj, dict):
            raise AnnotationError(["annotation JSON must be an object"])
        return cls.from_json_dict(obj)

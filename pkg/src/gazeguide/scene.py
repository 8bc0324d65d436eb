"""Windshield-plane world model: scenarios, objects, hazards, and scenario file I/O.

Coordinate frame: normalized [0,1] x [0,1], origin top-left, x rightward,
y downward. All engine geometry lives in this plane.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum

from .errors import ParseError, ValidationError

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class Point2:
    x: float
    y: float

    def dist(self, other: "Point2") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)

    def as_list(self) -> list[float]:
        return [self.x, self.y]


class Severity(Enum):
    LOW = "Low"
    MEDIUM = "Medium"
    HIGH = "High"


@dataclass(frozen=True)
class SceneObject:
    id: str
    centroid: Point2
    half_extent: Point2
    salience_weight: float
    moving: bool


@dataclass(frozen=True)
class HazardSpec:
    position: Point2
    severity: Severity


@dataclass(frozen=True)
class SceneSpec:
    id: str
    objects: tuple[SceneObject, ...]
    hazard: HazardSpec
    distraction_point: Point2
    duration_s: float


def _check_unit(point: Point2, name: str) -> None:
    if not (0.0 <= point.x <= 1.0 and 0.0 <= point.y <= 1.0):
        raise ValidationError(f"{name} out of range")


def validate_scene(scene: SceneSpec) -> SceneSpec:
    """Check every scene invariant; raises ValidationError naming the first violation."""
    if not scene.id:
        raise ValidationError("id must be non-empty")
    if not scene.duration_s > 0:
        raise ValidationError("duration_s must be > 0")
    _check_unit(scene.hazard.position, "hazard.position")
    _check_unit(scene.distraction_point, "distraction_point")
    seen: set[str] = set()
    for obj in scene.objects:
        if obj.id in seen:
            raise ValidationError(f"objects[{obj.id}].id duplicated")
        seen.add(obj.id)
        for axis, extent in (("x", obj.half_extent.x), ("y", obj.half_extent.y)):
            if not (0.0 < extent <= 0.5):
                raise ValidationError(f"objects[{obj.id}].half_extent.{axis} outside (0, 0.5]")
        if not (0.0 < obj.salience_weight <= 1.0):
            raise ValidationError(f"objects[{obj.id}].salience_weight outside (0, 1]")
        # bounding box must intersect the unit square
        if (obj.centroid.x + obj.half_extent.x < 0.0 or obj.centroid.x - obj.half_extent.x > 1.0
                or obj.centroid.y + obj.half_extent.y < 0.0 or obj.centroid.y - obj.half_extent.y > 1.0):
            raise ValidationError(f"objects[{obj.id}] bounding box outside [0,1]^2")
    return scene


def _point(raw, name: str) -> Point2:
    if (not isinstance(raw, (list, tuple)) or len(raw) != 2
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in raw)):
        raise ParseError(f"{name} must be a [x, y] pair of numbers")
    return Point2(float(raw[0]), float(raw[1]))


def scene_from_dict(doc: dict) -> SceneSpec:
    try:
        severity = Severity(doc["hazard"]["severity"])
    except (KeyError, TypeError) as exc:
        raise ParseError(f"missing or malformed field: {exc}") from None
    except ValueError:
        raise ParseError(f"unknown severity {doc['hazard'].get('severity')!r}") from None
    try:
        objects = tuple(
            SceneObject(
                id=str(o["id"]),
                centroid=_point(o["centroid"], "objects[].centroid"),
                half_extent=_point(o["half_extent"], "objects[].half_extent"),
                salience_weight=float(o["salience_weight"]),
                moving=bool(o["moving"]),
            )
            for o in doc.get("objects", [])
        )
        scene = SceneSpec(
            id=str(doc["id"]),
            objects=objects,
            hazard=HazardSpec(position=_point(doc["hazard"]["position"], "hazard.position"),
                              severity=severity),
            distraction_point=_point(doc["distraction_point"], "distraction_point"),
            duration_s=float(doc["duration_s"]),
        )
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"missing or malformed field: {exc}") from None
    return validate_scene(scene)


def scene_to_dict(scene: SceneSpec) -> dict:
    return {
        "id": scene.id,
        "duration_s": scene.duration_s,
        "hazard": {
            "position": scene.hazard.position.as_list(),
            "severity": scene.hazard.severity.value,
        },
        "distraction_point": scene.distraction_point.as_list(),
        "objects": [
            {
                "id": o.id,
                "centroid": o.centroid.as_list(),
                "half_extent": o.half_extent.as_list(),
                "salience_weight": o.salience_weight,
                "moving": o.moving,
            }
            for o in scene.objects
        ],
    }


def load_scene(data: bytes | str) -> SceneSpec:
    """Parse and validate a scenario document (UTF-8 JSON)."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"not valid UTF-8: {exc}") from None
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")
    return scene_from_dict(doc)


def save_scene(scene: SceneSpec) -> bytes:
    """Emit the canonical scenario document; load_scene(save_scene(s)) == s.

    Keys are sorted lexicographically so the output is byte-stable.
    """
    validate_scene(scene)
    text = json.dumps(scene_to_dict(scene), sort_keys=True, indent=2)
    return (text + "\n").encode("utf-8")


def load_scene_file(path) -> SceneSpec:
    with open(path, "rb") as fh:
        return load_scene(fh.read())


def load_scene_dir(path) -> dict[str, SceneSpec]:
    """Load every *.json scenario in a directory, keyed by scene id."""
    import os

    scenes: dict[str, SceneSpec] = {}
    for name in sorted(os.listdir(path)):
        if not name.endswith(".json"):
            continue
        scene = load_scene_file(os.path.join(path, name))
        if scene.id in scenes:
            raise ValidationError(f"duplicate scene id {scene.id!r} in {name}")
        scenes[scene.id] = scene
    return scenes

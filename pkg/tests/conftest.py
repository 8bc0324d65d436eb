import os

import numpy as np
import pytest

from gazeguide.scene import HazardSpec, Point2, SceneObject, SceneSpec, Severity, load_scene_dir

SCENES_DIR = os.path.join(os.path.dirname(__file__), os.pardir, "scenes")


@pytest.fixture(scope="session")
def scenes():
    return load_scene_dir(SCENES_DIR)


@pytest.fixture
def reference_scene(scenes):
    return scenes["reference"]


def make_scene(objects=(), hazard=Point2(0.9, 0.5), severity=Severity.MEDIUM,
               distraction=Point2(0.1, 0.8), duration=20.0, scene_id="test"):
    return SceneSpec(
        id=scene_id,
        objects=tuple(objects),
        hazard=HazardSpec(hazard, severity),
        distraction_point=distraction,
        duration_s=duration,
    )


def random_scene(rng: np.random.Generator, max_objects=6, scene_id="random"):
    """Random valid scene for oracle sweeps."""
    n = int(rng.integers(0, max_objects + 1))
    objects = []
    for i in range(n):
        cx, cy = rng.uniform(0.05, 0.95, 2)
        hx, hy = rng.uniform(0.01, 0.12, 2)
        objects.append(SceneObject(
            id=f"obj{i}",
            centroid=Point2(float(cx), float(cy)),
            half_extent=Point2(float(hx), float(hy)),
            salience_weight=float(rng.uniform(0.15, 1.0)),
            moving=bool(rng.random() < 0.5),
        ))
    hazard = Point2(float(rng.uniform(0.05, 0.95)), float(rng.uniform(0.05, 0.95)))
    distraction = Point2(float(rng.uniform(0.0, 1.0)), float(rng.uniform(0.0, 1.0)))
    return make_scene(objects, hazard=hazard,
                      severity=Severity(["Low", "Medium", "High"][int(rng.integers(3))]),
                      distraction=distraction, scene_id=scene_id)

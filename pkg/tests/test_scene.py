import json

import numpy as np
import pytest

from gazeguide.errors import ParseError, ValidationError
from gazeguide.scene import Point2, SceneObject, load_scene, save_scene

from conftest import make_scene, random_scene

MINIMAL = json.dumps({
    "id": "minimal",
    "duration_s": 20,
    "hazard": {"position": [0.9, 0.5], "severity": "Medium"},
    "distraction_point": [0.1, 0.8],
    "objects": [],
})


def test_minimal_document_loads():
    scene = load_scene(MINIMAL)
    assert scene.id == "minimal"
    assert scene.objects == ()
    assert scene.hazard.position == Point2(0.9, 0.5)
    assert scene.distraction_point == Point2(0.1, 0.8)
    assert scene.duration_s == 20.0


def test_hazard_out_of_range_names_invariant():
    doc = json.loads(MINIMAL)
    doc["hazard"]["position"] = [1.2, 0.5]
    with pytest.raises(ValidationError, match="hazard.position out of range"):
        load_scene(json.dumps(doc))


def test_round_trip_identity():
    scene = load_scene(MINIMAL)
    assert load_scene(save_scene(scene)) == scene


def test_one_object_document_lists_all_fields():
    scene = make_scene([SceneObject("car", Point2(0.4, 0.5), Point2(0.05, 0.03), 0.7, True)])
    doc = json.loads(save_scene(scene))
    obj = doc["objects"][0]
    assert set(obj) == {"id", "centroid", "half_extent", "salience_weight", "moving"}
    assert obj["id"] == "car"
    assert obj["moving"] is True


def test_random_scene_round_trip():
    rng = np.random.default_rng(42)
    for _ in range(25):
        scene = random_scene(rng)
        assert load_scene(save_scene(scene)) == scene


def test_save_is_byte_stable():
    rng = np.random.default_rng(7)
    scene = random_scene(rng)
    assert save_scene(scene) == save_scene(scene)


def test_canonical_output_keys_sorted():
    scene = load_scene(MINIMAL)
    text = save_scene(scene).decode()
    top_keys = list(json.loads(text).keys())
    assert top_keys == sorted(top_keys)


@pytest.mark.parametrize("mutate, error", [
    (lambda d: d.update(duration_s=0), ValidationError),
    (lambda d: d.update(duration_s=-3), ValidationError),
    (lambda d: d["hazard"].update(severity="Extreme"), ParseError),
    (lambda d: d.update(distraction_point=[0.5, 1.5]), ValidationError),
    (lambda d: d.pop("hazard"), ParseError),
    (lambda d: d.update(distraction_point=[0.5]), ParseError),
    (lambda d: d.update(distraction_point=[0.5, "a"]), ParseError),
])
def test_adversarial_documents(mutate, error):
    doc = json.loads(MINIMAL)
    mutate(doc)
    with pytest.raises(error):
        load_scene(json.dumps(doc))


def test_not_json_is_parse_error():
    with pytest.raises(ParseError):
        load_scene(b"not json {")
    with pytest.raises(ParseError):
        load_scene(b"[1, 2]")


def test_duplicate_object_id_rejected():
    doc = json.loads(MINIMAL)
    obj = {"id": "x", "centroid": [0.5, 0.5], "half_extent": [0.05, 0.05],
           "salience_weight": 0.5, "moving": False}
    doc["objects"] = [obj, dict(obj)]
    with pytest.raises(ValidationError, match="duplicated"):
        load_scene(json.dumps(doc))


def test_object_invariants_enforced():
    doc = json.loads(MINIMAL)
    doc["objects"] = [{"id": "x", "centroid": [0.5, 0.5], "half_extent": [0.6, 0.05],
                       "salience_weight": 0.5, "moving": False}]
    with pytest.raises(ValidationError, match="half_extent"):
        load_scene(json.dumps(doc))
    doc["objects"] = [{"id": "x", "centroid": [0.5, 0.5], "half_extent": [0.05, 0.05],
                       "salience_weight": 1.5, "moving": False}]
    with pytest.raises(ValidationError, match="salience_weight"):
        load_scene(json.dumps(doc))
    # box entirely outside the plane
    doc["objects"] = [{"id": "x", "centroid": [2.0, 0.5], "half_extent": [0.05, 0.05],
                       "salience_weight": 0.5, "moving": False}]
    with pytest.raises(ValidationError, match="bounding box"):
        load_scene(json.dumps(doc))

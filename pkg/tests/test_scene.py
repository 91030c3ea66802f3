"""Scene model: validation, visibility trigonometry, serialization."""

from __future__ import annotations

import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from relabel.partition import VoronoiSite
from relabel.scene import (
    BoxDims,
    CameraState,
    Observation,
    PlanarPose,
    SceneBounds,
    SceneLayout,
    SceneParseError,
    SceneValidationError,
    bearing_deg,
    is_visible,
    load_scene,
    normalize_yaw,
    observation_from_dict,
    observation_to_dict,
    save_scene,
    scene_from_dict,
    scene_to_dict,
    synthesize_observation,
    visible_objects,
)

from .conftest import make_detection, make_object


class TestPose:
    def test_yaw_normalized_to_half_open_range(self):
        assert PlanarPose(0, 0, 360.0).yaw == 0.0
        assert PlanarPose(0, 0, -90.0).yaw == 270.0
        assert PlanarPose(0, 0, 725.0).yaw == 5.0

    @given(st.floats(min_value=-1e6, max_value=1e6))
    def test_normalize_yaw_range(self, yaw):
        assert 0.0 <= normalize_yaw(yaw) < 360.0

    def test_rejects_non_finite(self):
        with pytest.raises(SceneValidationError):
            PlanarPose(math.nan, 0, 0)
        with pytest.raises(SceneValidationError):
            PlanarPose(0, math.inf, 0)


class TestDims:
    def test_rejects_non_positive(self):
        with pytest.raises(SceneValidationError):
            BoxDims(0.0, 1.0, 1.0)
        with pytest.raises(SceneValidationError):
            BoxDims(1.0, -2.0, 1.0)


class TestBounds:
    def test_diagonal_and_area(self):
        b = SceneBounds(width=3.0, depth=4.0)
        assert b.diagonal() == 5.0
        assert b.area() == 12.0

    def test_contains_is_inclusive(self):
        b = SceneBounds(width=5.0, depth=5.0)
        assert b.contains(0.0, 0.0) and b.contains(5.0, 5.0)
        assert not b.contains(5.0001, 2.0)


class TestLayout:
    def test_duplicate_labels_rejected(self, bounds):
        site = VoronoiSite(id="S01", center=(5.0, 5.0))
        objs = (make_object("a-01", 1, 1), make_object("a-01", 2, 2))
        with pytest.raises(SceneValidationError, match="label"):
            SceneLayout(name="x", bounds=bounds, sites=(site,), objects=objs)

    def test_duplicate_site_ids_rejected(self, bounds):
        sites = (VoronoiSite(id="S01", center=(1, 1)), VoronoiSite(id="S01", center=(2, 2)))
        with pytest.raises(SceneValidationError, match="site"):
            SceneLayout(name="x", bounds=bounds, sites=sites, objects=())

    def test_out_of_bounds_object_rejected(self, bounds):
        site = VoronoiSite(id="S01", center=(5.0, 5.0))
        with pytest.raises(SceneValidationError, match="bounds"):
            SceneLayout(
                name="x", bounds=bounds, sites=(site,),
                objects=(make_object("a-01", 11.0, 5.0),),
            )

    def test_object_by_label(self, two_site_layout):
        assert two_site_layout.object_by_label("chair-03").pose.x == 7.5
        with pytest.raises(KeyError):
            two_site_layout.object_by_label("chair-99")


class TestVisibility:
    def test_bearing_convention(self):
        # yaw 0 faces +z; +x is at 90 degrees
        assert bearing_deg((0, 0), (0, 1)) == 0.0
        assert bearing_deg((0, 0), (1, 0)) == 90.0
        assert bearing_deg((0, 0), (0, -1)) == 180.0
        assert bearing_deg((0, 0), (-1, 0)) == 270.0

    def test_inside_fov_and_range(self):
        cam = CameraState(position=(0.0, 0.0), yaw=0.0, fov=60.0, range=10.0)
        assert is_visible(cam, PlanarPose(0.0, 5.0, 0.0))
        # 29 degrees off axis: inside the half-angle
        assert is_visible(cam, PlanarPose(5.0 * math.tan(math.radians(29)), 5.0, 0.0))

    def test_outside_fov(self):
        cam = CameraState(position=(0.0, 0.0), yaw=0.0, fov=60.0, range=10.0)
        assert not is_visible(cam, PlanarPose(5.0, 0.5, 0.0))  # ~84 degrees off

    def test_outside_range(self):
        cam = CameraState(position=(0.0, 0.0), yaw=0.0, fov=60.0, range=10.0)
        assert not is_visible(cam, PlanarPose(0.0, 10.001, 0.0))
        assert is_visible(cam, PlanarPose(0.0, 10.0, 0.0))

    def test_fov_wraps_across_zero_bearing(self):
        cam = CameraState(position=(0.0, 0.0), yaw=350.0, fov=40.0, range=10.0)
        assert is_visible(cam, PlanarPose(0.0, 5.0, 0.0))  # bearing 0, offset 10

    def test_coincident_point_visible(self):
        cam = CameraState(position=(1.0, 1.0), yaw=123.0, fov=1.0, range=0.5)
        assert is_visible(cam, PlanarPose(1.0, 1.0, 0.0))

    def test_camera_validation(self):
        with pytest.raises(SceneValidationError):
            CameraState(position=(0, 0), yaw=0, fov=0.0)
        with pytest.raises(SceneValidationError):
            CameraState(position=(0, 0), yaw=0, fov=360.0)
        with pytest.raises(SceneValidationError):
            CameraState(position=(0, 0), yaw=0, range=0.0)

    def test_visible_objects_sorted_by_label(self, two_site_layout, wide_camera):
        labels = [o.label for o in visible_objects(two_site_layout, wide_camera)]
        assert labels == sorted(labels) and len(labels) == 4

    def test_synthesized_observation_strips_labels(self, two_site_layout, wide_camera):
        obs = synthesize_observation(two_site_layout, wide_camera)
        assert len(obs.detections) == 4
        assert all(not hasattr(d, "label") for d in obs.detections)
        assert obs.detections[0].object_type == "chair"


class TestSerialization:
    def test_scene_round_trip(self, two_site_layout, tmp_path):
        path = tmp_path / "scene.json"
        save_scene(two_site_layout, path)
        assert load_scene(path) == two_site_layout

    def test_scene_file_is_stable_json(self, two_site_layout, tmp_path):
        p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
        save_scene(two_site_layout, p1)
        save_scene(two_site_layout, p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_observation_round_trip(self, two_site_layout, wide_camera):
        obs = synthesize_observation(two_site_layout, wide_camera)
        assert observation_from_dict(observation_to_dict(obs)) == obs

    def test_missing_field_reports_context(self):
        doc = scene_to_dict(
            SceneLayout(
                name="x",
                bounds=SceneBounds(width=5, depth=5),
                sites=(VoronoiSite(id="S01", center=(1, 1)),),
                objects=(make_object("a-01", 1, 1),),
            )
        )
        del doc["objects"][0]["pose"]
        with pytest.raises(SceneParseError, match="pose"):
            scene_from_dict(doc)

    def test_malformed_json_reports_line(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"name": "x",\n  broken\n}')
        with pytest.raises(SceneParseError, match="line 2"):
            load_scene(path)

    def test_untyped_detection_round_trips_as_none(self):
        obs = Observation(
            camera=CameraState(position=(0.0, 0.0), yaw=0.0),
            detections=(make_detection(1.0, 1.0, object_type=None),),
        )
        doc = json.loads(json.dumps(observation_to_dict(obs)))
        assert observation_from_dict(doc).detections[0].object_type is None

    @given(
        st.floats(min_value=0.0, max_value=10.0),
        st.floats(min_value=0.0, max_value=10.0),
        st.floats(min_value=-720.0, max_value=720.0),
    )
    def test_pose_round_trip_exact(self, x, z, yaw):
        layout = SceneLayout(
            name="prop",
            bounds=SceneBounds(width=10.0, depth=10.0),
            sites=(VoronoiSite(id="S01", center=(5.0, 5.0)),),
            objects=(make_object("a-01", x, z, yaw),),
        )
        back = scene_from_dict(json.loads(json.dumps(scene_to_dict(layout))))
        assert back == layout

import math

import numpy as np
import pytest
from conftest import make_label

from obmo3d.augment import (
    ClassSettings,
    ObmoConfig,
    augment_frame,
    generate_pseudo_labels,
    iou_label_score,
    label_score_loss,
    linear_label_score,
    shift_along_frustum,
    total_loss,
)
from obmo3d.errors import LabelSkipped
from obmo3d.geometry import Pixel, Point3, project_point
from obmo3d.labels import FrameAnnotation


def frame_of(k, *labels, image_size=None, frame_id="t"):
    return FrameAnnotation(frame_id=frame_id, labels=tuple(labels), calib=k, image_size=image_size)


class TestShift:
    def test_plus_four_percent(self, k100):
        label = make_label(location=(5.0, 1.0, 50.0), calib=k100)
        shifted = shift_along_frustum(label, 0.04, k100)
        assert shifted.location[0] == pytest.approx(5.2, abs=1e-12)
        assert shifted.location[1] == pytest.approx(1.04, abs=1e-12)
        assert shifted.location[2] == pytest.approx(52.0, abs=1e-12)
        assert shifted.dims == label.dims

    def test_minus_eight_percent(self, k100):
        label = make_label(location=(5.0, 1.0, 50.0), calib=k100)
        shifted = shift_along_frustum(label, -0.08, k100)
        assert shifted.location[0] == pytest.approx(4.6, abs=1e-12)
        assert shifted.location[1] == pytest.approx(0.92, abs=1e-12)
        assert shifted.location[2] == pytest.approx(46.0, abs=1e-12)

    def test_zero_shift_is_identity(self, k100):
        label = make_label(location=(5.0, 1.0, 50.0), calib=k100)
        assert shift_along_frustum(label, 0.0, k100) == label

    def test_preserved_fields(self, k100):
        label = make_label(
            location=(2.0, 1.2, 30.0), yaw=0.7, truncation=0.1, occlusion=1, calib=k100
        )
        shifted = shift_along_frustum(label, 0.08, k100)
        assert shifted.class_name == label.class_name
        assert shifted.truncation == label.truncation
        assert shifted.occlusion == label.occlusion
        assert shifted.yaw == label.yaw
        assert shifted.alpha == label.alpha
        assert shifted.dims == label.dims
        assert shifted.bbox2d != label.bbox2d

    def test_ray_invariance(self, kitti_cam):
        rng = np.random.default_rng(3)
        for _ in range(200):
            label = make_label(
                location=(rng.uniform(-10, 10), rng.uniform(0.5, 2), rng.uniform(6, 80)),
                yaw=rng.uniform(-math.pi, math.pi),
                calib=kitti_cam,
            )
            dz = rng.uniform(-0.2, 0.2)
            if dz == 0:
                continue
            shifted = shift_along_frustum(label, dz, kitti_cam)
            before = project_point(kitti_cam, Point3(*label.location))
            after = project_point(kitti_cam, Point3(*shifted.location))
            assert abs(before.u - after.u) < 1e-6
            assert abs(before.v - after.v) < 1e-6

    def test_behind_camera_skipped(self, k100):
        label = make_label(location=(0.0, 1.0, -5.0), alpha=0.0, yaw=0.0)
        with pytest.raises(LabelSkipped):
            shift_along_frustum(label, 0.04, k100)

    def test_shift_pushing_corner_behind_camera_skipped(self, k100):
        label = make_label(location=(0.0, 1.0, 3.0), dims=(1.5, 1.6, 3.88), yaw=1.57, calib=k100)
        with pytest.raises(LabelSkipped):
            shift_along_frustum(label, -0.5, k100)

    def test_delta_z_must_exceed_minus_one(self, k100):
        with pytest.raises(ValueError):
            shift_along_frustum(make_label(calib=k100), -1.0, k100)


class TestIouScore:
    def test_unshifted_scores_one(self, k100):
        label = make_label(location=(0.0, 1.0, 20.0), calib=k100)
        assert iou_label_score(k100, label, label) == 1.0

    def test_monotone_in_shift_magnitude(self, k100):
        label = make_label(location=(1.0, 1.0, 25.0), calib=k100)
        for sign in (1, -1):
            previous = 1.0
            for magnitude in (0.02, 0.04, 0.08, 0.16):
                shifted = shift_along_frustum(label, sign * magnitude, k100)
                score = iou_label_score(k100, label, shifted)
                assert score < previous
                previous = score

    def test_clipped_out_pseudo_scores_zero(self, k100):
        # box pokes into the image from the left; a forward shift pulls its
        # hull entirely outside so the clipped projection degenerates
        label = make_label(location=(-6.2, 0.5, 10.0), dims=(1.0, 1.0, 3.0), yaw=0.0, calib=k100)
        gt_box = shift_along_frustum(label, 0.5, k100, image_size=(100, 100)).bbox2d
        assert gt_box.width == 0.0  # fully outside after the shift
        shifted = shift_along_frustum(label, 0.5, k100, image_size=(100, 100))
        score = iou_label_score(k100, label, shifted, image_size=(100, 100))
        assert score == 0.0

    def test_annotated_gt_box_flag(self, k100):
        from obmo3d.geometry import Box2

        label = make_label(location=(0.0, 1.0, 20.0), calib=k100, bbox2d=Box2(0, 0, 100, 100))
        shifted = shift_along_frustum(label, 0.04, k100)
        reproj = iou_label_score(k100, label, shifted)
        annotated = iou_label_score(k100, label, shifted, use_annotated_gt_box=True)
        assert annotated != reproj


class TestLinearScore:
    def test_exact_half(self):
        assert linear_label_score(50.0, 0.04, 4.0) == 0.5

    def test_zero_shift_scores_one(self):
        for depth in (1.0, 17.3, 99.0):
            assert linear_label_score(depth, 0.0, 4.0) == 1.0

    def test_negative_for_far_shift(self):
        assert linear_label_score(100.0, 0.08, 4.0) == -1.0

    def test_symmetric_in_sign(self):
        assert linear_label_score(50.0, -0.04, 4.0) == linear_label_score(50.0, 0.04, 4.0)

    def test_validation(self):
        with pytest.raises(ValueError):
            linear_label_score(50.0, 0.04, 0.0)
        with pytest.raises(ValueError):
            linear_label_score(-1.0, 0.04, 4.0)


class TestConfig:
    def test_defaults_match_shipped_settings(self):
        config = ObmoConfig()
        assert config.delta_z_set == (-0.08, -0.04, 0.04, 0.08)
        assert config.c == 4.0
        assert config.lam == 1.0
        assert config.filter_threshold == 0.0
        assert config.strategy == "linear"

    def test_zero_offset_rejected(self):
        with pytest.raises(ValueError):
            ObmoConfig(delta_z_set=(0.0, 0.04))

    def test_unit_offset_rejected(self):
        with pytest.raises(ValueError):
            ObmoConfig(delta_z_set=(1.0,))

    def test_empty_set_allowed_as_identity(self):
        assert ObmoConfig(delta_z_set=()).delta_z_set == ()

    def test_bad_strategy(self):
        with pytest.raises(ValueError):
            ObmoConfig(strategy="best")

    def test_bad_c(self):
        with pytest.raises(ValueError):
            ObmoConfig(c=0.0)

    def test_per_class_lookup(self):
        config = ObmoConfig(
            per_class={"Pedestrian": ClassSettings(delta_z_set=(-0.04, 0.04), c=2.0)}
        )
        assert config.delta_z_for("Pedestrian") == (-0.04, 0.04)
        assert config.c_for("Pedestrian") == 2.0
        assert config.delta_z_for("Car") == config.delta_z_set
        assert config.c_for("Car") == 4.0


class TestGenerate:
    def test_car_at_fifty_meters_keeps_two(self, k100):
        label = make_label(location=(5.0, 1.0, 50.0), calib=k100)
        pseudo = generate_pseudo_labels(frame_of(k100, label), ObmoConfig())
        assert len(pseudo) == 2
        assert [p.delta_z for p in pseudo] == [-0.04, 0.04]
        assert all(p.quality == 0.5 for p in pseudo)

    def test_car_at_twentyfive_meters_keeps_four(self, k100):
        label = make_label(location=(2.0, 1.0, 25.0), calib=k100)
        pseudo = generate_pseudo_labels(frame_of(k100, label), ObmoConfig())
        assert len(pseudo) == 4
        assert sorted(p.quality for p in pseudo) == [0.5, 0.5, 0.75, 0.75]
        assert [p.delta_z for p in pseudo] == [-0.08, -0.04, 0.04, 0.08]

    def test_dontcare_only_frame_empty(self, k100):
        from obmo3d.geometry import Box2
        from obmo3d.labels import ObjectLabel

        dontcare = ObjectLabel(
            "DontCare", -1.0, -1, -10.0, Box2(0, 0, 10, 10), (-1, -1, -1),
            (-1000, -1000, -1000), -10.0,
        )
        assert generate_pseudo_labels(frame_of(k100, dontcare), ObmoConfig()) == []

    def test_empty_offset_set_is_identity(self, k100):
        label = make_label(location=(5.0, 1.0, 50.0), calib=k100)
        config = ObmoConfig(delta_z_set=())
        for strategy in ("linear", "iou"):
            assert generate_pseudo_labels(
                frame_of(k100, label), ObmoConfig(delta_z_set=(), strategy=strategy)
            ) == []

    def test_alpha_and_dims_invariance(self, kitti_cam):
        rng = np.random.default_rng(17)
        for _ in range(50):
            label = make_label(
                location=(rng.uniform(-8, 8), rng.uniform(0.5, 2), rng.uniform(10, 60)),
                yaw=rng.uniform(-math.pi, math.pi),
                calib=kitti_cam,
            )
            for p in generate_pseudo_labels(frame_of(kitti_cam, label), ObmoConfig()):
                assert p.base.alpha == label.alpha
                assert p.base.dims == label.dims

    def test_filter_soundness(self, kitti_cam):
        rng = np.random.default_rng(18)
        for threshold in (0.0, 0.25, 0.6):
            config = ObmoConfig(filter_threshold=threshold)
            for _ in range(30):
                label = make_label(
                    location=(rng.uniform(-8, 8), rng.uniform(0.5, 2), rng.uniform(10, 90)),
                    calib=kitti_cam,
                )
                for p in generate_pseudo_labels(frame_of(kitti_cam, label), config):
                    assert p.quality > threshold

    def test_iou_strategy_bounds(self, kitti_cam):
        rng = np.random.default_rng(19)
        config = ObmoConfig(strategy="iou")
        for _ in range(30):
            label = make_label(
                location=(rng.uniform(-8, 8), rng.uniform(0.5, 2), rng.uniform(10, 90)),
                calib=kitti_cam,
            )
            for p in generate_pseudo_labels(frame_of(kitti_cam, label), config):
                assert 0.0 < p.quality <= 1.0

    def test_class_filter(self, k100):
        car = make_label(location=(2.0, 1.0, 25.0), calib=k100)
        ped = make_label(
            class_name="Pedestrian", location=(-2.0, 1.0, 20.0), dims=(1.8, 0.6, 0.9), calib=k100
        )
        frame = frame_of(k100, car, ped)
        only_car = generate_pseudo_labels(frame, ObmoConfig(), classes={"Car"})
        assert {p.base.class_name for p in only_car} == {"Car"}

    def test_skip_sink_collects_errors(self, k100):
        # the near car's rear corner sits 0.06 m in front of the camera, so
        # both negative offsets push it behind and get skipped
        good = make_label(location=(2.0, 1.0, 25.0), calib=k100)
        bad = make_label(location=(0.0, 1.0, 2.0), dims=(1.5, 1.6, 3.88), yaw=1.57, calib=k100)
        skips = []
        pseudo = generate_pseudo_labels(
            frame_of(k100, good, bad), ObmoConfig(), skipped=skips
        )
        assert len(skips) == 2
        assert all(index == 1 and dz < 0 for index, dz, _ in skips)
        assert len(pseudo) >= 4

    def test_generation_deterministic(self, kitti_cam):
        label = make_label(location=(3.0, 1.4, 33.0), yaw=0.4, calib=kitti_cam)
        frame = frame_of(kitti_cam, label)
        text1, _ = augment_frame(frame, ObmoConfig())
        text2, _ = augment_frame(frame, ObmoConfig())
        assert text1 == text2


class TestLosses:
    def test_l1_example(self):
        assert label_score_loss(0.7, 0.5) == pytest.approx(0.2, abs=1e-15)

    def test_l1_zero_at_equality(self):
        assert label_score_loss(0.42, 0.42) == 0.0

    def test_l1_extremes(self):
        assert label_score_loss(0.0, 1.0) == 1.0

    def test_total_default_weight(self):
        assert total_loss(2.0, 0.3, 1.0) == pytest.approx(2.3, abs=1e-15)

    def test_total_zero_weight(self):
        assert total_loss(5.5, 0.9, 0.0) == 5.5

    def test_total_double_weight(self):
        assert total_loss(0.0, 0.5, 2.0) == 1.0

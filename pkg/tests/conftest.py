import math
import os

import pytest

from obmo3d.calib import CameraIntrinsics
from obmo3d.geometry import Box2, project_box_aabb
from obmo3d.labels import ObjectLabel

DATA_DIR = os.path.join(os.path.dirname(__file__), "data", "mini_kitti")


@pytest.fixture
def k100():
    """Simple synthetic camera: fx=fy=100, principal point (50, 50)."""
    return CameraIntrinsics.simple(100.0, 100.0, 50.0, 50.0)


@pytest.fixture
def kitti_cam():
    """KITTI-like left color camera."""
    return CameraIntrinsics.simple(721.5377, 721.5377, 609.5593, 172.854)


@pytest.fixture
def mini_dataset():
    return {
        "root": DATA_DIR,
        "labels": os.path.join(DATA_DIR, "label_2"),
        "calib": os.path.join(DATA_DIR, "calib"),
    }


def make_label(
    class_name="Car",
    location=(5.0, 1.0, 50.0),
    dims=(1.53, 1.63, 3.88),
    yaw=-1.5,
    truncation=0.0,
    occlusion=0,
    alpha=None,
    bbox2d=None,
    score=None,
    calib=None,
):
    """Car-like label; bbox2d defaults to the reprojection when calib is given."""
    if alpha is None:
        alpha = math.remainder(yaw - math.atan2(location[0], location[2]), math.tau)
    if bbox2d is None:
        if calib is not None:
            from obmo3d.geometry import Box3

            bbox2d = project_box_aabb(calib, Box3(location, dims, yaw))
        else:
            bbox2d = Box2(100.0, 100.0, 200.0, 180.0)
    return ObjectLabel(
        class_name=class_name,
        truncation=truncation,
        occlusion=occlusion,
        alpha=alpha,
        bbox2d=bbox2d,
        dims=dims,
        location=location,
        yaw=yaw,
        score=score,
    )

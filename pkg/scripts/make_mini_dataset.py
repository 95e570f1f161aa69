"""Regenerate the bundled 10-frame synthetic mini-dataset.

Writes canonical-format label and calibration files under
tests/data/mini_kitti/. The frames cover all difficulty strata, a DontCare
label, a partially clipped box, and an empty frame. Deterministic: rerunning
reproduces the committed files byte for byte.

Usage: python scripts/make_mini_dataset.py [out_dir]
"""

import math
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from obmo3d.calib import CameraIntrinsics, parse_calibration, write_calibration
from obmo3d.geometry import Box2, Box3, project_box_aabb
from obmo3d.labels import ObjectLabel, write_labels

IMAGE_SIZE = (1242.0, 375.0)

FX = FY = 721.5377
CX, CY = 609.5593, 172.854

CAR = ("Car", (1.53, 1.63, 3.88))
PED = ("Pedestrian", (1.80, 0.60, 0.90))
CYC = ("Cyclist", (1.70, 0.60, 1.76))

# (class, dims) , X, Y, Z, yaw, truncation, occlusion
FRAMES = {
    "000000": [(CAR, 1.5, 1.62, 25.0, -1.57, 0.00, 0)],
    "000001": [
        (CAR, -3.0, 1.55, 10.0, -1.20, 0.00, 0),
        (CAR, 4.0, 1.70, 40.0, 1.57, 0.20, 1),
    ],
    "000002": [(CAR, 5.0, 1.65, 50.0, -1.57, 0.00, 0)],
    "000003": [
        (CAR, -5.0, 1.60, 30.0, 3.00, 0.40, 2),
        (CYC, 2.0, 1.55, 15.0, 0.30, 0.00, 0),
    ],
    "000004": [
        ("dontcare", None, None, None, None, None, None),
        (CAR, 0.5, 1.68, 35.0, -0.80, 0.00, 0),
    ],
    "000005": [
        (CAR, -2.0, 1.58, 12.0, 0.00, 0.10, 0),
        (CAR, 6.0, 1.66, 35.0, -2.50, 0.00, 1),
        (CAR, -8.0, 1.72, 70.0, 1.00, 0.00, 0),
    ],
    "000006": [
        (PED, 1.0, 1.60, 20.0, 0.50, 0.00, 0),
        (PED, -4.0, 1.63, 45.0, -0.40, 0.00, 1),
        (CYC, 5.5, 1.57, 30.0, 2.20, 0.00, 0),
    ],
    "000007": [
        (CAR, -1.0, 1.61, 22.0, 0.30, 0.00, 0),
        (CAR, 2.5, 1.64, 23.0, 0.35, 0.00, 1),
    ],
    "000008": [(CAR, -7.0, 1.59, 8.0, 1.40, 0.30, 0)],
    "000009": [],
}


def _wrap(a):
    return math.remainder(a, math.tau)


def build_label(intrinsics, spec):
    (class_name, dims), x, y, z, yaw, truncation, occlusion = spec
    box = Box3((x, y, z), dims, yaw)
    bbox = project_box_aabb(intrinsics, box, IMAGE_SIZE)
    alpha = _wrap(yaw - math.atan2(x, z))
    return ObjectLabel(
        class_name=class_name,
        truncation=truncation,
        occlusion=occlusion,
        alpha=alpha,
        bbox2d=bbox,
        dims=dims,
        location=(x, y, z),
        yaw=yaw,
    )


def dontcare_label():
    return ObjectLabel(
        class_name="DontCare",
        truncation=-1.0,
        occlusion=-1,
        alpha=-10.0,
        bbox2d=Box2(500.0, 160.0, 580.0, 190.0),
        dims=(-1.0, -1.0, -1.0),
        location=(-1000.0, -1000.0, -1000.0),
        yaw=-10.0,
    )


def main(out_root):
    label_dir = os.path.join(out_root, "label_2")
    calib_dir = os.path.join(out_root, "calib")
    os.makedirs(label_dir, exist_ok=True)
    os.makedirs(calib_dir, exist_ok=True)

    cameras = {name: CameraIntrinsics.simple(FX, FY, CX, CY) for name in ("P0", "P1", "P2", "P3")}
    calib_text = write_calibration(cameras)
    # annotate with the canonicalized (as-written) camera so label boxes are
    # consistent with what parsers will read back
    intr = parse_calibration(calib_text)["P2"]

    for frame_id, specs in FRAMES.items():
        labels = []
        for spec in specs:
            if spec[0] == "dontcare":
                labels.append(dontcare_label())
            else:
                labels.append(build_label(intr, spec))
        with open(os.path.join(label_dir, f"{frame_id}.txt"), "w", encoding="utf-8") as fh:
            fh.write(write_labels(labels))
        with open(os.path.join(calib_dir, f"{frame_id}.txt"), "w", encoding="utf-8") as fh:
            fh.write(calib_text)
    print(f"wrote {len(FRAMES)} frames under {out_root}")


if __name__ == "__main__":
    root = sys.argv[1] if len(sys.argv) > 1 else os.path.join(
        os.path.dirname(__file__), "..", "tests", "data", "mini_kitti"
    )
    main(os.path.normpath(root))

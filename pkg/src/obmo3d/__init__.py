"""Pseudo-label augmentation, depth-ambiguity analysis, and AP evaluation
for KITTI-style monocular 3D object detection datasets."""

__version__ = "0.1.0"

from . import analysis, augment, calib, evalkit, geometry, labels
from .augment import (
    ObmoConfig,
    generate_pseudo_labels,
    iou_label_score,
    label_score_loss,
    linear_label_score,
    shift_along_frustum,
    total_loss,
)
from .calib import CameraIntrinsics, parse_calibration, write_calibration
from .labels import (
    FrameAnnotation,
    ObjectLabel,
    PseudoLabel,
    parse_labels,
    write_augmented_frame,
    write_labels,
)

__all__ = [
    "CameraIntrinsics",
    "FrameAnnotation",
    "ObjectLabel",
    "ObmoConfig",
    "PseudoLabel",
    "analysis",
    "augment",
    "calib",
    "evalkit",
    "generate_pseudo_labels",
    "geometry",
    "iou_label_score",
    "label_score_loss",
    "linear_label_score",
    "parse_calibration",
    "parse_labels",
    "shift_along_frustum",
    "total_loss",
    "write_augmented_frame",
    "write_calibration",
    "write_labels",
]

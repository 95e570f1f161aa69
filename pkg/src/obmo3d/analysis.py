"""Depth-ambiguity analysis: scaled object families with identical
projections, and dimension-error to depth-error amplification.

Scaling an object's location and dimensions by the same factor leaves its
image projection unchanged (the ray ratios cancel the scale), so a single
2D bounding box corresponds to a whole family of 3D objects. Conversely, a
relative dimension error of (s - 1) recovered through that geometry turns
into a depth error of Z * (s - 1): centimeter-level dimension errors at
long range become meter-level depth errors.
"""

import csv
import logging
from dataclasses import dataclass

from .augment import DEFAULT_C, iou_label_score, linear_label_score
from .errors import BehindCameraError
from .geometry import aabb_iou, project_box_aabb
from .labels import ObjectLabel

log = logging.getLogger(__name__)

# KITTI Car dimension averages (length, width, height), meters.
CAR_MEAN_LENGTH = 3.88
CAR_MEAN_WIDTH = 1.63
CAR_MEAN_HEIGHT = 1.53

CSV_HEADER = (
    "frame_id",
    "label_index",
    "class",
    "Z",
    "scale",
    "deviation_px",
    "iou_unscaled_dims",
    "linear_score",
    "iou_score",
)


@dataclass(frozen=True)
class AmbiguityReport:
    """A scaled family of objects sharing one projected bounding box."""

    source: ObjectLabel
    scale_factors: tuple
    members: tuple
    max_projection_deviation: float


@dataclass(frozen=True)
class AmplificationRow:
    """Depth/dimension error pair produced by one scale factor at one depth."""

    depth: float
    scale: float
    dim_error: float
    depth_error: float


def _scaled_label(label: ObjectLabel, s: float, scale_dims: bool) -> ObjectLabel:
    x, y, z = label.location
    h, w, l = label.dims
    dims = (h * s, w * s, l * s) if scale_dims else label.dims
    return ObjectLabel(
        class_name=label.class_name,
        truncation=label.truncation,
        occlusion=label.occlusion,
        alpha=label.alpha,
        bbox2d=label.bbox2d,
        dims=dims,
        location=(x * s, y * s, z * s),
        yaw=label.yaw,
        score=label.score,
    )


def _aabb_deviation(a, b) -> float:
    return max(
        abs(a.left - b.left),
        abs(a.top - b.top),
        abs(a.right - b.right),
        abs(a.bottom - b.bottom),
    )


def ambiguous_family(label: ObjectLabel, scales, calib) -> AmbiguityReport:
    """Scale location and dimensions together, producing objects that all
    project onto the source's bounding box.

    The reported deviation is the maximum Chebyshev distance (over the four
    box edges) between each member's projected hull and the source's; it is
    zero up to floating-point rounding.
    """
    if label.depth <= 0:
        raise ValueError(f"label depth must be positive, got {label.depth}")
    for s in scales:
        if not s > 0:
            raise ValueError(f"scale factors must be positive, got {s}")
    source_box = project_box_aabb(calib, label.box3)
    members = tuple(_scaled_label(label, s, scale_dims=True) for s in scales)
    deviation = 0.0
    for member in members:
        member_box = project_box_aabb(calib, member.box3)
        deviation = max(deviation, _aabb_deviation(source_box, member_box))
    return AmbiguityReport(label, tuple(scales), members, deviation)


def error_amplification(depth: float, scale: float, height: float) -> AmplificationRow:
    """Depth and dimension errors induced by a dimension scale factor.

    depth_error = Z * (s - 1) and dim_error = H * (s - 1), evaluated as
    Z*s - Z and H*s - H so the errors are exact when Z*s is.
    """
    if not depth > 0:
        raise ValueError(f"depth must be positive, got {depth}")
    if not height > 0:
        raise ValueError(f"height must be positive, got {height}")
    if not scale > 0:
        raise ValueError(f"scale must be positive, got {scale}")
    return AmplificationRow(
        depth=depth,
        scale=scale,
        dim_error=height * scale - height,
        depth_error=depth * scale - depth,
    )


def amplification_table(
    depths=tuple(range(10, 101, 10)),
    scales=(1.02, 1.04, 1.08),
    height: float = CAR_MEAN_HEIGHT,
) -> list:
    """The canonical amplification grid over depths and scale factors."""
    return [error_amplification(z, s, height) for z in depths for s in scales]


@dataclass(frozen=True)
class SweepSummary:
    rows: int
    mean_deviation: float
    max_deviation: float


def ambiguity_sweep(frames, scales, out) -> SweepSummary:
    """Write one CSV row per (non-DontCare label, scale) across frames.

    Each row reports the exact-family projection deviation, the 2D IoU of
    the variant that scales location but keeps dimensions (the frustum-shift
    case), and the linear / IoU quality scores of that variant. Rows that
    cannot be projected carry nan in the score columns.
    """
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    rows = 0
    dev_sum = 0.0
    dev_max = 0.0
    for frame in frames:
        for index, label in enumerate(frame.labels):
            if label.is_dontcare:
                continue
            if label.depth <= 0:
                log.warning(
                    "frame %s label %d at Z=%.3f skipped", frame.frame_id, index, label.depth
                )
                continue
            report = ambiguous_family(label, scales, frame.calib)
            source_box = project_box_aabb(frame.calib, label.box3)
            for s in scales:
                member_box = project_box_aabb(
                    frame.calib, _scaled_label(label, s, scale_dims=True).box3
                )
                deviation = _aabb_deviation(source_box, member_box)
                unscaled = _scaled_label(label, s, scale_dims=False)
                try:
                    variant_box = project_box_aabb(frame.calib, unscaled.box3)
                    iou_unscaled = aabb_iou(source_box, variant_box)
                    iou_score = iou_label_score(frame.calib, label, unscaled)
                except BehindCameraError:
                    iou_unscaled = float("nan")
                    iou_score = float("nan")
                linear = linear_label_score(label.depth, s - 1.0, DEFAULT_C)
                writer.writerow(
                    [
                        frame.frame_id,
                        index,
                        label.class_name,
                        repr(label.depth),
                        repr(float(s)),
                        repr(deviation),
                        repr(iou_unscaled),
                        repr(linear),
                        repr(iou_score),
                    ]
                )
                rows += 1
                dev_sum += deviation
                dev_max = max(dev_max, report.max_projection_deviation, deviation)
    return SweepSummary(
        rows=rows,
        mean_deviation=dev_sum / rows if rows else 0.0,
        max_deviation=dev_max,
    )

"""Frustum-shift pseudo-label generation, quality scoring, and loss combinators.

A pseudo label is a copy of a ground-truth 3D label whose depth is scaled
by (1 + delta_z) while the per-pixel ray ratios x/z and y/z stay fixed, so
the shifted box projects onto the same image location. Dimensions, yaw,
and the observation angle are preserved. Each pseudo label carries a
quality score from one of two strategies: the 2D IoU between the projected
ground-truth and pseudo boxes, or the linear score 1 - |delta_z * Z| / c.
"""

import logging
from dataclasses import dataclass, field, replace

from .errors import BehindCameraError, LabelSkipped
from .geometry import aabb_iou, project_box_aabb
from .labels import ObjectLabel, PseudoLabel

log = logging.getLogger(__name__)

DEFAULT_DELTA_Z = (-0.08, -0.04, 0.04, 0.08)
DEFAULT_C = 4.0
DEFAULT_LAMBDA = 1.0
STRATEGIES = ("iou", "linear")


@dataclass(frozen=True)
class ClassSettings:
    """Per-class overrides; None fields fall back to the global config."""

    delta_z_set: tuple | None = None
    c: float | None = None


@dataclass(frozen=True)
class ObmoConfig:
    """Augmentation settings.

    delta_z_set holds fractional depth offsets (e.g. +0.04 for +4%); an
    empty set turns augmentation into the identity pipeline. filter_threshold
    is exclusive: only pseudo labels with quality strictly above it are kept.
    """

    delta_z_set: tuple = DEFAULT_DELTA_Z
    strategy: str = "linear"
    c: float = DEFAULT_C
    lam: float = DEFAULT_LAMBDA
    filter_threshold: float = 0.0
    per_class: dict = field(default_factory=dict)
    use_annotated_gt_box: bool = False

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ValueError(f"strategy must be one of {STRATEGIES}, got {self.strategy!r}")
        if not self.c > 0:
            raise ValueError(f"c must be positive, got {self.c}")
        _check_delta_z(self.delta_z_set)
        object.__setattr__(self, "delta_z_set", tuple(self.delta_z_set))
        for name, settings in self.per_class.items():
            if settings.delta_z_set is not None:
                _check_delta_z(settings.delta_z_set)
            if settings.c is not None and not settings.c > 0:
                raise ValueError(f"c override for {name!r} must be positive, got {settings.c}")

    def delta_z_for(self, class_name: str) -> tuple:
        settings = self.per_class.get(class_name)
        if settings is not None and settings.delta_z_set is not None:
            return tuple(settings.delta_z_set)
        return self.delta_z_set

    def c_for(self, class_name: str) -> float:
        settings = self.per_class.get(class_name)
        if settings is not None and settings.c is not None:
            return settings.c
        return self.c


def _check_delta_z(values):
    for v in values:
        if v == 0.0:
            raise ValueError("delta_z offsets must be nonzero")
        if not abs(v) < 1.0:
            raise ValueError(f"|delta_z| must be below 1, got {v}")


def shift_along_frustum(label: ObjectLabel, delta_z: float, calib, image_size=None) -> ObjectLabel:
    """Shift a label's depth by the fraction delta_z along its viewing ray.

    Z' = (1 + delta_z) * Z with X and Y scaled by the same factor, which
    keeps the x/z and y/z ray ratios (and hence the observation angle)
    unchanged. Dimensions, yaw, class, truncation, and occlusion are
    preserved; the 2D box is replaced by the projection of the shifted box.

    Raises LabelSkipped when the label sits behind the camera or the
    shifted box has a corner behind it.
    """
    if delta_z <= -1.0:
        raise ValueError(f"delta_z must be greater than -1, got {delta_z}")
    if label.depth <= 0:
        raise LabelSkipped(f"label at Z={label.depth} is behind the camera")
    if delta_z == 0.0:
        return label
    factor = 1.0 + delta_z
    x, y, z = label.location
    location = (x * factor, y * factor, z * factor)
    shifted = replace(label, location=location)
    try:
        bbox2d = project_box_aabb(calib, shifted.box3, image_size)
    except BehindCameraError as exc:
        raise LabelSkipped(str(exc)) from exc
    return replace(shifted, bbox2d=bbox2d)


def iou_label_score(
    calib, gt: ObjectLabel, pseudo: ObjectLabel, image_size=None, use_annotated_gt_box=False
) -> float:
    """Quality of a pseudo label as 2D IoU of the projected boxes.

    The ground-truth box is reprojected from its 3D geometry by default;
    use_annotated_gt_box switches to the stored 2D annotation. Both boxes
    are projected with identical clipping settings.
    """
    try:
        if use_annotated_gt_box:
            gt_box = gt.bbox2d
        else:
            gt_box = project_box_aabb(calib, gt.box3, image_size)
        pseudo_box = project_box_aabb(calib, pseudo.box3, image_size)
    except BehindCameraError as exc:
        raise LabelSkipped(str(exc)) from exc
    return aabb_iou(gt_box, pseudo_box)


def linear_label_score(depth: float, delta_z: float, c: float = DEFAULT_C) -> float:
    """Linear quality score 1 - |delta_z * Z| / c; negative values mark
    pseudo labels to be filtered out."""
    if not c > 0:
        raise ValueError(f"c must be positive, got {c}")
    if not depth > 0:
        raise ValueError(f"depth must be positive, got {depth}")
    return 1.0 - abs(delta_z * depth) / c


def generate_pseudo_labels(frame, config: ObmoConfig, classes=None, skipped=None) -> list:
    """Pseudo labels for every non-DontCare ground truth of a frame.

    For each label and each configured depth offset, the label is shifted
    along its frustum and scored with the configured strategy; only labels
    with quality strictly above config.filter_threshold are kept. Output
    order follows ground-truth order, then offset order. Ground truths are
    not duplicated into the output.

    Per-label failures never abort the frame: they are logged and, when a
    `skipped` list is supplied, appended to it as (label_index, delta_z,
    reason) tuples. `classes` optionally restricts augmentation to a set of
    class names.
    """
    out = []
    for index, label in enumerate(frame.labels):
        if label.is_dontcare:
            continue
        if classes is not None and label.class_name not in classes:
            continue
        c = config.c_for(label.class_name)
        for delta_z in config.delta_z_for(label.class_name):
            try:
                shifted = shift_along_frustum(label, delta_z, frame.calib, frame.image_size)
                if config.strategy == "linear":
                    quality = linear_label_score(label.depth, delta_z, c)
                else:
                    quality = iou_label_score(
                        frame.calib,
                        label,
                        shifted,
                        frame.image_size,
                        config.use_annotated_gt_box,
                    )
            except LabelSkipped as exc:
                log.warning(
                    "frame %s label %d delta_z %+.3f skipped: %s",
                    frame.frame_id, index, delta_z, exc,
                )
                if skipped is not None:
                    skipped.append((index, delta_z, str(exc)))
                continue
            if quality > config.filter_threshold:
                out.append(PseudoLabel(shifted, delta_z, quality, config.strategy))
    return out


def label_score_loss(predicted: float, target: float) -> float:
    """L1 distance between predicted and target quality scores."""
    return abs(predicted - target)


def total_loss(baseline: float, score_loss: float, lam: float = DEFAULT_LAMBDA) -> float:
    """Baseline detector loss plus lam-weighted quality-score loss."""
    return baseline + lam * score_loss


@dataclass(frozen=True)
class FrameStats:
    """Per-frame augmentation counters."""

    gt_labels: int
    candidates: int
    retained: int
    dropped: int
    skipped: int


def augment_frame(frame, config: ObmoConfig, classes=None, decimals: int = 6):
    """Generate pseudo labels for a frame and serialize the augmented file.

    Returns (text, FrameStats). The text is what cmd_augment writes and what
    the bindings bridge returns, so both surfaces are byte-identical by
    construction.
    """
    from .labels import write_augmented_frame

    skips = []
    pseudo = generate_pseudo_labels(frame, config, classes=classes, skipped=skips)
    candidates = sum(
        len(config.delta_z_for(lab.class_name))
        for lab in frame.labels
        if not lab.is_dontcare and (classes is None or lab.class_name in classes)
    )
    stats = FrameStats(
        gt_labels=len(frame.labels),
        candidates=candidates,
        retained=len(pseudo),
        dropped=candidates - len(pseudo) - len(skips),
        skipped=len(skips),
    )
    return write_augmented_frame(frame.labels, pseudo, decimals=decimals), stats

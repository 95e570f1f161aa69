"""KITTI-format object labels and the augmented format carrying quality scores.

Label lines follow the devkit field order:

    type truncated occluded alpha left top right bottom H W L X Y Z ry [score]

15 fields for ground truth, 16 when a score (or pseudo-label quality) is
attached. Locations are camera-frame bottom-face centers, y down, z forward.
"""

import logging
import math
import os
from dataclasses import dataclass, replace

from .errors import ContractViolation, ParseError
from .geometry import Box2, Box3

log = logging.getLogger(__name__)

DONTCARE = "DontCare"

_N_FIELDS_GT = 15
_N_FIELDS_SCORED = 16


@dataclass(frozen=True)
class ObjectLabel:
    """One KITTI annotation; dims are (H, W, L), location the bottom center."""

    class_name: str
    truncation: float
    occlusion: int
    alpha: float
    bbox2d: Box2
    dims: tuple
    location: tuple
    yaw: float
    score: float | None = None

    def __post_init__(self):
        if self.is_dontcare:
            return
        h, w, l = self.dims
        if not (h > 0 and w > 0 and l > 0):
            raise ValueError(f"dims must be positive for {self.class_name}, got {self.dims}")
        if not (0.0 <= self.truncation <= 1.0):
            raise ValueError(f"truncation must be in [0, 1], got {self.truncation}")
        if self.occlusion not in (0, 1, 2, 3):
            raise ValueError(f"occlusion must be in {{0, 1, 2, 3}}, got {self.occlusion}")
        if not (-math.pi <= self.alpha <= math.pi):
            raise ValueError(f"alpha out of [-pi, pi]: {self.alpha}")
        if not (-math.pi <= self.yaw <= math.pi):
            raise ValueError(f"yaw out of [-pi, pi]: {self.yaw}")

    @property
    def is_dontcare(self) -> bool:
        return self.class_name == DONTCARE

    @property
    def depth(self) -> float:
        return self.location[2]

    @property
    def box3(self) -> Box3:
        return Box3(self.location, self.dims, self.yaw)


@dataclass(frozen=True)
class PseudoLabel:
    """A frustum-shifted copy of a ground-truth label plus its quality score."""

    base: ObjectLabel
    delta_z: float
    quality: float
    strategy: str  # "iou" or "linear"

    def __post_init__(self):
        if self.strategy not in ("iou", "linear"):
            raise ValueError(f"unknown scoring strategy {self.strategy!r}")
        if self.delta_z == 0.0 and self.quality != 1.0:
            raise ValueError("an unshifted pseudo label must have quality 1.0")


@dataclass(frozen=True)
class FrameAnnotation:
    """All labels of one frame together with its calibration."""

    frame_id: str
    labels: tuple
    calib: object  # CameraIntrinsics
    image_size: tuple | None = None


def _wrap_angle(value: float, what: str, lineno: int) -> float:
    if -math.pi <= value <= math.pi:
        return value
    wrapped = math.remainder(value, math.tau)
    log.warning("line %d: %s %.6f outside [-pi, pi], wrapped to %.6f", lineno, what, value, wrapped)
    return wrapped


def parse_labels(text) -> list:
    """Parse KITTI label text (string or stream) into ObjectLabel values.

    Lines may have 15 fields (no score) or 16 (trailing score). Angles
    outside [-pi, pi] are wrapped with a warning; DontCare lines pass
    through untouched.
    """
    if hasattr(text, "read"):
        text = text.read()
    labels = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) not in (_N_FIELDS_GT, _N_FIELDS_SCORED):
            raise ParseError(
                lineno, f"expected {_N_FIELDS_GT} or {_N_FIELDS_SCORED} fields, got {len(tokens)}"
            )
        name = tokens[0]
        try:
            values = [float(t) for t in tokens[1:]]
        except ValueError as exc:
            raise ParseError(lineno, str(exc)) from None
        occlusion = values[1]
        if occlusion != int(occlusion):
            raise ParseError(lineno, f"occlusion must be integral, got {occlusion}")
        alpha, yaw = values[2], values[13]
        if name != DONTCARE:
            alpha = _wrap_angle(alpha, "alpha", lineno)
            yaw = _wrap_angle(yaw, "yaw", lineno)
        try:
            labels.append(
                ObjectLabel(
                    class_name=name,
                    truncation=values[0],
                    occlusion=int(occlusion),
                    alpha=alpha,
                    bbox2d=Box2(values[3], values[4], values[5], values[6]),
                    dims=(values[7], values[8], values[9]),
                    location=(values[10], values[11], values[12]),
                    yaw=yaw,
                    score=values[14] if len(values) > 14 else None,
                )
            )
        except ValueError as exc:
            raise ParseError(lineno, str(exc)) from None
    return labels


def format_label(label: ObjectLabel, with_score: bool = False, decimals: int = 6) -> str:
    """One KITTI label line; truncation keeps 2 decimals, the rest `decimals`."""
    if decimals < 2:
        raise ValueError(f"decimals must be at least 2, got {decimals}")
    d = decimals
    parts = [
        label.class_name,
        f"{label.truncation:.2f}",
        f"{label.occlusion:d}",
        f"{label.alpha:.{d}f}",
        f"{label.bbox2d.left:.{d}f}",
        f"{label.bbox2d.top:.{d}f}",
        f"{label.bbox2d.right:.{d}f}",
        f"{label.bbox2d.bottom:.{d}f}",
        f"{label.dims[0]:.{d}f}",
        f"{label.dims[1]:.{d}f}",
        f"{label.dims[2]:.{d}f}",
        f"{label.location[0]:.{d}f}",
        f"{label.location[1]:.{d}f}",
        f"{label.location[2]:.{d}f}",
        f"{label.yaw:.{d}f}",
    ]
    if with_score:
        score = 1.0 if label.score is None else label.score
        parts.append(f"{score:.{d}f}")
    return " ".join(parts)


def write_labels(labels, with_score: bool = False, decimals: int = 6) -> str:
    """Serialize labels to KITTI text. A label lacking a score writes 1.0
    when with_score is set (ground-truth quality)."""
    return "".join(format_label(lab, with_score, decimals) + "\n" for lab in labels)


def write_augmented_frame(gt, pseudo, decimals: int = 6) -> str:
    """Augmented label file: GT lines first (quality 1.0), then pseudo lines
    with their quality in the score column; all lines 16-field.

    Raises ContractViolation for a pseudo label with quality <= 0 (such
    labels must be filtered before writing).
    """
    for p in pseudo:
        if not p.quality > 0:
            raise ContractViolation(
                f"pseudo label with quality {p.quality} must be filtered before writing"
            )
    lines = write_labels(gt, with_score=True, decimals=decimals)
    pseudo_rows = [replace(p.base, score=p.quality) for p in pseudo]
    return lines + write_labels(pseudo_rows, with_score=True, decimals=decimals)


def frame_ids(labels_dir) -> list:
    """Sorted frame ids (file stems) of all .txt files in a labels directory."""
    return sorted(
        os.path.splitext(name)[0]
        for name in os.listdir(labels_dir)
        if name.endswith(".txt")
    )


def load_labels(path) -> list:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_labels(fh)


def label_path(labels_dir, frame_id: str) -> str:
    return os.path.join(labels_dir, f"{frame_id}.txt")

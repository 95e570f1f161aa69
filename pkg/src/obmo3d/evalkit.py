"""KITTI-style evaluation: difficulty filtering, greedy IoU matching, and
average precision at 40 recall positions for BEV and 3D boxes."""

import enum
from dataclasses import dataclass

from .errors import ContractViolation, FrameSetMismatchError, UndefinedAPError
from .geometry import pairwise_bev_iou, pairwise_iou_3d
from .labels import frame_ids, label_path, load_labels


class Difficulty(enum.IntEnum):
    EASY = 0
    MODERATE = 1
    HARD = 2
    IGNORED = 3


# Devkit thresholds per difficulty: minimum 2D box height (px), maximum
# occlusion state, maximum truncation fraction.
MIN_BOX_HEIGHT = (40.0, 25.0, 25.0)
MAX_OCCLUSION = (0, 1, 2)
MAX_TRUNCATION = (0.15, 0.30, 0.50)

RECALL_POSITIONS = tuple((j + 1) / 40 for j in range(40))

DEFAULT_IOU_THRESHOLDS = {"Car": 0.7, "Pedestrian": 0.5, "Cyclist": 0.5}


def default_iou_threshold(class_name: str) -> float:
    """0.7 for Car, 0.5 otherwise."""
    return DEFAULT_IOU_THRESHOLDS.get(class_name, 0.5)


def difficulty_of(label) -> Difficulty:
    """Difficulty stratum of a ground-truth label.

    A label counts for difficulty D evaluation when its stratum is <= D;
    labels failing even the Hard thresholds (and DontCare) are Ignored.
    """
    if label.is_dontcare:
        return Difficulty.IGNORED
    height = label.bbox2d.height
    for d in (Difficulty.EASY, Difficulty.MODERATE, Difficulty.HARD):
        if (
            height >= MIN_BOX_HEIGHT[d]
            and label.occlusion <= MAX_OCCLUSION[d]
            and label.truncation <= MAX_TRUNCATION[d]
        ):
            return d
    return Difficulty.IGNORED


@dataclass(frozen=True)
class MatchResult:
    """Outcome of matching one frame's detections against its ground truth."""

    events: tuple  # (score, is_tp) per counted detection
    num_fn: int
    num_gt: int  # non-ignored ground truths
    assignments: tuple  # (det_index, gt_index) pairs for true positives

    @property
    def num_tp(self) -> int:
        return sum(1 for _, tp in self.events if tp)

    @property
    def num_fp(self) -> int:
        return sum(1 for _, tp in self.events if not tp)


def match_detections(dets, gts, iou_fn, threshold: float, ignored=None) -> MatchResult:
    """Greedy score-descending matching of detections to ground truths.

    Each detection takes the unmatched non-ignored ground truth of highest
    IoU when that IoU is >= threshold; each ground truth is matched at most
    once. A detection that matches no real ground truth but overlaps an
    ignored one (IoU >= threshold) is discarded: neither TP nor FP. Ignored
    ground truths never count as FN and never consume a detection that
    could be a true positive. Score ties break by input index.
    """
    if ignored is None:
        ignored = [False] * len(gts)
    for det in dets:
        if det.score is None:
            raise ContractViolation(f"detection {det.class_name} has no score")
    order = sorted(range(len(dets)), key=lambda i: -dets[i].score)
    iou_cache = {}

    def iou(i, j):
        key = (i, j)
        if key not in iou_cache:
            iou_cache[key] = iou_fn(dets[i], gts[j])
        return iou_cache[key]

    matched = [False] * len(gts)
    events = []
    assignments = []
    for i in order:
        best_j = -1
        best_iou = 0.0
        for j in range(len(gts)):
            if matched[j] or ignored[j]:
                continue
            v = iou(i, j)
            if v >= threshold and v > best_iou:
                best_iou = v
                best_j = j
        if best_j >= 0:
            matched[best_j] = True
            events.append((dets[i].score, True))
            assignments.append((i, best_j))
            continue
        if any(ignored[j] and iou(i, j) >= threshold for j in range(len(gts))):
            continue  # overlaps only ignored ground truth: discarded
        events.append((dets[i].score, False))
    num_gt = sum(1 for flag in ignored if not flag)
    num_fn = sum(
        1 for j in range(len(gts)) if not ignored[j] and not matched[j]
    )
    return MatchResult(tuple(events), num_fn, num_gt, tuple(assignments))


def pr_curve_r40(events, num_gt: int):
    """Interpolated precision at the 40 recall positions.

    Events are (score, is_tp) pairs across all frames. Detections with
    exactly equal scores fall into one PR point: no score threshold can
    separate them. Precision at each recall position r is the maximum
    precision over all achieved recalls >= r (0 when none is achieved).
    """
    if num_gt <= 0:
        raise UndefinedAPError("no ground-truth objects; AP is undefined")
    ordered = sorted(events, key=lambda e: -e[0])
    points = []
    tp = 0
    fp = 0
    i = 0
    n = len(ordered)
    while i < n:
        score = ordered[i][0]
        while i < n and ordered[i][0] == score:
            if ordered[i][1]:
                tp += 1
            else:
                fp += 1
            i += 1
        points.append((tp / num_gt, tp / (tp + fp)))
    precisions = []
    for r in RECALL_POSITIONS:
        best = 0.0
        for recall, precision in points:
            if recall >= r and precision > best:
                best = precision
        precisions.append(best)
    return precisions


def ap_r40(events, num_gt: int) -> float:
    """Average precision (percent) over 40 equally spaced recall positions."""
    precisions = pr_curve_r40(events, num_gt)
    return sum(precisions) / len(precisions) * 100.0


@dataclass(frozen=True)
class ApCurve:
    ap: float
    num_gt: int
    precisions: tuple  # interpolated precision at RECALL_POSITIONS


@dataclass(frozen=True)
class EvalResult:
    """AP_BEV and AP_3D per difficulty; entries are None when the stratum
    holds no ground truth."""

    class_name: str
    iou_threshold: float
    bev: dict
    box3d: dict

    def to_dict(self) -> dict:
        def curve(c):
            if c is None:
                return None
            return {
                "ap": c.ap,
                "num_gt": c.num_gt,
                "recall_positions": list(RECALL_POSITIONS),
                "precisions": list(c.precisions),
            }

        return {
            "class": self.class_name,
            "iou_threshold": self.iou_threshold,
            "metrics": {
                "bev": {k: curve(v) for k, v in self.bev.items()},
                "3d": {k: curve(v) for k, v in self.box3d.items()},
            },
        }


_EVAL_LEVELS = (Difficulty.EASY, Difficulty.MODERATE, Difficulty.HARD)


def evaluate(det_dir, gt_dir, calib_dir=None, class_name="Car", iou_threshold=None) -> EvalResult:
    """Evaluate a detections directory against a ground-truth directory.

    Both directories must hold the same `<frame_id>.txt` set. calib_dir is
    accepted for interface parity but unused: difficulty comes from the
    stored 2D boxes and the rotated IoUs live in object space. Ground
    truths of other classes are excluded; same-class labels above the
    evaluated difficulty act as ignored regions.
    """
    gt_frames = frame_ids(gt_dir)
    det_frames = frame_ids(det_dir)
    if set(gt_frames) != set(det_frames):
        raise FrameSetMismatchError(
            missing_in_det=set(gt_frames) - set(det_frames),
            missing_in_gt=set(det_frames) - set(gt_frames),
        )
    if iou_threshold is None:
        iou_threshold = default_iou_threshold(class_name)

    per_level = {
        level: {"bev": {"events": [], "num_gt": 0}, "3d": {"events": [], "num_gt": 0}}
        for level in _EVAL_LEVELS
    }
    for frame in gt_frames:
        gts = [g for g in load_labels(label_path(gt_dir, frame)) if g.class_name == class_name]
        dets = [d for d in load_labels(label_path(det_dir, frame)) if d.class_name == class_name]
        for det in dets:
            if det.score is None:
                raise ContractViolation(f"frame {frame}: detection has no score")
        strata = [difficulty_of(g) for g in gts]
        matrices = {}
        if dets and gts:
            matrices["bev"] = pairwise_bev_iou(
                [d.box3.bev for d in dets], [g.box3.bev for g in gts]
            )
            matrices["3d"] = pairwise_iou_3d([d.box3 for d in dets], [g.box3 for g in gts])
        det_index = {id(d): i for i, d in enumerate(dets)}
        gt_index = {id(g): j for j, g in enumerate(gts)}
        for level in _EVAL_LEVELS:
            ignored = [s > level for s in strata]
            for metric in ("bev", "3d"):
                if dets and gts:
                    matrix = matrices[metric]
                    iou_fn = lambda d, g, m=matrix: m[det_index[id(d)], gt_index[id(g)]]
                else:
                    iou_fn = lambda d, g: 0.0
                result = match_detections(dets, gts, iou_fn, iou_threshold, ignored)
                acc = per_level[level][metric]
                acc["events"].extend(result.events)
                acc["num_gt"] += result.num_gt

    bev = {}
    box3d = {}
    for level in _EVAL_LEVELS:
        name = level.name.lower()
        for metric, sink in (("bev", bev), ("3d", box3d)):
            acc = per_level[level][metric]
            if acc["num_gt"] == 0:
                sink[name] = None
                continue
            precisions = pr_curve_r40(acc["events"], acc["num_gt"])
            sink[name] = ApCurve(
                ap=sum(precisions) / len(precisions) * 100.0,
                num_gt=acc["num_gt"],
                precisions=tuple(precisions),
            )
    return EvalResult(class_name, iou_threshold, bev, box3d)

"""Command-line front end for dataset-scale workflows.

Subcommands:
    augment   write augmented label files with frustum-shifted pseudo labels
    analyze   depth-ambiguity sweep (CSV) + error-amplification table
    eval      AP_BEV / AP_3D at 40 recall points per difficulty
    score     JSON request bridge on stdin/stdout (used by the bindings)

Exit codes:
    0  success, no warnings
    1  completed with warnings (skipped frames or labels)
    2  usage error (argparse)
    3  path error (missing file or directory)
    4  parse error (malformed label or calibration file)
    5  contract violation (invalid inputs, e.g. unfiltered pseudo labels
       or detections without scores)

Directory layout mirrors KITTI: per-frame `<frame_id>.txt` files under a
labels directory and a calibration directory.
"""

import argparse
import configparser
import json
import logging
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor

from . import analysis, bridge, evalkit
from .augment import ClassSettings, ObmoConfig, augment_frame
from .calib import load_calibration
from .errors import (
    ContractViolation,
    FrameSetMismatchError,
    InvalidIntrinsicsError,
    MissingCameraError,
    ParseError,
)
from .geometry import BACKEND_NAME
from .labels import FrameAnnotation, frame_ids, label_path, load_labels

log = logging.getLogger("obmo3d")

EXIT_OK = 0
EXIT_WARNINGS = 1
EXIT_USAGE = 2
EXIT_PATH = 3
EXIT_PARSE = 4
EXIT_CONTRACT = 5


class _WarningCounter(logging.Handler):
    def __init__(self):
        super().__init__(level=logging.WARNING)
        self.count = 0

    def emit(self, record):
        self.count += 1


def _parse_offsets(text: str, as_percent: bool) -> tuple:
    """Comma list of depth offsets; bare numbers are percents on the CLI
    and fractions in config files, a '%' suffix always means percent."""
    out = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        if token.endswith("%"):
            out.append(float(token[:-1]) / 100.0)
        elif as_percent:
            out.append(float(token) / 100.0)
        else:
            out.append(float(token))
    return tuple(out)


def _parse_scales(text: str) -> tuple:
    return tuple(float(t.strip()) for t in text.split(",") if t.strip())


def _parse_image_size(text: str) -> tuple:
    width, _, height = text.lower().partition("x")
    return (float(width), float(height))


def load_config_file(path) -> dict:
    """Read an INI config: an [obmo] section plus optional [class.NAME]
    override sections. delta_z values use a % suffix for percents."""
    parser = configparser.ConfigParser(interpolation=None)
    with open(path, "r", encoding="utf-8") as fh:
        parser.read_file(fh)
    out = {}
    if parser.has_section("obmo"):
        section = parser["obmo"]
        if "delta_z" in section:
            out["delta_z_set"] = _parse_offsets(section["delta_z"], as_percent=False)
        if "strategy" in section:
            out["strategy"] = section["strategy"].strip().lower()
        if "c" in section:
            out["c"] = section.getfloat("c")
        if "lambda" in section:
            out["lam"] = section.getfloat("lambda")
        if "filter_threshold" in section:
            out["filter_threshold"] = section.getfloat("filter_threshold")
        if "use_annotated_gt_box" in section:
            out["use_annotated_gt_box"] = section.getboolean("use_annotated_gt_box")
    per_class = {}
    for name in parser.sections():
        if not name.startswith("class."):
            continue
        section = parser[name]
        per_class[name[len("class."):]] = ClassSettings(
            delta_z_set=(
                _parse_offsets(section["delta_z"], as_percent=False)
                if "delta_z" in section
                else None
            ),
            c=section.getfloat("c") if "c" in section else None,
        )
    if per_class:
        out["per_class"] = per_class
    return out


def build_config(args) -> ObmoConfig:
    """Config precedence: CLI flags > config file > defaults."""
    kwargs = {}
    if getattr(args, "config", None):
        kwargs.update(load_config_file(args.config))
    if getattr(args, "delta_z", None) is not None:
        kwargs["delta_z_set"] = _parse_offsets(args.delta_z, as_percent=True)
    if getattr(args, "strategy", None) is not None:
        kwargs["strategy"] = args.strategy
    if getattr(args, "c", None) is not None:
        kwargs["c"] = args.c
    if getattr(args, "lam", None) is not None:
        kwargs["lam"] = args.lam
    if getattr(args, "filter_threshold", None) is not None:
        kwargs["filter_threshold"] = args.filter_threshold
    if getattr(args, "use_annotated_gt_box", False):
        kwargs["use_annotated_gt_box"] = True
    return ObmoConfig(**kwargs)


def _check_dir(path, what) -> None:
    if not os.path.isdir(path):
        raise FileNotFoundError(f"{what} directory not found: {path}")


def _load_frame(labels_dir, calib_dir, frame_id, image_size):
    calib_file = os.path.join(calib_dir, f"{frame_id}.txt")
    if not os.path.isfile(calib_file):
        log.warning("frame %s: missing calibration file, skipped", frame_id)
        return None
    entries = load_calibration(calib_file)
    return FrameAnnotation(
        frame_id=frame_id,
        labels=tuple(load_labels(label_path(labels_dir, frame_id))),
        calib=entries["P2"],
        image_size=image_size,
    )


def cmd_augment(args) -> int:
    started = time.perf_counter()
    _check_dir(args.labels, "labels")
    _check_dir(args.calib, "calibration")
    config = build_config(args)
    classes = set(args.class_names) if args.class_names else None
    image_size = _parse_image_size(args.image_size) if args.image_size else None
    os.makedirs(args.out, exist_ok=True)
    frames = frame_ids(args.labels)

    def process(frame_id):
        frame = _load_frame(args.labels, args.calib, frame_id, image_size)
        if frame is None:
            return None
        text, stats = augment_frame(frame, config, classes=classes, decimals=args.decimals)
        return frame_id, text, stats

    if args.workers > 1:
        with ThreadPoolExecutor(max_workers=args.workers) as pool:
            results = list(pool.map(process, frames))
    else:
        results = [process(f) for f in frames]

    totals = {"frames": 0, "gt": 0, "retained": 0, "dropped": 0, "skipped": 0}
    for result in results:
        if result is None:
            continue
        frame_id, text, stats = result
        with open(os.path.join(args.out, f"{frame_id}.txt"), "w", encoding="utf-8") as fh:
            fh.write(text)
        totals["frames"] += 1
        totals["gt"] += stats.gt_labels
        totals["retained"] += stats.retained
        totals["dropped"] += stats.dropped
        totals["skipped"] += stats.skipped

    print(f"augment: {totals['frames']}/{len(frames)} frames, {totals['gt']} ground-truth labels")
    print(
        f"pseudo labels: {totals['retained']} retained, "
        f"{totals['dropped']} dropped, {totals['skipped']} skipped"
    )
    if not args.deterministic:
        print(f"elapsed: {time.perf_counter() - started:.3f} s")
    return EXIT_OK


def cmd_analyze(args) -> int:
    started = time.perf_counter()
    _check_dir(args.labels, "labels")
    _check_dir(args.calib, "calibration")
    scales = _parse_scales(args.scales)

    print(f"dimension-error to depth-error amplification (H = {analysis.CAR_MEAN_HEIGHT} m)")
    print(f"{'depth_m':>8} {'scale':>6} {'dim_error_m':>12} {'depth_error_m':>14}")
    for row in analysis.amplification_table():
        print(f"{row.depth:>8.1f} {row.scale:>6.2f} {row.dim_error:>12.4f} {row.depth_error:>14.2f}")

    frames = []
    for frame_id in frame_ids(args.labels):
        frame = _load_frame(args.labels, args.calib, frame_id, None)
        if frame is not None:
            frames.append(frame)
    with open(args.out, "w", encoding="utf-8") as fh:
        summary = analysis.ambiguity_sweep(frames, scales, fh)
    print(
        f"sweep: {summary.rows} rows, mean deviation {summary.mean_deviation:.3e} px, "
        f"max deviation {summary.max_deviation:.3e} px -> {args.out}"
    )
    if not args.deterministic:
        print(f"elapsed: {time.perf_counter() - started:.3f} s")
    return EXIT_OK


def cmd_eval(args) -> int:
    started = time.perf_counter()
    _check_dir(args.det, "detections")
    _check_dir(args.gt, "ground-truth")
    if args.calib:
        _check_dir(args.calib, "calibration")
    result = evalkit.evaluate(
        args.det, args.gt, args.calib, class_name=args.class_name,
        iou_threshold=args.iou_threshold,
    )
    print(
        f"class: {result.class_name}  iou_threshold: {result.iou_threshold:.2f}  "
        f"kernel backend: {BACKEND_NAME}"
    )
    print(f"{'difficulty':>10} {'AP_BEV|R40':>12} {'AP_3D|R40':>12} {'num_gt':>8}")
    for name in ("easy", "moderate", "hard"):
        bev = result.bev[name]
        box3d = result.box3d[name]
        bev_s = f"{bev.ap:.2f}" if bev else "-"
        b3d_s = f"{box3d.ap:.2f}" if box3d else "-"
        num_gt = bev.num_gt if bev else 0
        print(f"{name:>10} {bev_s:>12} {b3d_s:>12} {num_gt:>8}")
    with open(args.report, "w", encoding="utf-8") as fh:
        json.dump(result.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"report: {args.report}")
    if args.pr_csv:
        with open(args.pr_csv, "w", encoding="utf-8") as fh:
            fh.write("metric,difficulty,recall,precision\n")
            for metric, table in (("bev", result.bev), ("3d", result.box3d)):
                for name in ("easy", "moderate", "hard"):
                    curve = table[name]
                    if curve is None:
                        continue
                    for r, p in zip(evalkit.RECALL_POSITIONS, curve.precisions):
                        fh.write(f"{metric},{name},{r!r},{p!r}\n")
        print(f"pr curves: {args.pr_csv}")
    if not args.deterministic:
        print(f"elapsed: {time.perf_counter() - started:.3f} s")
    return EXIT_OK


def cmd_score(args) -> int:
    if args.request:
        with open(args.request, "r", encoding="utf-8") as fh:
            payload = fh.read()
    else:
        payload = sys.stdin.read()
    try:
        print(bridge.handle_payload(payload))
    except json.JSONDecodeError as exc:
        print(f"error: malformed JSON request: {exc}", file=sys.stderr)
        return EXIT_PARSE
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="obmo3d", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--deterministic", action="store_true",
                       help="suppress timing lines for byte-stable stdout")
        p.add_argument("-v", "--verbose", action="store_true", help="debug logging")

    p = sub.add_parser("augment", help="write augmented label files")
    p.add_argument("--labels", required=True, help="ground-truth labels directory")
    p.add_argument("--calib", required=True, help="calibration directory")
    p.add_argument("--out", required=True, help="output labels directory")
    p.add_argument("--strategy", choices=("iou", "linear"), default=None)
    p.add_argument("--delta-z", dest="delta_z", default=None,
                   help="comma list of depth offsets in percent; values starting "
                        "with '-' need the --delta-z=-8,-4,4,8 form")
    p.add_argument("--c", type=float, default=None, help="linear-score scale in meters")
    p.add_argument("--lambda", dest="lam", type=float, default=None,
                   help="quality-score loss weight")
    p.add_argument("--filter-threshold", type=float, default=None,
                   help="exclusive quality threshold for keeping pseudo labels")
    p.add_argument("--class", dest="class_names", action="append", default=None,
                   help="restrict augmentation to a class (repeatable)")
    p.add_argument("--config", default=None, help="INI config file")
    p.add_argument("--use-annotated-gt-box", action="store_true",
                   help="score IoU against the annotated 2D box instead of the reprojection")
    p.add_argument("--image-size", default=None, help="WxH for clipping projected boxes")
    p.add_argument("--decimals", type=int, default=6, help="decimals for label fields")
    p.add_argument("--workers", type=int, default=1, help="frame-parallel worker threads")
    common(p)
    p.set_defaults(func=cmd_augment)

    p = sub.add_parser("analyze", help="depth-ambiguity sweep and amplification table")
    p.add_argument("--labels", required=True)
    p.add_argument("--calib", required=True)
    p.add_argument("--scales", default="0.96,1.04", help="comma list of scale factors")
    p.add_argument("--out", required=True, help="output CSV path")
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("eval", help="AP_BEV / AP_3D at 40 recall points")
    p.add_argument("--det", required=True, help="detections directory (scored labels)")
    p.add_argument("--gt", required=True, help="ground-truth labels directory")
    p.add_argument("--calib", default=None, help="calibration directory (unused; parity)")
    p.add_argument("--class", dest="class_name", default="Car")
    p.add_argument("--iou-threshold", type=float, default=None,
                   help="defaults to 0.7 for Car, 0.5 otherwise")
    p.add_argument("--report", default="eval_report.json", help="JSON report path")
    p.add_argument("--pr-csv", default=None, help="optional PR-curve CSV path")
    common(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("score", help="JSON request bridge (stdin -> stdout)")
    p.add_argument("--request", default=None, help="read the request from a file")
    common(p)
    p.set_defaults(func=cmd_score)
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    counter = _WarningCounter()
    logging.getLogger("obmo3d").addHandler(counter)
    try:
        code = args.func(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PATH
    except (ParseError, MissingCameraError, InvalidIntrinsicsError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ContractViolation, FrameSetMismatchError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONTRACT
    finally:
        logging.getLogger("obmo3d").removeHandler(counter)
    if code == EXIT_OK and counter.count > 0:
        print(f"warnings: {counter.count}")
        return EXIT_WARNINGS
    if counter.count == 0 and code == EXIT_OK and args.command in ("augment", "analyze"):
        print("warnings: 0")
    return code


if __name__ == "__main__":
    sys.exit(main())

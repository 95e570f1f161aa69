"""JSON request bridge exposing scoring, projection, and pseudo-label
generation to other-language callers.

Requests are JSON objects (or arrays of objects) with an "op" key:

    {"op": "linear_score", "z": 50, "delta_z": 0.04, "c": 4}
    {"op": "iou_score", "intrinsics": {...}, "gt": {...}, "pseudo": {...}}
    {"op": "project", "intrinsics": {...}, "point": [x, y, d]}
    {"op": "generate", "intrinsics": {...}, "labels": [...], "config": {...}}
    {"op": "augment_frame", "calib_text": "...", "label_text": "...",
     "config": {...}}

Every response is {"ok": true, "value": ...} or {"ok": false, "error":
{"type": ..., "message": ..., "field": ...}}. The bridge only converts
values; all arithmetic happens in the library, so augment_frame output is
byte-identical to the files the CLI writes.
"""

import json

from .augment import (
    ClassSettings,
    ObmoConfig,
    augment_frame,
    generate_pseudo_labels,
    iou_label_score,
    linear_label_score,
)
from .calib import CameraIntrinsics, parse_calibration
from .errors import Obmo3dError, RecordError
from .geometry import Box2, Pixel, Point3, project_point
from .labels import FrameAnnotation, ObjectLabel, parse_labels


def _require(record, field, kinds, what):
    if field not in record:
        raise RecordError(field, "missing")
    value = record[field]
    if not isinstance(value, kinds):
        raise RecordError(field, f"expected {what}, got {type(value).__name__}")
    return value


def _number(record, field, optional=False, default=None):
    if optional and field not in record:
        return default
    value = _require(record, field, (int, float), "a number")
    if isinstance(value, bool):
        raise RecordError(field, "expected a number, got a boolean")
    return float(value)


def _number_list(record, field, n):
    value = _require(record, field, (list, tuple), f"a list of {n} numbers")
    if len(value) != n or not all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
    ):
        raise RecordError(field, f"expected a list of {n} numbers")
    return [float(v) for v in value]


def label_from_record(record) -> ObjectLabel:
    """Build an ObjectLabel from a plain JSON record."""
    if not isinstance(record, dict):
        raise RecordError("label", "expected an object")
    name = _require(record, "class_name", str, "a string")
    bbox = _number_list(record, "bbox2d", 4)
    dims = _number_list(record, "dims", 3)
    location = _number_list(record, "location", 3)
    occlusion = _number(record, "occlusion")
    if occlusion != int(occlusion):
        raise RecordError("occlusion", "must be integral")
    score = None
    if record.get("score") is not None:
        score = _number(record, "score")
    try:
        return ObjectLabel(
            class_name=name,
            truncation=_number(record, "truncation"),
            occlusion=int(occlusion),
            alpha=_number(record, "alpha"),
            bbox2d=Box2(*bbox),
            dims=tuple(dims),
            location=tuple(location),
            yaw=_number(record, "yaw"),
            score=score,
        )
    except ValueError as exc:
        raise RecordError("label", str(exc)) from None


def label_to_record(label: ObjectLabel) -> dict:
    return {
        "class_name": label.class_name,
        "truncation": label.truncation,
        "occlusion": label.occlusion,
        "alpha": label.alpha,
        "bbox2d": list(label.bbox2d.as_tuple()),
        "dims": list(label.dims),
        "location": list(label.location),
        "yaw": label.yaw,
        "score": label.score,
    }


def intrinsics_from_record(record) -> CameraIntrinsics:
    if not isinstance(record, dict):
        raise RecordError("intrinsics", "expected an object")
    if "p" in record:
        return CameraIntrinsics.from_matrix(_number_list(record, "p", 12))
    return CameraIntrinsics.simple(
        _number(record, "fx"),
        _number(record, "fy"),
        _number(record, "cx"),
        _number(record, "cy"),
    )


def config_from_record(record) -> ObmoConfig:
    if record is None:
        return ObmoConfig()
    if not isinstance(record, dict):
        raise RecordError("config", "expected an object")
    kwargs = {}
    if "delta_z" in record:
        values = _require(record, "delta_z", (list, tuple), "a list of numbers")
        kwargs["delta_z_set"] = tuple(float(v) for v in values)
    if "strategy" in record:
        kwargs["strategy"] = _require(record, "strategy", str, "a string")
    if "c" in record:
        kwargs["c"] = _number(record, "c")
    if "lambda" in record:
        kwargs["lam"] = _number(record, "lambda")
    if "filter_threshold" in record:
        kwargs["filter_threshold"] = _number(record, "filter_threshold")
    if "use_annotated_gt_box" in record:
        kwargs["use_annotated_gt_box"] = bool(record["use_annotated_gt_box"])
    if "classes" in record:
        sections = _require(record, "classes", dict, "an object")
        per_class = {}
        for name, sub in sections.items():
            if not isinstance(sub, dict):
                raise RecordError("classes", f"override for {name!r} must be an object")
            per_class[name] = ClassSettings(
                delta_z_set=tuple(float(v) for v in sub["delta_z"]) if "delta_z" in sub else None,
                c=float(sub["c"]) if "c" in sub else None,
            )
        kwargs["per_class"] = per_class
    try:
        return ObmoConfig(**kwargs)
    except ValueError as exc:
        raise RecordError("config", str(exc)) from None


def _image_size(record):
    if record.get("image_size") is None:
        return None
    width, height = _number_list(record, "image_size", 2)
    return (width, height)


def _op_linear_score(request):
    return linear_label_score(
        _number(request, "z"),
        _number(request, "delta_z"),
        _number(request, "c", optional=True, default=4.0),
    )


def _op_iou_score(request):
    intr = intrinsics_from_record(_require(request, "intrinsics", dict, "an object"))
    gt = label_from_record(_require(request, "gt", dict, "an object"))
    pseudo = label_from_record(_require(request, "pseudo", dict, "an object"))
    return iou_label_score(
        intr, gt, pseudo, _image_size(request), bool(request.get("use_annotated_gt_box", False))
    )


def _op_project(request):
    intr = intrinsics_from_record(_require(request, "intrinsics", dict, "an object"))
    point = _number_list(request, "point", 3)
    px = project_point(intr, Point3(*point))
    return {"u": px.u, "v": px.v}


def _op_generate(request):
    intr = intrinsics_from_record(_require(request, "intrinsics", dict, "an object"))
    records = _require(request, "labels", list, "a list")
    labels = tuple(label_from_record(r) for r in records)
    config = config_from_record(request.get("config"))
    frame = FrameAnnotation(
        frame_id=str(request.get("frame_id", "frame")),
        labels=labels,
        calib=intr,
        image_size=_image_size(request),
    )
    pseudo = generate_pseudo_labels(frame, config)
    return {
        "results": [
            {"label": label_to_record(p.base), "quality": p.quality, "delta_z": p.delta_z}
            for p in pseudo
        ]
    }


def _op_augment_frame(request):
    calib_text = _require(request, "calib_text", str, "a string")
    label_text = _require(request, "label_text", str, "a string")
    config = config_from_record(request.get("config"))
    entries = parse_calibration(calib_text)
    frame = FrameAnnotation(
        frame_id=str(request.get("frame_id", "frame")),
        labels=tuple(parse_labels(label_text)),
        calib=entries["P2"],
        image_size=_image_size(request),
    )
    decimals = request.get("decimals", 6)
    if not isinstance(decimals, int) or isinstance(decimals, bool):
        raise RecordError("decimals", "expected an integer")
    text, stats = augment_frame(frame, config, decimals=decimals)
    return {
        "text": text,
        "stats": {
            "gt_labels": stats.gt_labels,
            "candidates": stats.candidates,
            "retained": stats.retained,
            "dropped": stats.dropped,
            "skipped": stats.skipped,
        },
    }


_OPS = {
    "linear_score": _op_linear_score,
    "iou_score": _op_iou_score,
    "project": _op_project,
    "generate": _op_generate,
    "augment_frame": _op_augment_frame,
}


def handle_request(request) -> dict:
    """Dispatch one request object; never raises for op-level failures."""
    try:
        if not isinstance(request, dict):
            raise RecordError("request", "expected an object")
        op = _require(request, "op", str, "a string")
        if op not in _OPS:
            raise RecordError("op", f"unknown operation {op!r}")
        return {"ok": True, "value": _OPS[op](request)}
    except RecordError as exc:
        return {"ok": False, "error": {"type": "record", "field": exc.field, "message": str(exc)}}
    except Obmo3dError as exc:
        return {"ok": False, "error": {"type": type(exc).__name__, "message": str(exc)}}
    except ValueError as exc:
        return {"ok": False, "error": {"type": "value", "message": str(exc)}}


def handle_payload(payload: str) -> str:
    """Process a JSON payload (object or array of objects) into JSON output."""
    data = json.loads(payload)
    if isinstance(data, list):
        result = [handle_request(item) for item in data]
    else:
        result = handle_request(data)
    return json.dumps(result)

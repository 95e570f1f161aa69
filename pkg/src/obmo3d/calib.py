"""KITTI-style calibration file parsing and the rectified pinhole parameters.

A calibration file holds one named 3x4 projection matrix per line:

    NAME: v0 v1 v2 v3 v4 v5 v6 v7 v8 v9 v10 v11

Twelve whitespace-separated reals, row-major. The left camera used for
monocular labels is "P2".
"""

import io
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidIntrinsicsError, MissingCameraError, ParseError

CAMERA_ENTRY = "P2"


@dataclass(frozen=True, eq=False)
class CameraIntrinsics:
    """Rectified pinhole projection parameters.

    fx, fy are focal lengths in pixels, (cx, cy) the principal point, P the
    full 3x4 row-major projection matrix (fourth column stored but ignored
    by ray-ratio operations), and s the unit scale factor.
    """

    fx: float
    fy: float
    cx: float
    cy: float
    P: np.ndarray = field(repr=False)
    s: float = 1.0

    def __post_init__(self):
        if not (self.fx > 0 and self.fy > 0):
            raise InvalidIntrinsicsError(
                f"focal lengths must be positive, got fx={self.fx}, fy={self.fy}"
            )
        if self.s != 1.0:
            raise InvalidIntrinsicsError("scale factor is fixed to 1")
        P = np.asarray(self.P, dtype=np.float64)
        if P.shape != (3, 4):
            raise InvalidIntrinsicsError(f"projection matrix must be 3x4, got {P.shape}")
        if (
            P[0, 0] != self.fx
            or P[1, 1] != self.fy
            or P[0, 2] != self.cx
            or P[1, 2] != self.cy
            or P[2, 2] != 1.0
        ):
            raise InvalidIntrinsicsError("fx/fy/cx/cy do not match the projection matrix")
        P.setflags(write=False)
        object.__setattr__(self, "P", P)

    @classmethod
    def from_matrix(cls, values) -> "CameraIntrinsics":
        """Build from 12 row-major matrix entries (or a 3x4 array)."""
        P = np.asarray(values, dtype=np.float64).reshape(3, 4)
        return cls(fx=P[0, 0], fy=P[1, 1], cx=P[0, 2], cy=P[1, 2], P=P)

    @classmethod
    def simple(cls, fx: float, fy: float, cx: float, cy: float) -> "CameraIntrinsics":
        """Build from the four pinhole parameters with a zero fourth column."""
        P = np.array(
            [[fx, 0.0, cx, 0.0], [0.0, fy, cy, 0.0], [0.0, 0.0, 1.0, 0.0]], dtype=np.float64
        )
        return cls(fx=fx, fy=fy, cx=cx, cy=cy, P=P)

    def __eq__(self, other):
        if not isinstance(other, CameraIntrinsics):
            return NotImplemented
        return (
            self.fx == other.fx
            and self.fy == other.fy
            and self.cx == other.cx
            and self.cy == other.cy
            and self.s == other.s
            and np.array_equal(self.P, other.P)
        )


def parse_calibration(text) -> dict:
    """Parse calibration text into a name -> CameraIntrinsics map.

    Accepts a string or a readable text stream. Unrecognized entry names are
    preserved. Blank lines are skipped. Raises ParseError (with line number)
    on malformed lines and MissingCameraError when P2 is absent.
    """
    if hasattr(text, "read"):
        text = text.read()
    entries = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        name, sep, rest = line.partition(":")
        if not sep or not name.strip():
            raise ParseError(lineno, f"expected 'NAME: v0 ... v11', got {raw!r}")
        name = name.strip()
        tokens = rest.split()
        if len(tokens) != 12:
            raise ParseError(lineno, f"entry {name!r} has {len(tokens)} values, expected 12")
        try:
            values = [float(t) for t in tokens]
        except ValueError as exc:
            raise ParseError(lineno, f"entry {name!r}: {exc}") from None
        try:
            entries[name] = CameraIntrinsics.from_matrix(values)
        except InvalidIntrinsicsError as exc:
            raise InvalidIntrinsicsError(f"entry {name!r}: {exc}") from None
    if CAMERA_ENTRY not in entries:
        raise MissingCameraError(f"calibration has no {CAMERA_ENTRY} entry")
    return entries


def write_calibration(entries) -> str:
    """Serialize a name -> CameraIntrinsics map back to the line format.

    Values are written in 6-significant-digit scientific notation.
    """
    out = io.StringIO()
    for name, intr in entries.items():
        values = " ".join(f"{v:.5e}" for v in np.asarray(intr.P).ravel())
        out.write(f"{name}: {values}\n")
    return out.getvalue()


def load_calibration(path) -> dict:
    """Read and parse a calibration file."""
    with open(path, "r", encoding="utf-8") as fh:
        return parse_calibration(fh)


def load_camera(path, name: str = CAMERA_ENTRY) -> CameraIntrinsics:
    """Read one named camera (default P2) from a calibration file."""
    entries = load_calibration(path)
    if name not in entries:
        raise MissingCameraError(f"calibration {path} has no {name} entry")
    return entries[name]

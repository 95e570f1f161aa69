"""Pinhole projection, viewing-frustum ray ratios, 3D box corners, and box IoU.

Camera frame follows the rectified KITTI convention: x right, y down,
z forward (depth). Box locations are bottom-face centers; the length L
runs along the local heading (x axis at yaw 0), W lies lateral, H grows
upward (-y). Yaw rotates about the vertical y axis.
"""

import math
from dataclasses import dataclass

import numpy as np

from ..errors import BehindCameraError
from . import backend


@dataclass(frozen=True)
class Point3:
    """Point in camera coordinates; d is the depth along the optical axis."""

    x: float
    y: float
    d: float


@dataclass(frozen=True)
class Pixel:
    u: float
    v: float


@dataclass(frozen=True)
class Box2:
    """Axis-aligned image-plane box in pixels."""

    left: float
    top: float
    right: float
    bottom: float

    def __post_init__(self):
        if not (self.right >= self.left and self.bottom >= self.top):
            raise ValueError(
                f"invalid 2D box extents: ({self.left}, {self.top}, {self.right}, {self.bottom})"
            )

    @property
    def width(self) -> float:
        return self.right - self.left

    @property
    def height(self) -> float:
        return self.bottom - self.top

    def as_tuple(self) -> tuple:
        return (self.left, self.top, self.right, self.bottom)


@dataclass(frozen=True)
class BoxBEV:
    """Rotated rectangle on the ground plane (x-z), center + size + yaw."""

    cx: float
    cz: float
    w: float
    l: float
    yaw: float

    def __post_init__(self):
        if not (self.w > 0 and self.l > 0):
            raise ValueError(f"BEV box sizes must be positive, got w={self.w}, l={self.l}")


@dataclass(frozen=True)
class Box3:
    """Yaw-only 3D box; location is the bottom-face center in camera coords."""

    location: tuple
    dims: tuple  # (H, W, L)
    yaw: float

    def __post_init__(self):
        h, w, l = self.dims
        if not (h > 0 and w > 0 and l > 0):
            raise ValueError(f"3D box dims must be positive, got {self.dims}")

    @property
    def bev(self) -> BoxBEV:
        x, _, z = self.location
        h, w, l = self.dims
        return BoxBEV(x, z, w, l, self.yaw)


def project_point(intrinsics, p: Point3) -> Pixel:
    """Project a camera-frame point to the image plane.

    u = fx * x / d + cx, v = fy * y / d + cy (unit scale factor).
    """
    if p.d <= 0:
        raise BehindCameraError(f"cannot project point with depth {p.d}")
    return Pixel(
        intrinsics.fx * p.x / p.d + intrinsics.cx,
        intrinsics.fy * p.y / p.d + intrinsics.cy,
    )


def ray_ratios(intrinsics, px: Pixel) -> tuple:
    """Per-pixel direction ratios (x/d, y/d) of the viewing ray through px.

    Scaling both ratios by any depth d > 0 reconstructs a 3D point that
    projects back onto px.
    """
    return (
        (px.u - intrinsics.cx) / intrinsics.fx,
        (px.v - intrinsics.cy) / intrinsics.fy,
    )


def box_corner_array(box: Box3) -> np.ndarray:
    """(8, 3) corner array: bottom face counterclockwise in the x-z plane
    starting at local (+L/2, +W/2), then the top face in the same order."""
    x, y, z = box.location
    h, w, l = box.dims
    c = math.cos(box.yaw)
    s = math.sin(box.yaw)
    hx = 0.5 * l
    hz = 0.5 * w
    lx = np.array([hx, -hx, -hx, hx, hx, -hx, -hx, hx])
    lz = np.array([hz, hz, -hz, -hz, hz, hz, -hz, -hz])
    ly = np.array([0.0, 0.0, 0.0, 0.0, -h, -h, -h, -h])
    out = np.empty((8, 3))
    out[:, 0] = x + c * lx + s * lz
    out[:, 1] = y + ly
    out[:, 2] = z - s * lx + c * lz
    return out


def box_corners(box: Box3) -> tuple:
    """The 8 corners of a 3D box as Point3 values (see box_corner_array)."""
    return tuple(Point3(cx, cy, cd) for cx, cy, cd in box_corner_array(box))


def bev_corners(box: BoxBEV) -> tuple:
    """Ground-plane rectangle corners, counterclockwise from local (+l/2, +w/2)."""
    c = math.cos(box.yaw)
    s = math.sin(box.yaw)
    hx = 0.5 * box.l
    hz = 0.5 * box.w
    return tuple(
        (box.cx + c * lx + s * lz, box.cz - s * lx + c * lz)
        for lx, lz in ((hx, hz), (-hx, hz), (-hx, -hz), (hx, -hz))
    )


def project_box_aabb(intrinsics, box: Box3, image_size=None) -> Box2:
    """Axis-aligned hull of the 8 projected box corners.

    Raises BehindCameraError if any corner has non-positive depth. When
    image_size=(width, height) is given the hull is clipped to the image.
    """
    corners = box_corner_array(box)
    depths = corners[:, 2]
    if np.any(depths <= 0):
        raise BehindCameraError(
            f"box at {box.location} has {int(np.sum(depths <= 0))} corner(s) behind the camera"
        )
    u = intrinsics.fx * corners[:, 0] / depths + intrinsics.cx
    v = intrinsics.fy * corners[:, 1] / depths + intrinsics.cy
    left, right = float(u.min()), float(u.max())
    top, bottom = float(v.min()), float(v.max())
    if image_size is not None:
        width, height = image_size
        left = min(max(left, 0.0), float(width))
        right = min(max(right, 0.0), float(width))
        top = min(max(top, 0.0), float(height))
        bottom = min(max(bottom, 0.0), float(height))
    return Box2(left, top, right, bottom)


def aabb_iou(a: Box2, b: Box2) -> float:
    """IoU of two axis-aligned boxes; 0 for disjoint or doubly degenerate input."""
    ix = min(a.right, b.right) - max(a.left, b.left)
    if ix < 0.0:
        ix = 0.0
    iy = min(a.bottom, b.bottom) - max(a.top, b.top)
    if iy < 0.0:
        iy = 0.0
    inter = ix * iy
    area_a = (a.right - a.left) * (a.bottom - a.top)
    area_b = (b.right - b.left) * (b.bottom - b.top)
    union = area_a + area_b - inter
    if union <= 0.0:
        return 0.0
    return inter / union


def bev_iou(a: BoxBEV, b: BoxBEV) -> float:
    """Rotated-rectangle IoU on the ground plane."""
    return backend.bev_iou_scalar(a.cx, a.cz, a.w, a.l, a.yaw, b.cx, b.cz, b.w, b.l, b.yaw)


def iou_3d(a: Box3, b: Box3) -> float:
    """Volume IoU of two yaw-only 3D boxes (BEV footprint x vertical overlap)."""
    ax, ay, az = a.location
    bx, by, bz = b.location
    ah, aw, al = a.dims
    bh, bw, bl = b.dims
    return backend.iou_3d_scalar(
        ax, ay, az, ah, aw, al, a.yaw, bx, by, bz, bh, bw, bl, b.yaw
    )


def pairwise_bev_iou(boxes_a, boxes_b) -> np.ndarray:
    """IoU matrix for sequences of BoxBEV (or (N,5) arrays of cx,cz,w,l,yaw)."""
    return backend.pairwise_bev_iou(_bev_array(boxes_a), _bev_array(boxes_b))


def pairwise_iou_3d(boxes_a, boxes_b) -> np.ndarray:
    """IoU matrix for sequences of Box3 (or (N,7) arrays of x,y,z,h,w,l,yaw)."""
    return backend.pairwise_iou_3d(_box3_array(boxes_a), _box3_array(boxes_b))


def _bev_array(boxes):
    if isinstance(boxes, np.ndarray):
        return boxes
    return np.array([(b.cx, b.cz, b.w, b.l, b.yaw) for b in boxes], dtype=np.float64).reshape(
        -1, 5
    )


def _box3_array(boxes):
    if isinstance(boxes, np.ndarray):
        return boxes
    return np.array(
        [(*b.location, *b.dims, b.yaw) for b in boxes], dtype=np.float64
    ).reshape(-1, 7)

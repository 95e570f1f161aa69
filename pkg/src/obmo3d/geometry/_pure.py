"""Pure-Python rotated-rectangle IoU kernels.

Fallback used when the compiled extension is unavailable; the compiled
module in _kernels.pyx mirrors this logic operation for operation so both
backends produce matching results.

Ground-plane rectangles are given as (cx, cz, w, l, yaw): center in the
x-z plane, lateral width w, length l along the heading, yaw about the
vertical axis. 3D boxes are (x, y, z, h, w, l, yaw) with y pointing down
and (x, y, z) the bottom-face center.
"""

import math

import numpy as np

BACKEND_NAME = "pure"

# Vertices closer than this (meters) to a clip edge count as on it.
COLLINEAR_TOL = 1e-9
# Intersection areas below this (square meters) count as zero.
SLIVER_AREA = 1e-12

_HALF_PI = math.pi / 2.0


def _rect_corners(cx, cz, w, l, yaw):
    """Corner (x, z) pairs, counterclockwise from local (+l/2, +w/2)."""
    c = math.cos(yaw)
    s = math.sin(yaw)
    hx = 0.5 * l
    hz = 0.5 * w
    out = []
    for lx, lz in ((hx, hz), (-hx, hz), (-hx, -hz), (hx, -hz)):
        out.append((cx + c * lx + s * lz, cz - s * lx + c * lz))
    return out


def _poly_area(poly):
    if len(poly) < 3:
        return 0.0
    acc = 0.0
    n = len(poly)
    for i in range(n):
        x0, z0 = poly[i]
        x1, z1 = poly[(i + 1) % n]
        acc += x0 * z1 - x1 * z0
    return 0.5 * abs(acc)


def _clip_halfplane(poly, ax, az, bx, bz):
    """Keep the part of poly left of the directed edge (a -> b)."""
    ex = bx - ax
    ez = bz - az
    tol = COLLINEAR_TOL * math.hypot(ex, ez)
    out = []
    n = len(poly)
    for i in range(n):
        sx, sz = poly[i]
        px, pz = poly[(i + 1) % n]
        ds = ex * (sz - az) - ez * (sx - ax)
        de = ex * (pz - az) - ez * (px - ax)
        s_in = ds >= -tol
        e_in = de >= -tol
        if e_in:
            if not s_in:
                out.append(_edge_crossing(sx, sz, px, pz, ds, de))
            out.append((px, pz))
        elif s_in:
            out.append(_edge_crossing(sx, sz, px, pz, ds, de))
    return out


def _edge_crossing(sx, sz, px, pz, ds, de):
    denom = ds - de
    t = 0.5 if denom == 0.0 else ds / denom
    if t < 0.0:
        t = 0.0
    elif t > 1.0:
        t = 1.0
    return (sx + t * (px - sx), sz + t * (pz - sz))


def _is_axis_aligned(yaw):
    return math.fmod(yaw, _HALF_PI) == 0.0


def _interval_overlap(lo1, hi1, lo2, hi2):
    v = min(hi1, hi2) - max(lo1, lo2)
    return v if v > 0.0 else 0.0


def _aligned_bounds(cx, cz, w, l, yaw):
    # quarter-turn parity decides which dimension lies along x
    if math.fmod(yaw, math.pi) == 0.0:
        ex, ez = 0.5 * l, 0.5 * w
    else:
        ex, ez = 0.5 * w, 0.5 * l
    return cx - ex, cx + ex, cz - ez, cz + ez


def bev_iou_scalar(cx1, cz1, w1, l1, yaw1, cx2, cz2, w2, l2, yaw2):
    """IoU of two rotated ground-plane rectangles.

    Yaws that are float-exact multiples of pi/2 take an interval-overlap
    fast path whose arithmetic matches axis-aligned 2D box IoU exactly;
    everything else goes through Sutherland-Hodgman clipping. Identical
    rectangles return exactly 1.0 and arguments are ordered canonically
    so the result is bit-exact symmetric.
    """
    if (cx2, cz2, w2, l2, yaw2) < (cx1, cz1, w1, l1, yaw1):
        cx1, cz1, w1, l1, yaw1, cx2, cz2, w2, l2, yaw2 = (
            cx2, cz2, w2, l2, yaw2, cx1, cz1, w1, l1, yaw1,
        )
    elif (cx1, cz1, w1, l1, yaw1) == (cx2, cz2, w2, l2, yaw2):
        return 1.0
    if _is_axis_aligned(yaw1) and _is_axis_aligned(yaw2):
        ax0, ax1, az0, az1 = _aligned_bounds(cx1, cz1, w1, l1, yaw1)
        bx0, bx1, bz0, bz1 = _aligned_bounds(cx2, cz2, w2, l2, yaw2)
        inter = _interval_overlap(ax0, ax1, bx0, bx1) * _interval_overlap(az0, az1, bz0, bz1)
        area1 = (ax1 - ax0) * (az1 - az0)
        area2 = (bx1 - bx0) * (bz1 - bz0)
    else:
        ca = _rect_corners(cx1, cz1, w1, l1, yaw1)
        cb = _rect_corners(cx2, cz2, w2, l2, yaw2)
        inter = _clipped_area(ca, cb)
        area1 = _poly_area(ca)
        area2 = _poly_area(cb)
    if inter < SLIVER_AREA:
        inter = 0.0
    union = area1 + area2 - inter
    if union <= 0.0:
        return 0.0
    return inter / union


def _clipped_area(subject, clip):
    poly = subject
    n = len(clip)
    for i in range(n):
        ax, az = clip[i]
        bx, bz = clip[(i + 1) % n]
        poly = _clip_halfplane(poly, ax, az, bx, bz)
        if not poly:
            return 0.0
    return _poly_area(poly)


def rect_intersection_area(cx1, cz1, w1, l1, yaw1, cx2, cz2, w2, l2, yaw2):
    """Intersection area of two rotated ground-plane rectangles."""
    if (cx2, cz2, w2, l2, yaw2) < (cx1, cz1, w1, l1, yaw1):
        cx1, cz1, w1, l1, yaw1, cx2, cz2, w2, l2, yaw2 = (
            cx2, cz2, w2, l2, yaw2, cx1, cz1, w1, l1, yaw1,
        )
    elif (cx1, cz1, w1, l1, yaw1) == (cx2, cz2, w2, l2, yaw2):
        return w1 * l1
    if _is_axis_aligned(yaw1) and _is_axis_aligned(yaw2):
        ax0, ax1, az0, az1 = _aligned_bounds(cx1, cz1, w1, l1, yaw1)
        bx0, bx1, bz0, bz1 = _aligned_bounds(cx2, cz2, w2, l2, yaw2)
        inter = _interval_overlap(ax0, ax1, bx0, bx1) * _interval_overlap(az0, az1, bz0, bz1)
    else:
        inter = _clipped_area(
            _rect_corners(cx1, cz1, w1, l1, yaw1), _rect_corners(cx2, cz2, w2, l2, yaw2)
        )
    return 0.0 if inter < SLIVER_AREA else inter


def iou_3d_scalar(x1, y1, z1, h1, w1, l1, r1, x2, y2, z2, h2, w2, l2, r2):
    """IoU of two yaw-only 3D boxes (bottom-center origin, y down)."""
    if (x1, y1, z1, h1, w1, l1, r1) == (x2, y2, z2, h2, w2, l2, r2):
        return 1.0
    y_overlap = min(y1, y2) - max(y1 - h1, y2 - h2)
    if y_overlap <= 0.0:
        return 0.0
    footprint = rect_intersection_area(x1, z1, w1, l1, r1, x2, z2, w2, l2, r2)
    inter = footprint * y_overlap
    union = h1 * w1 * l1 + h2 * w2 * l2 - inter
    if union <= 0.0:
        return 0.0
    return inter / union


def pairwise_bev_iou(boxes1, boxes2):
    """IoU matrix between two (N, 5) / (M, 5) arrays of (cx, cz, w, l, yaw)."""
    a = np.ascontiguousarray(boxes1, dtype=np.float64)
    b = np.ascontiguousarray(boxes2, dtype=np.float64)
    out = np.empty((a.shape[0], b.shape[0]), dtype=np.float64)
    for i in range(a.shape[0]):
        for j in range(b.shape[0]):
            out[i, j] = bev_iou_scalar(*a[i], *b[j])
    return out


def pairwise_iou_3d(boxes1, boxes2):
    """IoU matrix between two (N, 7) / (M, 7) arrays of (x, y, z, h, w, l, yaw)."""
    a = np.ascontiguousarray(boxes1, dtype=np.float64)
    b = np.ascontiguousarray(boxes2, dtype=np.float64)
    out = np.empty((a.shape[0], b.shape[0]), dtype=np.float64)
    for i in range(a.shape[0]):
        for j in range(b.shape[0]):
            out[i, j] = iou_3d_scalar(*a[i], *b[j])
    return out

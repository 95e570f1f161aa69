# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled rotated-rectangle IoU kernels (mirrors _pure.py)."""

from libc.math cimport cos, fabs, fmod, hypot, sin

import numpy as np

BACKEND_NAME = "compiled"

cdef double COLLINEAR_TOL = 1e-9
cdef double SLIVER_AREA = 1e-12
cdef double _PI = 3.141592653589793
cdef double _HALF_PI = 1.5707963267948966


cdef void _rect_corners(double cx, double cz, double w, double l, double yaw,
                        double* xs, double* zs) noexcept nogil:
    # counterclockwise in the x-z plane from local (+l/2, +w/2)
    cdef double c = cos(yaw)
    cdef double s = sin(yaw)
    cdef double hx = 0.5 * l
    cdef double hz = 0.5 * w
    cdef double lx[4]
    cdef double lz[4]
    cdef int i
    lx[0] = hx;  lz[0] = hz
    lx[1] = -hx; lz[1] = hz
    lx[2] = -hx; lz[2] = -hz
    lx[3] = hx;  lz[3] = -hz
    for i in range(4):
        xs[i] = cx + c * lx[i] + s * lz[i]
        zs[i] = cz - s * lx[i] + c * lz[i]


cdef double _poly_area(double* xs, double* zs, int n) noexcept nogil:
    cdef double acc = 0.0
    cdef int i, j
    if n < 3:
        return 0.0
    for i in range(n):
        j = i + 1
        if j == n:
            j = 0
        acc += xs[i] * zs[j] - xs[j] * zs[i]
    return 0.5 * fabs(acc)


cdef int _clip_halfplane(double* sx, double* sz, int n,
                         double ax, double az, double bx, double bz,
                         double* ox, double* oz) noexcept nogil:
    cdef double ex = bx - ax
    cdef double ez = bz - az
    cdef double tol = COLLINEAR_TOL * hypot(ex, ez)
    cdef int m = 0
    cdef int i, j
    cdef double ds, de, t, denom
    for i in range(n):
        j = i + 1
        if j == n:
            j = 0
        ds = ex * (sz[i] - az) - ez * (sx[i] - ax)
        de = ex * (sz[j] - az) - ez * (sx[j] - ax)
        if de >= -tol:
            if not ds >= -tol:
                denom = ds - de
                t = 0.5 if denom == 0.0 else ds / denom
                if t < 0.0:
                    t = 0.0
                elif t > 1.0:
                    t = 1.0
                ox[m] = sx[i] + t * (sx[j] - sx[i])
                oz[m] = sz[i] + t * (sz[j] - sz[i])
                m += 1
            ox[m] = sx[j]
            oz[m] = sz[j]
            m += 1
        elif ds >= -tol:
            denom = ds - de
            t = 0.5 if denom == 0.0 else ds / denom
            if t < 0.0:
                t = 0.0
            elif t > 1.0:
                t = 1.0
            ox[m] = sx[i] + t * (sx[j] - sx[i])
            oz[m] = sz[i] + t * (sz[j] - sz[i])
            m += 1
    return m


cdef double _clipped_area(double* ax_, double* az_, double* bx_, double* bz_) noexcept nogil:
    # clip rect A (subject) by rect B's edges; buffers big enough for quad x quad
    cdef double px[16]
    cdef double pz[16]
    cdef double qx[16]
    cdef double qz[16]
    cdef int n = 4
    cdef int i, j, m
    for i in range(4):
        px[i] = ax_[i]
        pz[i] = az_[i]
    for i in range(4):
        j = i + 1
        if j == 4:
            j = 0
        m = _clip_halfplane(px, pz, n, bx_[i], bz_[i], bx_[j], bz_[j], qx, qz)
        if m == 0:
            return 0.0
        for n in range(m):
            px[n] = qx[n]
            pz[n] = qz[n]
        n = m
    return _poly_area(px, pz, n)


cdef bint _is_axis_aligned(double yaw) noexcept nogil:
    return fmod(yaw, _HALF_PI) == 0.0


cdef double _interval_overlap(double lo1, double hi1, double lo2, double hi2) noexcept nogil:
    cdef double hi = hi1 if hi1 < hi2 else hi2
    cdef double lo = lo1 if lo1 > lo2 else lo2
    cdef double v = hi - lo
    return v if v > 0.0 else 0.0


cdef void _aligned_bounds(double cx, double cz, double w, double l, double yaw,
                          double* x0, double* x1, double* z0, double* z1) noexcept nogil:
    cdef double ex, ez
    if fmod(yaw, _PI) == 0.0:
        ex = 0.5 * l
        ez = 0.5 * w
    else:
        ex = 0.5 * w
        ez = 0.5 * l
    x0[0] = cx - ex
    x1[0] = cx + ex
    z0[0] = cz - ez
    z1[0] = cz + ez


cdef bint _rect_lt(double cx1, double cz1, double w1, double l1, double yaw1,
                   double cx2, double cz2, double w2, double l2, double yaw2) noexcept nogil:
    if cx1 != cx2: return cx1 < cx2
    if cz1 != cz2: return cz1 < cz2
    if w1 != w2: return w1 < w2
    if l1 != l2: return l1 < l2
    return yaw1 < yaw2


cdef double _rect_inter(double cx1, double cz1, double w1, double l1, double yaw1,
                        double cx2, double cz2, double w2, double l2, double yaw2) noexcept nogil:
    # canonical ordering + identity + sliver cutoff, mirroring the pure
    # backend's rect_intersection_area
    cdef double ax[4]
    cdef double az[4]
    cdef double bx[4]
    cdef double bz[4]
    cdef double x0a, x1a, z0a, z1a, x0b, x1b, z0b, z1b
    cdef double inter
    cdef double t0, t1, t2, t3, t4
    if _rect_lt(cx2, cz2, w2, l2, yaw2, cx1, cz1, w1, l1, yaw1):
        t0 = cx1; t1 = cz1; t2 = w1; t3 = l1; t4 = yaw1
        cx1 = cx2; cz1 = cz2; w1 = w2; l1 = l2; yaw1 = yaw2
        cx2 = t0; cz2 = t1; w2 = t2; l2 = t3; yaw2 = t4
    elif cx1 == cx2 and cz1 == cz2 and w1 == w2 and l1 == l2 and yaw1 == yaw2:
        return w1 * l1
    if _is_axis_aligned(yaw1) and _is_axis_aligned(yaw2):
        _aligned_bounds(cx1, cz1, w1, l1, yaw1, &x0a, &x1a, &z0a, &z1a)
        _aligned_bounds(cx2, cz2, w2, l2, yaw2, &x0b, &x1b, &z0b, &z1b)
        inter = _interval_overlap(x0a, x1a, x0b, x1b) * _interval_overlap(z0a, z1a, z0b, z1b)
    else:
        _rect_corners(cx1, cz1, w1, l1, yaw1, ax, az)
        _rect_corners(cx2, cz2, w2, l2, yaw2, bx, bz)
        inter = _clipped_area(ax, az, bx, bz)
    return 0.0 if inter < SLIVER_AREA else inter


cdef double _bev_iou(double cx1, double cz1, double w1, double l1, double yaw1,
                     double cx2, double cz2, double w2, double l2, double yaw2) noexcept nogil:
    cdef double ax[4]
    cdef double az[4]
    cdef double bx[4]
    cdef double bz[4]
    cdef double x0a, x1a, z0a, z1a, x0b, x1b, z0b, z1b
    cdef double inter, area1, area2, union_
    cdef double t0, t1, t2, t3, t4
    if _rect_lt(cx2, cz2, w2, l2, yaw2, cx1, cz1, w1, l1, yaw1):
        t0 = cx1; t1 = cz1; t2 = w1; t3 = l1; t4 = yaw1
        cx1 = cx2; cz1 = cz2; w1 = w2; l1 = l2; yaw1 = yaw2
        cx2 = t0; cz2 = t1; w2 = t2; l2 = t3; yaw2 = t4
    elif cx1 == cx2 and cz1 == cz2 and w1 == w2 and l1 == l2 and yaw1 == yaw2:
        return 1.0
    if _is_axis_aligned(yaw1) and _is_axis_aligned(yaw2):
        _aligned_bounds(cx1, cz1, w1, l1, yaw1, &x0a, &x1a, &z0a, &z1a)
        _aligned_bounds(cx2, cz2, w2, l2, yaw2, &x0b, &x1b, &z0b, &z1b)
        inter = _interval_overlap(x0a, x1a, x0b, x1b) * _interval_overlap(z0a, z1a, z0b, z1b)
        area1 = (x1a - x0a) * (z1a - z0a)
        area2 = (x1b - x0b) * (z1b - z0b)
    else:
        _rect_corners(cx1, cz1, w1, l1, yaw1, ax, az)
        _rect_corners(cx2, cz2, w2, l2, yaw2, bx, bz)
        inter = _clipped_area(ax, az, bx, bz)
        area1 = _poly_area(ax, az, 4)
        area2 = _poly_area(bx, bz, 4)
    if inter < SLIVER_AREA:
        inter = 0.0
    union_ = area1 + area2 - inter
    if union_ <= 0.0:
        return 0.0
    return inter / union_


cdef double _iou_3d(double x1, double y1, double z1, double h1, double w1, double l1, double r1,
                    double x2, double y2, double z2, double h2, double w2, double l2,
                    double r2) noexcept nogil:
    cdef double ytop, ybot, y_overlap, footprint, inter, union_
    if (x1 == x2 and y1 == y2 and z1 == z2 and h1 == h2 and w1 == w2
            and l1 == l2 and r1 == r2):
        return 1.0
    ybot = y1 if y1 < y2 else y2
    ytop = (y1 - h1) if (y1 - h1) > (y2 - h2) else (y2 - h2)
    y_overlap = ybot - ytop
    if y_overlap <= 0.0:
        return 0.0
    footprint = _rect_inter(x1, z1, w1, l1, r1, x2, z2, w2, l2, r2)
    inter = footprint * y_overlap
    union_ = h1 * w1 * l1 + h2 * w2 * l2 - inter
    if union_ <= 0.0:
        return 0.0
    return inter / union_


def bev_iou_scalar(double cx1, double cz1, double w1, double l1, double yaw1,
                   double cx2, double cz2, double w2, double l2, double yaw2):
    """IoU of two rotated ground-plane rectangles."""
    return _bev_iou(cx1, cz1, w1, l1, yaw1, cx2, cz2, w2, l2, yaw2)


def rect_intersection_area(double cx1, double cz1, double w1, double l1, double yaw1,
                           double cx2, double cz2, double w2, double l2, double yaw2):
    """Intersection area of two rotated ground-plane rectangles."""
    return _rect_inter(cx1, cz1, w1, l1, yaw1, cx2, cz2, w2, l2, yaw2)


def iou_3d_scalar(double x1, double y1, double z1, double h1, double w1, double l1, double r1,
                  double x2, double y2, double z2, double h2, double w2, double l2, double r2):
    """IoU of two yaw-only 3D boxes (bottom-center origin, y down)."""
    return _iou_3d(x1, y1, z1, h1, w1, l1, r1, x2, y2, z2, h2, w2, l2, r2)


def pairwise_bev_iou(boxes1, boxes2):
    """IoU matrix between (N, 5) and (M, 5) arrays of (cx, cz, w, l, yaw)."""
    cdef double[:, ::1] a = np.ascontiguousarray(boxes1, dtype=np.float64)
    cdef double[:, ::1] b = np.ascontiguousarray(boxes2, dtype=np.float64)
    out = np.empty((a.shape[0], b.shape[0]), dtype=np.float64)
    cdef double[:, ::1] o = out
    cdef Py_ssize_t i, j
    with nogil:
        for i in range(a.shape[0]):
            for j in range(b.shape[0]):
                o[i, j] = _bev_iou(a[i, 0], a[i, 1], a[i, 2], a[i, 3], a[i, 4],
                                   b[j, 0], b[j, 1], b[j, 2], b[j, 3], b[j, 4])
    return out


def pairwise_iou_3d(boxes1, boxes2):
    """IoU matrix between (N, 7) and (M, 7) arrays of (x, y, z, h, w, l, yaw)."""
    cdef double[:, ::1] a = np.ascontiguousarray(boxes1, dtype=np.float64)
    cdef double[:, ::1] b = np.ascontiguousarray(boxes2, dtype=np.float64)
    out = np.empty((a.shape[0], b.shape[0]), dtype=np.float64)
    cdef double[:, ::1] o = out
    cdef Py_ssize_t i, j
    with nogil:
        for i in range(a.shape[0]):
            for j in range(b.shape[0]):
                o[i, j] = _iou_3d(a[i, 0], a[i, 1], a[i, 2], a[i, 3], a[i, 4], a[i, 5], a[i, 6],
                                  b[j, 0], b[j, 1], b[j, 2], b[j, 3], b[j, 4], b[j, 5], b[j, 6])
    return out

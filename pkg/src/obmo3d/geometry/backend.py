"""Kernel backend selection.

The compiled Cython kernels are used when importable; otherwise the
pure-Python fallback takes over. Set OBMO3D_PURE=1 to force the fallback
(useful for benchmarking and backend-parity testing).
"""

import os

_force_pure = os.environ.get("OBMO3D_PURE", "0") not in ("", "0")

if _force_pure:
    from . import _pure as _impl
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _pure as _impl

BACKEND_NAME = _impl.BACKEND_NAME

bev_iou_scalar = _impl.bev_iou_scalar
iou_3d_scalar = _impl.iou_3d_scalar
rect_intersection_area = _impl.rect_intersection_area
pairwise_bev_iou = _impl.pairwise_bev_iou
pairwise_iou_3d = _impl.pairwise_iou_3d

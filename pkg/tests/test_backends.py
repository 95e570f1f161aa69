"""Parity between the compiled kernels and the pure-Python fallback."""

import math
import os
import subprocess
import sys

import numpy as np
import pytest

from obmo3d.geometry import _pure

try:
    from obmo3d.geometry import _kernels
except ImportError:
    _kernels = None

needs_compiled = pytest.mark.skipif(_kernels is None, reason="compiled kernels not built")


def _random_bev_rows(rng, n):
    out = np.empty((n, 5))
    out[:, 0] = rng.uniform(-3, 3, n)
    out[:, 1] = rng.uniform(-3, 3, n)
    out[:, 2] = rng.uniform(0.3, 3.0, n)
    out[:, 3] = rng.uniform(0.3, 4.0, n)
    out[:, 4] = rng.uniform(-math.pi, math.pi, n)
    return out


def _random_box3_rows(rng, n):
    out = np.empty((n, 7))
    out[:, 0] = rng.uniform(-3, 3, n)
    out[:, 1] = rng.uniform(-1, 2, n)
    out[:, 2] = rng.uniform(4, 9, n)
    out[:, 3] = rng.uniform(0.3, 2.5, n)
    out[:, 4] = rng.uniform(0.3, 2.5, n)
    out[:, 5] = rng.uniform(0.3, 4.0, n)
    out[:, 6] = rng.uniform(-math.pi, math.pi, n)
    return out


@needs_compiled
def test_scalar_bev_parity():
    rng = np.random.default_rng(42)
    rows = _random_bev_rows(rng, 400)
    for i in range(0, 400, 2):
        a, b = rows[i], rows[i + 1]
        assert _kernels.bev_iou_scalar(*a, *b) == _pure.bev_iou_scalar(*a, *b)


@needs_compiled
def test_scalar_bev_parity_axis_aligned():
    rng = np.random.default_rng(43)
    rows = _random_bev_rows(rng, 200)
    rows[:, 4] = rng.choice([0.0, math.pi / 2, -math.pi / 2, math.pi], size=200)
    for i in range(0, 200, 2):
        a, b = rows[i], rows[i + 1]
        assert _kernels.bev_iou_scalar(*a, *b) == _pure.bev_iou_scalar(*a, *b)


@needs_compiled
def test_scalar_3d_parity():
    rng = np.random.default_rng(44)
    rows = _random_box3_rows(rng, 400)
    for i in range(0, 400, 2):
        a, b = rows[i], rows[i + 1]
        assert _kernels.iou_3d_scalar(*a, *b) == _pure.iou_3d_scalar(*a, *b)


@needs_compiled
def test_pairwise_parity():
    rng = np.random.default_rng(45)
    a = _random_bev_rows(rng, 30)
    b = _random_bev_rows(rng, 20)
    np.testing.assert_array_equal(_kernels.pairwise_bev_iou(a, b), _pure.pairwise_bev_iou(a, b))
    a3 = _random_box3_rows(rng, 30)
    b3 = _random_box3_rows(rng, 20)
    np.testing.assert_array_equal(_kernels.pairwise_iou_3d(a3, b3), _pure.pairwise_iou_3d(a3, b3))


@needs_compiled
def test_intersection_area_parity():
    rng = np.random.default_rng(46)
    rows = _random_bev_rows(rng, 200)
    for i in range(0, 200, 2):
        a, b = rows[i], rows[i + 1]
        assert _kernels.rect_intersection_area(*a, *b) == _pure.rect_intersection_area(*a, *b)


def test_env_var_forces_pure_backend():
    code = (
        "from obmo3d.geometry import BACKEND_NAME; print(BACKEND_NAME)"
    )
    env = dict(os.environ, OBMO3D_PURE="1")
    out = subprocess.run(
        [sys.executable, "-c", code], capture_output=True, text=True, env=env, check=True
    )
    assert out.stdout.strip() == "pure"


def test_selected_backend_reported():
    from obmo3d.geometry import BACKEND_NAME

    assert BACKEND_NAME in ("compiled", "pure")

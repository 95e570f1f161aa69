"""Benchmark the compiled rotated-IoU kernels against the pure-Python fallback.

Usage: python benchmarks/bench_iou.py [N]

Times the pairwise BEV and 3D IoU matrices (the evaluation hot loop) for an
N x N box grid plus scalar-call throughput, and reports the speedup. Also
cross-checks that both backends produce identical matrices.
"""

import math
import sys
import time

import numpy as np

from obmo3d.geometry import _pure

try:
    from obmo3d.geometry import _kernels
except ImportError:
    _kernels = None


def random_bev(rng, n):
    out = np.empty((n, 5))
    out[:, 0] = rng.uniform(-20, 20, n)
    out[:, 1] = rng.uniform(0, 70, n)
    out[:, 2] = rng.uniform(1.4, 2.0, n)
    out[:, 3] = rng.uniform(3.2, 4.6, n)
    out[:, 4] = rng.uniform(-math.pi, math.pi, n)
    return out


def random_box3(rng, n):
    out = np.empty((n, 7))
    out[:, 0] = rng.uniform(-20, 20, n)
    out[:, 1] = rng.uniform(1.0, 2.0, n)
    out[:, 2] = rng.uniform(5, 70, n)
    out[:, 3] = rng.uniform(1.3, 1.8, n)
    out[:, 4] = rng.uniform(1.4, 2.0, n)
    out[:, 5] = rng.uniform(3.2, 4.6, n)
    out[:, 6] = rng.uniform(-math.pi, math.pi, n)
    return out


def timeit(fn, *args, repeat=3):
    best = math.inf
    result = None
    for _ in range(repeat):
        started = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - started)
    return best, result


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 200
    rng = np.random.default_rng(123)
    bev_a, bev_b = random_bev(rng, n), random_bev(rng, n)
    b3_a, b3_b = random_box3(rng, n), random_box3(rng, n)

    print(f"pairwise IoU over a {n} x {n} grid ({n * n} pairs)\n")
    print(f"{'kernel':<18} {'pure (s)':>10} {'compiled (s)':>13} {'speedup':>9}")

    for name, pure_fn, args in (
        ("pairwise_bev_iou", _pure.pairwise_bev_iou, (bev_a, bev_b)),
        ("pairwise_iou_3d", _pure.pairwise_iou_3d, (b3_a, b3_b)),
    ):
        t_pure, m_pure = timeit(pure_fn, *args)
        if _kernels is None:
            print(f"{name:<18} {t_pure:>10.3f} {'n/a':>13} {'n/a':>9}")
            continue
        t_comp, m_comp = timeit(getattr(_kernels, name), *args)
        same = np.array_equal(m_pure, m_comp)
        print(
            f"{name:<18} {t_pure:>10.3f} {t_comp:>13.4f} {t_pure / t_comp:>8.0f}x"
            f"{'' if same else '  MISMATCH!'}"
        )
        if not same:
            raise SystemExit(f"{name}: backends disagree")

    scalar_args = tuple(bev_a[0]) + tuple(bev_b[0])
    t_pure, _ = timeit(lambda: [_pure.bev_iou_scalar(*scalar_args) for _ in range(20000)])
    line = f"{'bev_iou_scalar x20k':<18} {t_pure:>10.3f}"
    if _kernels is not None:
        t_comp, _ = timeit(lambda: [_kernels.bev_iou_scalar(*scalar_args) for _ in range(20000)])
        line += f" {t_comp:>13.4f} {t_pure / t_comp:>8.0f}x"
    print(line)

    if _kernels is None:
        print("\ncompiled kernels not built; showing pure-Python timings only")


if __name__ == "__main__":
    main()

"""Deterministic quadrature over closed hypersurface charts.

Periodic axes get the uniform trapezoid rule (spectrally accurate for smooth
periodic integrands); open axes get Gauss-Legendre, whose nodes are strictly
interior so polar-type coordinate singularities are never sampled.  Node
evaluations may fan out across threads, but the reduction is always the same:
fixed index order with compensated (Kahan) summation, so results are
bit-identical for every thread count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .immersion import Axis, Hypersurface, frame_at

MIN_RESOLUTION = 4


class QuadratureError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class GridRule:
    """Tensor-product rule: per-axis nodes/weights plus flattened node list."""

    axes: tuple
    kinds: tuple            # "periodic-trapezoid" | "gauss-legendre-open"
    nodes1d: tuple
    weights1d: tuple
    resolution: tuple
    points: np.ndarray      # (count, n), C-order of the per-axis grids
    weights: np.ndarray     # (count,)

    @property
    def count(self) -> int:
        return self.points.shape[0]


def build_grid(domain, resolution) -> GridRule:
    """Tensor rule over the chart domain; resolution is per-axis node count."""
    axes = tuple(domain)
    try:
        res = tuple(int(r) for r in resolution)
    except TypeError:
        res = tuple(int(resolution) for _ in axes)
    if len(res) != len(axes):
        raise QuadratureError("one resolution per axis required")
    nodes1d, weights1d, kinds = [], [], []
    for axis, k in zip(axes, res):
        if k < MIN_RESOLUTION:
            raise QuadratureError(f"resolution {k} below minimum {MIN_RESOLUTION}")
        if axis.periodic:
            h = axis.length / k
            nodes1d.append(axis.lo + h * np.arange(k))
            weights1d.append(np.full(k, h))
            kinds.append("periodic-trapezoid")
        else:
            x, w = np.polynomial.legendre.leggauss(k)
            half = 0.5 * axis.length
            nodes1d.append(axis.lo + half * (x + 1.0))
            weights1d.append(half * w)
            kinds.append("gauss-legendre-open")
    mesh = np.meshgrid(*nodes1d, indexing="ij")
    points = np.stack([m.reshape(-1) for m in mesh], axis=-1)
    wmesh = np.meshgrid(*weights1d, indexing="ij")
    weights = np.ones(points.shape[0])
    for w in wmesh:
        weights = weights * w.reshape(-1)
    return GridRule(axes=axes, kinds=tuple(kinds), nodes1d=tuple(nodes1d),
                    weights1d=tuple(weights1d), resolution=res,
                    points=points, weights=weights)


def thread_count() -> int:
    """Worker count from CURVINT_THREADS (default: all cores)."""
    raw = os.environ.get("CURVINT_THREADS", "").strip()
    if raw:
        k = int(raw)
        if k < 1:
            raise QuadratureError("CURVINT_THREADS must be positive")
        return k
    return os.cpu_count() or 1


def kahan_sum(values) -> float:
    """Compensated sum in the given order."""
    total = 0.0
    comp = 0.0
    for v in values:
        y = float(v) - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total


def integrate(surface: Hypersurface, grid: GridRule, f: Callable,
              threads: Optional[int] = None) -> float:
    """Surface integral of the parameter-space scalar f over the hypersurface.

    Returns sum_a w_a * f(u_a) * density(u_a), reduced in fixed index order
    with compensated summation regardless of the number of worker threads.
    """
    if grid.axes != tuple(surface.chart.axes):
        raise QuadratureError("grid does not match the chart domain")
    count = grid.count
    vals = [0.0] * count

    def run(a: int) -> None:
        u = grid.points[a]
        vals[a] = float(f(u)) * frame_at(surface, u).density

    workers = thread_count() if threads is None else int(threads)
    if workers <= 1 or count < 64:
        for a in range(count):
            run(a)
    else:
        chunk = (count + workers - 1) // workers

        def run_block(lo: int) -> None:
            for a in range(lo, min(lo + chunk, count)):
                run(a)

        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run_block, range(0, count, chunk)))
    return kahan_sum(grid.weights[a] * vals[a] for a in range(count))

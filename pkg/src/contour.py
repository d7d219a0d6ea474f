"""
Marching squares on a sampled scalar field.

Used by the topology module (discriminant locus, edges refined with brentq)
and by the render module (conic frames, linear edges).
"""
import logging
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from utils import run_parallel

logger = logging.getLogger("HamDef.Contour")

Point = Tuple[float, float]
EdgeKey = Tuple[str, int, int]
# refine(p0, p1, v0, v1) -> crossing point on the segment p0-p1
Refiner = Callable[[Point, Point, float, float], Point]


def evaluate_grid(func: Callable, xs: np.ndarray, ys: np.ndarray, workers: int = 1) -> np.ndarray:
    """
    Samples func on the grid; row j holds func(xs, ys[j]).

    Args:
        func: numpy-vectorised function of (x, y).
        xs, ys: Grid abscissae and ordinates.
        workers: Rows are spread over this many threads.

    Returns:
        Array of shape (len(ys), len(xs)).
    """
    xs = np.asarray(xs, dtype=float)

    def row(y: float) -> np.ndarray:
        values = np.asarray(func(xs, np.full_like(xs, y)), dtype=float)
        return np.broadcast_to(values, xs.shape).copy()

    rows = run_parallel(row, [float(y) for y in ys], workers=workers, desc="Grid rows")
    return np.vstack(rows)


def _linear(p0: Point, p1: Point, v0: float, v1: float) -> Point:
    s = v0 / (v0 - v1)
    return (p0[0] + s * (p1[0] - p0[0]), p0[1] + s * (p1[1] - p0[1]))


def _cell_segments(i: int, j: int, values: np.ndarray) -> List[Tuple[EdgeKey, EdgeKey]]:
    """Segments of cell (i, j) as pairs of crossed edges."""
    va, vb = values[j, i], values[j, i + 1]
    vc, vd = values[j + 1, i + 1], values[j + 1, i]
    a, b, c, d = va > 0, vb > 0, vc > 0, vd > 0
    bottom, right = ("h", i, j), ("v", i + 1, j)
    top, left = ("h", i, j + 1), ("v", i, j)

    crossed = [edge for edge, flip in ((bottom, a != b), (right, b != c), (top, c != d), (left, d != a)) if flip]
    if len(crossed) == 2:
        return [(crossed[0], crossed[1])]
    if len(crossed) == 4:
        # Saddle: the centre value decides which diagonal pair is joined.
        centre = (va + vb + vc + vd) / 4.0
        if (centre > 0) == a:
            return [(bottom, right), (top, left)]
        return [(left, bottom), (right, top)]
    return []


def _edge_point(key: EdgeKey, values: np.ndarray, xs: np.ndarray, ys: np.ndarray,
                refine: Optional[Refiner]) -> Point:
    kind, i, j = key
    if kind == "h":
        i1, j1 = i + 1, j
    else:
        i1, j1 = i, j + 1
    p0 = (float(xs[i]), float(ys[j]))
    p1 = (float(xs[i1]), float(ys[j1]))
    v0, v1 = float(values[j, i]), float(values[j1, i1])
    if refine is not None:
        return refine(p0, p1, v0, v1)
    return _linear(p0, p1, v0, v1)


def marching_squares(values: np.ndarray, xs: Sequence[float], ys: Sequence[float],
                     refine: Optional[Refiner] = None) -> List[List[Point]]:
    """
    Zero contour of a sampled field as a list of polylines.

    Open chains (ending on the grid boundary) come first, then closed loops,
    which repeat their first point at the end. The order is a function of the
    grid alone.

    Args:
        values: Samples, values[j, i] = f(xs[i], ys[j]).
        xs, ys: Grid coordinates.
        refine: Optional edge refiner; linear interpolation otherwise.

    Returns:
        List of polylines, each a list of (x, y) points.
    """
    values = np.asarray(values, dtype=float)
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    ny, nx = values.shape
    if nx != len(xs) or ny != len(ys):
        raise ValueError(f"Grid shape {values.shape} does not match axes ({len(ys)}, {len(xs)})")

    adjacency: Dict[EdgeKey, List[EdgeKey]] = {}
    for j in range(ny - 1):
        for i in range(nx - 1):
            for e0, e1 in _cell_segments(i, j, values):
                adjacency.setdefault(e0, []).append(e1)
                adjacency.setdefault(e1, []).append(e0)

    points: Dict[EdgeKey, Point] = {}

    def point(key: EdgeKey) -> Point:
        if key not in points:
            points[key] = _edge_point(key, values, xs, ys, refine)
        return points[key]

    visited = set()

    def walk(start: EdgeKey) -> List[EdgeKey]:
        chain = [start]
        visited.add(start)
        current = start
        while True:
            nxt = [n for n in adjacency[current] if n not in visited]
            if not nxt:
                return chain
            current = nxt[0]
            visited.add(current)
            chain.append(current)

    ordered = sorted(adjacency)
    polylines: List[List[Point]] = []
    for key in ordered:
        if key not in visited and len(adjacency[key]) == 1:
            polylines.append([point(k) for k in walk(key)])
    for key in ordered:
        if key not in visited:
            chain = walk(key)
            line = [point(k) for k in chain]
            if len(chain) > 2 and chain[0] in adjacency[chain[-1]]:
                line.append(line[0])
            polylines.append(line)

    logger.debug(f"Marching squares on {nx}x{ny} grid: {len(adjacency)} crossed edges, {len(polylines)} polylines")
    return polylines

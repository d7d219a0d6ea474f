"""
Curve slices and phase diagrams as SVG and CSV.

Hyperelliptic frames are sampled branch by branch as p = +-sqrt(P(z)) with
endpoints on the exact roots; conic and ellipse frames go through marching
squares. All output is plain text and byte-for-byte reproducible.
"""
import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import svg

from contour import evaluate_grid, marching_squares
from curves import ConicCurve, CubicCurve, QuinticCurve
from polycore import MultiPoly, PolynomialError, UniPoly, substitute, to_rational
from topology import PhaseDiagram, TopologyError, sign_chart
from utils import format_number, run_parallel

logger = logging.getLogger("HamDef.Render")

WIDTH = 600
HEIGHT = 750
MARGIN_LEFT = 70
MARGIN_RIGHT = 20
MARGIN_TOP = 50
MARGIN_BOTTOM = 60
TICKS = 5

Window = Tuple[float, float, float, float]
Point = Tuple[float, float]


class RenderError(Exception):
    """Custom exception for rendering errors."""
    pass


class EmptyRenderWarning(UserWarning):
    """Issued when a frame has nothing to draw inside its window."""
    pass


@dataclass(frozen=True)
class Polyline:
    points: Tuple[Point, ...]
    branch_id: int
    isolated: bool = False

    def __post_init__(self):
        object.__setattr__(self, "points", tuple((float(h), float(v)) for h, v in self.points))
        if self.isolated and len(self.points) != 1:
            raise RenderError(f"An isolated point needs exactly one point, got {len(self.points)}")
        if not self.isolated and len(self.points) < 2:
            raise RenderError(f"A polyline needs at least two points, got {len(self.points)}")


@dataclass(frozen=True)
class Style:
    stroke: str = "#1f3a93"
    stroke_width: float = 1.5
    point_color: str = "#c0392b"
    axis_color: str = "#333333"
    grid_color: str = "#bbbbbb"
    font_size: int = 12


@dataclass(frozen=True)
class FrameSpec:
    """
    One picture: a curve at fixed parameters inside a window.

    curve is a CubicCurve or QuinticCurve (sampled as p = +-sqrt(P(z))), a
    ConicCurve, or a MultiPoly in the two axis variables (both contoured).
    """
    curve: Optional[Union[CubicCurve, QuinticCurve, ConicCurve, MultiPoly]]
    params: Dict[str, float]
    window: Window
    samples: int = 400
    grid_n: int = 256
    style: Style = field(default_factory=Style)
    title: str = ""
    annotations: Tuple[Tuple[float, float, str], ...] = ()
    axis_labels: Tuple[str, str] = ("z", "p")

    def __post_init__(self):
        _validate_window(self.window)
        if self.samples < 2:
            raise RenderError(f"samples must be >= 2, got {self.samples}")
        if self.grid_n < 16:
            raise RenderError(f"grid_n must be >= 16, got {self.grid_n}")


def _validate_window(window: Window) -> Window:
    if len(window) != 4:
        raise RenderError(f"Window needs four numbers, got {window}")
    h0, h1, v0, v1 = (float(w) for w in window)
    if not all(map(math.isfinite, (h0, h1, v0, v1))) or not (h1 > h0 and v1 > v0):
        raise RenderError(f"Degenerate window {window}")
    return (h0, h1, v0, v1)


def _warn_empty(what: str):
    logger.warning(f"Nothing to draw: {what}")
    warnings.warn(f"Nothing to draw: {what}", EmptyRenderWarning, stacklevel=3)


def sample_hyperelliptic(P: UniPoly, window: Window, n: int) -> List[Polyline]:
    """
    Samples the real curve p^2 = P(z) inside the z range of the window.

    Every maximal interval with P >= 0 gives a mirror pair of polylines
    (branch ids 2k and 2k+1) with n samples plus any interior double roots,
    so nodes lie exactly on the branch. Isolated points follow as single-point
    polylines.

    Args:
        P: Numeric slice.
        window: (z_min, z_max, p_min, p_max).
        n: Samples per branch, >= 2.

    Returns:
        Polylines; empty (with an EmptyRenderWarning) if P < 0 on the whole window.
    """
    if n < 2:
        raise RenderError(f"n must be >= 2, got {n}")
    z_min, z_max, _, _ = _validate_window(window)
    try:
        chart = sign_chart(P, tol=1e-13)
    except TopologyError as e:
        raise RenderError(f"Cannot sample {P}: {e}") from e
    runs, isolated, crossings = chart.positive_runs()

    polylines: List[Polyline] = []
    for lo, hi in runs:
        a, b = max(lo, z_min), min(hi, z_max)
        if not a < b:
            continue
        inner = [c for c in crossings if a < c < b]
        zs = np.unique(np.concatenate([np.linspace(a, b, n), np.asarray(inner, dtype=float)]))
        ps = np.sqrt(np.clip(P(zs), 0.0, None))
        k = len(polylines)
        polylines.append(Polyline(tuple(zip(zs, ps)), branch_id=k))
        polylines.append(Polyline(tuple(zip(zs, -ps)), branch_id=k + 1))
    for z in isolated:
        if z_min <= z <= z_max:
            polylines.append(Polyline(((z, 0.0),), branch_id=len(polylines), isolated=True))

    if not polylines:
        _warn_empty(f"{P} is negative on z in [{z_min:g}, {z_max:g}]")
    return polylines


def contour_implicit(f: MultiPoly, window: Window, grid_n: int,
                     variables: Tuple[str, str] = ("p1", "p2"), workers: int = 1) -> List[Polyline]:
    """
    Zero set of f(h, v) by marching squares with linear edge interpolation.

    Args:
        f: Polynomial in the two plot variables only.
        window: (h_min, h_max, v_min, v_max).
        grid_n: Samples per axis, >= 16.
        variables: Names of the horizontal and vertical variables.
        workers: Threads for the grid evaluation.
    """
    if grid_n < 16:
        raise RenderError(f"grid_n must be >= 16, got {grid_n}")
    h0, h1, v0, v1 = _validate_window(window)
    try:
        func = f.lambdify(variables)
    except PolynomialError as e:
        raise RenderError(f"Cannot contour {f} in {variables}: {e}") from e
    hs = np.linspace(h0, h1, grid_n)
    vs = np.linspace(v0, v1, grid_n)
    values = evaluate_grid(func, hs, vs, workers=workers)
    lines = marching_squares(values, hs, vs)
    polylines = [Polyline(tuple(line), branch_id=k) for k, line in enumerate(lines)]
    if not polylines:
        _warn_empty(f"{f} has no zero in the window")
    return polylines


def frame_polylines(frame: FrameSpec, workers: int = 1) -> List[Polyline]:
    """Polylines of a frame, dispatched on the curve family."""
    params = {k: to_rational(v) for k, v in frame.params.items()}
    curve = frame.curve
    if curve is None:
        return []
    if isinstance(curve, (CubicCurve, QuinticCurve)):
        return sample_hyperelliptic(curve.slice(**params), frame.window, frame.samples)
    if isinstance(curve, ConicCurve):
        return contour_implicit(curve.slice(**params), frame.window, frame.grid_n, workers=workers)
    if isinstance(curve, MultiPoly):
        return contour_implicit(substitute(curve, params), frame.window, frame.grid_n, workers=workers)
    raise RenderError(f"Cannot render {type(curve).__name__}")


# --- SVG ------------------------------------------------------------------

class _Canvas:
    """Maps window coordinates to pixels."""

    def __init__(self, window: Window):
        self.h0, self.h1, self.v0, self.v1 = _validate_window(window)
        self.width = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
        self.height = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

    def px(self, h: float, v: float) -> Tuple[float, float]:
        x = MARGIN_LEFT + (h - self.h0) / (self.h1 - self.h0) * self.width
        y = MARGIN_TOP + (self.v1 - v) / (self.v1 - self.v0) * self.height
        return round(x, 3), round(y, 3)

    def contains(self, h: float, v: float) -> bool:
        return self.h0 <= h <= self.h1 and self.v0 <= v <= self.v1

    def clip(self, p: Point, q: Point) -> Optional[Tuple[Point, Point]]:
        """Liang-Barsky clipping of the segment p-q to the window."""
        dh, dv = q[0] - p[0], q[1] - p[1]
        s0, s1 = 0.0, 1.0
        for step, room in ((-dh, p[0] - self.h0), (dh, self.h1 - p[0]),
                           (-dv, p[1] - self.v0), (dv, self.v1 - p[1])):
            if step == 0:
                if room < 0:
                    return None
                continue
            s = room / step
            if step < 0:
                s0 = max(s0, s)
            else:
                s1 = min(s1, s)
            if s0 > s1:
                return None
        a = p if s0 == 0.0 else (p[0] + s0 * dh, p[1] + s0 * dv)
        b = q if s1 == 1.0 else (p[0] + s1 * dh, p[1] + s1 * dv)
        return a, b


def _visible_runs(points: Sequence[Point], canvas: _Canvas) -> List[List[Point]]:
    runs: List[List[Point]] = []
    current: List[Point] = []
    for p, q in zip(points, points[1:]):
        clipped = canvas.clip(p, q)
        if clipped is None:
            if len(current) >= 2:
                runs.append(current)
            current = []
            continue
        a, b = clipped
        if current and current[-1] == a:
            current.append(b)
        else:
            if len(current) >= 2:
                runs.append(current)
            current = [a, b]
    if len(current) >= 2:
        runs.append(current)
    return runs


def _tick_values(lo: float, hi: float) -> List[float]:
    return [lo + (hi - lo) * k / (TICKS - 1) for k in range(TICKS)]


def _axes(canvas: _Canvas, style: Style, labels: Tuple[str, str]) -> List[svg.Element]:
    left, bottom = MARGIN_LEFT, HEIGHT - MARGIN_BOTTOM
    right, top = WIDTH - MARGIN_RIGHT, MARGIN_TOP
    elements: List[svg.Element] = [
        svg.Line(x1=left, y1=bottom, x2=right, y2=bottom, stroke=style.axis_color, stroke_width=1),
        svg.Line(x1=left, y1=bottom, x2=left, y2=top, stroke=style.axis_color, stroke_width=1),
    ]
    if canvas.v0 < 0 < canvas.v1:
        _, y = canvas.px(canvas.h0, 0.0)
        elements.append(svg.Line(x1=left, y1=y, x2=right, y2=y, stroke=style.grid_color, stroke_width=0.5))
    if canvas.h0 < 0 < canvas.h1:
        x, _ = canvas.px(0.0, canvas.v0)
        elements.append(svg.Line(x1=x, y1=bottom, x2=x, y2=top, stroke=style.grid_color, stroke_width=0.5))
    for h in _tick_values(canvas.h0, canvas.h1):
        x, _ = canvas.px(h, canvas.v0)
        elements.append(svg.Line(x1=x, y1=bottom, x2=x, y2=bottom + 5, stroke=style.axis_color, stroke_width=1))
        elements.append(svg.Text(x=x, y=bottom + 20, text=f"{h:.3g}", text_anchor="middle",
                                 font_size=style.font_size))
    for v in _tick_values(canvas.v0, canvas.v1):
        _, y = canvas.px(canvas.h0, v)
        elements.append(svg.Line(x1=left - 5, y1=y, x2=left, y2=y, stroke=style.axis_color, stroke_width=1))
        elements.append(svg.Text(x=left - 8, y=round(y + 4, 3), text=f"{v:.3g}", text_anchor="end",
                                 font_size=style.font_size))
    elements.append(svg.Text(x=round((left + right) / 2, 3), y=HEIGHT - 15, text=labels[0],
                             text_anchor="middle", font_size=style.font_size + 2))
    elements.append(svg.Text(x=20, y=round((top + bottom) / 2, 3), text=labels[1],
                             text_anchor="middle", font_size=style.font_size + 2))
    return elements


def emit_svg(polylines: Sequence[Polyline], frame: FrameSpec) -> str:
    """
    Standalone SVG document for a frame.

    One path per visible piece of each polyline, isolated points as r=2
    circles, axes with tick labels and the frame title on top.
    """
    canvas = _Canvas(frame.window)
    style = frame.style
    elements = _axes(canvas, style, frame.axis_labels)

    paths = 0
    for line in polylines:
        if line.isolated:
            h, v = line.points[0]
            if canvas.contains(h, v):
                cx, cy = canvas.px(h, v)
                elements.append(svg.Circle(cx=cx, cy=cy, r=2, fill=style.point_color))
            continue
        for run in _visible_runs(line.points, canvas):
            d = [svg.MoveTo(*canvas.px(*run[0]))] + [svg.LineTo(*canvas.px(*p)) for p in run[1:]]
            elements.append(svg.Path(d=d, stroke=style.stroke, stroke_width=style.stroke_width, fill="none"))
            paths += 1

    for h, v, label in frame.annotations:
        if not canvas.contains(h, v):
            continue
        cx, cy = canvas.px(h, v)
        elements.append(svg.Circle(cx=cx, cy=cy, r=3, fill=style.point_color))
        elements.append(svg.Text(x=round(cx + 6, 3), y=round(cy - 6, 3), text=label, font_size=style.font_size + 2))

    if frame.title:
        elements.append(svg.Text(x=WIDTH // 2, y=30, text=frame.title, text_anchor="middle",
                                 font_size=style.font_size + 4))
    logger.debug(f"SVG '{frame.title}': {paths} paths from {len(polylines)} polylines")
    document = svg.SVG(width=WIDTH, height=HEIGHT, viewBox=svg.ViewBoxSpec(0, 0, WIDTH, HEIGHT),
                       elements=elements)
    return document.as_str() + "\n"


def emit_csv(polylines: Sequence[Polyline]) -> str:
    """CSV with header ``branch,z,p``; one row per vertex."""
    rows = ["branch,z,p"]
    for line in polylines:
        for h, v in line.points:
            rows.append(f"{line.branch_id},{format_number(h)},{format_number(v)}")
    return "\n".join(rows) + "\n"


def render_frame(frame: FrameSpec) -> str:
    return emit_svg(frame_polylines(frame), frame)


def animate(frames: Sequence[FrameSpec], workers: int = 1) -> List[str]:
    """Renders frames independently; documents come back in frame order."""
    if not frames:
        return []
    logger.info(f"Rendering {len(frames)} frames with {workers} worker(s)")
    return run_parallel(render_frame, list(frames), workers=workers, desc="Frames")


def phase_polylines(diagram: PhaseDiagram) -> List[Polyline]:
    return [Polyline(tuple(line), branch_id=k) for k, line in enumerate(diagram.contour) if len(line) >= 2]


def phase_svg(diagram: PhaseDiagram, title: str = "", style: Optional[Style] = None) -> str:
    """The locus Delta = 0 with its lettered critical points, in the (x, t) plane."""
    frame = FrameSpec(
        curve=None,
        params={},
        window=diagram.window,
        style=style or Style(),
        title=title,
        annotations=tuple((p.x, p.t, p.letter) for p in diagram.critical_points),
        axis_labels=("x", "t"),
    )
    return emit_svg(phase_polylines(diagram), frame)

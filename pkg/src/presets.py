"""
Named curves and figure presets.

Every curve comes from a solution family of the catalog with concrete
constants; every figure is a list of parameter values in a fixed window.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Tuple, Union

from curves import ConicCurve, CubicCurve, QuinticCurve
from polycore import MultiPoly, to_rational
from render import FrameSpec, RenderError
from systems import UnknownSystemError, family_curve, liouville_preset, solution_family
from topology import PhaseDiagram, curve_discriminant, trace_phase_diagram

logger = logging.getLogger("HamDef.Presets")

Curve = Union[CubicCurve, QuinticCurve, ConicCurve, MultiPoly]
Window = Tuple[float, float, float, float]

KDV5_FIGURE_CONSTANTS = {"A0": 1, "A1": 1, "A2": 1, "C0": -12, "C1": 0, "C2": 0, "C3": 3, "C4": 1}


def _hirota_satsuma_ellipse() -> MultiPoly:
    # p1^2/(u^2 v) + p2^2/v = 1 with the denominators cleared
    ansatz = solution_family("hirota-satsuma")
    u, v = ansatz.bindings["u"], ansatz.bindings["v"]
    p1 = MultiPoly.variable("p1")
    p2 = MultiPoly.variable("p2")
    return p1 ** 2 + u ** 2 * p2 ** 2 - u ** 2 * v


_CURVE_BUILDERS = {
    "trivial-cubic": lambda: family_curve("kdv3-linear", {"a": 0, "b": 0, "c": 0, "d": "1/2"}),
    "eq415": lambda: family_curve("kdv3-linear", {"a": 1, "b": 1, "c": 1, "d": -1}),
    "eq419": lambda: family_curve("kdv3-quadratic", {"A": 1, "B": 1, "C": 1, "D": -1, "E": -1}),
    "quintic-two-bubbles": lambda: family_curve("kdv5-linear", KDV5_FIGURE_CONSTANTS),
    "singular-cubic": lambda: CubicCurve(0, "-3*u^2", "2*u^3"),
    "benney-hyperbola": lambda: liouville_preset("hyperbola-benney").f,
    "hirota-satsuma-ellipse": _hirota_satsuma_ellipse,
}

CURVE_DESCRIPTIONS = {
    "trivial-cubic": "p^2 = z^3 + t*z + x",
    "eq415": "cubic with (u3, u1, u0) = (2, 3 - 2t, 4 + 2t - 2x)",
    "eq419": "cubic with coefficients quadratic in t",
    "quintic-two-bubbles": "quintic whose slices split into up to three components",
    "singular-cubic": "p^2 = (z + 2u)(z - u)^2 along the rational Burgers-Hopf solution",
    "benney-hyperbola": "p1*p2 + t*p1 + x2 + t^2/2 = 0",
    "hirota-satsuma-ellipse": "p1^2 + t^2*p2^2 - t^2*v = 0, v = -(2/3)x + (1/3)t^2",
}


def curve_names() -> List[str]:
    return sorted(_CURVE_BUILDERS)


@lru_cache(maxsize=None)
def named_curve(name: str) -> Curve:
    """
    Looks up a named curve.

    Raises:
        UnknownSystemError: For an unknown name.
    """
    builder = _CURVE_BUILDERS.get(name)
    if builder is None:
        raise UnknownSystemError(f"Unknown curve '{name}' (known: {curve_names()})")
    curve = builder()
    logger.debug(f"Built curve '{name}'")
    return curve


@dataclass(frozen=True)
class FigurePreset:
    """
    A frame sequence ("frames") or a phase diagram ("phase") of a named curve.

    For frame figures ``params`` holds one mapping per frame; ``title_names``
    renames parameters in frame titles only.
    """
    name: str
    kind: str
    curve: str
    window: Window
    description: str = ""
    params: Tuple[Dict[str, Union[int, float, str]], ...] = ()
    axis_labels: Tuple[str, str] = ("z", "p")
    title_names: Tuple[Tuple[str, str], ...] = ()

    def to_json(self) -> dict:
        data = {
            "name": self.name,
            "kind": self.kind,
            "curve": self.curve,
            "window": list(self.window),
            "description": self.description,
        }
        if self.kind == "frames":
            data["frames"] = len(self.params)
        return data


def _frames(fixed: str, value, name: str, values) -> Tuple[Dict, ...]:
    return tuple({fixed: value, name: v} for v in values)


def _burgers_frames(y0, x, ys) -> Tuple[Dict, ...]:
    """u = (y0 - y)/(3x) of the rational Burgers-Hopf family, exact."""
    ansatz = solution_family("bh-rational", {"y0": y0})
    frames = []
    for y in ys:
        point = {"x": to_rational(x), "y": to_rational(y)}
        u = ansatz.bindings["u"].evaluate(point) / ansatz.denominators["u"].evaluate(point)
        frames.append({"u": u, "y": y, "x": x})
    return tuple(frames)


_FIGURES = {f.name: f for f in (
    FigurePreset("fig1", "frames", "benney-hyperbola", (-3.0, 3.0, -4.0, 2.0),
                 "hyperbola degenerating into a line pair at t = sqrt(2)",
                 params=_frames("x2", -1, "t", (1.3, 1.4142, 1.6)), axis_labels=("p1", "p2")),
    FigurePreset("fig2", "frames", "hirota-satsuma-ellipse", (-2.5, 2.5, -2.5, 2.5),
                 "ellipse along the Hirota-Satsuma solution",
                 params=_frames("x", -1, "t", (1, 1.2, 1.6)), axis_labels=("p1", "p2"),
                 title_names=(("x", "x1"),)),
    FigurePreset("fig3", "phase", "trivial-cubic", (-2.0, 2.0, -3.0, 1.0),
                 "cusp 4t^3 + 27x^2 = 0 of the trivial cubic", axis_labels=("x", "t")),
    FigurePreset("fig4", "frames", "trivial-cubic", (-2.0, 2.0, -2.5, 2.5),
                 "oval splitting off the branch through a node",
                 params=_frames("x", "1/5", "t", (-0.5, -0.64633, -1))),
    FigurePreset("fig5", "frames", "trivial-cubic", (-2.0, 2.0, -2.5, 2.5),
                 "oval growing out of an isolated point",
                 params=_frames("x", "-1/5", "t", (-0.5, -0.66, -1))),
    FigurePreset("fig6", "frames", "trivial-cubic", (-2.0, 2.0, -2.5, 2.5),
                 "cusp at the origin",
                 params=_frames("x", 0, "t", (0.5, 0, -0.5))),
    FigurePreset("fig7", "phase", "eq415", (-2.0, 12.0, -5.0, 10.0),
                 "discriminant locus with a maximum and a cusp", axis_labels=("x", "t")),
    FigurePreset("fig8", "frames", "eq415", (-6.0, 4.0, -8.0, 8.0),
                 "oval appears, vanishes and reappears at x = 4",
                 params=_frames("x", 4, "t", (-1, 1.5, 2.1, 5, 8.3, 10))),
    FigurePreset("fig9", "phase", "eq419", (-2.0, 14.0, -3.0, 6.0),
                 "discriminant locus with four critical points", axis_labels=("x", "t")),
    FigurePreset("fig10", "frames", "quintic-two-bubbles", (-4.5, 3.0, -6.0, 6.0),
                 "one, two and three real components of a quintic at x = 7",
                 params=_frames("x", 7, "t", (0, -3.6, -5, -9, -9.11, -9.3, -10.3, -11.2, -14))),
    FigurePreset("fig11", "frames", "singular-cubic", (-1.5, 1.5, -1.5, 1.5),
                 "acnode, cusp and node along the rational Burgers-Hopf solution",
                 params=_burgers_frames(1, "1/3", (1.5, 1, 0.5))),
    FigurePreset("bubble-oscillation", "frames", "eq419", (-8.0, 6.0, -15.0, 15.0),
                 "repeated oval births and deaths at x = 1.3",
                 params=_frames("x", "13/10", "t", (-2, -1.27, -0.5, 0.2, 0.3, 0.3871, 0.65,
                                                    0.786, 1.5, 4.5, 5, 9.5))),
)}


def figure_names() -> List[str]:
    return list(_FIGURES)


def get_figure(name: str) -> FigurePreset:
    figure = _FIGURES.get(name)
    if figure is None:
        raise UnknownSystemError(f"Unknown figure '{name}' (known: {figure_names()})")
    return figure


def _title(figure: FigurePreset, params: Dict) -> str:
    rename = dict(figure.title_names)
    shown = {k: v for k, v in params.items() if k != "u"} or params
    return ", ".join(f"{rename.get(k, k)}={v}" for k, v in shown.items())


def figure_frames(name: str, samples: int = 400, grid_n: int = 256) -> List[FrameSpec]:
    """
    Frames of a frame figure, in display order.

    Raises:
        UnknownSystemError: For an unknown figure.
        RenderError: If the figure is a phase diagram.
    """
    figure = get_figure(name)
    if figure.kind != "frames":
        raise RenderError(f"Figure '{name}' is a phase diagram, not a frame sequence")
    curve = named_curve(figure.curve)
    frames = []
    for params in figure.params:
        used = {k: v for k, v in params.items() if k in _curve_parameters(curve)}
        frames.append(FrameSpec(
            curve=curve,
            params={k: to_rational(v) for k, v in used.items()},
            window=figure.window,
            samples=samples,
            grid_n=grid_n,
            title=_title(figure, params),
            axis_labels=figure.axis_labels,
        ))
    return frames


def _curve_parameters(curve: Curve) -> Tuple[str, ...]:
    if isinstance(curve, MultiPoly):
        return tuple(v for v in curve.used_variables() if v not in ("p1", "p2"))
    return curve.parameters()


def figure_phase(name: str, grid_n: int = 512, workers: int = 1) -> PhaseDiagram:
    """
    Traces the phase diagram of a phase figure.

    Raises:
        UnknownSystemError: For an unknown figure.
        RenderError: If the figure is a frame sequence.
    """
    figure = get_figure(name)
    if figure.kind != "phase":
        raise RenderError(f"Figure '{name}' is a frame sequence, not a phase diagram")
    delta = curve_discriminant(named_curve(figure.curve))
    return trace_phase_diagram(delta, figure.window, grid_n=grid_n, workers=workers)

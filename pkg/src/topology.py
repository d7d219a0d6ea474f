"""
Real topology of hyperelliptic slices p^2 = P(z), transition events along
lines x = const, and the phase diagram of the discriminant locus Delta = 0 in
the (x, t) plane.
"""
import logging
import math
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import sympy as sp
from scipy.optimize import brentq

from contour import evaluate_grid, marching_squares
from curves import (CubicCurve, CurveError, QuinticCurve, SingularPoint, classify_double_root,
                    cubic_discriminant, genus, quintic_discriminant)
from polycore import (MultiPoly, PolynomialError, RootInterval, UniPoly, differentiate,
                      isolate_real_roots, refine_root, refine_root_exact, resultant, substitute,
                      to_rational)
from utils import format_number, run_parallel

logger = logging.getLogger("HamDef.Topology")

Window = Tuple[float, float, float, float]

# Letters for critical points of the locus, by decreasing x.
_EXTREMUM_LETTERS = "MRQPONLKJIHGFEDCBA"


class TopologyError(Exception):
    """Custom exception for real-section analysis and phase-diagram errors."""
    pass


class DegenerateFamilyError(TopologyError):
    """Raised when the discriminant vanishes identically along a sweep line."""
    pass


@dataclass(frozen=True)
class RealRoot:
    z: float
    multiplicity: int
    interval: RootInterval


@dataclass(frozen=True)
class SignChart:
    """Real roots of P with the sign of P on the gaps between them."""
    roots: Tuple[RealRoot, ...]
    signs: Tuple[int, ...]  # signs[k] left of roots[k]; signs[-1] right of the last root

    def positive_runs(self) -> Tuple[List[Tuple[float, float]], List[float], List[float]]:
        """
        Maximal closed intervals where P >= 0.

        Returns:
            (runs, isolated, crossings): runs may start at -inf or end at +inf;
            isolated are roots with P < 0 on both sides; crossings are roots
            inside a run (P > 0 on both sides).
        """
        runs, isolated, crossings = [], [], []
        start = -math.inf if self.signs[0] > 0 else None
        for k, root in enumerate(self.roots):
            left, right = self.signs[k], self.signs[k + 1]
            if left > 0 and right > 0:
                crossings.append(root.z)
            elif left > 0:
                runs.append((start, root.z))
                start = None
            elif right > 0:
                start = root.z
            else:
                isolated.append(root.z)
        if self.signs[-1] > 0:
            runs.append((start, math.inf))
        return runs, isolated, crossings


def sign_chart(P: UniPoly, tol: float = 1e-12) -> SignChart:
    """
    Exact sign pattern of P along the real line.

    Roots are isolated exactly and refined to tol; the sign flips across a
    root of odd multiplicity only.

    Raises:
        TopologyError: For the zero polynomial.
    """
    try:
        intervals = isolate_real_roots(P)
        roots = tuple(RealRoot(refine_root(P, iv, tol), iv.multiplicity, iv) for iv in intervals)
    except PolynomialError as e:
        raise TopologyError(f"Cannot chart the signs of {P}: {e}") from e
    lead = 1 if float(P.leading) > 0 else -1
    signs = [lead]
    for root in reversed(roots):
        signs.append(signs[-1] * (-1 if root.multiplicity % 2 else 1))
    signs.reverse()
    return SignChart(roots=roots, signs=tuple(signs))


@dataclass(frozen=True)
class RealSectionReport:
    """Topology of the real curve p^2 = P(z) at fixed parameters."""
    oval_intervals: List[Tuple[float, float]]
    unbounded_branch_start: Optional[float]
    isolated_points: List[float]
    singular_points: List[SingularPoint]
    connected: bool
    component_count: int
    real_roots: List[Tuple[float, int]] = field(default_factory=list)
    genus: Optional[int] = None

    def to_json(self) -> dict:
        return {
            "oval_intervals": [list(iv) for iv in self.oval_intervals],
            "unbounded_branch_start": self.unbounded_branch_start,
            "isolated_points": list(self.isolated_points),
            "singular_points": [s.to_json() for s in self.singular_points],
            "connected": self.connected,
            "component_count": self.component_count,
            "real_roots": [{"z": z, "multiplicity": m} for z, m in self.real_roots],
            "genus": self.genus,
        }


def analyze_real_section(P: UniPoly, tol: float = 1e-12) -> RealSectionReport:
    """
    Components, ovals, isolated points and singular points of p^2 = P(z).

    Isolated points are reported but not counted as components.

    Args:
        P: Odd-degree slice with positive leading coefficient.
        tol: Root refinement tolerance.

    Returns:
        The report.

    Raises:
        TopologyError: For even degree or a non-positive leading coefficient.
    """
    if P.is_zero() or P.degree % 2 == 0:
        raise TopologyError(f"Real-section analysis needs odd degree, got {P.degree}")
    if not float(P.leading) > 0:
        raise TopologyError(f"Leading coefficient must be positive, got {P.leading}")

    chart = sign_chart(P, tol)
    runs, isolated, _ = chart.positive_runs()
    ovals = [(lo, hi) for lo, hi in runs if math.isfinite(lo) and math.isfinite(hi)]
    unbounded = [lo for lo, hi in runs if not math.isfinite(hi)]

    singular = []
    for root in chart.roots:
        if root.multiplicity < 2:
            continue
        try:
            point = classify_double_root(P, root.interval)
        except CurveError as e:
            raise TopologyError(f"Cannot classify the multiple root near {root.z:.10g}: {e}") from e
        singular.append(replace(point, z=root.z))

    g = genus(P) if P.degree in (3, 5) else None
    report = RealSectionReport(
        oval_intervals=ovals,
        unbounded_branch_start=unbounded[0] if unbounded else None,
        isolated_points=isolated,
        singular_points=singular,
        connected=len(runs) == 1 and not isolated,
        component_count=len(runs),
        real_roots=[(r.z, r.multiplicity) for r in chart.roots],
        genus=g,
    )
    logger.debug(f"Real section of degree-{P.degree} slice: {report.component_count} components, "
                 f"{len(ovals)} ovals, {len(isolated)} isolated points")
    return report


# --- sweeps ---------------------------------------------------------------

HyperellipticCurve = Union[CubicCurve, QuinticCurve]


@lru_cache(maxsize=32)
def curve_discriminant(curve: HyperellipticCurve) -> MultiPoly:
    """Delta(x, t) of a cubic or quintic family."""
    if isinstance(curve, CubicCurve):
        return cubic_discriminant(curve)
    if isinstance(curve, QuinticCurve):
        return quintic_discriminant(curve)
    raise TopologyError(f"Sweeps need a cubic or quintic curve, got {type(curve).__name__}")


@dataclass(frozen=True)
class TransitionEvent:
    """A parameter value where the slice acquires a multiple real root."""
    t_star: float
    kind: str
    z_location: float
    before: int
    after: int
    x_fixed: float = 0.0

    def to_json(self) -> dict:
        return {
            "x": self.x_fixed,
            "t_star": self.t_star,
            "kind": self.kind,
            "z_location": self.z_location,
            "components_before": self.before,
            "components_after": self.after,
        }


def _line_restriction(delta: MultiPoly, x_value: sp.Rational) -> UniPoly:
    line = substitute(delta, {"x": x_value})
    extra = set(line.used_variables()) - {"t"}
    if extra:
        raise TopologyError(f"Discriminant depends on unbound parameters {sorted(extra)}")
    return line.to_unipoly("t")


def _abs_scale(P: UniPoly, z: float, order: int = 0) -> float:
    """Sum of |terms| of the order-th derivative at z, as a size reference."""
    coeffs = P.derivative(order).coefficients
    return sum(abs(float(c)) * abs(z) ** i for i, c in enumerate(coeffs)) or 1.0


def _multiple_roots_numeric(P: UniPoly) -> List[SingularPoint]:
    """Multiple real roots of a float slice, found among the real critical points."""
    candidates = []
    for r in P.derivative().numeric_roots():
        if abs(r.imag) <= 1e-7 * (1.0 + abs(r)):
            z = float(r.real)
            if abs(float(P(z))) <= 1e-6 * _abs_scale(P, z):
                candidates.append(z)
    candidates.sort()

    merged: List[List[float]] = []
    for z in candidates:
        if merged and abs(z - merged[-1][-1]) <= 1e-5 * (1.0 + abs(z)):
            merged[-1].append(z)
        else:
            merged.append([z])

    points = []
    for group in merged:
        z = float(np.mean(group))
        curvature = abs(float(P.derivative(2)(z)))
        m = 3 if (len(group) > 1 or curvature <= 1e-3 * _abs_scale(P, z, 2)) else 2
        points.append(classify_double_root(P, z, multiplicity=m))
    return points


def _event_points(curve: HyperellipticCurve, x_value: sp.Rational, iv: RootInterval,
                  t_star: float) -> List[SingularPoint]:
    if iv.is_exact():
        P = curve.slice(x=x_value, t=iv.lo)
        return [replace(classify_double_root(P, root), z=refine_root(P, root, 1e-13))
                for root in isolate_real_roots(P) if root.multiplicity >= 2]
    return _multiple_roots_numeric(curve.slice(x=float(x_value), t=t_star))


def _sample_before(left: float, t_star: float) -> float:
    return 0.5 * (left + t_star) if t_star - left > 2e-6 else t_star - 1e-6


def _sample_after(t_star: float, right: float) -> float:
    return 0.5 * (t_star + right) if right - t_star > 2e-6 else t_star + 1e-6


def component_count(curve: HyperellipticCurve, x_fixed, t_value) -> int:
    """Component count of the real section at (x, t), computed on the exact slice."""
    P = curve.slice(x=to_rational(x_fixed), t=to_rational(t_value))
    return analyze_real_section(P).component_count


def component_profile(curve: HyperellipticCurve, x_fixed, t_values: Sequence[float],
                      workers: int = 1) -> List[Tuple[float, int]]:
    """Component counts along the line x = x_fixed at the given t values."""
    counts = run_parallel(lambda t: component_count(curve, x_fixed, t), list(t_values),
                          workers=workers, desc="Profile")
    return list(zip([float(t) for t in t_values], counts))


def _discriminant_times(curve: HyperellipticCurve, x_value: sp.Rational, t0: float, t1: float,
                        tol: float) -> List[Tuple[float, RootInterval]]:
    D = _line_restriction(curve_discriminant(curve), x_value)
    if D.is_zero():
        raise DegenerateFamilyError(f"Discriminant vanishes identically on the line x = {x_value}")
    times = []
    for iv in isolate_real_roots(D):
        if iv.hi < to_rational(t0) or iv.lo > to_rational(t1):
            continue
        t_star = refine_root(D, iv, tol)
        if t0 <= t_star <= t1:
            times.append((t_star, iv))
    return times


def discriminant_roots(curve: HyperellipticCurve, x_fixed, t_range: Tuple[float, float],
                       tol: float = 1e-9) -> List[float]:
    """Distinct real roots of Delta(x_fixed, t) in t_range, refined to tol and sorted."""
    t0, t1 = float(t_range[0]), float(t_range[1])
    if not t0 < t1:
        raise TopologyError(f"Empty sweep range [{t0}, {t1}]")
    return [t for t, _ in _discriminant_times(curve, to_rational(x_fixed), t0, t1, tol)]


def sweep(curve: HyperellipticCurve, x_fixed, t_range: Tuple[float, float],
          tol: float = 1e-9) -> List[TransitionEvent]:
    """
    Transition events along the line x = x_fixed for t in t_range.

    Every real root of Delta(x_fixed, t) in the range is found by exact root
    isolation and refined to tol; at each one the multiple real roots of the
    slice are located and classified.

    There is one event per pair (t_star, z) with a real multiple root z, so
    two real double roots at the same t give two events, ordered by z. A root
    of Delta where only complex conjugate roots collide changes no real
    topology; it yields no event and is logged. Every root of Delta therefore
    carries either events or such a log line.

    Args:
        curve: Cubic or quintic family in (x, t).
        x_fixed: Value of x (floats are read through their decimal form).
        t_range: (t0, t1) with t0 < t1.
        tol: Refinement tolerance for the event times.

    Returns:
        Events sorted by (t_star, z_location).

    Raises:
        DegenerateFamilyError: If Delta vanishes identically on the line.
        TopologyError: For an empty range or unbound parameters.
    """
    t0, t1 = float(t_range[0]), float(t_range[1])
    if not t0 < t1:
        raise TopologyError(f"Empty sweep range [{t0}, {t1}]")
    if not tol > 0:
        raise TopologyError(f"Tolerance must be positive, got {tol}")
    x_value = to_rational(x_fixed)
    times = _discriminant_times(curve, x_value, t0, t1, tol)
    logger.info(f"Sweep at x={float(x_value):.6g}: {len(times)} discriminant roots in [{t0:.6g}, {t1:.6g}]")

    stamps = [t for t, _ in times]
    events: List[TransitionEvent] = []
    for k, (t_star, iv) in enumerate(times):
        points = _event_points(curve, x_value, iv, t_star)
        if not points:
            logger.info(f"Delta vanishes at t={t_star:.10g} through a complex double root; no real event")
            continue
        left = stamps[k - 1] if k > 0 else t0
        right = stamps[k + 1] if k + 1 < len(stamps) else t1
        before = component_count(curve, x_value, _sample_before(left, t_star))
        after = component_count(curve, x_value, _sample_after(t_star, right))
        for point in points:
            events.append(TransitionEvent(t_star=t_star, kind=point.kind, z_location=point.z,
                                          before=before, after=after, x_fixed=float(x_value)))
            logger.debug(f"Event t={t_star:.10g}: {point.kind} at z={point.z:.10g}, {before} -> {after}")
    events.sort(key=lambda e: (e.t_star, e.z_location))
    return events


# --- phase diagrams -------------------------------------------------------

@dataclass(frozen=True)
class CriticalPoint:
    """Point of the locus Delta = 0 where Delta_t = 0 (x extremal along the locus)."""
    x: float
    t: float
    label: str  # max | min | cusp-of-locus
    letter: str = ""
    delta: float = 0.0
    exact: bool = False

    def to_json(self) -> dict:
        return {"x": self.x, "t": self.t, "label": self.label, "letter": self.letter, "delta": self.delta}


def _dpartial(poly: MultiPoly, var: str) -> MultiPoly:
    if var not in poly.variables:
        return MultiPoly.constant(0)
    return differentiate(poly, var)


def _abs_sum(poly: MultiPoly, point) -> float:
    """Sum of |terms| of poly at point."""
    total = sp.Integer(0)
    for monom, c in poly.terms().items():
        term = abs(c)
        for v, e in zip(poly.variables, monom):
            if e:
                term *= abs(point[v]) ** e
        total += term
    return float(total) or 1.0


def _in_window(x: float, t: float, window: Optional[Window]) -> bool:
    if window is None:
        return True
    x_min, x_max, t_min, t_max = window
    return x_min <= x <= x_max and t_min <= t <= t_max


def critical_points(delta: MultiPoly, window: Optional[Window] = None) -> List[CriticalPoint]:
    """
    Solves Delta = 0, Delta_t = 0 through the resultant in t and labels each solution.

    Along the locus x'' = -Delta_tt / Delta_x, so Delta_tt / Delta_x > 0 marks
    a maximum of x and < 0 a minimum. Points where Delta_x vanishes as well
    (double roots of the resultant) are cusps of the locus.

    Args:
        delta: Discriminant in (x, t).
        window: Optional (x_min, x_max, t_min, t_max) filter.

    Returns:
        Points ordered by decreasing x, lettered M, R, Q, ... with cusps as m.

    Raises:
        TopologyError: If the locus has a repeated component.
    """
    extra = set(delta.used_variables()) - {"x", "t"}
    if extra:
        raise TopologyError(f"Discriminant depends on unbound parameters {sorted(extra)}")
    d_t = _dpartial(delta, "t")
    if d_t.is_zero():
        logger.warning("Discriminant does not depend on t; no isolated critical points")
        return []
    d_x = _dpartial(delta, "x")
    d_tt = _dpartial(d_t, "t")
    res = resultant(delta.with_variables(("x", "t")), d_t.with_variables(("x", "t")), var="t")
    if res.is_zero():
        raise TopologyError("Delta and Delta_t share a factor; the locus has a repeated component")
    R = res.to_unipoly("x")
    if R.degree < 1:
        return []

    found = []
    for x_iv in isolate_real_roots(R):
        x_rat = x_iv.lo if x_iv.is_exact() else refine_root_exact(R, x_iv, sp.Rational(1, 10 ** 24))
        G = substitute(d_t, {"x": x_rat}).to_unipoly("t")
        if G.is_zero() or G.degree < 1:
            continue
        for t_iv in isolate_real_roots(G):
            t_rat = t_iv.lo if t_iv.is_exact() else refine_root_exact(G, t_iv, sp.Rational(1, 10 ** 24))
            point = {"x": x_rat, "t": t_rat}
            value = delta.evaluate(point)
            if abs(value) > sp.Rational(1, 10 ** 12) * to_rational(_abs_sum(delta, point)):
                continue
            gx = d_x.evaluate(point)
            gtt = d_tt.evaluate(point)
            exact = x_iv.is_exact() and t_iv.is_exact()
            if exact and value != 0:
                continue
            gx_f = float(gx)
            if (exact and gx == 0) or gx_f == 0 or (
                    x_iv.multiplicity >= 2 and abs(gx_f) <= 1e-8 * _abs_sum(d_x, point)):
                label = "cusp-of-locus"
            else:
                label = "max" if float(gtt) / gx_f > 0 else "min"
            xf, tf = float(x_rat), float(t_rat)
            if _in_window(xf, tf, window):
                found.append(CriticalPoint(x=xf, t=tf, label=label, delta=float(value), exact=exact))

    found.sort(key=lambda p: (-p.x, p.t))
    lettered, extrema, cusps = [], 0, 0
    for p in found:
        if p.label == "cusp-of-locus":
            letter = "m" if cusps == 0 else f"m{cusps + 1}"
            cusps += 1
        else:
            letter = _EXTREMUM_LETTERS[extrema] if extrema < len(_EXTREMUM_LETTERS) else f"M{extrema}"
            extrema += 1
        lettered.append(replace(p, letter=letter))
    logger.info(f"Found {len(lettered)} critical points of the locus: "
                + ", ".join(f"{p.letter}=({p.x:.6g}, {p.t:.6g}) {p.label}" for p in lettered))
    return lettered


@dataclass(frozen=True)
class PhaseDiagram:
    """The locus Delta = 0 in a window of the (x, t) plane."""
    window: Window
    contour: List[List[Tuple[float, float]]]
    critical_points: List[CriticalPoint]

    def to_json(self) -> dict:
        return {
            "window": list(self.window),
            "polylines": len(self.contour),
            "vertices": sum(len(line) for line in self.contour),
            "critical_points": [p.to_json() for p in self.critical_points],
        }

    def to_csv(self) -> str:
        blocks = []
        for line in self.contour:
            blocks.append("\n".join(f"{format_number(x)},{format_number(t)}" for x, t in line))
        return "x,t\n" + "\n\n".join(blocks) + ("\n" if blocks else "")


def _validate_window(window: Window) -> Window:
    if len(window) != 4:
        raise TopologyError(f"Window needs four numbers (x_min, x_max, t_min, t_max), got {window}")
    x_min, x_max, t_min, t_max = (float(v) for v in window)
    if not (x_max > x_min and t_max > t_min) or not all(map(math.isfinite, (x_min, x_max, t_min, t_max))):
        raise TopologyError(f"Degenerate window {window}")
    return (x_min, x_max, t_min, t_max)


def trace_phase_diagram(delta: MultiPoly, window: Window, grid_n: int = 512,
                        workers: int = 1, tol: float = 1e-9) -> PhaseDiagram:
    """
    Contours Delta = 0 on a grid_n x grid_n grid and attaches the exact critical points.

    Every crossed grid edge is refined with brentq on Delta itself.

    Args:
        delta: Discriminant in (x, t).
        window: (x_min, x_max, t_min, t_max).
        grid_n: Samples per axis, >= 16.
        workers: Threads for the grid evaluation.
        tol: Vertices with |Delta| above this are logged.

    Raises:
        TopologyError: For a degenerate window or grid_n < 16.
    """
    window = _validate_window(window)
    if grid_n < 16:
        raise TopologyError(f"grid_n must be >= 16, got {grid_n}")
    x_min, x_max, t_min, t_max = window
    try:
        func = delta.lambdify(("x", "t"))
    except PolynomialError as e:
        raise TopologyError(f"Discriminant cannot be evaluated on the (x, t) plane: {e}") from e
    xs = np.linspace(x_min, x_max, grid_n)
    ts = np.linspace(t_min, t_max, grid_n)
    logger.info(f"Tracing Delta = 0 on a {grid_n}x{grid_n} grid over {window}")
    values = evaluate_grid(func, xs, ts, workers=workers)

    def refine(p0, p1, v0, v1):
        if v0 == 0:
            return p0
        if v1 == 0:
            return p1

        def along(s):
            return float(func(p0[0] + s * (p1[0] - p0[0]), p0[1] + s * (p1[1] - p0[1])))

        try:
            s = brentq(along, 0.0, 1.0, xtol=1e-15, rtol=4 * np.finfo(float).eps)
        except ValueError:
            # grid and scalar evaluation disagree on the sign; keep the linear estimate
            s = v0 / (v0 - v1)
        return (p0[0] + s * (p1[0] - p0[0]), p0[1] + s * (p1[1] - p0[1]))

    contour = marching_squares(values, xs, ts, refine=refine)
    worst = max((abs(float(func(x, t))) for line in contour for x, t in line), default=0.0)
    if worst > tol:
        logger.warning(f"Largest |Delta| on contour vertices is {worst:.3g} (> {tol:g})")
    points = critical_points(delta, window)
    return PhaseDiagram(window=window, contour=contour, critical_points=points)


def region_classify(subject, point: Tuple[float, float], tol: float = 1e-9) -> str:
    """
    Region label of (x, t).

    For a discriminant or a cubic family: "D" where Delta > 0 (disconnected),
    "C" where Delta < 0 (connected), "boundary" where |Delta| <= tol. For a
    quintic family the label comes from the real section: "boundary" only
    where the slice has a real multiple root, otherwise "C" for one component
    and "D<n>" for n components. A zero of Delta from colliding complex roots
    is labelled by its component count.

    Args:
        subject: MultiPoly Delta(x, t), CubicCurve or QuinticCurve.
        point: (x, t); floats are read through their decimal form.
        tol: Boundary tolerance on |Delta|.
    """
    x_value, t_value = to_rational(point[0]), to_rational(point[1])
    if isinstance(subject, MultiPoly):
        delta = subject
    elif isinstance(subject, (CubicCurve, QuinticCurve)):
        delta = curve_discriminant(subject)
    else:
        raise TopologyError(f"Cannot classify regions of {type(subject).__name__}")
    value = delta.evaluate({"x": x_value, "t": t_value})
    if isinstance(subject, QuinticCurve):
        report = analyze_real_section(subject.slice(x=x_value, t=t_value))
        if abs(value) <= tol and report.singular_points:
            return "boundary"
        count = report.component_count
        return "C" if count == 1 else f"D{count}"
    if abs(value) <= tol:
        return "boundary"
    return "D" if value > 0 else "C"

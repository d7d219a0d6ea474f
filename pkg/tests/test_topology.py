from fractions import Fraction

import numpy as np
import pytest

from curves import ACNODE, CUSP, NODE, CubicCurve, QuinticCurve
from oracles import dense_component_count, draw, grid_step, random_polynomial, well_separated
from polycore import UniPoly, isolate_real_roots, parse_poly
from presets import named_curve
from topology import (DegenerateFamilyError, TopologyError, analyze_real_section, component_count,
                      component_profile, critical_points, curve_discriminant, discriminant_roots,
                      region_classify, sweep, trace_phase_diagram)

T_NODE = -(0.27 ** (1 / 3))

# (z - 5)((z^2 + 1)^2 + t*z^2) at x = 0: complex double roots +-i at t = 0, real double roots +-1 at t = -4
TWIN_ROOTS = QuinticCurve("-5 - x", "2 + t", "-(5 + x)*(2 + t)", 1, "-5 - x")


def _uni(text: str) -> UniPoly:
    return UniPoly.from_multipoly(parse_poly(text), "z")


def _oracle_components(curve, x, t) -> int:
    """Dense floating-point count: a monic odd-degree slice with k simple real roots has (k + 1)/2 components."""
    P = curve.slice(x=float(x), t=float(t))
    roots = np.roots([float(c) for c in reversed(P.coefficients)])
    real = [r for r in roots if abs(r.imag) < 1e-7]
    return (len(real) + 1) // 2


def test_node_of_trivial_cubic():
    events = sweep(named_curve("trivial-cubic"), 0.2, (-1.0, 0.5))
    assert len(events) == 1
    event = events[0]
    assert abs(event.t_star - T_NODE) <= 1e-4
    assert event.kind == NODE
    assert event.z_location == pytest.approx(0.46416, abs=1e-4)
    assert (event.before, event.after) == (2, 1)


def test_acnode_of_trivial_cubic():
    events = sweep(named_curve("trivial-cubic"), -0.2, (-1.0, 0.5))
    assert [e.kind for e in events] == [ACNODE]
    assert abs(events[0].t_star - T_NODE) <= 1e-4
    assert events[0].z_location == pytest.approx(-0.46416, abs=1e-4)


def test_cusp_of_trivial_cubic():
    events = sweep(named_curve("trivial-cubic"), 0, (-1.0, 1.0))
    assert [e.kind for e in events] == [CUSP]
    assert abs(events[0].t_star) <= 1e-9
    assert events[0].z_location == pytest.approx(0.0, abs=1e-9)
    assert (events[0].before, events[0].after) == (2, 1)


def test_oval_appears_vanishes_and_reappears():
    events = sweep(named_curve("eq415"), 4, (-2.0, 11.0))
    assert len(events) == 3
    assert [(e.before, e.after) for e in events] == [(1, 2), (2, 1), (1, 2)]
    assert events[0].t_star == pytest.approx(1.46, abs=0.01)
    assert events[2].t_star == pytest.approx(8.34, abs=0.02)


def test_sweep_errors():
    with pytest.raises(TopologyError):
        sweep(named_curve("trivial-cubic"), 0, (1.0, 1.0))
    with pytest.raises(DegenerateFamilyError):
        sweep(CubicCurve(0, 0, "x"), 0, (-1.0, 1.0))


def test_quintic_has_three_components():
    assert component_count(named_curve("quintic-two-bubbles"), 7, -10.3) == 3


def test_profile_matches_dense_oracle():
    curve = named_curve("quintic-two-bubbles")
    ts = [0.0, -5.0, -10.3, -14.0]
    profile = component_profile(curve, 7, ts)
    assert [t for t, _ in profile] == ts
    assert [n for _, n in profile] == [_oracle_components(curve, 7, t) for t in ts]


def test_profile_is_independent_of_workers():
    curve = named_curve("eq415")
    ts = list(np.linspace(-1.0, 10.0, 12))
    assert component_profile(curve, 4, ts, workers=1) == component_profile(curve, 4, ts, workers=4)


def test_critical_points_of_linear_family():
    points = critical_points(curve_discriminant(named_curve("eq415")))
    assert [p.letter for p in points] == ["M", "m"]
    top, cusp = points
    assert (top.x, top.t, top.label) == (pytest.approx(5.0), pytest.approx(5.0), "max")
    assert cusp.label == "cusp-of-locus"
    assert cusp.x == pytest.approx(145 / 54)
    assert cusp.t == pytest.approx(5 / 6)


def test_critical_points_of_quadratic_family():
    delta = curve_discriminant(named_curve("eq419"))
    points = critical_points(delta)
    assert [p.letter for p in points] == ["M", "R", "Q", "m"]
    expected = [(12.657, 3.414), (3.75, 2.5), (1.343, 0.586), (0.7825, -0.1101)]
    for p, (x, t) in zip(points, expected):
        assert p.x == pytest.approx(x, abs=2e-3)
        assert p.t == pytest.approx(t, abs=2e-3)
        assert abs(p.delta) < 1e-6


def test_critical_points_window_filter():
    delta = curve_discriminant(named_curve("eq415"))
    points = critical_points(delta, window=(4.0, 6.0, 4.0, 6.0))
    assert [p.letter for p in points] == ["M"]


def test_phase_diagram_vertices_lie_on_locus():
    delta = curve_discriminant(named_curve("trivial-cubic"))
    diagram = trace_phase_diagram(delta, (-2.0, 2.0, -3.0, 1.0), grid_n=64)
    func = delta.lambdify(("x", "t"))
    assert diagram.contour
    assert max(abs(float(func(x, t))) for line in diagram.contour for x, t in line) <= 1e-9
    assert [p.letter for p in diagram.critical_points] == ["m"]
    assert diagram.to_csv().startswith("x,t\n")


def test_phase_diagram_is_independent_of_workers():
    delta = curve_discriminant(named_curve("eq415"))
    window = (-2.0, 12.0, -5.0, 10.0)
    serial = trace_phase_diagram(delta, window, grid_n=48, workers=1)
    parallel = trace_phase_diagram(delta, window, grid_n=48, workers=4)
    assert serial.contour == parallel.contour


def test_phase_diagram_rejects_bad_windows():
    delta = curve_discriminant(named_curve("trivial-cubic"))
    with pytest.raises(TopologyError):
        trace_phase_diagram(delta, (1.0, -1.0, 0.0, 1.0))
    with pytest.raises(TopologyError):
        trace_phase_diagram(delta, (-1.0, 1.0, -1.0, 1.0), grid_n=8)


@pytest.mark.parametrize("subject, point, label", [
    ("trivial-cubic", (0, -1), "D"),
    ("trivial-cubic", (0, 1), "C"),
    ("trivial-cubic", (0, 0), "boundary"),
    ("quintic-two-bubbles", (7, -10.3), "D3"),
])
def test_region_classify(subject, point, label):
    assert region_classify(named_curve(subject), point) == label


def test_region_of_raw_discriminant():
    assert region_classify(parse_poly("-4*t^3 - 27*x^2"), (0.1, -2)) == "D"


def test_real_section_with_oval():
    report = analyze_real_section(_uni("z^3 - z"))
    assert report.component_count == 2
    assert not report.connected
    assert report.oval_intervals == [(pytest.approx(-1.0), pytest.approx(0.0))]
    assert report.unbounded_branch_start == pytest.approx(1.0)
    assert report.genus == 1


def test_real_section_with_isolated_point():
    report = analyze_real_section(_uni("(z + 1)^2*(z - 2)"))
    assert report.component_count == 1
    assert report.isolated_points == [pytest.approx(-1.0)]
    assert not report.connected
    assert [s.kind for s in report.singular_points] == [ACNODE]
    assert report.genus == 0


def test_real_section_connected():
    report = analyze_real_section(_uni("z^3 + z + 1"))
    assert report.connected
    assert report.component_count == 1
    assert report.oval_intervals == []


def test_real_section_needs_odd_degree():
    with pytest.raises(TopologyError):
        analyze_real_section(_uni("z^4 - 1"))
    with pytest.raises(TopologyError):
        analyze_real_section(_uni("-z^3 + 1"))


@pytest.mark.parametrize("subject, x, t_range", [
    ("trivial-cubic", 0.2, (-2.0, 0.0)),
    ("trivial-cubic", -0.2, (-1.0, 0.5)),
    ("eq415", 4, (-2.0, 11.0)),
    ("quintic-two-bubbles", 7, (-14.0, 0.0)),
])
def test_every_discriminant_root_is_an_event(subject, x, t_range):
    curve = named_curve(subject)
    roots = discriminant_roots(curve, x, t_range)
    events = sweep(curve, x, t_range)
    assert roots
    assert sorted({e.t_star for e in events}) == roots
    assert len(events) == len(roots)


def test_complex_collision_gives_no_event(hamdef_log):
    assert discriminant_roots(TWIN_ROOTS, 0, (-1.0, 1.0)) == [pytest.approx(0.0, abs=1e-9)]
    assert sweep(TWIN_ROOTS, 0, (-1.0, 1.0)) == []
    assert any("complex double root" in r.getMessage() for r in hamdef_log.records)


def test_simultaneous_double_roots_give_one_event_each():
    assert discriminant_roots(TWIN_ROOTS, 0, (-5.0, -3.0)) == [pytest.approx(-4.0, abs=1e-9)]
    events = sweep(TWIN_ROOTS, 0, (-5.0, -3.0))
    assert [e.kind for e in events] == [ACNODE, ACNODE]
    assert [e.z_location for e in events] == [pytest.approx(-1.0, abs=1e-6), pytest.approx(1.0, abs=1e-6)]
    assert events[0].t_star == events[1].t_star
    assert all((e.before, e.after) == (3, 1) for e in events)


@pytest.mark.parametrize("point, label", [
    ((0, 0), "C"),
    ((0, -4), "boundary"),
    ((0, -4.5), "D3"),
    ((0, -3.5), "C"),
])
def test_quintic_regions_follow_the_real_section(point, label):
    assert region_classify(TWIN_ROOTS, point) == label


def test_component_formula_matches_dense_sampling(rng):
    for _ in range(500):
        P = draw(lambda: random_polynomial(rng, rng.choice((1, 3, 5, 7)), positive_leading=True),
                 lambda Q: well_separated(Q, 3 * grid_step(Q)))
        count = analyze_real_section(P).component_count
        assert count == (len(isolate_real_roots(P)) + 1) // 2
        assert count == dense_component_count(P), str(P)


@pytest.mark.parametrize("subject, window", [
    ("trivial-cubic", (-2, 2, -3, 1)),
    ("eq415", (-2, 12, -5, 10)),
])
def test_discriminant_sign_predicts_connectedness(rng, subject, window):
    curve = named_curve(subject)
    delta = curve_discriminant(curve)
    x_min, x_max, t_min, t_max = window
    checked = 0
    while checked < 200:
        x = Fraction(rng.randint(10 * x_min, 10 * x_max), 10)
        t = Fraction(rng.randint(10 * t_min, 10 * t_max), 10)
        value = delta.evaluate({"x": x, "t": t})
        if value == 0:
            continue
        report = analyze_real_section(curve.slice(x=x, t=t))
        assert report.connected == (value < 0)
        assert region_classify(curve, (x, t)) == ("C" if value < 0 else "D")
        checked += 1

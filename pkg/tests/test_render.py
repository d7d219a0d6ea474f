import pytest
import sympy as sp

from oracles import cauchy_bound
from polycore import UniPoly, parse_poly
from presets import figure_frames, figure_phase, named_curve
from render import (EmptyRenderWarning, FrameSpec, Polyline, RenderError, animate, contour_implicit, emit_csv,
                    emit_svg, frame_polylines, phase_svg, render_frame, sample_hyperelliptic)


def _uni(text: str) -> UniPoly:
    return UniPoly.from_multipoly(parse_poly(text), "z")


def test_branches_are_mirror_images():
    polylines = sample_hyperelliptic(_uni("z^3 - z"), (-2.0, 2.0, -3.0, 3.0), 50)
    assert [line.branch_id for line in polylines] == [0, 1, 2, 3]
    for upper, lower in zip(polylines[::2], polylines[1::2]):
        assert [h for h, _ in upper.points] == [h for h, _ in lower.points]
        assert [v for _, v in upper.points] == [-v for _, v in lower.points]


def test_branches_end_on_roots():
    polylines = sample_hyperelliptic(_uni("z^3 - z"), (-2.0, 2.0, -3.0, 3.0), 50)
    oval = polylines[0]
    assert oval.points[0][0] == pytest.approx(-1.0, abs=1e-12)
    assert oval.points[-1][0] == pytest.approx(0.0, abs=1e-12)
    assert polylines[2].points[-1][0] == pytest.approx(2.0)


@pytest.mark.parametrize("P", [
    _uni("z^3 - z"),
    _uni("z^5 - 5*z^3 + 4*z"),
    _uni("(z - 1)^2*(z + 2)"),
    _uni("(z + 1)^2*(z - 2)"),
    named_curve("quintic-two-bubbles").slice(x=7, t=sp.Rational(-103, 10)),
], ids=["oval", "quintic", "node", "acnode", "two-bubbles"])
def test_polyline_ends_are_roots(P):
    half = cauchy_bound(P) + 1.0
    polylines = sample_hyperelliptic(P, (-half, half, -1.0, 1.0), 30)
    ends = [p for line in polylines for p in (line.points[0], line.points[-1])]
    interior = [(h, v) for h, v in ends if -half < h < half]
    assert interior
    for h, v in interior:
        assert abs(float(P(sp.Rational(float(h))))) <= 1e-9
        assert abs(v) <= 1e-4


def test_isolated_point_is_its_own_polyline():
    polylines = sample_hyperelliptic(_uni("(z + 1)^2*(z - 2)"), (-2.0, 3.0, -3.0, 3.0), 20)
    isolated = [line for line in polylines if line.isolated]
    assert len(isolated) == 1
    assert isolated[0].points[0] == (pytest.approx(-1.0), 0.0)


def test_node_lies_on_the_branch():
    polylines = sample_hyperelliptic(_uni("(z - 1)^2*(z + 2)"), (-3.0, 3.0, -5.0, 5.0), 40)
    assert len(polylines) == 2
    assert any(h == pytest.approx(1.0, abs=1e-12) and v == pytest.approx(0.0, abs=1e-6)
               for h, v in polylines[0].points)


def test_empty_frame_warns():
    with pytest.warns(EmptyRenderWarning):
        polylines = sample_hyperelliptic(_uni("z^3 - 100"), (-2.0, 2.0, -1.0, 1.0), 20)
    assert polylines == []


def test_contour_of_circle():
    lines = contour_implicit(parse_poly("p1^2 + p2^2 - 1"), (-2.0, 2.0, -2.0, 2.0), 64)
    assert lines
    for line in lines:
        for h, v in line.points:
            assert (h * h + v * v) ** 0.5 == pytest.approx(1.0, abs=0.01)


@pytest.mark.parametrize("text", ["p1^2 + p2^2 - 1", "p1^2 + 2*p2^2 - p1*p2 - 1"])
def test_contour_tightens_with_the_grid(text):
    f = parse_poly(text)
    func = f.lambdify(("p1", "p2"))

    def worst(grid_n):
        lines = contour_implicit(f, (-2.0, 2.0, -2.0, 2.0), grid_n)
        return max(abs(float(func(h, v))) for line in lines for h, v in line.points)

    coarse, fine = worst(64), worst(128)
    assert fine < coarse / 2


def test_polyline_validation():
    with pytest.raises(RenderError):
        Polyline(((0.0, 0.0),), branch_id=0)
    with pytest.raises(RenderError):
        Polyline(((0.0, 0.0), (1.0, 1.0)), branch_id=0, isolated=True)


@pytest.mark.parametrize("kwargs", [
    {"window": (1.0, -1.0, 0.0, 1.0)},
    {"window": (0.0, 1.0, 0.0, 1.0), "samples": 1},
    {"window": (0.0, 1.0, 0.0, 1.0), "grid_n": 4},
])
def test_frame_spec_validation(kwargs):
    with pytest.raises(RenderError):
        FrameSpec(curve=None, params={}, **kwargs)


def test_csv_header_and_rows():
    polylines = sample_hyperelliptic(_uni("z^3 - z"), (-2.0, 2.0, -3.0, 3.0), 10)
    lines = emit_csv(polylines).splitlines()
    assert lines[0] == "branch,z,p"
    assert len(lines) == 1 + sum(len(p.points) for p in polylines)
    assert lines[1].startswith("0,")


def test_svg_document():
    frame = figure_frames("fig4")[0]
    document = render_frame(frame)
    assert document.startswith("<svg")
    assert document.rstrip().endswith("</svg>")
    assert "<path" in document
    assert frame.title in document


def test_isolated_point_drawn_as_circle():
    frame = FrameSpec(curve=None, params={}, window=(-2.0, 3.0, -3.0, 3.0))
    polylines = sample_hyperelliptic(_uni("(z + 1)^2*(z - 2)"), frame.window, 20)
    assert "<circle" in emit_svg(polylines, frame)


def test_frames_render_identically_in_parallel():
    frames = figure_frames("fig6", samples=100)
    serial = animate(frames, workers=1)
    parallel = animate(frames, workers=3)
    assert len(serial) == 3
    assert serial == parallel


def test_conic_frame_is_contoured():
    frame = figure_frames("fig1", grid_n=64)[0]
    assert frame_polylines(frame)


def test_phase_svg_marks_critical_points():
    diagram = figure_phase("fig7", grid_n=64)
    document = phase_svg(diagram, title="eq415")
    assert ">M</text>" in document
    assert ">m</text>" in document

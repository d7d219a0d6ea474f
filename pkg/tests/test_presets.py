import pytest

from curves import ACNODE, CUSP, NODE
from presets import curve_names, figure_frames, figure_names, figure_phase, get_figure, named_curve
from render import RenderError
from systems import UnknownSystemError
from topology import analyze_real_section


def test_every_figure_resolves():
    for name in figure_names():
        figure = get_figure(name)
        assert figure.curve in curve_names()
        assert figure.to_json()["name"] == name


def test_unknown_names():
    with pytest.raises(UnknownSystemError):
        get_figure("fig99")
    with pytest.raises(UnknownSystemError):
        named_curve("sextic")


def test_frame_counts():
    assert len(figure_frames("fig8")) == 6
    assert len(figure_frames("fig10")) == 9
    assert len(figure_frames("bubble-oscillation")) == 12


def test_kind_mismatch():
    with pytest.raises(RenderError):
        figure_frames("fig3")
    with pytest.raises(RenderError):
        figure_phase("fig4")


def test_titles_rename_and_hide_parameters():
    assert figure_frames("fig2")[0].title == "x1=-1, t=1"
    assert figure_frames("fig11")[0].title == "y=1.5, x=1/3"


def test_burgers_hopf_frames_pass_acnode_cusp_node():
    kinds = []
    for frame in figure_frames("fig11"):
        P = named_curve("singular-cubic").slice(**frame.params)
        kinds.append([s.kind for s in analyze_real_section(P).singular_points])
    assert kinds == [[ACNODE], [CUSP], [NODE]]


def test_quintic_frames_reach_three_components():
    counts = []
    curve = named_curve("quintic-two-bubbles")
    for frame in figure_frames("fig10"):
        counts.append(analyze_real_section(curve.slice(**frame.params)).component_count)
    assert counts[0] == 1
    assert max(counts) == 3

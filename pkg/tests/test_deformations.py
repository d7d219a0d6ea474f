from fractions import Fraction

import pytest

from deformations import (batch_residuals, eccentricity_residuals, eccentricity_transform, gauge_rescale,
                          gauge_shift, hodograph_jacobian, hodograph_residual, integrate_characteristics,
                          liouville_residual, residual, verify_family)
from polycore import MultiPoly, parse_poly, sort_variables
from systems import (CUBIC_FRAME, LIOUVILLE_PRESETS, PLANE_FRAME, CharacteristicBlowUp, DeformationError,
                     FrameMismatchError, HamiltonianSpec, SolutionAnsatz, UnboundFieldError, UnknownSystemError,
                     family_catalog, get_system, liouville_preset, solution_family, system_catalog)


@pytest.mark.parametrize("system, family", [
    ("dkdv3", "kdv3-linear"),
    ("dkdv3", "kdv3-quadratic"),
    ("dkdv5", "kdv5-linear"),
    ("dkdv5-alt", "kdv5-linear"),
    ("benney-2p1", "benney-simple"),
    ("ellipse-uv", "hirota-satsuma"),
    ("burgers-hopf", "bh-rational"),
])
def test_core_families_solve_their_systems(system, family):
    report = verify_family(system, family)
    assert report.ok, report.to_json()
    assert all(r.is_zero() for r in report.residuals)


@pytest.mark.parametrize("family", [f.name for f in family_catalog()])
def test_every_catalog_family_verifies(family):
    assert verify_family(None, family).ok


def test_numeric_constants_verify_too():
    report = verify_family(None, "kdv3-linear", {"a": 1, "b": 1, "c": 1, "d": -1})
    assert report.ok
    assert report.liouville is not None and report.liouville.is_zero()


def test_broken_ansatz_is_reported():
    ansatz = SolutionAnsatz({"u3": 0, "u1": "t", "u0": "t"})
    residuals = residual(get_system("dkdv3"), ansatz)
    assert not all(r.is_zero() for r in residuals)
    # u1_t - u0_x = 1
    assert residuals[1] == MultiPoly.constant(1)


def test_unbound_field():
    with pytest.raises(UnboundFieldError):
        residual(get_system("dkdv3"), SolutionAnsatz({"u3": 0, "u1": "t"}))


def test_system_catalog_lookup():
    names = [s.name for s in system_catalog()]
    assert len(names) == len(set(names))
    assert {"dkdv3", "dkdv5", "benney-2p1", "ellipse-uv", "ellipse-eccentricity", "burgers-hopf"} <= set(names)
    assert all(get_system(name).name == name for name in names)
    assert get_system("ellipse-eccentricity").numeric_only
    with pytest.raises(UnknownSystemError):
        get_system("kdv7")


def test_numeric_only_system_has_no_polynomial_residuals():
    ansatz = SolutionAnsatz({"epsilon": "t", "v": "x", "alpha8": 0})
    with pytest.raises(DeformationError):
        residual(get_system("ellipse-eccentricity"), ansatz)


def test_family_constant_errors():
    with pytest.raises(DeformationError):
        solution_family("kdv3-linear", {"a": 1})
    with pytest.raises(DeformationError):
        solution_family("benney-simple", {"k": 1})
    with pytest.raises(UnknownSystemError):
        solution_family("kdv7")


@pytest.mark.parametrize("name", [n for n in LIOUVILLE_PRESETS if n != "parabola-burgers-hopf"])
def test_liouville_presets_vanish(name):
    preset = liouville_preset(name)
    assert liouville_residual(preset.f, preset.spec, preset.frame).is_zero()


def test_burgers_hopf_liouville_vanishes_on_solution():
    report = verify_family(None, "bh-rational", {"y0": 1})
    assert report.liouville_preset == "parabola-burgers-hopf"
    assert report.liouville.is_zero()


PLANE_VARIABLES = sort_variables(("p1", "p2", "x1", "x2", "t"))


def _random_plane_poly(rng) -> MultiPoly:
    terms = {}
    for _ in range(rng.randint(1, 4)):
        monomial = tuple(rng.randint(0, 2) for _ in PLANE_VARIABLES)
        terms[monomial] = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
    return MultiPoly.from_terms(terms, PLANE_VARIABLES)


def test_liouville_residual_is_linear_in_f(rng):
    for _ in range(40):
        spec = HamiltonianSpec(_random_plane_poly(rng), _random_plane_poly(rng))
        f, g = _random_plane_poly(rng), _random_plane_poly(rng)
        a, b = Fraction(rng.randint(-5, 5), rng.randint(1, 3)), Fraction(rng.randint(-5, 5), rng.randint(1, 3))
        combined = liouville_residual(f * a + g * b, spec)
        assert combined == liouville_residual(f, spec) * a + liouville_residual(g, spec) * b


def test_frame_mismatch():
    spec = HamiltonianSpec(parse_poly("p"))
    with pytest.raises(FrameMismatchError):
        liouville_residual(parse_poly("p1^2 + p^2"), spec, CUBIC_FRAME)


def test_gauge_shift_keeps_residual():
    preset = liouville_preset("hyperbola-benney")
    shifted = gauge_shift(preset.spec, preset.f, parse_poly("x1"))
    assert shifted.H != preset.spec.H
    assert liouville_residual(preset.f, shifted, PLANE_FRAME).is_zero()


@pytest.mark.parametrize("beta", ["2", "1 + x1"])
def test_gauge_rescale(beta):
    preset = liouville_preset("hyperbola-benney")
    f, spec = gauge_rescale(preset.spec, preset.f, parse_poly(beta))
    assert f == parse_poly(beta) * preset.f
    assert liouville_residual(f, spec, PLANE_FRAME).is_zero()


def test_gauge_rescale_needs_polynomial_multiplier():
    preset = liouville_preset("hyperbola-benney")
    # beta_t + {beta, H} = -1 is not divisible by p2
    with pytest.raises(DeformationError):
        gauge_rescale(preset.spec, preset.f, parse_poly("p2"))
    with pytest.raises(DeformationError):
        gauge_rescale(preset.spec, preset.f, MultiPoly.constant(0))


def test_hodograph_of_hirota_satsuma():
    x_of = parse_poly("(1/2)*(u^2 - 3*v)")
    t_of = parse_poly("u")
    assert not hodograph_jacobian(x_of, t_of).is_zero()
    assert all(r.is_zero() for r in hodograph_residual(x_of, t_of, parse_poly("u")))


def test_hodograph_warns_on_degenerate_map(hamdef_log):
    hodograph_residual(parse_poly("u"), parse_poly("u"), parse_poly("1"))
    assert any("zero Jacobian" in r.getMessage() for r in hamdef_log.records)


def test_eccentricity_form_of_hirota_satsuma():
    r1, r2 = eccentricity_residuals(lambda u, v: u, lambda x, t: t, lambda x, t: -2 * x / 3 + t * t / 3, 0.3, 0.5)
    assert abs(r1) < 1e-6
    assert abs(r2) < 1e-9


def test_eccentricity_residual_is_second_order():
    def r1(h):
        return eccentricity_residuals(lambda u, v: u, lambda x, t: t, lambda x, t: -2 * x / 3 + t * t / 3,
                                      0.3, 0.5, h=h)[0]

    coarse, fine = abs(r1(0.02)), abs(r1(0.01))
    assert fine > 0
    assert 3.5 < coarse / fine < 4.5


def test_eccentricity_transform():
    eps, v = eccentricity_transform(0.6, 2.0)
    assert eps == pytest.approx(0.8)
    assert v == 2.0
    assert eccentricity_transform(1.0, 3.0) == (0.0, 3.0)
    for u in (1.5, 0.0, -0.5):
        with pytest.raises(DeformationError):
            eccentricity_transform(u, 0.0)


def test_characteristics_stay_on_trivial_cubic():
    preset = liouville_preset("cubic", {"a": 0, "b": 0, "c": 0, "d": "1/2"})
    z, t0, x0 = 0.5, 0.0, 1.0
    start = {"z": z, "x": x0, "p": (z ** 3 + t0 * z + x0) ** 0.5}
    trajectory = integrate_characteristics(preset.spec, preset.f, start, t0, 2.0, 0.05, preset.frame)
    assert trajectory.max_abs_f <= 1e-8
    # x' = -z
    assert trajectory.states[-1, trajectory.variables.index("x")] == pytest.approx(x0 - 2.0 * z)


def test_characteristics_fourth_order():
    preset = liouville_preset("circle-dvn")
    start = {"p1": 1.0, "p2": 0.0, "x1": 0.0, "x2": 0.0}
    coarse = integrate_characteristics(preset.spec, preset.f, start, 0.0, 2.0, 0.1).max_abs_f
    fine = integrate_characteristics(preset.spec, preset.f, start, 0.0, 2.0, 0.05).max_abs_f
    assert fine < 1e-6
    assert coarse / fine >= 12


def test_characteristics_csv_header():
    preset = liouville_preset("hyperbola-benney")
    start = {"p1": 1.0, "p2": -1.0, "x1": 0.0, "x2": 0.0}
    trajectory = integrate_characteristics(preset.spec, preset.f, start, 0.0, 1.0, 0.25)
    lines = trajectory.to_csv().splitlines()
    assert lines[0] == "t,p1,p2,x1,x2,f"
    assert len(lines) == 6


def test_characteristic_blow_up():
    spec = HamiltonianSpec(parse_poly("-x1*p1^2"))
    start = {"p1": 1.0, "p2": 0.0, "x1": 0.0, "x2": 0.0}
    with pytest.raises(CharacteristicBlowUp) as info:
        integrate_characteristics(spec, parse_poly("p1^2 + p2^2 - 1"), start, 0.0, 3.0, 0.25)
    assert 0.5 < info.value.last_good_time < 3.0
    assert info.value.trajectory is not None


def test_characteristic_input_errors():
    preset = liouville_preset("circle-dvn")
    with pytest.raises(DeformationError):
        integrate_characteristics(preset.spec, preset.f, {"p1": 1.0, "p2": 0.0, "x1": 0.0, "x2": 0.0}, 0, 1, 0)
    with pytest.raises(DeformationError):
        integrate_characteristics(preset.spec, preset.f, {"p1": 1.0}, 0, 1, 0.1)


def test_batch_residuals_keep_input_order():
    system = get_system("dkdv3")
    ansatz_list = [solution_family("kdv3-linear", {"a": k, "b": 0, "c": 0, "d": 1}) for k in range(4)]
    ansatz_list.append(SolutionAnsatz({"u3": 0, "u1": "t", "u0": "t"}))
    serial = batch_residuals(system, ansatz_list, workers=1)
    parallel = batch_residuals(system, ansatz_list, workers=3)
    assert serial == parallel
    assert [all(r.is_zero() for r in rs) for rs in parallel] == [True] * 4 + [False]

from fractions import Fraction

import pytest
import sympy as sp

from curves import (ACNODE, CUSP, NODE, ConicCurve, CubicCurve, CurveError, QuinticCurve, classify_double_root,
                    cubic_discriminant, curve_from_json, curve_to_json, genus, parameterize_singular_cubic,
                    quintic_discriminant, singular_cubic, singular_cubic_residual, singular_locus_point,
                    weierstrass_moduli)
from oracles import product, random_rational
from polycore import (UniPoly, discriminant_uni, isolate_real_roots, parse_poly, refine_root, squarefree_decompose,
                      substitute)


def _uni(text: str) -> UniPoly:
    return UniPoly.from_multipoly(parse_poly(text), "z")


def test_trivial_cubic_moduli_are_the_times():
    m = weierstrass_moduli(CubicCurve(0, "t", "x"))
    assert m.g2 == parse_poly("t")
    assert m.g3 == parse_poly("x")


def test_zero_cubic_moduli():
    m = weierstrass_moduli(CubicCurve())
    assert m.g2 == 0 and m.g3 == 0


def test_discriminant_expansion_term_for_term():
    delta = cubic_discriminant(CubicCurve("u3", "u1", "u0"))
    expected = parse_poly("16*u3^2*u1^2 - 64*u1^3 - 432*u0^2 - 64*u3^3*u0 + 288*u0*u3*u1")
    assert delta == expected


def test_discriminant_of_linear_family():
    curve = CubicCurve(2, "3 - 2*t", "4 + 2*t - 2*x")
    expected = parse_poly("-64*(50 + 95*t^2 - 70*x + 100*t - 90*x*t - 8*t^3 + 27*x^2)")
    assert cubic_discriminant(curve) == expected


def test_discriminant_is_sixteen_times_raw(rng):
    for _ in range(1000):
        u3, u1, u0 = (Fraction(rng.randint(-20, 20), rng.randint(1, 7)) for _ in range(3))
        delta = cubic_discriminant(CubicCurve(u3, u1, u0)).constant_value()
        raw = discriminant_uni(UniPoly("z", (u0, u1, u3, 1)))
        assert delta == 16 * raw


def _monic(rng, degree: int) -> UniPoly:
    return UniPoly("z", tuple(random_rational(rng) for _ in range(degree)) + (1,))


def _real_multiple_root(P: UniPoly) -> bool:
    return any(iv.multiplicity >= 2 for iv in isolate_real_roots(P))


def _any_multiple_root(P: UniPoly) -> bool:
    return any(m >= 2 for F, m in squarefree_decompose(P) if F.degree >= 1)


def test_cubic_discriminant_vanishes_on_real_double_roots(rng):
    for _ in range(300):
        if rng.random() < 0.4:
            linear = _monic(rng, 1)
            P = product([linear, linear, _monic(rng, 1)])
        else:
            P = _monic(rng, 3)
        delta = cubic_discriminant(CubicCurve(P.coefficients[2], P.coefficients[1], P.coefficients[0]))
        assert delta.is_zero() == _real_multiple_root(P)


def test_quintic_discriminant_sees_complex_double_roots(rng):
    for _ in range(200):
        kind = rng.choice(("random", "real", "complex"))
        if kind == "real":
            linear = _monic(rng, 1)
            P = product([linear, linear, _monic(rng, 3)])
        elif kind == "complex":
            b, c = random_rational(rng), Fraction(rng.randint(1, 9))
            quadratic = UniPoly("z", (b * b / 4 + c, b, 1))
            P = product([quadratic, quadratic, _monic(rng, 1)])
        else:
            P = _monic(rng, 5)
        u0, u1, u2, u3, u4 = P.coefficients[:5]
        delta = quintic_discriminant(QuinticCurve(u4, u3, u2, u1, u0))
        assert delta.is_zero() == (_real_multiple_root(P) or _any_multiple_root(P))
        if kind == "complex":
            assert delta.is_zero() and not _real_multiple_root(P)


def test_singular_locus_point_gives_factored_cubic():
    for s in (sp.Rational(1, 3), sp.Rational(-2), sp.Rational(7, 5)):
        x, t = singular_locus_point(s)
        P = CubicCurve(0, "t", "x").slice(x=x, t=t)
        assert P.to_multipoly() == singular_cubic(s).to_multipoly()


@pytest.mark.parametrize("text, kind", [
    ("(z - 1)^2*(z + 2)", NODE),
    ("(z + 1)^2*(z - 2)", ACNODE),
    ("z^3", CUSP),
])
def test_classify_double_root_exact(text, kind):
    P = _uni(text)
    root = [iv for iv in isolate_real_roots(P) if iv.multiplicity >= 2][0]
    assert classify_double_root(P, root).kind == kind


def test_classify_double_root_numeric():
    P = _uni("(z - 1)^2*(z + 2)")
    assert classify_double_root(P, 1.0, multiplicity=2).kind == NODE
    with pytest.raises(CurveError):
        classify_double_root(P, 1.0)
    with pytest.raises(CurveError):
        classify_double_root(P, -2.0, multiplicity=1)


def test_singular_cubic_parameterization_is_exact():
    assert singular_cubic_residual().is_zero()
    z_of_q, p_of_q = parameterize_singular_cubic(sp.Rational(1, 2))
    for q in (sp.Rational(-1), sp.Rational(0), sp.Rational(3, 2)):
        z, p = z_of_q(q), p_of_q(q)
        assert p ** 2 == (z + 1) * (z - sp.Rational(1, 2)) ** 2


def test_burgers_hopf_slice_has_acnode_at_minus_half():
    P = CubicCurve(0, "-3*u^2", "2*u^3").slice(u=sp.Rational(-1, 2))
    double = [iv for iv in isolate_real_roots(P) if iv.multiplicity == 2][0]
    assert classify_double_root(P, double).kind == ACNODE
    assert refine_root(P, double, 1e-12) == pytest.approx(-0.5, abs=1e-11)


@pytest.mark.parametrize("text, expected", [
    ("z^3 - z", 1),
    ("(z - 1)^2*(z + 2)", 0),
    ("z^3", 0),
    ("z^5 - 5*z^3 + 4*z", 2),
    ("(z - 1)^2*(z^3 + z + 1)", 1),
    ("(z - 1)^2*(z + 1)^2*z", 0),
])
def test_genus(text, expected):
    assert genus(_uni(text)) == expected


def test_genus_rejects_other_degrees():
    with pytest.raises(CurveError):
        genus(_uni("z^4 + 1"))


def test_slice_needs_every_parameter():
    with pytest.raises(CurveError):
        CubicCurve(0, "t", "x").slice(t=1)


def test_bind_keeps_the_family():
    bound = QuinticCurve(1, "3 + t", "t/2 + x", 0, "x").bind(x=7)
    assert isinstance(bound, QuinticCurve)
    assert bound.parameters() == ("t",)


def test_conic_needs_quadratic_part():
    with pytest.raises(CurveError):
        ConicCurve(d=1, e=1)
    hyperbola = ConicCurve(c=1, d="t", h="x2 + (1/2)*t^2")
    assert hyperbola.slice(t=0, x2=-1) == parse_poly("p1*p2 - 1")


def test_curve_json_round_trip():
    curve = curve_from_json({"family": "cubic", "u1": "t", "u0": "x"})
    assert curve == CubicCurve(0, "t", "x")
    assert curve_from_json(curve_to_json(curve)) == curve


@pytest.mark.parametrize("obj", [
    {"family": "sextic"},
    {"family": "cubic", "u5": "1"},
    ["cubic"],
])
def test_curve_json_errors(obj):
    with pytest.raises(CurveError):
        curve_from_json(obj)


def test_cubic_polynomial_vanishes_on_parameterization():
    f = CubicCurve(0, "-3*u^2", "2*u^3").polynomial()
    q = parse_poly("q")
    u = parse_poly("u")
    assert substitute(f, {"z": q ** 2 - u * 2, "p": q ** 3 - u * q * 3}).is_zero()

"""
Plane curve families: the quadric (conic) family in (p1, p2), and the
hyperelliptic cubic and quintic families p^2 = P(z).

Coefficients are MultiPoly in the deformation parameters (x, t, or anything
else); ``slice`` binds them to numbers and returns the univariate P(z).
"""
import logging
from dataclasses import dataclass, fields
from typing import Dict, Mapping, Optional, Tuple, Union

import sympy as sp

from polycore import (MultiPoly, PolynomialError, RootInterval, UniPoly, discriminant_uni,
                      exact_divide, format_poly, parse_poly, squarefree_decompose, substitute,
                      to_rational)

logger = logging.getLogger("HamDef.Curves")

Coefficient = Union[MultiPoly, str, int, float]

NODE = "node"
CUSP = "cusp"
ACNODE = "acnode"


class CurveError(Exception):
    """Custom exception for curve construction and classification errors."""
    pass


def _coerce(value: Coefficient) -> MultiPoly:
    if isinstance(value, MultiPoly):
        return value
    if isinstance(value, str):
        return parse_poly(value)
    try:
        return MultiPoly.constant(value)
    except PolynomialError as e:
        raise CurveError(f"Invalid curve coefficient {value!r}: {e}") from e


class _CoefficientCurve:
    """Shared behaviour of the dataclass curve families."""
    FAMILY = ""

    def __post_init__(self):
        for f in fields(self):
            object.__setattr__(self, f.name, _coerce(getattr(self, f.name)))

    def coefficients(self) -> Dict[str, MultiPoly]:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def parameters(self) -> Tuple[str, ...]:
        """Names of the deformation parameters the coefficients depend on."""
        names = set()
        for c in self.coefficients().values():
            names.update(c.used_variables())
        return tuple(sorted(names))

    def bind(self, **params) -> "_CoefficientCurve":
        """Returns the same family with some parameters bound to values."""
        bound = {k: substitute(v, params) for k, v in self.coefficients().items()}
        return type(self)(**bound)

    def to_json(self) -> dict:
        data = {"family": self.FAMILY}
        data.update({k: format_poly(v) for k, v in self.coefficients().items()})
        return data


@dataclass(frozen=True, eq=True)
class CubicCurve(_CoefficientCurve):
    """p^2 = z^3 + u3*z^2 + u1*z + u0."""
    u3: Coefficient = 0
    u1: Coefficient = 0
    u0: Coefficient = 0

    FAMILY = "cubic"
    DEGREE = 3

    def P(self) -> MultiPoly:
        z = MultiPoly.variable("z")
        return z ** 3 + self.u3 * z ** 2 + self.u1 * z + self.u0

    def polynomial(self) -> MultiPoly:
        return MultiPoly.variable("p") ** 2 - self.P()

    def slice(self, **params) -> UniPoly:
        """P(z) with every parameter bound, e.g. ``curve.slice(x=0.2, t=-1)``."""
        return _slice(self.P(), params)


@dataclass(frozen=True, eq=True)
class QuinticCurve(_CoefficientCurve):
    """p^2 = z^5 + u4*z^4 + u3*z^3 + u2*z^2 + u1*z + u0."""
    u4: Coefficient = 0
    u3: Coefficient = 0
    u2: Coefficient = 0
    u1: Coefficient = 0
    u0: Coefficient = 0

    FAMILY = "quintic"
    DEGREE = 5

    def P(self) -> MultiPoly:
        z = MultiPoly.variable("z")
        return (z ** 5 + self.u4 * z ** 4 + self.u3 * z ** 3
                + self.u2 * z ** 2 + self.u1 * z + self.u0)

    def polynomial(self) -> MultiPoly:
        return MultiPoly.variable("p") ** 2 - self.P()

    def slice(self, **params) -> UniPoly:
        return _slice(self.P(), params)


@dataclass(frozen=True, eq=True)
class ConicCurve(_CoefficientCurve):
    """a*p1^2 + b*p2^2 + c*p1*p2 + d*p1 + e*p2 + h = 0."""
    a: Coefficient = 0
    b: Coefficient = 0
    c: Coefficient = 0
    d: Coefficient = 0
    e: Coefficient = 0
    h: Coefficient = 0

    FAMILY = "conic"

    def __post_init__(self):
        super().__post_init__()
        if self.a.is_zero() and self.b.is_zero() and self.c.is_zero():
            raise CurveError("Conic has no quadratic part (a = b = c = 0)")

    def polynomial(self) -> MultiPoly:
        p1 = MultiPoly.variable("p1")
        p2 = MultiPoly.variable("p2")
        return (self.a * p1 ** 2 + self.b * p2 ** 2 + self.c * p1 * p2
                + self.d * p1 + self.e * p2 + self.h)

    def slice(self, **params) -> MultiPoly:
        """The numeric conic in (p1, p2) at the given parameter values."""
        f = substitute(self.polynomial(), {k: to_rational(v) for k, v in params.items()})
        extra = set(f.used_variables()) - {"p1", "p2"}
        if extra:
            raise CurveError(f"Unbound conic parameters: {sorted(extra)}")
        return f


HyperellipticCurve = Union[CubicCurve, QuinticCurve]


def _slice(P: MultiPoly, params: Mapping) -> UniPoly:
    unbound = set(P.used_variables()) - {"z"} - set(params)
    if unbound:
        raise CurveError(f"Unbound curve parameters: {sorted(unbound)}")
    return P.to_unipoly("z", params)


@dataclass(frozen=True)
class Moduli:
    """Weierstrass invariants of the depressed cubic."""
    g2: MultiPoly
    g3: MultiPoly


@dataclass(frozen=True)
class SingularPoint:
    """A real multiple root of P, i.e. a singular point (z, 0) of p^2 = P(z)."""
    z: float
    kind: str
    multiplicity: int = 2

    def to_json(self) -> dict:
        return {"z": self.z, "kind": self.kind, "multiplicity": self.multiplicity}


def weierstrass_moduli(c: CubicCurve) -> Moduli:
    """
    Moduli g2, g3 of the cubic after the shift z -> z - u3/3.

    Args:
        c: Cubic curve.

    Returns:
        g2 = u1 - u3^2/3 and g3 = u0 + 2*u3^3/27 - u3*u1/3, exactly.
    """
    third = sp.Rational(1, 3)
    g2 = c.u1 - c.u3 ** 2 * third
    g3 = c.u0 + c.u3 ** 3 * sp.Rational(2, 27) - c.u3 * c.u1 * third
    return Moduli(g2=g2, g3=g3)


def cubic_discriminant(c: CubicCurve) -> MultiPoly:
    """
    Discriminant -16*(4*g2^3 + 27*g3^2) of the cubic family.

    Positive where P has three distinct real roots (disconnected real section),
    negative where it has one.
    """
    m = weierstrass_moduli(c)
    return (m.g2 ** 3 * 4 + m.g3 ** 2 * 27) * (-16)


def quintic_discriminant(q: QuinticCurve) -> MultiPoly:
    """Raw discriminant of P(z) in the parameters of the family."""
    return discriminant_uni(q.P(), var="z")


def _cofactor_sign_exact(P: UniPoly, root: RootInterval) -> int:
    exact = P.exact()
    if root.is_exact():
        r = root.lo
        zr = UniPoly(P.variable, (-r, 1)).to_multipoly()
        try:
            Q = exact_divide(exact.to_multipoly(), zr ** root.multiplicity)
        except PolynomialError as e:
            raise CurveError(f"{r} is not a root of multiplicity {root.multiplicity}: {e}") from e
        value = Q.to_unipoly(P.variable)(r)
        return int(sp.sign(value))
    # P = (z - r)^2 Q with Q free of roots on the isolating interval.
    for endpoint in (root.lo, root.hi):
        value = exact(endpoint)
        if value != 0:
            return int(sp.sign(value))
    raise CurveError(f"Isolating interval [{root.lo}, {root.hi}] has roots at both ends")


def classify_double_root(P: UniPoly, root: Union[RootInterval, float],
                         multiplicity: Optional[int] = None) -> SingularPoint:
    """
    Classifies a multiple real root r of P.

    Writes P = (z - r)^m * Q. m >= 3 gives a cusp; for m = 2 the sign of
    Q(r) separates a node (two real branches) from an acnode (isolated point).

    Args:
        P: The slice polynomial.
        root: Either an exact isolating interval (as from isolate_real_roots),
            or a float location, in which case multiplicity is required.
        multiplicity: Root multiplicity; defaults to root.multiplicity.

    Returns:
        The singular point with its kind.

    Raises:
        CurveError: If the root is simple or the multiplicity is unknown.
    """
    if isinstance(root, RootInterval):
        m = root.multiplicity if multiplicity is None else multiplicity
        location = root.midpoint
    else:
        if multiplicity is None:
            raise CurveError("Multiplicity is required for a numeric root location")
        m = multiplicity
        location = float(root)
    if m < 2:
        raise CurveError(f"z = {location:.6g} is not a multiple root (multiplicity {m})")
    if m >= 3:
        return SingularPoint(z=location, kind=CUSP, multiplicity=m)

    if isinstance(root, RootInterval):
        sign = _cofactor_sign_exact(P, root)
    else:
        # Q(r) = P''(r) / 2 for a double root.
        value = float(P.derivative(2)(location)) / 2.0
        sign = (value > 0) - (value < 0)
    if sign == 0:
        raise CurveError(f"Cofactor vanishes at z = {location:.6g}; multiplicity is higher than {m}")
    kind = NODE if sign > 0 else ACNODE
    logger.debug(f"Double root at z={location:.10g} classified as {kind}")
    return SingularPoint(z=location, kind=kind, multiplicity=m)


def parameterize_singular_cubic(u) -> Tuple[UniPoly, UniPoly]:
    """
    Rational parameterization of p^2 = (z + 2u)(z - u)^2.

    Returns:
        (z(q), p(q)) = (q^2 - 2u, q^3 - 3u*q).
    """
    u = to_rational(u)
    z_of_q = UniPoly("q", (-2 * u, 0, 1))
    p_of_q = UniPoly("q", (0, -3 * u, 0, 1))
    return z_of_q, p_of_q


def parameterize_singular_cubic_symbolic() -> Tuple[MultiPoly, MultiPoly]:
    """The same parameterization with u kept as a variable: polynomials in (q, u)."""
    q = MultiPoly.variable("q")
    u = MultiPoly.variable("u")
    return q ** 2 - u * 2, q ** 3 - u * q * 3


def singular_cubic_residual() -> MultiPoly:
    """p^2 - (z + 2u)(z - u)^2 after substituting the parameterization; identically zero."""
    z = MultiPoly.variable("z")
    p = MultiPoly.variable("p")
    u = MultiPoly.variable("u")
    curve = p ** 2 - (z + u * 2) * (z - u) ** 2
    z_of_q, p_of_q = parameterize_singular_cubic_symbolic()
    return substitute(curve, {"z": z_of_q, "p": p_of_q})


def genus(P: UniPoly) -> int:
    """
    Geometric genus of p^2 = P(z) for deg P in {3, 5}.

    Starts from (deg - 1) // 2 and subtracts deg(F) * floor(m / 2) for each
    square-free factor F of multiplicity m.

    Raises:
        CurveError: For the zero polynomial or a degree other than 3 or 5.
    """
    if P.is_zero():
        raise CurveError("Genus of the zero polynomial is undefined")
    if P.degree not in (3, 5):
        raise CurveError(f"Genus is defined here for degree 3 or 5, got {P.degree}")
    g = (P.degree - 1) // 2
    for factor, m in squarefree_decompose(P):
        g -= factor.degree * (m // 2)
    return max(g, 0)


def singular_locus_point(s) -> Tuple[sp.Rational, sp.Rational]:
    """Point (x, t) = (2s^3, -3s^2) of the discriminant locus of z^3 + t*z + x."""
    s = to_rational(s)
    return 2 * s ** 3, -3 * s ** 2


def singular_cubic(s) -> UniPoly:
    """(z - s)^2 (z + 2s): the trivial cubic at singular_locus_point(s)."""
    s = to_rational(s)
    factored = (UniPoly("z", (-s, 1)).to_multipoly() ** 2) * UniPoly("z", (2 * s, 1)).to_multipoly()
    return factored.to_unipoly("z")


_FAMILIES = {cls.FAMILY: cls for cls in (CubicCurve, QuinticCurve, ConicCurve)}


def curve_from_json(obj: Mapping) -> Union[CubicCurve, QuinticCurve, ConicCurve]:
    """
    Builds a curve from ``{"family": "cubic", "u3": "0", "u1": "t", "u0": "x"}``.

    Raises:
        CurveError: For an unknown family or unexpected coefficient keys.
    """
    if not isinstance(obj, Mapping):
        raise CurveError(f"Curve description must be an object, got {type(obj).__name__}")
    family = obj.get("family")
    cls = _FAMILIES.get(family)
    if cls is None:
        raise CurveError(f"Unknown curve family '{family}' (known: {sorted(_FAMILIES)})")
    allowed = {f.name for f in fields(cls)}
    coeffs = {k: v for k, v in obj.items() if k != "family"}
    unknown = set(coeffs) - allowed
    if unknown:
        raise CurveError(f"Unknown coefficients for {family} curve: {sorted(unknown)}")
    try:
        return cls(**coeffs)
    except PolynomialError as e:
        raise CurveError(f"Invalid {family} curve: {e}") from e


def curve_to_json(curve) -> dict:
    return curve.to_json()

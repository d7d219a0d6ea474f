"""
Catalog data for the deformation machinery.

Holds the hydrodynamic-type systems (residual expressions written with jet
symbols such as ``u3_x`` or ``d_x1_x2``), the closed-form solution families,
the Hamiltonian specifications and the conjugate-pair frames that the
Liouville equation is written in.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import sympy as sp

from curves import CubicCurve, HyperellipticCurve, QuinticCurve
from polycore import (MultiPoly, ParseError, PolynomialError, differentiate, format_poly, parse_expression,
                      parse_poly, substitute, variable_key)

logger = logging.getLogger("HamDef.Systems")


class DeformationError(Exception):
    """Custom exception for deformation systems, ansätze and Liouville checks."""
    pass


class UnknownSystemError(DeformationError):
    """Raised for an unknown system, family or preset name."""
    pass


class UnboundFieldError(DeformationError):
    """Raised when an ansatz leaves an unknown function of the system unbound."""
    pass


class FrameMismatchError(DeformationError):
    """Raised when a polynomial uses coordinates from a different frame."""
    pass


class CharacteristicBlowUp(DeformationError):
    """Raised when a characteristic reaches a non-finite state."""

    def __init__(self, message: str, last_good_time: float, trajectory=None):
        super().__init__(message)
        self.last_good_time = last_good_time
        self.trajectory = trajectory


# --- jets ----------------------------------------------------------------

def jet_name(field_name: str, derivatives: Sequence[str]) -> str:
    """Canonical jet symbol: derivative variables in global variable order."""
    if not derivatives:
        return field_name
    return "_".join([field_name, *sorted(derivatives, key=variable_key)])


def parse_jet(name: str, fields: Sequence[str], independents: Sequence[str]) -> Optional[Tuple[str, Tuple[str, ...]]]:
    """
    Splits ``d_x1_x2`` into ("d", ("x1", "x2")).

    Returns:
        (field, derivative variables), or None if name is not a jet of the fields.
    """
    head, *tail = name.split("_")
    if head not in fields:
        return None
    if any(v not in independents for v in tail):
        return None
    return head, tuple(tail)


# --- systems -------------------------------------------------------------

@dataclass(frozen=True)
class HydroSystem:
    """A first-order quasilinear PDE system; every residual expression = 0."""
    name: str
    fields: Tuple[str, ...]
    independents: Tuple[str, ...]
    residuals: Tuple[str, ...]
    constants: Tuple[str, ...] = ()
    description: str = ""
    numeric_only: bool = False
    constant_presets: Mapping[str, Mapping[str, str]] = field(default_factory=dict)

    def __post_init__(self):
        for name in self.fields:
            if "_" in name:
                raise DeformationError(f"Field name '{name}' must not contain '_' (reserved for jets)")
        if self.numeric_only:
            return
        allowed = set(self.independents) | set(self.constants)
        for text in self.residuals:
            try:
                expr = parse_expression(text)
            except ParseError as e:
                raise DeformationError(f"System '{self.name}': bad residual '{text}': {e}") from e
            for symbol in expr.free_symbols:
                if symbol.name in allowed:
                    continue
                if parse_jet(symbol.name, self.fields, self.independents) is None:
                    raise DeformationError(f"System '{self.name}': unknown symbol '{symbol.name}' in '{text}'")

    def residual_polynomials(self) -> List[MultiPoly]:
        if self.numeric_only:
            raise DeformationError(f"System '{self.name}' is numeric-only and has no polynomial residuals")
        return [parse_poly(text) for text in self.residuals]

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "fields": list(self.fields),
            "independents": list(self.independents),
            "constants": list(self.constants),
            "residuals": list(self.residuals),
            "numeric_only": self.numeric_only,
            "description": self.description,
        }


_SYSTEMS: Tuple[HydroSystem, ...] = (
    HydroSystem(
        name="quadric-constrained",
        fields=("d", "h", "delta", "nu"),
        independents=("x1", "x2", "t"),
        constants=("alpha", "beta"),
        residuals=(
            "d_t + delta*d_x1 - 2*beta*d*d_x2 + 2*alpha*h_x1 - nu_x2",
            "h_t + h_x1*delta + h*delta_x1 - 2*beta*(d_x2*h + d*h_x2)",
            "delta_x2 - 2*alpha*d_x1",
            "nu_x1 - 2*beta*h_x2",
        ),
        description="hyperbola p1*p2 + d*p1 + h under a quadratic Hamiltonian",
        constant_presets={
            "benney": {"alpha": "0", "beta": "1/2"},
            "dds": {"alpha": "-1/2", "beta": "1/2"},
        },
    ),
    HydroSystem(
        name="benney-2p1",
        fields=("d", "h"),
        independents=("x1", "x2", "t"),
        residuals=(
            "d_x1_t - (d_x1*d_x2 + d*d_x1_x2) - h_x2_x2",
            "h_t - (d_x2*h + d*h_x2)",
        ),
        description="(2+1)-dimensional one-layer Benney system",
    ),
    HydroSystem(
        name="dkp",
        fields=("h", "alpha10"),
        independents=("x1", "x2", "t"),
        residuals=(
            "h_t + (3/2)*h*h_x1 - alpha10_x2",
            "3*h_x2 + 4*alpha10_x1",
        ),
        description="dispersionless Kadomtsev-Petviashvili equation (parabola p1^2 + p2 + h)",
    ),
    HydroSystem(
        name="dvn",
        fields=("h", "alpha8", "alpha9"),
        independents=("x1", "x2", "t"),
        residuals=(
            "h_t + h_x1*alpha8 + h*alpha8_x1 + h_x2*alpha9 + h*alpha9_x2",
            "3*h_x1 - alpha8_x1 + alpha9_x2",
            "3*h_x2 + alpha8_x2 + alpha9_x1",
        ),
        description="dispersionless Veselov-Novikov equation (circle p1^2 + p2^2 + h)",
    ),
    HydroSystem(
        name="ellipse",
        fields=("a", "b", "alpha1", "alpha2", "alpha8", "alpha9"),
        independents=("x1", "x2", "t"),
        residuals=(
            "a_t + alpha8_x1*a + alpha8*a_x1 + alpha1_x1*a^3 + 3*alpha1*a^2*a_x1 + alpha9*a_x2",
            "b_t + alpha9_x2*b + alpha9*b_x2 + alpha2_x2*b^3 + 3*alpha2*b^2*b_x2 + alpha8*b_x1",
            "a^4*alpha1_x2 - b^4*alpha2_x1",
            "a^4*alpha1_x2 + a^2*alpha8_x2 + b^2*alpha9_x1",
            "a*(alpha2_x2*b^3 + 3*alpha2*b^2*b_x2) + b*(alpha1_x1*a^3 + 3*alpha1*a^2*a_x1)"
            " - 3*alpha1*a^3*b_x1 - 3*alpha2*b^3*a_x2",
        ),
        description="ellipse p1^2/a^2 + p2^2/b^2 - 1 under a cubic Hamiltonian",
    ),
    HydroSystem(
        name="ellipse-11",
        fields=("a", "b", "alpha8"),
        independents=("x", "t"),
        residuals=(
            "a_t + alpha8_x*a + alpha8*a_x + 3*b^2*b_x",
            "b_t + alpha8*b_x",
        ),
        description="ellipse system with cyclic x2",
    ),
    HydroSystem(
        name="ellipse-uv",
        fields=("u", "v", "alpha8"),
        independents=("x", "t"),
        residuals=(
            "u_t + alpha8_x*u + alpha8*u_x + (3/2)*v_x",
            "v_t + alpha8*v_x",
        ),
        description="ellipse system in u = a/b, v = b^2",
    ),
    HydroSystem(
        name="ellipse-eccentricity",
        fields=("epsilon", "v", "alpha8"),
        independents=("x", "t"),
        residuals=(
            "epsilon_t - sqrt(1 - epsilon^2)/epsilon * (alpha8*sqrt(1 - epsilon^2) + (3/2)*v)_x",
            "v_t + alpha8*v_x",
        ),
        numeric_only=True,
        description="ellipse system in eccentricity form; checked numerically",
    ),
    HydroSystem(
        name="hodograph-linear",
        fields=("x", "t", "alpha8"),
        independents=("u", "v"),
        residuals=(
            "x_u - alpha8*t_u",
            "x_v + ((3/2) + u*alpha8_v)*t_u - (alpha8 + u*alpha8_u)*t_v",
        ),
        description="linear system for x(u, v), t(u, v) after the hodograph transformation",
    ),
    HydroSystem(
        name="dkdv3",
        fields=("u3", "u1", "u0"),
        independents=("x", "t"),
        residuals=(
            "u3_t - u1_x + (3/2)*u3*u3_x",
            "u1_t - u0_x + u1*u3_x + (1/2)*u3*u1_x",
            "u0_t + u0*u3_x + (1/2)*u3*u0_x",
        ),
        description="three-component dispersionless KdV system (cubic curves)",
    ),
    HydroSystem(
        name="burgers-hopf",
        fields=("u",),
        independents=("x", "y"),
        residuals=("u_x - 3*u*u_y",),
        description="Burgers-Hopf equation (singular cubics)",
    ),
    HydroSystem(
        name="dkdv5",
        fields=("u4", "u3", "u2", "u1", "u0"),
        independents=("x", "t"),
        residuals=(
            "u4_t - u3_x + u4*u4_x",
            "u3_t - u2_x + (1/2)*u4*u3_x + u4_x*u3",
            "u2_t - u1_x + (1/2)*u4*u2_x + u4_x*u2",
            "u1_t - u0_x + (1/2)*u4*u1_x + u4_x*u1",
            "u0_t + (1/2)*u4*u0_x + u4_x*u0",
        ),
        description="five-component dispersionless KdV system (quintic curves), printed coefficients",
    ),
    HydroSystem(
        name="dkdv5-alt",
        fields=("u4", "u3", "u2", "u1", "u0"),
        independents=("x", "t"),
        residuals=(
            "u4_t - u3_x + (3/2)*u4*u4_x",
            "u3_t - u2_x + (1/2)*u4*u3_x + u4_x*u3",
            "u2_t - u1_x + (1/2)*u4*u2_x + u4_x*u2",
            "u1_t - u0_x + (1/2)*u4*u1_x + u4_x*u1",
            "u0_t + (1/2)*u4*u0_x + u4_x*u0",
        ),
        description="five-component dispersionless KdV system, leading coefficient from the Liouville equation",
    ),
)


def system_catalog() -> List[HydroSystem]:
    """Returns the built-in systems, in catalog order."""
    return list(_SYSTEMS)


def get_system(name: str) -> HydroSystem:
    for system in _SYSTEMS:
        if system.name == name:
            return system
    raise UnknownSystemError(f"Unknown system '{name}' (known: {[s.name for s in _SYSTEMS]})")


# --- solution ansätze ----------------------------------------------------

Value = Union[MultiPoly, str, int, float]


def _as_poly(value: Value) -> MultiPoly:
    if isinstance(value, MultiPoly):
        return value
    if isinstance(value, str):
        return parse_poly(value)
    return MultiPoly.constant(value)


@dataclass(frozen=True)
class SolutionAnsatz:
    """
    Bindings of the unknown functions of a system.

    A field with an entry in ``denominators`` is the rational function
    bindings[f] / denominators[f]. ``constants`` binds the system's declared
    constants; unbound ones stay symbolic.
    """
    bindings: Mapping[str, MultiPoly]
    constants: Mapping[str, MultiPoly] = field(default_factory=dict)
    denominators: Mapping[str, MultiPoly] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "bindings", {k: _as_poly(v) for k, v in self.bindings.items()})
        object.__setattr__(self, "constants", {k: _as_poly(v) for k, v in self.constants.items()})
        denominators = {k: _as_poly(v) for k, v in self.denominators.items()}
        for name, den in denominators.items():
            if den.is_zero():
                raise DeformationError(f"Zero denominator for field '{name}'")
        object.__setattr__(self, "denominators", denominators)

    def is_rational(self) -> bool:
        return bool(self.denominators)

    def to_json(self) -> dict:
        data = {k: format_poly(v) for k, v in self.bindings.items()}
        if self.denominators:
            data["denominators"] = {k: format_poly(v) for k, v in self.denominators.items()}
        if self.constants:
            data["constants"] = {k: format_poly(v) for k, v in self.constants.items()}
        return data


def ansatz_from_json(obj: Mapping, system: HydroSystem) -> SolutionAnsatz:
    """
    Reads an inline ansatz ``{"u3": "0", "u1": "t", "u0": "x", "constants": {...}}``.

    Raises:
        DeformationError: For keys that are not fields of the system, or bad text.
    """
    if not isinstance(obj, Mapping):
        raise DeformationError(f"Ansatz must be an object, got {type(obj).__name__}")
    bindings = {k: v for k, v in obj.items() if k not in ("constants", "denominators")}
    unknown = set(bindings) - set(system.fields)
    if unknown:
        raise DeformationError(f"Ansatz binds unknown fields {sorted(unknown)} for system '{system.name}'")
    try:
        return SolutionAnsatz(
            bindings=bindings,
            constants=dict(obj.get("constants", {})),
            denominators=dict(obj.get("denominators", {})),
        )
    except PolynomialError as e:
        raise DeformationError(f"Invalid ansatz for '{system.name}': {e}") from e


@dataclass(frozen=True)
class FamilyDef:
    """A closed-form solution family; bindings are text over the free constants."""
    name: str
    system: str
    free_constants: Tuple[str, ...]
    bindings: Mapping[str, str]
    denominators: Mapping[str, str] = field(default_factory=dict)
    system_constants: Mapping[str, str] = field(default_factory=dict)
    liouville: Optional[str] = None
    description: str = ""


_FAMILIES: Tuple[FamilyDef, ...] = (
    FamilyDef(
        name="kdv3-linear",
        system="dkdv3",
        free_constants=("a", "b", "c", "d"),
        bindings={
            "u3": "2*a",
            "u1": "a^2 + 2*b + 2*d*t",
            "u0": "2*(a*b + c) + 2*d*x - 2*a*d*t",
        },
        liouville="cubic",
        description="cubic curves, coefficients linear in x and t",
    ),
    FamilyDef(
        name="kdv3-quadratic",
        system="dkdv3",
        free_constants=("A", "B", "C", "D", "E"),
        bindings={
            "u3": "2*A + 2*E*t",
            "u1": "-E^2*t^2 + 2*D*t + 2*E*x + A^2 + 2*B",
            "u0": "-(A*E^2 + E*D)*t^2 - (2*A*D + 2*A^2*E)*t + 2*A*E*x + 2*D*x + 2*C + 2*A*B",
        },
        liouville="cubic-quadratic",
        description="cubic curves, coefficients quadratic in t",
    ),
    FamilyDef(
        name="kdv5-linear",
        system="dkdv5",
        free_constants=("A0", "A1", "A2", "C0", "C1", "C2", "C3", "C4"),
        bindings={
            "u4": "C4",
            "u3": "C3 + A2*t",
            "u2": "C2 + (A1 - (1/2)*A2*C4)*t + A2*x",
            "u1": "C1 + (A0 - (1/2)*A1*C4)*t + A1*x",
            "u0": "C0 - (1/2)*A0*C4*t + A0*x",
        },
        liouville="quintic",
        description="quintic curves, coefficients linear in x and t",
    ),
    FamilyDef(
        name="hirota-satsuma",
        system="ellipse-uv",
        free_constants=(),
        bindings={"u": "t", "v": "-(2/3)*x + (1/3)*t^2", "alpha8": "t"},
        description="dispersionless Hirota-Satsuma solution, alpha8 = u",
    ),
    FamilyDef(
        name="bh-rational",
        system="burgers-hopf",
        free_constants=("y0",),
        bindings={"u": "y0 - y"},
        denominators={"u": "3*x"},
        liouville="parabola-burgers-hopf",
        description="rational Burgers-Hopf solution u = (y0 - y)/(3x)",
    ),
    FamilyDef(
        name="benney-simple",
        system="benney-2p1",
        free_constants=(),
        bindings={"d": "t", "h": "x2 + (1/2)*t^2"},
        liouville="hyperbola-benney",
        description="simplest Benney solution",
    ),
    FamilyDef(
        name="benney-constrained",
        system="quadric-constrained",
        free_constants=(),
        bindings={"d": "t", "h": "x2 + (1/2)*t^2", "delta": "0", "nu": "x1 + x2"},
        system_constants={"alpha": "0", "beta": "1/2"},
        description="Benney solution inside the constrained quadric system",
    ),
    FamilyDef(
        name="dkp-simple",
        system="dkp",
        free_constants=(),
        bindings={"h": "x2", "alpha10": "-(3/4)*x1"},
        liouville="parabola-dkp",
        description="stationary parabola",
    ),
    FamilyDef(
        name="dvn-simple",
        system="dvn",
        free_constants=(),
        bindings={"h": "-1", "alpha8": "x2", "alpha9": "-x1"},
        liouville="circle-dvn",
        description="unit circle with a rotating Hamiltonian",
    ),
    FamilyDef(
        name="ellipse-circle",
        system="ellipse",
        free_constants=("r", "k1", "k2", "k8", "k9"),
        bindings={"a": "r", "b": "r", "alpha1": "k1", "alpha2": "k2", "alpha8": "k8", "alpha9": "k9"},
        description="constant circle of radius r",
    ),
    FamilyDef(
        name="ellipse-11-travelling",
        system="ellipse-11",
        free_constants=("c",),
        bindings={"a": "x - c*t", "b": "1", "alpha8": "c"},
        description="travelling wave of the semi-axis a",
    ),
    FamilyDef(
        name="hodograph-hirota-satsuma",
        system="hodograph-linear",
        free_constants=(),
        bindings={"x": "(1/2)*(u^2 - 3*v)", "t": "u", "alpha8": "u"},
        description="Hirota-Satsuma solution after the hodograph transformation",
    ),
)


def family_catalog() -> List[FamilyDef]:
    return list(_FAMILIES)


def get_family(name: str) -> FamilyDef:
    for family in _FAMILIES:
        if family.name == name:
            return family
    raise UnknownSystemError(f"Unknown solution family '{name}' (known: {[f.name for f in _FAMILIES]})")


def solution_family(name: str, constants: Optional[Mapping[str, Value]] = None) -> SolutionAnsatz:
    """
    Builds a closed-form solution ansatz.

    Args:
        name: Family name, e.g. "kdv3-linear".
        constants: None keeps every free constant symbolic. Otherwise a value
            (number, polynomial text or MultiPoly) for every free constant.

    Returns:
        The ansatz, with the family's fixed system constants attached.

    Raises:
        UnknownSystemError: For an unknown family.
        DeformationError: If a free constant is missing or unknown.
    """
    family = get_family(name)
    values: Dict[str, MultiPoly] = {}
    if constants is not None:
        missing = [c for c in family.free_constants if c not in constants]
        if missing:
            raise DeformationError(f"Family '{name}' is missing constants {missing}")
        unknown = set(constants) - set(family.free_constants)
        if unknown:
            raise DeformationError(f"Family '{name}' has no constants {sorted(unknown)}")
        try:
            values = {k: _as_poly(v) for k, v in constants.items()}
        except PolynomialError as e:
            raise DeformationError(f"Invalid constant for family '{name}': {e}") from e

    def build(texts: Mapping[str, str]) -> Dict[str, MultiPoly]:
        return {k: substitute(parse_poly(v), values) for k, v in texts.items()}

    ansatz = SolutionAnsatz(
        bindings=build(family.bindings),
        constants=dict(family.system_constants),
        denominators=build(family.denominators),
    )
    logger.debug(f"Built family '{name}' with {'numeric' if constants else 'symbolic'} constants")
    return ansatz


# --- Hamiltonians and frames ---------------------------------------------

@dataclass(frozen=True)
class HamiltonianSpec:
    """
    Hamiltonian H and Liouville multiplier alpha in ``f_t + {f, H} = alpha*f``.

    ``fields`` names unknown functions of the frame coordinates and time that
    appear in f, H or alpha (their derivatives are written as jets).
    """
    H: MultiPoly
    alpha: MultiPoly = field(default_factory=lambda: MultiPoly.constant(0))
    fields: Tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "H", _as_poly(self.H))
        object.__setattr__(self, "alpha", _as_poly(self.alpha))
        object.__setattr__(self, "fields", tuple(self.fields))


@dataclass(frozen=True)
class Frame:
    """Conjugate (momentum, coordinate) pairs plus the deformation time."""
    name: str
    pairs: Tuple[Tuple[str, str], ...]
    time: str

    @property
    def momenta(self) -> Tuple[str, ...]:
        return tuple(p for p, _ in self.pairs)

    @property
    def coordinates(self) -> Tuple[str, ...]:
        return tuple(x for _, x in self.pairs)

    @property
    def names(self) -> Tuple[str, ...]:
        return self.momenta + self.coordinates + (self.time,)


# Names that always denote a momentum or a coordinate of some frame.
CANONICAL_NAMES = frozenset({"p1", "p2", "p", "q", "x1", "x2", "x", "y"})

PLANE_FRAME = Frame("plane", (("p1", "x1"), ("p2", "x2")), "t")
CUBIC_FRAME = Frame("cubic", (("p", "x"),), "t")
BURGERS_FRAME = Frame("burgers", (("q", "y"),), "x")

FRAMES = {frame.name: frame for frame in (PLANE_FRAME, CUBIC_FRAME, BURGERS_FRAME)}


@dataclass(frozen=True)
class LiouvillePreset:
    name: str
    f: MultiPoly
    spec: HamiltonianSpec
    frame: Frame
    family: Optional[str] = None


def family_curve(family: str, constants: Optional[Mapping[str, Value]] = None) -> HyperellipticCurve:
    """
    The hyperelliptic curve whose coefficients are a solution family.

    Args:
        family: A family of the dkdv3 or dkdv5 systems, e.g. "kdv3-linear".
        constants: Values of the free constants (symbolic if None).

    Raises:
        DeformationError: If the family does not solve a dKdV system.
    """
    system = get_family(family).system
    ansatz = solution_family(family, constants)
    if system == "dkdv3":
        return CubicCurve(**{k: ansatz.bindings[k] for k in ("u3", "u1", "u0")})
    if system.startswith("dkdv5"):
        return QuinticCurve(**{k: ansatz.bindings[k] for k in ("u4", "u3", "u2", "u1", "u0")})
    raise DeformationError(f"Family '{family}' solves '{system}', not a dKdV system")


def _hyperelliptic_preset(name: str, family: str, lead_name: str,
                          constants: Optional[Mapping[str, Value]]) -> LiouvillePreset:
    """f = p^2 - P(z), H = (u_lead/2 - z)*p, alpha = -d(u_lead)/dx."""
    curve = family_curve(family, constants)
    z = MultiPoly.variable("z")
    p = MultiPoly.variable("p")
    lead = getattr(curve, lead_name)
    H = (lead * sp.Rational(1, 2) - z) * p
    alpha = -differentiate(lead.with_variables(set(lead.variables) | {"x"}), "x")
    return LiouvillePreset(name, curve.polynomial(), HamiltonianSpec(H, alpha), CUBIC_FRAME, family)


def liouville_preset(name: str, constants: Optional[Mapping[str, Value]] = None) -> LiouvillePreset:
    """
    Returns a certified Liouville triple (f, HamiltonianSpec, frame).

    Args:
        name: One of LIOUVILLE_PRESETS.
        constants: Constants for the underlying solution family (symbolic if None).

    Raises:
        UnknownSystemError: For an unknown preset.
    """
    if name == "cubic":
        return _hyperelliptic_preset(name, "kdv3-linear", "u3", constants)
    if name == "cubic-quadratic":
        return _hyperelliptic_preset(name, "kdv3-quadratic", "u3", constants)
    if name == "quintic":
        return _hyperelliptic_preset(name, "kdv5-linear", "u4", constants)
    if name == "hyperbola-benney":
        f = parse_poly("p1*p2 + t*p1 + x2 + (1/2)*t^2")
        H = parse_poly("(1/2)*p2^2 + x1 + x2")
        return LiouvillePreset(name, f, HamiltonianSpec(H), PLANE_FRAME, "benney-simple")
    if name == "parabola-dkp":
        f = parse_poly("p1^2 + p2 + x2")
        H = parse_poly("p1^3 + (3/2)*x2*p1 - (3/4)*x1")
        return LiouvillePreset(name, f, HamiltonianSpec(H), PLANE_FRAME, "dkp-simple")
    if name == "circle-dvn":
        f = parse_poly("p1^2 + p2^2 - 1")
        H = parse_poly("p1^3 - 3*p1*p2^2 + x2*p1 - x1*p2")
        return LiouvillePreset(name, f, HamiltonianSpec(H), PLANE_FRAME, "dvn-simple")
    if name == "parabola-burgers-hopf":
        f = parse_poly("z - q^2 + 2*u")
        H = parse_poly("q^3 - 3*u*q")
        return LiouvillePreset(name, f, HamiltonianSpec(H, fields=("u",)), BURGERS_FRAME, "bh-rational")
    raise UnknownSystemError(f"Unknown Liouville preset '{name}' (known: {list(LIOUVILLE_PRESETS)})")


LIOUVILLE_PRESETS = (
    "cubic", "cubic-quadratic", "quintic",
    "hyperbola-benney", "parabola-dkp", "circle-dvn", "parabola-burgers-hopf",
)

"""
Residual verification of hydrodynamic-type systems and of the Liouville
equation ``f_t + {f, H} = alpha*f``, gauge transformations of (H, alpha),
the hodograph and eccentricity forms of the ellipse system, and an RK4
integrator for the characteristics of H.
"""
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import sympy as sp

from polycore import MultiPoly, PolynomialError, differentiate, exact_divide, format_poly, substitute, to_rational
from systems import (CANONICAL_NAMES, PLANE_FRAME, CharacteristicBlowUp, DeformationError, Frame,
                     FrameMismatchError, HamiltonianSpec, HydroSystem, SolutionAnsatz, UnboundFieldError,
                     UnknownSystemError, get_family, get_system, jet_name, liouville_preset, parse_jet,
                     solution_family)
from utils import run_parallel

logger = logging.getLogger("HamDef.Deformations")

__all__ = [
    "DeformationError", "UnknownSystemError", "UnboundFieldError", "FrameMismatchError", "CharacteristicBlowUp",
    "residual", "evaluate_on_ansatz", "total_derivative", "poisson_bracket", "liouville_residual",
    "gauge_shift", "gauge_rescale", "hodograph_jacobian", "hodograph_residual", "eccentricity_transform",
    "eccentricity_residuals", "integrate_characteristics", "Trajectory", "verify_family", "VerificationReport",
    "batch_residuals",
]


def _partial(poly: MultiPoly, var: str) -> MultiPoly:
    """Partial derivative that treats an absent variable as a constant direction."""
    if var not in poly.variables:
        return MultiPoly.constant(0)
    return differentiate(poly, var)


def total_derivative(poly: MultiPoly, var: str, fields: Sequence[str] = (),
                     independents: Sequence[str] = ()) -> MultiPoly:
    """
    Derivative along var, with the chain rule applied to field jets.

    A field jet ``u_x`` occurring in poly contributes ``(d poly / d u_x) * u_x_var``
    when var is one of the independents the fields depend on.
    """
    result = _partial(poly, var)
    if var not in independents:
        return result
    for name in poly.used_variables():
        jet = parse_jet(name, fields, independents)
        if jet is None:
            continue
        field_name, derivatives = jet
        extended = MultiPoly.variable(jet_name(field_name, derivatives + (var,)))
        result = result + differentiate(poly, name) * extended
    return result


def _sympy_jet(expr: sp.Expr, derivatives: Sequence[str]) -> sp.Expr:
    for var in derivatives:
        expr = sp.diff(expr, sp.Symbol(var))
    return expr


def evaluate_on_ansatz(poly: MultiPoly, ansatz: SolutionAnsatz, fields: Sequence[str],
                       independents: Sequence[str]) -> MultiPoly:
    """
    Substitutes an ansatz (and its jets) into a jet polynomial.

    For rational ansätze the result is the numerator of the reduced fraction,
    so that zero still certifies the identity.

    Raises:
        UnboundFieldError: If poly mentions a field the ansatz does not bind.
    """
    jets: Dict[str, Tuple[str, Tuple[str, ...]]] = {}
    for name in poly.used_variables():
        jet = parse_jet(name, fields, independents)
        if jet is not None:
            jets[name] = jet
    unbound = sorted({f for f, _ in jets.values() if f not in ansatz.bindings})
    if unbound:
        raise UnboundFieldError(f"Ansatz does not bind fields {unbound}")
    constant_values = dict(ansatz.constants)

    if not ansatz.is_rational():
        bindings = {}
        for name, (field_name, derivatives) in jets.items():
            value = ansatz.bindings[field_name]
            for var in derivatives:
                value = _partial(value, var)
            bindings[name] = value
        bindings.update({c: v for c, v in constant_values.items() if c not in bindings})
        return substitute(poly, bindings)

    replacement = {}
    for name, (field_name, derivatives) in jets.items():
        numerator = ansatz.bindings[field_name].as_expr()
        denominator = ansatz.denominators.get(field_name)
        value = numerator / denominator.as_expr() if denominator is not None else numerator
        replacement[sp.Symbol(name)] = _sympy_jet(value, derivatives)
    for c, v in constant_values.items():
        replacement.setdefault(sp.Symbol(c), v.as_expr())
    expr = sp.cancel(sp.together(poly.as_expr().xreplace(replacement)))
    numerator, _ = sp.fraction(expr)
    try:
        return MultiPoly(sp.expand(numerator))
    except PolynomialError as e:
        raise DeformationError(f"Residual numerator is not polynomial: {e}") from e


def residual(system: HydroSystem, ansatz: SolutionAnsatz) -> List[MultiPoly]:
    """
    Substitutes an ansatz into every residual expression of a system.

    Args:
        system: Target system.
        ansatz: Bindings for every unknown function.

    Returns:
        One canonical MultiPoly per residual; all zero iff the ansatz solves the system.

    Raises:
        UnboundFieldError: If a field of the system is unbound.
        DeformationError: For numeric-only systems.
    """
    missing = [f for f in system.fields if f not in ansatz.bindings]
    if missing:
        raise UnboundFieldError(f"Ansatz for '{system.name}' leaves fields {missing} unbound")
    polys = system.residual_polynomials()
    results = [evaluate_on_ansatz(p, ansatz, system.fields, system.independents) for p in polys]
    nonzero = sum(1 for r in results if not r.is_zero())
    logger.debug(f"System '{system.name}': {nonzero}/{len(results)} nonzero residuals")
    return results


# --- Liouville equation --------------------------------------------------

def _check_frame(frame: Frame, **polys: MultiPoly):
    allowed = set(frame.names)
    for label, poly in polys.items():
        foreign = (set(poly.used_variables()) & CANONICAL_NAMES) - allowed
        if foreign:
            raise FrameMismatchError(
                f"{label} uses {sorted(foreign)}, which are not in the '{frame.name}' frame {list(frame.names)}")


def poisson_bracket(a: MultiPoly, b: MultiPoly, frame: Frame = PLANE_FRAME, fields: Sequence[str] = ()) -> MultiPoly:
    """{a, b} = sum over pairs of a_x * b_p - a_p * b_x."""
    independents = frame.coordinates + (frame.time,)
    result = MultiPoly.constant(0)
    for p, x in frame.pairs:
        a_x = total_derivative(a, x, fields, independents)
        b_x = total_derivative(b, x, fields, independents)
        result = result + a_x * _partial(b, p) - _partial(a, p) * b_x
    return result


def liouville_residual(f: MultiPoly, spec: HamiltonianSpec, frame: Frame = PLANE_FRAME) -> MultiPoly:
    """
    Residual f_t + {f, H} - alpha*f of the Liouville equation.

    Args:
        f: Curve polynomial.
        spec: Hamiltonian and multiplier.
        frame: Conjugate pairs and time variable.

    Returns:
        The exact residual; zero certifies a Hamiltonian deformation.

    Raises:
        FrameMismatchError: If f, H or alpha use coordinates of another frame.
    """
    _check_frame(frame, f=f, H=spec.H, alpha=spec.alpha)
    independents = frame.coordinates + (frame.time,)
    f_t = total_derivative(f, frame.time, spec.fields, independents)
    return f_t + poisson_bracket(f, spec.H, frame, spec.fields) - spec.alpha * f


def gauge_shift(spec: HamiltonianSpec, f: MultiPoly, g: MultiPoly, frame: Frame = PLANE_FRAME) -> HamiltonianSpec:
    """H -> H + g*f, alpha -> alpha + {f, g}; same curve, same residual."""
    _check_frame(frame, f=f, g=g)
    bracket = poisson_bracket(f, g, frame, spec.fields)
    return HamiltonianSpec(spec.H + g * f, spec.alpha + bracket, spec.fields)


def gauge_rescale(spec: HamiltonianSpec, f: MultiPoly, beta: MultiPoly,
                  frame: Frame = PLANE_FRAME) -> Tuple[MultiPoly, HamiltonianSpec]:
    """
    f -> beta*f with alpha -> alpha + (beta_t + {beta, H}) / beta.

    Raises:
        DeformationError: If beta is zero or the division is not exact.
    """
    if beta.is_zero():
        raise DeformationError("Rescaling factor must be nonzero")
    _check_frame(frame, f=f, beta=beta)
    independents = frame.coordinates + (frame.time,)
    numerator = total_derivative(beta, frame.time, spec.fields, independents) + poisson_bracket(
        beta, spec.H, frame, spec.fields)
    try:
        shift = exact_divide(numerator, beta)
    except PolynomialError as e:
        raise DeformationError(f"Rescaling by {format_poly(beta)} leaves a non-polynomial multiplier: {e}") from e
    return beta * f, HamiltonianSpec(spec.H, spec.alpha + shift, spec.fields)


# --- hodograph and eccentricity forms -------------------------------------

def hodograph_jacobian(x_of: MultiPoly, t_of: MultiPoly) -> MultiPoly:
    """x_u * t_v - x_v * t_u."""
    return _partial(x_of, "u") * _partial(t_of, "v") - _partial(x_of, "v") * _partial(t_of, "u")


def hodograph_residual(x_of: MultiPoly, t_of: MultiPoly, alpha8: MultiPoly) -> List[MultiPoly]:
    """
    Residuals of the linear system satisfied by x(u, v), t(u, v).

    Logs a warning when the map (u, v) -> (x, t) has identically zero Jacobian,
    since such a pair cannot be inverted back to u(x, t), v(x, t).
    """
    if hodograph_jacobian(x_of, t_of).is_zero():
        logger.warning("Hodograph map has identically zero Jacobian; it is not invertible")
    ansatz = SolutionAnsatz({"x": x_of, "t": t_of, "alpha8": alpha8})
    return residual(get_system("hodograph-linear"), ansatz)


def eccentricity_transform(u: float, v: float) -> Tuple[float, float]:
    """
    (u, v) -> (epsilon, v) with epsilon = sqrt(1 - u^2), for 0 < u <= 1.

    Raises:
        DeformationError: If u > 1 (no real ellipse) or u <= 0.
    """
    if u > 1:
        raise DeformationError(f"Eccentricity undefined for u = {u:.6g} > 1")
    if not u > 0:
        raise DeformationError(f"Axis ratio u must be positive, got {u:.6g}")
    return float(np.sqrt(1.0 - u * u)), float(v)


def eccentricity_residuals(alpha8: Callable[[float, float], float], u_fn: Callable[[float, float], float],
                           v_fn: Callable[[float, float], float], x: float, t: float,
                           h: float = 1e-4) -> Tuple[float, float]:
    """
    Central-difference residuals of the eccentricity system at (x, t).

    Args:
        alpha8: alpha8(u, v).
        u_fn, v_fn: A solution u(x, t), v(x, t) of the (u, v) system with 0 < u < 1.
        x, t: Sample point.
        h: Difference step; the residuals are O(h^2).

    Returns:
        (epsilon-equation residual, v-equation residual).
    """
    def eps(xx, tt):
        return eccentricity_transform(u_fn(xx, tt), v_fn(xx, tt))[0]

    def flux(xx, tt):
        e = eps(xx, tt)
        v = v_fn(xx, tt)
        return alpha8(u_fn(xx, tt), v) * np.sqrt(1.0 - e * e) + 1.5 * v

    e0 = eps(x, t)
    if e0 == 0:
        raise DeformationError(f"Eccentricity vanishes at (x={x}, t={t}); the system is singular there")
    eps_t = (eps(x, t + h) - eps(x, t - h)) / (2 * h)
    flux_x = (flux(x + h, t) - flux(x - h, t)) / (2 * h)
    r1 = eps_t - np.sqrt(1.0 - e0 * e0) / e0 * flux_x
    v_t = (v_fn(x, t + h) - v_fn(x, t - h)) / (2 * h)
    v_x = (v_fn(x + h, t) - v_fn(x - h, t)) / (2 * h)
    r2 = v_t + alpha8(u_fn(x, t), v_fn(x, t)) * v_x
    return float(r1), float(r2)


# --- characteristics ------------------------------------------------------

@dataclass
class Trajectory:
    """Sampled characteristic: times, states (columns = variables) and f along it."""
    variables: Tuple[str, ...]
    times: np.ndarray
    states: np.ndarray
    f_values: np.ndarray

    @property
    def max_abs_f(self) -> float:
        if self.f_values.size == 0:
            return 0.0
        return float(np.max(np.abs(self.f_values)))

    def to_csv(self) -> str:
        lines = [",".join(("t",) + self.variables + ("f",))]
        for t, state, fv in zip(self.times, self.states, self.f_values):
            values = [t, *state, fv]
            lines.append(",".join(f"{v:.17g}" for v in values))
        return "\n".join(lines) + "\n"


def integrate_characteristics(spec: HamiltonianSpec, f: MultiPoly, start: Mapping[str, float],
                              t0: float, t1: float, step: float, frame: Frame = PLANE_FRAME) -> Trajectory:
    """
    Integrates x' = H_p, p' = -H_x with the classical fourth-order Runge-Kutta scheme.

    Args:
        spec: Hamiltonian (alpha does not enter the characteristics).
        f: Curve polynomial, evaluated along the trajectory.
        start: Initial momenta and coordinates; any other entries (e.g. z)
            are held fixed as parameters.
        t0, t1: Time interval (t1 < t0 integrates backwards).
        step: Positive step size; the step count is round(|t1 - t0| / step).
        frame: Conjugate pairs and time variable.

    Returns:
        The sampled trajectory.

    Raises:
        DeformationError: For a non-positive step, missing start values, or
            Hamiltonians with unknown field functions.
        CharacteristicBlowUp: When the state becomes non-finite.
    """
    if not step > 0:
        raise DeformationError(f"Step must be positive, got {step}")
    if spec.fields:
        raise DeformationError(f"Cannot integrate with unknown field functions {list(spec.fields)}")
    _check_frame(frame, f=f, H=spec.H)
    variables = frame.momenta + frame.coordinates
    missing = [v for v in variables if v not in start]
    if missing:
        raise DeformationError(f"Start point is missing {missing}")
    params = {k: to_rational(v) for k, v in start.items() if k not in variables}
    H = substitute(spec.H, params)
    f_bound = substitute(f, params)
    args = (frame.time,) + variables
    try:
        rhs_polys = [-_partial(H, x) for x in frame.coordinates] + [_partial(H, p) for p in frame.momenta]
        rhs_funcs = [poly.lambdify(args) for poly in rhs_polys]
        f_func = f_bound.lambdify(args)
    except PolynomialError as e:
        raise DeformationError(f"Cannot build characteristic equations: {e}") from e

    def dydt(t: float, y: np.ndarray) -> np.ndarray:
        return np.array([float(func(t, *y)) for func in rhs_funcs], dtype=float)

    n = max(1, int(round(abs(t1 - t0) / step)))
    dt = (t1 - t0) / n
    times = t0 + dt * np.arange(n + 1)
    states = np.zeros((n + 1, len(variables)))
    states[0, :] = [float(start[v]) for v in variables]
    logger.debug(f"RK4 over [{t0}, {t1}] with {n} steps of {dt:.6g}")

    for i in range(n):
        y = states[i, :]
        t = times[i]
        k1 = dydt(t, y)
        k2 = dydt(t + dt / 2.0, y + dt * k1 / 2.0)
        k3 = dydt(t + dt / 2.0, y + dt * k2 / 2.0)
        k4 = dydt(t + dt, y + dt * k3)
        y_next = y + dt * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
        if not np.all(np.isfinite(y_next)):
            partial = _trajectory(variables, times[:i + 1], states[:i + 1], f_func)
            raise CharacteristicBlowUp(f"Characteristic blew up after t={t:.6g}", last_good_time=float(t),
                                       trajectory=partial)
        states[i + 1, :] = y_next

    return _trajectory(variables, times, states, f_func)


def _trajectory(variables, times, states, f_func) -> Trajectory:
    f_values = np.array([float(f_func(t, *y)) for t, y in zip(times, states)], dtype=float)
    return Trajectory(variables=tuple(variables), times=np.array(times), states=np.array(states), f_values=f_values)


# --- verification ---------------------------------------------------------

@dataclass
class VerificationReport:
    system: str
    family: Optional[str]
    residuals: List[MultiPoly]
    liouville: Optional[MultiPoly] = None
    liouville_preset: Optional[str] = None

    @property
    def ok(self) -> bool:
        if any(not r.is_zero() for r in self.residuals):
            return False
        return self.liouville is None or self.liouville.is_zero()

    def to_json(self) -> dict:
        return {
            "system": self.system,
            "family": self.family,
            "ok": self.ok,
            "residuals": [format_poly(r) for r in self.residuals],
            "liouville_preset": self.liouville_preset,
            "liouville": None if self.liouville is None else format_poly(self.liouville),
        }


def verify_family(system_name: Optional[str], family_name: str,
                  constants: Optional[Mapping] = None) -> VerificationReport:
    """
    Checks a built-in solution family against a system and its Liouville form.

    Args:
        system_name: Target system; None uses the family's own system.
        family_name: Built-in family.
        constants: Family constants; None keeps them symbolic.

    Returns:
        Report with every residual and, when the family has one, the residual
        of the matching Liouville preset.
    """
    family = get_family(family_name)
    system = get_system(system_name or family.system)
    ansatz = solution_family(family_name, constants)
    residuals = residual(system, ansatz)
    liouville = None
    if family.liouville:
        preset = liouville_preset(family.liouville, constants)
        liouville = liouville_residual(preset.f, preset.spec, preset.frame)
        if preset.spec.fields:
            independents = preset.frame.coordinates + (preset.frame.time,)
            liouville = evaluate_on_ansatz(liouville, ansatz, preset.spec.fields, independents)
    report = VerificationReport(system.name, family_name, residuals, liouville, family.liouville)
    logger.info(f"Verified family '{family_name}' against '{system.name}': {'ok' if report.ok else 'FAILED'}")
    return report


def batch_residuals(system: HydroSystem, ansatz_list: Sequence[SolutionAnsatz],
                    workers: int = 1) -> List[List[MultiPoly]]:
    """Residuals for many ansätze, computed in parallel, returned in input order."""
    return run_parallel(lambda a: residual(system, a), ansatz_list, workers, desc=f"Residuals {system.name}")

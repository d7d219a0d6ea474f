"""
Exact polynomial arithmetic over the rationals.

MultiPoly wraps a sympy ``Poly`` over ``QQ`` with a fixed global variable
order, so that two polynomials built from different sources compare by their
canonical term maps. UniPoly is the light-weight carrier used for slices
``P(z)`` of the curve families, with either exact ``Rational`` or ``float``
coefficients. Root isolation, resultants, discriminants and square-free
decomposition are delegated to sympy; everything here stays exact until
``refine_root`` hands back a float.
"""
import logging
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import sympy as sp
from sympy import QQ

logger = logging.getLogger("HamDef.Polycore")

# Global variable order; anything else sorts after these, alphabetically.
VARIABLE_ORDER = ("p1", "p2", "p", "z", "q", "x1", "x2", "x", "y", "t")

# Generator used when a polynomial has no variables at all (sympy needs one).
_ANCHOR = sp.Symbol("_hamdef_anchor")

Number = Union[int, float, Fraction, sp.Rational]


class PolynomialError(Exception):
    """Custom exception for polynomial arithmetic and root isolation errors."""
    pass


class ParseError(PolynomialError):
    """Raised when a polynomial expression cannot be parsed."""
    pass


def variable_key(name: str) -> Tuple[int, str]:
    if name in VARIABLE_ORDER:
        return (VARIABLE_ORDER.index(name), "")
    return (len(VARIABLE_ORDER), name)


def sort_variables(names: Iterable[str]) -> Tuple[str, ...]:
    """Returns the distinct variable names in canonical order."""
    return tuple(sorted(set(names), key=variable_key))


def _gens(variables: Sequence[str]) -> Tuple[sp.Symbol, ...]:
    if not variables:
        return (_ANCHOR,)
    return tuple(sp.Symbol(v) for v in variables)


def to_rational(value) -> sp.Rational:
    """
    Converts a number-like value to an exact sympy Rational.

    Floats are read through their shortest decimal representation, so
    ``0.2`` becomes ``1/5`` rather than the nearest binary fraction.

    Args:
        value: int, float, str, Fraction, sympy number or constant MultiPoly.

    Returns:
        The exact rational value.

    Raises:
        PolynomialError: If the value is not finite or not a rational number.
    """
    if isinstance(value, MultiPoly):
        return value.constant_value()
    if isinstance(value, sp.Rational):
        return value
    if isinstance(value, bool):
        raise PolynomialError(f"Cannot use boolean {value!r} as a coefficient")
    if isinstance(value, int):
        return sp.Integer(value)
    if isinstance(value, Fraction):
        return sp.Rational(value.numerator, value.denominator)
    if isinstance(value, (float, np.floating)):
        if not math.isfinite(value):
            raise PolynomialError(f"Non-finite value {value!r} has no rational form")
        return sp.Rational(repr(float(value)))
    if isinstance(value, str):
        try:
            return sp.Rational(value.strip())
        except (TypeError, ValueError) as e:
            raise PolynomialError(f"Cannot read '{value}' as a rational number: {e}") from e
    if isinstance(value, sp.Basic) and value.is_number:
        if value.is_Rational:
            return value
        if value.is_Float:
            return sp.Rational(repr(float(value)))
    raise PolynomialError(f"Cannot convert {value!r} to a rational number")


class MultiPoly:
    """
    Exact multivariate polynomial with rational coefficients.

    Variables are kept in the canonical global order. Arithmetic first unifies
    the variable sets of both operands by name.
    """
    __slots__ = ("_variables", "_poly")

    def __init__(self, expr=0, variables: Optional[Iterable[str]] = None):
        """
        Builds a polynomial from a sympy expression or a number.

        Args:
            expr: sympy expression, number or MultiPoly.
            variables: Variable names; defaults to the free symbols of expr.
                Extra names are allowed, missing ones are an error.

        Raises:
            PolynomialError: If expr is not a polynomial with rational
                coefficients in the given variables.
        """
        if isinstance(expr, MultiPoly):
            source = expr
            names = source._variables if variables is None else sort_variables(variables)
            lifted = source._lift(names)
            self._variables = names
            self._poly = lifted
            return
        if isinstance(expr, (float, np.floating, Fraction, str)):
            expr = to_rational(expr)
        expr = sp.sympify(expr)
        free = {s.name for s in expr.free_symbols}
        names = sort_variables(free if variables is None else variables)
        missing = free - set(names)
        if missing:
            raise PolynomialError(f"Expression uses undeclared variables: {sorted(missing)}")
        try:
            self._poly = sp.Poly(expr, *_gens(names), domain=QQ)
        except (sp.PolynomialError, sp.polys.polyerrors.CoercionFailed, sp.polys.polyerrors.GeneratorsError) as e:
            raise PolynomialError(f"Not a polynomial over QQ in {list(names)}: {expr} ({e})") from e
        self._variables = names

    @classmethod
    def _from_poly(cls, poly: sp.Poly, variables: Tuple[str, ...]) -> "MultiPoly":
        obj = cls.__new__(cls)
        obj._variables = variables
        obj._poly = poly
        return obj

    @classmethod
    def from_terms(cls, terms: Mapping[Tuple[int, ...], Number], variables: Sequence[str]) -> "MultiPoly":
        """Builds a polynomial from an exponent-vector → coefficient map."""
        names = tuple(variables)
        if sort_variables(names) != names or len(set(names)) != len(names):
            raise PolynomialError(f"Variables must be distinct and canonically ordered: {names}")
        rep = {}
        for monom, coeff in terms.items():
            if len(monom) != len(names):
                raise PolynomialError(f"Exponent vector {monom} does not match variables {names}")
            c = to_rational(coeff)
            if c != 0:
                rep[tuple(monom) if names else (0,)] = c
        if not rep:
            rep = {(0,) * max(len(names), 1): sp.Integer(0)}
        return cls._from_poly(sp.Poly.from_dict(rep, *_gens(names), domain=QQ), names)

    @classmethod
    def constant(cls, value: Number, variables: Iterable[str] = ()) -> "MultiPoly":
        return cls(to_rational(value), variables)

    @classmethod
    def variable(cls, name: str) -> "MultiPoly":
        return cls(sp.Symbol(name), (name,))

    # --- structure -------------------------------------------------------

    @property
    def variables(self) -> Tuple[str, ...]:
        return self._variables

    def terms(self) -> Dict[Tuple[int, ...], sp.Rational]:
        """Returns the term map: exponent vector → nonzero Rational coefficient."""
        raw = self._poly.as_dict()
        if not self._variables:
            c = raw.get((0,), sp.Integer(0))
            return {(): sp.Rational(c)} if c != 0 else {}
        return {monom: sp.Rational(c) for monom, c in raw.items() if c != 0}

    def _named_terms(self) -> frozenset:
        out = []
        for monom, c in self.terms().items():
            key = tuple((v, e) for v, e in zip(self._variables, monom) if e)
            out.append((key, c))
        return frozenset(out)

    def _lift(self, variables: Tuple[str, ...]) -> sp.Poly:
        """Returns the underlying Poly re-expressed over a superset of variables."""
        if variables == self._variables:
            return self._poly
        missing = set(self._variables) - set(variables)
        if missing:
            used = self.used_variables()
            if missing & set(used):
                raise PolynomialError(f"Cannot drop variables {sorted(missing & set(used))} still in use")
        index = {v: i for i, v in enumerate(variables)}
        rep = {}
        for monom, c in self.terms().items():
            new = [0] * max(len(variables), 1)
            for v, e in zip(self._variables, monom):
                if e:
                    new[index[v]] = e
            rep[tuple(new)] = c
        if not rep:
            rep = {(0,) * max(len(variables), 1): sp.Integer(0)}
        return sp.Poly.from_dict(rep, *_gens(variables), domain=QQ)

    def with_variables(self, variables: Iterable[str]) -> "MultiPoly":
        """Returns the same polynomial over an enlarged (or pruned) variable set."""
        names = sort_variables(variables)
        return MultiPoly._from_poly(self._lift(names), names)

    def used_variables(self) -> Tuple[str, ...]:
        """Variables that actually occur with a nonzero exponent."""
        used = set()
        for monom in self.terms():
            used.update(v for v, e in zip(self._variables, monom) if e)
        return sort_variables(used)

    def pruned(self) -> "MultiPoly":
        return self.with_variables(self.used_variables())

    def is_zero(self) -> bool:
        return self._poly.is_zero

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms())

    def constant_value(self) -> sp.Rational:
        if not self.is_constant():
            raise PolynomialError(f"Polynomial {self} is not constant")
        return self.terms().get((0,) * len(self._variables), sp.Integer(0))

    def degree(self, var: str) -> int:
        """Degree in var; -1 for the zero polynomial."""
        if self.is_zero():
            return -1
        if var not in self._variables:
            return 0
        return int(self._poly.degree(sp.Symbol(var)))

    def total_degree(self) -> int:
        if self.is_zero():
            return -1
        return max(sum(m) for m in self.terms()) if self._variables else 0

    def as_expr(self) -> sp.Expr:
        return self._poly.as_expr()

    def coefficients_in(self, var: str) -> List["MultiPoly"]:
        """Coefficients in var, lowest degree first, as polynomials in the other variables."""
        rest = tuple(v for v in self._variables if v != var)
        if var not in self._variables:
            return [self]
        deg = self.degree(var)
        buckets: List[Dict[Tuple[int, ...], sp.Rational]] = [dict() for _ in range(max(deg, 0) + 1)]
        pos = self._variables.index(var)
        for monom, c in self.terms().items():
            key = monom[:pos] + monom[pos + 1:]
            buckets[monom[pos]][key] = c
        return [MultiPoly.from_terms(b, rest) for b in buckets]

    # --- arithmetic ------------------------------------------------------

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            return other
        return MultiPoly.constant(other)

    def _unified(self, other) -> Tuple[sp.Poly, sp.Poly, Tuple[str, ...]]:
        other = self._coerce(other)
        names = sort_variables(self._variables + other._variables)
        return self._lift(names), other._lift(names), names

    def __add__(self, other):
        a, b, names = self._unified(other)
        return MultiPoly._from_poly(a + b, names)

    __radd__ = __add__

    def __sub__(self, other):
        a, b, names = self._unified(other)
        return MultiPoly._from_poly(a - b, names)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        a, b, names = self._unified(other)
        return MultiPoly._from_poly(a * b, names)

    __rmul__ = __mul__

    def __neg__(self):
        return MultiPoly._from_poly(-self._poly, self._variables)

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            raise PolynomialError(f"Exponent must be a non-negative integer, got {exponent!r}")
        return MultiPoly._from_poly(self._poly ** exponent, self._variables)

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            try:
                other = MultiPoly.constant(other)
            except PolynomialError:
                return NotImplemented
        return self._named_terms() == other._named_terms()

    def __hash__(self):
        return hash(self._named_terms())

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"MultiPoly('{format_poly(self)}', variables={list(self._variables)})"

    # --- evaluation ------------------------------------------------------

    def evaluate(self, point: Mapping[str, Number]):
        """
        Evaluates the polynomial at a point binding every used variable.

        Returns an exact Rational when every bound value is exact, a float
        otherwise.
        """
        used = self.used_variables()
        missing = [v for v in used if v not in point]
        if missing:
            raise PolynomialError(f"Missing values for variables {missing}")
        exact = all(not isinstance(point[v], (float, np.floating)) for v in used)
        values = {v: (to_rational(point[v]) if exact else float(point[v])) for v in used}
        total = sp.Integer(0) if exact else 0.0
        for monom, c in self.terms().items():
            term = c if exact else float(c)
            for v, e in zip(self._variables, monom):
                if e:
                    term = term * values[v] ** e
            total = total + term
        return total

    def lambdify(self, variables: Sequence[str]):
        """Returns a numpy-vectorised callable taking the given variables positionally."""
        extra = set(self.used_variables()) - set(variables)
        if extra:
            raise PolynomialError(f"Cannot lambdify: unbound variables {sorted(extra)}")
        symbols = [sp.Symbol(v) for v in variables]
        func = sp.lambdify(symbols, self.as_expr(), "numpy")
        if self.is_constant():
            value = float(self.constant_value())
            return lambda *args: np.full(np.broadcast(*args).shape, value) if args else value
        return func

    def to_unipoly(self, var: str, point: Optional[Mapping[str, Number]] = None) -> "UniPoly":
        """
        Converts to a UniPoly in var after binding every other variable.

        Coefficients stay exact when the bound values are exact.
        """
        point = dict(point or {})
        coeffs = []
        for c in self.coefficients_in(var):
            coeffs.append(c.evaluate(point))
        return UniPoly(var, tuple(coeffs))


def add(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    return a + b


def mul(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    return a * b


def scale(a: MultiPoly, c: Number) -> MultiPoly:
    return a * MultiPoly.constant(c)


def differentiate(a: MultiPoly, var: str) -> MultiPoly:
    """
    Formal partial derivative.

    Raises:
        PolynomialError: If var is not in a's variable set.
    """
    if var not in a.variables:
        raise PolynomialError(f"Unknown variable '{var}' (variables: {list(a.variables)})")
    return MultiPoly._from_poly(a._poly.diff(sp.Symbol(var)), a.variables)


def substitute(a: MultiPoly, bindings: Mapping[str, Union[MultiPoly, Number]]) -> MultiPoly:
    """
    Simultaneous substitution of variables by polynomials or numbers.

    Bindings for names outside a's variable set have no effect.
    """
    active = {k: v for k, v in bindings.items() if k in a.variables}
    if not active:
        return a
    replacement = {}
    names = [v for v in a.variables if v not in active]
    for name, value in active.items():
        value = value if isinstance(value, MultiPoly) else MultiPoly.constant(value)
        replacement[sp.Symbol(name)] = value.as_expr()
        names.extend(value.variables)
    expr = sp.expand(a.as_expr().xreplace(replacement))
    return MultiPoly(expr, names)


def exact_divide(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """
    Exact quotient a / b.

    Raises:
        PolynomialError: If b is zero or does not divide a.
    """
    if b.is_zero():
        raise PolynomialError("Division by the zero polynomial")
    pa, pb, names = a._unified(b)
    try:
        quotient = pa.exquo(pb)
    except sp.polys.polyerrors.ExactQuotientFailed as e:
        raise PolynomialError(f"{b} does not divide {a}") from e
    return MultiPoly._from_poly(quotient, names)


# --- text format ---------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:\.\d*)?|\.\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>\*\*|[-+*/^()]))")


class _Parser:
    """Recursive-descent parser for + - * / ^ ( ) over integer and ratio literals."""

    def __init__(self, text: str):
        self.text = text
        self.tokens = self._tokenize(text.replace("−", "-"))
        self.pos = 0

    def _tokenize(self, text: str) -> List[Tuple[str, str]]:
        tokens, index = [], 0
        stripped = text.rstrip()
        while index < len(stripped):
            match = _TOKEN.match(stripped, index)
            if not match or match.end() == index:
                raise ParseError(f"Unexpected character at position {index} in '{self.text}'")
            kind = match.lastgroup
            tokens.append((kind, match.group(kind)))
            index = match.end()
        return tokens

    def _peek(self) -> Optional[Tuple[str, str]]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _take(self) -> Tuple[str, str]:
        token = self._peek()
        if token is None:
            raise ParseError(f"Unexpected end of expression in '{self.text}'")
        self.pos += 1
        return token

    def parse(self) -> sp.Expr:
        if not self.tokens:
            raise ParseError("Empty polynomial expression")
        expr = self._expr()
        if self._peek() is not None:
            raise ParseError(f"Unexpected token '{self._peek()[1]}' in '{self.text}'")
        return expr

    def _expr(self) -> sp.Expr:
        value = self._term()
        while self._peek() in (("op", "+"), ("op", "-")):
            op = self._take()[1]
            rhs = self._term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def _term(self) -> sp.Expr:
        value = self._unary()
        while self._peek() in (("op", "*"), ("op", "/")):
            op = self._take()[1]
            rhs = self._unary()
            if op == "*":
                value = value * rhs
            else:
                if rhs.free_symbols or not rhs.is_Rational or rhs == 0:
                    raise ParseError(f"Division only by nonzero numeric constants in '{self.text}'")
                value = value / rhs
        return value

    def _unary(self) -> sp.Expr:
        if self._peek() == ("op", "-"):
            self._take()
            return -self._unary()
        if self._peek() == ("op", "+"):
            self._take()
            return self._unary()
        return self._power()

    def _power(self) -> sp.Expr:
        base = self._atom()
        if self._peek() in (("op", "^"), ("op", "**")):
            self._take()
            exponent = self._unary()
            if exponent.free_symbols or not exponent.is_Integer or exponent < 0:
                raise ParseError(f"Exponents must be non-negative integers in '{self.text}'")
            return base ** int(exponent)
        return base

    def _atom(self) -> sp.Expr:
        kind, value = self._take()
        if kind == "num":
            return sp.Rational(value)
        if kind == "name":
            return sp.Symbol(value)
        if value == "(":
            inner = self._expr()
            if self._take() != ("op", ")"):
                raise ParseError(f"Missing closing parenthesis in '{self.text}'")
            return inner
        raise ParseError(f"Unexpected token '{value}' in '{self.text}'")


def parse_expression(text: str) -> sp.Expr:
    """Parses polynomial text to a sympy expression without building a Poly."""
    if not isinstance(text, str):
        raise ParseError(f"Expected polynomial text, got {type(text).__name__}")
    return _Parser(text).parse()


def parse_poly(text: str, variables: Iterable[str] = ()) -> MultiPoly:
    """
    Parses the polynomial wire format, e.g. ``"z^3 + (3/2)*t*z + x"``.

    Args:
        text: Polynomial text.
        variables: Extra variable names to include in the variable set.

    Returns:
        The parsed polynomial.

    Raises:
        ParseError: On malformed input.
    """
    expr = parse_expression(text)
    names = {s.name for s in expr.free_symbols} | set(variables)
    try:
        return MultiPoly(expr, names)
    except PolynomialError as e:
        raise ParseError(str(e)) from e


def _format_coefficient(c: sp.Rational) -> str:
    if c.q == 1:
        return str(c.p)
    return f"({c.p}/{c.q})"


def format_poly(a: MultiPoly) -> str:
    """Canonical text form: graded order, variables in global order."""
    terms = a.terms()
    if not terms:
        return "0"
    ordered = sorted(terms, key=lambda m: (-sum(m), tuple(-e for e in m)))
    parts = []
    for monom in ordered:
        c = terms[monom]
        factors = []
        for v, e in zip(a.variables, monom):
            if e == 1:
                factors.append(v)
            elif e > 1:
                factors.append(f"{v}^{e}")
        magnitude = abs(c)
        if not factors:
            body = _format_coefficient(magnitude)
        elif magnitude == 1:
            body = "*".join(factors)
        else:
            body = "*".join([_format_coefficient(magnitude)] + factors)
        sign = "-" if c < 0 else "+"
        if not parts:
            parts.append(f"-{body}" if sign == "-" else body)
        else:
            parts.append(f" {sign} {body}")
    return "".join(parts)


# --- univariate ----------------------------------------------------------

def _normalize_coefficient(c):
    if isinstance(c, (float, np.floating)):
        return float(c)
    if isinstance(c, sp.Float):
        return float(c)
    return to_rational(c)


@dataclass(frozen=True)
class UniPoly:
    """Univariate polynomial; coefficients lowest degree first."""
    variable: str
    coefficients: Tuple = ()

    def __post_init__(self):
        coeffs = [_normalize_coefficient(c) for c in self.coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @classmethod
    def from_multipoly(cls, a: MultiPoly, var: str) -> "UniPoly":
        return a.to_unipoly(var)

    @classmethod
    def parse(cls, text: str, var: str = "z") -> "UniPoly":
        return parse_poly(text, (var,)).to_unipoly(var)

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coefficients) - 1

    @property
    def leading(self):
        if not self.coefficients:
            return sp.Integer(0)
        return self.coefficients[-1]

    def is_zero(self) -> bool:
        return not self.coefficients

    def is_exact(self) -> bool:
        return all(not isinstance(c, float) for c in self.coefficients)

    def exact(self) -> "UniPoly":
        """Exact copy; float coefficients are read through their decimal form."""
        return UniPoly(self.variable, tuple(to_rational(c) for c in self.coefficients))

    def __call__(self, value):
        if isinstance(value, (float, np.floating, np.ndarray)) or not self.is_exact():
            result = 0.0 * value if isinstance(value, np.ndarray) else 0.0
            for c in reversed(self.coefficients):
                result = result * value + float(c)
            return result
        value = to_rational(value)
        result = sp.Integer(0)
        for c in reversed(self.coefficients):
            result = result * value + c
        return result

    def derivative(self, order: int = 1) -> "UniPoly":
        coeffs = list(self.coefficients)
        for _ in range(order):
            coeffs = [c * i for i, c in enumerate(coeffs)][1:]
        return UniPoly(self.variable, tuple(coeffs))

    def to_multipoly(self) -> MultiPoly:
        exact = self.exact()
        return MultiPoly.from_terms({(i,): c for i, c in enumerate(exact.coefficients)}, (self.variable,))

    def to_sympy(self) -> sp.Poly:
        exact = self.exact()
        sym = sp.Symbol(self.variable)
        return sp.Poly(list(reversed(exact.coefficients)) or [0], sym, domain=QQ)

    @classmethod
    def from_sympy(cls, poly: sp.Poly, var: str) -> "UniPoly":
        return cls(var, tuple(reversed(poly.all_coeffs())))

    def numeric_roots(self) -> np.ndarray:
        """All complex roots in floating point (companion matrix)."""
        if self.degree < 1:
            return np.array([], dtype=complex)
        return np.polynomial.polynomial.polyroots([float(c) for c in self.coefficients])

    def __str__(self):
        if self.is_exact():
            return format_poly(self.to_multipoly())
        terms = [f"{c:.17g}*{self.variable}^{i}" for i, c in enumerate(self.coefficients) if c != 0]
        return " + ".join(reversed(terms)) or "0"


@dataclass(frozen=True)
class RootInterval:
    """Isolating interval [lo, hi] for one distinct real root."""
    lo: sp.Rational
    hi: sp.Rational
    multiplicity: int = 1

    def __post_init__(self):
        if self.lo > self.hi:
            raise PolynomialError(f"Invalid root interval [{self.lo}, {self.hi}]")
        if self.multiplicity < 1:
            raise PolynomialError(f"Multiplicity must be positive, got {self.multiplicity}")

    @property
    def midpoint(self) -> float:
        return float((self.lo + self.hi) / 2)

    @property
    def width(self) -> sp.Rational:
        return self.hi - self.lo

    def is_exact(self) -> bool:
        return self.lo == self.hi


def _require_nonzero(P: UniPoly, what: str):
    if P.is_zero():
        raise PolynomialError(f"{what} of the zero polynomial is undefined")


def _as_sympy_pair(a, b, var: Optional[str]):
    """Turns two UniPoly or two MultiPoly (with var) into sympy expressions."""
    if isinstance(a, UniPoly) and isinstance(b, UniPoly):
        if a.variable != b.variable:
            raise PolynomialError(f"Variables differ: '{a.variable}' vs '{b.variable}'")
        return a.to_multipoly().as_expr(), b.to_multipoly().as_expr(), sp.Symbol(a.variable), True
    if isinstance(a, MultiPoly) and isinstance(b, MultiPoly):
        if var is None:
            raise PolynomialError("A variable name is required for multivariate resultants")
        return a.as_expr(), b.as_expr(), sp.Symbol(var), False
    raise PolynomialError("resultant expects two UniPoly or two MultiPoly operands")


def _wrap_result(expr, numeric: bool):
    expr = sp.expand(expr)
    if numeric:
        return to_rational(expr)
    return MultiPoly(expr)


def resultant(a, b, var: Optional[str] = None):
    """
    Resultant as the Sylvester determinant, a's coefficients in the top rows.

    With this convention resultant(z - a, z - b) = a - b.

    Args:
        a, b: Two UniPoly in the same variable, or two MultiPoly together with var
            (coefficients are then polynomials in the remaining variables).
        var: Elimination variable for MultiPoly inputs.

    Returns:
        A Rational for UniPoly inputs, otherwise a MultiPoly.

    Raises:
        PolynomialError: If both inputs are identically zero.
    """
    zero_a = a.is_zero()
    zero_b = b.is_zero()
    if zero_a and zero_b:
        raise PolynomialError("Resultant of two zero polynomials is undefined")
    ea, eb, sym, numeric = _as_sympy_pair(a, b, var)
    if zero_a or zero_b:
        return _wrap_result(sp.Integer(0), numeric)
    return _wrap_result(sp.resultant(ea, eb, sym), numeric)


def discriminant_uni(P, var: Optional[str] = None):
    """
    Raw algebraic discriminant (-1)^(n(n-1)/2) res(P, P') / lc(P).

    Args:
        P: UniPoly, or MultiPoly together with var.
        var: Variable for MultiPoly input.

    Raises:
        PolynomialError: If the degree is below 2.
    """
    if isinstance(P, UniPoly):
        if P.degree < 2:
            raise PolynomialError(f"Discriminant needs degree >= 2, got {P.degree}")
        return _wrap_result(sp.discriminant(P.to_multipoly().as_expr(), sp.Symbol(P.variable)), True)
    if var is None:
        raise PolynomialError("A variable name is required for multivariate discriminants")
    if P.degree(var) < 2:
        raise PolynomialError(f"Discriminant needs degree >= 2 in '{var}', got {P.degree(var)}")
    return _wrap_result(sp.discriminant(P.as_expr(), sp.Symbol(var)), False)


def squarefree_decompose(P: UniPoly) -> List[Tuple[UniPoly, int]]:
    """
    Square-free decomposition into monic, pairwise coprime factors.

    Returns:
        List of (factor, multiplicity), ordered by increasing multiplicity.

    Raises:
        PolynomialError: For the zero polynomial.
    """
    _require_nonzero(P, "Square-free decomposition")
    _, factors = P.to_sympy().sqf_list()
    return [(UniPoly.from_sympy(f.monic(), P.variable), int(k)) for f, k in factors]


def isolate_real_roots(P: UniPoly) -> List[RootInterval]:
    """
    Exact isolating intervals for every distinct real root, sorted increasingly.

    Float coefficients are first converted to exact rationals. Multiplicities
    come from the square-free decomposition.

    Raises:
        PolynomialError: For the zero polynomial.
    """
    _require_nonzero(P, "Root isolation")
    if P.degree < 1:
        return []
    raw = P.to_sympy().intervals()
    intervals = [RootInterval(sp.Rational(lo), sp.Rational(hi), int(k)) for (lo, hi), k in raw]
    intervals.sort(key=lambda iv: (iv.lo, iv.hi))
    logger.debug(f"Isolated {len(intervals)} real roots of degree-{P.degree} polynomial")
    return intervals


def refine_root(P: UniPoly, iv: RootInterval, tol: float) -> float:
    """
    Bisects the isolating interval down to width tol on the square-free part of P.

    Args:
        P: Polynomial whose root is isolated by iv.
        iv: Isolating interval.
        tol: Absolute accuracy, > 0.

    Returns:
        r with |r - root| <= tol.

    Raises:
        PolynomialError: If tol <= 0, or the interval does not bracket a sign
            change (for odd multiplicity, of P itself).
    """
    return float(refine_root_exact(P, iv, tol))


def refine_root_exact(P: UniPoly, iv: RootInterval, tol) -> sp.Rational:
    """Same bisection as refine_root, returning the rational midpoint."""
    if not tol > 0:
        raise PolynomialError(f"Tolerance must be positive, got {tol}")
    _require_nonzero(P, "Root refinement")
    exact = P.exact()
    lo, hi = iv.lo, iv.hi
    if lo == hi:
        if exact(lo) != 0:
            raise PolynomialError(f"{lo} is not a root of {exact}")
        return lo
    if iv.multiplicity % 2 == 1:
        plo, phi = exact(lo), exact(hi)
        if plo * phi > 0:
            raise PolynomialError(f"Interval [{lo}, {hi}] does not bracket a sign change of P")
    core = exact.to_sympy().sqf_part()
    flo, fhi = core.eval(lo), core.eval(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if flo * fhi > 0:
        raise PolynomialError(f"Interval [{lo}, {hi}] does not isolate a root")
    width = to_rational(tol)
    while hi - lo > width:
        mid = (lo + hi) / 2
        fm = core.eval(mid)
        if fm == 0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return (lo + hi) / 2

"""
Random rational instances and brute-force floating-point oracles used by the
randomized property checks of the selftest command.
"""
import logging
import random
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from polycore import UniPoly

logger = logging.getLogger("HamDef.Oracles")

DENSE_SAMPLES = 10_000

# Attempts before a generator gives up on its acceptance test.
_MAX_DRAWS = 1000


class OracleError(Exception):
    """Custom exception for instance generation failures."""
    pass


def random_rational(rng: random.Random, bound: int = 9) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def random_polynomial(rng: random.Random, degree: int, bound: int = 9, variable: str = "z",
                      positive_leading: bool = False) -> UniPoly:
    """Polynomial of exactly the given degree with random rational coefficients."""
    lead = Fraction(0)
    while lead == 0:
        lead = random_rational(rng, bound)
    if positive_leading:
        lead = abs(lead)
    lower = tuple(random_rational(rng, bound) for _ in range(degree))
    return UniPoly(variable, lower + (lead,))


def draw(generate: Callable[[], UniPoly], accept: Callable[[UniPoly], bool]) -> UniPoly:
    """First generated polynomial that passes accept."""
    for _ in range(_MAX_DRAWS):
        P = generate()
        if accept(P):
            return P
    logger.error(f"Instance generator gave up after {_MAX_DRAWS} draws")
    raise OracleError(f"No accepted instance in {_MAX_DRAWS} draws")


def cauchy_bound(P: UniPoly) -> float:
    """B with every real root of P inside (-B, B)."""
    lead = abs(float(P.leading))
    return 1.0 + max((abs(float(c)) / lead for c in P.coefficients[:-1]), default=0.0)


def scan_window(P: UniPoly) -> float:
    """Half-width of the sampled interval: the Cauchy bound plus one."""
    return cauchy_bound(P) + 1.0


def grid_step(P: UniPoly, samples: int = DENSE_SAMPLES) -> float:
    return 2.0 * scan_window(P) / (samples - 1)


def well_separated(P: UniPoly, gap: float) -> bool:
    """
    True when the float roots of P are pairwise at least gap apart and every
    non-real root keeps a distance of at least gap from the real axis.

    A grid with step below gap / 2 then sees every real root in its own cell.
    """
    roots = P.numeric_roots()
    for k, r in enumerate(roots):
        if 1e-9 * (1.0 + abs(r)) < abs(r.imag) < gap:
            return False
        if any(abs(r - s) < gap for s in roots[k + 1:]):
            return False
    return True


def _samples(P: UniPoly, samples: int) -> np.ndarray:
    half = scan_window(P)
    return np.linspace(-half, half, samples)


def sign_changes(P: UniPoly, samples: int = DENSE_SAMPLES) -> int:
    """
    Sign changes of P over a uniform grid on [-B - 1, B + 1], B the Cauchy bound.

    Samples where |P| is at rounding level are skipped, so a root on a grid
    point still counts once.
    """
    zs = _samples(P, samples)
    values = P(zs)
    scale = np.zeros_like(zs)
    for i, c in enumerate(P.coefficients):
        scale += abs(float(c)) * np.abs(zs) ** i
    signs = np.sign(values)
    signs[np.abs(values) <= 1e-12 * scale] = 0
    signs = signs[signs != 0]
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


def dense_component_count(P: UniPoly, samples: int = DENSE_SAMPLES) -> int:
    """Maximal runs of grid points with P >= 0, the components of p^2 = P(z) for square-free P."""
    nonneg = P(_samples(P, samples)) >= 0
    return int(nonneg[0]) + int(np.count_nonzero(~nonneg[:-1] & nonneg[1:]))


def product(factors: Sequence[UniPoly], variable: Optional[str] = None) -> UniPoly:
    """Exact product of univariate polynomials."""
    result = UniPoly(variable or factors[0].variable, (1,))
    for F in factors:
        result = UniPoly.from_multipoly(result.to_multipoly() * F.to_multipoly(), result.variable)
    return result

"""Independent reference values used by the self-test and the test suite."""
from __future__ import annotations

from fractions import Fraction

from .invariants import invariant_vector
from .normal_forms import gen_G, gen_family
from .quartics import build_quartics


def closed_forms_G(a, b, c, d) -> dict:
    """B, L, M, N, Dxy of G_abcd as explicit polynomials in the parameters."""
    h = Fraction(1, 16)
    return {
        "B": Fraction(1, 2) * (a * a + b * b + c * c + d * d),
        "L": a * b * c * d,
        "M": h * (a + b + c + d) * (c + d - a - b) * (a - b + c - d) * (a - b + d - c),
        "N": h * (a + b + c - d) * (a - b - c - d) * (a - b + c + d) * (a + b - c + d),
        "Dxy": Fraction(1, 32) * (b * b - a * a + c * c - d * d) * (-b * b + a * a + c * c - d * d)
        * (b * b + a * a - c * c - d * d),
    }


# family -> (G parameters as a function of the family parameters)
QUARTIC_COINCIDENCES = {
    "L_abc2": (3, lambda a, b, c: (a, b, c, c)),
    "L_ab3": (2, lambda a, b: (a, a, a, b)),
    "L_a2b2": (2, lambda a, b: (a, a, b, b)),
    "L_a4": (1, lambda a: (a, a, a, a)),
    "L_a2_0_3+1": (1, lambda a: (a, a, 0, 0)),
}


def quartic_multiset(s):
    return sorted(tuple(str(c) for c in q.coeffs) for q in build_quartics(invariant_vector(s)))


def coincidence_holds(family: str, params) -> bool:
    _, gp = QUARTIC_COINCIDENCES[family]
    return quartic_multiset(gen_family(family, params)) == quartic_multiset(gen_G(*gp(*params)))

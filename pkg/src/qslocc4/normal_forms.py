"""The nine generic families of four-qubit states and their specializations.

Family identifiers follow the usual subscripts; the three nilpotent families
take no parameters.  All representatives have amplitudes in Q(i) for
parameters in Q(i).
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Mapping, Sequence

from .scalars import GaussianRational, I, ONE, parse_scalar
from .state import State, StateError, from_dict

HALF = Fraction(1, 2)

FAMILY_ARITY = {
    "G_abcd": 4,
    "L_abc2": 3,
    "L_a2b2": 2,
    "L_ab3": 2,
    "L_a4": 1,
    "L_a2_0_3+1": 1,
    "L_0_5+3": 0,
    "L_0_7+1": 0,
    "L_0_3+1_0_3+1": 0,
}
FAMILY_PARAMS = {"G_abcd": "abcd", "L_abc2": "abc", "L_a2b2": "ab", "L_ab3": "ab", "L_a4": "a",
                 "L_a2_0_3+1": "a", "L_0_5+3": "", "L_0_7+1": "", "L_0_3+1_0_3+1": ""}
FAMILIES = tuple(FAMILY_ARITY)
NILPOTENT = ("L_0_5+3", "L_0_7+1", "L_0_3+1_0_3+1")


def _gq(x) -> GaussianRational:
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, str):
        return parse_scalar(x)
    return GaussianRational(x)


def _build(terms: Mapping[str, object]) -> State:
    amps: dict = {}
    for lab, v in terms.items():
        amps[lab] = amps.get(lab, 0) + v
    return from_dict({k: _gq(v) for k, v in amps.items()})


def gen_G(a, b, c, d) -> State:
    a, b, c, d = map(_gq, (a, b, c, d))
    p, m = (a + d) * HALF, (a - d) * HALF
    q, n = (b + c) * HALF, (b - c) * HALF
    try:
        return _build({"0000": p, "1111": p, "1100": m, "0011": m,
                       "0101": q, "1010": q, "0110": n, "1001": n})
    except StateError:
        raise StateError("G_abcd with a=b=c=d=0 is the zero state") from None


def _L_abc2(a, b, c):
    return _build({"0000": (a + b) * HALF, "1111": (a + b) * HALF,
                   "0011": (a - b) * HALF, "1100": (a - b) * HALF,
                   "0101": c, "1010": c, "0110": ONE})


def _L_a2b2(a, b):
    return _build({"0000": a, "1111": a, "0101": b, "1010": b, "0110": ONE, "0011": ONE})


def _L_ab3(a, b):
    # signs on |0111>, |1011> are the ones for which the quartic coincidence
    # Q(L_ab3) = Q(G_aaab) holds
    return _build({"0000": a, "1111": a,
                   "0101": (a + b) * HALF, "1010": (a + b) * HALF,
                   "0110": (a - b) * HALF, "1001": (a - b) * HALF,
                   "0001": I, "0010": I, "0111": -I, "1011": -I})


def _L_a4(a):
    return _build({"0000": a, "0101": a, "1010": a, "1111": a,
                   "0001": I, "0110": ONE, "1011": -I})


def _L_a2_0_3p1(a):
    return _build({"0000": a, "1111": a, "0011": ONE, "0101": ONE, "0110": ONE})


_GEN = {
    "G_abcd": gen_G,
    "L_abc2": _L_abc2,
    "L_a2b2": _L_a2b2,
    "L_ab3": _L_ab3,
    "L_a4": _L_a4,
    "L_a2_0_3+1": _L_a2_0_3p1,
    "L_0_5+3": lambda: _build({"0000": 1, "0101": 1, "1000": 1, "1110": 1}),
    "L_0_7+1": lambda: _build({"0000": 1, "1011": 1, "1101": 1, "1110": 1}),
    "L_0_3+1_0_3+1": lambda: _build({"0000": 1, "0111": 1}),
}

_ALIASES = {"G": "G_abcd", "L_a2_03+1": "L_a2_0_3+1", "L_05+3": "L_0_5+3", "L_07+1": "L_0_7+1",
            "L_03+1_03+1": "L_0_3+1_0_3+1", "L_0_3+1_0_3+1bar": "L_0_3+1_0_3+1"}


def family_id(name: str) -> str:
    name = _ALIASES.get(name, name)
    if name not in FAMILY_ARITY:
        raise ValueError(f"unknown family {name!r}; expected one of {', '.join(FAMILIES)}")
    return name


def gen_family(fid: str, params: Sequence = ()) -> State:
    fid = family_id(fid)
    params = tuple(params)
    if len(params) != FAMILY_ARITY[fid]:
        raise ValueError(f"{fid} takes {FAMILY_ARITY[fid]} parameter(s), got {len(params)}")
    return _GEN[fid](*map(_gq, params))


# -- specializations ---------------------------------------------------------------
_TERM = re.compile(r"\s*([+-]?)\s*(\d+(?:/\d+)?)?\s*(\*)?\s*([a-z])?\s*")


def _linear(expr: str, names: str) -> dict:
    """Parse a linear expression like '-2a', 'a+b', '0' into {name or 1: coefficient}."""
    out: dict = {}
    pos, text = 0, expr.replace(" ", "")
    if not text:
        raise ValueError("empty expression")
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos or (m.group(2) is None and m.group(4) is None) \
                or (m.group(3) and not (m.group(2) and m.group(4))):
            raise ValueError(f"cannot parse linear expression {expr!r}")
        sign = -1 if m.group(1) == "-" else 1
        coef = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        var = m.group(4) or 1
        if var != 1 and var not in names:
            raise ValueError(f"parameter {var!r} is not a parameter of this family ({names or 'none'})")
        out[var] = out.get(var, 0) + sign * coef
        pos = m.end()
        if pos < len(text) and text[pos] not in "+-":
            raise ValueError(f"cannot parse linear expression {expr!r}")
    return out


def parse_constraints(spec, names: str) -> list:
    """Constraints such as ``"c=d"``, ``"a=b=0"``, ``"b=a, c=-2a, d=0"``.

    Returns a list of rows {var: coeff} meaning sum coeff*var = -row[1].
    Only linear constraints are supported; a quadratic condition like
    a^2 = d^2 is a union of linear branches and must be given as one branch.
    """
    if isinstance(spec, str):
        spec = [p for p in re.split(r"[,;]", spec) if p.strip()]
    rows = []
    for eq in spec:
        if "^" in eq or "**" in eq:
            raise ValueError(f"non-linear constraint {eq!r}: give one linear branch instead")
        sides = [_linear(s, names) for s in eq.split("=")]
        if len(sides) < 2:
            raise ValueError(f"constraint {eq!r} has no '='")
        for lhs, rhs in zip(sides, sides[1:]):
            row = dict(lhs)
            for k, v in rhs.items():
                row[k] = row.get(k, 0) - v
            rows.append(row)
    return rows


def solve_constraints(rows, names: str):
    """Row-reduce; return (pivots {var: {free var or 1: coeff}}, free var list)."""
    cols = list(names) + [1]
    mat = [[Fraction(r.get(c, 0)) for c in cols] for r in rows]
    piv_cols, r = [], 0
    for c in range(len(names)):
        k = next((i for i in range(r, len(mat)) if mat[i][c]), None)
        if k is None:
            continue
        mat[r], mat[k] = mat[k], mat[r]
        mat[r] = [x / mat[r][c] for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        piv_cols.append(c)
        r += 1
    for row in mat[r:]:
        if row[-1]:
            raise ValueError("inconsistent constraints")
    free = [names[c] for c in range(len(names)) if c not in piv_cols]
    sol = {}
    for i, c in enumerate(piv_cols):
        expr = {f: -mat[i][names.index(f)] for f in free if mat[i][names.index(f)]}
        if mat[i][-1]:
            expr[1] = -mat[i][-1]
        sol[names[c]] = expr
    return sol, free


def specialize(fid: str, spec, free_params: Sequence = ()) -> State:
    """Apply linear constraints to a family and instantiate it at the free parameters.

    The free parameters are the non-pivot ones in alphabetical order; e.g.
    ``specialize("G_abcd", "d=0", (1, 2, 3))`` is ``gen_G(1, 2, 3, 0)``.
    """
    fid = family_id(fid)
    names = FAMILY_PARAMS[fid]
    sol, free = solve_constraints(parse_constraints(spec, names), names)
    free_params = tuple(map(_gq, free_params))
    if len(free_params) != len(free):
        raise ValueError(f"specialization leaves {len(free)} free parameter(s) ({''.join(free)}), "
                         f"got {len(free_params)}")
    val = dict(zip(free, free_params))
    for var, expr in sol.items():
        tot = GaussianRational(0)
        for k, c in expr.items():
            tot = tot + (c if k == 1 else c * val[k])
        val[var] = tot
    return gen_family(fid, [val[n] for n in names])


def free_parameters(fid: str, spec) -> list:
    fid = family_id(fid)
    names = FAMILY_PARAMS[fid]
    return solve_constraints(parse_constraints(spec, names), names)[1]

"""Verstraete type of a four-qubit state: case analysis on the quartics, then
covariant vanishing patterns inside each case.

The branch on the quartics only looks at how many of Q1, Q2, Q3 have a zero
root and at the root profile of one quartic, so it is blind to which qubit is
which.  The covariant step is made blind to it too: instead of the ev-vector
of the state as given, the classifier uses its *signature*, the set of
ev-vectors over all 24 qubit relabelings, and looks it up among the frozen
signatures of the table rows.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .cases import CASE_TABLES
from .covariants import Catalog, evaluate_quantity, load_catalog, orbit_patterns
from .geometry import StratumRecord, multirank, stratum
from .invariants import DEGREES, InvariantVector, invariant_vector
from .normal_forms import gen_G
from .quartics import build_quartics, root_profile
from .scalars import EXACT, GaussianRational, ZeroPolicy, format_scalar
from .state import PERMUTATIONS, State, permute_qubits

NULLCONE = "nilpotent"


class ClassificationError(ArithmeticError):
    """No case or no table row matched; carries the partial trace."""

    def __init__(self, msg, trace=None):
        super().__init__(msg)
        self.trace = trace or []


class NotGenericGType(ValueError):
    pass


@dataclass(frozen=True)
class TypeReport:
    family: str
    specialization: str         # "" means none (the empty specialization)
    type_name: str              # e.g. "L_aa02"
    case_path: tuple            # e.g. ("3", "3(c)")
    trace: tuple                # human-readable decision steps
    ev: dict = field(default_factory=dict)
    parameters: tuple | None = None
    parameters_exact: bool = False
    stratum: StratumRecord | None = None
    aliases: tuple = ()
    backend: str = EXACT

    @property
    def label(self) -> str:
        if self.family == NULLCONE:
            return "[nilpotent (nullcone)]"
        return f"[{self.family}; {self.specialization or '∅'}]"

    def same_type(self, other: "TypeReport") -> bool:
        return (self.family, self.specialization, self.case_path) == \
               (other.family, other.specialization, other.case_path)

    def as_dict(self):
        return {
            "type": self.type_name, "family": self.family,
            "specialization": self.specialization or None, "label": self.label,
            "case": self.case_path[-1] if self.case_path else None,
            "case_path": list(self.case_path), "trace": list(self.trace),
            "ev": self.ev, "aliases": list(self.aliases),
            "parameters": None if self.parameters is None else [format_scalar(p) for p in self.parameters],
            "parameters_exact": self.parameters_exact,
            "stratum": self.stratum.as_dict() if self.stratum else None,
            "backend": self.backend,
        }

    def to_json(self):
        return json.dumps(self.as_dict())

    def pretty(self) -> str:
        lines = [f"type {self.type_name}  {self.label}"]
        lines += ["  - " + step for step in self.trace]
        if self.parameters is not None:
            lines.append("parameters (up to D4): " + ", ".join(format_scalar(p) for p in self.parameters)
                         + ("" if self.parameters_exact else "  [numeric]"))
        if self.stratum:
            lines.append(f"multirank {list(self.stratum.multirank)}: {self.stratum.secant}")
        return "\n".join(lines)


# -- case determination ------------------------------------------------------------
_CASE2 = {((1, 1, 1, 1), 1): "2a", ((2, 1, 1), 2): "2b", ((3, 1), 3): "2c",
          ((2, 1, 1), 1): "2d", ((3, 1), 1): "2e"}
_CASE3 = {((1, 1, 1, 1), 1): "3a", ((2, 1, 1), 1): "3b", ((2, 2), 2): "3c"}
_CASE1 = {(1, 1, 1, 1): "1a", (2, 1, 1): "1b", (3, 1): "1c"}


def policy_for(s: State, tol: float | None = None) -> ZeroPolicy:
    return ZeroPolicy(tol if tol is not None else ZeroPolicy().tol, s.scale)


def is_nilpotent(iv: InvariantVector, policy: ZeroPolicy) -> bool:
    return all(policy.zero(getattr(iv, k), DEGREES[k]) for k in ("B", "L", "M", "Dxy"))


def determine_case(iv: InvariantVector, policy: ZeroPolicy | None = None):
    """Return (case label, trace lines, profiles); raises ClassificationError."""
    policy = policy or ZeroPolicy()
    trace = []
    if is_nilpotent(iv, policy):
        return NULLCONE, ["B = L = M = Dxy = 0: nilpotent"], None
    qs = build_quartics(iv)
    profs = []
    for k, q in enumerate(qs, 1):
        try:
            profs.append(root_profile(q, iv, k, policy))
        except ArithmeticError as exc:
            raise ClassificationError(str(exc), trace) from None
    for k, p in enumerate(profs, 1):
        trace.append(f"Q{k}: roots {list(p.partition)}, zero root multiplicity {p.zero_mult}")
    zq = [k for k, p in enumerate(profs) if p.zero_mult]
    if not zq:
        case = _CASE1.get(profs[0].partition)
        head = "no quartic has a zero root"
    elif len(zq) == 1:
        p = profs[zq[0]]
        case = _CASE2.get((p.partition, p.zero_mult))
        head = f"only Q{zq[0] + 1} has a zero root"
    elif len(zq) == 3:
        p = profs[0]
        case = _CASE3.get((p.partition, p.zero_mult))
        head = "every quartic has a zero root"
    else:
        case, head = None, f"quartics {[k + 1 for k in zq]} have zero roots"
    trace.append(head)
    if case is None:
        raise ClassificationError("no case of the decision tree matches the quartic root profiles", trace)
    return case, trace, profs


def case_of(s: State, tol: float | None = None) -> str:
    return determine_case(invariant_vector(s), policy_for(s, tol))[0]


def _fmt_case(case: str) -> str:
    return f"{case[0]}({case[1:]})"


def signature(s: State, quantities, catalog: Catalog, policy=None):
    pats = orbit_patterns(s, quantities, catalog, policy)
    return pats[(1, 2, 3, 4)], sorted(set(pats.values()))


def verstraete_type(s: State, catalog: Catalog | None = None, tol: float | None = None,
                    with_parameters: bool = True, with_stratum: bool = True) -> TypeReport:
    policy = policy_for(s, tol)
    iv = invariant_vector(s)
    st = stratum(iv, multirank(s, policy.tol), policy) if with_stratum else None
    case, trace, _ = determine_case(iv, policy)
    if case == NULLCONE:
        return TypeReport(NULLCONE, "", "nilpotent", ("nilpotent",), tuple(trace), stratum=st,
                          backend=s.backend)
    table = CASE_TABLES[case]
    path = (case[0], _fmt_case(case))
    trace.append(f"case {_fmt_case(case)}")
    ev, aliases = {}, ()
    if not table.quantities:
        row = table.rows[0]
    else:
        catalog = catalog or load_catalog()
        sigs = catalog.signatures.get(case)
        if not sigs:
            raise ClassificationError(f"recipe catalog has no signatures for case {case}", trace)
        ident, sig = signature(s, table.quantities, catalog, policy)
        names = "[" + ", ".join(table.quantities) + "]"
        ev = {"quantities": list(table.quantities), "identity": list(ident),
              "signature": [list(p) for p in sig]}
        trace.append(f"ev({names}) = {list(ident)} as given; over all relabelings {[list(p) for p in sig]}")
        hits = [r for r in table.rows if sorted(map(tuple, sigs[r.name])) == sig]
        if not hits:
            raise ClassificationError("no table row matched", trace)
        row, aliases = hits[0], tuple(r.name for r in hits[1:])
        if aliases:
            trace.append(f"{row.name} and {', '.join(aliases)} have the same signature "
                         f"(the same orbits up to qubit relabeling); reporting {row.name}")
    trace.append(f"type {row.name} = [{row.family}; {row.constraints or '∅'}]")
    params, exact = None, False
    if with_parameters and row.family == "G_abcd":
        try:
            params, exact = recover_parameters(s, iv, policy)
        except NotGenericGType:
            trace.append("parameters not recovered: Delta = 0 and Q1 has roots outside Q(i)")
    return TypeReport(row.family, row.constraints, row.name, path, tuple(trace), ev, params, exact, st,
                      aliases, s.backend)


# -- parameter recovery ------------------------------------------------------------
def _rationalize(z: mpmath.mpc, maxden: int = 10 ** 18) -> GaussianRational:
    re = Fraction(str(mpmath.nstr(z.real, 40, min_fixed=-mpmath.inf, max_fixed=mpmath.inf))).limit_denominator(maxden)
    im = Fraction(str(mpmath.nstr(z.imag, 40, min_fixed=-mpmath.inf, max_fixed=mpmath.inf))).limit_denominator(maxden)
    return GaussianRational(re, im)


def _pdivmod(n, d):
    """Univariate division, coefficients highest degree first."""
    n, q = list(n), []
    while len(n) >= len(d):
        t = n[0] / d[0]
        q.append(t)
        n = [x - t * y for x, y in zip(n, list(d) + [0] * (len(n) - len(d)))][1:]
    return q, n


def _pgcd(a, b):
    a, b = list(a), list(b)
    while b and any(b):
        while b and not b[0]:
            b = b[1:]
        _, r = _pdivmod(a, b)
        a, b = b, r
    return [x / a[0] for x in a]


def _mp(c):
    if isinstance(c, GaussianRational):
        return mpmath.mpc(mpmath.mpf(c.re.numerator) / c.re.denominator,
                          mpmath.mpf(c.im.numerator) / c.im.denominator)
    return mpmath.mpc(complex(c))


def _exact_roots(coeffs):
    """All roots with multiplicity in Q(i), or None if some root is not in Q(i).

    Numeric root finding only sees the square-free part, so every root it
    has to locate is simple; each candidate is then confirmed exactly.
    """
    coeffs = [GaussianRational(c) if not isinstance(c, GaussianRational) else c for c in coeffs]
    deriv = [c * (len(coeffs) - 1 - k) for k, c in enumerate(coeffs[:-1])]
    sqf, _ = _pdivmod(coeffs, _pgcd(coeffs, deriv))
    if len(sqf) == 1:
        return []
    with mpmath.workdps(60):
        approx = mpmath.polyroots([_mp(c) for c in sqf], maxsteps=200, extraprec=200)
    out, rest = [], coeffs
    for z in approx:
        g = _rationalize(z)
        q, r = _pdivmod(rest, [GaussianRational(1), -g])
        if any(r):
            return None
        while not any(r):
            out.append(g)
            rest = q
            q, r = _pdivmod(rest, [GaussianRational(1), -g])
    return out if len(out) == len(coeffs) - 1 else None


def _exact_sqrt(r: GaussianRational):
    with mpmath.workdps(60):
        g = _rationalize(mpmath.sqrt(_mp(r)))
    return g if g * g == r else None


def d4_orbit(params):
    """All 192 images of (a, b, c, d) under permutations and even sign changes."""
    out = []
    for perm in itertools.permutations(range(4)):
        for signs in itertools.product((1, -1), repeat=4):
            if math.prod(signs) == 1:
                out.append(tuple(s * params[p] for s, p in zip(signs, perm)))
    return out


def _key(v):
    def one(x):
        c = complex(x)
        return (round(abs(c), 9), round(-c.real, 9), round(-c.imag, 9))
    return tuple(one(x) for x in v)


def canonicalize_d4(params):
    """Representative: ascending modulus, then largest real part, then largest imaginary part."""
    return min(d4_orbit(tuple(params)), key=_key)


def recover_parameters(s: State, iv: InvariantVector | None = None, policy: ZeroPolicy | None = None):
    """(a, b, c, d) with invariant_vector(gen_G(a,b,c,d)) == invariant_vector(s), up to D4.

    Returns (params, exact_flag).  The squares are the roots of Q1; the sign
    class modulo even sign changes is fixed by L = abcd.  With Delta = 0 only
    the exact path is available (repeated roots defeat numeric recovery), and
    the answer is only returned when it reproduces the invariants exactly.
    """
    iv = iv or invariant_vector(s)
    policy = policy or policy_for(s)
    degenerate = policy.zero(iv.Delta, DEGREES["Delta"])
    q1 = build_quartics(iv)[0]
    params = None
    if s.backend == EXACT:
        roots = _exact_roots(q1.coeffs)
        sq = [_exact_sqrt(r) for r in roots] if roots is not None else [None]
        if None not in sq:
            params = sq
            if iv.L and math.prod(params, start=GaussianRational(1)) != iv.L:
                params[0] = -params[0]
            params = canonicalize_d4(params)
            if invariant_vector(gen_G(*params)).generators() != iv.generators():
                params = None
        if params is not None:
            return params, True
    if degenerate:
        raise NotGenericGType("Delta = 0: parameters are not identifiable from the roots of Q1")
    with mpmath.workdps(60):
        roots = mpmath.polyroots([_mp(c) for c in q1.coeffs], maxsteps=200, extraprec=200)
        params = [complex(mpmath.sqrt(r)) for r in roots]
    L = complex(iv.L)
    if abs(L) > 0 and abs(math.prod(params) + L) < abs(math.prod(params) - L):
        params[0] = -params[0]
    return canonicalize_d4(params), False


def recover_parameters_checked(s: State):
    """recover_parameters with the type contract: refuse states not of G type."""
    rep = verstraete_type(s, with_parameters=False, with_stratum=False)
    if rep.family != "G_abcd":
        raise NotGenericGType(f"not of G type (type {rep.type_name})")
    return recover_parameters(s)


# -- equivalence -------------------------------------------------------------------
_WEIGHTS = (1, 2, 2, 3)  # B, L, M, Dxy in mu = lambda^2


def _weighted_equal(x, y, tol=None) -> bool:
    """Is x = (mu^w_i y_i) for some nonzero mu?"""
    def z(v):
        return (not v) if tol is None else abs(complex(v)) <= tol
    if [z(a) for a in x] != [z(b) for b in y]:
        return False
    sup = [i for i in range(4) if not z(x[i])]
    for i, j in itertools.combinations(sup, 2):
        wi, wj = _WEIGHTS[i], _WEIGHTS[j]
        lhs = x[i] ** wj * y[j] ** wi
        rhs = y[i] ** wj * x[j] ** wi
        if tol is None:
            if lhs != rhs:
                return False
        elif abs(complex(lhs) - complex(rhs)) > tol * max(1.0, abs(complex(lhs)), abs(complex(rhs))):
            return False
    return True


@dataclass(frozen=True)
class Equivalence:
    equivalent: bool | None   # None = undecided
    reason: str
    permutation: tuple | None = None

    def as_dict(self):
        return {"equivalent": "undecided" if self.equivalent is None else self.equivalent,
                "reason": self.reason, "permutation": list(self.permutation) if self.permutation else None}


def slocc_equivalent(s: State, t: State, catalog: Catalog | None = None, tol: float | None = None) -> Equivalence:
    ps, pt = policy_for(s, tol), policy_for(t, tol)
    ivs, ivt = invariant_vector(s), invariant_vector(t)
    if is_nilpotent(ivs, ps) and is_nilpotent(ivt, pt):
        return Equivalence(None, "both states are nilpotent; the fine nullcone classification is out of scope")
    rs = verstraete_type(s, catalog, tol, with_parameters=False, with_stratum=False)
    rt = verstraete_type(t, catalog, tol, with_parameters=False, with_stratum=False)
    if not rs.same_type(rt):
        return Equivalence(False, f"types differ: {rs.type_name} vs {rt.type_name}")
    exact = s.backend == EXACT and t.backend == EXACT
    etol = None if exact else (tol or ZeroPolicy().tol)
    x = ivs.generators()
    for sigma in PERMUTATIONS:
        y = invariant_vector(permute_qubits(t, sigma)).generators()
        if _weighted_equal(x, y, etol):
            return Equivalence(True, f"same type {rs.type_name}; invariants agree projectively "
                                     f"after relabeling the qubits of the second state by {''.join(map(str, sigma))}",
                               sigma)
    return Equivalence(False, f"same type {rs.type_name} but the invariants differ for every qubit relabeling")

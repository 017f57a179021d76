"""Flattenings and multirank, the so(8) identities, and stratum placement."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from .invariants import DEGREES, L_MATRIX, M_MATRIX, N_MATRIX, InvariantVector, invariant_vector
from .scalars import EXACT, GaussianRational, I, ONE, ZERO, ZeroPolicy, format_scalar
from .state import State

# det(M_k) = FLATTENING_SIGNS[k] * (L, M, N)[k]; the flattenings are the
# labeled determinant matrices themselves, so the signs are all +1.
FLATTENING_SIGNS = (1, 1, 1)
# bipartition (row qubits | column qubits) of each flattening, 0-based
FLATTENING_SPLITS = (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((1, 2), (0, 3)))

NOT_EVALUATED = "not evaluated: undetermined by the listed invariants"


def flattenings(s: State):
    """The three 4x4 matrices (lists of rows) whose determinants are L, M, N."""
    return tuple([[s[lab] for lab in row.split()] for row in labels]
                 for labels in (L_MATRIX, M_MATRIX, N_MATRIX))


# -- exact linear algebra over Q(i) --------------------------------------------------
def rank_exact(m) -> int:
    rows = [list(r) for r in m]
    rank, ncols = 0, len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = rows[rank][c].inverse()
        for i in range(rank + 1, len(rows)):
            if rows[i][c]:
                f = rows[i][c] * inv
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def det_exact(m):
    """Determinant by Gaussian elimination over a field."""
    rows = [list(r) for r in m]
    n, out = len(rows), ONE
    for c in range(n):
        piv = next((i for i in range(c, n) if rows[i][c]), None)
        if piv is None:
            return ZERO
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            out = -out
        out = out * rows[c][c]
        inv = rows[c][c].inverse()
        for i in range(c + 1, n):
            if rows[i][c]:
                f = rows[i][c] * inv
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return out


def rank_float(m, tol: float = 1e-9) -> int:
    a = np.array([[complex(x) for x in r] for r in m])
    sv = np.linalg.svd(a, compute_uv=False)
    return int(np.sum(sv > tol * max(1.0, sv[0] if len(sv) else 0.0)))


@dataclass(frozen=True)
class MultiRank:
    ranks: tuple

    def __iter__(self):
        return iter(self.ranks)

    def as_list(self):
        return list(self.ranks)


def multirank(s: State, tol: float = 1e-9) -> MultiRank:
    if s.backend == EXACT:
        return MultiRank(tuple(rank_exact(m) for m in flattenings(s)))
    return MultiRank(tuple(rank_float(m, tol) for m in flattenings(s)))


def secant_stratum(mr: MultiRank) -> str:
    r = tuple(mr)
    if r == (4, 4, 4):
        return "outside every sigma_3(Seg_i)"
    if sorted(r) == [3, 4, 4]:
        return f"sigma_3(Seg_{r.index(3) + 1})"
    if r == (3, 3, 3):
        return "sigma_3(X) = intersection of the sigma_3(Seg_i)"
    if r == (2, 2, 2):
        return "intersection of the sigma_2(Seg_i)"
    if r == (1, 1, 1):
        return "X (product state)"
    parts = [f"sigma_{k}(Seg_{i + 1})" if k < 4 else f"not in sigma_3(Seg_{i + 1})" for i, k in enumerate(r)]
    return "; ".join(parts)


# -- so(8) embedding ---------------------------------------------------------------
# sqrt(2) * T: entries in Z[i], so everything stays in Q(i)
S_MATRIX = ((ONE, ZERO, ZERO, ONE),
            (ZERO, I, I, ZERO),
            (ZERO, -ONE, ONE, ZERO),
            (I, ZERO, ZERO, -I))
# replacing T by sqrt(2) T doubles the skew matrix: h_2k scales by 4^k, Pf by 2^4
SO8_SCALE = {"h2": 4, "h4": 16, "h6": 64, "Pf": 16}


def _matmul(a, b):
    return [[sum((a[i][k] * b[k][j] for k in range(len(b))), ZERO) for j in range(len(b[0]))]
            for i in range(len(a))]


def _dagger(a):
    return [[a[j][i].conjugate() if isinstance(a[j][i], GaussianRational) else complex(a[j][i]).conjugate()
             for j in range(len(a))] for i in range(len(a[0]))]


def skew_embedding(s: State):
    """8x8 skew matrix [[0, R], [-R^t, 0]] with R = (sqrt2 T) M_phi (sqrt2 T)^dagger."""
    m = flattenings(s)[0]
    S = [list(r) for r in S_MATRIX]
    if s.backend != EXACT:
        S = [[complex(x) for x in r] for r in S]
    R = _matmul(_matmul(S, m), _dagger(S))
    zero = ZERO if s.backend == EXACT else 0j
    K = [[zero] * 8 for _ in range(8)]
    for i in range(4):
        for j in range(4):
            K[i][4 + j] = R[i][j]
            K[4 + j][i] = -R[i][j]
    return K


def _det_any(m):
    if m and isinstance(m[0][0], GaussianRational):
        return det_exact(m)
    return complex(np.linalg.det(np.array(m, dtype=complex))) if m else 1


def principal_minor_sum(K, k: int):
    n = len(K)
    total = 0
    for idx in itertools.combinations(range(n), k):
        total = total + _det_any([[K[i][j] for j in idx] for i in idx])
    return total


def pfaffian(K):
    n = len(K)
    if n == 0:
        return ONE if not K or isinstance(K[0][0], GaussianRational) else 1
    if n % 2:
        return ZERO
    total = 0
    rest = list(range(1, n))
    for pos, j in enumerate(rest):
        if not K[0][j]:
            continue
        keep = [r for r in rest if r != j]
        sub = [[K[a][b] for b in keep] for a in keep]
        term = K[0][j] * pfaffian(sub)
        total = total + term if pos % 2 == 0 else total - term
    return total


def berkowitz(K):
    """Characteristic polynomial det(t I - K) coefficients, leading first (division-free)."""
    n = len(K)
    zero = K[0][0] * 0
    vect = [ONE if isinstance(zero, GaussianRational) else 1, -K[0][0]]
    for r in range(1, n):
        # Toeplitz column from the r-th leading principal block
        R = [K[r][j] for j in range(r)]
        C = [K[i][r] for i in range(r)]
        A = [[K[i][j] for j in range(r)] for i in range(r)]
        col = [ONE if isinstance(zero, GaussianRational) else 1, -K[r][r]]
        v = C
        for _ in range(r):
            col.append(-sum((a * b for a, b in zip(R, v)), zero))
            v = [sum((A[i][j] * v[j] for j in range(r)), zero) for i in range(r)]
        new = [zero] * (len(vect) + 1)
        for i, c in enumerate(col):
            for j, x in enumerate(vect):
                if i + j < len(new):
                    new[i + j] = new[i + j] + c * x
        vect = new[: r + 2]
    return vect


@dataclass(frozen=True)
class SO8Report:
    values: dict      # h2, h4, h6, Pf as computed on the skew matrix (scaled)
    expected: dict    # scaled invariant-module values
    charpoly_ok: bool
    ok: bool
    failures: tuple
    scale: dict = field(default_factory=lambda: dict(SO8_SCALE))

    def as_dict(self):
        return {"values": {k: format_scalar(v) for k, v in self.values.items()},
                "expected": {k: format_scalar(v) for k, v in self.expected.items()},
                "scale": self.scale, "charpoly_ok": self.charpoly_ok, "ok": self.ok,
                "failures": list(self.failures)}


def so8_checks(s: State, iv: InvariantVector | None = None, tol: float = 1e-9) -> SO8Report:
    iv = iv or invariant_vector(s)
    K = skew_embedding(s)
    B, L, M, D = iv.B, iv.L, iv.M, iv.Dxy
    vals = {"h2": principal_minor_sum(K, 2), "h4": principal_minor_sum(K, 4),
            "h6": principal_minor_sum(K, 6), "Pf": pfaffian(K)}
    exp = {"h2": SO8_SCALE["h2"] * (2 * B), "h4": SO8_SCALE["h4"] * (B * B + 2 * L + 4 * M),
           "h6": SO8_SCALE["h6"] * (2 * B * L + 4 * B * M - 4 * D), "Pf": SO8_SCALE["Pf"] * L}
    degs = {"h2": 2, "h4": 4, "h6": 6, "Pf": 4}
    exact = s.backend == EXACT

    def same(a, b, deg):
        if exact:
            return a == b
        return abs(complex(a) - complex(b)) <= tol * max(1.0, 2 * s.scale) ** deg * 2 ** deg * 100

    fails = [f"{k}: got {format_scalar(vals[k])}, expected {format_scalar(exp[k])}"
             for k in vals if not same(vals[k], exp[k], degs[k])]
    cp = berkowitz(K)
    # det(tI - K) = t^8 + h2 t^6 + h4 t^4 + h6 t^2 + Pf^2
    target = [1, 0, vals["h2"], 0, vals["h4"], 0, vals["h6"], 0, vals["Pf"] * vals["Pf"]]
    cp_ok = all(same(a, b, k) for k, (a, b) in enumerate(zip(cp, target)))
    if not cp_ok:
        fails.append("characteristic polynomial is not t^8 + h2 t^6 + h4 t^4 + h6 t^2 + Pf^2")
    return SO8Report(vals, exp, cp_ok, not fails, tuple(fails))


# -- strata ------------------------------------------------------------------------
@dataclass(frozen=True)
class StratumRecord:
    generic: bool             # Delta != 0
    dual: bool                # Delta == 0 (in X*)
    smooth_dual: bool         # in X* but on no listed singular component
    cusp: bool                # I2 = I3 = 0
    cusp3: bool
    cusp3_witnesses: tuple    # which of the three triples vanish: "Q1", "Q2", "Q3"
    node: bool
    node_witnesses: tuple
    node3: bool               # L = M = Dxy = 0
    nullcone: bool            # B = L = M = Dxy = 0
    multirank: tuple
    secant: str
    sigma_x_dual: str = NOT_EVALUATED

    def as_dict(self):
        d = {k: getattr(self, k) for k in self.__dataclass_fields__}
        d["multirank"] = list(self.multirank)
        d["cusp3_witnesses"] = list(self.cusp3_witnesses)
        d["node_witnesses"] = list(self.node_witnesses)
        return d

    def to_json(self):
        return json.dumps(self.as_dict())

    def inclusion_violations(self) -> list:
        out = []
        if self.nullcone and not self.cusp3:
            out.append("nullcone without cusp3")
        if self.cusp3 and not self.cusp:
            out.append("cusp3 without cusp")
        if self.cusp and not self.dual:
            out.append("cusp without Delta=0")
        if self.node3 and not self.node:
            out.append("node3 without node")
        if self.node and not self.dual:
            out.append("node without Delta=0")
        return out


def stratum(iv: InvariantVector, mr: MultiRank, policy: ZeroPolicy | None = None) -> StratumRecord:
    policy = policy or ZeroPolicy()
    z = {k: policy.zero(v, DEGREES[k]) for k, v in iv.as_dict().items()}
    dual = z["Delta"]
    cusp = z["I2"] and z["I3"]
    c3 = tuple(lab for lab, keys in (("Q1", ("L", "P", "S1")), ("Q2", ("M", "Dxy", "S2")),
                                      ("Q3", ("N", "Dxy", "S3"))) if all(z[k] for k in keys))
    nodes = tuple(lab for lab, keys in (("Q1", ("L", "P")), ("Q2", ("M", "Dxy")), ("Q3", ("N", "Dxy")))
                  if all(z[k] for k in keys))
    node3 = z["L"] and z["M"] and z["Dxy"]
    null = z["B"] and z["L"] and z["M"] and z["Dxy"]
    return StratumRecord(
        generic=not dual, dual=dual, smooth_dual=dual and not cusp and not nodes,
        cusp=cusp, cusp3=bool(c3), cusp3_witnesses=c3, node=bool(nodes), node_witnesses=nodes,
        node3=node3, nullcone=null, multirank=tuple(mr), secant=secant_stratum(mr))


def stratum_of(s: State, tol: float = 1e-9) -> StratumRecord:
    iv = invariant_vector(s)
    return stratum(iv, multirank(s, tol), ZeroPolicy(tol, s.scale))

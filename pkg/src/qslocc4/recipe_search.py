"""Maintenance tool: derive and freeze the covariant recipe catalog.

Not used at classification time.  The catalog shipped in ``data/recipes.json``
was produced by this module in three steps:

1. ``bfs``: breadth-first transvection from the ground form, keeping at each
   (degree, multidegree) a basis of linearly independent chains (linear
   independence tested mod p on random probe states).  The basis sizes are
   checked against the multiplicities predicted by the SL2^4 character of
   S^d(C^2 x C^2 x C^2 x C^2), so nothing is missed.  Only multidegrees that
   can still reach a target are expanded.
2. ``select``: for each target, search small supports of basis chains whose
   (positional) combination vanishes on the table rows marked 0 and is
   nonzero on the rows marked 1; coefficients come from a one-dimensional
   nullspace mod p, lifted to Q by rational reconstruction.
3. ``freeze``: verify the selection exactly on the tables, compute the
   permutation signatures, and write the JSON catalog.

Usage::

    python -m qslocc4.recipe_search --verify            # re-check shipped catalog
    python -m qslocc4.recipe_search --refreeze OUT.json # recompute signatures
    python -m qslocc4.recipe_search --search OUT.json   # full re-derivation (slow)
"""
from __future__ import annotations

import argparse
import itertools
import json
import sys
from fractions import Fraction

import numpy as np

from .cases import CASE_TABLES, PATTERN_CASES
from .covariants import (
    Quantity, Recipe, catalog_from_dict, catalog_to_dict, load_catalog, order_to_perm,
    orbit_patterns, recipe_values,
)
from .multiform import transvect
from .normal_forms import free_parameters, specialize
from .state import PERMUTATIONS, permute_qubits

PRIME = 2147483629  # 1 mod 4

# target (degree, multidegree, combine mode) per quantity
TARGETS = {
    "L": (12, (6, 0, 0, 0), "sum"),
    "K5": (11, (5, 1, 1, 1), "sum"),
    "K3": (11, (3, 3, 1, 1), "sum"),
    "G": (7, (3, 1, 1, 1), "sum"),
    "Gbar": (7, (3, 1, 1, 1), "product"),
    "D": (4, (4, 0, 0, 0), "sum"),
    "H": (8, (2, 2, 2, 0), "sum"),
    "C": (3, (1, 1, 1, 1), "single"),
}


# -- multiplicities from characters -----------------------------------------------
def weight_table(max_degree: int):
    """table[d][w + D] = multiplicity of torus weight w in S^d of the ground space."""
    D = max_degree
    W = 2 * D + 1
    G = np.zeros((D + 1, W, W, W, W), dtype=np.int64)
    G[0, D, D, D, D] = 1
    for w in itertools.product((-1, 1), repeat=4):
        for d in range(1, D + 1):
            G[d] += np.roll(G[d - 1], shift=w, axis=(0, 1, 2, 3))
    return G


def multiplicity(G, d: int, m) -> int:
    """Number of independent covariants of degree d and multidegree m."""
    D = (G.shape[1] - 1) // 2
    tot = 0
    for e in itertools.product((0, 1), repeat=4):
        idx = tuple(D + m[k] + 2 * e[k] for k in range(4))
        if max(idx) < G.shape[1]:
            tot += (-1) ** sum(e) * int(G[d][idx])
    return tot


def cone(d: int, targets) -> list:
    """Multidegrees at degree d from which some target is still reachable."""
    out = []
    for m in itertools.product(range(d + 1), repeat=4):
        if any((mk - d) % 2 for mk in m):
            continue
        if any(dt >= d and all(abs(m[k] - mt[k]) <= dt - d for k in range(4)) for dt, mt in targets):
            out.append(m)
    return out


class _Echelon:
    def __init__(self, p):
        self.p, self.rows = p, []

    def add(self, v) -> bool:
        p = self.p
        v = v % p
        for piv, r in self.rows:
            if v[piv]:
                v = (v - v[piv] * r) % p
        nz = np.flatnonzero(v)
        if not len(nz):
            return False
        v = v * pow(int(v[nz[0]]), -1, p) % p
        self.rows.append((nz[0], v))
        return True


def bfs(targets=None, n_probes: int = 12, seed: int = 12345, log=None):
    """Return {degree: {multidegree: [chain, ...]}} spanning every reachable space."""
    targets = targets or sorted({(d, m) for d, m, _ in TARGETS.values()})
    top = max(d for d, _ in targets)
    G = weight_table(top)
    rng = np.random.default_rng(seed)
    A = rng.integers(0, PRIME, size=(n_probes, 2, 2, 2, 2)).astype(np.int64)
    levels = {1: {(1, 1, 1, 1): [((), A)]}}
    for d in range(2, top + 1):
        allowed = set(cone(d, targets))
        lvl, bases = {}, {}
        for m_prev, items in levels[d - 1].items():
            for r in itertools.product((0, 1), repeat=4):
                m = tuple(m_prev[k] + 1 - 2 * r[k] for k in range(4))
                if m not in allowed:
                    continue
                for chain, arr in items:
                    out = transvect(arr, A, r, PRIME)
                    if bases.setdefault(m, _Echelon(PRIME)).add(out.reshape(-1)):
                        lvl.setdefault(m, []).append((chain + (r,), out))
        for m, v in lvl.items():
            if len(v) != multiplicity(G, d, m):
                raise RuntimeError(f"degree {d} multidegree {m}: found {len(v)} chains, "
                                   f"expected {multiplicity(G, d, m)} (increase n_probes)")
        levels[d] = lvl
        if log:
            log(f"degree {d}: {sum(len(v) for v in lvl.values())} chains")
    return {d: {m: [c for c, _ in v] for m, v in lvl.items()} for d, lvl in levels.items()}


# -- selection -------------------------------------------------------------------
def ratrec(a: int, p: int = PRIME):
    a %= p
    r0, r1, s0, s1 = p, a, 0, 1
    bound = int((p // 2) ** 0.5)
    while r1 > bound:
        q = r0 // r1
        r0, r1, s0, s1 = r1, r0 - q * r1, s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    return Fraction(r1, s1)


def nullspace_mod(M, p: int = PRIME):
    M = M.copy() % p
    rows, cols = M.shape
    piv, r = [], 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(M[r:, c])
        if not len(nz):
            continue
        k = r + nz[0]
        M[[r, k]] = M[[k, r]]
        M[r] = M[r] * pow(int(M[r, c]), -1, p) % p
        for i in range(rows):
            if i != r and M[i, c]:
                M[i] = (M[i] - M[i, c] * M[r]) % p
        piv.append(c)
        r += 1
    basis = []
    for f in (c for c in range(cols) if c not in piv):
        v = np.zeros(cols, dtype=np.int64)
        v[f] = 1
        for i, c in enumerate(piv):
            v[c] = (-M[i, f]) % p
        basis.append(v)
    return basis


def _rows_by_role(name):
    zero, nonzero = [], []
    for case in PATTERN_CASES:
        t = CASE_TABLES[case]
        if name in t.quantities:
            k = t.quantities.index(name)
            for r in t.rows:
                (nonzero if r.pattern[k] else zero).append(r)
    return zero, nonzero


def sample_row(row, rng, n=1, case=None):
    """Random exact members of a table row.

    With ``case`` given, parameter choices that land on a special locus (so the
    state belongs to a different case of the decision tree) are redrawn.
    """
    from .classifier import case_of
    out = []
    while len(out) < n:
        fp = free_parameters(row.family, row.constraints)
        s = specialize(row.family, row.constraints,
                       [Fraction(int(rng.integers(1, 60)), int(rng.integers(1, 9))) for _ in fp])
        if case is None or case_of(s) == case:
            out.append(s)
    return out


def _lane_eval(chain, states):
    from .covariants import _gaussian_integer_batch, _lane_ground, _lane_moduli, _prime_table
    rows, _ = _gaussian_integer_batch(states)
    ps, roots = _prime_table(8)
    A = _lane_ground(rows, ps[:1], roots[:1])
    mod = _lane_moduli(ps[:1])
    X = A
    for r in chain:
        X = transvect(X, A, r, mod)
    return X[0]  # one embedding suffices to find candidates


def select(name, chains, zero_pos=None, max_support=3, samples=2, seed=7):
    """Yield recipes (lists of (chain, Fraction)) reproducing the tables for ``name``.

    ``zero_pos`` maps a row name to the single positional copy that is required
    to vanish (needed for product-type quantities, where one factor suffices).
    """
    d, m, combine = TARGETS[name]
    q = Quantity(name, combine, Recipe(((Fraction(1), chains[d][m][0]),), m))
    orders = q.positions()
    rng = np.random.default_rng(seed)
    zero, nonzero = _rows_by_role(name)
    p = int(_prime_table(8)[0][0])
    ev = {}
    for row in zero + nonzero:
        sts = [permute_qubits(s, order_to_perm(o)) for s in sample_row(row, rng, samples) for o in orders]
        ev[row.name] = np.stack([_lane_eval(c, sts).reshape(samples, len(orders), -1) for c in chains[d][m]])
    cs = chains[d][m]
    for k in range(1, max_support + 1):
        for cols in itertools.combinations(range(len(cs)), k):
            blocks = []
            for row in zero:
                e = ev[row.name][list(cols)]
                if zero_pos and row.name in zero_pos:
                    e = e[:, :, zero_pos[row.name]:zero_pos[row.name] + 1]
                blocks.append(e.reshape(len(cols), -1).T)
            ns = nullspace_mod(np.concatenate(blocks), p) if blocks else [np.ones(len(cols), np.int64)]
            if len(ns) != 1 or not all(ns[0]):
                continue
            v = ns[0]
            ok = True
            for row in nonzero:
                val = sum(int(c) * ev[row.name][j] % p for c, j in zip(v, cols)) % p
                for smp in val:
                    nz = [bool(pos.any()) for pos in smp]
                    if not (all(nz) if combine == "product" else any(nz)):
                        ok = False
            if not ok:
                continue
            coefs = [ratrec(int(x), p) for x in v]
            if None not in coefs:
                yield [(cs[j], c) for j, c in zip(cols, coefs)]


# -- verification and freezing ---------------------------------------------------
def verify_tables(catalog=None, per_row: int = 20, seed: int = 2024, log=None):
    """Exact check of every published table row; returns list of mismatches."""
    from .covariants import evaluate_quantity
    catalog = catalog or load_catalog()
    rng = np.random.default_rng(seed)
    bad = []
    for case in PATTERN_CASES:
        t = CASE_TABLES[case]
        for row in t.rows:
            for s in sample_row(row, rng, per_row, case):
                got = tuple(int(evaluate_quantity(catalog[n], s).nonzero) for n in t.quantities)
                if got != row.pattern:
                    bad.append((case, row.name, got, row.pattern))
            if log:
                log(f"{case} {row.name}: checked {per_row}")
    return bad


def compute_signatures(catalog=None, samples: int = 3, seed: int = 99):
    """Set of ev-patterns a row takes over all 24 qubit relabelings."""
    catalog = catalog or load_catalog()
    rng = np.random.default_rng(seed)
    sigs = {}
    for case in PATTERN_CASES:
        t = CASE_TABLES[case]
        sigs[case] = {}
        for row in t.rows:
            found = None
            for s in sample_row(row, rng, samples, case):
                pats = sorted(set(orbit_patterns(s, t.quantities, catalog).values()))
                if found is not None and pats != found:
                    raise RuntimeError(f"{case}/{row.name}: signature depends on parameters")
                found = pats
            sigs[case][row.name] = found
    return sigs


def freeze(quantities: dict, path: str, note: str = ""):
    draft = catalog_from_dict(catalog_to_dict(quantities, note=note))
    bad = verify_tables(draft)
    if bad:
        raise RuntimeError(f"selection fails the tables: {bad[:5]}")
    sigs = compute_signatures(draft)
    with open(path, "w") as fh:
        json.dump(catalog_to_dict(quantities, sigs, note), fh, indent=1)
        fh.write("\n")


def search_all(log=print) -> dict:
    chains = bfs(log=log)
    out = {}
    for name, (d, m, combine) in TARGETS.items():
        zero_pos = None
        if combine == "product":
            # one factor vanishing is enough; the 3(c) zero rows use these positions
            zero_pos = {"G_00aa": 0, "L_aa02": 0, "L_00c2": 2}
        best = None
        for sol in select(name, chains, zero_pos, max_support=3 if combine != "product" else 4):
            h = (max(max(abs(c.numerator), c.denominator) for _, c in sol), len(sol))
            if best is None or h < best[0]:
                best = (h, sol)
        if best is None:
            raise RuntimeError(f"no recipe found for {name}")
        out[name] = Quantity(name, combine, Recipe(tuple((c, ch) for ch, c in best[1]), m))
        log(f"{name}: {len(best[1])} chain(s)")
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(prog="python -m qslocc4.recipe_search")
    g = ap.add_mutually_exclusive_group(required=True)
    g.add_argument("--verify", action="store_true", help="exactly re-check the shipped catalog")
    g.add_argument("--refreeze", metavar="OUT", help="recompute signatures of the shipped recipes")
    g.add_argument("--search", metavar="OUT", help="re-derive recipes from scratch")
    ap.add_argument("--per-row", type=int, default=20)
    a = ap.parse_args(argv)
    if a.verify:
        bad = verify_tables(per_row=a.per_row, log=print)
        print("OK" if not bad else f"{len(bad)} mismatches: {bad[:5]}")
        return 1 if bad else 0
    if a.refreeze:
        cat = load_catalog()
        freeze(cat.quantities, a.refreeze, cat.meta.get("note", ""))
    else:
        freeze(search_all(), a.search, "derived by python -m qslocc4.recipe_search --search")
    return 0


if __name__ == "__main__":
    sys.exit(main())

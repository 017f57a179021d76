"""Covariant catalog: recipes, positional combinations, and exact evaluation.

A *recipe* is a rational linear combination of transvection chains.  A chain
``(r_2, ..., r_d)`` starts from the ground form ``f`` and replaces the running
form ``X`` by ``(X, f)^{r_k}`` at every step, so a chain of length ``d - 1``
yields a covariant of degree ``d`` in the amplitudes.

A *quantity* (the calligraphic L, K5, K3, G, Gbar, D, H, C) evaluates one
recipe at every arrangement of its multidegree -- L_6000, L_0600, ... -- by
moving the relevant qubits to the front, and combines the results:

* ``sum``     -- vanishes iff every positional copy vanishes;
* ``product`` -- vanishes iff some positional copy vanishes;
* ``single``  -- just the recipe, as written.

Exact evaluation runs in residue lanes: Gaussian integers are mapped to
Z/p under both embeddings i -> +-sqrt(-1) mod p for primes p = 1 (mod 4).
The number of primes is chosen from an l1 majorant of the recipe so that the
product of the primes exceeds twice the largest possible coefficient; a form
is then zero iff all its residues are zero, and its exact coefficients can be
recovered by CRT.  Nothing here is probabilistic.
"""
from __future__ import annotations

import functools
import hashlib
import json
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Sequence

import gmpy2
import numpy as np

from .multiform import MultiForm, transvect
from .scalars import EXACT, GaussianRational, ZeroPolicy
from .state import PERMUTATIONS, State, permute_qubits

QUANTITIES = ("L", "K5", "K3", "G", "Gbar", "D", "H", "C")
COMBINE_MODES = ("sum", "product", "single")
CATALOG_FORMAT = "qslocc4-recipes"
CATALOG_VERSION = 1
ENV_RECIPES = "QSLOCC4_RECIPES"


class CatalogError(ValueError):
    pass


# -- residue lanes -----------------------------------------------------------------
def _primes_1mod4(count: int, start: int = 2 ** 31):
    out, p = [], start
    while len(out) < count:
        p = int(gmpy2.prev_prime(p)) if hasattr(gmpy2, "prev_prime") else _prev_prime(p)
        if p % 4 == 1:
            out.append(p)
    return out


def _prev_prime(n: int) -> int:
    n -= 1
    while not gmpy2.is_prime(n):
        n -= 1
    return n


def _sqrt_minus_one(p: int) -> int:
    for g in range(2, p):
        r = pow(g, (p - 1) // 4, p)
        if r * r % p == p - 1:
            return r
    raise ArithmeticError(p)


@functools.lru_cache(maxsize=None)
def _prime_table(count: int):
    ps = _primes_1mod4(count)
    return tuple(ps), tuple(_sqrt_minus_one(p) for p in ps)


def lanes_for(bits: int):
    """Primes (with sqrt(-1)) whose product exceeds 2^bits."""
    n = 1
    while True:
        ps, roots = _prime_table(max(n, 8))
        acc, k = 1, 0
        while k < len(ps) and acc.bit_length() <= bits + 1:
            acc *= ps[k]
            k += 1
        if acc.bit_length() > bits + 1:
            return ps[:k], roots[:k]
        n = 2 * max(n, 8)


def _gaussian_integer_batch(states: Sequence[State]):
    """Scale each state by the lcm of its denominators -> Gaussian integers."""
    rows, dens = [], []
    for s in states:
        den = 1
        for a in s.amps:
            den = math.lcm(den, a.re.denominator, a.im.denominator)
        rows.append([(int(a.re * den), int(a.im * den)) for a in s.amps])
        dens.append(den)
    return rows, dens


def _lane_ground(rows, ps, roots):
    """Residues of the ground forms: shape (2 * len(ps), K, 2, 2, 2, 2)."""
    lanes = []
    for p, r in zip(ps, roots):
        for sgn in (1, -1):
            lanes.append([[(x + sgn * r * y) % p for x, y in row] for row in rows])
    arr = np.array(lanes, dtype=np.int64)
    return arr.reshape(arr.shape[0], arr.shape[1], 2, 2, 2, 2)


def _lane_moduli(ps):
    return np.repeat(np.array(ps, dtype=np.int64), 2).reshape(-1, 1, 1, 1, 1, 1)


def _crt_pairs(res, ps, roots):
    """Recover integer (re, im) from lane residues; res shape (2*len(ps), ...)."""
    M = 1
    re_acc = np.zeros(res.shape[1:], dtype=object)
    im_acc = np.zeros(res.shape[1:], dtype=object)
    for n, (p, r) in enumerate(zip(ps, roots)):
        u = res[2 * n].astype(object)
        v = res[2 * n + 1].astype(object)
        inv2 = pow(2, -1, p)
        a = (u + v) * inv2 % p
        b = (u - v) * pow(2 * r, -1, p) % p
        # incremental CRT: x = acc + M * ((target - acc) * M^-1 mod p)
        Minv = pow(M % p, -1, p)
        re_acc = re_acc + M * (((a - re_acc) % p) * Minv % p)
        im_acc = im_acc + M * (((b - im_acc) % p) * Minv % p)
        M *= p
    half = M // 2
    fix = np.vectorize(lambda x: x - M if x > half else x, otypes=[object])
    return fix(re_acc), fix(im_acc)


# -- recipes -------------------------------------------------------------------------
@dataclass(frozen=True)
class Recipe:
    """Rational combination of transvection chains with a common target multidegree."""

    terms: tuple  # ((Fraction, chain), ...); chain = tuple of order 4-tuples
    multidegree: tuple

    @property
    def degree(self) -> int:
        return len(self.terms[0][1]) + 1

    def validate(self, name: str = "recipe"):
        if not self.terms:
            raise CatalogError(f"{name}: empty recipe")
        for coef, chain in self.terms:
            m, d = (1, 1, 1, 1), 1
            for r in chain:
                if len(r) != 4 or any(not 0 <= rk <= min(mk, 1) for rk, mk in zip(r, m)):
                    raise CatalogError(f"{name}: infeasible transvection order {r} at multidegree {m}")
                m = tuple(mk + 1 - 2 * rk for mk, rk in zip(m, r))
                d += 1
            if m != self.multidegree or d != self.degree:
                raise CatalogError(f"{name}: chain {chain} ends at {m} (degree {d}), "
                                   f"expected {self.multidegree} (degree {self.degree})")
            if coef == 0:
                raise CatalogError(f"{name}: zero coefficient")

    def integer_terms(self):
        den = math.lcm(*(c.denominator for c, _ in self.terms))
        return [(int(c * den), ch) for c, ch in self.terms], den


@functools.lru_cache(maxsize=None)
def chain_majorant(chain: tuple) -> int:
    """Max over output coefficients of the l1 norm of the coefficient polynomial."""
    one = np.ones((2, 2, 2, 2), dtype=object)
    X = one
    for r in chain:
        X = transvect(X, one, r, signed=False)
    return int(max(X.flat))


def recipe_majorant(recipe: Recipe) -> int:
    iterms, _ = recipe.integer_terms()
    return sum(abs(c) * chain_majorant(ch) for c, ch in iterms)


def _eval_chain(A, chain, mod=None, memo=None):
    """Run a chain; ``memo`` shares common prefixes between the chains of one recipe."""
    memo = {} if memo is None else memo
    X, k = A, 0
    for n in range(len(chain), 0, -1):
        if chain[:n] in memo:
            X, k = memo[chain[:n]], n
            break
    for n in range(k, len(chain)):
        X = transvect(X, A, chain[n], mod)
        memo[chain[:n + 1]] = X
    return X


def eval_recipe_lanes(recipe: Recipe, A, mod):
    iterms, _ = recipe.integer_terms()
    tot, memo = None, {}
    for c, ch in iterms:
        v = _eval_chain(A, ch, mod, memo) * (c % mod) % mod
        tot = v if tot is None else (tot + v) % mod
    return tot


def eval_recipe_float(recipe: Recipe, A):
    tot, memo = None, {}
    for c, ch in recipe.terms:
        v = _eval_chain(A, ch, None, memo) * float(c)
        tot = v if tot is None else tot + v
    return tot


def recipe_magnitude(recipe: Recipe, A):
    """Max coefficient of the recipe run without signs on |A|: the size of the
    terms that cancel in the float evaluation, per batch entry."""
    absA = np.abs(A)
    tot = None
    for c, ch in recipe.terms:
        X = absA
        for r in ch:
            X = transvect(X, absA, r, signed=False)
        X = X * abs(float(c))
        tot = X if tot is None else tot + X
    return tot.reshape(tot.shape[:-4] + (-1,)).max(axis=-1)


@dataclass(frozen=True)
class Quantity:
    name: str
    combine: str
    recipe: Recipe

    def positions(self):
        """Qubit orders: for each distinct arrangement m' of the multidegree, the
        qubits (0-based) that must be moved to slots 1..4 so that the recipe's
        multidegree lands on m'."""
        m = self.recipe.multidegree
        if self.combine == "single":
            return [(0, 1, 2, 3)]
        seen, orders = [], []
        for perm in _itertools_permutations(range(4)):
            mp = tuple(m[perm[k]] for k in range(4))
            if mp in seen:
                continue
            seen.append(mp)
            order, used = [], set()
            for k in range(4):
                q = next(q for q in range(4) if q not in used and mp[q] == m[k])
                order.append(q)
                used.add(q)
            orders.append(tuple(order))
        return orders


def _itertools_permutations(it):
    import itertools
    return itertools.permutations(it)


def order_to_perm(order) -> tuple:
    """Qubit permutation (1-based one-line) moving qubit order[k] to slot k."""
    sigma = [0] * 4
    for k, q in enumerate(order):
        sigma[q] = k + 1
    return tuple(sigma)


# -- catalog ---------------------------------------------------------------------------
@dataclass(frozen=True)
class Catalog:
    quantities: dict
    signatures: dict = field(default_factory=dict)
    path: str = ""
    sha256: str = ""
    meta: dict = field(default_factory=dict)

    def __getitem__(self, name) -> Quantity:
        return self.quantities[name]


def _parse_chain(raw):
    return tuple(tuple(int(x) for x in r) for r in raw)


def catalog_from_dict(obj: dict, path: str = "", digest: str = "") -> Catalog:
    if obj.get("format") != CATALOG_FORMAT:
        raise CatalogError(f"{path}: not a recipe catalog")
    if obj.get("version") != CATALOG_VERSION:
        raise CatalogError(f"{path}: unsupported catalog version {obj.get('version')}")
    qs = {}
    for name, spec in obj["quantities"].items():
        combine = spec["combine"]
        if combine not in COMBINE_MODES:
            raise CatalogError(f"{name}: unknown combine mode {combine!r}")
        terms = tuple((Fraction(t["coefficient"]), _parse_chain(t["chain"])) for t in spec["terms"])
        rec = Recipe(terms, tuple(spec["multidegree"]))
        rec.validate(name)
        qs[name] = Quantity(name, combine, rec)
    missing = set(QUANTITIES) - set(qs)
    if missing:
        raise CatalogError(f"{path}: catalog lacks {sorted(missing)}")
    sigs = {case: {row: [tuple(p) for p in pats] for row, pats in rows.items()}
            for case, rows in obj.get("signatures", {}).items()}
    meta = {k: v for k, v in obj.items() if k not in ("quantities", "signatures")}
    return Catalog(qs, sigs, path, digest, meta)


def default_catalog_path() -> str:
    env = os.environ.get(ENV_RECIPES)
    if env:
        return env
    return str(resources.files("qslocc4").joinpath("data/recipes.json"))


@functools.lru_cache(maxsize=8)
def _load(path: str) -> Catalog:
    try:
        raw = open(path, "rb").read()
    except OSError as exc:
        raise CatalogError(f"cannot read recipe catalog {path}: {exc}") from None
    return catalog_from_dict(json.loads(raw), path, hashlib.sha256(raw).hexdigest())


def load_catalog(path: str | None = None) -> Catalog:
    return _load(path or default_catalog_path())


# -- evaluation ------------------------------------------------------------------------
def _batch_states(s: State, perms) -> list:
    return [permute_qubits(s, p) for p in perms]


def _exact_recipe_values(recipe: Recipe, states, need_values: bool):
    """Return (nonzero flags per state, exact MultiForm list or None)."""
    rows, dens = _gaussian_integer_batch(states)
    zmax = max(max(abs(x), abs(y)) for row in rows for x, y in row)
    bound = recipe_majorant(recipe) * (2 * max(1, zmax)) ** recipe.degree
    # quick screen with one prime: a nonzero residue proves a nonzero value
    if not need_values:
        ps, roots = _prime_table(8)
        A = _lane_ground(rows, ps[:1], roots[:1])
        res = eval_recipe_lanes(recipe, A, _lane_moduli(ps[:1]))
        flags = res.reshape(res.shape[0], res.shape[1], -1).any(axis=(0, 2))
        if flags.all():
            return flags, None
    ps, roots = lanes_for(bound.bit_length())
    A = _lane_ground(rows, ps, roots)
    res = eval_recipe_lanes(recipe, A, _lane_moduli(ps))
    flags = res.reshape(res.shape[0], res.shape[1], -1).any(axis=(0, 2))
    if not need_values:
        return flags, None
    re, im = _crt_pairs(res, ps, roots)
    _, cden = recipe.integer_terms()
    forms = []
    for k, den in enumerate(dens):
        scale = Fraction(1, cden * den ** recipe.degree)
        arr = np.empty(re.shape[1:], dtype=object)
        for e in np.ndindex(arr.shape):
            arr[e] = GaussianRational(re[(k,) + e] * scale, im[(k,) + e] * scale)
        forms.append(MultiForm(arr))
    return flags, forms


def _float_recipe_values(recipe: Recipe, states, policy: ZeroPolicy):
    A = np.array([[complex(a) for a in s.amps] for s in states]).reshape(len(states), 2, 2, 2, 2)
    vals = eval_recipe_float(recipe, A)
    mags = recipe_magnitude(recipe, A)
    flags = []
    for k, s in enumerate(states):
        pol = ZeroPolicy(policy.tol, s.scale)
        # kappa turns the cancelling-term magnitude into the policy's scale^deg units
        kappa = max(1.0, float(mags[k]) / max(1.0, s.scale) ** recipe.degree)
        flags.append(not all(pol.zero(c, recipe.degree, kappa) for c in vals[k].flat))
    return np.array(flags), [MultiForm(vals[k]) for k in range(len(states))]


def recipe_values(recipe: Recipe, states, policy: ZeroPolicy | None = None, need_values=False):
    if all(s.backend == EXACT for s in states):
        return _exact_recipe_values(recipe, states, need_values)
    return _float_recipe_values(recipe, [s if s.backend != EXACT else s.to_float() for s in states],
                                policy or ZeroPolicy())


@dataclass(frozen=True)
class QuantityValue:
    """A calligraphic quantity: positional components and how they combine."""

    name: str
    combine: str
    components: tuple  # MultiForms in positional multidegrees (or None when not materialized)
    nonzero_flags: tuple

    @property
    def nonzero(self) -> bool:
        if self.combine == "product":
            return all(self.nonzero_flags)
        return any(self.nonzero_flags)

    def is_zero(self) -> bool:
        return not self.nonzero


def evaluate_quantity(q: Quantity, s: State, policy=None, need_values=False) -> QuantityValue:
    orders = q.positions()
    states = [permute_qubits(s, order_to_perm(o)) for o in orders]
    flags, forms = recipe_values(q.recipe, states, policy, need_values)
    comps = tuple(f.permute_pairs(o) for f, o in zip(forms, orders)) if forms else tuple(None for _ in orders)
    return QuantityValue(q.name, q.combine, comps, tuple(bool(x) for x in flags))


def build_catalog(s: State, catalog: Catalog | None = None, policy=None, names=QUANTITIES,
                  need_values: bool = True) -> dict:
    """Evaluate the calligraphic quantities on ``s`` (as given, no relabeling)."""
    catalog = catalog or load_catalog()
    return {n: evaluate_quantity(catalog[n], s, policy, need_values) for n in names}


def ev_bits(values) -> list:
    """0 for a vanishing entry, 1 otherwise.  Accepts scalars, MultiForms and QuantityValues."""
    out = []
    for v in values:
        if isinstance(v, QuantityValue):
            out.append(int(v.nonzero))
        elif isinstance(v, MultiForm):
            out.append(int(not v.is_zero()))
        else:
            out.append(int(bool(v)))
    return out


def orbit_patterns(s: State, names, catalog: Catalog | None = None, policy=None):
    """ev-vector of ``[names]`` on every qubit relabeling of ``s``.

    Returns {perm: pattern tuple} over all 24 permutations.  Each recipe is
    evaluated once on all 24 relabelings; the positional copies of a relabeled
    state are themselves relabelings, so they are read off the same table.
    """
    from .state import compose_perm
    catalog = catalog or load_catalog()
    states = [permute_qubits(s, p) for p in PERMUTATIONS]
    index = {p: n for n, p in enumerate(PERMUTATIONS)}
    cols = []
    for name in names:
        q = catalog[name]
        flags, _ = recipe_values(q.recipe, states, policy, False)
        pos = [order_to_perm(o) for o in q.positions()]
        col = []
        for pi in PERMUTATIONS:
            bits = [bool(flags[index[compose_perm(sig, pi)]]) for sig in pos]
            col.append(all(bits) if q.combine == "product" else any(bits))
        cols.append(col)
    return {pi: tuple(int(c[n]) for c in cols) for n, pi in enumerate(PERMUTATIONS)}


def catalog_to_dict(quantities: dict, signatures: dict | None = None, note: str = "") -> dict:
    out = {"format": CATALOG_FORMAT, "version": CATALOG_VERSION,
           "convention": "chain steps replace X by the transvectant (X, f)^r, starting from X = f; "
                         "order r lists the contraction order per variable pair (x, y, z, t)",
           "note": note, "quantities": {}}
    for name in QUANTITIES:
        q = quantities[name]
        out["quantities"][name] = {
            "combine": q.combine,
            "degree": q.recipe.degree,
            "multidegree": list(q.recipe.multidegree),
            "terms": [{"coefficient": str(c), "chain": [list(r) for r in ch]} for c, ch in q.recipe.terms],
        }
    if signatures is not None:
        out["signatures"] = {case: {row: [list(p) for p in pats] for row, pats in rows.items()}
                             for case, rows in signatures.items()}
    return out

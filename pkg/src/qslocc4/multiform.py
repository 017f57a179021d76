"""Multihomogeneous forms in four binary variable pairs and the transvectant.

A form of multidegree ``(d1, d2, d3, d4)`` is stored densely: entry ``e`` of
the coefficient array multiplies ``prod_k u_k0^(d_k - e_k) u_k1^(e_k)`` where
``(u_k0, u_k1)`` are the variables ``(x0, x1), (y0, y1), (z0, z1), (t0, t1)``.
The ground form ``f = sum a_ijkl x_i y_j z_k t_l`` is therefore just the
amplitude tensor reshaped to ``(2, 2, 2, 2)``.

The array kernel (:func:`deriv`, :func:`poly_mul`, :func:`transvect`) works on
arrays with arbitrary leading batch axes and, optionally, a modulus array that
broadcasts against them.  Object arrays of Gaussian rationals, complex128
arrays and int64 residue arrays all go through the same code.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .scalars import format_scalar


def _falling(n: int, k: int) -> int:
    out = 1
    for t in range(k):
        out *= n - t
    return out


def deriv(arr, pair: int, alpha: int, beta: int, mod=None):
    """Apply d^alpha/du_{k0}^alpha d^beta/du_{k1}^beta on pair ``pair`` (axis -4+pair)."""
    ax = arr.ndim - 4 + pair
    d = arr.shape[ax] - 1
    if alpha + beta > d:
        raise ValueError(f"transvectant order exceeds degree {d} in pair {pair + 1}")
    facs = [_falling(d - e, alpha) * _falling(e, beta) for e in range(beta, d - alpha + 1)]
    sl = [slice(None)] * arr.ndim
    sl[ax] = slice(beta, d - alpha + 1)
    shape = [1] * arr.ndim
    shape[ax] = len(facs)
    if arr.dtype == object:
        fac = np.array(facs, dtype=object).reshape(shape)
    elif mod is not None:
        fac = np.array(facs, dtype=np.int64).reshape(shape)
    else:
        fac = np.array(facs, dtype=arr.dtype).reshape(shape)
    out = arr[tuple(sl)] * fac
    return out % mod if mod is not None else out


def poly_mul(X, Y, mod=None):
    """Product of two batches of 4-variable-pair polynomials (a 4D convolution).

    With ``mod``, inputs must be reduced residues below 2^31; the result is reduced.
    """
    if math.prod(X.shape[-4:]) > math.prod(Y.shape[-4:]):
        X, Y = Y, X
    batch = np.broadcast_shapes(X.shape[:-4], Y.shape[:-4])
    out_shape = batch + tuple(a + b - 1 for a, b in zip(X.shape[-4:], Y.shape[-4:]))
    dtype = object if (X.dtype == object or Y.dtype == object) else np.result_type(X, Y)
    out = np.zeros(out_shape, dtype=dtype)
    for j in itertools.product(*[range(n) for n in X.shape[-4:]]):
        c = X[(Ellipsis,) + j]
        if not np.any(c):
            continue
        sl = (Ellipsis,) + tuple(slice(jj, jj + n) for jj, n in zip(j, Y.shape[-4:]))
        term = c[..., None, None, None, None] * Y
        # reduced terms are < 2^31, so int64 sums of up to 2^32 of them cannot overflow
        out[sl] += term % mod if mod is not None else term
    return out % mod if mod is not None else out


def _deriv_tree(F, orders, first: bool, mod, signed: bool):
    """All mixed derivatives needed by the transvectant, sharing prefixes.

    Returns {ks: (array, coefficient)} where ks picks, per pair, how many of the
    r derivatives hit the second variable of F (first=True) or G (first=False).
    """
    level = {(): (F, 1)}
    for pair, r in enumerate(orders):
        nxt = {}
        for ks, (f, c) in level.items():
            for k in range(r + 1):
                a, b = (r - k, k) if first else (k, r - k)
                cc = c * math.comb(r, k) * ((-1) ** k if signed else 1) if first else c
                nxt[ks + (k,)] = (deriv(f, pair, a, b, mod) if r else f, cc)
        level = nxt
    return level


def transvect(F, G, orders, mod=None, signed: bool = True):
    """Cayley-Omega transvectant of order ``orders`` = (r1, r2, r3, r4).

    No factorial normalization.  ``signed=False`` drops the alternating signs,
    which turns the operation into a coefficient majorant (used for bounds).
    """
    fs = _deriv_tree(F, orders, True, mod, signed)
    gs = _deriv_tree(G, orders, False, mod, signed)
    out = None
    for ks, (f, coef) in fs.items():
        term = poly_mul(f, gs[ks][0], mod)
        if coef == -1:
            term = -term
        elif coef != 1:
            term = term * (coef % mod) % mod if mod is not None else term * coef
        out = term if out is None else out + term
    return out % mod if mod is not None else out


@dataclass(frozen=True, eq=False)
class MultiForm:
    """A multihomogeneous form with dense coefficient storage (see module doc)."""

    coeffs: np.ndarray  # shape (d1+1, d2+1, d3+1, d4+1), object or complex

    @property
    def multidegree(self) -> tuple:
        return tuple(n - 1 for n in self.coeffs.shape)

    @classmethod
    def ground(cls, state) -> "MultiForm":
        arr = np.empty(16, dtype=object if state.backend == "exact" else complex)
        for n, x in enumerate(state.amps):
            arr[n] = x
        return cls(arr.reshape(2, 2, 2, 2))

    @classmethod
    def from_terms(cls, multidegree, terms: dict, exact: bool = True) -> "MultiForm":
        arr = np.zeros(tuple(d + 1 for d in multidegree), dtype=object if exact else complex)
        for e, c in terms.items():
            if any(not 0 <= ek <= dk for ek, dk in zip(e, multidegree)):
                raise ValueError(f"monomial {e} does not match multidegree {multidegree}")
            arr[tuple(e)] = c
        return cls(arr)

    def terms(self) -> dict:
        """Sparse view: exponent tuple (powers of x1, y1, z1, t1) -> nonzero coefficient."""
        return {tuple(int(i) for i in e): c for e, c in np.ndenumerate(self.coeffs) if c}

    def is_zero(self, policy=None, degree: int = 0, kappa: float = 1.0) -> bool:
        if self.coeffs.dtype == object:
            return not any(bool(c) for c in self.coeffs.flat)
        from .scalars import ZeroPolicy
        policy = policy or ZeroPolicy()
        return all(policy.zero(c, degree, kappa) for c in self.coeffs.flat)

    def __add__(self, other: "MultiForm") -> "MultiForm":
        if self.multidegree != other.multidegree:
            raise ValueError("multidegree mismatch")
        return MultiForm(self.coeffs + other.coeffs)

    def scale(self, c) -> "MultiForm":
        return MultiForm(self.coeffs * c)

    def permute_pairs(self, order) -> "MultiForm":
        """Relabel variable pairs: axis k of ``self`` becomes axis ``order[k]``."""
        inv = [0] * 4
        for k, q in enumerate(order):
            inv[q] = k
        return MultiForm(np.transpose(self.coeffs, inv))

    def evaluate(self, point):
        """Value at ``point`` = ((x0, x1), (y0, y1), (z0, z1), (t0, t1))."""
        total = 0
        for e, c in np.ndenumerate(self.coeffs):
            if not c:
                continue
            term = c
            for (u0, u1), ek, dk in zip(point, e, self.multidegree):
                term = term * u0 ** (dk - ek) * u1 ** ek
            total = total + term
        return total

    def __str__(self):
        names = ("x", "y", "z", "t")
        parts = []
        for e, c in self.terms().items():
            mon = "*".join(f"{n}0^{d - k}*{n}1^{k}" for n, k, d in zip(names, e, self.multidegree))
            parts.append(f"({format_scalar(c)})*{mon}")
        return " + ".join(parts) or "0"


def transvectant(f: MultiForm, g: MultiForm, orders) -> MultiForm:
    """(f, g)^orders on single forms (exact objects or complex)."""
    orders = tuple(int(r) for r in orders)
    if len(orders) != 4 or min(orders) < 0:
        raise ValueError("orders must be four non-negative integers")
    for k, r in enumerate(orders):
        if r > min(f.multidegree[k], g.multidegree[k]):
            raise ValueError(f"order {r} exceeds a degree in pair {k + 1}")
    return MultiForm(transvect(f.coeffs, g.coeffs, orders))

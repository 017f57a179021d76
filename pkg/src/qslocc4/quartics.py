"""The three diagnostic quartics and root-structure analysis of binary quartics."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .invariants import InvariantVector
from .scalars import ZeroPolicy, format_scalar

# Classical monic-quartic discriminant = DISC_NORMALIZATION * (I2^3 - 27 I3^2).
DISC_NORMALIZATION = 256

PARTITIONS = ((1, 1, 1, 1), (2, 1, 1), (2, 2), (3, 1), (4,))


# -- binary forms as coefficient lists: c[k] multiplies x^(n-k) y^k --------------
def bf_dx(c):
    n = len(c) - 1
    return [(n - k) * c[k] for k in range(n)]


def bf_dy(c):
    n = len(c) - 1
    return [(k + 1) * c[k + 1] for k in range(n)]


def bf_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


def bf_sub(a, b):
    return [x - y for x, y in zip(a, b)]


def hessian(c):
    fxx, fyy, fxy = bf_dx(bf_dx(c)), bf_dy(bf_dy(c)), bf_dx(bf_dy(c))
    return bf_sub(bf_mul(fxx, fyy), bf_mul(fxy, fxy))


def jacobian(f, g):
    return bf_sub(bf_mul(bf_dx(f), bf_dy(g)), bf_mul(bf_dy(f), bf_dx(g)))


@dataclass(frozen=True)
class BinaryQuartic:
    """c4 x^4 + c3 x^3 y + c2 x^2 y^2 + c1 x y^3 + c0 y^4."""

    c4: object
    c3: object
    c2: object
    c1: object
    c0: object

    @property
    def coeffs(self):
        return [self.c4, self.c3, self.c2, self.c1, self.c0]

    @classmethod
    def from_roots(cls, roots):
        c = [1]
        for r in roots:
            c = bf_mul(c, [1, -r])
        return cls(*c)

    def __call__(self, x, y=1):
        return sum(ck * x ** (4 - k) * y ** k for k, ck in enumerate(self.coeffs))

    def __str__(self):
        mons = ["x^4", "x^3*y", "x^2*y^2", "x*y^3", "y^4"]
        parts = [f"({format_scalar(c)})*{m}" for c, m in zip(self.coeffs, mons) if c]
        return " + ".join(parts) or "0"


def build_quartics(iv: InvariantVector):
    B, L, M, N, D = iv.B, iv.L, iv.M, iv.N, iv.Dxy
    q1 = BinaryQuartic(1, -2 * B, B * B + 2 * L + 4 * M, 4 * D - 4 * B * (M + Fraction(1, 2) * L), L * L)
    q2 = BinaryQuartic(1, -2 * B, B * B - 4 * L - 2 * M, -2 * M * B + 4 * D, M * M)
    q3 = BinaryQuartic(1, -2 * B, B * B + 2 * L - 2 * M, -(2 * L * B + 2 * M * B - 4 * D), N * N)
    return q1, q2, q3


@dataclass(frozen=True)
class QuarticCovariants:
    I2: object
    I3: object
    Delta: object
    Hess: list
    T: list


def quartic_covariants(q: BinaryQuartic) -> QuarticCovariants:
    c4, c3, c2, c1, c0 = q.coeffs
    # f = alpha x^4 - 4 beta x^3 y + 6 gamma x^2 y^2 - 4 delta x y^3 + omega y^4
    alpha, beta, gamma, delta, omega = c4, -Fraction(1, 4) * c3, Fraction(1, 6) * c2, -Fraction(1, 4) * c1, c0
    I2 = alpha * omega - 4 * beta * delta + 3 * gamma * gamma
    I3 = (alpha * gamma * omega - alpha * delta * delta - beta * beta * omega
          - gamma ** 3 + 2 * beta * gamma * delta)
    H = hessian(q.coeffs)
    T = jacobian(q.coeffs, H)
    return QuarticCovariants(I2, I3, I2 ** 3 - 27 * I3 * I3, H, T)


@dataclass(frozen=True)
class RootProfile:
    partition: tuple
    zero_mult: int
    witnesses: dict = field(default_factory=dict)

    @property
    def has_zero_root(self) -> bool:
        return self.zero_mult > 0

    def as_dict(self):
        return {"partition": list(self.partition), "zero_mult": self.zero_mult,
                "witnesses": dict(self.witnesses)}


# Quartic coefficient of x^(4-k) y^k has amplitude degree 2k; a covariant of the
# quartic of weight w has its j-th coefficient in degree 2w + 2j.
def _form_zero(coeffs, base_deg, policy):
    return all(policy.zero(c, base_deg + 2 * j) for j, c in enumerate(coeffs))


def partition_of(q: BinaryQuartic, policy: ZeroPolicy | None = None, cov: QuarticCovariants | None = None):
    """Root multiplicities of a quartic from the covariant cascade (never from root finding)."""
    policy = policy or ZeroPolicy()
    cov = cov or quartic_covariants(q)
    w = {"Delta": not policy.zero(cov.Delta, 24),
         "T": not _form_zero(cov.T, 6, policy),
         "I2": not policy.zero(cov.I2, 8),
         "I3": not policy.zero(cov.I3, 12),
         "Hess": not _form_zero(cov.Hess, 4, policy)}
    # A triple root also has T != 0, so the I2 = I3 = 0 rows are tested before
    # the "exactly one double root" row.
    if w["Delta"]:
        part = (1, 1, 1, 1)
    elif not w["I2"] and not w["I3"]:
        part = (3, 1) if w["Hess"] else (4,)
    elif w["T"]:
        part = (2, 1, 1)
    else:
        part = (2, 2)
    return part, w


# zero-root predicates per quartic label: (constant term, next, next)
ZERO_ROOT_CHAIN = {1: ("L", "P", "S1"), 2: ("M", "Dxy", "S2"), 3: ("N", "Dxy", "S3")}


def zero_multiplicity(iv: InvariantVector, which: int, policy: ZeroPolicy | None = None) -> int:
    from .invariants import DEGREES
    policy = policy or ZeroPolicy()
    mult = 0
    for name in ZERO_ROOT_CHAIN[which] + ("B",):
        if not policy.zero(getattr(iv, name), DEGREES[name]):
            return mult
        mult += 1
    return 4


def root_profile(q: BinaryQuartic, iv: InvariantVector, which: int,
                 policy: ZeroPolicy | None = None) -> RootProfile:
    part, w = partition_of(q, policy)
    zm = zero_multiplicity(iv, which, policy)
    if zm > max(part):
        # the zero root cannot be more repeated than the largest root cluster
        raise ArithmeticError(f"inconsistent root profile for Q{which}: partition {part}, zero multiplicity {zm}")
    return RootProfile(part, zm, w)


@dataclass(frozen=True)
class NumericRoots:
    roots: list  # [(root, multiplicity)]
    ill_conditioned: bool = False

    @property
    def partition(self):
        return tuple(sorted((m for _, m in self.roots), reverse=True))


def numeric_roots(q: BinaryQuartic, tol: float = 1e-4) -> NumericRoots:
    """Roots of q(x, 1) clustered at relative radius ``tol``.

    Multiple roots of a perturbed quartic split by roughly eps^(1/m), hence the
    loose default.  Clusters whose separation is comparable to the radius are
    flagged rather than silently merged.
    """
    c = np.array([complex(x) for x in q.coeffs])
    nz = np.flatnonzero(np.abs(c) > 0)
    lead = nz[0] if len(nz) else 4
    raw = np.roots(c[lead:]) if lead < 4 else np.array([])
    scale = max(1.0, max((abs(r) for r in raw), default=1.0))
    radius = tol * scale
    clusters: list[list[complex]] = []
    for r in sorted(raw, key=lambda z: (z.real, z.imag)):
        for cl in clusters:
            if abs(np.mean(cl) - r) <= radius:
                cl.append(r)
                break
        else:
            clusters.append([r])
    centers = [complex(np.mean(cl)) for cl in clusters]
    ill = any(radius < abs(a - b) <= 10 * radius for i, a in enumerate(centers) for b in centers[i + 1:])
    roots = [(ctr, len(cl)) for ctr, cl in zip(centers, clusters)]
    if lead:
        roots.append((complex("inf"), int(lead)))
    return NumericRoots(roots, ill)


def quartic_report(q: BinaryQuartic, prof: RootProfile | None = None) -> dict:
    cov = quartic_covariants(q)
    out = {"coefficients": [format_scalar(c) for c in q.coeffs],
           "I2": format_scalar(cov.I2), "I3": format_scalar(cov.I3), "Delta": format_scalar(cov.Delta),
           "Hess": [format_scalar(c) for c in cov.Hess], "T": [format_scalar(c) for c in cov.T]}
    if prof is not None:
        out.update(prof.as_dict())
    return out

"""Generators of the SLOCC-invariant ring and the invariants derived from them."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, fields
from fractions import Fraction

from .scalars import ZeroPolicy, format_scalar
from .state import State

HALF = Fraction(1, 2)

# amplitude-degree of each named invariant
DEGREES = {"B": 2, "L": 4, "M": 4, "N": 4, "Dxy": 6, "P": 6,
           "S1": 4, "S2": 4, "S3": 4, "I2": 8, "I3": 12, "Delta": 24}


def det(m):
    """Determinant by cofactor expansion; ring-generic (exact or float)."""
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = 0
    for c in range(n):
        if not m[0][c]:
            continue
        minor = [row[:c] + row[c + 1:] for row in m[1:]]
        term = m[0][c] * det(minor)
        total = total + term if c % 2 == 0 else total - term
    return total


def _grid(s: State, labels):
    return [[s[lab] for lab in row.split()] for row in labels]


# the three 4x4 matrices, exactly as labeled
L_MATRIX = ("0000 0010 0001 0011", "1000 1010 1001 1011",
            "0100 0110 0101 0111", "1100 1110 1101 1111")
M_MATRIX = ("0000 0001 0100 0101", "1000 1001 1100 1101",
            "0010 0011 0110 0111", "1010 1011 1110 1111")
N_MATRIX = ("0000 1000 0001 1001", "0100 1100 0101 1101",
            "0010 1010 0011 1011", "0110 1110 0111 1111")


def inv_B(s: State):
    """Half the full epsilon contraction of the amplitude tensor with itself."""
    total = 0
    for bits in itertools.product((0, 1), repeat=4):
        if bits[0]:
            continue  # each complementary pair once; the 1/2 cancels the double count
        comp = tuple(1 - b for b in bits)
        term = s.a(*bits) * s.a(*comp)
        total = total - term if sum(bits) % 2 else total + term
    return total


def inv_LMN(s: State):
    """The three labeled determinants; independently computed (L+M+N=0 is a check)."""
    return (det(_grid(s, L_MATRIX)), det(_grid(s, M_MATRIX)), det(_grid(s, N_MATRIX)))


def bxy_matrix(s: State):
    """3x3 matrix of b_xy = det(d^2 f / dz_k dt_l) in the bases [x0^2, x0x1, x1^2], [y0^2, y0y1, y1^2]."""
    B = [[0] * 3 for _ in range(3)]
    for i, j, i2, j2 in itertools.product((0, 1), repeat=4):
        # m_00 * m_11 - m_01 * m_10 with m_kl = sum a_ijkl x_i y_j
        c = s.a(i, j, 0, 0) * s.a(i2, j2, 1, 1) - s.a(i, j, 0, 1) * s.a(i2, j2, 1, 0)
        B[i + i2][j + j2] = B[i + i2][j + j2] + c
    return B


def inv_Dxy(s: State):
    return -det(bxy_matrix(s))


def closed_I2(B, L, M, D):
    return (Fraction(4, 3) * L * L + 2 * B * D - Fraction(4, 3) * B * B * M
            - Fraction(2, 3) * B * B * L + Fraction(1, 12) * B ** 4
            + Fraction(4, 3) * L * M + Fraction(4, 3) * M * M)


def closed_I3(B, L, M, D):
    # leading coefficient is 4/3 (the symbolic expansion of I3(Q1) gives 4/3, not 4/2)
    return (Fraction(4, 3) * D * B * M + Fraction(2, 3) * D * B * L
            - Fraction(5, 9) * B * B * M * L + Fraction(4, 9) * L * L * M - D * D
            - Fraction(5, 9) * B * B * M * M + Fraction(1, 18) * B ** 4 * L
            + Fraction(1, 9) * B ** 4 * M - Fraction(4, 9) * L * M * M
            - Fraction(1, 6) * B ** 3 * D - Fraction(2, 9) * B * B * L * L
            + Fraction(8, 27) * L ** 3 - Fraction(1, 216) * B ** 6 - Fraction(8, 27) * M ** 3)


@dataclass(frozen=True)
class InvariantVector:
    B: object
    L: object
    M: object
    N: object
    Dxy: object
    P: object
    S1: object
    S2: object
    S3: object
    I2: object
    I3: object
    Delta: object
    backend: str = "exact"

    def generators(self):
        return (self.B, self.L, self.M, self.Dxy)

    def as_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self) if f.name != "backend"}

    def zero_flags(self, policy: ZeroPolicy | None = None):
        policy = policy or ZeroPolicy()
        return {k: policy.zero(v, DEGREES[k]) for k, v in self.as_dict().items()}

    def report(self) -> dict:
        out = {k: format_scalar(v) for k, v in self.as_dict().items()}
        out["backend"] = self.backend
        return out

    def to_json(self) -> str:
        return json.dumps(self.report())


def derived_invariants(B, L, M, N, Dxy, backend="exact") -> InvariantVector:
    P = Dxy - B * M
    S1 = B * B + 4 * M
    S2 = B * B - 4 * L
    S3 = B * B - 4 * M
    I2 = closed_I2(B, L, M, Dxy)
    I3 = closed_I3(B, L, M, Dxy)
    Delta = I2 ** 3 - 27 * I3 * I3
    return InvariantVector(B, L, M, N, Dxy, P, S1, S2, S3, I2, I3, Delta, backend)


def invariant_vector(s: State) -> InvariantVector:
    L, M, N = inv_LMN(s)
    iv = derived_invariants(inv_B(s), L, M, N, inv_Dxy(s), s.backend)
    return iv

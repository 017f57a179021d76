import itertools
import json
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given

from helpers import random_state, states
from qslocc4.invariants import DEGREES, InvariantVector, invariant_vector
from qslocc4.normal_forms import gen_G
from qslocc4.quartics import build_quartics, quartic_covariants
from qslocc4.scalars import GaussianRational
from qslocc4.state import apply_local, basis_state, ghz, random_sl2_quadruple


def _sym(z):
    return sympy.Rational(z.re.numerator, z.re.denominator) + sympy.I * sympy.Rational(z.im.numerator, z.im.denominator)


def _gr(e):
    e = sympy.nsimplify(sympy.expand(e))
    re, im = e.as_real_imag()
    return GaussianRational(Fraction(str(re)), Fraction(str(im)))


G1234 = gen_G(1, 2, 3, 4)


def test_G1234_values():
    iv = invariant_vector(G1234)
    assert (iv.B, iv.L, iv.M, iv.N, iv.Dxy) == (15, 24, 0, -24, -25)
    assert iv.S2 == 225 - 96
    assert iv.Delta == 89302500


def test_ghz_values():
    iv = invariant_vector(ghz())
    assert (iv.B, iv.L, iv.Dxy, iv.P) == (1, 0, 0, 0)


def test_B_single_term():
    assert invariant_vector(basis_state({"0000": 1, "0111": 2, "1000": 3})).B == -6


def test_B_is_epsilon_contraction():
    rng = random.Random(3)
    eps = [[0, 1], [-1, 0]]
    for _ in range(10):
        s = random_state(rng)
        tot = 0
        for i, j, k, l, i2, j2, k2, l2 in itertools.product((0, 1), repeat=8):
            e = eps[i][i2] * eps[j][j2] * eps[k][k2] * eps[l][l2]
            if e:
                tot += e * s.a(i, j, k, l) * s.a(i2, j2, k2, l2)
        assert invariant_vector(s).B == tot * Fraction(1, 2)


def test_Dxy_against_symbolic_expansion():
    x0, x1, y0, y1, z0, z1, t0, t1 = sympy.symbols("x0 x1 y0 y1 z0 z1 t0 t1")
    X, Y, Z, T = (x0, x1), (y0, y1), (z0, z1), (t0, t1)
    rng = random.Random(4)
    for _ in range(3):
        s = random_state(rng, 4)
        f = sum(_sym(s.a(i, j, k, l)) * X[i] * Y[j] * Z[k] * T[l]
                for i, j, k, l in itertools.product((0, 1), repeat=4))
        hess = sympy.Matrix(2, 2, lambda a, b: sympy.diff(f, Z[a], T[b]))
        bxy = sympy.Poly(sympy.expand(hess.det()), x0, x1, y0, y1)
        xs = [x0 ** 2, x0 * x1, x1 ** 2]
        ys = [y0 ** 2, y0 * y1, y1 ** 2]
        mat = sympy.Matrix(3, 3, lambda a, b: bxy.coeff_monomial(xs[a] * ys[b]))
        assert invariant_vector(s).Dxy == _gr(-mat.det())


def test_LMN_are_the_labeled_determinants():
    rng = random.Random(5)
    rows = {"L": ["0000 0010 0001 0011", "1000 1010 1001 1011", "0100 0110 0101 0111", "1100 1110 1101 1111"],
            "M": ["0000 0001 0100 0101", "1000 1001 1100 1101", "0010 0011 0110 0111", "1010 1011 1110 1111"],
            "N": ["0000 1000 0001 1001", "0100 1100 0101 1101", "0010 1010 0011 1011", "0110 1110 0111 1111"]}
    for _ in range(5):
        s = random_state(rng)
        iv = invariant_vector(s)
        for name, labels in rows.items():
            m = sympy.Matrix([[_sym(s[lab]) for lab in r.split()] for r in labels])
            assert getattr(iv, name) == _gr(m.det())


@given(states)
def test_L_plus_M_plus_N_vanishes(s):
    iv = invariant_vector(s)
    assert iv.L + iv.M + iv.N == 0
    assert iv.Delta == iv.I2 ** 3 - 27 * iv.I3 ** 2


@given(states)
def test_derived_invariants(s):
    iv = invariant_vector(s)
    assert iv.P == iv.Dxy - iv.B * iv.M
    assert (iv.S1, iv.S2, iv.S3) == (iv.B ** 2 + 4 * iv.M, iv.B ** 2 - 4 * iv.L, iv.B ** 2 - 4 * iv.M)


@given(states)
def test_closed_I2_I3_match_the_quartic(s):
    iv = invariant_vector(s)
    cov = quartic_covariants(build_quartics(iv)[0])
    assert (cov.I2, cov.I3) == (iv.I2, iv.I3)


@pytest.mark.parametrize("lam", [2, 3, GaussianRational(0, 1)])
def test_homogeneity(lam):
    rng = random.Random(6)
    for _ in range(5):
        s = random_state(rng)
        a, b = invariant_vector(s), invariant_vector(s.scaled(lam))
        for k, deg in DEGREES.items():
            assert getattr(b, k) == getattr(a, k) * lam ** deg, k


def test_slocc_invariance():
    rng = random.Random(7)
    for seed in range(20):
        s = random_state(rng)
        assert invariant_vector(apply_local(s, random_sl2_quadruple(seed, 3))) == invariant_vector(s)


def test_float_backend_agrees():
    rng = random.Random(8)
    for _ in range(10):
        s = random_state(rng)
        ex, fl = invariant_vector(s), invariant_vector(s.to_float())
        assert fl.backend == "float"
        for k, deg in DEGREES.items():
            assert abs(complex(getattr(ex, k)) - getattr(fl, k)) <= 1e-9 * max(1, s.scale) ** deg * 1e3, k


def test_report_lists_all_scalars():
    rep = json.loads(invariant_vector(G1234).to_json())
    assert rep["backend"] == "exact"
    assert {k for k in rep if k != "backend"} == {f for f in InvariantVector.__dataclass_fields__ if f != "backend"}
    assert rep["Dxy"] == "-25"

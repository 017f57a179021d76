import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from helpers import random_state, small_fractions, states
from qslocc4.invariants import invariant_vector
from qslocc4.normal_forms import free_parameters, gen_family, gen_G, specialize
from qslocc4.quartics import (DISC_NORMALIZATION, BinaryQuartic, build_quartics, numeric_roots, partition_of,
                              quartic_covariants, quartic_report, root_profile, zero_multiplicity)
from qslocc4.scalars import GaussianRational, ZeroPolicy
from qslocc4.state import basis_state, ghz

EXAMPLE1 = basis_state({"0100": 2, "1101": 1, "1111": 4, "0010": 3})


def _q(*c):
    return BinaryQuartic(*[GaussianRational(x) for x in c])


def test_G1234_Q1():
    q1 = build_quartics(invariant_vector(gen_G(1, 2, 3, 4)))[0]
    assert q1.coeffs == [1, -30, 273, -820, 576]


def test_constant_terms_are_squares():
    iv = invariant_vector(random_state(random.Random(1)))
    assert [q.c0 for q in build_quartics(iv)] == [iv.L ** 2, iv.M ** 2, iv.N ** 2]
    assert all(q.c4 == 1 for q in build_quartics(iv))


def test_quadruple_root_has_zero_hessian():
    cov = quartic_covariants(_q(1, -4, 6, -4, 1))
    assert not any(cov.Hess)


def test_two_double_roots():
    cov = quartic_covariants(_q(1, 6, 9, 0, 0))      # x^2 (x + 3y)^2
    assert not any(cov.T) and cov.I2 != 0


def test_discriminant_of_G1234_Q1():
    assert quartic_covariants(build_quartics(invariant_vector(gen_G(1, 2, 3, 4)))[0]).Delta == 89302500


def test_discriminant_normalization_symbolic():
    c4, c3, c2, c1, c0, x = sympy.symbols("c4 c3 c2 c1 c0 x")
    a, b, g, d, w = c4, -c3 / 4, c2 / 6, -c1 / 4, c0
    I2 = a * w - 4 * b * d + 3 * g ** 2
    I3 = a * g * w - a * d ** 2 - b ** 2 * w - g ** 3 + 2 * b * g * d
    disc = sympy.discriminant(c4 * x ** 4 + c3 * x ** 3 + c2 * x ** 2 + c1 * x + c0, x)
    assert sympy.expand(disc - DISC_NORMALIZATION * (I2 ** 3 - 27 * I3 ** 2)) == 0


@given(st.lists(small_fractions, min_size=5, max_size=5))
def test_covariants_match_symbolic_formulas(c):
    x = sympy.symbols("x")
    q = _q(*c)
    disc = sympy.discriminant(sum(sympy.Rational(ck.numerator, ck.denominator) * x ** (4 - k)
                                  for k, ck in enumerate(c)), x) if c[0] else None
    cov = quartic_covariants(q)
    if disc is not None:
        assert cov.Delta * DISC_NORMALIZATION == GaussianRational(Fraction(str(disc)))


def _distinct(rng, n):
    out = set()
    while len(out) < n:
        out.add(Fraction(rng.randint(-30, 30), rng.randint(1, 5)))
    return list(out)


@pytest.mark.parametrize("shape", [(1, 1, 1, 1), (2, 1, 1), (2, 2), (3, 1), (4,)])
def test_partition_cascade(shape):
    rng = random.Random(hash(shape) % 1000)
    for _ in range(20):
        roots = [r for r, m in zip(_distinct(rng, len(shape)), shape) for _ in range(m)]
        q = BinaryQuartic.from_roots([GaussianRational(r) for r in roots])
        assert partition_of(q)[0] == shape


def test_root_profiles_of_examples():
    iv = invariant_vector(gen_G(1, 2, 3, 4))
    p = root_profile(build_quartics(iv)[0], iv, 1)
    assert (p.partition, p.zero_mult) == ((1, 1, 1, 1), 0)
    for s in (ghz(), EXAMPLE1):
        iv = invariant_vector(s)
        for k, q in enumerate(build_quartics(iv), 1):
            p = root_profile(q, iv, k)
            assert (p.partition, p.zero_mult) == ((2, 2), 2)


def _trailing_zeros(q):
    n = 0
    for c in reversed(q.coeffs):
        if c:
            break
        n += 1
    return n


def test_zero_root_predicates_match_trailing_coefficients():
    rng = random.Random(9)
    pool = [random_state(rng, 3, 0.3) for _ in range(60)]
    pool += [specialize("G_abcd", spec, [Fraction(rng.randint(1, 9)) for _ in free_parameters("G_abcd", spec)])
             for spec in ("d=0", "c=d=0", "b=c=d=0", "a=b+c, d=0") for _ in range(5)]
    pool += [gen_family(f, [rng.randint(1, 9) for _ in range(n)])
             for f, n in (("L_abc2", 3), ("L_a2b2", 2), ("L_ab3", 2), ("L_a4", 1), ("L_a2_0_3+1", 1))]
    for s in pool:
        iv = invariant_vector(s)
        for k, q in enumerate(build_quartics(iv), 1):
            assert zero_multiplicity(iv, k) == _trailing_zeros(q), (s, k)


def test_numeric_roots_examples():
    r = numeric_roots(_q(1, 6, 9, 0, 0))
    assert sorted((round(z.real, 6), m) for z, m in r.roots) == [(-3.0, 2), (0.0, 2)]
    # a quadruple root splits by ~eps^(1/4) under float root-finding
    assert numeric_roots(_q(1, -4, 6, -4, 1), tol=1e-3).partition == (4,)
    q1 = build_quartics(invariant_vector(gen_G(1, 2, 3, 4)))[0]
    assert sorted(round(z.real, 9) for z, _ in numeric_roots(q1).roots) == [1, 4, 9, 16]


def test_numeric_roots_agree_with_cascade_on_float_states():
    rng = random.Random(10)
    pool = [random_state(rng, 5) for _ in range(1000)]
    pool += [gen_family(f, [rng.randint(1, 9) for _ in range(n)])
             for f, n in (("L_abc2", 3), ("L_a2b2", 2), ("L_ab3", 2), ("L_a4", 1)) for _ in range(5)]
    pool += [ghz(), EXAMPLE1]
    checked = 0
    for s in pool:
        fs = s.to_float()
        iv = invariant_vector(fs)
        pol = ZeroPolicy(1e-9, fs.scale)
        for q in build_quartics(iv):
            nr = numeric_roots(q)
            if nr.ill_conditioned:
                continue
            assert nr.partition == partition_of(q, pol)[0]
            checked += 1
    assert checked > 2900


def test_quartic_report():
    rep = quartic_report(_q(1, -2, 1, 0, 0))
    assert rep["coefficients"] == ["1", "-2", "1", "0", "0"]
    assert rep["I2"] == "1/12"


@given(states)
def test_three_quartics_share_invariants(s):
    iv = invariant_vector(s)
    covs = [quartic_covariants(q) for q in build_quartics(iv)]
    assert len({(c.I2, c.I3, c.Delta) for c in covs}) == 1
    assert covs[0].Delta == iv.Delta

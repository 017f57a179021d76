import itertools
import math
import random

import numpy as np
import pytest
from hypothesis import given

from helpers import random_state, states
from qslocc4.invariants import bxy_matrix, invariant_vector
from qslocc4.multiform import MultiForm, transvect, transvectant
from qslocc4.normal_forms import gen_G
from qslocc4.scalars import GaussianRational

# (f, f)^(1,1,1,1) of the ground form is SCALE_B * B; frozen once
SCALE_B = 2
# (f, f)^(0,0,1,1) is SCALE_BXY * b_xy coefficientwise
SCALE_BXY = 2


def _random_form(rng, md):
    terms = {e: GaussianRational(rng.randint(-5, 5), rng.randint(-5, 5))
             for e in itertools.product(*[range(d + 1) for d in md])}
    return MultiForm.from_terms(md, terms)


def _naive(f, g, orders):
    """Omega^r applied to f(u) g(u') pair by pair, written out with binomials."""
    F, G = f.coeffs, g.coeffs
    out = 0
    for ks in itertools.product(*[range(r + 1) for r in orders]):
        a, b = F, G
        coef = 1
        for pair, (r, k) in enumerate(zip(orders, ks)):
            coef *= math.comb(r, k) * (-1) ** k
            a = _d(a, pair, r - k, k)
            b = _d(b, pair, k, r - k)
        out = out + coef * _mul(a, b)
    return out


def _d(arr, pair, alpha, beta):
    d = arr.shape[pair] - 1
    out = np.zeros(tuple(n - (alpha + beta) if k == pair else n for k, n in enumerate(arr.shape)), dtype=object)
    for e in np.ndindex(arr.shape):
        ek = e[pair]
        if ek < beta or d - ek < alpha:
            continue
        fac = math.perm(d - ek, alpha) * math.perm(ek, beta)
        tgt = tuple(ek - beta if k == pair else x for k, x in enumerate(e))
        out[tgt] += arr[e] * fac
    return out


def _mul(a, b):
    out = np.zeros(tuple(x + y - 1 for x, y in zip(a.shape, b.shape)), dtype=object)
    for e in np.ndindex(a.shape):
        for e2 in np.ndindex(b.shape):
            out[tuple(x + y for x, y in zip(e, e2))] += a[e] * b[e2]
    return out


@pytest.mark.parametrize("md1,md2,orders", [
    ((1, 1, 1, 1), (1, 1, 1, 1), (1, 1, 1, 1)),
    ((2, 2, 0, 0), (1, 1, 1, 1), (1, 1, 0, 0)),
    ((3, 1, 2, 1), (2, 1, 3, 2), (2, 1, 2, 1)),
    ((2, 0, 1, 1), (1, 1, 1, 1), (0, 0, 1, 1)),
])
def test_transvect_matches_naive_formula(md1, md2, orders):
    rng = random.Random(hash((md1, md2, orders)) % 997)
    f, g = _random_form(rng, md1), _random_form(rng, md2)
    h = transvectant(f, g, orders)
    assert h.multidegree == tuple(a + b - 2 * r for a, b, r in zip(md1, md2, orders))
    assert (h.coeffs == _naive(f, g, orders)).all()


def test_modular_lane_matches_exact():
    rng = random.Random(4)
    p = 2147483029  # prime, 1 mod 4
    md1, md2 = (2, 1, 1, 2), (1, 1, 2, 1)
    f = MultiForm.from_terms(md1, {e: GaussianRational(c.re) for e, c in _random_form(rng, md1).terms().items()})
    g = MultiForm.from_terms(md2, {e: GaussianRational(c.re) for e, c in _random_form(rng, md2).terms().items()})
    red = np.vectorize(lambda c: int(c.re) % p if c else 0, otypes=[np.int64])
    hm = transvect(red(f.coeffs), red(g.coeffs), (1, 1, 1, 1), mod=p)
    assert (red(transvectant(f, g, (1, 1, 1, 1)).coeffs) == hm).all()


def test_bilinear():
    rng = random.Random(5)
    f, f2, g = (_random_form(rng, (1, 2, 1, 1)) for _ in range(3))
    lam = GaussianRational(2, -3)
    lhs = transvectant(f + f2.scale(lam), g, (1, 1, 0, 1)).coeffs
    rhs = transvectant(f, g, (1, 1, 0, 1)).coeffs + lam * transvectant(f2, g, (1, 1, 0, 1)).coeffs
    assert (lhs == rhs).all()


def test_order_exceeding_degree_rejected():
    f = _random_form(random.Random(6), (1, 1, 1, 1))
    with pytest.raises(ValueError):
        transvectant(f, f, (2, 0, 0, 0))
    with pytest.raises(ValueError):
        transvectant(f, f, (1, 1, 1))


@given(states)
def test_single_pair_jacobian_of_linear_form_with_itself_vanishes(s):
    f = MultiForm.ground(s)
    assert transvectant(f, f, (1, 0, 0, 0)).is_zero()


def test_full_contraction_is_B():
    f = MultiForm.ground(gen_G(1, 2, 3, 4))
    c = transvectant(f, f, (1, 1, 1, 1))
    assert c.multidegree == (0, 0, 0, 0)
    assert c.coeffs[0, 0, 0, 0] == SCALE_B * 15


@given(states)
def test_full_contraction_tracks_B(s):
    c = transvectant(MultiForm.ground(s), MultiForm.ground(s), (1, 1, 1, 1))
    assert c.coeffs[0, 0, 0, 0] == SCALE_B * invariant_vector(s).B


@pytest.mark.parametrize("seed", range(10))
def test_zt_contraction_is_bxy(seed):
    s = random_state(random.Random(seed)) if seed else gen_G(1, 2, 3, 4)
    h = transvectant(MultiForm.ground(s), MultiForm.ground(s), (0, 0, 1, 1))
    assert h.multidegree == (2, 2, 0, 0)
    b = bxy_matrix(s)
    for e1, e2 in itertools.product(range(3), repeat=2):
        assert h.coeffs[e1, e2, 0, 0] == SCALE_BXY * b[e1][e2]


def test_terms_round_trip_and_validation():
    rng = random.Random(7)
    f = _random_form(rng, (2, 0, 1, 3))
    g = MultiForm.from_terms(f.multidegree, f.terms())
    assert (g.coeffs == f.coeffs).all()
    assert all(c for c in f.terms().values())
    with pytest.raises(ValueError):
        MultiForm.from_terms((1, 1, 1, 1), {(2, 0, 0, 0): 1})


def test_evaluate_and_permute_pairs():
    s = gen_G(1, 2, 3, 4)
    f = MultiForm.ground(s)
    pt = lambda *bits: tuple((1 - b, b) for b in bits)
    assert f.evaluate(pt(0, 0, 0, 0)) == s.a(0, 0, 0, 0)
    assert f.evaluate(pt(1, 0, 0, 1)) == s.a(1, 0, 0, 1)
    g = f.permute_pairs((1, 0, 2, 3))
    assert g.evaluate(pt(0, 1, 0, 1)) == f.evaluate(pt(1, 0, 0, 1))

"""Acceptance criteria 1-10.

Each ``check_N`` returns a one-line summary or raises AssertionError.  Under
pytest every criterion is one test and the terminal summary prints one
PASS/FAIL line per criterion; ``python tests/test_acceptance.py`` prints the
same lines without pytest.
"""
from __future__ import annotations

import random
import sys
from fractions import Fraction
from pathlib import Path

import mpmath

sys.path.insert(0, str(Path(__file__).parent))
from helpers import nonzero_rat, rat, random_state  # noqa: E402

from qslocc4.cases import CASE_TABLES, PATTERN_CASES  # noqa: E402
from qslocc4.classifier import (canonicalize_d4, case_of, recover_parameters,  # noqa: E402
                                verstraete_type)
from qslocc4.covariants import evaluate_quantity, load_catalog  # noqa: E402
from qslocc4.geometry import multirank, so8_checks, stratum_of  # noqa: E402
from qslocc4.invariants import invariant_vector  # noqa: E402
from qslocc4.normal_forms import (FAMILY_ARITY, NILPOTENT, free_parameters, gen_family,  # noqa: E402
                                  gen_G, specialize)
from qslocc4.quartics import build_quartics, quartic_covariants  # noqa: E402
from qslocc4.scalars import GaussianRational  # noqa: E402
from qslocc4.state import apply_local, basis_state, ghz, random_sl2_quadruple  # noqa: E402

# generic case of each parametrized family (used to reject degenerate parameters)
GENERIC_CASE = {"G_abcd": "1a", "L_abc2": "1b", "L_ab3": "1c", "L_a2b2": "2b", "L_a4": "2c",
                "L_a2_0_3+1": "3c"}
GENERIC_TYPE = {"G_abcd": "G_abcd", "L_abc2": "L_abc2", "L_ab3": "L_ab3", "L_a2b2": "L_a2b2",
                "L_a4": "L_a4", "L_a2_0_3+1": "L_a203"}

EXAMPLE1 = basis_state({"0100": 2, "1101": 1, "1111": 4, "0010": 3})
EPR2 = basis_state({"0000": 1, "0011": 1, "1100": 1, "1111": 1})


def _G_closed(a, b, c, d):
    return {
        "B": Fraction(1, 2) * (a * a + b * b + c * c + d * d),
        "L": a * b * c * d,
        "M": Fraction(1, 16) * (a + b + c + d) * (c + d - a - b) * (a - b + c - d) * (a - b + d - c),
        "N": Fraction(1, 16) * (a + b + c - d) * (a - b - c - d) * (a - b + c + d) * (a + b - c + d),
        "Dxy": Fraction(1, 32) * (b * b - a * a + c * c - d * d) * (-b * b + a * a + c * c - d * d)
        * (b * b + a * a - c * c - d * d),
    }


def _monic_from_roots(roots):
    c = [Fraction(1)]
    for r in roots:
        c = [x - r * y for x, y in zip(c + [0], [0] + c)]
    return c


def _coeffs(q):
    return [GaussianRational(x) for x in q.coeffs]


def _generic_member(fid, rng):
    while True:
        s = gen_family(fid, [nonzero_rat(rng, 60) for _ in range(FAMILY_ARITY[fid])])
        if case_of(s) == GENERIC_CASE[fid]:
            return s


def _row_member(row, case, rng):
    names = free_parameters(row.family, row.constraints)
    while True:
        s = specialize(row.family, row.constraints,
                       [Fraction(rng.choice((-1, 1)) * rng.randint(1, 60), rng.randint(1, 9)) for _ in names])
        if case_of(s) == case:
            return s


def check_1():
    rng = random.Random(101)
    for _ in range(100):
        p = [Fraction(rng.randint(-100, 100), rng.randint(1, 100)) for _ in range(4)]
        if not any(p):
            continue
        iv = invariant_vector(gen_G(*p))
        for k, v in _G_closed(*p).items():
            assert getattr(iv, k) == v, (k, p)
    return "B, L, M, N, Dxy closed forms exact at 100 tuples"


def check_2():
    rng = random.Random(102)
    for _ in range(100):
        p = [rat(rng) for _ in range(4)]
        if not any(p):
            continue
        q1 = build_quartics(invariant_vector(gen_G(*p)))[0]
        assert _coeffs(q1) == [GaussianRational(x) for x in _monic_from_roots([x * x for x in p])], p
    for _ in range(100):
        iv = invariant_vector(random_state(rng))
        covs = [quartic_covariants(q) for q in build_quartics(iv)]
        assert all(c.I2 == iv.I2 and c.I3 == iv.I3 for c in covs)
        assert iv.Delta == iv.I2 ** 3 - 27 * iv.I3 ** 2
    n = 0
    with mpmath.workdps(40):
        while n < 20:
            iv = invariant_vector(random_state(rng, 3))
            if not iv.Delta:
                continue
            q = build_quartics(iv)[0]
            roots = mpmath.polyroots([mpmath.mpc(complex(c)) for c in q.coeffs], maxsteps=200, extraprec=100)
            disc = mpmath.mpc(1)
            for i in range(4):
                for j in range(i + 1, 4):
                    disc *= (roots[i] - roots[j]) ** 2
            delta = complex(iv.Delta)
            assert abs(complex(disc / 256) - delta) <= 1e-8 * abs(delta)
            n += 1
    return "Q1 = prod(x - a^2) x100; I2, I3 shared by Q1..Q3 x100; Delta = disc/256 x20"


def check_3():
    target1 = [1, 6, 9, 0, 0]           # x^2 (x + 3y)^2
    for q in build_quartics(invariant_vector(EXAMPLE1)):
        assert _coeffs(q) == [GaussianRational(x) for x in target1]
    r1 = verstraete_type(EXAMPLE1)
    assert r1.type_name == "L_aa02" and r1.case_path[-1] == "3(c)", r1.type_name
    assert r1.ev["identity"] == [0, 1, 1, 0]
    target2 = [1, -2, 1, 0, 0]          # x^2 (x - y)^2
    for q in build_quartics(invariant_vector(ghz())):
        assert _coeffs(q) == [GaussianRational(x) for x in target2]
    r2 = verstraete_type(ghz())
    assert r2.type_name == "G_00aa" and r2.ev["identity"] == [0, 0, 0, 0]
    got = sorted(tuple(map(str, _coeffs(q))) for q in build_quartics(invariant_vector(EPR2)))
    want = sorted(tuple(str(GaussianRational(x)) for x in c)
                  for c in ([1, -4, 6, -4, 1], [1, -4, 6, -4, 1], [1, -4, 0, 0, 0]))
    assert got == want
    r3 = verstraete_type(EPR2)
    assert r3.type_name == "G_a000" and r3.case_path[-1] == "2(c)" and r3.ev["identity"] == [0, 0, 0, 0]
    return "Example 1 -> L_aa02, GHZ -> G_00aa, EPR x EPR -> G_a000"


def check_4(per_row=20):
    rng = random.Random(104)
    cat = load_catalog()
    rows = 0
    for case in PATTERN_CASES:
        t = CASE_TABLES[case]
        for row in t.rows:
            rows += 1
            for _ in range(per_row):
                s = _row_member(row, case, rng)
                got = tuple(int(evaluate_quantity(cat[q], s).nonzero) for q in t.quantities)
                assert got == row.pattern, (case, row.name, got, s)
    return f"{rows} table rows x {per_row} samples, zero mismatches"


def _criterion5_states(rng):
    out = [_generic_member(f, rng) for f in GENERIC_CASE]
    out += [gen_family(f) for f in NILPOTENT]
    out.append(ghz())
    return out


def check_5(quadruples=50):
    rng = random.Random(105)
    states = _criterion5_states(rng)
    for n, s in enumerate(states):
        iv, rep = invariant_vector(s), verstraete_type(s).as_dict()
        for seed in range(quadruples):
            g = random_sl2_quadruple(1000 * n + seed, bound=2, shears=3)
            assert g.is_sl2()
            t = apply_local(s, g)
            assert invariant_vector(t) == iv
            assert verstraete_type(t).as_dict() == rep, (n, seed)
    return f"{len(states)} states x {quadruples} SL2 quadruples: invariants and TypeReport unchanged"


def check_6():
    rng = random.Random(106)
    for _ in range(50):
        rep = so8_checks(random_state(rng))
        assert rep.ok, rep.failures
    return "h2, h4, h6, Pf and the characteristic polynomial exact on 50 states"


def check_7():
    assert list(multirank(gen_G(1, 2, 3, 5))) == [4, 4, 4]
    assert list(multirank(gen_family("L_0_3+1_0_3+1"))) == [2, 2, 2]
    rng = random.Random(107)
    pool = [random_state(rng, 3, density=0.3) for _ in range(10)]
    pool += [_row_member(row, case, rng) for case in ("2c", "3c") for row in CASE_TABLES[case].rows]
    for n, s in enumerate(pool[:20]):
        g = random_sl2_quadruple(n, bound=3)
        assert multirank(apply_local(s, g)) == multirank(s)
    return "[4,4,4] for G generic, [2,2,2] for L_0_3+1_0_3+1, SLOCC-invariant on 20 states"


def check_8(n_states=1000):
    rng = random.Random(108)
    for _ in range(5):
        iv = invariant_vector(_generic_member("L_ab3", rng))
        assert iv.I2 == 0 and iv.I3 == 0
        rec = stratum_of(_generic_member("L_a4", rng))
        assert rec.cusp3 and len(rec.cusp3_witnesses) == 1
    for f in NILPOTENT:
        iv = invariant_vector(gen_family(f))
        assert iv.B == iv.L == iv.M == iv.Dxy == 0
    pool = []
    for case, t in CASE_TABLES.items():
        for row in t.rows:
            pool += [_row_member(row, case, rng) for _ in range(3)]
    pool += [gen_family(f) for f in NILPOTENT]
    while len(pool) < n_states:
        pool.append(random_state(rng, 3, density=rng.choice((0.2, 0.5, 1.0))))
    levels = set()
    for s in pool:
        rec = stratum_of(s)
        assert not rec.inclusion_violations(), (s, rec.inclusion_violations())
        levels.update(k for k in ("generic", "cusp", "cusp3", "node", "node3", "nullcone") if getattr(rec, k))
    assert levels == {"generic", "cusp", "cusp3", "node", "node3", "nullcone"}, levels
    return f"predicates exact; inclusion chain respected on {len(pool)} states"


QUARTIC_COINCIDENCES = {
    "L_abc2": (3, lambda a, b, c: (a, b, c, c)),
    "L_ab3": (2, lambda a, b: (a, a, a, b)),
    "L_a2b2": (2, lambda a, b: (a, a, b, b)),
    "L_a4": (1, lambda a: (a, a, a, a)),
    "L_a2_0_3+1": (1, lambda a: (a, a, 0, 0)),
}


def _quartic_multiset(s):
    return sorted(tuple(str(GaussianRational(c)) for c in q.coeffs) for q in build_quartics(invariant_vector(s)))


def check_9():
    rng = random.Random(109)
    for fam, (arity, to_g) in QUARTIC_COINCIDENCES.items():
        for _ in range(20):
            p = [nonzero_rat(rng) for _ in range(arity)]
            assert _quartic_multiset(gen_family(fam, p)) == _quartic_multiset(gen_G(*to_g(*p))), (fam, p)
    return "five rows x 20 parameter choices"


def check_10(per_family=50):
    rng = random.Random(110)
    for fam in GENERIC_CASE:
        for _ in range(per_family):
            rep = verstraete_type(_generic_member(fam, rng), with_stratum=False)
            assert rep.family == fam and rep.specialization == "" and rep.type_name == GENERIC_TYPE[fam]
    for fam in NILPOTENT:
        assert verstraete_type(gen_family(fam)).family == "nilpotent"
    for _ in range(50):
        p = [nonzero_rat(rng) for _ in range(4)]
        params, exact = recover_parameters(gen_G(*p))
        assert exact and tuple(params) == canonicalize_d4([GaussianRational(x) for x in p]), p
    return f"{len(GENERIC_CASE)} families x {per_family} round trips; 50 parameter recoveries up to D4"


def test_criterion_1():
    print(check_1())


def test_criterion_2():
    print(check_2())


def test_criterion_3():
    print(check_3())


def test_criterion_4():
    print(check_4())


def test_criterion_5():
    print(check_5())


def test_criterion_6():
    print(check_6())


def test_criterion_7():
    print(check_7())


def test_criterion_8():
    print(check_8())


def test_criterion_9():
    print(check_9())


def test_criterion_10():
    print(check_10())


if __name__ == "__main__":
    failed = 0
    for k in range(1, 11):
        try:
            msg = globals()[f"check_{k}"]()
            print(f"criterion {k:2d}: PASS  {msg}", flush=True)
        except AssertionError as exc:
            failed += 1
            print(f"criterion {k:2d}: FAIL  {exc!r}", flush=True)
    sys.exit(1 if failed else 0)

"""Embedded oracle suite run by ``qslocc4 selftest``."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cases import CASE_TABLES, PATTERN_CASES
from .covariants import evaluate_quantity, load_catalog
from .geometry import so8_checks
from .invariants import invariant_vector
from .normal_forms import gen_G
from .oracles import QUARTIC_COINCIDENCES, closed_forms_G, coincidence_holds
from .scalars import GaussianRational
from .state import BITS, State


@dataclass
class SuiteResult:
    name: str
    passed: int
    failed: int
    notes: list

    @property
    def ok(self):
        return self.failed == 0


def _rat(rng):
    return Fraction(rng.randint(-100, 100), rng.randint(1, 100))


def _random_state(rng):
    return State(tuple(GaussianRational(rng.randint(-5, 5), rng.randint(-5, 5)) for _ in BITS))


def closed_forms(n=25, seed=1) -> SuiteResult:
    rng, res = random.Random(seed), SuiteResult("closed forms on G_abcd", 0, 0, [])
    for _ in range(n):
        p = [_rat(rng) for _ in range(4)]
        iv = invariant_vector(gen_G(*p))
        bad = [k for k, v in closed_forms_G(*p).items() if getattr(iv, k) != v]
        if bad:
            res.failed += 1
            res.notes.append(f"G{tuple(map(str, p))}: {bad}")
        else:
            res.passed += 1
    return res


def ev_tables(per_row=2, seed=3) -> SuiteResult:
    from .recipe_search import sample_row
    cat = load_catalog()
    rng = np.random.default_rng(seed)
    res = SuiteResult("ev-pattern tables", 0, 0, [])
    for case in PATTERN_CASES:
        t = CASE_TABLES[case]
        for row in t.rows:
            for s in sample_row(row, rng, per_row, case):
                got = tuple(int(evaluate_quantity(cat[q], s).nonzero) for q in t.quantities)
                if got == row.pattern:
                    res.passed += 1
                else:
                    res.failed += 1
                    res.notes.append(f"{case} {row.name}: {list(got)} != {list(row.pattern)}")
    return res


def quartic_coincidences(n=5, seed=5) -> SuiteResult:
    rng, res = random.Random(seed), SuiteResult("quartic coincidences", 0, 0, [])
    for fam, (arity, _) in QUARTIC_COINCIDENCES.items():
        for _ in range(n):
            p = [_rat(rng) or Fraction(1) for _ in range(arity)]
            if coincidence_holds(fam, p):
                res.passed += 1
            else:
                res.failed += 1
                res.notes.append(f"{fam}{tuple(map(str, p))}")
    return res


def so8(n=10, seed=7) -> SuiteResult:
    rng, res = random.Random(seed), SuiteResult("so(8) identities", 0, 0, [])
    for _ in range(n):
        rep = so8_checks(_random_state(rng))
        if rep.ok:
            res.passed += 1
        else:
            res.failed += 1
            res.notes.extend(rep.failures)
    return res


SUITES = (closed_forms, quartic_coincidences, so8, ev_tables)


def run_all(log=print):
    results = []
    for suite in SUITES:
        r = suite()
        results.append(r)
        if log:
            log(f"{'PASS' if r.ok else 'FAIL'}  {r.name}: {r.passed} passed, {r.failed} failed")
            for note in r.notes[:5]:
                log(f"      {note}")
    return results

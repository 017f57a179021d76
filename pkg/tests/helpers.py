"""Shared generators for the test-suite (plain functions and hypothesis strategies)."""
from __future__ import annotations

import random
from fractions import Fraction

from hypothesis import strategies as st

from qslocc4.scalars import GaussianRational
from qslocc4.state import State


def rat(rng: random.Random, bound: int = 100) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def nonzero_rat(rng: random.Random, bound: int = 100) -> Fraction:
    while True:
        q = rat(rng, bound)
        if q:
            return q


def random_state(rng: random.Random, bound: int = 5, density: float = 1.0) -> State:
    amps = [GaussianRational(rng.randint(-bound, bound), rng.randint(-bound, bound))
            if rng.random() < density else GaussianRational(0) for _ in range(16)]
    if not any(amps):
        amps[rng.randrange(16)] = GaussianRational(1)
    return State(tuple(amps))


small_fractions = st.fractions(min_value=-12, max_value=12, max_denominator=6)
gaussians = st.builds(GaussianRational, small_fractions, small_fractions)
states = (st.lists(gaussians, min_size=16, max_size=16)
          .filter(lambda v: any(v)).map(lambda v: State(tuple(v))))
perms = st.permutations([1, 2, 3, 4]).map(tuple)

"""Four-qubit states, their serialization, and the two group actions.

Amplitudes are indexed by bit tuples ``(i, j, k, l)`` -- qubit 1 first -- and
stored flat at position ``8i + 4j + 2k + l``.  That linear index is a storage
detail only; everything downstream addresses amplitudes by their bit labels.
"""
from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .scalars import (
    EXACT, FLOAT, ONE, ZERO, GaussianRational, format_scalar, parse_scalar, to_backend,
)

BITS = tuple(itertools.product((0, 1), repeat=4))
LABELS = tuple("".join(map(str, b)) for b in BITS)


def index(bits: Sequence[int]) -> int:
    i, j, k, l = bits
    return 8 * i + 4 * j + 2 * k + l


class StateError(ValueError):
    pass


@dataclass(frozen=True)
class State:
    """A nonzero four-qubit state with 16 amplitudes in one backend."""

    amps: tuple
    backend: str = EXACT

    def __post_init__(self):
        if len(self.amps) != 16:
            raise StateError("a four-qubit state has 16 amplitudes")
        if self.backend not in (EXACT, FLOAT):
            raise StateError(f"unknown backend {self.backend!r}")
        amps = tuple(to_backend(a, self.backend) for a in self.amps)
        object.__setattr__(self, "amps", amps)
        if not any(amps):
            raise StateError("all-zero state")

    def __getitem__(self, label) -> object:
        if isinstance(label, str):
            label = tuple(int(c) for c in label)
        return self.amps[index(label)]

    def a(self, i, j, k, l):
        return self.amps[8 * i + 4 * j + 2 * k + l]

    @property
    def scale(self) -> float:
        return max(abs(complex(x)) for x in self.amps)

    def scaled(self, lam) -> "State":
        return State(tuple(lam * x for x in self.amps), self.backend)

    def to_float(self) -> "State":
        return State(tuple(complex(x) for x in self.amps), FLOAT)

    def support(self) -> dict:
        return {lab: x for lab, x in zip(LABELS, self.amps) if x}

    def __repr__(self):
        terms = " + ".join(f"({format_scalar(x)})|{lab}>" for lab, x in self.support().items())
        return f"State[{self.backend}]({terms})"


def from_dict(amplitudes: Mapping[str, object], backend: str = EXACT) -> State:
    """Build a state from ``{"0110": scalar, ...}``; missing labels are zero."""
    vec = [ZERO] * 16
    for lab, val in amplitudes.items():
        if len(lab) != 4 or set(lab) - {"0", "1"}:
            raise StateError(f"bad basis label {lab!r}")
        vec[int(lab, 2)] = val if not isinstance(val, str) else parse_scalar(val)
    if backend == FLOAT:
        vec = [complex(v) for v in vec]
    return State(tuple(vec), backend)


def _reject_duplicates(pairs):
    out = {}
    for k, v in pairs:
        if k in out:
            raise StateError(f"duplicate index {k!r}")
        out[k] = v
    return out


def parse_state(text: str, backend: str | None = None) -> State:
    """Parse the JSON serialization.

    Accepts ``{"amplitudes": {...}, "backend": ...}`` or a bare amplitude map.
    """
    try:
        obj = json.loads(text, object_pairs_hook=_reject_duplicates)
    except json.JSONDecodeError as exc:
        raise StateError(f"malformed state JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise StateError("state must be a JSON object")
    if "amplitudes" in obj:
        amps = obj["amplitudes"]
        backend = backend or obj.get("backend", EXACT)
    else:
        amps = obj
        backend = backend or EXACT
    if not isinstance(amps, dict):
        raise StateError("amplitudes must be an object")
    try:
        parsed = {k: parse_scalar(str(v)) for k, v in amps.items()}
    except ValueError as exc:
        raise StateError(str(exc)) from None
    return from_dict(parsed, backend)


def serialize(s: State) -> str:
    amps = {lab: format_scalar(x) for lab, x in s.support().items()}
    return json.dumps({"amplitudes": amps, "backend": s.backend}, sort_keys=False)


# -- group actions -------------------------------------------------------------
Matrix2 = tuple  # ((a, b), (c, d))


@dataclass(frozen=True)
class LocalOperator:
    mats: tuple  # four 2x2 matrices

    def __post_init__(self):
        if len(self.mats) != 4 or any(len(m) != 2 or any(len(r) != 2 for r in m) for m in self.mats):
            raise ValueError("a local operator is four 2x2 matrices")

    def dets(self):
        return [m[0][0] * m[1][1] - m[0][1] * m[1][0] for m in self.mats]

    def is_sl2(self) -> bool:
        return all(d == 1 for d in self.dets())

    def compose(self, other: "LocalOperator") -> "LocalOperator":
        """``self`` after ``other`` (componentwise product self_k @ other_k)."""
        return LocalOperator(tuple(_matmul(a, b) for a, b in zip(self.mats, other.mats)))


def _matmul(a, b):
    return tuple(tuple(a[r][0] * b[0][c] + a[r][1] * b[1][c] for c in range(2)) for r in range(2))


IDENTITY2 = ((ONE, ZERO), (ZERO, ONE))


def apply_local(s: State, g: LocalOperator, require_sl2: bool = False) -> State:
    """Return (A1 x A2 x A3 x A4)|s>."""
    if require_sl2 and not g.is_sl2():
        raise ValueError("local operator is not in SL2^4")
    vec = list(s.amps)
    for q, m in enumerate(g.mats):
        stride = 8 >> q
        out = list(vec)
        for n in range(16):
            if n & stride:
                continue
            x0, x1 = vec[n], vec[n | stride]
            out[n] = m[0][0] * x0 + m[0][1] * x1
            out[n | stride] = m[1][0] * x0 + m[1][1] * x1
        vec = out
    return State(tuple(vec), s.backend)


def check_perm(sigma: Sequence[int]) -> tuple:
    """Normalize a permutation given 1-based (e.g. ``(1,3,2,4)`` or ``"1324"``)."""
    if isinstance(sigma, str):
        sigma = [int(c) for c in sigma]
    sigma = tuple(int(x) for x in sigma)
    if sorted(sigma) != [1, 2, 3, 4]:
        raise ValueError(f"invalid qubit permutation {sigma!r}")
    return sigma


def permute_qubits(s: State, sigma: Sequence[int]) -> State:
    """Relabel qubits: qubit ``q`` of the input becomes qubit ``sigma(q)``.

    With ``sigma`` in one-line notation (1-based), the output amplitude at
    bits ``b`` is the input amplitude at ``(b[sigma(1)], ..., b[sigma(4)])``.
    Composition: ``permute(permute(s, sigma), tau) == permute(s, tau o sigma)``.
    """
    sigma = check_perm(sigma)
    vec = [None] * 16
    for bits in BITS:
        src = tuple(bits[sigma[q] - 1] for q in range(4))
        vec[index(bits)] = s.amps[index(src)]
    return State(tuple(vec), s.backend)


def compose_perm(tau, sigma) -> tuple:
    """``tau o sigma`` in one-line notation."""
    tau, sigma = check_perm(tau), check_perm(sigma)
    return tuple(tau[sigma[q] - 1] for q in range(4))


PERMUTATIONS = tuple(itertools.permutations((1, 2, 3, 4)))


def _shear(rng: random.Random, bound: int, upper: bool):
    t = rng.randint(-bound, bound)
    if upper:
        return ((ONE, GaussianRational(t)), (ZERO, ONE))
    return ((ONE, ZERO), (GaussianRational(t), ONE))


def random_sl2_quadruple(seed: int, bound: int = 3, shears: int = 4) -> LocalOperator:
    """Four integer matrices of determinant exactly 1, built from shears."""
    if bound < 1:
        raise ValueError("bound must be >= 1")
    rng = random.Random(seed)
    mats = []
    for _ in range(4):
        m = IDENTITY2
        for k in range(shears):
            m = _matmul(m, _shear(rng, bound, upper=bool(k % 2)))
        mats.append(m)
    return LocalOperator(tuple(mats))


def ghz() -> State:
    return from_dict({"0000": ONE, "1111": ONE})


def basis_state(amplitudes: Mapping[str, object], backend: str = EXACT) -> State:
    """Convenience constructor accepting ints/fractions/GaussianRationals."""
    return from_dict({k: v if isinstance(v, (GaussianRational, complex)) else GaussianRational(v)
                      for k, v in amplitudes.items()}, backend)


def states_from_lines(lines: Iterable[str], backend: str | None = None):
    for line in lines:
        line = line.strip()
        if line and not line.startswith("#"):
            yield parse_state(line, backend)

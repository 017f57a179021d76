"""The case tables: for each case, the quantities whose vanishing pattern
separates its subfamilies, and every subfamily with its published pattern.

A row is ``(name, family, constraints, pattern)``; ``constraints`` are linear
equations in the family's parameters understood by
:func:`qslocc4.normal_forms.specialize`.
"""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Row:
    name: str
    family: str
    constraints: str
    pattern: tuple


@dataclass(frozen=True)
class CaseTable:
    case: str
    quantities: tuple
    rows: tuple

    def row(self, name) -> Row:
        return next(r for r in self.rows if r.name == name)


def _t(case, qs, *rows):
    return CaseTable(case, tuple(qs), tuple(Row(n, f, c, tuple(p)) for n, f, c, p in rows))


CASE_TABLES = {t.case: t for t in (
    _t("1a", (), ("G_abcd", "G_abcd", "", ())),
    _t("1b", ("L",),
       ("G_abcc", "G_abcd", "c=d", (0,)),
       ("L_abc2", "L_abc2", "", (1,))),
    _t("1c", ("K5", "L"),
       ("G_abbb", "G_abcd", "b=c=d", (0, 0)),
       ("L_abb2", "L_abc2", "b=c", (1, 0)),
       ("L_ab3", "L_ab3", "", (1, 1))),
    _t("2a", (), ("G_abc0", "G_abcd", "d=0", ())),
    _t("2b", ("K3", "L"),
       ("G_ab00", "G_abcd", "c=d=0", (0, 0)),
       ("L_ab02", "L_abc2", "c=0", (1, 0)),
       ("L_a2b2", "L_a2b2", "", (1, 1))),
    _t("2c", ("C", "D", "K5", "L"),
       ("G_a000", "G_abcd", "b=c=d=0", (0, 0, 0, 0)),
       ("L_a002", "L_abc2", "b=c=0", (1, 0, 0, 0)),
       ("L_0b3", "L_ab3", "a=0", (1, 1, 1, 0)),
       ("L_a2a2", "L_a2b2", "a=b", (1, 1, 0, 0)),
       ("L_a4", "L_a4", "", (1, 1, 1, 1))),
    _t("2d", ("L",),
       ("G_abb0", "G_abcd", "b=c, d=0", (0,)),
       ("L_a0c2", "L_abc2", "b=0", (1,))),
    _t("2e", ("D", "L"),
       ("G_aaa0", "G_abcd", "a=b=c, d=0", (0, 0)),
       ("L_0cc2", "L_abc2", "b=c, a=0", (1, 0)),
       ("L_a03", "L_ab3", "b=0", (1, 1))),
    _t("3a", (), ("G_abc0", "G_abcd", "d=0, a=b+c", ())),
    _t("3b", ("L",),
       ("G_aa-2a0", "G_abcd", "b=a, c=-2a, d=0", (0,)),
       ("L_02bb2", "L_abc2", "a=0, b=2c", (1,))),
    _t("3c", ("Gbar", "G", "H", "L"),
       ("G_00aa", "G_abcd", "a=b=0, c=d", (0, 0, 0, 0)),
       ("L_aa02", "L_abc2", "a=b, c=0", (0, 1, 1, 0)),
       ("L_00c2", "L_abc2", "a=b=0", (0, 0, 1, 0)),
       ("L_02a2", "L_a2b2", "a=0", (1, 1, 1, 0)),
       ("L_a203", "L_a2_0_3+1", "", (1, 1, 1, 1))),
)}

# cases whose subfamilies are separated by covariant patterns
PATTERN_CASES = tuple(c for c, t in CASE_TABLES.items() if t.quantities)

"""Closed-form densities.

``density_table0`` gives the density of all prime divisors of S_{a,b};
``density`` gives the density of those in one class c mod d, read off the
unique matching row of one of six tables.  Each table row stores
phi(d) * density as a function of (lambda, delta, gamma, delta0) plus,
depending on the table, a Kronecker symbol at c or the residue c mod 8.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .arith import INFINITY, kronecker, perfect_power_decompose, squarefree_signed, totient
from .params import DensityCase, Params, classify, extract_params


class TableIntegrityError(AssertionError):
    """No row, or several disagreeing rows, matched a parameter point."""


@dataclass(frozen=True)
class RowContext:
    lam: int
    delta: int
    gamma: float
    delta0: int = 0
    symbol: int = 0
    c8: int = 1


@dataclass(frozen=True)
class Row:
    id: str
    cells: tuple[tuple[str, str], ...]
    formula: str
    when: Callable[[RowContext], bool] = field(repr=False, compare=False)
    value: Callable[[RowContext], Fraction] = field(repr=False, compare=False)
    note: str = ""

    def describe(self) -> str:
        conds = ", ".join(f"{name}{rel}" for name, rel in self.cells if rel != "*")
        return f"{self.id.split('.')[0]}: {conds} → {self.formula}"

    def as_dict(self) -> dict:
        out = {
            "id": self.id,
            "conditions": {name: rel for name, rel in self.cells},
            "phi_d_density": self.formula,
        }
        if self.note:
            out["note"] = self.note
        return out


@dataclass(frozen=True)
class DensityResult:
    density: Fraction
    phi_d_density: Fraction
    table: DensityCase
    row: str


def _p2(e: int) -> Fraction:
    return Fraction(2) ** e


_third = Fraction(1, 3)
_one = Fraction(1)
_zero = Fraction(0)


def _row(id, cells, formula, when, value, note=""):
    return Row(id, tuple(cells), formula, when, value, note)


L, D, G, S, C8 = "λ", "δ", "γ", "(D/c)", "c mod 8"

_T1 = [
    _row("T1.1", [(L, "<δ"), (D, "≤γ")], "1 − 2^(λ+1−δ)/3",
         lambda x: x.lam < x.delta and x.delta <= x.gamma,
         lambda x: 1 - _p2(x.lam + 1 - x.delta) * _third),
    _row("T1.2", [(L, "*"), (D, ">0, δ≤min(λ,γ)")], "2^(δ−λ)/3",
         lambda x: 0 < x.delta <= min(x.lam, x.gamma),
         lambda x: _p2(x.delta - x.lam) * _third),
    _row("T1.3", [(L, "*"), (D, "=0")], "2^(1−λ)/3",
         lambda x: x.delta == 0,
         lambda x: _p2(1 - x.lam) * _third),
    _row("T1.4", [(L, "≥γ"), (D, ">γ")], "0",
         lambda x: x.lam >= x.gamma and x.delta > x.gamma,
         lambda x: _zero),
    _row("T1.5", [(L, "<γ"), (D, ">γ")], "1 − 2^(λ−γ)",
         lambda x: x.lam < x.gamma < x.delta,
         lambda x: 1 - _p2(x.lam - x.gamma)),
]

_T2 = [
    _row("T2.1a", [(L, "≥δ−1"), (D, ">0, δ≤γ"), (S, "=1")], "2^(δ−1−λ)/3",
         lambda x: x.lam >= x.delta - 1 and 0 < x.delta <= x.gamma and x.symbol == 1,
         lambda x: _p2(x.delta - 1 - x.lam) * _third),
    _row("T2.1b", [(L, "≥δ−1"), (D, ">0, δ≤γ"), (S, "=−1")], "2^(δ−1−λ)",
         lambda x: x.lam >= x.delta - 1 and 0 < x.delta <= x.gamma and x.symbol == -1,
         lambda x: _p2(x.delta - 1 - x.lam)),
    _row("T2.2a", [(L, "*"), (D, "=0"), (S, "=1")], "2^(−λ)/3",
         lambda x: x.delta == 0 and x.symbol == 1,
         lambda x: _p2(-x.lam) * _third),
    _row("T2.2b", [(L, "*"), (D, "=0"), (S, "=−1")], "2^(−λ)",
         lambda x: x.delta == 0 and x.symbol == -1,
         lambda x: _p2(-x.lam)),
    _row("T2.3a", [(L, "<δ−1"), (D, "≤γ"), (S, "=1")], "1 − 2^(λ+2−δ)/3",
         lambda x: x.lam < x.delta - 1 and x.delta <= x.gamma and x.symbol == 1,
         lambda x: 1 - _p2(x.lam + 2 - x.delta) * _third),
    _row("T2.3b", [(L, "<δ−1"), (D, "≤γ"), (S, "=−1")], "1",
         lambda x: x.lam < x.delta - 1 and x.delta <= x.gamma and x.symbol == -1,
         lambda x: _one),
    _row("T2.4", [(L, "≥δ"), (D, ">γ"), (S, "*")], "0",
         lambda x: x.lam >= x.delta > x.gamma,
         lambda x: _zero),
    _row("T2.5a", [(L, "≤γ−1"), (D, ">γ"), (S, "=1")], "1 − 2^(λ+1−γ)",
         lambda x: x.lam <= x.gamma - 1 and x.delta > x.gamma and x.symbol == 1,
         lambda x: 1 - _p2(x.lam + 1 - x.gamma)),
    _row("T2.5b", [(L, "≤γ−1"), (D, ">γ"), (S, "=−1")], "1",
         lambda x: x.lam <= x.gamma - 1 and x.delta > x.gamma and x.symbol == -1,
         lambda x: _one),
    _row("T2.6", [(L, "≥γ"), (D, ">λ"), (S, "*")], "0",
         lambda x: x.lam >= x.gamma and x.delta > x.lam,
         lambda x: _zero),
]

_T3 = [
    _row("T3.1", [(L, "<δ−1"), (D, "≤γ"), (S, "=1")], "1 − 2^(λ+1−δ)/3 + 2^(λ+2+δ−2δ₀)/3",
         lambda x: x.lam < x.delta - 1 and x.delta <= x.gamma and x.symbol == 1,
         lambda x: 1 - _p2(x.lam + 1 - x.delta) * _third
         + _p2(x.lam + 2 + x.delta - 2 * x.delta0) * _third),
    _row("T3.2", [(L, "<δ−1"), (D, "≤γ"), (S, "=−1")], "1 − 2^(λ+1−δ)/3 − 2^(λ+2+δ−2δ₀)/3",
         lambda x: x.lam < x.delta - 1 and x.delta <= x.gamma and x.symbol == -1,
         lambda x: 1 - _p2(x.lam + 1 - x.delta) * _third
         - _p2(x.lam + 2 + x.delta - 2 * x.delta0) * _third),
    _row("T3.3", [(L, "=δ−1"), (D, "≤γ"), (S, "=1")], "2/3 + 2^(2δ+1−2δ₀)/3",
         lambda x: x.lam == x.delta - 1 and x.delta <= x.gamma and x.symbol == 1,
         lambda x: 2 * _third + _p2(2 * x.delta + 1 - 2 * x.delta0) * _third),
    _row("T3.4", [(L, "=δ−1"), (D, "≤γ"), (S, "=−1")], "2/3 − 2^(2δ+1−2δ₀)/3",
         lambda x: x.lam == x.delta - 1 and x.delta <= x.gamma and x.symbol == -1,
         lambda x: 2 * _third - _p2(2 * x.delta + 1 - 2 * x.delta0) * _third),
    _row("T3.5", [(L, "≤γ−1"), (D, ">γ"), (S, "*")], "1 − 2^(λ−γ)",
         lambda x: x.lam <= x.gamma - 1 and x.delta > x.gamma,
         lambda x: 1 - _p2(x.lam - x.gamma)),
    _row("T3.6", [(L, "≥γ"), (D, ">λ"), (S, "*")], "0",
         lambda x: x.lam >= x.gamma and x.delta > x.lam,
         lambda x: _zero),
    _row("T3.7", [(L, "≥δ"), (D, ">γ"), (S, "*")], "0",
         lambda x: x.lam >= x.delta > x.gamma,
         lambda x: _zero),
    _row("T3.8", [(L, "≤δ₀−2"), (D, ">0, δ≤min(γ,λ)"), (S, "=1")],
         "2^(δ−λ)/3 + 2^(λ+2+δ−2δ₀)/3",
         lambda x: x.lam <= x.delta0 - 2 and 0 < x.delta <= min(x.gamma, x.lam) and x.symbol == 1,
         lambda x: _p2(x.delta - x.lam) * _third + _p2(x.lam + 2 + x.delta - 2 * x.delta0) * _third),
    _row("T3.9", [(L, "≤δ₀−2"), (D, ">0, δ≤min(γ,λ)"), (S, "=−1")],
         "2^(δ−λ)/3 − 2^(λ+2+δ−2δ₀)/3",
         lambda x: x.lam <= x.delta0 - 2 and 0 < x.delta <= min(x.gamma, x.lam) and x.symbol == -1,
         lambda x: _p2(x.delta - x.lam) * _third - _p2(x.lam + 2 + x.delta - 2 * x.delta0) * _third),
    _row("T3.10", [(L, "≥δ₀−1"), (D, ">0, δ≤γ"), (S, "=1")], "2^(δ−1−λ)/3",
         lambda x: x.lam >= x.delta0 - 1 and 0 < x.delta <= x.gamma and x.symbol == 1,
         lambda x: _p2(x.delta - 1 - x.lam) * _third),
    _row("T3.11", [(L, "≥δ₀−1"), (D, ">0, δ≤γ"), (S, "=−1")], "2^(δ−λ−1)",
         lambda x: x.lam >= x.delta0 - 1 and 0 < x.delta <= x.gamma and x.symbol == -1,
         lambda x: _p2(x.delta - x.lam - 1)),
    _row("T3.12", [(L, "≤δ₀−2"), (D, "=0"), (S, "=1")], "2^(1−λ)/3 + 2^(λ+3−2δ₀)/3",
         lambda x: x.lam <= x.delta0 - 2 and x.delta == 0 and x.symbol == 1,
         lambda x: _p2(1 - x.lam) * _third + _p2(x.lam + 3 - 2 * x.delta0) * _third),
    _row("T3.13", [(L, "≤δ₀−2"), (D, "=0"), (S, "=−1")], "2^(1−λ)/3 − 2^(λ+3−2δ₀)/3",
         lambda x: x.lam <= x.delta0 - 2 and x.delta == 0 and x.symbol == -1,
         lambda x: _p2(1 - x.lam) * _third - _p2(x.lam + 3 - 2 * x.delta0) * _third),
    _row("T3.14", [(L, "≥δ₀−1"), (D, "=0"), (S, "=1")], "2^(−λ)/3",
         lambda x: x.lam >= x.delta0 - 1 and x.delta == 0 and x.symbol == 1,
         lambda x: _p2(-x.lam) * _third),
    _row("T3.15", [(L, "≥δ₀−1"), (D, "=0"), (S, "=−1")], "2^(−λ)",
         lambda x: x.lam >= x.delta0 - 1 and x.delta == 0 and x.symbol == -1,
         lambda x: _p2(-x.lam)),
]

_T4 = [
    _row("T4.1", [(L, "=0"), (D, "≤1"), (G, "≥δ")], "17/24",
         lambda x: x.lam == 0 and x.delta <= 1 and x.gamma >= x.delta,
         lambda x: Fraction(17, 24)),
    _row("T4.2", [(L, "=0"), (D, "=2"), (G, "≥δ")], "11/12",
         lambda x: x.lam == 0 and x.delta == 2 and x.gamma >= x.delta,
         lambda x: Fraction(11, 12)),
    _row("T4.3", [(L, "=0"), (D, "=2"), (G, "=1")], "1/2",
         lambda x: x.lam == 0 and x.delta == 2 and x.gamma == 1,
         lambda x: Fraction(1, 2)),
    _row("T4.4", [(L, "=1"), (D, "=2"), (G, "=1")], "0",
         lambda x: x.lam == 1 and x.delta == 2 and x.gamma == 1,
         lambda x: _zero),
    _row("T4.5", [(L, "=1"), (D, "≤1"), (G, "≥δ")], "5/12",
         lambda x: x.lam == 1 and x.delta <= 1 and x.gamma >= x.delta,
         lambda x: Fraction(5, 12)),
    _row("T4.6", [(L, "=1"), (D, "=2"), (G, "≥δ")], "5/6",
         lambda x: x.lam == 1 and x.delta == 2 and x.gamma >= x.delta,
         lambda x: Fraction(5, 6)),
    _row("T4.7", [(L, "≥2"), (D, "≤1"), (G, "≥δ")], "2^(−λ)/3",
         lambda x: x.lam >= 2 and x.delta <= 1 and x.gamma >= x.delta,
         lambda x: _p2(-x.lam) * _third),
    _row("T4.8", [(L, "≥2"), (D, "=2"), (G, "≥δ")], "2^(1−λ)/3",
         lambda x: x.lam >= 2 and x.delta == 2 and x.gamma >= x.delta,
         lambda x: _p2(1 - x.lam) * _third),
    _row("T4.9", [(L, "≥2"), (D, "=2"), (G, "=1")], "0",
         lambda x: x.lam >= 2 and x.delta == 2 and x.gamma == 1,
         lambda x: _zero),
]

_T5 = [
    _row("T5.1", [(L, "≥2"), (D, "=3"), (G, "<δ")], "0",
         lambda x: x.lam >= 2 and x.delta == 3 and x.gamma < x.delta,
         lambda x: _zero),
    _row("T5.2", [(L, "≥δ−1"), (D, "≥3"), (G, "≥δ")], "2^(δ−1−λ)/3",
         lambda x: x.lam >= x.delta - 1 and x.delta >= 3 and x.gamma >= x.delta,
         lambda x: _p2(x.delta - 1 - x.lam) * _third),
    _row("T5.3", [(L, "≥2, λ<δ−1"), (D, "≥4"), (G, "≥δ")], "1 − 2^(λ+2−δ)/3",
         lambda x: 2 <= x.lam < x.delta - 1 and x.delta >= 4 and x.gamma >= x.delta,
         lambda x: 1 - _p2(x.lam + 2 - x.delta) * _third),
    _row("T5.4", [(L, "≥2, λ≤γ−2"), (D, "≥4"), (G, "<δ")], "1 − 2^(λ+1−γ)",
         lambda x: 2 <= x.lam <= x.gamma - 2 and x.delta >= 4 and x.gamma < x.delta,
         lambda x: 1 - _p2(x.lam + 1 - x.gamma)),
    _row("T5.5", [(L, "≥max(2,γ−1)"), (D, "≥4"), (G, "<δ")], "0",
         lambda x: x.lam >= max(2, x.gamma - 1) and x.delta >= 4 and x.gamma < x.delta,
         lambda x: _zero),
    _row("T5.6", [(L, "=1"), (D, "≥3"), (G, "≥δ")], "1 − 2^(3−δ)/3",
         lambda x: x.lam == 1 and x.delta >= 3 and x.gamma >= x.delta,
         lambda x: 1 - _p2(3 - x.delta) * _third),
    _row("T5.7", [(L, "=1"), (D, "≥3"), (G, "=1")], "0",
         lambda x: x.lam == 1 and x.delta >= 3 and x.gamma == 1,
         lambda x: _zero),
    _row("T5.8", [(L, "=1"), (D, "≥3"), (G, "=2")], "1",
         lambda x: x.lam == 1 and x.delta >= 3 and x.gamma == 2,
         lambda x: _one),
    _row("T5.9", [(L, "=1"), (D, "≥3"), (G, "≥3, γ<δ")], "1 − 2^(2−γ)",
         lambda x: x.lam == 1 and x.delta >= 3 and 3 <= x.gamma < x.delta,
         lambda x: 1 - _p2(2 - x.gamma),
         note="printed as γ > 3; γ = 3 falls in no printed row and takes the same formula"),
]

_T6 = [
    _row("T6.1", [(G, "≥δ"), (C8, "=1")], "1 − 2^(2−δ)/3",
         lambda x: x.gamma >= x.delta and x.c8 == 1,
         lambda x: 1 - _p2(2 - x.delta) * _third),
    _row("T6.2", [(G, "≤2"), (C8, "=±1")], "0",
         lambda x: x.gamma <= 2 and x.c8 in (1, 7),
         lambda x: _zero),
    _row("T6.3", [(G, "≤2"), (C8, "=±3")], "1",
         lambda x: x.gamma <= 2 and x.c8 in (3, 5),
         lambda x: _one),
    _row("T6.4", [(G, "≥3, γ<δ"), (C8, "=1")], "1 − 2^(1−γ)",
         lambda x: 3 <= x.gamma < x.delta and x.c8 == 1,
         lambda x: 1 - _p2(1 - x.gamma)),
]

TABLES: dict[DensityCase, list[Row]] = {
    DensityCase.T1: _T1,
    DensityCase.T2: _T2,
    DensityCase.T3: _T3,
    DensityCase.T4: _T4,
    DensityCase.T5: _T5,
    DensityCase.T6: _T6,
}

TABLE0 = [
    {"id": "T0.1", "conditions": {"L": "≠ Q(√2)", "λ": "≥0"}, "density": "2^(1−λ)/3"},
    {"id": "T0.2", "conditions": {"L": "= Q(√2)", "λ": "=0"}, "density": "17/24"},
    {"id": "T0.3", "conditions": {"L": "= Q(√2)", "λ": "=1"}, "density": "5/12"},
    {"id": "T0.4", "conditions": {"L": "= Q(√2)", "λ": "≥2"}, "density": "2^(−λ)/3"},
]


def match_rows(case: DensityCase, ctx: RowContext) -> list[Row]:
    return [row for row in TABLES[case] if row.when(ctx)]


def evaluate(case: DensityCase, ctx: RowContext) -> tuple[Fraction, str]:
    """phi(d)*density and the id of the first matching row.

    Several rows may match one point only when they give the same value;
    that is enforced by ``check_table_integrity``.
    """
    rows = match_rows(case, ctx)
    if not rows:
        raise TableIntegrityError(f"no row of {case} matches {ctx}")
    return rows[0].value(ctx), rows[0].id


def _contexts(case: DensityCase, bound: int = 12):
    gammas = [*range(bound + 1), INFINITY]
    for lam, delta, gamma in itertools.product(range(bound + 1), range(bound + 1), gammas):
        # c is odd once 2 | d
        if delta >= 1 and gamma == 0:
            continue
        if case in (DensityCase.T1, DensityCase.T2, DensityCase.T3):
            if case is DensityCase.T1:
                for delta0 in (0, 2, 3):
                    yield RowContext(lam, delta, gamma, delta0)
            else:
                delta0s = [x for x in range(7) if (x <= delta) == (case is DensityCase.T2)]
                for delta0, symbol in itertools.product(delta0s, (1, -1)):
                    yield RowContext(lam, delta, gamma, delta0, symbol)
        elif case is DensityCase.T4:
            if delta <= 2:
                yield RowContext(lam, delta, gamma)
        elif delta >= 3 and (lam > 0) == (case is DensityCase.T5):
            if case is DensityCase.T5:
                yield RowContext(lam, delta, gamma)
            else:
                # c mod 8 is pinned by gamma once 8 | d
                c8s = {1: (3, 7), 2: (5,)}.get(gamma, (1,))
                for c8 in c8s:
                    yield RowContext(lam, delta, gamma, c8=c8)


@functools.cache
def check_table_integrity(bound: int = 12) -> int:
    """Every parameter point matches some row; overlapping rows agree.

    Returns the number of points checked.
    """
    n = 0
    for case in TABLES:
        for ctx in _contexts(case, bound):
            rows = match_rows(case, ctx)
            if not rows:
                raise TableIntegrityError(f"{case}: no row matches {ctx}")
            values = {row.value(ctx) for row in rows}
            if len(values) > 1:
                ids = [row.id for row in rows]
                raise TableIntegrityError(f"{case}: rows {ids} disagree at {ctx}")
            n += 1
    return n


def row_context(p: Params) -> RowContext:
    disc = p.quadratic_disc()
    return RowContext(
        lam=p.lam,
        delta=p.delta,
        gamma=p.gamma,
        delta0=p.delta0,
        symbol=0 if disc is None else kronecker(disc, p.c),
        c8=p.c % 8,
    )


def density_params(p: Params) -> DensityResult:
    check_table_integrity()
    case = classify(p)
    phi_density, row = evaluate(case, row_context(p))
    return DensityResult(phi_density / totient(p.d), phi_density, case, row)


def density(a: int, b: int, c: int, d: int) -> DensityResult:
    """delta_{a,b}(c, d): density of primes p = c mod d dividing some a^k + b^k."""
    return density_params(extract_params(a, b, c, d))


def density_table0(a: int, b: int) -> Fraction:
    """Density of all primes dividing some a^k + b^k."""
    r0, _, lam, _ = perfect_power_decompose(a, b)
    if squarefree_signed(r0.numerator * r0.denominator) != 2:
        return _p2(1 - lam) * _third
    if lam == 0:
        return Fraction(17, 24)
    if lam == 1:
        return Fraction(5, 12)
    return _p2(-lam) * _third


def relative_density(a: int, b: int, c: int, d: int) -> Fraction:
    return density(a, b, c, d).density / density_table0(a, b)


def dump_tables() -> dict[str, list[dict]]:
    out: dict[str, list[dict]] = {"T0": list(TABLE0)}
    for case, rows in TABLES.items():
        out[case.value] = [row.as_dict() for row in rows]
    return out


def table_lines() -> list[str]:
    lines = [f"T0: L {r['conditions']['L']}, λ{r['conditions']['λ']} → {r['density']}" for r in TABLE0]
    for rows in TABLES.values():
        lines.extend(row.describe() for row in rows)
    return lines

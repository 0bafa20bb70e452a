"""Acceptance gate.  Each criterion prints one PASS/FAIL line in the summary.

Run alone with ``pytest tests/test_acceptance.py`` (about four minutes on
one core, most of it the 10^8 prime counts).
"""

import math
import time
from collections import defaultdict
from fractions import Fraction

import numpy as np
import pytest

from cases import FERMAT_LISTS, worked_rows
from oracles import GRID_A, GRID_B, grid_tuples, primes_upto
from seqdiv.empirical import count_up_to, divides_sequence, fermat_counterexamples, prime_divisor_flags
from seqdiv.extremal import Extremal, classify_extremal, exceptions_from_flags
from seqdiv.params import extract_params
from seqdiv.series import kummer_degree, degree_Nj, degree_Njp, density_series_params, tau, tau_prime
from seqdiv.tables import density, density_params, density_table0, relative_density

F = Fraction
ROWS = worked_rows()


def criterion(n, title):
    return pytest.mark.criterion(n, title)


@pytest.fixture(scope="module")
def grid():
    return [extract_params(*t) for t in grid_tuples()]


# -- 1 ----------------------------------------------------------------------

C1 = "densities for a=3, d=12 and a=5, d=10, exact, < 1 ms each"


@criterion(1, C1)
@pytest.mark.parametrize("a, d, c, expected", [
    (3, 12, 1, F(1, 6)), (3, 12, 5, F(1, 4)), (3, 12, 7, F(1, 4)), (3, 12, 11, F(0)),
    (5, 10, 1, F(1, 12)), (5, 10, 3, F(1, 4)), (5, 10, 7, F(1, 4)), (5, 10, 9, F(1, 12)),
])
def test_c1_density_exact(a, d, c, expected):
    density(a, 1, c, d)  # warm caches
    start = time.perf_counter()
    got = density(a, 1, c, d).density
    elapsed = time.perf_counter() - start
    assert got == expected
    assert elapsed < 1e-3


@criterion(1, C1)
@pytest.mark.parametrize("a, c, d, expected", [
    (3, 11, 12, F(0)), (3, 1, 12, F(1, 4)), (5, 9, 10, F(1, 8)), (5, 1, 10, F(1, 8)),
])
def test_c1_relative_density(a, c, d, expected):
    assert relative_density(a, 1, c, d) == expected


# -- 2 ----------------------------------------------------------------------

@criterion(2, "all 52 worked rows reproduced exactly in their tables, < 1 s total")
def test_c2_worked_rows_exact():
    start = time.perf_counter()
    results = [(density(a, 1, c, d), table, value) for table, c, d, a, value in ROWS]
    elapsed = time.perf_counter() - start
    wrong = [(r.table.value, r.row, r.phi_d_density, table, value) for r, table, value in results
             if r.phi_d_density != value or r.table.value != table]
    assert len(results) == 52
    assert not wrong
    assert elapsed < 1.0


# -- 3 ----------------------------------------------------------------------

@criterion(3, "prime counts to 1e8 within 0.01 of phi(d)*density, every worked row, <= 60 s each")
@pytest.mark.slow
@pytest.mark.parametrize("table, c, d, a, value", ROWS, ids=[f"{r[0]}-{r[1]}mod{r[2]}-a{r[3]}" for r in ROWS])
def test_c3_empirical_rows(table, c, d, a, value):
    start = time.perf_counter()
    count = count_up_to(a, 1, c, d, 10**8)
    elapsed = time.perf_counter() - start
    assert abs(float(count.ratio) - float(value)) <= 0.01
    assert elapsed <= 60


# -- 4 and 5 ------------------------------------------------------------------

@criterion(4, "tables equal series on the full grid, zero mismatches, <= 5 min")
def test_c4_tables_equal_series(grid):
    start = time.perf_counter()
    mismatches = [p for p in grid if density_params(p).density != density_series_params(p)]
    elapsed = time.perf_counter() - start
    assert len(grid) == 71630
    assert not mismatches[:5]
    assert elapsed <= 300


@criterion(5, "class densities sum to the overall density on the grid")
def test_c5_class_sums(grid):
    sums = defaultdict(Fraction)
    for p in grid:
        sums[p.a, p.b, p.d] += density_params(p).density
    bad = [(key, s) for key, s in sums.items() if s != density_table0(key[0], key[1])]
    assert not bad[:5]


@criterion(5, "class densities sum to the overall density on the grid")
@pytest.mark.parametrize("a, expected", [(2, F(17, 24)), (4, F(5, 12)), (3, F(2, 3))])
def test_c5_anchor_values(a, expected):
    assert density_table0(a, 1) == expected
    assert sum(density(a, 1, c, 24).density for c in range(1, 25) if math.gcd(c, 24) == 1) == expected


# -- 6 ----------------------------------------------------------------------

@criterion(6, "Fermat counterexample lists of 13, 13 and 12 primes, <= 5 s each")
@pytest.mark.parametrize("conjecture", sorted(FERMAT_LISTS))
def test_c6_fermat_lists(conjecture):
    expected = FERMAT_LISTS[conjecture]
    start = time.perf_counter()
    got = fermat_counterexamples(conjecture, len(expected))
    assert got == expected
    assert time.perf_counter() - start <= 5


# -- 7 ----------------------------------------------------------------------

C7 = "zero/full classes have no exceptions below 1e6 outside p | 2ab"


@criterion(7, C7)
def test_c7_extremal_soundness():
    checked = defaultdict(int)
    bad = []
    for a in GRID_A:
        for b in GRID_B:
            if a == b:
                continue
            primes, flags = prime_divisor_flags(a, b, 10**6)
            for _, _, c, d in grid_tuples([a], [b]):
                verdict = classify_extremal(a, b, c, d)
                if verdict.kind is Extremal.INTERMEDIATE:
                    continue
                checked[verdict.kind] += 1
                for q in exceptions_from_flags(primes, flags, verdict.kind, c, d):
                    if (2 * a * b) % int(q):
                        bad.append((a, b, c, d, int(q)))
    assert checked[Extremal.ZERO] > 1000 and checked[Extremal.FULL] > 1000
    assert not bad[:5]


@criterion(7, C7)
@pytest.mark.parametrize("a, c, d, kind, phi_density", [
    (3, 11, 12, Extremal.ZERO, F(0)), (2, 3, 8, Extremal.FULL, F(1)),
])
def test_c7_named_cases(a, c, d, kind, phi_density):
    assert classify_extremal(a, 1, c, d).kind is kind
    assert density(a, 1, c, d).phi_d_density == phi_density
    primes, flags = prime_divisor_flags(a, 1, 10**6)
    assert [int(q) for q in exceptions_from_flags(primes, flags, kind, c, d) if (2 * a) % int(q)] == []


# -- 8 ----------------------------------------------------------------------

C8 = "degree formulas agree, tau = tau' off j = lam+1, brute-force divisibility, geometric tail"


@criterion(8, C8)
def test_c8_degree_formulas_agree(grid):
    bad = []
    for p in grid:
        for j in range(1, 13):
            kt = 2 ** max(j, p.delta) * p.d_odd
            if (degree_Nj(p, j) != kummer_degree(2 ** (j - 1), kt, p)
                    or degree_Njp(p, j) != kummer_degree(2**j, kt, p)):
                bad.append((p.a, p.b, p.c, p.d, j))
    assert not bad[:5]


@criterion(8, C8)
def test_c8_tau_agree_off_critical_layer(grid):
    bad = [(p.a, p.b, p.c, p.d, j) for p in grid for j in range(1, 13)
           if j != p.lam + 1 and tau(p, j) != tau_prime(p, j)]
    assert not bad[:5]


@criterion(8, C8)
def test_c8_divisibility_brute_force():
    primes = np.array(primes_upto(2000), dtype=np.int64)
    bad = []
    for a in range(1, 11):
        for b in range(1, 11):
            if a == b:
                continue
            # a^k + b^k mod p for k = 1..2000, every p at once; k <= p - 1 covers a full period
            x, y = np.ones_like(primes), np.ones_like(primes)
            hit = np.zeros(primes.size, dtype=bool)
            for _ in range(2000):
                x = x * a % primes
                y = y * b % primes
                hit |= (x + y) % primes == 0
            got = np.array([divides_sequence(int(q), a, b) for q in primes])
            bad.extend((a, b, int(q)) for q in primes[got != hit])
    assert not bad[:5]


@criterion(8, C8)
def test_c8_tail_assertion_never_fires(grid):
    # SeriesConsistencyError would propagate out of density_series_params
    for p in grid:
        density_series_params(p)

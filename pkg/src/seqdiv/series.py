"""Density as an exact infinite sum over Kummer-cyclotomic field degrees.

Writing 2^(j-1) || i_p(r) for the 2-part of the index of r mod p, a prime
p = c (mod d) in the j-th layer divides S_{a,b} iff p = 1 (mod 2^j).  By
Chebotarev that layer contributes

    tau(j) / [N_j:Q] - tau'(j) / [N'_j:Q]

with N_j = Q(zeta_{2^j}, r^{1/2^(j-1)}, zeta_d), N'_j the same with
r^{1/2^j}, and tau, tau' recording whether sigma_c fixes the part of those
fields lying inside Q(zeta_d).  From some j on every term is a quarter of
the previous one, so the sum closes exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .arith import DomainError, kronecker, totient, v2
from .params import Params, extract_params


class SeriesConsistencyError(ArithmeticError):
    """The tail of the series is not geometric where it must be."""


@dataclass(frozen=True)
class SeriesTerm:
    j: int
    deg_Nj: int
    deg_Njp: int
    tau: int
    tau_p: int

    @property
    def term(self) -> Fraction:
        return Fraction(self.tau, self.deg_Nj) - Fraction(self.tau_p, self.deg_Njp)


def condition_Cj(p: Params, j: int) -> bool:
    """(C_j): D' | d' and delta0 <= max(j, delta)."""
    return p.d_odd % p.D_prime == 0 and p.delta0 <= max(j, p.delta)


def degree_Nj(p: Params, j: int) -> int:
    """[N_j : Q]."""
    top = max(j, p.delta)
    if j <= p.lam + 1:
        e = top - 1
    elif condition_Cj(p, j):
        e = top + j - p.lam - 3
    else:
        e = top + j - p.lam - 2
    return 2**e * totient(p.d_odd)


def degree_Njp(p: Params, j: int) -> int:
    """[N'_j : Q]."""
    top = max(j, p.delta)
    if j <= p.lam:
        e = top - 1
    elif condition_Cj(p, j):
        e = top + j - p.lam - 2
    else:
        e = top + j - p.lam - 1
    return 2**e * totient(p.d_odd)


def kummer_degree(k: int, kt_total: int, p: Params) -> int:
    """[Q(zeta_{kt}, r^{1/k}) : Q] for r = r0^h with r0 not a proper power.

    Independent closed form: phi(kt) k / (eps (k, h)), where eps = 2 exactly
    when n_t = lcm(2^(v2(h t) + 1), D(r0)) divides kt.
    """
    if k < 1 or kt_total % k:
        raise DomainError(f"k={k} must divide kt={kt_total}")
    t = kt_total // k
    two_part = 2 ** (v2(p.h * t) + 1)
    n_t = math.lcm(two_part, p.D_r0)
    eps = 2 if kt_total % n_t == 0 else 1
    return totient(kt_total) * k // (eps * math.gcd(k, p.h))


def _cyclotomic_fixed(p: Params, j: int) -> bool:
    # sigma_c fixes Q(zeta_{2^min(j, delta)}) iff c = 1 mod 2^min(j, delta)
    return min(j, p.delta) <= p.gamma


def _quadratic_fixed(p: Params, j: int, kummer_index: int) -> bool:
    """Whether sigma_c fixes the quadratic part of the intersection field.

    ``kummer_index`` is the exponent e of the root r^{1/2^e} adjoined
    (j - 1 for N_j, j for N'_j).
    """
    if p.sqrt2:
        if p.delta < 3:
            return True
        # the exceptional cells where sqrt(2) enters beyond Q(zeta_{2^min(j,delta)})
        if j == 1 and kummer_index == 1 and p.lam == 0:
            return p.c % 8 in (1, 7)
        if j == 2 and kummer_index > p.lam:
            return p.c % 8 == 1
        return True
    # sqrt(r0) lies in the Kummer field iff e >= lam + 1
    if kummer_index <= p.lam or not condition_Cj(p, j):
        return True
    return kronecker(p.quadratic_disc(), p.c) == 1


def tau(p: Params, j: int) -> int:
    return int(_cyclotomic_fixed(p, j) and _quadratic_fixed(p, j, j - 1))


def tau_prime(p: Params, j: int) -> int:
    return int(_cyclotomic_fixed(p, j) and _quadratic_fixed(p, j, j))


def series_term(p: Params, j: int) -> SeriesTerm:
    return SeriesTerm(j, degree_Nj(p, j), degree_Njp(p, j), tau(p, j), tau_prime(p, j))


def tail_start(p: Params) -> int:
    return max(p.lam + 2, p.delta, p.delta0, 4)


def series_terms(p: Params) -> list[SeriesTerm]:
    return [series_term(p, j) for j in range(1, tail_start(p) + 1)]


def density_series_params(p: Params) -> Fraction:
    terms = series_terms(p)
    last = terms[-1].term
    j0 = terms[-1].j
    nxt = series_term(p, j0 + 1).term
    nxt2 = series_term(p, j0 + 2).term
    quarter = Fraction(1, 4)
    if last == 0:
        if nxt != 0 or nxt2 != 0:
            raise SeriesConsistencyError(f"nonzero term after zero term at j={j0} for {p}")
    elif nxt != last * quarter or nxt2 != nxt * quarter:
        raise SeriesConsistencyError(f"tail is not geometric with ratio 1/4 at j={j0} for {p}")
    # sum_{j > j0} last * 4^-(j - j0) = last / 3
    return sum((t.term for t in terms), Fraction(0)) + last / 3


def density_series(a: int, b: int, c: int, d: int) -> Fraction:
    """delta_{a,b}(c, d) summed from field degrees."""
    return density_series_params(extract_params(a, b, c, d))

"""Counting prime divisors of a^k + b^k directly.

For p not dividing ab, p divides some a^k + b^k iff the order of a/b mod p
is even, iff (a/b)^m != 1 mod p where m is the odd part of p - 1.  With
m fixed by p that becomes the comparison a^m != b^m (mod p), which
vectorizes over a whole sieve segment.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .arith import DegenerateRatioError, DomainError, is_prime, v2
from .params import InvalidClassError

#: p*p must fit in int64 for the vectorized modular arithmetic
MAX_LIMIT = 3_000_000_000
DEFAULT_SEGMENT = 1 << 20  # odd numbers per segment

ProgressCallback = Callable[[int, int, int], None]


class NotFalsifiableError(ValueError):
    """Fermat's claim 1.1 is true, so there are no counterexamples to list."""


@dataclass(frozen=True)
class EmpiricalCount:
    x_limit: int
    a: int
    b: int
    c: int
    d: int
    total: int
    dividing: int

    @property
    def ratio(self) -> Optional[Fraction]:
        return Fraction(self.dividing, self.total) if self.total else None

    def as_record(self) -> dict:
        ratio = self.ratio
        return {
            "a": self.a, "b": self.b, "c": self.c, "d": self.d, "x": self.x_limit,
            "total": self.total, "dividing": self.dividing,
            "ratio": None if ratio is None else str(ratio),
            "ratio_decimal": None if ratio is None else round(float(ratio), 6),
        }


# -- single primes ----------------------------------------------------------

def _check_pair(a: int, b: int) -> None:
    if a < 1 or b < 1:
        raise DomainError(f"a and b must be positive, got a={a}, b={b}")
    if a == b:
        raise DegenerateRatioError("a == b is excluded")


def divides_sequence(p: int, a: int, b: int) -> bool:
    """Whether the prime p divides a^k + b^k for some k >= 1."""
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    _check_pair(a, b)
    if a % p == 0 and b % p == 0:
        return True
    if a % p == 0 or b % p == 0:
        return False
    if p == 2:
        return (a + b) % 2 == 0
    m = (p - 1) >> v2(p - 1)
    return pow(a, m, p) != pow(b, m, p)


def two_adic_index_class(p: int, a: int, b: int) -> int:
    """The j with 2^(j-1) exactly dividing the index (p-1)/ord_p(a/b)."""
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if (a * b) % p == 0:
        raise DomainError(f"{p} divides ab = {a * b}")
    s = v2(p - 1)
    w = a * pow(b, -1, p) % p
    x = pow(w, (p - 1) >> s, p)
    e = 0  # v2(ord_p(w))
    while x != 1:
        x = x * x % p
        e += 1
    return s - e + 1


# -- sieving ----------------------------------------------------------------

def small_primes(limit: int) -> np.ndarray:
    """All primes <= limit."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    sieve[4::2] = False
    for q in range(3, math.isqrt(limit) + 1, 2):
        if sieve[q]:
            sieve[q * q::2 * q] = False
    return np.flatnonzero(sieve).astype(np.int64)


def segment_primes(lo: int, hi: int, base: np.ndarray) -> np.ndarray:
    """Primes in [lo, hi), given every prime up to sqrt(hi)."""
    out = []
    if lo <= 2 < hi:
        out.append(np.array([2], dtype=np.int64))
    start = max(lo, 3) | 1
    if start >= hi:
        return np.concatenate(out) if out else np.zeros(0, dtype=np.int64)
    n = (hi - start + 1) // 2  # odd numbers start, start+2, ... < hi
    mask = np.ones(n, dtype=bool)
    for q in base:
        q = int(q)
        if q == 2:
            continue
        qq = q * q
        if qq >= hi:
            break
        first = max(qq, (start + q - 1) // q * q)
        if first % 2 == 0:
            first += q
        mask[(first - start) // 2::q] = False
    out.append(start + 2 * np.flatnonzero(mask).astype(np.int64))
    return np.concatenate(out)


def _pow_mod(base: np.ndarray, exp: np.ndarray, mod: np.ndarray) -> np.ndarray:
    result = np.ones_like(mod)
    base = base % mod
    exp = exp.copy()
    while exp.any():
        odd = (exp & 1).astype(bool)
        result = np.where(odd, result * base % mod, result)
        base = base * base % mod
        exp >>= 1
    return result


def divides_sequence_array(primes: np.ndarray, a: int, b: int) -> np.ndarray:
    """Vectorized ``divides_sequence`` over an array of primes."""
    primes = np.asarray(primes, dtype=np.int64)
    g = math.gcd(a, b)
    out = np.zeros(primes.shape, dtype=bool)
    odd = primes > 2
    if not primes.size:
        return out
    a_mod = np.array([a % int(p) for p in primes], dtype=np.int64) if a >= 2**62 else a % primes
    b_mod = np.array([b % int(p) for p in primes], dtype=np.int64) if b >= 2**62 else b % primes
    coprime = (a_mod != 0) & (b_mod != 0)
    live = odd & coprime
    if live.any():
        p = primes[live]
        pm1 = p - 1
        m = pm1 // (pm1 & -pm1)
        out[live] = _pow_mod(a_mod[live], m, p) != _pow_mod(b_mod[live], m, p)
    # p | gcd(a, b) divides every term; p | ab otherwise divides none
    out[(g % primes) == 0] = True
    if (primes == 2).any() and g % 2:
        out[primes == 2] = (a + b) % 2 == 0
    return out


def _segments(x_limit: int, segment: int) -> list[tuple[int, int]]:
    span = 2 * segment
    return [(lo, min(lo + span, x_limit + 1)) for lo in range(0, x_limit + 1, span)]


def _class_counts(lo, hi, base, a, b, d, c):
    primes = segment_primes(lo, hi, base)
    residues = primes % d
    if c is not None:
        keep = residues == c % d
        primes, residues = primes[keep], residues[keep]
    flags = divides_sequence_array(primes, a, b)
    totals = np.bincount(residues, minlength=d)
    dividing = np.bincount(residues[flags], minlength=d)
    return totals, dividing, primes.size


def _scan(a, b, d, x_limit, threads, c=None, progress=None, segment=DEFAULT_SEGMENT):
    _check_pair(a, b)
    if d < 1:
        raise DomainError(f"modulus d must be positive, got {d}")
    if x_limit < 2:
        raise DomainError(f"x_limit must be >= 2, got {x_limit}")
    if x_limit > MAX_LIMIT:
        raise DomainError(f"x_limit above {MAX_LIMIT} is out of range")
    if threads < 1:
        raise DomainError(f"threads must be >= 1, got {threads}")
    base = small_primes(math.isqrt(x_limit) + 1)
    segs = _segments(x_limit, segment)
    totals = np.zeros(d, dtype=np.int64)
    dividing = np.zeros(d, dtype=np.int64)
    seen = 0

    def work(seg):
        return _class_counts(seg[0], seg[1], base, a, b, d, c)

    if threads == 1:
        results = map(work, segs)
        pool = None
    else:
        pool = ThreadPoolExecutor(max_workers=threads)
        results = pool.map(work, segs)
    try:
        # map() yields in submission order, so the sum is deterministic
        for done, (t, v, n) in enumerate(results, 1):
            totals += t
            dividing += v
            seen += n
            if progress is not None:
                progress(seen, done, len(segs))
    finally:
        if pool is not None:
            pool.shutdown()
    return totals, dividing


def count_up_to(a: int, b: int, c: int, d: int, x_limit: int, threads: int = 1,
                progress: Optional[ProgressCallback] = None,
                segment: int = DEFAULT_SEGMENT) -> EmpiricalCount:
    """Count primes p <= x_limit with p = c mod d, and those dividing S_{a,b}."""
    if d < 1:
        raise DomainError(f"modulus d must be positive, got {d}")
    if math.gcd(c, d) != 1:
        raise InvalidClassError(f"gcd({c}, {d}) != 1")
    c = c % d or d
    totals, dividing = _scan(a, b, d, x_limit, threads, c=c, progress=progress, segment=segment)
    k = c % d
    return EmpiricalCount(x_limit, a, b, c, d, int(totals[k]), int(dividing[k]))


def scan_classes(a: int, b: int, d: int, x_limit: int, threads: int = 1,
                 progress: Optional[ProgressCallback] = None,
                 segment: int = DEFAULT_SEGMENT) -> list[EmpiricalCount]:
    """One count per invertible class mod d, from a single sieve pass."""
    totals, dividing = _scan(a, b, d, x_limit, threads, progress=progress, segment=segment)
    return [
        EmpiricalCount(x_limit, a, b, c, d, int(totals[c % d]), int(dividing[c % d]))
        for c in range(1, d + 1) if math.gcd(c, d) == 1
    ]


def prime_divisor_flags(a: int, b: int, x_limit: int) -> tuple[np.ndarray, np.ndarray]:
    """All primes <= x_limit and whether each divides S_{a,b}."""
    _check_pair(a, b)
    primes = small_primes(x_limit)
    return primes, divides_sequence_array(primes, a, b)


# -- Fermat's 1641 claims -------------------------------------------------------

#: conjecture id -> (a, c, d): the primes p = c mod d that divide S_{a,1}
FERMAT_CLASSES = {
    "1.2": (3, 1, 12),
    "1.3": (5, 1, 10),
    "1.4": (5, 9, 10),
}


def fermat_counterexamples(conjecture: str, limit: int) -> list[int]:
    """The first ``limit`` primes contradicting one of Fermat's claims."""
    conjecture = str(conjecture)
    if conjecture == "1.1":
        raise NotFalsifiableError("conjecture 1.1 holds: no prime p = -1 mod 12 divides S_{3,1}")
    if conjecture not in FERMAT_CLASSES:
        raise DomainError(f"unknown conjecture {conjecture!r}; expected one of 1.2, 1.3, 1.4")
    a, c, d = FERMAT_CLASSES[conjecture]
    bound = 1024
    while True:
        primes = small_primes(bound)
        primes = primes[primes % d == c]
        hits = primes[divides_sequence_array(primes, a, 1)]
        if hits.size >= limit:
            return [int(p) for p in hits[:limit]]
        bound *= 4

"""Exact integer and rational primitives.

Everything here is a pure function of its arguments.  Rationals are
``fractions.Fraction`` (always reduced, positive denominator); the extended
naturals used for ``gamma`` are plain ints plus ``math.inf``.
"""

from __future__ import annotations

import functools
import math
import random
from fractions import Fraction
from typing import Union

#: A nonnegative integer or ``INFINITY``.  ``math.inf`` compares correctly
#: against every int, which is exactly the order the tables need.
ExtNat = Union[int, float]
INFINITY: float = math.inf


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class DegenerateRatioError(DomainError):
    """a/b == 1, so a^k + b^k has no interesting prime divisors."""


def v2(n: int) -> int:
    """2-adic valuation of a nonzero integer."""
    if n == 0:
        raise DomainError("v2(0) is undefined")
    n = abs(n)
    return (n & -n).bit_length() - 1


def odd_part(n: int) -> int:
    return n >> v2(n)


def mod_pow(base: int, exp: int, m: int) -> int:
    """``base**exp mod m`` in ``[0, m)``."""
    if m < 2:
        raise DomainError(f"modulus must be >= 2, got {m}")
    if exp < 0:
        raise DomainError("negative exponent")
    return pow(base, exp, m)


@functools.lru_cache(maxsize=4096)
def totient(n: int) -> int:
    if n < 1:
        raise DomainError(f"totient undefined for {n}")
    result = n
    for p in factorize(n):
        result -= result // p
    return result


# -- primality and factoring ------------------------------------------------

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Miller-Rabin; deterministic for n < 3.3e24 with the fixed bases."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = v2(d)
    d >>= s
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    if n % 2 == 0:
        return 2
    rng = random.Random(n)
    while True:
        c = rng.randrange(1, n)
        f = lambda x: (x * x + c) % n  # noqa: E731
        x = y = rng.randrange(2, n)
        g = 1
        while g == 1:
            x = f(x)
            y = f(f(y))
            g = math.gcd(abs(x - y), n)
        if g != n:
            return g


def factorize(n: int, trial_limit: int = 10**6) -> dict[int, int]:
    """Prime factorization of ``|n|`` as ``{prime: exponent}``.

    Trial division up to ``trial_limit``, Pollard rho for what remains.
    """
    if n == 0:
        raise DomainError("cannot factor 0")
    n = abs(n)
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    p = 5
    step = 2
    while p <= trial_limit and p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += step
        step = 6 - step
    if n == 1:
        return out
    stack = [n]
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        f = _pollard_rho(m)
        stack.extend((f, m // f))
    return dict(sorted(out.items()))


# -- quadratic fields ---------------------------------------------------------

def squarefree_signed(n: int) -> int:
    """The squarefree s with n = s*m^2 and sign(s) == sign(n)."""
    if n == 0:
        raise DomainError("squarefree kernel of 0 is undefined")
    s = 1
    for p, e in factorize(n).items():
        if e % 2:
            s *= p
    return s if n > 0 else -s


def is_rational_square(q: Fraction) -> bool:
    if q < 0:
        return False
    return (math.isqrt(q.numerator) ** 2 == q.numerator
            and math.isqrt(q.denominator) ** 2 == q.denominator)


def quad_discriminant(q: Union[int, Fraction]) -> int:
    """Discriminant of Q(sqrt(q)) for a nonzero non-square rational q."""
    q = Fraction(q)
    if q == 0 or is_rational_square(q):
        raise DomainError(f"{q} is a rational square; Q(sqrt(q)) is not quadratic")
    s = squarefree_signed(q.numerator * q.denominator)
    return s if s % 4 == 1 else 4 * s


def kronecker(D: int, n: int) -> int:
    """Kronecker symbol (D/n) for n >= 1, by the reciprocity recursion."""
    if n < 1:
        raise DomainError(f"kronecker symbol needs n >= 1, got {n}")
    if n == 1:
        return 1
    e = v2(n)
    n >>= e
    result = 1
    if e:
        if D % 2 == 0:
            return 0
        if e % 2 and D % 8 in (3, 5):
            result = -1
    # Jacobi symbol (D/n) with n odd
    a = D % n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


# -- perfect powers -----------------------------------------------------------

def perfect_power_decompose(num: int, den: int) -> tuple[Fraction, int, int, int]:
    """Write num/den = r0**h with h maximal.

    Returns ``(r0, h, lam, h_odd)`` with ``h == 2**lam * h_odd``.
    """
    if num < 1 or den < 1:
        raise DomainError("numerator and denominator must be positive")
    r = Fraction(num, den)
    if r == 1:
        raise DegenerateRatioError("a/b == 1 (a == b) is excluded")
    fn = factorize(r.numerator) if r.numerator > 1 else {}
    fd = factorize(r.denominator) if r.denominator > 1 else {}
    h = 0
    for e in (*fn.values(), *fd.values()):
        h = math.gcd(h, e)
    u = math.prod(p ** (e // h) for p, e in fn.items())
    v = math.prod(p ** (e // h) for p, e in fd.items())
    lam = v2(h)
    return Fraction(u, v), h, lam, h >> lam

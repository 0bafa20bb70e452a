"""Derived parameters of (a, b, c, d) and the choice of density table."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .arith import (
    INFINITY,
    DomainError,
    ExtNat,
    factorize,
    odd_part,
    perfect_power_decompose,
    quad_discriminant,
    squarefree_signed,
    v2,
)


class InvalidClassError(DomainError):
    """gcd(c, d) != 1, so c mod d is not a class of primes."""


class DensityCase(enum.Enum):
    T1 = "T1"
    T2 = "T2"
    T3 = "T3"
    T4 = "T4"
    T5 = "T5"
    T6 = "T6"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Params:
    a: int
    b: int
    c: int
    d: int
    r: Fraction
    r0: Fraction
    h: int
    lam: int
    h_odd: int
    delta: int
    d_odd: int
    gamma: ExtNat
    uv: int
    D_r0: int
    delta0: int
    D_prime: int
    # only set outside the sqrt(2) regime
    t: Optional[int]
    D_t: Optional[int]

    @property
    def sqrt2(self) -> bool:
        """True when Q(sqrt(r0)) = Q(sqrt(2))."""
        return squarefree_signed(self.uv) == 2

    @property
    def D_r0_divides_d(self) -> bool:
        return self.d % self.D_r0 == 0

    def quadratic_disc(self) -> Optional[int]:
        """The discriminant whose Kronecker symbol at c a table row reads.

        D(r0) when delta0 <= delta, D(t) otherwise; None in the sqrt(2)
        regime, where the tables read c mod 8 instead.
        """
        if self.sqrt2:
            return None
        return self.D_r0 if self.delta0 <= self.delta else self.D_t


def _signed_odd_prime(p: int) -> int:
    # (-1/p) * p, i.e. the prime discriminant p* = +-p with p* = 1 mod 4
    return p if p % 4 == 1 else -p


def _twist(uv: int) -> int:
    """The integer t attached to r0 = u/v outside the sqrt(2) regime.

    Only the square class of t matters, so t is built from the squarefree
    kernel s of uv: -s when s is odd, prod (-1/p_i) p_i when s = 2 prod p_i.
    """
    s = squarefree_signed(uv)
    if s % 2:
        return -s
    return math.prod(_signed_odd_prime(p) for p in factorize(s // 2))


def extract_params(a: int, b: int, c: int, d: int) -> Params:
    if a < 1 or b < 1:
        raise DomainError(f"a and b must be positive, got a={a}, b={b}")
    if d < 1:
        raise DomainError(f"modulus d must be positive, got {d}")
    if math.gcd(c, d) != 1:
        raise InvalidClassError(f"gcd({c}, {d}) = {math.gcd(c, d)} != 1")
    c = c % d or d
    r0, h, lam, h_odd = perfect_power_decompose(a, b)
    uv = r0.numerator * r0.denominator
    D_r0 = quad_discriminant(r0)
    delta0 = v2(D_r0)
    sqrt2 = squarefree_signed(uv) == 2
    t = None if sqrt2 else _twist(uv)
    return Params(
        a=a, b=b, c=c, d=d,
        r=Fraction(a, b), r0=r0, h=h, lam=lam, h_odd=h_odd,
        delta=v2(d), d_odd=odd_part(d),
        gamma=INFINITY if c == 1 else v2(c - 1),
        uv=uv, D_r0=D_r0, delta0=delta0, D_prime=D_r0 >> delta0,
        t=t, D_t=None if t is None else quad_discriminant(t),
    )


def classify(p: Params) -> DensityCase:
    if p.sqrt2:
        if p.delta <= 2:
            return DensityCase.T4
        return DensityCase.T5 if p.lam > 0 else DensityCase.T6
    if p.d_odd % p.D_prime:
        return DensityCase.T1
    return DensityCase.T2 if p.delta0 <= p.delta else DensityCase.T3

"""When is the density 0 or 1/phi(d)?

Both extremes come down to quadratic reciprocity: either the 2-part of
p - 1 is too small for ord_p(r) to be even, or the Legendre symbol of r0
at p forces r^((p-1)/2(p-1,h)) = +-1.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .arith import DomainError, is_prime, kronecker, v2
from .empirical import prime_divisor_flags
from .params import Params, extract_params


class Extremal(enum.Enum):
    ZERO = "zero"
    FULL = "full"
    INTERMEDIATE = "intermediate"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class ExtremalClass:
    kind: Extremal
    case_label: str  # "a-i", "a-ii", "b-i", "b-ii" or "none"
    certificate: str


def _clauses(p: Params) -> list[tuple[str, bool]]:
    lam, gamma, delta = p.lam, p.gamma, p.delta
    divides = p.D_r0_divides_d
    symbol = kronecker(p.D_r0, p.c) if divides else 0
    return [
        ("a-i", lam >= gamma and delta > gamma),
        # gamma - 1 == lam is never true for gamma = inf
        ("a-ii", lam == gamma - 1 and delta > gamma and divides and symbol == 1),
        ("b-i", lam == 0 and delta == 0 and divides and symbol == -1),
        ("b-ii", min(gamma, delta) > lam and divides and symbol == -1),
    ]


def classify_extremal_params(p: Params) -> ExtremalClass:
    divides = p.D_r0_divides_d
    symbol = kronecker(p.D_r0, p.c) if divides else None
    gamma = "inf" if math.isinf(p.gamma) else p.gamma
    cert = (f"λ={p.lam}, γ={gamma}, δ={p.delta}, D(r0)={p.D_r0}, "
            f"D(r0)|d={'yes' if divides else 'no'}"
            + (f", (D(r0)/c)={symbol}" if symbol is not None else ""))
    for label, holds in _clauses(p):
        if holds:
            kind = Extremal.ZERO if label.startswith("a") else Extremal.FULL
            return ExtremalClass(kind, label, cert)
    return ExtremalClass(Extremal.INTERMEDIATE, "none", cert)


def classify_extremal(a: int, b: int, c: int, d: int) -> ExtremalClass:
    return classify_extremal_params(extract_params(a, b, c, d))


@dataclass(frozen=True)
class TauWitness:
    tau_p: int
    v2_tau: int
    symbol: int

    @property
    def tau_p_odd(self) -> bool:
        return self.v2_tau == 0

    @property
    def two_exact(self) -> bool:
        return self.v2_tau == 1

    @property
    def excludes(self) -> bool:
        """p cannot divide S_{a,b}: tau(p) odd, or 2 || tau(p) and (r0/p) = 1."""
        return self.tau_p_odd or (self.two_exact and self.symbol == 1)


def tau_p_parity_witness(p: int, a: int, b: int) -> TauWitness:
    """tau(p) = (p-1)/(p-1, h), its 2-adic valuation and (r0/p)."""
    if not is_prime(p) or (2 * a * b) % p == 0:
        raise DomainError(f"need a prime p not dividing 2ab, got p={p}")
    params = extract_params(a, b, 1, 1)
    tau = (p - 1) // math.gcd(p - 1, params.h)
    # p does not divide uv, so the Kronecker symbol of D(r0) is the Legendre symbol of r0
    return TauWitness(tau, v2(tau), kronecker(params.D_r0, p))


def exceptional_primes(a: int, b: int, c: int, d: int, x_limit: int) -> list[int]:
    """Primes p <= x_limit, p = c mod d, contradicting an extremal density.

    For a zero density these are the divisors of S_{a,b} in the class, for
    a full density the non-divisors.  Empty for intermediate densities.
    """
    verdict = classify_extremal(a, b, c, d)
    if verdict.kind is Extremal.INTERMEDIATE:
        return []
    primes, flags = prime_divisor_flags(a, b, x_limit)
    return [int(q) for q in exceptions_from_flags(primes, flags, verdict.kind, c, d)]


def exceptions_from_flags(primes: np.ndarray, flags: np.ndarray, kind: Extremal,
                          c: int, d: int) -> np.ndarray:
    """``exceptional_primes`` on a precomputed divisor table."""
    in_class = primes % d == c % d
    bad = flags if kind is Extremal.ZERO else ~flags
    return primes[in_class & bad]

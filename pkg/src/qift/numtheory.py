"""Continued-fraction recovery of k/r and the modular arithmetic behind it."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, InvalidArgument

ORDER_LIMIT = 1 << 31


@dataclass(frozen=True)
class Convergent:
    k: int
    r: int
    is_best_under_bound: bool = True
    semiconvergent: bool = False

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.k, self.r)

    def __str__(self):
        return f"{self.k}/{self.r}"

    def to_dict(self) -> dict:
        return {"k": self.k, "r": self.r, "is_best_under_bound": self.is_best_under_bound,
                "semiconvergent": self.semiconvergent}


def cf_terms(num: int, den: int) -> list[int]:
    """Partial quotients of ``num/den`` (den > 0)."""
    terms = []
    while den:
        a, rem = divmod(num, den)
        terms.append(a)
        num, den = den, rem
    return terms


def convergents(num: int, den: int) -> list[tuple[int, int]]:
    """All convergents ``p/q`` of ``num/den``, in order."""
    out = []
    p0, q0, p1, q1 = 0, 1, 1, 0
    for a in cf_terms(num, den):
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        out.append((p1, q1))
    return out


def ladder(y: int, N: int, bound: int) -> list[tuple[int, int]]:
    """Convergents of ``y/N`` whose denominators stay below ``bound``."""
    return [(p, q) for p, q in convergents(y, N) if q < bound]


def _closer(target: Fraction, a: Fraction, b: Fraction) -> bool:
    """True if ``a`` is strictly closer to ``target`` than ``b``."""
    return abs(target - a) < abs(target - b)


def best_approx(y: int, N: int, bound: int, convergents_only: bool = False) -> Convergent:
    """Best approximation to ``y/N`` among fractions with denominator ``< bound``.

    Convergents are developed until the next denominator reaches ``bound``.
    The last admissible convergent is compared against the largest admissible
    semiconvergent that follows it, which settles the best bounded-denominator
    approximation. With ``convergents_only`` the last convergent is returned
    and the flag records whether it is also the overall best.
    """
    if N < 1 or not 0 <= y < N:
        raise InvalidArgument(f"need 0 <= y < N, got y={y}, N={N}")
    if bound < 2:
        raise InvalidArgument("bound must be at least 2")
    terms = cf_terms(y, N)
    p0, q0, p1, q1 = 0, 1, 1, 0
    nxt = None
    for a in terms:
        p, q = a * p1 + p0, a * q1 + q0
        if q >= bound:
            nxt = a
            break
        p0, q0, p1, q1 = p1, q1, p, q
    target = Fraction(y, N)
    conv = Fraction(p1, q1)
    best, semi = conv, False
    if nxt is not None:
        # intermediate fractions (p0 + t*p1) / (q0 + t*q1), 1 <= t < nxt
        t = (bound - 1 - q0) // q1
        if t >= 1:
            cand = Fraction(p0 + t * p1, q0 + t * q1)
            if _closer(target, cand, conv):
                best, semi = cand, True
    if convergents_only:
        return Convergent(conv.numerator, conv.denominator, is_best_under_bound=not semi)
    return Convergent(best.numerator, best.denominator, True, semi)


def success_window(y: int, N: int, k: int, r: int) -> bool:
    """``|y/N - k/r| <= 1/(2N)``, in integers: ``|2(y*r - k*N)| <= r``."""
    if r < 1:
        raise InvalidArgument("r must be positive")
    return abs(2 * (y * r - k * N)) <= r


def window_k(y: int, N: int, r: int) -> int | None:
    """The k (0 <= k <= r) whose window contains y, or None."""
    k = (2 * y * r + N) // (2 * N)
    return k if success_window(y, N, k, r) else None


def gcd(a: int, b: int) -> int:
    return math.gcd(a, b)


def mod_pow(a: int, e: int, M: int) -> int:
    if M < 1:
        raise InvalidArgument("modulus must be positive")
    if e < 0:
        raise InvalidArgument("negative exponent")
    return pow(a, e, M)


def multiplicative_order(a: int, M: int) -> int:
    """Least ``r > 0`` with ``a^r = 1 (mod M)``, by brute force."""
    if M < 1 or M > ORDER_LIMIT:
        raise InvalidArgument(f"modulus must lie in 1..2^31, got {M}")
    if M == 1:
        return 1
    a %= M
    if math.gcd(a, M) != 1:
        raise DomainError(f"{a} is not coprime to {M}")
    r, v = 1, a
    while v != 1:
        v = v * a % M
        r += 1
    return r

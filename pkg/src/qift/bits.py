"""Scalar bit kernel: phase index of one amplitude term via reversal and popcount.

For n-bit integers x and y write ``h(t) = sum_i x_i * y_{t-1-i}``, the number of
bit pairs whose positions add up to ``t - 1``. The exact QFT phase of the pair
(x, y) in units of ``2*pi / 2^n`` is ``sum_s 2^(n-1-s) h(n-s) mod 2^n``; the
approximate transforms truncate that sum. With ``z`` the n-bit reversal of y,
``h(n - shift) = popcount(x & (z >> shift))``, so every term costs one AND and
one popcount.
"""

from __future__ import annotations

from typing import NamedTuple

from .errors import InvalidArgument
from .transform_spec import EXACT, TransformSpec

MAX_WIDTH = 62


class PhaseIndex(NamedTuple):
    """Amplitude factor ``exp(2*pi*i*q / 2^order)``."""

    q: int
    order: int

    @property
    def modulus(self) -> int:
        return 1 << self.order


def check_width(n: int) -> None:
    if not 1 <= n <= MAX_WIDTH:
        raise InvalidArgument(f"width n={n} outside 1..{MAX_WIDTH}")


def check_word(value: int, n: int) -> None:
    check_width(n)
    if not 0 <= value < (1 << n):
        raise InvalidArgument(f"value {value} does not fit in {n} bits")


def bit_reverse(y: int, n: int) -> int:
    check_word(y, n)
    # bin() pads nothing, so left-justify to width before reversing
    return int(format(y, f"0{n}b")[::-1], 2)


def h_sum(x: int, z: int, shift: int, n: int) -> int:
    """``popcount(x & (z >> shift))``, i.e. ``h(n - shift)``; zero once ``shift >= n``."""
    check_word(x, n)
    check_word(z, n)
    if shift < 0:
        raise InvalidArgument("shift must be non-negative")
    if shift >= n:
        return 0
    return (x & (z >> shift)).bit_count()


def _h(x: int, z: int, n: int, t: int) -> int:
    # h(t) with h(t) = 0 for t <= 0
    if t <= 0:
        return 0
    return (x & (z >> (n - t))).bit_count()


def phase_index(x: int, y: int, n: int, spec: TransformSpec) -> PhaseIndex:
    check_word(x, n)
    check_word(y, n)
    spec.validate(n)
    if spec.kind == EXACT:
        return PhaseIndex((x * y) & ((1 << n) - 1), n)
    m = spec.order(n)
    z = bit_reverse(y, n)
    q = 0
    for s in range(m):
        q += _h(x, z, n, n - s) << (m - 1 - s)
    if spec.modified:
        q += _h(x, z, n, n - m)
    return PhaseIndex(q & ((1 << m) - 1), m)

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_best_approx
from qift import DomainError, best_approx, gcd, mod_pow, multiplicative_order, success_window
from qift.numtheory import convergents, ladder, window_k


def test_best_approx_examples():
    assert str(best_approx(23906945, 2 ** 25, 2 ** 13)) == "508/713"
    assert str(best_approx(3186178, 2 ** 27, 2 ** 14)) == "8/337"
    assert str(best_approx(0, 2 ** 10, 7)) == "0/1"
    assert str(best_approx(5, 16, 4)) == "1/3"


def test_semiconvergent_beats_convergents():
    # 2/64 = 1/32 has convergents 0/1 and 1/32 only; under bound 18 the
    # intermediate fraction 1/17 is closer than 0/1
    assert str(best_approx(2, 64, 18)) == "1/17"
    assert best_approx(2, 64, 18).semiconvergent
    assert str(best_approx(2, 64, 18, convergents_only=True)) == "0/1"


def test_best_approx_matches_exhaustive_search():
    for n in range(1, 13):
        N = 1 << n
        for bound in (2, 3, 5, 8, 13, 21, 33, 64):
            for y in range(0, N, max(1, N >> 8)):
                got = best_approx(y, N, bound)
                assert got.fraction == brute_best_approx(y, N, bound), (y, N, bound)
                assert math.gcd(got.k, got.r) == 1 and 1 <= got.r < bound


def test_ladder_is_convergent_prefix():
    steps = ladder(23906945, 2 ** 25, 2 ** 13)
    assert steps[-1] == (508, 713) or Fraction(*steps[-1]) != Fraction(508, 713)
    assert all(q < 2 ** 13 for _, q in steps)
    assert steps == [c for c in convergents(23906945, 2 ** 25) if c[1] < 2 ** 13]


def test_window_examples():
    assert success_window(23906945, 2 ** 25, 508, 713)
    assert not success_window(23906944, 2 ** 25, 508, 713)
    assert success_window(3 * 256 // 4, 256, 3, 4)
    assert window_k(23906945, 2 ** 25, 713) == 508
    assert window_k(23906944, 2 ** 25, 713) is None


@given(st.integers(1, 2 ** 40), st.integers(1, 2 ** 20), st.integers(0, 2 ** 20), st.integers(1, 2 ** 20))
def test_window_is_exact(y, N, k, r):
    assert success_window(y, N, k, r) == (abs(Fraction(y, N) - Fraction(k, r)) <= Fraction(1, 2 * N))


@settings(max_examples=300)
@given(st.data())
def test_window_member_recovers_reduced_fraction(data):
    bound = data.draw(st.integers(3, 2 ** 12))
    r = data.draw(st.integers(2, bound - 1))
    k = data.draw(st.integers(0, r - 1))
    n = max(r * bound, 2).bit_length() + data.draw(st.integers(0, 3))
    N = 1 << n
    centre = N * k // r
    y = data.draw(st.sampled_from([v for v in range(centre - 1, centre + 3)
                                   if 0 <= v < N and success_window(v, N, k, r)]))
    assert best_approx(y, N, bound).fraction == Fraction(k, r)


@settings(max_examples=300)
@given(st.data())
def test_recovery_is_stable_near_window(data):
    bound = data.draw(st.integers(3, 200))
    c = data.draw(st.integers(3, 40))
    N = c * bound * bound
    r = data.draw(st.integers(2, bound - 1))
    k = data.draw(st.integers(0, r - 1))
    y = round(Fraction(N * k, r))
    a = data.draw(st.integers(0, (c - 2) // 2))
    y1 = min(N - 1, max(0, y + data.draw(st.sampled_from([-a, a]))))
    assert 2 * abs(y1 - y) < c - 1
    assert best_approx(y1, N, bound).fraction == best_approx(y, N, bound).fraction == Fraction(k, r)


def test_integer_helpers():
    assert multiplicative_order(7, 15) == 4
    assert mod_pow(2, 10, 1000) == 24
    assert gcd(0, 5) == 5
    with pytest.raises(DomainError):
        multiplicative_order(6, 15)


@given(st.integers(2, 500), st.integers(2, 500))
def test_order_against_power_loop(a, M):
    if math.gcd(a, M) != 1:
        return
    r = multiplicative_order(a, M)
    assert pow(a, r, M) == 1 % M
    assert all(pow(a, e, M) != 1 for e in range(1, r))

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import integral_product_form, naive_h, naive_phase
from qift import InvalidArgument, TransformSpec, bit_reverse, h_sum, phase_index
from qift.transforms import phase_matrix


def test_bit_reverse_examples():
    assert bit_reverse(0, 8) == 0
    assert bit_reverse(1, 4) == 8
    assert bit_reverse(0b0110, 4) == 0b0110
    assert bit_reverse(0b0001011, 7) == 0b1101000


@given(st.integers(1, 62).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, (1 << n) - 1))))
def test_bit_reverse_is_involution(case):
    n, y = case
    assert bit_reverse(bit_reverse(y, n), n) == y


def test_bit_reverse_rejects_wide_word():
    with pytest.raises(InvalidArgument):
        bit_reverse(16, 4)


def test_h_sum_examples():
    x, y, n = 0b1011, 0b0110, 4
    z = bit_reverse(y, n)
    assert h_sum(x, z, 0, n) == 1
    assert h_sum(x, z, 1, n) == 2
    assert h_sum(x, z, n, n) == 0


@given(st.integers(1, 20).flatmap(lambda n: st.tuples(
    st.just(n), st.integers(0, (1 << n) - 1), st.integers(0, (1 << n) - 1), st.integers(0, n + 2))))
def test_h_sum_matches_bit_pairs(case):
    n, x, y, shift = case
    assert h_sum(x, bit_reverse(y, n), shift, n) == naive_h(x, y, n, n - shift)


def test_integral_example_against_product_form():
    spec = TransformSpec.parse("integral")
    got = phase_index(0b1011, 0b0110, 4, spec)
    assert got.q == 1 and got.order == 2
    assert integral_product_form(0b1011, 0b0110, 4) == 1


def test_scalar_phase_index_exhaustive_small():
    for n in range(1, 7):
        specs = [TransformSpec.parse("qft")] + [TransformSpec.parse(f"{k}:{m}")
                                                 for k in ("aqft", "maqft") for m in range(1, n + 1)]
        if n >= 2:
            specs.append(TransformSpec.parse("integral"))
        for spec in specs:
            for x in range(1 << n):
                for y in range(1 << n):
                    assert phase_index(x, y, n, spec).q == naive_phase(x, y, n, spec), (n, spec, x, y)


@given(st.integers(2, 40).flatmap(lambda n: st.tuples(
    st.just(n), st.integers(0, (1 << n) - 1), st.integers(0, (1 << n) - 1))))
def test_scalar_integral_matches_product_form(case):
    n, x, y = case
    assert phase_index(x, y, n, TransformSpec.parse("integral")).q == integral_product_form(x, y, n)


@given(st.integers(1, 62).flatmap(lambda n: st.tuples(
    st.just(n), st.integers(0, (1 << n) - 1), st.integers(0, (1 << n) - 1))))
def test_full_order_is_product(case):
    n, x, y = case
    N = 1 << n
    if n <= 30:
        assert phase_index(x, y, n, TransformSpec.parse(f"aqft:{n}")).q == x * y % N
    assert phase_index(x, y, n, TransformSpec.parse("qft")).q == x * y % N


def test_kernel_grid_matches_scalar():
    n = 6
    for text in ("integral", "aqft:3", "maqft:4", "qft"):
        spec = TransformSpec.parse(text)
        grid = phase_matrix(n, spec)
        want = np.array([[phase_index(x, y, n, spec).q for y in range(64)] for x in range(64)])
        assert np.array_equal(grid, want)


def test_phase_index_validation():
    with pytest.raises(InvalidArgument):
        phase_index(0, 0, 3, TransformSpec.parse("aqft:4"))
    with pytest.raises(InvalidArgument):
        phase_index(8, 0, 3, TransformSpec.parse("qft"))


def test_spec_parsing():
    assert TransformSpec.parse("maqft:3").label == "maqft:3"
    assert TransformSpec.parse("integral").order(20) == 2
    assert TransformSpec.parse("qft").order(20) == 20
    assert TransformSpec.parse("aqft:1").degenerate
    for bad in ("", "aqft", "aqft:0", "maqft:x", "fft", "aqft:-1"):
        with pytest.raises(InvalidArgument):
            TransformSpec.parse(bad)

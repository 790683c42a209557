import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fecc.bits import bit_of
from fecc.partitions import (
    PartitionDescriptor,
    TooManyStrings,
    decode_descriptor,
    distinguishing_indices,
    encoded_length,
    partition_descriptor,
    partition_index,
    partition_index_all,
)


def restrict(x: int, k: int, indices) -> tuple:
    return tuple(bit_of(x, k, i) for i in indices)


def test_two_strings_k2():
    # "00" and "01" differ only at position 2
    idx = distinguishing_indices([0b00, 0b01], k=2)
    assert 2 in idx
    assert restrict(0b00, 2, idx) != restrict(0b01, 2, idx)


def test_three_strings():
    xs = [0b000, 0b011, 0b101]
    idx = distinguishing_indices(xs, k=3)
    assert len(idx) == 3
    seen = {restrict(x, 3, idx) for x in xs}
    assert len(seen) == 3


def test_too_many_strings():
    with pytest.raises(TooManyStrings):
        distinguishing_indices([0, 1, 2], k=2)


def test_duplicate_strings_rejected():
    with pytest.raises(ValueError):
        distinguishing_indices([1, 1], k=3)


def test_singleton_descriptor():
    d = partition_descriptor([0b101], k=3)
    assert partition_index(d, 0b101, 3) == 1


def test_roundtrip_size6_k16():
    rng = np.random.default_rng(7)
    for _ in range(50):
        xs = [int(v) for v in rng.choice(1 << 16, size=6, replace=False)]
        d = partition_descriptor(xs, k=16)
        for i, x in enumerate(xs):
            assert partition_index(d, x, 16) == i + 1
        # wire form round trip is bit exact
        enc = d.encode()
        back = decode_descriptor(enc, 16)
        assert back == d


def test_encoded_length_formula():
    for k, L in [(16, 6), (8, 3), (5, 5), (2, 1)]:
        xs = list(range(L))
        d = partition_descriptor(xs, k=k)
        assert d.encode().size == encoded_length(L, k) == L * max(1, (k - 1).bit_length()) + L * L


def test_pt_defaults_to_one():
    d = partition_descriptor([0b11, 0b00], k=2)
    # 0b10 matches neither stored evaluation on the chosen indices or maps to 1
    got = partition_index(d, 0b01, 2)
    assert got in (1, 2)
    # empty and malformed strings
    assert partition_index(np.zeros(0, dtype=np.uint8), 5, 4) == 1
    assert partition_index(np.ones(3, dtype=np.uint8), 5, 4) == 1


@given(st.integers(1, 16), st.data())
@settings(max_examples=200, deadline=None)
def test_pt_total_on_arbitrary_bits(k, data):
    nbits = data.draw(st.integers(0, 40))
    bits = data.draw(st.lists(st.integers(0, 1), min_size=nbits, max_size=nbits))
    x = data.draw(st.integers(0, (1 << k) - 1))
    got = partition_index(np.array(bits, dtype=np.uint8), x, k)
    assert got >= 1


def test_padded_width():
    xs = [0b0011, 0b1100]
    d = partition_descriptor(xs, k=4, width=4)
    assert d.width == 4
    assert d.encode().size == encoded_length(4, 4)
    for i, x in enumerate(xs):
        assert partition_index(d, x, 4) == i + 1


def test_partition_index_all_matches_scalar():
    rng = np.random.default_rng(3)
    k = 6
    xs = [int(v) for v in rng.choice(1 << k, size=5, replace=False)]
    d = partition_descriptor(xs, k=k)
    vec = partition_index_all(d, k)
    for x in range(1 << k):
        assert vec[x] == partition_index(d, x, k)


def test_exhaustive_small():
    # every subset of distinct strings up to size 4 at k=4 round-trips
    import itertools

    k = 4
    for size in (1, 2, 3, 4):
        for xs in itertools.combinations(range(8), size):
            d = partition_descriptor(list(xs), k=k)
            for i, x in enumerate(xs):
                assert partition_index(d, x, k) == i + 1

from fractions import Fraction

import numpy as np
import pytest

from fecc.bits import TriBitString, hamming
from fecc.binary_codes import (
    CodeHandle,
    ConstructionFailed,
    LengthMismatch,
    TooManyErasures,
    blockwise_decode_union,
    build_base_code,
    complement_extend,
    frac_ceil,
    frac_floor,
    list_decode_errors,
    list_decode_erasures,
    load_codebook,
    make_tiered_code,
    min_distance,
    repeat_code,
    save_codebook,
)
from fecc.partitions import partition_descriptor


def row_int(row) -> int:
    return int("".join(str(int(b)) for b in row), 2)


def brute_min_distance(code: CodeHandle) -> int:
    """Independent scan: packed ints, reverse iteration order."""
    ints = [row_int(r) for r in code.codebook]
    best = code.n0 + 1
    for i in reversed(range(len(ints))):
        for j in reversed(range(i)):
            best = min(best, bin(ints[i] ^ ints[j]).count("1"))
    return best


def brute_list(code: CodeHandle, m_bits, radius: int) -> list[int]:
    mi = row_int(m_bits)
    out = []
    for x in range(1 << code.k):
        if bin(row_int(code.codebook[x]) ^ mi).count("1") <= radius:
            out.append(x)
    return out


def handle(words: list[str], eps=Fraction(1, 2)) -> CodeHandle:
    cb = np.array([[int(c) for c in w] for w in words], dtype=np.uint8)
    k = (len(words) - 1).bit_length() if len(words) > 1 else 0
    return CodeHandle(k=max(k, 0), n0=len(words[0]), eps=eps, codebook=cb)


# --- build_base_code -------------------------------------------------------

def test_build_k1():
    c = build_base_code(1, Fraction(1, 2))
    d = frac_ceil(Fraction(1, 4) * c.n0)
    assert min_distance(c) >= d
    wt = c.codebook.sum(axis=1)
    assert wt.min() >= d and (c.n0 - wt).min() >= d


def test_build_k4_derived_distance():
    c = build_base_code(4, Fraction(1, 5))
    floor = frac_ceil(Fraction(2, 5) * c.n0)
    assert brute_min_distance(c) >= floor
    assert min_distance(c) == brute_min_distance(c)
    assert c.n0 % 3 == 0


def test_build_out_of_range_fails():
    with pytest.raises(ConstructionFailed):
        build_base_code(12, Fraction(1, 100), max_n0=60)


def test_build_rejects_bad_args():
    with pytest.raises(ValueError):
        build_base_code(0, Fraction(1, 2))
    with pytest.raises(ValueError):
        build_base_code(13, Fraction(1, 2))
    with pytest.raises(ValueError):
        build_base_code(4, Fraction(3, 2))


def test_build_is_deterministic():
    a = build_base_code(3, Fraction(1, 4), use_cache=False)
    b = build_base_code(3, Fraction(1, 4), use_cache=False)
    assert a.n0 == b.n0
    assert np.array_equal(a.codebook, b.codebook)


# --- min_distance ----------------------------------------------------------

def test_min_distance_repetition():
    assert min_distance(handle(["000", "111"])) == 3


def test_min_distance_degenerate():
    assert min_distance(handle(["0101"])) is None


# --- list decoding for errors ---------------------------------------------

def test_zero_radius_identity():
    c = build_base_code(3, Fraction(1, 4))
    for x in range(8):
        assert list_decode_errors(c, c.encode(x), 0) == [x]


def test_midpoint_two_codewords():
    c = build_base_code(3, Fraction(1, 4))
    a, b = c.codebook[2], c.codebook[5]
    diff = np.nonzero(a != b)[0]
    d = diff.size
    mid = a.copy()
    mid[diff[: d // 2]] = b[diff[: d // 2]]
    got = list_decode_errors(c, TriBitString(mid), (d + 1) // 2)
    assert 2 in got and 5 in got


def test_radius_precondition():
    c = build_base_code(2, Fraction(1, 2))
    too_big = frac_floor(c.full_radius) + 1
    with pytest.raises(ValueError):
        list_decode_errors(c, c.encode(0), too_big)
    with pytest.raises(LengthMismatch):
        list_decode_errors(c, TriBitString.zeros(c.n0 + 1), 0)


def test_brute_force_equivalence_random_centers():
    rng = np.random.default_rng(11)
    for k, eps in [(3, Fraction(1, 2)), (5, Fraction(1, 4)), (6, Fraction(1, 5))]:
        c = build_base_code(k, eps)
        rmax = frac_floor(c.full_radius)
        for _ in range(200):
            m = rng.integers(0, 2, size=c.n0, dtype=np.uint8)
            r = int(rng.integers(0, rmax + 1))
            assert list_decode_errors(c, TriBitString(m), r) == brute_list(c, m, r)


def test_list_size_bound_holds():
    c = build_base_code(5, Fraction(1, 4))
    rng = np.random.default_rng(5)
    rmax = frac_floor(c.full_radius)
    for _ in range(300):
        m = rng.integers(0, 2, size=c.n0, dtype=np.uint8)
        assert len(list_decode_errors(c, TriBitString(m), rmax)) <= c.L_eps


# --- list decoding for erasures ---------------------------------------------

def test_erasure_zero():
    c = build_base_code(4, Fraction(1, 4))
    assert list_decode_erasures(c, c.encode(9)) == [9]


def test_erasure_heavy_contains_message():
    # erase all but ceil(eps * n0) positions of a codeword
    c = build_base_code(4, Fraction(1, 4))
    keep = frac_ceil(c.eps * c.n0)
    rng = np.random.default_rng(2)
    for x in [0, 7, 15]:
        sym = c.codebook[x].copy()
        erased = rng.permutation(c.n0)[: c.n0 - keep]
        sym[erased] = 2
        assert x in list_decode_erasures(c, TriBitString(sym))


def test_erasure_total_rejected():
    c = build_base_code(2, Fraction(1, 2))
    with pytest.raises(TooManyErasures):
        list_decode_erasures(c, TriBitString([2] * c.n0))


# --- repeat / complement ----------------------------------------------------

def test_repeat_tiny():
    c = handle(["00", "11"])
    r = repeat_code(c, 2)
    assert [row_int(w) for w in r.codebook] == [0b0000, 0b1111]
    assert min_distance(r) == 2 * min_distance(c)


def test_repeat_distance_scales():
    c = build_base_code(4, Fraction(1, 4))
    assert min_distance(repeat_code(c, 3)) == 3 * min_distance(c)
    with pytest.raises(ValueError):
        repeat_code(c, 4)


def test_repeat_union_decode_equals_scan():
    c = build_base_code(4, Fraction(1, 4))
    r2 = repeat_code(c, 2)
    rng = np.random.default_rng(9)
    radius = frac_floor((Fraction(1, 2) - 2 * c.eps) * r2.n0)
    for _ in range(100):
        m = rng.integers(0, 2, size=r2.n0, dtype=np.uint8)
        direct = list_decode_errors(r2, TriBitString(m), radius)
        union = blockwise_decode_union(c, 2, TriBitString(m), radius)
        assert direct == union


def test_complement_tiny():
    c = handle(["01"], eps=Fraction(1, 2))
    e = complement_extend(c)
    assert row_int(e.codebook[0]) == 0b0110


def test_complement_constant_distance_exact():
    c = build_base_code(4, Fraction(1, 4))
    e = complement_extend(c)
    wt = e.codebook.sum(axis=1)
    assert np.all(wt == c.n0)          # distance to all-zeros is exactly n0
    assert np.all(e.n0 - wt == c.n0)   # and to all-ones


def test_complement_pairwise_doubles():
    c = build_base_code(3, Fraction(1, 4))
    assert min_distance(complement_extend(c)) == 2 * min_distance(c)


# --- two-tier code ----------------------------------------------------------

def tiered(core, xs, f):
    s = partition_descriptor(xs, k=core.k)
    return make_tiered_code(core, s, f)


def test_tier_encode_cases():
    core = build_base_code(4, Fraction(1, 5))
    xs = [3, 9, 12]
    t = tiered(core, xs, (1, 2, 3))
    n0 = core.n0
    # class 1 carries the doubled core codeword behind a zero header
    enc1 = t.encode(3).bits()
    assert np.all(enc1[:n0] == 0)
    assert np.array_equal(enc1[n0:], np.tile(core.codebook[3], 2))
    # classes 2 and 3 are the fixed words from the case table
    enc2 = t.encode(9).bits()
    assert np.all(enc2[:n0] == 1) and np.all(enc2[n0:] == 0)
    enc3 = t.encode(12).bits()
    assert np.all(enc3 == 1)


def test_tier_cross_class_distance():
    core = build_base_code(4, Fraction(1, 5))
    xs = [1, 2, 4, 8]
    t = tiered(core, xs, (1, 2, 3, 1))
    bound = (Fraction(2, 3) - core.eps) * t.M
    for x in xs:
        for y in xs:
            if t.class_of(x) != t.class_of(y):
                assert Fraction(hamming(t.encode(x), t.encode(y))) >= bound


def test_tier_decode_roundtrip_and_far_words():
    # the decode radius (1/3 - 2 eps) M is positive only for eps < 1/6
    core = build_base_code(4, Fraction(1, 10))
    xs = [5, 10, 0]
    t = tiered(core, xs, (1, 2, 3))
    assert 5 in t.list_decode(t.encode(5))
    # the class-2 word is far from every class-1 codeword
    assert t.list_decode(TriBitString(t.class_word(2))) == []
    with pytest.raises(LengthMismatch):
        t.list_decode(TriBitString.zeros(t.M + 3))


def test_tier_definition_properties_random():
    """Properties (c)-(f): equal within classes 2/3, >= (1/3-eps)M within
    class 1, >= (2/3-eps)M across classes, lists bounded."""
    rng = np.random.default_rng(4)
    core = build_base_code(5, Fraction(1, 4))
    M = 3 * core.n0
    for _ in range(8):
        size = int(rng.integers(2, 6))
        xs = [int(v) for v in rng.choice(1 << 5, size=size, replace=False)]
        f = tuple(int(v) for v in rng.integers(1, 4, size=size))
        t = tiered(core, xs, f)
        enc = [t.encode(x) for x in range(1 << 5)]
        cls = [t.class_of(x) for x in range(1 << 5)]
        for x in range(1 << 5):
            for y in range(x + 1, 1 << 5):
                dxy = hamming(enc[x], enc[y])
                if cls[x] == cls[y] and cls[x] in (2, 3):
                    assert dxy == 0
                elif cls[x] == cls[y] == 1:
                    assert Fraction(dxy) >= (Fraction(1, 3) - core.eps) * M
                elif cls[x] != cls[y]:
                    assert Fraction(dxy) >= (Fraction(2, 3) - core.eps) * M
        for _ in range(20):
            m = TriBitString(rng.integers(0, 2, size=M, dtype=np.uint8))
            assert len(t.list_decode(m)) <= t.base.L_eps


# --- serialization ----------------------------------------------------------

def test_codebook_roundtrip(tmp_path):
    c = build_base_code(4, Fraction(1, 4))
    p = tmp_path / "code.txt"
    save_codebook(c, p)
    back = load_codebook(p)
    assert back.k == c.k and back.n0 == c.n0 and back.eps == c.eps
    assert np.array_equal(back.codebook, c.codebook)

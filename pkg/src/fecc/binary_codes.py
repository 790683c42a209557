"""Binary codes with explicit distance and list-decoding guarantees.

Codes are desk scale: every codeword is materialized, decoding is an
exhaustive scan, and distance claims are verified rather than assumed.
A base code keeps all codewords far apart and far from the two constant
words; repeating and complement-extending preserve the guarantees at
longer block lengths.  The two-tier code collapses two partition classes
onto fixed words while keeping the first class fully separated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .bits import TriBitString, bits_to_hex, hex_to_bits
from .partitions import PartitionDescriptor, decode_descriptor, partition_index

__all__ = [
    "CodeHandle",
    "TieredCode",
    "ConstructionFailed",
    "LengthMismatch",
    "TooManyErasures",
    "build_base_code",
    "min_distance",
    "list_decode_errors",
    "list_decode_erasures",
    "repeat_code",
    "complement_extend",
    "save_codebook",
    "load_codebook",
    "measure_list_bound",
    "measure_erasure_bound",
]


class ConstructionFailed(RuntimeError):
    """No code with the required distance was found within the search budget."""


class LengthMismatch(ValueError):
    pass


class TooManyErasures(ValueError):
    pass


def as_fraction(eps) -> Fraction:
    if isinstance(eps, Fraction):
        return eps
    if isinstance(eps, int):
        return Fraction(eps)
    if isinstance(eps, float):
        return Fraction(str(eps))
    return Fraction(eps)


def frac_floor(fr: Fraction) -> int:
    return fr.numerator // fr.denominator


def frac_ceil(fr: Fraction) -> int:
    return -((-fr.numerator) // fr.denominator)


@dataclass(eq=False)
class CodeHandle:
    """A finite binary code plus its measured list-size bound.

    codebook row i is the codeword of message i.  The list bound is
    measured lazily: the maximum list size seen over a structured sweep of
    decoding centers at the full radius (1-eps)/2 * n0, and of erasure
    patterns at the erasure limit.  The sweep is deterministic.
    """

    k: int
    n0: int
    eps: Fraction
    codebook: np.ndarray
    _list_bound: int | None = field(default=None, repr=False)

    def __post_init__(self):
        self.eps = as_fraction(self.eps)
        if self.codebook.shape != (1 << self.k, self.n0):
            raise ValueError("codebook shape does not match (2^k, n0)")
        self.codebook = np.ascontiguousarray(self.codebook, dtype=np.uint8)
        self.codebook.flags.writeable = False

    @property
    def distance_floor(self) -> int:
        """ceil(((1-eps)/2) * n0), the designed minimum distance."""
        return frac_ceil((1 - self.eps) / 2 * self.n0)

    @property
    def full_radius(self) -> Fraction:
        return (1 - self.eps) / 2 * self.n0

    @property
    def L_eps(self) -> int:
        if self._list_bound is None:
            err = measure_list_bound(self, frac_floor(self.full_radius))
            ers = measure_erasure_bound(self, frac_floor((1 - self.eps) * self.n0))
            self._list_bound = max(err, ers)
        return self._list_bound

    def encode(self, x: int) -> TriBitString:
        if not 0 <= x < (1 << self.k):
            raise ValueError(f"message {x} outside [0, 2^{self.k})")
        return TriBitString(self.codebook[x])

    def distances_to(self, bits: np.ndarray) -> np.ndarray:
        """Hamming distance from every codeword to the given binary string."""
        if bits.size != self.n0:
            raise LengthMismatch(f"expected {self.n0} bits, got {bits.size}")
        return np.count_nonzero(self.codebook != bits, axis=1)


def min_distance(code: CodeHandle) -> int | None:
    """Exact minimum pairwise distance by all-pairs scan; None for < 2 words."""
    cb = code.codebook.astype(np.int32)
    n = cb.shape[0]
    if n < 2:
        return None
    wt = cb.sum(axis=1)
    gram = cb @ cb.T
    d = wt[:, None] + wt[None, :] - 2 * gram
    iu = np.triu_indices(n, k=1)
    return int(d[iu].min())


def _constant_distances(code: CodeHandle) -> tuple[np.ndarray, np.ndarray]:
    wt = code.codebook.sum(axis=1, dtype=np.int64)
    return wt, code.n0 - wt


def list_decode_errors(code: CodeHandle, received: TriBitString, radius) -> list[int]:
    """All messages whose codeword lies within `radius` of `received`.

    Exhaustive scan, ascending message order.  The radius may be an int or
    an exact Fraction; it must not exceed the design radius (1-eps)/2 * n0.
    """
    if len(received) != code.n0:
        raise LengthMismatch(f"expected length {code.n0}, got {len(received)}")
    if not received.is_binary():
        raise ValueError("error decoding does not accept erasures")
    radius = radius if isinstance(radius, (int, Fraction)) else Fraction(radius)
    if Fraction(radius) > code.full_radius:
        raise ValueError(
            f"radius {radius} exceeds list-decoding radius {code.full_radius}"
        )
    limit = frac_floor(Fraction(radius))
    dists = code.distances_to(received.bits())
    out = np.nonzero(dists <= limit)[0].tolist()
    assert len(out) <= code.L_eps, "list size exceeded the measured bound"
    return out


def list_decode_erasures(code: CodeHandle, received: TriBitString) -> list[int]:
    """All messages consistent with every unerased position of `received`."""
    if len(received) != code.n0:
        raise LengthMismatch(f"expected length {code.n0}, got {len(received)}")
    erased = received.erasure_count()
    if Fraction(erased, code.n0) > 1 - code.eps:
        raise TooManyErasures(f"{erased}/{code.n0} erased exceeds 1 - eps")
    keep = ~received.erased_mask()
    sym = received.symbols
    match = np.all(code.codebook[:, keep] == sym[keep], axis=1)
    out = np.nonzero(match)[0].tolist()
    assert len(out) <= code.L_eps, "erasure list exceeded the measured bound"
    return out


def repeat_code(code: CodeHandle, times: int) -> CodeHandle:
    """Concatenate each codeword with itself; times must be 2 or 3."""
    if times not in (2, 3):
        raise ValueError("repeat count must be 2 or 3")
    cb = np.tile(code.codebook, (1, times))
    return CodeHandle(k=code.k, n0=code.n0 * times, eps=code.eps, codebook=cb)


def complement_extend(code: CodeHandle) -> CodeHandle:
    """Map each codeword c to c || ~c, pinning distance n0 to both constants."""
    cb = np.concatenate([code.codebook, 1 - code.codebook], axis=1)
    return CodeHandle(k=code.k, n0=2 * code.n0, eps=code.eps, codebook=cb)


def blockwise_decode_union(
    core: CodeHandle, times: int, received: TriBitString, radius
) -> list[int]:
    """Decode a repeated code by per-block decoding and union, then exact filter.

    Equivalent to the exhaustive scan of the repeated code whenever
    radius <= times * full core radius; used as the second decoding route.
    """
    n0 = core.n0
    if len(received) != times * n0:
        raise LengthMismatch("received length is not times * n0")
    block_radius = frac_floor(core.full_radius)
    cand: set[int] = set()
    for b in range(times):
        cand.update(list_decode_errors(core, received[b * n0 : (b + 1) * n0], block_radius))
    limit = frac_floor(Fraction(radius))
    bits = received.bits()
    out = []
    for x in sorted(cand):
        total = sum(
            int(np.count_nonzero(core.codebook[x] != bits[b * n0 : (b + 1) * n0]))
            for b in range(times)
        )
        if total <= limit:
            out.append(x)
    return out


# ---------------------------------------------------------------------------
# construction


def _log2_ball(n: int, r: int) -> float:
    """log2 of the Hamming ball volume V(n, r), computed in floats."""
    if r <= 0:
        return 0.0
    acc = float("-inf")
    term = 0.0  # log2 C(n, 0)
    for i in range(0, r + 1):
        acc = np.logaddexp2(acc, term)
        term += math.log2(n - i) - math.log2(i + 1)
    return float(acc)


def _design_distance(eps: Fraction, n0: int) -> int:
    return frac_ceil((1 - eps) / 2 * n0)


def _plotkin_infeasible(words: int, n0: int, d: int) -> bool:
    """True when the Plotkin bound already rules out `words` codewords."""
    if 2 * d > n0:
        return words > 2 * (d // (2 * d - n0))
    if 2 * d == n0:
        return words > 2 * n0
    return False


def _counting_start(k: int, eps: Fraction, floor_n0: int, cap: int) -> int | None:
    """Smallest block length where greedy random search has headroom.

    Estimated analytically from the entropy form of the ball volume, then
    refined with exact ball sums.  None when no length up to `cap` fits.
    """
    words = (1 << k) + 2
    rel = float((1 - eps) / 2)
    h = -(rel * math.log2(rel) + (1 - rel) * math.log2(1 - rel)) if 0 < rel < 1 else 1.0
    if h >= 1.0:
        return None
    est = int((math.log2(words) + 2) / (1.0 - h))
    n0 = max(floor_n0, 3 * (int(est * 0.85) // 3))
    steps = 0
    while n0 <= cap and steps < 4000:
        d = _design_distance(eps, n0)
        if d <= n0 and not _plotkin_infeasible(words, n0, d):
            if math.log2(words) + _log2_ball(n0, d - 1) <= n0 - 2:
                return n0
        n0 += 3
        steps += 1
    return None


def _greedy_search(k: int, eps: Fraction, n0: int, seed: int) -> np.ndarray | None:
    """One randomized greedy fill at fixed n0; None when the search stalls."""
    need = 1 << k
    d = _design_distance(eps, n0)
    if d > n0 or _plotkin_infeasible(need + 2, n0, d):
        return None
    rng = np.random.default_rng(seed)
    stall_limit = 200 + 2 * need
    budget = 64 * need + 2048
    for restart in range(3):
        rows = np.empty((need + 2, n0), dtype=np.uint8)
        rows[0] = 0
        rows[1] = 1
        count = 2
        rejects = 0
        used = 0
        while count < need + 2 and used < budget and rejects < stall_limit:
            batch = rng.integers(0, 2, size=(64, n0), dtype=np.uint8)
            for cand in batch:
                used += 1
                dmin = np.count_nonzero(rows[:count] != cand, axis=1).min()
                if dmin >= d:
                    rows[count] = cand
                    count += 1
                    rejects = 0
                    if count == need + 2:
                        break
                else:
                    rejects += 1
                if rejects >= stall_limit or used >= budget:
                    break
        if count == need + 2:
            return rows[2:]
    return None


def _verify_base(codebook: np.ndarray, n0: int, d: int) -> bool:
    """Exhaustive all-pairs and constant-word distance check."""
    cb = codebook.astype(np.int32)
    wt = cb.sum(axis=1)
    if wt.min() < d or (n0 - wt).min() < d:
        return False
    if cb.shape[0] < 2:
        return True
    gram = cb @ cb.T
    dist = wt[:, None] + wt[None, :] - 2 * gram
    np.fill_diagonal(dist, n0)
    return int(dist.min()) >= d


_BUILD_CACHE: dict[tuple[int, Fraction], CodeHandle] = {}


def build_base_code(
    k: int, eps, max_n0: int | None = None, use_cache: bool = True
) -> CodeHandle:
    """Randomized greedy code with verified distance >= ceil((1-eps)/2 * n0).

    Every codeword is also at least that far from the all-zeros and all-ones
    words.  The block length n0 is a multiple of 3, found by scanning up from
    a counting-bound start and then stepping back down while the seeded
    search still succeeds; seeds are derived from (k, eps, n0), so builds
    are reproducible.
    """
    eps = as_fraction(eps)
    if not 1 <= k <= 12:
        raise ValueError("k must be between 1 and 12 at desk scale")
    if not 0 < eps < 1:
        raise ValueError("eps must lie strictly between 0 and 1")
    key = (k, eps)
    if use_cache and max_n0 is None and key in _BUILD_CACHE:
        return _BUILD_CACHE[key]

    floor_n0 = 3 * max(frac_ceil(Fraction(2, 1) / eps / 3), 1)
    cap = max_n0 if max_n0 is not None else 100_000
    start = _counting_start(k, eps, floor_n0, cap)
    limit = max_n0 if max_n0 is not None else (4 * start + 96 if start else 0)
    if start is None or start > limit:
        start = floor_n0

    def seed_for(n0: int) -> int:
        return (k * 2_000_003 + eps.numerator * 90_001 + eps.denominator * 613 + n0) & 0x7FFFFFFF

    found: tuple[int, np.ndarray] | None = None
    n0 = start
    while n0 <= limit:
        cb = _greedy_search(k, eps, n0, seed_for(n0))
        if cb is not None:
            found = (n0, cb)
            break
        n0 += 3
    if found is None:
        raise ConstructionFailed(
            f"no (k={k}, eps={eps}) code with the required distance up to n0={limit}"
        )
    # step back down while the search still succeeds
    n0, cb = found
    while n0 - 3 >= floor_n0:
        lower = _greedy_search(k, eps, n0 - 3, seed_for(n0 - 3))
        if lower is None:
            break
        n0, cb = n0 - 3, lower
    d = _design_distance(eps, n0)
    assert _verify_base(cb, n0, d), "constructed code failed exhaustive verification"
    handle = CodeHandle(k=k, n0=n0, eps=eps, codebook=cb)
    if use_cache and max_n0 is None:
        _BUILD_CACHE[key] = handle
    return handle


# ---------------------------------------------------------------------------
# list-bound measurement


def _list_sizes(code: CodeHandle, centers: np.ndarray, limit: int) -> np.ndarray:
    """Number of codewords within `limit` of each center row."""
    cb = code.codebook.astype(np.float32)
    wt = cb.sum(axis=1)
    cf = centers.astype(np.float32)
    cross = cb @ cf.T
    d = wt[:, None] + cf.sum(axis=1)[None, :] - 2 * cross
    return (d <= limit + 0.5).sum(axis=0)


def _hill_climb(code: CodeHandle, center: np.ndarray, limit: int, rng) -> int:
    cb = code.codebook
    m = center.copy()
    d = np.count_nonzero(cb != m, axis=1)
    best = int(np.count_nonzero(d <= limit))
    order = np.arange(code.n0)
    for _ in range(2):
        rng.shuffle(order)
        for j in order:
            delta = np.where(cb[:, j] == m[j], 1, -1)
            nd = d + delta
            score = int(np.count_nonzero(nd <= limit))
            near = int(np.count_nonzero(nd <= limit + 2))
            cur_near = int(np.count_nonzero(d <= limit + 2))
            cur = int(np.count_nonzero(d <= limit))
            if (score, near) >= (cur, cur_near):
                m[j] ^= 1
                d = nd
        best = max(best, int(np.count_nonzero(d <= limit)))
    return best


def measure_list_bound(code: CodeHandle, limit: int, samples: int = 3000) -> int:
    """Max list size at integer radius `limit` over a deterministic sweep.

    Exhaustive over all centers when that is feasible; otherwise codewords,
    pairwise splices, majority words of random subsets, random centers, and
    greedy hill climbs from the best candidates.
    """
    n = code.n0
    ncode = code.codebook.shape[0]
    if n <= 16 and (1 << n) <= (1 << 20):
        best = 0
        cb_ints = [int("".join(map(str, row)), 2) for row in code.codebook]
        for m in range(1 << n):
            c = sum(1 for ci in cb_ints if bin(ci ^ m).count("1") <= limit)
            best = max(best, c)
        return max(best, 1)

    rng = np.random.default_rng(0xC0DE ^ (code.k << 16) ^ n)
    centers = [code.codebook]
    # pairwise splices: first half of one word, second half of another
    npairs = min(ncode * (ncode - 1) // 2, samples)
    pi = rng.integers(0, ncode, size=npairs)
    pj = rng.integers(0, ncode, size=npairs)
    half = n // 2
    splice = np.concatenate(
        [code.codebook[pi, :half], code.codebook[pj, half:]], axis=1
    )
    centers.append(splice)
    # majority words of random subsets
    for size in (3, 5, 9, 17, 33):
        if size > ncode:
            break
        cnt = min(samples // 3, 800)
        idx = np.stack([rng.permutation(ncode)[:size] for _ in range(cnt)])
        maj = (code.codebook[idx].sum(axis=1) * 2 > size).astype(np.uint8)
        centers.append(maj)
    centers.append(rng.integers(0, 2, size=(512, n), dtype=np.uint8))
    allc = np.concatenate(centers, axis=0)
    sizes = _list_sizes(code, allc, limit)
    best = int(sizes.max(initial=1))
    top = np.argsort(sizes)[-4:]
    for t in top:
        best = max(best, _hill_climb(code, allc[t].astype(np.uint8), limit, rng))
    return max(best, 1)


def measure_erasure_bound(code: CodeHandle, max_erased: int, samples: int = 1500) -> int:
    """Max consistency-set size over erasure patterns of weight <= max_erased."""
    n = code.n0
    ncode = code.codebook.shape[0]
    keep_min = n - max_erased
    if keep_min <= 0:
        return ncode
    rng = np.random.default_rng(0xE0A5 ^ (code.k << 16) ^ n)
    best = 1
    npairs = ncode * (ncode - 1) // 2
    if npairs <= samples:
        pairs = [(i, j) for i in range(ncode) for j in range(i + 1, ncode)]
    else:
        pairs = [
            tuple(sorted(rng.permutation(ncode)[:2])) for _ in range(samples)
        ]
    cb = code.codebook
    for i, j in pairs:
        agree = cb[i] == cb[j]
        if int(agree.sum()) < keep_min:
            continue
        group = np.all(cb[:, agree] == cb[i][agree], axis=1)
        # greedily absorb more words while the common agreement set stays large
        while True:
            grew = False
            cand_sizes = (cb == cb[i]).astype(np.int32) @ agree.astype(np.int32)
            order = np.argsort(-cand_sizes)
            for w in order[:16]:
                if group[w]:
                    continue
                new_agree = agree & (cb[w] == cb[i])
                if int(new_agree.sum()) >= keep_min:
                    agree = new_agree
                    group = np.all(cb[:, agree] == cb[i][agree], axis=1)
                    grew = True
                    break
            if not grew:
                break
        best = max(best, int(group.sum()))
    # random erasure patterns
    for _ in range(min(samples, 300)):
        erased = rng.permutation(n)[: rng.integers(0, max_erased + 1)]
        keep = np.ones(n, dtype=bool)
        keep[erased] = False
        ref = cb[int(rng.integers(0, ncode))]
        best = max(best, int(np.all(cb[:, keep] == ref[keep], axis=1).sum()))
    return best


# ---------------------------------------------------------------------------
# two-tier code


@dataclass(frozen=True)
class TieredCode:
    """Partition-aware code: class 1 carries the base codeword, classes 2
    and 3 collapse to fixed far-apart words.

    s is the wire-form partition descriptor over {0,1}^k; f maps each
    partition set (1-based) to a class in {1, 2, 3}.  The block length is
    M = 3 * N0 with the base code occupying the last 2 * N0 bits.
    """

    s: tuple[int, ...]
    f: tuple[int, ...]
    base: CodeHandle
    M: int

    def __post_init__(self):
        if self.M % 3 != 0 or self.base.n0 != 2 * (self.M // 3):
            raise ValueError("M must be 3*N0 with a base code of length 2*N0")
        if any(c not in (1, 2, 3) for c in self.f):
            raise ValueError("f must map into {1,2,3}")

    @property
    def n_zero(self) -> int:
        return self.M // 3

    @property
    def k(self) -> int:
        return self.base.k

    def class_of(self, x: int) -> int:
        idx = partition_index(np.array(self.s, dtype=np.uint8), x, self.k)
        if idx > len(self.f):
            idx = 1
        return self.f[idx - 1]

    def class_word(self, cls: int) -> np.ndarray:
        n0 = self.n_zero
        if cls == 2:
            return np.concatenate([np.ones(n0, np.uint8), np.zeros(2 * n0, np.uint8)])
        if cls == 3:
            return np.ones(3 * n0, dtype=np.uint8)
        raise ValueError("only classes 2 and 3 have fixed words")

    def encode(self, x: int) -> TriBitString:
        cls = self.class_of(x)
        if cls == 1:
            head = np.zeros(self.n_zero, dtype=np.uint8)
            return TriBitString(np.concatenate([head, self.base.codebook[x]]))
        return TriBitString(self.class_word(cls))

    def list_decode(self, m: TriBitString) -> list[int]:
        """All class-1 messages within (1/3 - 2 eps) * M of m, ascending."""
        if len(m) != self.M:
            raise LengthMismatch(f"expected length {self.M}, got {len(m)}")
        eps = self.base.eps
        inner_radius = (Fraction(1, 2) - 2 * eps) * self.base.n0
        inner = list_decode_errors(self.base, m[self.n_zero :], inner_radius)
        outer_limit = frac_floor((Fraction(1, 3) - 2 * eps) * self.M)
        bits = m.bits()
        out = []
        for x in inner:
            if self.class_of(x) != 1:
                continue
            full = self.encode(x).bits()
            if int(np.count_nonzero(full != bits)) <= outer_limit:
                out.append(x)
        assert len(out) <= self.base.L_eps
        return out


def make_tiered_code(core: CodeHandle, s, f: Sequence[int]) -> TieredCode:
    """Tiered code from a core length-N0 code: base is the doubled core."""
    s_arr = s.encode() if isinstance(s, PartitionDescriptor) else np.asarray(s, np.uint8)
    return TieredCode(
        s=tuple(int(v) for v in s_arr),
        f=tuple(int(v) for v in f),
        base=repeat_code(core, 2),
        M=3 * core.n0,
    )


# ---------------------------------------------------------------------------
# serialization


def save_codebook(code: CodeHandle, path) -> None:
    """Line format: `k n0 eps_num eps_den`, then `x_hex codeword_hex` rows."""
    with open(path, "w") as fh:
        fh.write(f"{code.k} {code.n0} {code.eps.numerator} {code.eps.denominator}\n")
        for x in range(1 << code.k):
            xh = bits_to_hex(np.array([(x >> (code.k - 1 - i)) & 1 for i in range(code.k)], dtype=np.uint8))
            fh.write(f"{xh} {bits_to_hex(code.codebook[x])}\n")


def load_codebook(path) -> CodeHandle:
    with open(path) as fh:
        header = fh.readline().split()
        k, n0, num, den = (int(v) for v in header)
        rows = np.zeros((1 << k, n0), dtype=np.uint8)
        seen = 0
        for line in fh:
            if not line.strip():
                continue
            xh, ch = line.split()
            xbits = hex_to_bits(xh, k)
            x = int("".join(map(str, xbits)), 2)
            rows[x] = hex_to_bits(ch, n0)
            seen += 1
        if seen != (1 << k):
            raise ValueError(f"expected {1 << k} codewords, found {seen}")
    return CodeHandle(k=k, n0=n0, eps=Fraction(num, den), codebook=rows)

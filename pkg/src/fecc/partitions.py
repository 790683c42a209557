"""Short descriptors of partitions of {0,1}^k that separate a given list.

A descriptor names |X| index positions plus the restriction of each listed
string to those positions.  Any k-bit string is assigned to the set whose
stored restriction it matches (set 1 if none).  The wire form is bit-exact:
indices first, each in ceil(log2 k) bits, then evaluation rows, row-major.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bits import bit_of, bits_to_int, int_to_bits


class TooManyStrings(ValueError):
    """More strings than index positions available."""


def index_width(k: int) -> int:
    """Bits per index field for positions in [k]."""
    if k < 1:
        raise ValueError("k must be positive")
    return math.ceil(math.log2(k)) if k > 1 else 0


def encoded_length(n_strings: int, k: int) -> int:
    return n_strings * index_width(k) + n_strings * n_strings


def distinguishing_indices(strings: Sequence[int], k: int) -> list[int]:
    """Positions (1-based) on which the given k-bit strings are pairwise distinct.

    Inductive construction: having separated the first j-1 strings, the j-th
    can collide with at most one of them; extend by the first position where
    that unique colliding pair differs, otherwise by the first unused position.
    """
    L = len(strings)
    if L > k:
        raise TooManyStrings(f"{L} strings but only {k} positions")
    if len(set(strings)) != L:
        raise ValueError("strings must be pairwise distinct")
    indices: list[int] = []
    for j in range(L):
        if j == 0:
            indices.append(1)
            continue
        xj = strings[j]
        restr_j = tuple(bit_of(xj, k, i) for i in indices)
        collider = None
        for prev in range(j):
            if tuple(bit_of(strings[prev], k, i) for i in indices) == restr_j:
                collider = strings[prev]
                break
        if collider is not None:
            for pos in range(1, k + 1):
                if bit_of(collider, k, pos) != bit_of(xj, k, pos):
                    indices.append(pos)
                    break
        else:
            for pos in range(1, k + 1):
                if pos not in indices:
                    indices.append(pos)
                    break
    restrictions = [
        tuple(bit_of(x, k, i) for i in indices) for x in strings
    ]
    assert len(set(restrictions)) == L, "restrictions not pairwise distinct"
    return indices


@dataclass(frozen=True)
class PartitionDescriptor:
    """Index list plus evaluation rows; `width` is the declared set count."""

    k: int
    index_list: tuple[int, ...]      # 1-based positions, padded with 1s
    evaluations: tuple[tuple[int, ...], ...]  # width rows of width bits

    @property
    def width(self) -> int:
        return len(self.evaluations)

    def encode(self) -> np.ndarray:
        w = index_width(self.k)
        parts = []
        for pos in self.index_list:
            parts.append(int_to_bits(pos - 1, w))
        for row in self.evaluations:
            parts.append(np.array(row, dtype=np.uint8))
        if not parts:
            return np.zeros(0, dtype=np.uint8)
        out = np.concatenate(parts)
        assert out.size == encoded_length(self.width, self.k)
        return out


def partition_descriptor(
    strings: Sequence[int], k: int, width: int | None = None
) -> PartitionDescriptor:
    """Descriptor separating the given strings; set i holds strings[i-1].

    `width` pads the descriptor to a larger declared set count; padding rows
    are all-zero and padding index fields point at position 1.
    """
    L = len(strings)
    width = L if width is None else width
    if width < L:
        raise ValueError("declared width smaller than the string count")
    if width > k:
        raise TooManyStrings(f"width {width} exceeds k={k}")
    indices = distinguishing_indices(strings, k)
    indices = indices + [1] * (width - L)
    rows = [tuple(bit_of(x, k, i) for i in indices) for x in strings]
    rows += [(0,) * width] * (width - L)
    return PartitionDescriptor(k=k, index_list=tuple(indices), evaluations=tuple(rows))


def decode_descriptor(s: np.ndarray | Sequence[int], k: int) -> PartitionDescriptor | None:
    """Parse a wire-form descriptor; None when the bit string is malformed."""
    arr = np.asarray(s, dtype=np.uint8)
    w = index_width(k)
    width = None
    d = 1
    while d * w + d * d <= arr.size:
        if d * w + d * d == arr.size:
            width = d
            break
        d += 1
    if width is None or arr.size == 0:
        return None
    indices = []
    for j in range(width):
        if w == 0:
            pos = 1
        else:
            pos = bits_to_int(arr[j * w : (j + 1) * w]) + 1
        if pos > k:
            return None
        indices.append(pos)
    base = width * w
    rows = []
    for i in range(width):
        rows.append(tuple(int(v) for v in arr[base + i * width : base + (i + 1) * width]))
    return PartitionDescriptor(k=k, index_list=tuple(indices), evaluations=tuple(rows))


def partition_index(s, x: int, k: int) -> int:
    """Set index of x under descriptor s; 1 on no match or malformed s.

    Total on arbitrary bit strings: never raises.  Accepts a
    PartitionDescriptor or its wire encoding.  Duplicate evaluation rows
    (all-zero padding) never shadow an earlier row: the first match wins.
    """
    if isinstance(s, PartitionDescriptor):
        desc = s
    else:
        desc = decode_descriptor(s, k)
    if desc is None or desc.k != k:
        return 1
    restr = tuple(bit_of(x, k, pos) for pos in desc.index_list)
    for i, row in enumerate(desc.evaluations):
        if row == restr:
            return i + 1
    return 1


def partition_index_all(desc: PartitionDescriptor, k: int) -> np.ndarray:
    """Vector of set indices for every x in {0,1}^k (small k only)."""
    n = 1 << k
    xs = np.arange(n, dtype=np.int64)
    cols = np.stack(
        [(xs >> (k - pos)) & 1 for pos in desc.index_list], axis=1
    ).astype(np.uint8)
    evals = np.array(desc.evaluations, dtype=np.uint8)
    out = np.ones(n, dtype=np.int64)
    unassigned = np.ones(n, dtype=bool)
    for i in range(evals.shape[0]):
        match = unassigned & np.all(cols == evals[i], axis=1)
        out[match] = i + 1
        unassigned &= ~match
    return out

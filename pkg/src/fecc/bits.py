"""Tri-valued bit strings: the unit of all channel traffic.

A symbol is 0, 1, or erased.  Erased symbols only ever appear on the
receiving side of an erasure channel; everything a sender emits is binary.
"""

from __future__ import annotations

from typing import Iterable, Iterator

import numpy as np

ZERO = 0
ONE = 1
ERASED = 2

_CHARS = {0: "0", 1: "1", 2: "?"}
_VALS = {"0": 0, "1": 1, "?": 2}


class TriBitString:
    """Immutable sequence of symbols over {0, 1, erased}."""

    __slots__ = ("_sym",)

    def __init__(self, symbols: Iterable[int] | np.ndarray):
        arr = np.asarray(symbols, dtype=np.uint8)
        if arr.ndim != 1:
            raise ValueError("symbols must be one-dimensional")
        if arr.size and arr.max(initial=0) > 2:
            raise ValueError("symbols must be 0, 1 or 2 (erased)")
        arr = arr.copy()
        arr.flags.writeable = False
        self._sym = arr

    @classmethod
    def from_bits(cls, bits: Iterable[int] | np.ndarray) -> "TriBitString":
        s = cls(bits)
        if s.erasure_count():
            raise ValueError("bit string may not contain erasures")
        return s

    @classmethod
    def from_str(cls, text: str) -> "TriBitString":
        return cls([_VALS[c] for c in text])

    @classmethod
    def zeros(cls, n: int) -> "TriBitString":
        return cls(np.zeros(n, dtype=np.uint8))

    @classmethod
    def ones(cls, n: int) -> "TriBitString":
        return cls(np.ones(n, dtype=np.uint8))

    @property
    def symbols(self) -> np.ndarray:
        return self._sym

    def __len__(self) -> int:
        return int(self._sym.size)

    def __iter__(self) -> Iterator[int]:
        return iter(int(v) for v in self._sym)

    def __getitem__(self, idx):
        if isinstance(idx, slice):
            return TriBitString(self._sym[idx])
        return int(self._sym[idx])

    def __add__(self, other: "TriBitString") -> "TriBitString":
        return TriBitString(np.concatenate([self._sym, other._sym]))

    def __eq__(self, other) -> bool:
        if not isinstance(other, TriBitString):
            return NotImplemented
        return self._sym.shape == other._sym.shape and bool(
            np.all(self._sym == other._sym)
        )

    def __hash__(self) -> int:
        return hash(self._sym.tobytes())

    def __repr__(self) -> str:
        s = self.to_str()
        if len(s) > 64:
            s = s[:61] + "..."
        return f"TriBitString({s!r})"

    def to_str(self) -> str:
        return "".join(_CHARS[int(v)] for v in self._sym)

    def is_binary(self) -> bool:
        return not bool(np.any(self._sym == ERASED))

    def bits(self) -> np.ndarray:
        """The symbols as a plain 0/1 array; raises if any are erased."""
        if not self.is_binary():
            raise ValueError("string contains erasures")
        return self._sym

    def erasure_count(self) -> int:
        return int(np.count_nonzero(self._sym == ERASED))

    def erased_mask(self) -> np.ndarray:
        return self._sym == ERASED


def hamming(a: TriBitString | np.ndarray, b: TriBitString | np.ndarray) -> int:
    """Hamming distance between two binary strings of equal length."""
    xa = a.bits() if isinstance(a, TriBitString) else np.asarray(a, dtype=np.uint8)
    xb = b.bits() if isinstance(b, TriBitString) else np.asarray(b, dtype=np.uint8)
    if xa.shape != xb.shape:
        raise ValueError(f"length mismatch: {xa.size} vs {xb.size}")
    return int(np.count_nonzero(xa != xb))


def int_to_bits(x: int, width: int) -> np.ndarray:
    """Big-endian bit expansion: bit 1 of the string is the most significant."""
    if x < 0 or (width < x.bit_length()):
        raise ValueError(f"{x} does not fit in {width} bits")
    return np.array([(x >> (width - 1 - i)) & 1 for i in range(width)], dtype=np.uint8)


def bits_to_int(bits: Iterable[int] | np.ndarray) -> int:
    out = 0
    for b in np.asarray(bits, dtype=np.uint8):
        out = (out << 1) | int(b)
    return out


def bit_of(x: int, width: int, pos: int) -> int:
    """pos-th bit (1-based, from the most significant end) of a width-bit value."""
    if not 1 <= pos <= width:
        raise ValueError(f"position {pos} outside [1, {width}]")
    return (x >> (width - pos)) & 1


def bits_to_hex(bits: Iterable[int] | np.ndarray) -> str:
    """Hex form of a binary string, msb first, zero-padded to a nibble."""
    arr = np.asarray(bits, dtype=np.uint8)
    if arr.size == 0:
        return ""
    pad = (-arr.size) % 4
    padded = np.concatenate([arr, np.zeros(pad, dtype=np.uint8)])
    out = []
    for i in range(0, padded.size, 4):
        out.append(format(bits_to_int(padded[i : i + 4]), "x"))
    return "".join(out)


def hex_to_bits(text: str, nbits: int) -> np.ndarray:
    vals = []
    for c in text:
        vals.extend(int_to_bits(int(c, 16), 4))
    arr = np.array(vals[:nbits], dtype=np.uint8) if vals else np.zeros(0, np.uint8)
    if arr.size != nbits:
        raise ValueError(f"hex string carries {arr.size} bits, expected {nbits}")
    return arr


def tri_to_hex(s: TriBitString) -> str:
    """Hex of the 2-bit-per-symbol encoding (00=0, 01=1, 10=erased)."""
    two = np.zeros(2 * len(s), dtype=np.uint8)
    sym = s.symbols
    two[0::2] = (sym >> 1) & 1
    two[1::2] = sym & 1
    return bits_to_hex(two)


def hex_to_tri(text: str, nsyms: int) -> TriBitString:
    two = hex_to_bits(text, 2 * nsyms)
    sym = (two[0::2] << 1) | two[1::2]
    return TriBitString(sym)

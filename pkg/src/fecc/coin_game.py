"""Sparse position tracker for exponentially many coins.

Positions default to a shared running value; only coins named in some
update are stored explicitly.  Storage and query work are bounded by
functions of (t, K, log |S|): no operation enumerates more than t*K
non-exception coins, except explicitly flagged oracle-mode rank queries
on small spaces.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence


class CoinOutsideSpace(ValueError):
    pass


class RankOutOfRange(ValueError):
    pass


class UpdateTooLarge(ValueError):
    pass


class DuplicateCoin(ValueError):
    pass


class NegativeIncrement(ValueError):
    pass


@dataclass(frozen=True)
class CoinSpace:
    """Ordered integer coin space [lo, hi]; ordering is numeric."""

    lo: int
    hi: int

    @property
    def size(self) -> int:
        return self.hi - self.lo + 1

    def __contains__(self, y: int) -> bool:
        return self.lo <= y <= self.hi

    def smallest(self, m: int, excluding: set[int]) -> list[int]:
        """The m smallest coins not in `excluding`, in order."""
        out = []
        y = self.lo
        while len(out) < m and y <= self.hi:
            if y not in excluding:
                out.append(y)
            y += 1
        return out


def bitstrings(k: int) -> CoinSpace:
    """Coin per k-bit message, ordered numerically."""
    return CoinSpace(0, (1 << k) - 1)


def int_range(n: int) -> CoinSpace:
    """Coins 1..n."""
    return CoinSpace(1, n)


ORACLE_MAX = 1 << 20


class CoinGameState:
    """One coin game: explicit exception pairs plus a uniform default."""

    def __init__(self, space: CoinSpace, K: int, per_step_cap: int | None = None):
        if K < 1:
            raise ValueError("K must be at least 1")
        self.space = space
        self.K = K
        self.per_step_cap = per_step_cap
        self.t = 0
        self.default_pos = 0
        self.exceptions: dict[int, int] = {}
        self.update_log: list[tuple[int, int, tuple[tuple[int, int], ...]]] = []
        self.oracle_queries = 0

    def pos(self, y: int, t: int | None = None) -> int:
        if y not in self.space:
            raise CoinOutsideSpace(f"coin {y} outside [{self.space.lo}, {self.space.hi}]")
        if t is not None and t != self.t:
            raise ValueError("historical queries are not supported; replay the log")
        return self.exceptions.get(y, self.default_pos)

    def _ranked(self, upto: int) -> list[tuple[int, int]]:
        """The `upto` smallest (pos, coin) pairs, ties broken by coin order."""
        fill = self.space.smallest(
            min(upto, self.space.size), set(self.exceptions)
        )
        merged = [(p, y) for y, p in self.exceptions.items()]
        merged += [(self.default_pos, y) for y in fill]
        merged.sort()
        return merged[:upto]

    def coin_at_rank(self, i: int) -> int:
        """Coin with the i-th smallest position (1-based)."""
        if i < 1 or i > self.space.size:
            raise RankOutOfRange(f"rank {i} outside [1, {self.space.size}]")
        if i > self.t * self.K:
            if self.space.size > ORACLE_MAX:
                raise RankOutOfRange(
                    f"rank {i} exceeds t*K = {self.t * self.K} on a large space"
                )
            self.oracle_queries += 1
        return self._ranked(i)[i - 1][1]

    def position_at_rank(self, i: int) -> int:
        if i < 1 or i > self.space.size:
            raise RankOutOfRange(f"rank {i} outside [1, {self.space.size}]")
        if i > self.t * self.K:
            if self.space.size > ORACLE_MAX:
                raise RankOutOfRange(
                    f"rank {i} exceeds t*K = {self.t * self.K} on a large space"
                )
            self.oracle_queries += 1
        return self._ranked(i)[i - 1][0]

    def update(self, pairs: Sequence[tuple[int, int]], V: int) -> int:
        """Advance listed coins by their own increments, all others by V."""
        if len(pairs) > self.K:
            raise UpdateTooLarge(f"{len(pairs)} pairs exceeds K={self.K}")
        coins = [y for y, _ in pairs]
        if len(set(coins)) != len(coins):
            raise DuplicateCoin("update names a coin twice")
        cap = self.per_step_cap
        for y, v in pairs:
            if y not in self.space:
                raise CoinOutsideSpace(f"coin {y} outside the space")
            if v < 0 or V < 0:
                raise NegativeIncrement("increments must be non-negative")
            if cap is not None and (v > cap or V > cap):
                raise ValueError(f"increment exceeds the per-step cap {cap}")
        if V < 0:
            raise NegativeIncrement("increments must be non-negative")
        listed = dict(pairs)
        new_exc: dict[int, int] = {}
        for y, p in self.exceptions.items():
            new_exc[y] = p + listed.get(y, V)
        for y, v in listed.items():
            if y not in self.exceptions:
                new_exc[y] = self.default_pos + v
        self.exceptions = new_exc
        self.default_pos += V
        self.t += 1
        self.update_log.append((self.t, V, tuple(sorted(listed.items()))))
        assert len(self.exceptions) <= self.t * self.K
        return self.t

    # --- serialization -----------------------------------------------------

    def log_lines(self) -> list[str]:
        """One line per update: `t|V|y1:v1,y2:v2,...`."""
        out = []
        for t, V, pairs in self.update_log:
            body = ",".join(f"{y}:{v}" for y, v in pairs)
            out.append(f"{t}|{V}|{body}")
        return out


def new_game(space: CoinSpace, K: int, per_step_cap: int | None = None) -> CoinGameState:
    return CoinGameState(space, K, per_step_cap)


def replay_log(space: CoinSpace, K: int, lines: Iterable[str]) -> CoinGameState:
    """Rebuild a game state from serialized update lines."""
    g = new_game(space, K)
    for line in lines:
        t_str, v_str, body = line.strip().split("|")
        pairs = []
        if body:
            for item in body.split(","):
                y, v = item.split(":")
                pairs.append((int(y), int(v)))
        g.update(pairs, int(v_str))
        if g.t != int(t_str):
            raise ValueError("log lines out of order")
    return g

"""Online adversarial channel with a global corruption budget.

Adversaries see the sender's input, all feedback, and all traffic so far,
and corrupt each message immediately after it is sent.  Feedback has no
corruption path at all: the channel records it and hands it through.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Protocol, Sequence

import numpy as np

from .bits import ERASED, TriBitString

FLIP = "flip"
ERASE = "erase"


class BudgetExceeded(RuntimeError):
    pass


@dataclass
class AdversaryBudget:
    kind: str
    limit: int
    spent: int = 0

    def __post_init__(self):
        if self.kind not in (FLIP, ERASE):
            raise ValueError("kind must be 'flip' or 'erase'")

    @property
    def remaining(self) -> int:
        return self.limit - self.spent


@dataclass(frozen=True)
class ChannelView:
    """What happened to one message in flight."""

    round_index: int
    alice_sent: TriBitString
    bob_received: TriBitString
    corruption_this_round: int


@dataclass
class TransmitContext:
    """Everything an adversary may condition on."""

    x: int
    round_index: int
    sent: TriBitString
    feedback_log: list[np.ndarray]
    sent_log: list[TriBitString]
    received_log: list[TriBitString]
    remaining: int
    kind: str


class Adversary(Protocol):
    kind: str

    def corrupt(self, ctx: TransmitContext) -> Sequence[int]:
        """Positions to corrupt, in priority order (earlier wins truncation)."""
        ...


class Channel:
    """One session's channel: applies an adversary under a budget."""

    def __init__(
        self,
        adversary: Adversary,
        budget: AdversaryBudget,
        x: int,
        strict: bool = True,
    ):
        if adversary.kind != budget.kind:
            raise ValueError("adversary and budget kinds differ")
        self.adversary = adversary
        self.budget = budget
        self.x = x
        self.strict = strict
        self.truncated = False
        self.feedback_log: list[np.ndarray] = []
        self.sent_log: list[TriBitString] = []
        self.received_log: list[TriBitString] = []
        self.views: list[ChannelView] = []
        self.corruption_lines: list[str] = []

    def note_feedback(self, frame: np.ndarray) -> np.ndarray:
        self.feedback_log.append(np.asarray(frame, dtype=np.uint8))
        return self.feedback_log[-1]

    def transmit(self, sent: TriBitString) -> TriBitString:
        if not sent.is_binary():
            raise ValueError("senders emit binary symbols only")
        idx = len(self.views)
        ctx = TransmitContext(
            x=self.x,
            round_index=idx,
            sent=sent,
            feedback_log=self.feedback_log,
            sent_log=self.sent_log,
            received_log=self.received_log,
            remaining=self.budget.remaining,
            kind=self.budget.kind,
        )
        raw = list(self.adversary.corrupt(ctx))
        positions: list[int] = []
        seen = set()
        for p in raw:
            p = int(p)
            if p < 0 or p >= len(sent):
                raise ValueError(f"corruption position {p} outside the message")
            if p not in seen:
                seen.add(p)
                positions.append(p)
        if len(positions) > self.budget.remaining:
            if self.strict:
                raise BudgetExceeded(
                    f"adversary wants {len(positions)} > {self.budget.remaining} left"
                )
            positions = positions[: self.budget.remaining]
            self.truncated = True
        out = sent.symbols.copy()
        if self.budget.kind == FLIP:
            for p in positions:
                out[p] ^= 1
        else:
            for p in positions:
                out[p] = ERASED
        received = TriBitString(out)
        spent_delta = len(positions)
        self.budget.spent += spent_delta
        self.sent_log.append(sent)
        self.received_log.append(received)
        view = ChannelView(idx, sent, received, spent_delta)
        self.views.append(view)
        self.corruption_lines.append(
            f"{idx}|{','.join(str(p) for p in sorted(positions))}|{self.budget.kind}"
        )
        return received

    def total_corruption(self) -> int:
        return sum(v.corruption_this_round for v in self.views)


# ---------------------------------------------------------------------------
# strategies


class Passthrough:
    kind = FLIP

    def __init__(self, kind: str = FLIP):
        self.kind = kind

    def corrupt(self, ctx: TransmitContext) -> list[int]:
        return []


class RandomCorruption:
    """Independent per-symbol corruption with probability p, seeded."""

    def __init__(self, p: float, seed: int, kind: str = FLIP):
        if not 0 <= p <= 1:
            raise ValueError("p must lie in [0, 1]")
        self.p = p
        self.kind = kind
        self.rng = np.random.default_rng(seed)

    def corrupt(self, ctx: TransmitContext) -> list[int]:
        hits = np.nonzero(self.rng.random(len(ctx.sent)) < self.p)[0]
        return [int(h) for h in hits]


class FlipEverything:
    kind = FLIP

    def corrupt(self, ctx: TransmitContext) -> list[int]:
        return list(range(len(ctx.sent)))


class EraseEverything:
    kind = ERASE

    def corrupt(self, ctx: TransmitContext) -> list[int]:
        return list(range(len(ctx.sent)))


class Impersonate:
    """Corrupt every message to what the sender would emit on another input.

    The shadow sender consumes exactly the feedback frames the real one saw.
    Positions are emitted in index order; under a tight budget the prefix
    of each round's difference set is applied first.
    """

    kind = FLIP

    def __init__(self, target_input: int, alice_factory):
        self.target = target_input
        self.alice_factory = alice_factory
        self._alice = None
        self._consumed = 0

    def corrupt(self, ctx: TransmitContext) -> list[int]:
        if self._alice is None:
            self._alice = self.alice_factory(self.target)
        while self._consumed < len(ctx.feedback_log):
            self._alice.absorb_feedback(ctx.feedback_log[self._consumed])
            self._consumed += 1
        want = self._alice.emit()
        diff = np.nonzero(ctx.sent.symbols != want.symbols)[0]
        return [int(d) for d in diff]


def adversary_random(p: float, seed: int, kind: str = FLIP) -> RandomCorruption:
    return RandomCorruption(p, seed, kind)


def adversary_impersonate(target_input: int, alice_factory) -> Impersonate:
    return Impersonate(target_input, alice_factory)


_REGISTRY: dict[str, type | object] = {}


def register_adversary(name: str):
    def deco(factory):
        _REGISTRY[name] = factory
        return factory

    return deco


def make_adversary(spec: str, seed: int, **context):
    """Build a strategy from a CLI-style `name:key=value,...` string."""
    name, _, rest = spec.partition(":")
    params: dict[str, str] = {}
    if rest:
        for item in rest.split(","):
            key, _, val = item.partition("=")
            params[key] = val
    if name == "passthrough":
        return Passthrough(kind=params.get("kind", context.get("kind", FLIP)))
    if name == "random":
        return RandomCorruption(
            float(params.get("p", "0.2")), seed, params.get("kind", context.get("kind", FLIP))
        )
    if name == "flip_all":
        return FlipEverything()
    if name == "erase_all":
        return EraseEverything()
    if name in _REGISTRY:
        return _REGISTRY[name](params=params, seed=seed, **context)
    raise ValueError(f"unknown adversary {name!r}")

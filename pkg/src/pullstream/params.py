"""Scalar world description and scheme choices shared by the model, simulator and CLI."""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum


class StrategyKind(str, Enum):
    LATEST_FIRST = "latest"
    GREEDY = "greedy"
    RANDOM = "random"


class SelectionMode(str, Enum):
    """Whose buffer maps a chunk weight is computed against."""

    ZERO_NEIGHBOR = "0"
    ONE_NEIGHBOR = "1"
    V_NEIGHBOR = "v"


class PeerSelectionKind(str, Enum):
    RANDOM_PEER = "random"
    RANDOM_USEFUL_PEER = "useful"


class Scheme(str, Enum):
    CHUNK_FIRST = "cf"
    PEER_FIRST = "pf"
    EPIDEMIC = "ep"
    PUSH_PULL = "pushpull"


class ReplyMode(str, Enum):
    SINGLE = "single"
    MULTI = "multi"


def _parse_enum(enum_cls, value):
    if isinstance(value, enum_cls):
        return value
    try:
        return enum_cls(str(value).strip().lower())
    except ValueError:
        choices = "|".join(m.value for m in enum_cls)
        raise ValueError(f"unknown {enum_cls.__name__} {value!r}; expected one of {choices}") from None


def parse_scheme(value) -> Scheme:
    return _parse_enum(Scheme, value)


def parse_strategy(value) -> StrategyKind:
    return _parse_enum(StrategyKind, value)


def parse_peer_selection(value) -> PeerSelectionKind:
    return _parse_enum(PeerSelectionKind, value)


def parse_reply_mode(value) -> ReplyMode:
    return _parse_enum(ReplyMode, value)


@dataclass(frozen=True)
class SystemParams:
    """Overlay size N, buffer size n, neighbor count v, reply number U, split point d.

    ``v = 0`` is accepted so the simulator can run isolated peers (including the
    single-peer overlay); every analytical formula requires ``v >= 1`` and checks it.
    """

    N: int = 100
    n: int = 40
    v: int = 10
    U: int = 1
    d: int | None = None

    def __post_init__(self):
        for name in ("N", "n", "v", "U"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise ValueError(f"{name} must be an integer, got {value!r}")
        if self.N < 1:
            raise ValueError(f"overlay size must satisfy N >= 1, got N={self.N}")
        if self.n < 2:
            raise ValueError(f"buffer size must satisfy n >= 2, got n={self.n}")
        if self.v < 0 or self.v > self.N - 1:
            raise ValueError(f"neighbor count must satisfy v <= N-1 (and v >= 1 for the model), got v={self.v} with N={self.N}")
        if self.U < 1:
            raise ValueError(f"reply number must satisfy U >= 1, got U={self.U}")
        if self.d is not None:
            if isinstance(self.d, bool) or not isinstance(self.d, int):
                raise ValueError(f"d must be an integer, got {self.d!r}")
            if not 1 <= self.d <= self.n:
                raise ValueError(f"split point must satisfy 1 <= d <= n, got d={self.d} with n={self.n}")

    @property
    def split_point(self) -> int:
        """Split point, defaulting to the middle of the buffer."""
        return self.d if self.d is not None else self.n // 2

    def with_(self, **changes) -> "SystemParams":
        return replace(self, **changes)


@dataclass(frozen=True)
class SchemeSpec:
    scheme: Scheme = Scheme.PEER_FIRST
    strategy: StrategyKind = StrategyKind.LATEST_FIRST
    peer_selection: PeerSelectionKind = PeerSelectionKind.RANDOM_PEER
    reply_mode: ReplyMode = ReplyMode.SINGLE

    def __post_init__(self):
        object.__setattr__(self, "scheme", parse_scheme(self.scheme))
        object.__setattr__(self, "strategy", parse_strategy(self.strategy))
        object.__setattr__(self, "peer_selection", parse_peer_selection(self.peer_selection))
        object.__setattr__(self, "reply_mode", parse_reply_mode(self.reply_mode))
        if self.scheme is Scheme.EPIDEMIC:
            if self.peer_selection is not PeerSelectionKind.RANDOM_PEER:
                raise ValueError("epidemic scheme requires random peer selection")
            if self.reply_mode is not ReplyMode.SINGLE:
                raise ValueError("epidemic scheme is single-reply only")

    @classmethod
    def for_reply_number(cls, scheme, strategy, peer_selection, U: int) -> "SchemeSpec":
        """Spec whose reply mode follows ``U`` (single reply iff ``U == 1``)."""
        scheme = parse_scheme(scheme)
        mode = ReplyMode.SINGLE if U == 1 or scheme in (Scheme.EPIDEMIC, Scheme.PUSH_PULL) else ReplyMode.MULTI
        return cls(scheme, strategy, peer_selection, mode)

    @property
    def label(self) -> str:
        if self.scheme is Scheme.PUSH_PULL:
            return "pushpull"
        return f"{self.scheme.value}-{self.strategy.value}-{self.peer_selection.value}-{self.reply_mode.value}"

"""Matching sequences, actions and barbs shared by both calculi."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

from .names import Name, Relabelling

MatchSeq = tuple[tuple[Name, Name], ...]
EMPTY: MatchSeq = ()


def match_seq(*pairs: tuple[Name, Name]) -> MatchSeq:
    """Build a matching sequence, dropping trivial matches ``[x=x]``."""
    return tuple((x, y) for x, y in pairs if x != y)


def prepend_match(m: MatchSeq, x: Name, y: Name) -> MatchSeq:
    if x == y:
        return m
    return ((x, y),) + m


def map_match(m: MatchSeq, f: Callable[[Name], Name]) -> MatchSeq:
    return match_seq(*((f(x), f(y)) for x, y in m))


def match_names(m: MatchSeq) -> frozenset[Name]:
    return frozenset(n for pair in m for n in pair)


def show_match(m: MatchSeq) -> str:
    return "".join(f"[{x}={y}]" for x, y in m)


class Kind(enum.Enum):
    SILENT = "silent"
    FREE_OUT = "free-out"
    BOUND_OUT = "bound-out"
    FREE_IN = "free-in"
    BOUND_IN = "bound-in"


OUTPUTS = (Kind.FREE_OUT, Kind.BOUND_OUT)
INPUTS = (Kind.FREE_IN, Kind.BOUND_IN)
BOUND = (Kind.BOUND_OUT, Kind.BOUND_IN)


@dataclass(frozen=True)
class Barb:
    """Observable ability to input on (co=False) or output on (co=True) a channel."""

    channel: Name
    co: bool

    def __str__(self):
        return f"'{self.channel}" if self.co else str(self.channel)

    def sort_key(self):
        return (self.channel.sort_key(), self.co)


@dataclass(frozen=True)
class Action:
    """``M tau``, ``M x!y``, ``M x!(y)``, ``M x?y`` or ``M x(y)``.

    ``obj`` is None only for silent actions and for classic CCS channel labels
    (``a?`` / ``a!``), which carry no object.
    """

    kind: Kind
    m: MatchSeq = EMPTY
    subject: Name | None = None
    obj: Name | None = None

    def __post_init__(self):
        if any(x == y for x, y in self.m):
            object.__setattr__(self, "m", match_seq(*self.m))
        if self.kind is Kind.SILENT:
            if self.subject is not None or self.obj is not None:
                raise ValueError("silent actions carry no names besides M")
        elif self.subject is None:
            raise ValueError(f"{self.kind.value} action needs a subject")
        elif self.kind in BOUND and self.obj is None:
            raise ValueError("bound actions need a bound name")

    @property
    def is_silent(self) -> bool:
        return self.kind is Kind.SILENT

    @property
    def is_tau(self) -> bool:
        return self.kind is Kind.SILENT and not self.m

    @property
    def is_output(self) -> bool:
        return self.kind in OUTPUTS

    @property
    def is_input(self) -> bool:
        return self.kind in INPUTS

    @property
    def bn(self) -> frozenset[Name]:
        return frozenset({self.obj}) if self.kind in BOUND else frozenset()

    @property
    def fn(self) -> frozenset[Name]:
        if self.kind is Kind.SILENT:
            # the matching sequence of a synchronisation is not counted as free
            return frozenset()
        out = set(match_names(self.m))
        out.add(self.subject)
        if self.kind not in BOUND and self.obj is not None:
            out.add(self.obj)
        return frozenset(out)

    @property
    def n(self) -> frozenset[Name]:
        return self.fn | self.bn

    def observation(self) -> Barb | None:
        """The barb this action generates, if any."""
        if self.kind is Kind.SILENT or self.m or not self.subject.is_public:
            return None
        return Barb(self.subject, self.is_output)

    def map_names(self, f: Callable[[Name], Name]) -> "Action":
        return Action(
            self.kind,
            map_match(self.m, f),
            None if self.subject is None else f(self.subject),
            None if self.obj is None else f(self.obj),
        )

    def with_match(self, x: Name, y: Name) -> "Action":
        return Action(self.kind, prepend_match(self.m, x, y), self.subject, self.obj)

    def with_object(self, obj: Name | None) -> "Action":
        return Action(self.kind, self.m, self.subject, obj)

    def sort_key(self):
        def k(n):
            return n.sort_key() if n is not None else ()
        return (
            list(Kind).index(self.kind),
            tuple((k(a), k(b)) for a, b in self.m),
            k(self.subject),
            k(self.obj),
        )

    def __str__(self):
        m = show_match(self.m)
        x, y = self.subject, self.obj
        match self.kind:
            case Kind.SILENT:
                return m + "tau"
            case Kind.FREE_OUT:
                return f"{m}{x}!" if y is None else f"{m}{x}!{y}"
            case Kind.BOUND_OUT:
                return f"{m}{x}!({y})"
            case Kind.FREE_IN:
                return f"{m}{x}?" if y is None else f"{m}{x}?{y}"
            case Kind.BOUND_IN:
                return f"{m}{x}({y})"


def tau(m: MatchSeq = EMPTY) -> Action:
    return Action(Kind.SILENT, m)


TAU = tau()


def free_out(x: Name, y: Name | None, m: MatchSeq = EMPTY) -> Action:
    return Action(Kind.FREE_OUT, m, x, y)


def bound_out(x: Name, y: Name, m: MatchSeq = EMPTY) -> Action:
    return Action(Kind.BOUND_OUT, m, x, y)


def free_in(x: Name, y: Name | None, m: MatchSeq = EMPTY) -> Action:
    return Action(Kind.FREE_IN, m, x, y)


def bound_in(x: Name, y: Name, m: MatchSeq = EMPTY) -> Action:
    return Action(Kind.BOUND_IN, m, x, y)


def apply_to_action(rel: Relabelling, a: Action) -> Action:
    """Rename every name position of *a*; matches that become ``[x=x]`` vanish."""
    return a.map_names(rel.apply)

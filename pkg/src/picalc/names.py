"""The three-sorted name universe and the relabellings acting on it.

Names come in three disjoint sorts:

* ``Public``  -- ordinary channel names written as identifiers (``x``, ``y1``);
* ``Spare``   -- reserve names ``s1, s2, ...`` that make substitutions surjective;
* ``Private`` -- names ``{tags}p`` followed by primes, with tags over ``e``, ``l``, ``r``.
  They stand in for restricted names and never produce barbs.

Relabellings are total functions on names: every family below is defined on
some domain and is the identity outside it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import total_ordering
from typing import Iterable

IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
SPARE_RE = re.compile(r"s([1-9][0-9]*)\Z")
PRIVATE_RE = re.compile(r"\{([elr]*)\}p('*)\Z")

# Words with a fixed meaning in the text grammars.
KEYWORDS = frozenset({"tau", "nu", "sum", "in", "map", "shift"})


class BadName(ValueError):
    """Raised for malformed name text."""


@total_ordering
class Name:
    """Base class of the three name sorts; ordered by sort, then by content."""

    __slots__ = ()

    def sort_key(self) -> tuple:
        raise NotImplementedError

    def __lt__(self, other):
        if not isinstance(other, Name):
            return NotImplemented
        return self.sort_key() < other.sort_key()

    @property
    def is_public(self) -> bool:
        """Public in the barb sense: ordinary names and spare names."""
        return not isinstance(self, Private)


@dataclass(frozen=True)
class Public(Name):
    id: str

    def __post_init__(self):
        if not IDENT_RE.match(self.id) or SPARE_RE.match(self.id) or self.id in KEYWORDS:
            raise BadName(f"not a public identifier: {self.id!r}")

    def sort_key(self):
        return (0, self.id, 0)

    def __str__(self):
        return self.id

    def __repr__(self):
        return f"Public({self.id!r})"


@dataclass(frozen=True)
class Spare(Name):
    index: int

    def __post_init__(self):
        if self.index < 1:
            raise BadName(f"spare index must be >= 1, got {self.index}")

    def sort_key(self):
        return (1, "", self.index)

    def __str__(self):
        return f"s{self.index}"

    def __repr__(self):
        return f"Spare({self.index})"


@dataclass(frozen=True)
class Private(Name):
    tags: str = ""
    primes: int = 0

    def __post_init__(self):
        if self.primes < 0 or set(self.tags) - set("elr"):
            raise BadName(f"bad private name: tags={self.tags!r} primes={self.primes}")

    def sort_key(self):
        return (2, self.tags, self.primes)

    def __str__(self):
        return "{" + self.tags + "}p" + "'" * self.primes

    def __repr__(self):
        return f"Private({self.tags!r}, {self.primes})"


P0 = Private("", 0)
P1 = Private("", 1)


def parse_name(text: str) -> Name:
    text = text.strip()
    if m := SPARE_RE.match(text):
        return Spare(int(m.group(1)))
    if m := PRIVATE_RE.match(text):
        return Private(m.group(1), len(m.group(2)))
    return Public(text)


def name(text: str) -> Name:
    """Shorthand used throughout the tests and fixtures."""
    return parse_name(text)


def names(*texts: str) -> tuple[Name, ...]:
    return tuple(parse_name(t) for t in texts)


def fresh_public(avoid: Iterable[Name], hint: str | Name = "z") -> Public:
    """Least name of the sequence ``hint, stem0, stem1, ...`` not in *avoid*.

    The stem is the hint with trailing digits removed, so fresh names stay
    readable and the choice is a deterministic function of (avoid, hint).
    """
    avoid = set(avoid)
    if isinstance(hint, Public):
        hint = hint.id
    elif isinstance(hint, Name):
        hint = "z"
    if hint and hint not in KEYWORDS and not SPARE_RE.match(hint):
        cand = Public(hint)
        if cand not in avoid:
            return cand
    stem = hint.rstrip("0123456789") or "z"
    if stem in KEYWORDS or stem == "s":
        stem = "z"
    i = 0
    while True:
        cand = Public(f"{stem}{i}")
        if cand not in avoid:
            return cand
        i += 1


# ---------------------------------------------------------------- relabellings


class Relabelling:
    """A total function on names, given by a finite description."""

    __slots__ = ()

    #: whether ``apply`` is injective on the whole name universe
    injective: bool = True

    def apply(self, x: Name) -> Name:
        raise NotImplementedError

    def preimage(self, w: Name) -> frozenset[Name]:
        raise NotImplementedError

    def names(self) -> frozenset[Name]:
        """Names mentioned by the description (used for freshness)."""
        return frozenset()


@dataclass(frozen=True)
class FiniteMap(Relabelling):
    pairs: tuple[tuple[Name, Name], ...] = ()

    def __post_init__(self):
        dom = [a for a, _ in self.pairs]
        if len(set(dom)) != len(dom):
            raise ValueError("FiniteMap domain entries must be distinct")

    @property
    def injective(self) -> bool:
        # the identity extension is injective iff the map permutes its domain
        dom = {a for a, _ in self.pairs}
        rng = [b for _, b in self.pairs]
        return len(set(rng)) == len(rng) and set(rng) == dom

    def apply(self, x):
        for a, b in self.pairs:
            if a == x:
                return b
        return x

    def preimage(self, w):
        out = {a for a, b in self.pairs if b == w}
        if all(a != w for a, _ in self.pairs):
            out.add(w)
        return frozenset(out)

    def names(self):
        return frozenset(n for pair in self.pairs for n in pair)

    def __str__(self):
        return "map: " + ", ".join(f"{a}->{b}" for a, b in self.pairs) if self.pairs else "map:"


@dataclass(frozen=True)
class Tag(Relabelling):
    """Prepend *tag* to a private name without primes, else drop one prime.

    Private names whose tag string already starts with *tag* and that carry
    primes are outside the domain and stay fixed.
    """

    tag: str

    def __post_init__(self):
        if self.tag not in ("e", "l", "r"):
            raise ValueError(f"tag must be one of e, l, r: {self.tag!r}")

    def apply(self, x):
        if isinstance(x, Private):
            if x.primes == 0:
                return Private(self.tag + x.tags, 0)
            if not x.tags.startswith(self.tag):
                return Private(x.tags, x.primes - 1)
        return x

    def preimage(self, w):
        if not isinstance(w, Private):
            return frozenset({w})
        cands = [w]
        if w.primes == 0 and w.tags.startswith(self.tag):
            cands.append(Private(w.tags[1:], 0))
        if not w.tags.startswith(self.tag):
            cands.append(Private(w.tags, w.primes + 1))
        return frozenset(c for c in cands if self.apply(c) == w)

    def __str__(self):
        return self.tag


TAG_L = Tag("l")
TAG_R = Tag("r")
TAG_E = Tag("e")


@dataclass(frozen=True)
class PNu(Relabelling):
    """Send y to p, p' back to y, and e-tag every other private name."""

    y: Name

    def apply(self, x):
        if x == self.y:
            return P0
        if x == P1:
            return self.y
        if isinstance(x, Private):
            return TAG_E.apply(x)
        return x

    def preimage(self, w):
        cands = {w}
        if w == P0:
            cands.add(self.y)
        if w == self.y:
            cands.add(P1)
        if isinstance(w, Private):
            cands |= TAG_E.preimage(w)
        return frozenset(c for c in cands if self.apply(c) == w)

    def names(self):
        return frozenset({self.y})

    def __str__(self):
        return f"p_{self.y}"


@dataclass(frozen=True)
class SubS(Relabelling):
    """Surjective substitution: sources[i] -> targets[i], s_i -> sources[i] for
    i <= n and s_i -> s_(i-n) beyond."""

    targets: tuple[Name, ...]
    sources: tuple[Name, ...]

    def __post_init__(self):
        if len(self.targets) != len(self.sources):
            raise ValueError("SubS needs as many targets as sources")
        if len(set(self.sources)) != len(self.sources):
            raise ValueError("SubS sources must be distinct")
        if any(not isinstance(x, Public) for x in self.sources):
            raise ValueError("SubS sources must be ordinary public names")

    injective = False

    def apply(self, x):
        n = len(self.sources)
        if isinstance(x, Spare):
            return self.sources[x.index - 1] if x.index <= n else Spare(x.index - n)
        for src, tgt in zip(self.sources, self.targets):
            if src == x:
                return tgt
        return x

    def preimage(self, w):
        n = len(self.sources)
        out = {src for src, tgt in zip(self.sources, self.targets) if tgt == w}
        for i, src in enumerate(self.sources, start=1):
            if src == w:
                out.add(Spare(i))
        if isinstance(w, Spare):
            out.add(Spare(w.index + n))
        elif w not in self.sources:
            out.add(w)
        return frozenset(out)

    def names(self):
        return frozenset(self.targets) | frozenset(self.sources)

    def __str__(self):
        return ",".join(map(str, self.targets)) + "/" + ",".join(map(str, self.sources))


@dataclass(frozen=True)
class Shift(Relabelling):
    """Public(base + k) -> Public(base + (k + step)); identity elsewhere.

    Injective but not surjective: base0 .. base(step-1) have no preimage.
    """

    base: str
    step: int = 1

    def _index(self, x: Name) -> int | None:
        if isinstance(x, Public) and x.id.startswith(self.base):
            digits = x.id[len(self.base):]
            if digits.isdigit() and (digits == "0" or not digits.startswith("0")):
                return int(digits)
        return None

    def apply(self, x):
        k = self._index(x)
        return x if k is None else Public(f"{self.base}{k + self.step}")

    def preimage(self, w):
        k = self._index(w)
        if k is None:
            return frozenset({w})
        if k < self.step:
            return frozenset()
        return frozenset({Public(f"{self.base}{k - self.step}")})

    def __str__(self):
        return f"shift {self.base}" if self.step == 1 else f"shift {self.base} {self.step}"


def apply(rel: Relabelling, x: Name) -> Name:
    return rel.apply(x)


def preimage(rel: Relabelling, w: Name) -> frozenset[Name]:
    return rel.preimage(w)

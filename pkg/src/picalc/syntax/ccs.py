"""Abstract syntax of CCS_gamma with triggering.

The infinite input sum ``sum_{z} M x z.(E[z/y])`` is kept symbolic as an
``InputSum`` node; its instantiated branches are ``Relabel(E, SubS((z,), (y,)))``.
The name y there is a parameter of the relabelling, not an alpha-convertible
binder, so CCS terms are compared structurally.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from ..actions import EMPTY, Action, Kind, MatchSeq, match_names
from ..names import FiniteMap, Name, Relabelling, SubS


class CcsTerm:
    __slots__ = ()

    def __str__(self):
        from .printer import show_ccs

        return show_ccs(self)


@dataclass(frozen=True)
class Nil(CcsTerm):
    pass


@dataclass(frozen=True)
class Prefix(CcsTerm):
    action: Action
    cont: CcsTerm

    def __post_init__(self):
        if self.action.kind in (Kind.BOUND_IN, Kind.BOUND_OUT):
            raise ValueError("CCS prefixes cannot carry bound actions")


@dataclass(frozen=True)
class SumList(CcsTerm):
    items: tuple[CcsTerm, ...]


@dataclass(frozen=True)
class InputSum(CcsTerm):
    """``sum_z M x z.(body[z/y])``.

    ``public_only`` restricts z to ordinary public names; ``plain`` uses the
    non-surjective renaming ``{y -> z}`` instead of the spare-name substitution.
    Both flags exist for the contrasting pair-action encoding.
    """

    m: MatchSeq
    x: Name
    y: Name
    body: CcsTerm
    public_only: bool = False
    plain: bool = False

    def branch_relabelling(self, z: Name) -> Relabelling:
        if self.plain:
            return FiniteMap(((self.y, z),)) if z != self.y else FiniteMap()
        return SubS((z,), (self.y,))


@dataclass(frozen=True)
class Par(CcsTerm):
    left: CcsTerm
    right: CcsTerm


@dataclass(frozen=True)
class Restrict(CcsTerm):
    """Blocks visible actions whose subject is in ``names``."""

    body: CcsTerm
    names: frozenset[Name] = field(default_factory=frozenset)


@dataclass(frozen=True)
class Relabel(CcsTerm):
    body: CcsTerm
    rel: Relabelling


@dataclass(frozen=True)
class Trigger(CcsTerm):
    """``[x=y] => body``: prepends the match to the first action only."""

    x: Name
    y: Name
    body: CcsTerm


@dataclass(frozen=True)
class Ide(CcsTerm):
    name: str


NIL = Nil()


def prefix(a: Action, cont: CcsTerm = NIL) -> Prefix:
    return Prefix(a, cont)


def sum_of(*items: CcsTerm) -> CcsTerm:
    if not items:
        return NIL
    if len(items) == 1:
        return items[0]
    return SumList(tuple(items))


def par(*es: CcsTerm) -> CcsTerm:
    if not es:
        return NIL
    out = es[0]
    for e in es[1:]:
        out = Par(out, e)
    return out


def relabel(e: CcsTerm, *rels: Relabelling) -> CcsTerm:
    for r in rels:
        e = Relabel(e, r)
    return e


def subterms(e: CcsTerm) -> Iterator[CcsTerm]:
    yield e
    match e:
        case Prefix(_, c) | Relabel(c, _) | Restrict(c, _) | Trigger(_, _, c):
            yield from subterms(c)
        case InputSum(body=c):
            yield from subterms(c)
        case SumList(items):
            for i in items:
                yield from subterms(i)
        case Par(l, r):
            yield from subterms(l)
            yield from subterms(r)


def size(e: CcsTerm) -> int:
    return sum(1 for _ in subterms(e))


def identifiers(e: CcsTerm) -> frozenset[str]:
    return frozenset(q.name for q in subterms(e) if isinstance(q, Ide))


def mentioned_names(e: CcsTerm) -> frozenset[Name]:
    """Every name written in e (actions, relabelling parameters, triggers)."""
    out: set[Name] = set()
    for q in subterms(e):
        match q:
            case Prefix(a, _):
                out |= match_names(a.m)
                out |= {n for n in (a.subject, a.obj) if n is not None}
            case InputSum(m, x, y):
                out |= match_names(m) | {x, y}
            case Restrict(_, ns):
                out |= ns
            case Relabel(_, rel):
                out |= rel.names()
            case Trigger(x, y, _):
                out |= {x, y}
    return frozenset(out)


def is_identity(rel: Relabelling) -> bool:
    if isinstance(rel, FiniteMap):
        return all(a == b for a, b in rel.pairs)
    if isinstance(rel, SubS):
        return not rel.sources
    return False


def normalize(e: CcsTerm) -> CcsTerm:
    """Canonical representative used as a state key.

    Drops identity relabellings, relabelled/restricted/triggered 0, 0 parallel
    components and trivial triggers; flattens, sorts and deduplicates sums.
    Relabelling stacks are kept as they are.
    """
    match e:
        case Nil() | Ide():
            return e
        case Prefix(a, c):
            return Prefix(a, normalize(c))
        case InputSum():
            return InputSum(e.m, e.x, e.y, normalize(e.body), e.public_only, e.plain)
        case SumList(items):
            flat: list[CcsTerm] = []
            for i in items:
                n = normalize(i)
                if isinstance(n, SumList):
                    flat.extend(n.items)
                elif not isinstance(n, Nil):
                    flat.append(n)
            uniq = sorted(set(flat), key=_key)
            return sum_of(*uniq)
        case Par(l, r):
            nl, nr = normalize(l), normalize(r)
            if isinstance(nl, Nil):
                return nr
            if isinstance(nr, Nil):
                return nl
            return Par(nl, nr)
        case Restrict(b, ns):
            nb = normalize(b)
            if isinstance(nb, Nil) or not ns:
                return nb
            return Restrict(nb, ns)
        case Relabel(b, rel):
            nb = normalize(b)
            if isinstance(nb, Nil) or is_identity(rel):
                return nb
            return Relabel(nb, rel)
        case Trigger(x, y, b):
            nb = normalize(b)
            if x == y or isinstance(nb, Nil):
                return nb
            return Trigger(x, y, nb)
    raise TypeError(f"not a CCS term: {e!r}")


def _key(e: CcsTerm) -> str:
    from .printer import show_ccs

    return show_ccs(e)


__all__ = [
    "CcsTerm", "Nil", "Prefix", "SumList", "InputSum", "Par", "Restrict", "Relabel",
    "Trigger", "Ide", "NIL", "prefix", "sum_of", "par", "relabel", "subterms", "size",
    "identifiers", "mentioned_names", "normalize", "is_identity", "EMPTY",
]

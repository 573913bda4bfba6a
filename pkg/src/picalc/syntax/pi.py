"""Abstract syntax of the pi-calculus, with and without implicit matching.

Strict terms use the ``Match`` operator and prefixes with an empty matching
sequence; implicit-matching terms have no ``Match`` nodes but prefixes may carry
a matching sequence.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping

from ..actions import EMPTY, MatchSeq, map_match, match_names, match_seq
from ..names import Name, Public, fresh_public


class PiTerm:
    __slots__ = ()

    def __str__(self):
        from .printer import show_pi

        return show_pi(self)


@dataclass(frozen=True)
class Nil(PiTerm):
    pass


@dataclass(frozen=True)
class TauPre(PiTerm):
    m: MatchSeq
    cont: PiTerm


@dataclass(frozen=True)
class OutPre(PiTerm):
    m: MatchSeq
    x: Name
    y: Name
    cont: PiTerm


@dataclass(frozen=True)
class InPre(PiTerm):
    """``M x(y).cont``; binds y in cont."""

    m: MatchSeq
    x: Name
    y: Name
    cont: PiTerm


@dataclass(frozen=True)
class Nu(PiTerm):
    y: Name
    body: PiTerm


@dataclass(frozen=True)
class Match(PiTerm):
    x: Name
    y: Name
    body: PiTerm


@dataclass(frozen=True)
class Par(PiTerm):
    left: PiTerm
    right: PiTerm


@dataclass(frozen=True)
class Sum(PiTerm):
    left: PiTerm
    right: PiTerm


@dataclass(frozen=True)
class Ide(PiTerm):
    name: str
    args: tuple[Name, ...] = ()


NIL = Nil()

PREFIXES = (TauPre, OutPre, InPre)


def tau_(cont: PiTerm = NIL, m: MatchSeq = EMPTY) -> TauPre:
    return TauPre(match_seq(*m), cont)


def out(x: Name, y: Name, cont: PiTerm = NIL, m: MatchSeq = EMPTY) -> OutPre:
    return OutPre(match_seq(*m), x, y, cont)


def inp(x: Name, y: Name, cont: PiTerm = NIL, m: MatchSeq = EMPTY) -> InPre:
    return InPre(match_seq(*m), x, y, cont)


def par(*ps: PiTerm) -> PiTerm:
    """Left-nested parallel composition; ``par()`` is 0."""
    if not ps:
        return NIL
    out_ = ps[0]
    for p in ps[1:]:
        out_ = Par(out_, p)
    return out_


def choice(*ps: PiTerm) -> PiTerm:
    if not ps:
        return NIL
    out_ = ps[0]
    for p in ps[1:]:
        out_ = Sum(out_, p)
    return out_


# ------------------------------------------------------------------ names


def free_names(p: PiTerm) -> frozenset[Name]:
    match p:
        case Nil():
            return frozenset()
        case TauPre(m, c):
            return match_names(m) | free_names(c)
        case OutPre(m, x, y, c):
            return match_names(m) | {x, y} | free_names(c)
        case InPre(m, x, y, c):
            return match_names(m) | {x} | (free_names(c) - {y})
        case Nu(y, b):
            return free_names(b) - {y}
        case Match(x, y, b):
            return frozenset({x, y}) | free_names(b)
        case Par(l, r) | Sum(l, r):
            return free_names(l) | free_names(r)
        case Ide(_, args):
            return frozenset(args)
    raise TypeError(f"not a pi term: {p!r}")


def bound_names(p: PiTerm) -> frozenset[Name]:
    match p:
        case Nil() | Ide():
            return frozenset()
        case TauPre(_, c) | OutPre(_, _, _, c) | Match(_, _, c):
            return bound_names(c)
        case InPre(_, _, y, c) | Nu(y, c):
            return frozenset({y}) | bound_names(c)
        case Par(l, r) | Sum(l, r):
            return bound_names(l) | bound_names(r)
    raise TypeError(f"not a pi term: {p!r}")


def all_names(p: PiTerm) -> frozenset[Name]:
    """n(P): every name occurring in P, free or bound."""
    match p:
        case Nil():
            return frozenset()
        case TauPre(m, c):
            return match_names(m) | all_names(c)
        case OutPre(m, x, y, c) | InPre(m, x, y, c):
            return match_names(m) | {x, y} | all_names(c)
        case Nu(y, b):
            return frozenset({y}) | all_names(b)
        case Match(x, y, b):
            return frozenset({x, y}) | all_names(b)
        case Par(l, r) | Sum(l, r):
            return all_names(l) | all_names(r)
        case Ide(_, args):
            return frozenset(args)
    raise TypeError(f"not a pi term: {p!r}")


def subterms(p: PiTerm) -> Iterator[PiTerm]:
    """Pre-order traversal of p and its syntactic subterms."""
    yield p
    match p:
        case TauPre(_, c) | OutPre(_, _, _, c) | InPre(_, _, _, c) | Nu(_, c) | Match(_, _, c):
            yield from subterms(c)
        case Par(l, r) | Sum(l, r):
            yield from subterms(l)
            yield from subterms(r)


def size(p: PiTerm) -> int:
    return sum(1 for _ in subterms(p))


def has_match_nodes(p: PiTerm) -> bool:
    return any(isinstance(q, Match) for q in subterms(p))


def has_prefix_matches(p: PiTerm) -> bool:
    return any(isinstance(q, PREFIXES) and q.m for q in subterms(p))


def identifiers(p: PiTerm) -> frozenset[str]:
    return frozenset(q.name for q in subterms(p) if isinstance(q, Ide))


# ------------------------------------------------------------------ substitution


def substitute(p: PiTerm, sigma: Mapping[Name, Name]) -> PiTerm:
    """Simultaneous capture-avoiding substitution ``P sigma``.

    A binder y is kept when it is outside dom(sigma) and range(sigma); otherwise
    it is renamed to a fresh name outside fn((nu y)P), dom(sigma) and range(sigma).
    """
    sigma = {a: b for a, b in sigma.items() if a != b}
    if not sigma:
        return p
    return _subst(p, sigma)


def _app(sigma, x):
    return sigma.get(x, x)


def _binder(y: Name, body: PiTerm, sigma: dict) -> tuple[Name, dict]:
    """Choose the new binder for y and the substitution to push into the body."""
    touched = set(sigma) | set(sigma.values())
    inner = {a: b for a, b in sigma.items() if a != y}
    if y not in touched:
        return y, inner
    z = fresh_public((free_names(body) - {y}) | touched, hint=y)
    inner[y] = z
    return z, inner


def _subst(p: PiTerm, sigma: dict) -> PiTerm:
    match p:
        case Nil():
            return p
        case TauPre(m, c):
            return TauPre(map_match(m, lambda n: _app(sigma, n)), _subst(c, sigma))
        case OutPre(m, x, y, c):
            f = lambda n: _app(sigma, n)  # noqa: E731
            return OutPre(map_match(m, f), f(x), f(y), _subst(c, sigma))
        case InPre(m, x, y, c):
            f = lambda n: _app(sigma, n)  # noqa: E731
            z, inner = _binder(y, c, sigma)
            return InPre(map_match(m, f), f(x), z, _subst(c, inner) if inner else c)
        case Nu(y, c):
            z, inner = _binder(y, c, sigma)
            return Nu(z, _subst(c, inner) if inner else c)
        case Match(x, y, c):
            return Match(_app(sigma, x), _app(sigma, y), _subst(c, sigma))
        case Par(l, r):
            return Par(_subst(l, sigma), _subst(r, sigma))
        case Sum(l, r):
            return Sum(_subst(l, sigma), _subst(r, sigma))
        case Ide(a, args):
            return Ide(a, tuple(_app(sigma, n) for n in args))
    raise TypeError(f"not a pi term: {p!r}")


def rename(p: PiTerm, new: Name, old: Name) -> PiTerm:
    """``P{new/old}``."""
    return substitute(p, {old: new})


# ------------------------------------------------------------------ alpha-conversion

CANON_STEM = "_b"


def alpha_canonical(p: PiTerm) -> PiTerm:
    """Rename every binder, in pre-order, to ``_b0, _b1, ...`` skipping free names."""
    free = free_names(p)
    counter = [0]

    def next_name() -> Name:
        while True:
            cand = Public(f"{CANON_STEM}{counter[0]}")
            counter[0] += 1
            if cand not in free:
                return cand

    def go(q: PiTerm, env: dict) -> PiTerm:
        f = lambda n: env.get(n, n)  # noqa: E731
        match q:
            case Nil():
                return q
            case TauPre(m, c):
                return TauPre(map_match(m, f), go(c, env))
            case OutPre(m, x, y, c):
                return OutPre(map_match(m, f), f(x), f(y), go(c, env))
            case InPre(m, x, y, c):
                z = next_name()
                return InPre(map_match(m, f), f(x), z, go(c, {**env, y: z}))
            case Nu(y, c):
                z = next_name()
                return Nu(z, go(c, {**env, y: z}))
            case Match(x, y, c):
                return Match(f(x), f(y), go(c, env))
            case Par(l, r):
                return Par(go(l, env), go(r, env))
            case Sum(l, r):
                return Sum(go(l, env), go(r, env))
            case Ide(a, args):
                return Ide(a, tuple(f(n) for n in args))
        raise TypeError(f"not a pi term: {q!r}")

    return go(p, {})


def alpha_eq(p: PiTerm, q: PiTerm) -> bool:
    return alpha_canonical(p) == alpha_canonical(q)


def printer_key(p: PiTerm) -> str:
    from .printer import show_pi

    return show_pi(p)

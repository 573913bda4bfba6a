"""Canonical ASCII printing of pi and CCS terms; output re-parses to the same AST."""

from __future__ import annotations

from ..actions import Action, Kind, show_match
from ..names import FiniteMap, SubS, fresh_public
from . import ccs, pi

# pi precedence levels
_SUM, _PAR, _UNARY, _ATOM = 0, 1, 2, 3
# CCS adds a postfix level for relabelling and restriction
_POSTFIX, _CATOM = 3, 4


def _wrap(text: str, level: int, ctx: int) -> str:
    return f"({text})" if level < ctx else text


def show_pi(p: pi.PiTerm, unicode: bool = False) -> str:
    text = _pi(p, _SUM)
    if unicode:
        text = text.replace("tau", "τ").replace("nu ", "ν")
    return text


def _pi(p: pi.PiTerm, ctx: int) -> str:
    match p:
        case pi.Nil():
            return "0"
        case pi.TauPre(m, c):
            return _wrap(f"{show_match(m)}tau.{_pi(c, _UNARY)}", _UNARY, ctx)
        case pi.OutPre(m, x, y, c):
            return _wrap(f"{show_match(m)}{x}!{y}.{_pi(c, _UNARY)}", _UNARY, ctx)
        case pi.InPre(m, x, y, c):
            return _wrap(f"{show_match(m)}{x}({y}).{_pi(c, _UNARY)}", _UNARY, ctx)
        case pi.Nu(y, b):
            return _wrap(f"nu {y}. {_pi(b, _UNARY)}", _UNARY, ctx)
        case pi.Match(x, y, b):
            return _wrap(f"[{x}={y}]{_pi(b, _UNARY)}", _UNARY, ctx)
        case pi.Par(l, r):
            return _wrap(f"{_pi(l, _PAR)} | {_pi(r, _UNARY)}", _PAR, ctx)
        case pi.Sum(l, r):
            return _wrap(f"{_pi(l, _SUM)} + {_pi(r, _PAR)}", _SUM, ctx)
        case pi.Ide(a, args):
            return f"{a}({', '.join(map(str, args))})" if args else a
    raise TypeError(f"not a pi term: {p!r}")


def show_action(a: Action) -> str:
    """Action literal as written in CCS prefixes and transition labels."""
    return str(a)


def show_ccs(e: ccs.CcsTerm, unicode: bool = False) -> str:
    text = _ccs(e, _SUM)
    if unicode:
        text = text.replace("tau", "τ")
    return text


def _ccs(e: ccs.CcsTerm, ctx: int) -> str:
    match e:
        case ccs.Nil():
            return "0"
        case ccs.Ide(a):
            return a
        case ccs.Prefix(a, c):
            return _wrap(f"{show_action(a)}.{_ccs(c, _UNARY)}", _UNARY, ctx)
        case ccs.SumList(items):
            if len(items) < 2:
                return "sum {" + ", ".join(_ccs(i, _SUM) for i in items) + "}"
            return _wrap(" + ".join(_ccs(i, _PAR) for i in items), _SUM, ctx)
        case ccs.InputSum():
            z = fresh_public(ccs.mentioned_names(e), "z")
            rel = FiniteMap(((e.y, z),)) if e.plain else SubS((z,), (e.y,))
            branch = _ccs(ccs.Relabel(e.body, rel), _UNARY)
            dom = " in N" if e.public_only else ""
            head = f"sum {z}{dom}. {show_match(e.m)}{e.x}?{z}.{branch}"
            return _wrap(head, _UNARY, ctx)
        case ccs.Par(l, r):
            return _wrap(f"{_ccs(l, _PAR)} || {_ccs(r, _UNARY)}", _PAR, ctx)
        case ccs.Restrict(b, ns):
            shown = ", ".join(str(n) for n in sorted(ns))
            return _wrap(f"{_ccs(b, _POSTFIX)} \\ {{{shown}}}", _POSTFIX, ctx)
        case ccs.Relabel(b, rel):
            return _wrap(f"{_ccs(b, _POSTFIX)}[{rel}]", _POSTFIX, ctx)
        case ccs.Trigger(x, y, b):
            return _wrap(f"[{x}={y}] => {_ccs(b, _UNARY)}", _UNARY, ctx)
    raise TypeError(f"not a CCS term: {e!r}")


def show_label(a: Action) -> str:
    if a.kind is Kind.SILENT:
        return show_match(a.m) + "tau"
    return str(a)

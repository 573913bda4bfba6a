"""Recursive-descent parsers for pi terms, CCS terms and definition files.

pi precedence, tightest first: prefixes, ``nu``, ``[x=y]``, ``|``, ``+``.
CCS precedence, tightest first: postfix ``[rel]`` and ``\\ {..}``, prefixes and
``[x=y] =>``, ``||``, ``+``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Literal

from ..actions import EMPTY, Action, Kind, MatchSeq, match_seq
from ..names import (
    KEYWORDS,
    PRIVATE_RE,
    TAG_E,
    TAG_L,
    TAG_R,
    BadName,
    FiniteMap,
    Name,
    PNu,
    Public,
    Relabelling,
    Shift,
    SubS,
    parse_name,
)
from . import ccs, pi
from .env import DefEnv, DefinitionError, PiDef, check_pi_calls, check_pi_def

Mode = Literal["strict", "im"]

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+|\#[^\n]*)
  | (?P<private>\{[elr]*\}p'*)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<number>[0-9]+)
  | (?P<sym>\|\||:=|=>|->|[|+.()\[\]{},=!?'<>/\\:])
    """,
    re.VERBOSE,
)


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Token:
    kind: str  # private | ident | number | sym | eof
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    out: list[Token] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind != "ws":
            out.append(Token(kind, m.group(), line, pos - line_start + 1))
        for i, ch in enumerate(m.group()):
            if ch == "\n":
                line += 1
                line_start = pos + i + 1
        pos = m.end()
    out.append(Token("eof", "", line, pos - line_start + 1))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    # -- token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, msg: str, tok: Token | None = None) -> ParseError:
        t = tok or self.tok
        return ParseError(msg, t.line, t.column)

    def at(self, text: str) -> bool:
        return self.tok.kind in ("sym", "ident", "number") and self.tok.text == text

    def take(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        if not self.at(text):
            shown = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {shown!r}")
        return self.take()

    def ident(self) -> Token:
        if self.tok.kind != "ident" or self.tok.text in KEYWORDS:
            raise self.error(f"expected an identifier, found {self.tok.text or 'end of input'!r}")
        return self.take()

    def name(self) -> Name:
        t = self.tok
        if t.kind == "private" or (t.kind == "ident" and t.text not in KEYWORDS):
            self.take()
            try:
                return parse_name(t.text)
            except BadName as exc:
                raise self.error(str(exc), t) from None
        raise self.error(f"expected a name, found {t.text or 'end of input'!r}")

    def names_until(self, close: str) -> list[Name]:
        out: list[Name] = []
        if self.at(close):
            return out
        out.append(self.name())
        while self.at(","):
            self.take()
            out.append(self.name())
        return out

    def matches(self) -> MatchSeq:
        """A run of ``[x=y]`` guards, stopping before ``[x=y] =>``."""
        pairs = []
        while self.at("[") and self.peek(2).text == "=" and self.peek(4).text == "]":
            start = self.i
            self.take()
            x = self.name()
            self.expect("=")
            y = self.name()
            self.expect("]")
            if self.at("=>"):
                self.i = start
                break
            pairs.append((x, y))
        return tuple(pairs)

    def is_def_start(self) -> bool:
        """IDENT [ '(' names ')' ] ':='"""
        if self.tok.kind != "ident" or self.tok.text in KEYWORDS:
            return False
        j = self.i + 1
        if self.toks[j].text == "(":
            depth = 0
            while self.toks[j].kind != "eof":
                if self.toks[j].text == "(":
                    depth += 1
                elif self.toks[j].text == ")":
                    depth -= 1
                    if depth == 0:
                        break
                j += 1
            j += 1
        return j < len(self.toks) and self.toks[j].text == ":="


# ====================================================================== pi


class _PiParser(_Parser):
    def __init__(self, text: str, mode: Mode):
        super().__init__(text)
        if mode not in ("strict", "im"):
            raise ValueError(f"unknown mode {mode!r}")
        self.mode = mode

    def pname(self) -> Name:
        t = self.tok
        n = self.name()
        if not isinstance(n, Public):
            raise self.error(f"pi terms use ordinary names only, not {t.text!r}", t)
        return n

    def sum(self) -> pi.PiTerm:
        p = self.par()
        while self.at("+"):
            self.take()
            p = pi.Sum(p, self.par())
        return p

    def par(self) -> pi.PiTerm:
        p = self.unary()
        while self.at("|"):
            self.take()
            p = pi.Par(p, self.unary())
        return p

    def unary(self) -> pi.PiTerm:
        t = self.tok
        if self.at("["):
            if self.mode == "strict":
                self.take()
                x = self.pname()
                self.expect("=")
                y = self.pname()
                self.expect("]")
                return pi.Match(x, y, self.unary())
            m = self.matches()
            for a, b in m:
                if not (isinstance(a, Public) and isinstance(b, Public)):
                    raise self.error("pi terms use ordinary names only", t)
            if not self.starts_prefix():
                raise self.error("a match must guard a prefix in implicit-matching mode", self.tok)
            return self.prefix(match_seq(*m))
        if self.at("nu"):
            self.take()
            y = self.pname()
            self.expect(".")
            return pi.Nu(y, self.unary())
        if self.starts_prefix():
            return self.prefix(EMPTY)
        return self.atom()

    def starts_prefix(self) -> bool:
        t = self.tok
        if self.at("tau") or self.at("'"):
            return True
        if t.kind in ("ident", "private") and t.text not in KEYWORDS:
            nxt = self.peek()
            if nxt.text == "!":
                return True
            if nxt.text == "(" and self.peek(3).text == ")" and self.peek(4).text == ".":
                return True
        return False

    def prefix(self, m: MatchSeq) -> pi.PiTerm:
        if self.at("tau"):
            self.take()
            self.expect(".")
            return pi.TauPre(m, self.unary())
        if self.at("'"):
            self.take()
            x = self.pname()
            self.expect("<")
            y = self.pname()
            self.expect(">")
            self.expect(".")
            return pi.OutPre(m, x, y, self.unary())
        x = self.pname()
        if self.at("!"):
            self.take()
            y = self.pname()
            self.expect(".")
            return pi.OutPre(m, x, y, self.unary())
        self.expect("(")
        y = self.pname()
        self.expect(")")
        self.expect(".")
        return pi.InPre(m, x, y, self.unary())

    def atom(self) -> pi.PiTerm:
        t = self.tok
        if t.kind == "number" and t.text == "0":
            self.take()
            return pi.NIL
        if self.at("("):
            self.take()
            p = self.sum()
            self.expect(")")
            return p
        if t.kind == "ident" and t.text not in KEYWORDS:
            self.take()
            args: list[Name] = []
            if self.at("("):
                self.take()
                while not self.at(")"):
                    args.append(self.pname())
                    if not self.at(")"):
                        self.expect(",")
                self.expect(")")
            return pi.Ide(t.text, tuple(args))
        raise self.error(f"unexpected {t.text or 'end of input'!r}")

    def definition(self) -> PiDef:
        head = self.ident()
        params: list[Name] = []
        if self.at("("):
            self.take()
            while not self.at(")"):
                params.append(self.pname())
                if not self.at(")"):
                    self.expect(",")
            self.expect(")")
        self.expect(":=")
        d = PiDef(head.text, tuple(params), self.sum())
        try:
            check_pi_def(d)
        except DefinitionError as exc:
            raise self.error(str(exc), head) from None
        return d

    def document(self, allow_term: bool) -> tuple[pi.PiTerm | None, list[tuple[PiDef, Token]]]:
        term = None
        defs: list[tuple[PiDef, Token]] = []
        while self.tok.kind != "eof":
            if self.is_def_start():
                t = self.tok
                defs.append((self.definition(), t))
            elif allow_term and term is None:
                term = self.sum()
            else:
                raise self.error(f"unexpected {self.tok.text!r}")
        return term, defs


def _check_mode(p: pi.PiTerm, mode: Mode, where: str) -> None:
    if mode == "im" and pi.has_match_nodes(p):
        raise DefinitionError(f"{where}: match operator is not allowed in implicit-matching mode")
    if mode == "strict" and pi.has_prefix_matches(p):
        raise DefinitionError(f"{where}: prefix matches are only allowed in implicit-matching mode")


def _build_pi_env(defs, base: DefEnv) -> DefEnv:
    env = base
    for d, tok in defs:
        try:
            env = env.with_pi(d)
        except DefinitionError as exc:
            raise ParseError(str(exc), tok.line, tok.column) from None
    return env


def parse_pi(text: str, mode: Mode = "strict", defs_text: str = "") -> tuple[pi.PiTerm, DefEnv]:
    """Parse a pi term (optionally preceded or followed by definitions)."""
    env = parse_pi_defs(defs_text, mode) if defs_text.strip() else DefEnv()
    p = _PiParser(text, mode)
    term, defs = p.document(allow_term=True)
    if term is None:
        raise ParseError("no process term found", p.tok.line, p.tok.column)
    env = _build_pi_env(defs, env)
    _check_mode(term, mode, "term")
    for d in env.pi_defs.values():
        _check_mode(d.body, mode, f"definition of {d.name}")
        check_pi_calls(d.body, env)
    check_pi_calls(term, env)
    return term, env


def parse_pi_defs(text: str, mode: Mode = "strict") -> DefEnv:
    p = _PiParser(text, mode)
    _, defs = p.document(allow_term=False)
    env = _build_pi_env(defs, DefEnv())
    for d in env.pi_defs.values():
        _check_mode(d.body, mode, f"definition of {d.name}")
        check_pi_calls(d.body, env)
    return env


def pi_term(text: str, mode: Mode = "strict") -> pi.PiTerm:
    """Parse a closed-form term without definitions (convenience for tests)."""
    p = _PiParser(text, mode)
    t = p.sum()
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p.tok.text!r}")
    _check_mode(t, mode, "term")
    return t


# ====================================================================== CCS


class _CcsParser(_Parser):
    def sum(self) -> ccs.CcsTerm:
        items = [self.par()]
        while self.at("+"):
            self.take()
            items.append(self.par())
        return items[0] if len(items) == 1 else ccs.SumList(tuple(items))

    def par(self) -> ccs.CcsTerm:
        e = self.unary()
        while self.at("||"):
            self.take()
            e = ccs.Par(e, self.unary())
        return e

    def unary(self) -> ccs.CcsTerm:
        t = self.tok
        if self.at("["):
            m = self.matches()
            if not m:
                # a trigger: [x=y] => E
                self.take()
                x = self.name()
                self.expect("=")
                y = self.name()
                self.expect("]")
                self.expect("=>")
                return ccs.Trigger(x, y, self.unary())
            a = self.action(m)
            self.expect(".")
            return ccs.Prefix(a, self.unary())
        if self.at("sum"):
            return self.sum_form()
        if self.at("tau") or self.at("'") or (
            t.kind in ("ident", "private") and t.text not in KEYWORDS and self.peek().text in ("!", "?")
        ):
            a = self.action(EMPTY)
            self.expect(".")
            return ccs.Prefix(a, self.unary())
        return self.postfix()

    def action(self, m: MatchSeq) -> Action:
        if self.at("tau"):
            self.take()
            return Action(Kind.SILENT, match_seq(*m))
        if self.at("'"):
            self.take()
            x = self.name()
            self.expect("<")
            y = self.name()
            self.expect(">")
            return Action(Kind.FREE_OUT, match_seq(*m), x, y)
        x = self.name()
        if self.at("!"):
            kind = Kind.FREE_OUT
        elif self.at("?"):
            kind = Kind.FREE_IN
        else:
            raise self.error("expected '!' or '?' in an action")
        self.take()
        obj = None
        if self.tok.kind == "private" or (self.tok.kind == "ident" and self.tok.text not in KEYWORDS):
            obj = self.name()
        return Action(kind, match_seq(*m), x, obj)

    def sum_form(self) -> ccs.CcsTerm:
        start = self.take()
        if self.at("{"):
            self.take()
            items: list[ccs.CcsTerm] = []
            while not self.at("}"):
                items.append(self.sum())
                if not self.at("}"):
                    self.expect(",")
            self.expect("}")
            return ccs.SumList(tuple(items))
        z = self.name()
        public_only = False
        if self.at("in"):
            self.take()
            dom = self.ident()
            if dom.text != "N":
                raise self.error("only 'in N' is supported for input sums", dom)
            public_only = True
        self.expect(".")
        m = self.matches()
        x = self.name()
        self.expect("?")
        t = self.tok
        if self.name() != z:
            raise self.error(f"input sum must receive its index {z}", t)
        self.expect(".")
        branch = self.unary()
        if isinstance(branch, ccs.Relabel):
            rel = branch.rel
            if isinstance(rel, SubS) and rel.targets == (z,):
                return ccs.InputSum(match_seq(*m), x, rel.sources[0], branch.body, public_only, False)
            if isinstance(rel, FiniteMap) and len(rel.pairs) == 1 and rel.pairs[0][1] == z:
                y = rel.pairs[0][0]
                if isinstance(y, Public):
                    return ccs.InputSum(match_seq(*m), x, y, branch.body, public_only, True)
        raise self.error(f"input sum branch must end in [{z}/y] or [map: y->{z}]", start)

    def postfix(self) -> ccs.CcsTerm:
        e = self.atom()
        while True:
            if self.at("["):
                self.take()
                e = ccs.Relabel(e, self.relabelling())
                self.expect("]")
            elif self.at("\\"):
                self.take()
                self.expect("{")
                ns = self.names_until("}")
                self.expect("}")
                e = ccs.Restrict(e, frozenset(ns))
            else:
                return e

    def relabelling(self) -> Relabelling:
        t = self.tok
        if self.at("map") and self.peek().text == ":":
            self.take()
            self.take()
            pairs = []
            while not self.at("]"):
                a = self.name()
                self.expect("->")
                pairs.append((a, self.name()))
                if not self.at("]"):
                    self.expect(",")
            try:
                return FiniteMap(tuple(pairs))
            except ValueError as exc:
                raise self.error(str(exc), t) from None
        if self.at("shift"):
            self.take()
            base = self.ident().text
            step = 1
            if self.tok.kind == "number":
                step = int(self.take().text)
            return Shift(base, step)
        if t.kind == "ident" and self.peek().text == "]":
            if t.text in ("l", "r", "e"):
                self.take()
                return {"l": TAG_L, "r": TAG_R, "e": TAG_E}[t.text]
            if t.text.startswith("p_"):
                self.take()
                try:
                    return PNu(parse_name(t.text[2:]))
                except BadName as exc:
                    raise self.error(str(exc), t) from None
        targets = self.names_until("/")
        self.expect("/")
        sources = self.names_until("]")
        try:
            return SubS(tuple(targets), tuple(sources))
        except ValueError as exc:
            raise self.error(str(exc), t) from None

    def atom(self) -> ccs.CcsTerm:
        t = self.tok
        if t.kind == "number" and t.text == "0":
            self.take()
            return ccs.NIL
        if self.at("("):
            self.take()
            e = self.sum()
            self.expect(")")
            return e
        if t.kind == "ident" and t.text not in KEYWORDS:
            self.take()
            return ccs.Ide(t.text)
        raise self.error(f"unexpected {t.text or 'end of input'!r}")

    def document(self, allow_term: bool):
        term = None
        defs: list[tuple[str, ccs.CcsTerm, Token]] = []
        while self.tok.kind != "eof":
            if self.is_def_start():
                head = self.ident()
                self.expect(":=")
                defs.append((head.text, self.sum(), head))
            elif allow_term and term is None:
                term = self.sum()
            else:
                raise self.error(f"unexpected {self.tok.text!r}")
        return term, defs


def _build_ccs_env(defs, base: DefEnv) -> DefEnv:
    env = base
    for name, body, tok in defs:
        try:
            env = env.with_ccs(**{name: body})
        except DefinitionError as exc:
            raise ParseError(str(exc), tok.line, tok.column) from None
    return env


def _check_ccs_idents(e: ccs.CcsTerm, env: DefEnv) -> None:
    for a in ccs.identifiers(e):
        env.ccs_def(a)


def parse_ccs(text: str, defs_text: str = "") -> tuple[ccs.CcsTerm, DefEnv]:
    env = parse_ccs_defs(defs_text) if defs_text.strip() else DefEnv()
    p = _CcsParser(text)
    term, defs = p.document(allow_term=True)
    if term is None:
        raise ParseError("no process term found", p.tok.line, p.tok.column)
    env = _build_ccs_env(defs, env)
    for body in list(env.ccs_defs.values()) + [term]:
        _check_ccs_idents(body, env)
    return term, env


def parse_ccs_defs(text: str) -> DefEnv:
    p = _CcsParser(text)
    _, defs = p.document(allow_term=False)
    env = _build_ccs_env(defs, DefEnv())
    for body in env.ccs_defs.values():
        _check_ccs_idents(body, env)
    return env


def ccs_term(text: str) -> ccs.CcsTerm:
    p = _CcsParser(text)
    t = p.sum()
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p.tok.text!r}")
    return t


__all__ = [
    "ParseError", "Token", "tokenize", "parse_pi", "parse_pi_defs", "pi_term",
    "parse_ccs", "parse_ccs_defs", "ccs_term", "PRIVATE_RE",
]

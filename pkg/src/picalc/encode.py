"""Translations from the pi-calculus into CCS.

``translate_T`` is the compositional, barbed-bisimilarity-preserving translation
into CCS_gamma (with triggering for the matching operator). ``translate_E`` is the
pair-action encoding into classic CCS, kept as a contrasting encoding that
preserves barbs but not reductions.
"""

from __future__ import annotations

from typing import Literal

from .actions import EMPTY, free_out, tau
from .names import PNu, SubS, TAG_L, TAG_R
from .syntax import ccs, pi
from .syntax.env import DefEnv, DefinitionError

Mode = Literal["strict", "im"]
CCS_PREFIX = "T_"


class TranslationError(ValueError):
    """The source term is outside the domain of the requested translation."""


def ccs_identifier(name: str, env: DefEnv) -> str:
    """CCS identifier for pi identifier ``name``; prefixed when ``env`` already uses the name."""
    return CCS_PREFIX + name if name in env.ccs_defs else name


class _T:
    def __init__(self, env: DefEnv, mode: Mode, plain_inputs: bool):
        self.env = env
        self.mode = mode
        self.plain_inputs = plain_inputs

    def __call__(self, p: pi.PiTerm) -> ccs.CcsTerm:
        match p:
            case pi.Nil():
                return ccs.NIL
            case pi.TauPre(m, c):
                self._check_prefix(m)
                return ccs.Prefix(tau(m), self(c))
            case pi.OutPre(m, x, y, c):
                self._check_prefix(m)
                return ccs.Prefix(free_out(x, y, m), self(c))
            case pi.InPre(m, x, y, c):
                self._check_prefix(m)
                return ccs.InputSum(m, x, y, self(c), plain=self.plain_inputs)
            case pi.Nu(y, b):
                return ccs.Relabel(self(b), PNu(y))
            case pi.Par(l, r):
                return ccs.Par(ccs.Relabel(self(l), TAG_L), ccs.Relabel(self(r), TAG_R))
            case pi.Sum(l, r):
                return ccs.SumList((self(l), self(r)))
            case pi.Match(x, y, b):
                if self.mode != "strict":
                    raise TranslationError("matching operator in a term with implicit matching")
                return ccs.Trigger(x, y, self(b))
            case pi.Ide(a, args):
                d = self.env.pi_def(a)
                if len(args) != len(d.params):
                    raise DefinitionError(f"{a} expects {len(d.params)} arguments, got {len(args)}")
                ide = ccs.Ide(ccs_identifier(a, self.env))
                return ccs.Relabel(ide, SubS(tuple(args), d.params)) if args else ide
        raise TypeError(f"not a pi term: {p!r}")

    def _check_prefix(self, m) -> None:
        if m and self.mode == "strict":
            raise TranslationError("matching sequence on a prefix in a strict term")


def translate_T(p: pi.PiTerm, env: DefEnv = DefEnv(), mode: Mode = "im",
                plain_inputs: bool = False) -> tuple[ccs.CcsTerm, DefEnv]:
    """Translate p, returning the CCS term and env extended with every translated definition.

    ``plain_inputs`` swaps the spare-name substitution in input sums for the
    plain renaming ``{y -> z}``; it is a deliberately broken variant for tests.
    """
    t = _T(env, mode, plain_inputs)
    out = {ccs_identifier(a, env): t(d.body) for a, d in sorted(env.pi_defs.items())}
    return t(p), env.with_ccs(**out)


def translate_E(p: pi.PiTerm) -> ccs.CcsTerm:
    """Pair-action encoding of the fragment built from 0, prefixes, + and |."""
    match p:
        case pi.Nil():
            return ccs.NIL
        case pi.TauPre(m, c) if not m:
            return ccs.Prefix(tau(), translate_E(c))
        case pi.OutPre(m, x, y, c) if not m:
            return ccs.Prefix(free_out(x, y), translate_E(c))
        case pi.InPre(m, x, y, c) if not m:
            return ccs.InputSum(EMPTY, x, y, translate_E(c), public_only=True, plain=True)
        case pi.Par(l, r):
            return ccs.Par(translate_E(l), translate_E(r))
        case pi.Sum(l, r):
            return ccs.SumList((translate_E(l), translate_E(r)))
    raise TranslationError(f"outside the fragment of the pair-action encoding: {p}")


# ------------------------------------------------------------------ compositionality


def translation_context(p: pi.PiTerm, env: DefEnv, mode: Mode, holes: list[ccs.CcsTerm]) -> ccs.CcsTerm:
    """Fill the translation context of p's top operator with the given translated subterms."""
    match p:
        case pi.Nil():
            return ccs.NIL
        case pi.TauPre(m, _):
            return ccs.Prefix(tau(m), holes[0])
        case pi.OutPre(m, x, y, _):
            return ccs.Prefix(free_out(x, y, m), holes[0])
        case pi.InPre(m, x, y, _):
            return ccs.InputSum(m, x, y, holes[0])
        case pi.Nu(y, _):
            return ccs.Relabel(holes[0], PNu(y))
        case pi.Par():
            return ccs.Par(ccs.Relabel(holes[0], TAG_L), ccs.Relabel(holes[1], TAG_R))
        case pi.Sum():
            return ccs.SumList((holes[0], holes[1]))
        case pi.Match(x, y, _):
            return ccs.Trigger(x, y, holes[0])
        case pi.Ide(a, args):
            ide = ccs.Ide(ccs_identifier(a, env))
            return ccs.Relabel(ide, SubS(tuple(args), env.pi_def(a).params)) if args else ide
    raise TypeError(f"not a pi term: {p!r}")


def _children(p: pi.PiTerm) -> list[pi.PiTerm]:
    match p:
        case pi.TauPre(_, c) | pi.OutPre(_, _, _, c) | pi.InPre(_, _, _, c) | pi.Nu(_, c) | pi.Match(_, _, c):
            return [c]
        case pi.Par(l, r) | pi.Sum(l, r):
            return [l, r]
    return []


def check_compositionality(p: pi.PiTerm, env: DefEnv = DefEnv(), mode: Mode = "im") -> bool:
    """Every subterm's translation equals its operator's context applied to the children's translations."""
    t = _T(env, mode, False)
    return all(
        t(q) == translation_context(q, env, mode, [t(c) for c in _children(q)])
        for q in pi.subterms(p)
    )


__all__ = [
    "TranslationError", "translate_T", "translate_E", "translation_context",
    "check_compositionality", "ccs_identifier",
]

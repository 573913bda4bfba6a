"""Agent-identifier definition environments for both calculi."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from ..names import Name
from . import ccs, pi


class DefinitionError(ValueError):
    """Unknown identifier, arity mismatch, redefinition or ill-formed body."""


@dataclass(frozen=True)
class PiDef:
    name: str
    params: tuple[Name, ...]
    body: pi.PiTerm


@dataclass(frozen=True)
class DefEnv:
    pi_defs: Mapping[str, PiDef] = field(default_factory=dict)
    ccs_defs: Mapping[str, ccs.CcsTerm] = field(default_factory=dict)

    def pi_def(self, name: str) -> PiDef:
        try:
            return self.pi_defs[name]
        except KeyError:
            raise DefinitionError(f"unbound pi identifier {name}") from None

    def ccs_def(self, name: str) -> ccs.CcsTerm:
        try:
            return self.ccs_defs[name]
        except KeyError:
            raise DefinitionError(f"unbound CCS identifier {name}") from None

    def unfold_pi(self, name: str, args: tuple[Name, ...]) -> pi.PiTerm:
        d = self.pi_def(name)
        if len(args) != len(d.params):
            raise DefinitionError(
                f"{name} expects {len(d.params)} arguments, got {len(args)}"
            )
        return pi.substitute(d.body, dict(zip(d.params, args)))

    def with_pi(self, *defs: PiDef) -> "DefEnv":
        new = dict(self.pi_defs)
        for d in defs:
            if d.name in new:
                raise DefinitionError(f"redefinition of {d.name}")
            new[d.name] = d
        return DefEnv(new, dict(self.ccs_defs))

    def with_ccs(self, **defs: ccs.CcsTerm) -> "DefEnv":
        new = dict(self.ccs_defs)
        for k, v in defs.items():
            if k in new:
                raise DefinitionError(f"redefinition of {k}")
            new[k] = v
        return DefEnv(dict(self.pi_defs), new)

    def merged(self, other: "DefEnv") -> "DefEnv":
        return self.with_pi(*other.pi_defs.values()).with_ccs(**other.ccs_defs)


EMPTY_ENV = DefEnv()


def check_pi_def(d: PiDef) -> None:
    if len(set(d.params)) != len(d.params):
        raise DefinitionError(f"parameters of {d.name} are not distinct")
    extra = pi.free_names(d.body) - set(d.params)
    if extra:
        shown = ", ".join(sorted(map(str, extra)))
        raise DefinitionError(f"body of {d.name} has free names outside its parameters: {shown}")


def check_env(env: DefEnv) -> None:
    """Every definition is closed over its parameters and every identifier resolves with the right arity."""
    for d in env.pi_defs.values():
        check_pi_def(d)
        check_pi_calls(d.body, env)
    for body in env.ccs_defs.values():
        for a in ccs.identifiers(body):
            env.ccs_def(a)


def check_pi_calls(p: pi.PiTerm, env: DefEnv) -> None:
    for q in pi.subterms(p):
        if isinstance(q, pi.Ide):
            d = env.pi_def(q.name)
            if len(q.args) != len(d.params):
                raise DefinitionError(
                    f"{q.name} expects {len(d.params)} arguments, got {len(q.args)}"
                )


# Nested unfoldings of identifiers allowed while deriving one transition;
# exceeding it means unguarded recursion.
DEFAULT_MAX_UNFOLD = 64


class RecursionGuardError(RuntimeError):
    """Raised when unfolding identifiers does not reach a guard."""

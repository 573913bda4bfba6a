"""Transition engines for the pi-calculus: late, early and their symbolic variants.

One engine covers all four rule sets. ``early`` selects free inputs ``x z``
(objects drawn from a finite pool) over bound inputs ``x(z)``; ``symbolic``
lets matching sequences through as action guards instead of requiring them
to hold.

Alpha-conversion is not a separate rule. Binders are renamed on the fly to
names outside an ``avoid`` set supplied by the context, so the side conditions
of par, res and close hold whenever some alpha-variant would satisfy them.
The tau-transitions are exact without any pool: communication asks the
partner only for inputs whose object is the output's object.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .actions import (
    Action,
    Barb,
    Kind,
    bound_in,
    bound_out,
    free_in,
    free_out,
    match_names,
    prepend_match,
    tau,
)
from .names import Name, fresh_public
from .syntax import pi
from .syntax.env import DEFAULT_MAX_UNFOLD, DefEnv, RecursionGuardError
from .syntax.pi import free_names, rename

NO_NAMES: frozenset[Name] = frozenset()


@dataclass(frozen=True)
class PiTransition:
    source: pi.PiTerm
    action: Action
    target: pi.PiTerm

    def __str__(self):
        return f"{self.source} --{self.action}--> {self.target}"


class PiEngine:
    """Derives transitions under one of the four rule sets.

    ``trans(p, avoid, pool)`` returns (action, target) pairs; bound names in the
    labels avoid ``avoid`` and free-input objects range over ``pool`` (early only).
    Results are memoized per engine instance.
    """

    def __init__(self, env: DefEnv, early: bool, symbolic: bool, max_unfold: int = DEFAULT_MAX_UNFOLD):
        self.env = env
        self.early = early
        self.symbolic = symbolic
        self.max_unfold = max_unfold
        self._cache: dict = {}
        self._unfold_cache: dict = {}
        self._depth = 0

    # ---------------------------------------------------------------- core

    def trans(self, p: pi.PiTerm, avoid: frozenset[Name] = NO_NAMES,
              pool: frozenset[Name] = NO_NAMES) -> tuple[tuple[Action, pi.PiTerm], ...]:
        if not self.early:
            pool = NO_NAMES
        key = (p, avoid, pool)
        hit = self._cache.get(key)
        if hit is None:
            hit = tuple(self._derive(p, avoid, pool))
            self._cache[key] = hit
        return hit

    def unfold(self, p: pi.Ide) -> pi.PiTerm:
        hit = self._unfold_cache.get(p)
        if hit is None:
            hit = self.env.unfold_pi(p.name, p.args)
            self._unfold_cache[p] = hit
        return hit

    def _guarded(self, m) -> bool:
        return self.symbolic or not m

    def _derive(self, p, avoid, pool):
        match p:
            case pi.Nil():
                return []
            case pi.TauPre(m, c):
                return [(tau(m), c)] if self._guarded(m) else []
            case pi.OutPre(m, x, y, c):
                return [(free_out(x, y, m), c)] if self._guarded(m) else []
            case pi.InPre(m, x, y, c):
                if not self._guarded(m):
                    return []
                if self.early:
                    return [(free_in(x, z, m), rename(c, z, y)) for z in sorted(pool)]
                z = y
                if y in avoid:
                    z = fresh_public(avoid | free_names(c) | match_names(m) | {x, y}, hint=y)
                return [(bound_in(x, z, m), rename(c, z, y))]
            case pi.Sum(l, r):
                return list(self.trans(l, avoid, pool)) + list(self.trans(r, avoid, pool))
            case pi.Match(x, y, b):
                if self.symbolic:
                    return [(a.with_match(x, y), t) for a, t in self.trans(b, avoid, pool)]
                return list(self.trans(b, avoid, pool)) if x == y else []
            case pi.Ide():
                self._depth += 1
                try:
                    if self._depth > self.max_unfold:
                        raise RecursionGuardError(
                            f"unguarded recursion through {p.name}: more than "
                            f"{self.max_unfold} nested unfoldings"
                        )
                    return list(self.trans(self.unfold(p), avoid, pool))
                finally:
                    self._depth -= 1
            case pi.Nu(y, b):
                return self._nu(p, y, b, avoid, pool)
            case pi.Par(l, r):
                return self._par(l, r, avoid, pool)
        raise TypeError(f"not a pi term: {p!r}")

    def _nu(self, p, y, b, avoid, pool):
        if y in avoid or y in pool:
            new = fresh_public(avoid | pool | free_names(p) | {y}, hint=y)
            b = rename(b, new, y)
            y = new
        out = []
        for a, t in self.trans(b, avoid | {y}, pool):
            if y not in a.n:
                out.append((a, pi.Nu(y, t)))
            elif (
                a.kind is Kind.FREE_OUT
                and a.obj == y
                and a.subject != y
                and y not in match_names(a.m)
            ):
                out.append((bound_out(a.subject, y, a.m), t))
        return out

    def _par(self, l, r, avoid, pool):
        fl, fr = free_names(l), free_names(r)
        al, ar = avoid | fr, avoid | fl
        out = []
        if self.early:
            # outputs do not depend on the pool; their objects are what the partner must accept
            outs_l = [(a, t) for a, t in self.trans(l, al, NO_NAMES) if a.is_output]
            outs_r = [(a, t) for a, t in self.trans(r, ar, NO_NAMES) if a.is_output]
            tl = self.trans(l, al, pool | {a.obj for a, _ in outs_r})
            tr = self.trans(r, ar, pool | {a.obj for a, _ in outs_l})
        else:
            tl = self.trans(l, al, NO_NAMES)
            tr = self.trans(r, ar, NO_NAMES)
            outs_l = [(a, t) for a, t in tl if a.is_output]
            outs_r = [(a, t) for a, t in tr if a.is_output]

        def visible_here(a: Action, other_fn) -> bool:
            if a.bn & other_fn:
                return False
            return not (self.early and a.kind is Kind.FREE_IN and a.obj not in pool)

        for a, t in tl:
            if visible_here(a, fr):
                out.append((a, pi.Par(t, r)))
        for a, t in tr:
            if visible_here(a, fl):
                out.append((a, pi.Par(l, t)))
        ins_l = [(a, t) for a, t in tl if a.is_input]
        ins_r = [(a, t) for a, t in tr if a.is_input]
        out.extend(self._communications(outs_l, ins_r, left_outputs=True))
        out.extend(self._communications(outs_r, ins_l, left_outputs=False))
        return out

    def _communications(self, outs, ins, left_outputs: bool):
        res = []
        for a, ta in outs:
            for b, tb in ins:
                if not self.symbolic and a.subject != b.subject:
                    continue
                label = tau(prepend_match(a.m + b.m, a.subject, b.subject))
                if self.early:
                    if b.obj != a.obj:
                        continue
                    target = (ta, tb) if left_outputs else (tb, ta)
                    if a.kind is Kind.FREE_OUT:
                        res.append((label, pi.Par(*target)))
                    else:
                        res.append((label, pi.Nu(a.obj, pi.Par(*target))))
                else:
                    if a.kind is Kind.FREE_OUT:
                        tb2 = rename(tb, a.obj, b.obj)
                        target = (ta, tb2) if left_outputs else (tb2, ta)
                        res.append((label, pi.Par(*target)))
                    else:
                        tb2 = rename(tb, a.obj, b.obj)
                        target = (ta, tb2) if left_outputs else (tb2, ta)
                        res.append((label, pi.Nu(a.obj, pi.Par(*target))))
        return res

    # ---------------------------------------------------------------- root level

    def step(self, p: pi.PiTerm, pool: Iterable[Name] | None = None) -> list[PiTransition]:
        """All transitions of p with bound objects renamed canonically and
        targets deduplicated up to alpha-conversion."""
        if self.early and pool is None:
            pool = default_pool(p)
        pool = frozenset(pool or ())
        canon_bound = fresh_public(free_names(p), hint="z")
        seen = {}
        for a, t in self.trans(p, NO_NAMES, pool):
            if a.bn and a.obj != canon_bound:
                t = rename(t, canon_bound, a.obj)
                a = a.with_object(canon_bound)
            k = (a, pi.alpha_canonical(t))
            seen.setdefault(k, PiTransition(p, a, t))
        return sorted(seen.values(), key=_transition_key)

    def tau_successors(self, p: pi.PiTerm) -> list[pi.PiTerm]:
        """Targets of transitions labelled tau with an empty matching sequence."""
        seen = {}
        for a, t in self.trans(p, NO_NAMES, NO_NAMES):
            if a.is_tau:
                seen.setdefault(pi.alpha_canonical(t), t)
        return [seen[k] for k in sorted(seen, key=pi.printer_key)]


def _transition_key(tr: PiTransition):
    return (tr.action.sort_key(), pi.printer_key(tr.target))


def default_pool(p: pi.PiTerm, extra: int = 2) -> frozenset[Name]:
    """n(p) plus ``extra`` fresh public names."""
    names = set(pi.all_names(p))
    for i in range(extra):
        names.add(fresh_public(names, hint="q"))
    return frozenset(names)


# --------------------------------------------------------------------- module API


def step_late(p: pi.PiTerm, env: DefEnv) -> list[PiTransition]:
    return PiEngine(env, early=False, symbolic=False).step(p)


def step_early(p: pi.PiTerm, env: DefEnv, pool: Iterable[Name] | None = None) -> list[PiTransition]:
    return PiEngine(env, early=True, symbolic=False).step(p, pool)


def step_early_tau(p: pi.PiTerm, env: DefEnv) -> list[PiTransition]:
    eng = PiEngine(env, early=True, symbolic=False)
    return [PiTransition(p, tau(), t) for t in eng.tau_successors(p)]


def step_late_symbolic(p: pi.PiTerm, env: DefEnv) -> list[PiTransition]:
    return PiEngine(env, early=False, symbolic=True).step(p)


def step_early_symbolic(p: pi.PiTerm, env: DefEnv, pool: Iterable[Name] | None = None) -> list[PiTransition]:
    return PiEngine(env, early=True, symbolic=True).step(p, pool)


def step_early_symbolic_tau(p: pi.PiTerm, env: DefEnv) -> list[PiTransition]:
    """Every silent transition, including guarded ones ``M tau`` with M non-empty."""
    eng = PiEngine(env, early=True, symbolic=True)
    seen = {}
    for a, t in eng.trans(p, NO_NAMES, NO_NAMES):
        if a.is_silent:
            seen.setdefault((a, pi.alpha_canonical(t)), PiTransition(p, a, t))
    return sorted(seen.values(), key=_transition_key)


def reductions_pi(p: pi.PiTerm, env: DefEnv) -> list[pi.PiTerm]:
    return PiEngine(env, early=True, symbolic=False).tau_successors(p)


def rename_bound_object(tr: PiTransition, new: Name) -> PiTransition:
    """The alpha-variant of a bound-input or bound-output transition using ``new``."""
    a = tr.action
    if not a.bn:
        raise ValueError("transition has no bound object")
    if new == a.obj:
        return tr
    if new in free_names(tr.source):
        raise ValueError(f"{new} is free in the source")
    return PiTransition(tr.source, a.with_object(new), rename(tr.target, new, a.obj))


# --------------------------------------------------------------------- barbs


def barbs_pi(p: pi.PiTerm, env: DefEnv, max_unfold: int = DEFAULT_MAX_UNFOLD) -> frozenset[Barb]:
    """Barbs read off prefix subjects; no input objects are enumerated."""
    unfolded: dict = {}

    def go(q: pi.PiTerm, depth: int) -> frozenset[Barb]:
        match q:
            case pi.Nil() | pi.TauPre():
                return frozenset()
            case pi.OutPre(m, x, _, _):
                return frozenset() if m else frozenset({Barb(x, True)})
            case pi.InPre(m, x, _, _):
                return frozenset() if m else frozenset({Barb(x, False)})
            case pi.Match(x, y, b):
                return go(b, depth) if x == y else frozenset()
            case pi.Nu(y, b):
                return frozenset(bb for bb in go(b, depth) if bb.channel != y)
            case pi.Par(l, r) | pi.Sum(l, r):
                return go(l, depth) | go(r, depth)
            case pi.Ide():
                if depth >= max_unfold:
                    raise RecursionGuardError(f"unguarded recursion through {q.name}")
                if q not in unfolded:
                    unfolded[q] = env.unfold_pi(q.name, q.args)
                return go(unfolded[q], depth + 1)
        raise TypeError(f"not a pi term: {q!r}")

    return go(p, 0)


# --------------------------------------------------------------------- clash-freedom


def h_closure(p: pi.PiTerm, env: DefEnv) -> frozenset[pi.PiTerm]:
    """Least set containing p, closed under subterms and definition bodies."""
    seen: set[pi.PiTerm] = set()
    todo = [p]
    while todo:
        q = todo.pop()
        for s in pi.subterms(q):
            if s in seen:
                continue
            seen.add(s)
            if isinstance(s, pi.Ide):
                todo.append(env.pi_def(s.name).body)
    return frozenset(seen)


def rn(p: pi.PiTerm, env: DefEnv) -> frozenset[Name]:
    """Restriction-bound names: y such that some (nu y)Q lies in the closure."""
    return frozenset(q.y for q in h_closure(p, env) if isinstance(q, pi.Nu))


def is_clash_free(p: pi.PiTerm, env: DefEnv) -> tuple[bool, list[str]]:
    """Check the four clash-freedom clauses; returns (verdict, violations).

    Typing is read over user names: a name may be bound by inputs or by
    restrictions but not by both, and definition parameters are never
    restriction-bound.
    """
    h = h_closure(p, env)
    rn_cache: dict = {}

    def rn_of(q):
        if q not in rn_cache:
            rn_cache[q] = rn(q, env)
        return rn_cache[q]

    violations: list[str] = []
    all_rn = rn_of(p)
    input_bound = {q.y for q in h if isinstance(q, pi.InPre)}
    params = {x for q in h if isinstance(q, pi.Ide) for x in env.pi_def(q.name).params}
    for y in sorted(all_rn & (input_bound | params)):
        violations.append(f"ill-typed: {y} is restriction-bound and also bound by an input or a parameter")
    for q in sorted((q for q in h if isinstance(q, pi.Nu)), key=pi.printer_key):
        if q.y in rn_of(q.body):
            violations.append(f"nested restriction of {q.y} in {q}")
    for q in sorted((q for q in h if isinstance(q, pi.Par)), key=pi.printer_key):
        shared = rn_of(q.left) & rn_of(q.right)
        if shared:
            shown = ", ".join(sorted(map(str, shared)))
            violations.append(f"parallel components share restriction-bound names {shown} in {q}")
    clash = free_names(p) & all_rn
    if clash:
        violations.append("free names also restriction-bound: " + ", ".join(sorted(map(str, clash))))
    return (not violations, violations)


__all__ = [
    "PiEngine", "PiTransition", "default_pool", "step_late", "step_early", "step_early_tau",
    "step_late_symbolic", "step_early_symbolic", "step_early_symbolic_tau", "reductions_pi",
    "rename_bound_object", "barbs_pi", "h_closure", "rn", "is_clash_free",
]

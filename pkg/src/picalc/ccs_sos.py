"""Transition engines for classic CCS and for CCS_gamma with triggering.

Infinite input sums are instantiated on demand. ``trans(e, pool)`` returns every
transition of e except inputs instantiated by an input sum whose object (as
seen at e's level) lies outside ``pool``. Relabelling pulls the pool back
through preimages; parallel composition widens each side's pool by the objects
the other side can output, which is all a synchronisation can ever need. The
set of silent transitions is therefore exact for any pool, including the empty one.
"""

from __future__ import annotations

from typing import Callable, Iterable

from .actions import TAU, Action, Barb, Kind, MatchSeq, apply_to_action, map_match, prepend_match, tau
from .names import Name, Public, fresh_public
from .syntax import ccs
from .syntax.env import DEFAULT_MAX_UNFOLD, DefEnv, RecursionGuardError
from .syntax.printer import show_ccs

NO_NAMES: frozenset[Name] = frozenset()

Gamma = Callable[[Action, Action], "Action | None"]


def gamma(a: Action, b: Action) -> Action | None:
    """``gamma(M x!y, N v?y) = [x=v]MN tau``, in either argument order."""
    if a.is_input and b.is_output:
        a, b = b, a
    if not (a.kind is Kind.FREE_OUT and b.kind is Kind.FREE_IN):
        return None
    if a.obj != b.obj:
        return None
    return tau(prepend_match(a.m + b.m, a.subject, b.subject))


def handshake(a: Action, b: Action) -> Action | None:
    """Classic CCS communication: complementary labels with no guards meet in tau."""
    if a.is_input and b.is_output:
        a, b = b, a
    if not (a.kind is Kind.FREE_OUT and b.kind is Kind.FREE_IN):
        return None
    if a.m or b.m or a.subject != b.subject or a.obj != b.obj:
        return None
    return TAU


def is_synchronisation(a: Action) -> bool:
    return a.kind is Kind.SILENT and bool(a.m)


Triple = tuple[Action, ccs.CcsTerm, bool]


class CcsEngine:
    """Demand-driven transition derivation; ``communicate`` is gamma or handshake."""

    def __init__(self, env: DefEnv, communicate: Gamma = gamma, max_unfold: int = DEFAULT_MAX_UNFOLD):
        self.env = env
        self.communicate = communicate
        self.max_unfold = max_unfold
        self._cache: dict = {}
        self._depth = 0

    def trans(self, e: ccs.CcsTerm, pool: frozenset[Name] = NO_NAMES) -> tuple[Triple, ...]:
        """(action, target, instantiated) triples; see the module docstring."""
        key = (e, pool)
        hit = self._cache.get(key)
        if hit is None:
            hit = tuple(self._derive(e, pool))
            self._cache[key] = hit
        return hit

    def _derive(self, e, pool) -> list[Triple]:
        match e:
            case ccs.Nil():
                return []
            case ccs.Prefix(a, c):
                return [(a, c, False)]
            case ccs.SumList(items):
                return [t for i in items for t in self.trans(i, pool)]
            case ccs.InputSum():
                return [
                    (Action(Kind.FREE_IN, e.m, e.x, z), ccs.Relabel(e.body, e.branch_relabelling(z)), True)
                    for z in sorted(pool)
                    if not e.public_only or isinstance(z, Public)
                ]
            case ccs.Relabel(b, rel):
                pre = frozenset(x for w in pool for x in rel.preimage(w))
                return [
                    (apply_to_action(rel, a), ccs.Relabel(t, rel), inst)
                    for a, t, inst in self.trans(b, pre)
                ]
            case ccs.Restrict(b, names):
                return [
                    (a, ccs.Restrict(t, names), inst)
                    for a, t, inst in self.trans(b, pool)
                    if a.is_silent or a.subject not in names
                ]
            case ccs.Trigger(x, y, b):
                return [(a.with_match(x, y), t, inst) for a, t, inst in self.trans(b, pool)]
            case ccs.Ide(name):
                self._depth += 1
                try:
                    if self._depth > self.max_unfold:
                        raise RecursionGuardError(
                            f"unguarded recursion through {name}: more than "
                            f"{self.max_unfold} nested unfoldings"
                        )
                    return list(self.trans(self.env.ccs_def(name), pool))
                finally:
                    self._depth -= 1
            case ccs.Par(l, r):
                return self._par(l, r, pool)
        raise TypeError(f"not a CCS term: {e!r}")

    def outputs(self, e: ccs.CcsTerm) -> list[Triple]:
        return [t for t in self.trans(e, NO_NAMES) if t[0].is_output]

    def _par(self, l, r, pool) -> list[Triple]:
        outs_l, outs_r = self.outputs(l), self.outputs(r)
        objs_l = frozenset(a.obj for a, _, _ in outs_l if a.obj is not None)
        objs_r = frozenset(a.obj for a, _, _ in outs_r if a.obj is not None)
        tl = self.trans(l, pool | objs_r)
        tr = self.trans(r, pool | objs_l)
        out: list[Triple] = []
        for a, t, inst in tl:
            if not (inst and a.obj not in pool):
                out.append((a, ccs.Par(t, r), inst))
        for a, t, inst in tr:
            if not (inst and a.obj not in pool):
                out.append((a, ccs.Par(l, t), inst))
        for a, ta, _ in tl:
            if a.is_silent:
                continue
            for b, tb, _ in tr:
                if b.is_silent:
                    continue
                c = self.communicate(a, b)
                if c is not None:
                    out.append((c, ccs.Par(ta, tb), False))
        return out

    # ---------------------------------------------------------------- root level

    def step(self, e: ccs.CcsTerm, pool: Iterable[Name]) -> list[tuple[Action, ccs.CcsTerm]]:
        """All transitions with input-sum objects drawn from ``pool``."""
        return _dedupe((a, t) for a, t, _ in self.trans(e, frozenset(pool)))

    def silent(self, e: ccs.CcsTerm) -> list[tuple[Action, ccs.CcsTerm]]:
        """Every silent transition, synchronisations included."""
        return _dedupe((a, t) for a, t, _ in self.trans(e, NO_NAMES) if a.is_silent)

    def tau_successors(self, e: ccs.CcsTerm) -> list[ccs.CcsTerm]:
        return [t for a, t in self.silent(e) if a.is_tau]


def _dedupe(pairs) -> list[tuple[Action, ccs.CcsTerm]]:
    seen = {}
    for a, t in pairs:
        seen.setdefault((a, state_key(t)), (a, t))
    return [seen[k] for k in sorted(seen, key=lambda k: (k[0].sort_key(), k[1]))]


def state_key(e: ccs.CcsTerm) -> str:
    return show_ccs(ccs.normalize(e))


def default_pool(e: ccs.CcsTerm, extra: int = 2) -> frozenset[Name]:
    names = {n for n in ccs.mentioned_names(e) if isinstance(n, Public)}
    for _ in range(extra):
        names.add(fresh_public(names, hint="q"))
    return frozenset(names)


# --------------------------------------------------------------------- module API


def step_ccs(e: ccs.CcsTerm, env: DefEnv, pool: Iterable[Name] | None = None):
    """Classic CCS rules: handshake communication, restriction and relabelling."""
    if pool is None:
        pool = default_pool(e)
    return CcsEngine(env, handshake).step(e, pool)


def step_gamma_tau(e: ccs.CcsTerm, env: DefEnv) -> list[ccs.CcsTerm]:
    """The exact set of tau-successors of a CCS_gamma term."""
    return CcsEngine(env, gamma).tau_successors(e)


def step_gamma_visible(e: ccs.CcsTerm, env: DefEnv, pool: Iterable[Name]):
    """All transitions, instantiating input sums over ``pool`` only."""
    return CcsEngine(env, gamma).step(e, pool)


def step_gamma_silent(e: ccs.CcsTerm, env: DefEnv):
    return CcsEngine(env, gamma).silent(e)


# --------------------------------------------------------------------- barbs

Potential = tuple[bool, MatchSeq, Name]  # (is_output, guards, subject)


def potentials(e: ccs.CcsTerm, env: DefEnv, max_unfold: int = DEFAULT_MAX_UNFOLD) -> frozenset[Potential]:
    """Shapes (direction, guards, subject) of the visible actions e can perform now."""

    def go(q: ccs.CcsTerm, depth: int) -> frozenset[Potential]:
        match q:
            case ccs.Nil():
                return frozenset()
            case ccs.Prefix(a, _):
                if a.is_silent:
                    return frozenset()
                return frozenset({(a.is_output, a.m, a.subject)})
            case ccs.InputSum():
                return frozenset({(False, q.m, q.x)})
            case ccs.SumList(items):
                return frozenset().union(*(go(i, depth) for i in items))
            case ccs.Par(l, r):
                return go(l, depth) | go(r, depth)
            case ccs.Restrict(b, names):
                return frozenset(p for p in go(b, depth) if p[2] not in names)
            case ccs.Relabel(b, rel):
                return frozenset(
                    (o, map_match(m, rel.apply), rel.apply(s)) for o, m, s in go(b, depth)
                )
            case ccs.Trigger(x, y, b):
                return frozenset((o, prepend_match(m, x, y), s) for o, m, s in go(b, depth))
            case ccs.Ide(name):
                if depth >= max_unfold:
                    raise RecursionGuardError(f"unguarded recursion through {name}")
                return go(env.ccs_def(name), depth + 1)
        raise TypeError(f"not a CCS term: {q!r}")

    return go(e, 0)


def barbs_ccs(e: ccs.CcsTerm, env: DefEnv) -> frozenset[Barb]:
    """Barbs: unguarded visible actions on public subjects, pushed through operators."""
    return frozenset(Barb(s, o) for o, m, s in potentials(e, env) if not m and s.is_public)


__all__ = [
    "gamma", "handshake", "is_synchronisation", "CcsEngine", "state_key", "default_pool",
    "step_ccs", "step_gamma_tau", "step_gamma_visible", "step_gamma_silent", "barbs_ccs",
    "potentials",
]

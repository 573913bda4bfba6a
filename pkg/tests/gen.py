"""Seeded random generators of pi terms, definitions, CCS terms and LTSs for tests."""

from __future__ import annotations

import random

from hypothesis import strategies as st

from picalc.actions import free_in, free_out, match_seq, tau
from picalc.names import FiniteMap, Public, TAG_E, TAG_L, TAG_R, PNu, SubS
from picalc.syntax import ccs, pi
from picalc.syntax.env import DefEnv, PiDef

FREE = tuple(Public(n) for n in ("x", "y", "u", "v"))
BINDERS = tuple(Public(n) for n in ("a", "b", "y", "w"))


class PiGen:
    """Random pi terms of bounded size.

    ``mode`` is ``im`` (prefixes may carry matching sequences) or ``strict``
    (Match nodes instead). With ``idents`` the generator may call those
    identifiers, but only under a prefix, which keeps the recursion guarded.
    """

    def __init__(self, rng: random.Random, mode: str = "im", idents: dict[str, int] | None = None,
                 restriction: bool = True):
        self.rng = rng
        self.mode = mode
        self.idents = idents or {}
        self.restriction = restriction

    def term(self, size: int, scope: tuple = FREE, guarded: bool = False) -> pi.PiTerm:
        r = self.rng
        if size <= 1:
            if guarded and self.idents and r.random() < 0.4:
                return self.call(scope)
            return pi.NIL
        kinds = ["tau", "out", "out", "in", "in"]
        if size >= 3:
            kinds += ["par"] * (6 if not guarded else 2) + ["sum"]
        if self.restriction:
            kinds.append("nu")
        if self.mode == "strict":
            kinds.append("match")
        if guarded and self.idents:
            kinds.append("call")
        k = r.choice(kinds)
        if k == "call":
            return self.call(scope)
        if k in ("tau", "out", "in"):
            m = self.matches(scope) if self.mode == "im" and r.random() < 0.25 else ()
            if k == "tau":
                return pi.TauPre(m, self.term(size - 1, scope, True))
            x = r.choice(scope[:2]) if r.random() < 0.7 else r.choice(scope)
            if k == "out":
                return pi.OutPre(m, x, r.choice(scope), self.term(size - 1, scope, True))
            y = r.choice(BINDERS)
            return pi.InPre(m, x, y, self.term(size - 1, _bind(scope, y), True))
        if k == "nu":
            y = r.choice(BINDERS)
            return pi.Nu(y, self.term(size - 1, _bind(scope, y), guarded))
        if k == "match":
            return pi.Match(r.choice(scope), r.choice(scope), self.term(size - 1, scope, guarded))
        left = r.randint(1, size - 2)
        a = self.term(left, scope, guarded)
        b = self.term(size - 1 - left, scope, guarded)
        return pi.Par(a, b) if k == "par" else pi.Sum(a, b)

    def redex(self, size: int, scope: tuple = FREE) -> pi.PiTerm:
        """An output and an input on a shared channel side by side, so that a reduction is likely."""
        r = self.rng
        x, y = r.choice(scope[:2]), r.choice(scope)
        nu = 1 if self.restriction and size >= 6 and r.random() < 0.3 else 0
        left = r.randint(1, size - 4 - nu)
        b = r.choice(BINDERS)
        out = pi.OutPre((), x, y, self.term(left, scope, True))
        inp = pi.InPre((), x, b, self.term(size - 3 - nu - left, _bind(scope, b), True))
        if nu:
            out = pi.Nu(y, out)
        return pi.Par(out, inp) if r.random() < 0.5 else pi.Par(inp, out)

    def matches(self, scope):
        r = self.rng
        return match_seq(*((r.choice(scope), r.choice(scope)) for _ in range(r.randint(1, 2))))

    def call(self, scope):
        name = self.rng.choice(sorted(self.idents))
        return pi.Ide(name, tuple(self.rng.choice(scope) for _ in range(self.idents[name])))


def _bind(scope: tuple, y) -> tuple:
    return scope if y in scope else scope + (y,)


def random_pi(seed: int, max_size: int = 10, mode: str = "im", restriction: bool = True) -> pi.PiTerm:
    rng = random.Random(seed)
    size = max(rng.randint(1, max_size), rng.randint(1, max_size))
    gen = PiGen(rng, mode, restriction=restriction)
    if size >= 5 and rng.random() < 0.5:
        return gen.redex(size)
    return gen.term(size)


def random_recursive(seed: int, max_size: int = 10, mode: str = "im") -> tuple[pi.PiTerm, DefEnv]:
    """A term together with one or two guarded recursive definitions."""
    rng = random.Random(seed)
    arities = {"A": rng.randint(0, 2)}
    if rng.random() < 0.4:
        arities["B"] = rng.randint(0, 1)
    defs = []
    for name, n in sorted(arities.items()):
        params = FREE[:n]
        body = PiGen(rng, mode, arities).term(rng.randint(2, 6), params or (Public("x"),), False)
        if not params:
            # a nullary body may not mention free names: close it with restrictions
            for x in sorted(pi.free_names(body)):
                body = pi.Nu(x, body)
        defs.append(PiDef(name, params, body))
    env = DefEnv().with_pi(*defs)
    gen = PiGen(rng, mode, arities)
    root = gen.term(rng.randint(2, max_size), FREE, False)
    if not pi.identifiers(root):
        root = pi.Par(root, gen.call(FREE))
    return root, env


def pi_terms(max_size: int = 10, mode: str = "im", restriction: bool = True):
    return st.integers(0, 2**32).map(lambda s: random_pi(s, max_size, mode, restriction))


def recursive_terms(max_size: int = 10, mode: str = "im"):
    return st.integers(0, 2**32).map(lambda s: random_recursive(s, max_size, mode))


# ------------------------------------------------------------------ CCS


CCS_NAMES = tuple(Public(n) for n in ("a", "b", "c"))


def random_ccs(seed: int, size: int = 8) -> ccs.CcsTerm:
    """Random CCS_gamma terms mixing prefixes, input sums, relabellings and triggers."""
    rng = random.Random(seed)

    def go(n: int) -> ccs.CcsTerm:
        if n <= 1:
            return ccs.NIL
        k = rng.choice(["out", "out", "in", "tau", "par", "par", "sum", "rel", "res", "trig"])
        nm = lambda: rng.choice(CCS_NAMES)  # noqa: E731
        if k == "out":
            return ccs.Prefix(free_out(nm(), nm()), go(n - 1))
        if k == "tau":
            return ccs.Prefix(tau(), go(n - 1))
        if k == "in":
            if rng.random() < 0.3:
                return ccs.Prefix(free_in(nm(), nm()), go(n - 1))
            return ccs.InputSum((), nm(), nm(), go(n - 1), plain=rng.random() < 0.3)
        if k == "rel":
            rel = rng.choice([TAG_L, TAG_R, TAG_E, PNu(nm()), SubS((nm(),), (nm(),)),
                              FiniteMap(((nm(), nm()),))])
            return ccs.Relabel(go(n - 1), rel)
        if k == "res":
            return ccs.Restrict(go(n - 1), frozenset({nm()}))
        if k == "trig":
            return ccs.Trigger(nm(), nm(), go(n - 1))
        left = rng.randint(1, max(1, n - 2))
        a, b = go(left), go(max(1, n - 1 - left))
        return ccs.Par(a, b) if k == "par" else ccs.SumList((a, b))

    return go(size)


# ------------------------------------------------------------------ LTSs


def random_lts(seed: int, max_states: int = 50, labels: str = "ab"):
    """(states, edges, root) for a random finite LTS with at most ``max_states`` states."""
    rng = random.Random(seed)
    n = rng.randint(1, max_states)
    states = [f"s{i}" for i in range(n)]
    density = rng.uniform(0.5, 2.5)
    edges = {s: set() for s in states}
    for s in states:
        for _ in range(int(rng.expovariate(1 / density))):
            edges[s].add((rng.choice(labels), rng.choice(states)))
    return states, {s: frozenset(e) for s, e in edges.items()}, states[0]

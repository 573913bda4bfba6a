"""Exploration of transition systems and strong equivalence checking.

Barbed and reduction bisimilarity are decided on explored barbed transition
systems (BTSs); strong bisimilarity on explored labelled transition systems
(LTSs). Both use stratified signature refinement over the disjoint union of the
two systems: level k relates states that cannot be told apart within k moves.
When a system was cut off by a bound, only the levels up to the shallowest
unexplored depth are trustworthy, and the verdict says so.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Generic, Hashable, Iterable, Sequence, TypeVar

from .actions import Action, Barb
from .ccs_sos import CcsEngine, barbs_ccs, gamma, handshake
from .names import Name
from .pi_sos import PiEngine, barbs_pi
from .syntax import ccs, pi
from .syntax.env import DefEnv
from .syntax.printer import show_ccs, show_pi

DEFAULT_MAX_STATES = 20000
DEFAULT_MAX_DEPTH = 64
MAX_STATES_ENV = "PICALC_MAX_STATES"

T = TypeVar("T")


def default_max_states() -> int:
    value = os.environ.get(MAX_STATES_ENV)
    return int(value) if value else DEFAULT_MAX_STATES


# ------------------------------------------------------------------ systems


class System(Generic[T]):
    """Adapter giving exploration a uniform view of a calculus and its engine."""

    calculus: str

    def canon(self, term: T) -> T:
        return term

    def key(self, term: T) -> str:
        raise NotImplementedError

    def reductions(self, term: T) -> list[T]:
        raise NotImplementedError

    def barbs(self, term: T) -> frozenset[Barb]:
        raise NotImplementedError

    def transitions(self, term: T, pool: frozenset[Name]) -> list[tuple[Action, T]]:
        raise NotImplementedError


class PiSystem(System[pi.PiTerm]):
    """Early semantics by default; states are alpha-canonical terms."""

    calculus = "pi"

    def __init__(self, env: DefEnv = DefEnv(), symbolic: bool = False, early: bool = True):
        self.env = env
        self.engine = PiEngine(env, early=early, symbolic=symbolic)

    def canon(self, term):
        return pi.alpha_canonical(term)

    def key(self, term):
        return show_pi(pi.alpha_canonical(term))

    def reductions(self, term):
        return self.engine.tau_successors(term)

    def barbs(self, term):
        return barbs_pi(term, self.env)

    def transitions(self, term, pool):
        return [(tr.action, tr.target) for tr in self.engine.step(term, pool)]


class CcsSystem(System[ccs.CcsTerm]):
    """CCS_gamma with triggering, or classic CCS when ``classic`` is set."""

    calculus = "ccs"

    def __init__(self, env: DefEnv = DefEnv(), classic: bool = False):
        self.env = env
        self.engine = CcsEngine(env, handshake if classic else gamma)

    def canon(self, term):
        return ccs.normalize(term)

    def key(self, term):
        return show_ccs(ccs.normalize(term))

    def reductions(self, term):
        return self.engine.tau_successors(term)

    def barbs(self, term):
        return barbs_ccs(term, self.env)

    def transitions(self, term, pool):
        return self.engine.step(term, pool)


# ------------------------------------------------------------------ exploration


@dataclass
class Bts:
    """Explored barbed transition system: tau-reductions and barbs per state."""

    root: str
    terms: dict[str, object]
    reductions: dict[str, frozenset[str]]
    barbs: dict[str, frozenset[Barb]]
    depth: dict[str, int]
    frontier: frozenset[str]
    system: System = field(repr=False, default=None)

    @property
    def states(self) -> frozenset[str]:
        return frozenset(self.terms)

    @property
    def complete(self) -> bool:
        return not self.frontier

    @property
    def frontier_depth(self) -> int | None:
        """Depth of the shallowest unexpanded state, or None when complete."""
        return min((self.depth[s] for s in self.frontier), default=None)

    def max_tau_chain(self) -> int | None:
        """Length of the longest reduction sequence from the root (None if cyclic or incomplete)."""
        if not self.complete:
            return None
        memo: dict[str, int] = {}
        active: set[str] = set()

        def longest(s: str) -> int | None:
            if s in memo:
                return memo[s]
            if s in active:
                return None
            active.add(s)
            best = 0
            for t in self.reductions[s]:
                n = longest(t)
                if n is None:
                    return None
                best = max(best, n + 1)
            active.discard(s)
            memo[s] = best
            return best

        return longest(self.root)


@dataclass
class Lts:
    """Explored labelled transition system over a finite input pool."""

    root: str
    terms: dict[str, object]
    transitions: dict[str, frozenset[tuple[str, str]]]
    depth: dict[str, int]
    frontier: frozenset[str]
    pool: frozenset[Name]
    system: System = field(repr=False, default=None)

    @property
    def states(self) -> frozenset[str]:
        return frozenset(self.terms)

    @property
    def complete(self) -> bool:
        return not self.frontier

    @property
    def frontier_depth(self) -> int | None:
        return min((self.depth[s] for s in self.frontier), default=None)


def _explore(root, system: System, successors, max_states: int | None, max_depth: int):
    max_states = default_max_states() if max_states is None else max_states
    root = system.canon(root)
    rk = system.key(root)
    terms, depth, edges = {rk: root}, {rk: 0}, {}
    frontier: set[str] = set()
    queue = deque([rk])
    while queue:
        s = queue.popleft()
        if depth[s] >= max_depth:
            frontier.add(s)
            continue
        out = set()
        for label, t in successors(terms[s]):
            t = system.canon(t)
            k = system.key(t)
            if k not in terms:
                if len(terms) >= max_states:
                    frontier.add(s)
                    out = None
                    break
                terms[k] = t
                depth[k] = depth[s] + 1
                queue.append(k)
            out.add((label, k))
        if out is None:
            # states discovered from s so far stay recorded but s itself is unexpanded
            continue
        edges[s] = frozenset(out)
    frontier |= set(terms) - set(edges)
    return rk, terms, depth, edges, frozenset(frontier)


def explore_bts(root, system: System, max_states: int | None = None,
                max_depth: int = DEFAULT_MAX_DEPTH) -> Bts:
    """Breadth-first exploration of reductions, deduplicating states by canonical key."""
    rk, terms, depth, edges, frontier = _explore(
        root, system, lambda t: ((None, u) for u in system.reductions(t)), max_states, max_depth
    )
    reductions = {s: frozenset(k for _, k in edges.get(s, ())) for s in terms}
    barbs = {s: system.barbs(t) for s, t in terms.items()}
    return Bts(rk, terms, reductions, barbs, depth, frontier, system)


def explore_lts(root, system: System, pool: Iterable[Name], max_states: int | None = None,
                max_depth: int = DEFAULT_MAX_DEPTH) -> Lts:
    """Breadth-first exploration of all transitions, input objects drawn from ``pool``."""
    pool = frozenset(pool)
    rk, terms, depth, edges, frontier = _explore(
        root, system, lambda t: ((str(a), u) for a, u in system.transitions(t, pool)),
        max_states, max_depth,
    )
    trans = {s: edges.get(s, frozenset()) for s in terms}
    return Lts(rk, terms, trans, depth, frontier, pool, system)


def pi_bts(p: pi.PiTerm, env: DefEnv = DefEnv(), **bounds) -> Bts:
    return explore_bts(p, PiSystem(env), **bounds)


def ccs_bts(e: ccs.CcsTerm, env: DefEnv = DefEnv(), classic: bool = False, **bounds) -> Bts:
    return explore_bts(e, CcsSystem(env, classic), **bounds)


# ------------------------------------------------------------------ verdicts


@dataclass(frozen=True)
class Witness:
    """Why the left and right states differ.

    ``reason`` is ``barbs`` (the barb sets differ), or ``move``: the attacker on
    ``side`` moves to ``target`` with ``label``, and every defender answer is
    listed in ``answers`` together with the witness for the resulting pair.
    A move with no answers is unmatched.
    """

    left: str
    right: str
    reason: str
    side: str = ""
    label: str | None = None
    target: str | None = None
    answers: tuple[tuple[str, "Witness"], ...] = ()
    barbs: tuple[frozenset[Barb], frozenset[Barb]] | None = None

    @property
    def length(self) -> int:
        if self.reason == "barbs":
            return 0
        return 1 + max((w.length for _, w in self.answers), default=0)

    def path(self) -> list[str]:
        """One branch of the tree, as readable steps."""
        out, w = [], self
        while True:
            if w.reason == "barbs":
                l, r = w.barbs
                out.append(f"barbs differ: {_show_barbs(l)} vs {_show_barbs(r)}")
                return out
            step = f"{w.side} does {w.label or 'tau'} to {w.target}"
            if not w.answers:
                out.append(step + "; no answer")
                return out
            out.append(step)
            w = w.answers[0][1]

    def to_json(self) -> dict:
        d = {"left": self.left, "right": self.right, "reason": self.reason}
        if self.reason == "barbs":
            d["barbs"] = [sorted(map(str, b)) for b in self.barbs]
        else:
            d.update(side=self.side, label=self.label, target=self.target,
                     answers=[{"state": s, "witness": w.to_json()} for s, w in self.answers])
        return d


def _show_barbs(bs: Iterable[Barb]) -> str:
    return "{" + ", ".join(str(b) for b in sorted(bs, key=Barb.sort_key)) + "}"


BISIMILAR = "bisimilar"
BISIMILAR_TO_DEPTH = "bisimilar-to-depth"
NOT_BISIMILAR = "not-bisimilar"


@dataclass(frozen=True)
class GameResult:
    verdict: str
    depth: int | None = None
    states: tuple[int, int] = (0, 0)
    witness: Witness | None = None

    @property
    def holds(self) -> bool:
        return self.verdict != NOT_BISIMILAR

    @property
    def exact(self) -> bool:
        return self.verdict != BISIMILAR_TO_DEPTH

    def __str__(self):
        if self.verdict == BISIMILAR:
            return "bisimilar (exact)"
        if self.verdict == BISIMILAR_TO_DEPTH:
            return f"bisimilar up to depth {self.depth}"
        return f"not bisimilar (witness length {self.witness.length})"

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "depth": self.depth,
            "states": list(self.states),
            "witness": self.witness.to_json() if self.witness else None,
        }


# ------------------------------------------------------------------ refinement

Node = tuple[int, str]  # (which system, state key)


def _refine(nodes: Sequence[Node], level0: Callable[[Node], Hashable],
            succ: Callable[[Node], Iterable[tuple[Hashable, Node]]],
            expanded: Callable[[Node], bool], stop: Callable[[dict, int], bool],
            max_level: int | None) -> list[dict[Node, int]]:
    """Levels of the stratified bisimulation; unexpanded states get unique classes above level 0."""
    ids: dict = {}
    levels = [{n: ids.setdefault(("0", level0(n)), len(ids)) for n in nodes}]
    k = 0
    while not stop(levels[-1], k) and (max_level is None or k < max_level):
        k += 1
        prev = levels[-1]
        ids = {}
        cur = {}
        for n in nodes:
            if expanded(n):
                sig = (prev[n], frozenset((lab, prev[t]) for lab, t in succ(n)))
            else:
                sig = ("unexpanded", n)
            cur[n] = ids.setdefault(sig, len(ids))
        levels.append(cur)
        if len(set(cur.values())) == len(set(prev.values())):
            break
    return levels


def _witness(levels, k, a: Node, b: Node, succ, barbs_of, show: Callable[[Node], str]) -> Witness:
    """Witness that a and b differ at level k (and possibly below)."""
    left, right = show(a), show(b)
    while k > 0 and levels[k - 1][a] != levels[k - 1][b]:
        k -= 1
    if k == 0:
        return Witness(left, right, "barbs", barbs=(barbs_of(a), barbs_of(b)))
    prev = levels[k - 1]
    for side, att, dfd in (("left", a, b), ("right", b, a)):
        dmoves = list(succ(dfd))
        for lab, t in sorted(succ(att), key=lambda x: (str(x[0]), x[1])):
            if any(l2 == lab and prev[u] == prev[t] for l2, u in dmoves):
                continue
            answers = tuple(
                (show(u), _witness(levels, k - 1, *((t, u) if side == "left" else (u, t)), succ, barbs_of, show))
                for l2, u in sorted(dmoves, key=lambda x: (str(x[0]), x[1])) if l2 == lab
            )
            return Witness(left, right, "move", side, None if lab is None else str(lab), show(t), answers)
    raise AssertionError("states equal at the previous level have no distinguishing move")


def _game(sizes, roots: tuple[Node, Node], level0, succ, expanded, barbs_of, frontier_depths) -> GameResult:
    nodes = [n for n in sizes]
    bounded = [d for d in frontier_depths if d is not None]
    max_level = min(bounded) if bounded else None
    r1, r2 = roots

    def stop(level, k):
        return level[r1] != level[r2]

    levels = _refine(nodes, level0, succ, expanded, stop, max_level)
    k = len(levels) - 1
    counts = (sum(1 for n in nodes if n[0] == 0), sum(1 for n in nodes if n[0] == 1))
    if levels[k][r1] != levels[k][r2]:
        w = _witness(levels, k, r1, r2, succ, barbs_of, lambda n: n[1])
        return GameResult(NOT_BISIMILAR, w.length, counts, w)
    if max_level is None:
        return GameResult(BISIMILAR, None, counts)
    return GameResult(BISIMILAR_TO_DEPTH, max_level, counts)


def _bts_game(b1: Bts, b2: Bts, use_barbs: bool) -> GameResult:
    systems = (b1, b2)
    nodes = [(i, s) for i, b in enumerate(systems) for s in sorted(b.terms)]

    def level0(n):
        return systems[n[0]].barbs[n[1]] if use_barbs else ()

    def succ(n):
        return [(None, (n[0], t)) for t in sorted(systems[n[0]].reductions[n[1]])]

    def expanded(n):
        return n[1] not in systems[n[0]].frontier

    def barbs_of(n):
        return systems[n[0]].barbs[n[1]]

    return _game(nodes, ((0, b1.root), (1, b2.root)), level0, succ, expanded, barbs_of,
                 (b1.frontier_depth, b2.frontier_depth))


def check_barbed_bisim(b1: Bts, b2: Bts) -> GameResult:
    """Strong barbed bisimilarity of the two roots."""
    return _bts_game(b1, b2, use_barbs=True)


def check_reduction_bisim(b1: Bts, b2: Bts) -> GameResult:
    """Strong reduction bisimilarity: barbs are ignored."""
    return _bts_game(b1, b2, use_barbs=False)


class IncomparablePools(ValueError):
    pass


def check_strong_bisim(l1: Lts, l2: Lts) -> GameResult:
    """Strong bisimilarity of the two roots, by signature refinement on the disjoint union."""
    if l1.pool != l2.pool:
        raise IncomparablePools("LTSs were explored over different input pools")
    systems = (l1, l2)
    nodes = [(i, s) for i, l in enumerate(systems) for s in sorted(l.terms)]

    def succ(n):
        return [(lab, (n[0], t)) for lab, t in sorted(systems[n[0]].transitions[n[1]])]

    def expanded(n):
        return n[1] not in systems[n[0]].frontier

    return _game(nodes, ((0, l1.root), (1, l2.root)), lambda n: (), succ, expanded,
                 lambda n: frozenset(), (l1.frontier_depth, l2.frontier_depth))


def bisimulation_classes(lts: Lts) -> list[frozenset[str]]:
    """Strong bisimilarity classes of one explored LTS (complete systems only)."""
    nodes = [(0, s) for s in sorted(lts.terms)]
    levels = _refine(
        nodes, lambda n: (),
        lambda n: [(lab, (0, t)) for lab, t in sorted(lts.transitions[n[1]])],
        lambda n: n[1] not in lts.frontier, lambda level, k: False, None,
    )
    blocks: dict[int, set[str]] = {}
    for n, c in levels[-1].items():
        blocks.setdefault(c, set()).add(n[1])
    return sorted((frozenset(b) for b in blocks.values()), key=lambda b: sorted(b))


# ------------------------------------------------------------------ replay


class ReplayError(AssertionError):
    pass


def replay(w: Witness, left: System, right: System, terms: tuple[object, object],
           use_barbs: bool = True) -> None:
    """Re-derive every step of a reduction-game witness with the engines; raise if any fails."""
    p, q = terms
    if left.key(p) != w.left or right.key(q) != w.right:
        raise ReplayError("witness does not start at the given states")
    if w.reason == "barbs":
        if not use_barbs:
            raise ReplayError("barb leaf in a reduction game")
        if left.barbs(p) == right.barbs(q):
            raise ReplayError(f"barbs agree at {w.left} and {w.right}")
        return
    att_sys, att, dfd_sys, dfd = (left, p, right, q) if w.side == "left" else (right, q, left, p)
    moves = {att_sys.key(t): t for t in att_sys.reductions(att)}
    if w.target not in moves:
        raise ReplayError(f"{w.target} is not a reduct of the attacker")
    answers = {dfd_sys.key(u): u for u in dfd_sys.reductions(dfd)}
    listed = {s for s, _ in w.answers}
    if listed != set(answers):
        raise ReplayError("the witness does not cover every defender answer")
    t = moves[w.target]
    for s, sub in w.answers:
        pair = (t, answers[s]) if w.side == "left" else (answers[s], t)
        replay(sub, left, right, pair, use_barbs)


# ------------------------------------------------------------------ probes


def weak_barbs(root, system: System, k: int) -> frozenset[Barb]:
    """Union of the barbs of every state reachable in at most k reductions."""
    seen = {system.key(root)}
    layer = [root]
    out = set(system.barbs(root))
    for _ in range(k):
        nxt = []
        for t in layer:
            for u in system.reductions(t):
                key = system.key(u)
                if key not in seen:
                    seen.add(key)
                    nxt.append(u)
                    out |= system.barbs(u)
        layer = nxt
    return frozenset(out)


def weak_barb_probe(e: ccs.CcsTerm, env: DefEnv, k: int) -> frozenset[Barb]:
    return weak_barbs(e, CcsSystem(env), k)


# ------------------------------------------------------------------ DOT


def _dot_id(key: str, index: dict[str, int]) -> str:
    return f"s{index[key]}"


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def bts_to_dot(b: Bts, name: str = "bts") -> str:
    index = {s: i for i, s in enumerate(sorted(b.terms, key=lambda s: (b.depth[s], s)))}
    lines = [f"digraph {name} {{", "  node [shape=box];"]
    for s in index:
        label = s + "\\n" + _show_barbs(b.barbs[s])
        style = ", style=dashed" if s in b.frontier else ""
        peri = ", peripheries=2" if s == b.root else ""
        lines.append(f"  {_dot_id(s, index)} [label={_quote(label)}{style}{peri}];")
    for s in index:
        for t in sorted(b.reductions[s], key=index.get):
            lines.append(f"  {_dot_id(s, index)} -> {_dot_id(t, index)} [style=bold];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def lts_to_dot(l: Lts, name: str = "lts") -> str:
    index = {s: i for i, s in enumerate(sorted(l.terms, key=lambda s: (l.depth[s], s)))}
    lines = [f"digraph {name} {{", "  node [shape=box];"]
    for s in index:
        style = ", style=dashed" if s in l.frontier else ""
        peri = ", peripheries=2" if s == l.root else ""
        lines.append(f"  {_dot_id(s, index)} [label={_quote(s)}{style}{peri}];")
    for s in index:
        for lab, t in sorted(l.transitions[s], key=lambda e: (index[e[1]], e[0])):
            bold = ", style=bold" if lab == "tau" else ""
            lines.append(f"  {_dot_id(s, index)} -> {_dot_id(t, index)} [label={_quote(lab)}{bold}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


__all__ = [
    "DEFAULT_MAX_STATES", "DEFAULT_MAX_DEPTH", "MAX_STATES_ENV", "default_max_states",
    "System", "PiSystem", "CcsSystem", "Bts", "Lts", "explore_bts", "explore_lts", "pi_bts",
    "ccs_bts", "Witness", "GameResult", "BISIMILAR", "BISIMILAR_TO_DEPTH", "NOT_BISIMILAR",
    "check_barbed_bisim", "check_reduction_bisim", "check_strong_bisim", "IncomparablePools",
    "bisimulation_classes", "replay", "ReplayError", "weak_barbs", "weak_barb_probe",
    "bts_to_dot", "lts_to_dot",
]

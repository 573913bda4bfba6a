"""Named, self-checking scenarios replayed by ``picalc replay``."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .ccs_sos import barbs_ccs, step_gamma_tau, step_gamma_visible
from .encode import translate_E, translate_T
from .equiv import (
    CcsSystem, PiSystem, check_barbed_bisim, check_reduction_bisim, check_strong_bisim,
    ccs_bts, explore_lts, pi_bts, replay, weak_barb_probe,
)
from .names import Private, Public
from .pi_sos import barbs_pi, default_pool
from .syntax import parse_ccs, parse_pi

EX1 = "x(y).'y<w>.0"
EX2 = "x(y).'y<w>.0 | 'x<u>.u(v).0"
EX3 = "nu x. x(y).0 | nu x. 'x<u>.0"
EX4 = "nu y. 'x<y>.'y<w>.0 | x(u).u(v).0"
EX5 = "nu y. 'x<y>. nu y. 'y<w>.0 | x(u).u(v).0"
EX6 = "x(y).x(w).'w<u>.0 | 'x<v>.'x<y>.y(v).0"
LOST_REDUCTION = "'x<v>.0 | x(y).('y<u>.0 | v(w).0)"
WEAK_BARBS_DEFS = "A := x0!y.0 + tau.(A[shift x])"
WEAK_BARBS_INPUT_DEFS = "A := x0?y.0 + tau.(A[shift x])"
# The four instances of x!v | x(y).(R | 0 | 0) used against reduction-preserving translations.
PI_PA = {
    "'y<z>.0 | v(w).0": 2,
    "0 | v(w).0": 1,
    "'y<z>.0 | 0": 1,
    "tau.0": 2,
}


@dataclass
class Report:
    name: str
    checks: list[tuple[str, bool]] = field(default_factory=list)

    def check(self, description: str, ok: bool) -> None:
        self.checks.append((description, bool(ok)))

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.checks)

    def lines(self) -> list[str]:
        return [f"[{'ok' if ok else 'FAIL'}] {self.name}: {d}" for d, ok in self.checks]


def _pair(src: str):
    p, env = parse_pi(src, "im")
    e, cenv = translate_T(p, env, "im")
    return p, env, e, cenv


def _tau_pair(report: Report, src: str, chain: int | None) -> tuple:
    p, env, e, cenv = _pair(src)
    b1, b2 = pi_bts(p, env), ccs_bts(e, cenv)
    if chain is not None:
        report.check(f"the pi process has a longest reduction chain of {chain}", b1.max_tau_chain() == chain)
        report.check(f"its translation has a longest reduction chain of {chain}", b2.max_tau_chain() == chain)
    r = check_barbed_bisim(b1, b2)
    report.check(f"barbed bisimilar to its translation: {r}", r.holds and r.exact)
    return p, env, e, cenv, b1, b2


def ex1() -> Report:
    rep = Report("ex1")
    p, env, e, cenv = _pair(EX1)
    rep.check("translation is a single input sum", str(e) == "sum z. x?z.(y!w.0)[z/y]")
    z = Public("z1")
    steps = step_gamma_visible(e, cenv, {z})
    rep.check("instantiating z1 yields one input on x", [str(a) for a, _ in steps] == ["x?z1"])
    rep.check("barbs agree", barbs_pi(p, env) == barbs_ccs(e, cenv))
    _tau_pair(rep, EX1, 0)
    return rep


def ex2() -> Report:
    rep = Report("ex2")
    p, env, e, cenv, *_ = _tau_pair(rep, EX2, 2)
    pool = default_pool(p, 1)
    r = check_strong_bisim(explore_lts(p, PiSystem(env, symbolic=True), pool),
                           explore_lts(e, CcsSystem(cenv), pool))
    rep.check(f"strongly bisimilar over the pool n(P)+1: {r}", r.holds and r.exact)
    return rep


def ex3() -> Report:
    rep = Report("ex3")
    p, env, e, cenv, b1, b2 = _tau_pair(rep, EX3, 0)
    rep.check("no barbs on either side", not barbs_pi(p, env) and not barbs_ccs(e, cenv))
    labels = {a for a, _ in step_gamma_visible(e, cenv, {Public("z")}) if not a.is_silent}
    rep.check("visible actions of the translation have private subjects only",
              bool(labels) and all(isinstance(a.subject, Private) for a in labels))
    return rep


def ex4() -> Report:
    rep = Report("ex4")
    _tau_pair(rep, EX4, 2)
    return rep


def ex5() -> Report:
    rep = Report("ex5")
    _tau_pair(rep, EX5, 1)
    return rep


def ex6() -> Report:
    rep = Report("ex6")
    p, env, *_ = _tau_pair(rep, EX6, 3)
    e, cenv = translate_T(p, env, "im", plain_inputs=True)
    r = check_barbed_bisim(pi_bts(p, env), ccs_bts(e, cenv))
    rep.check(f"the variant without spare names fails: {r}", not r.holds)
    return rep


def ex7() -> Report:
    rep = Report("ex7")
    p, env, e, cenv = _pair(EX6)
    trace, cur = [], e
    for _ in range(3):
        nxt = step_gamma_tau(cur, cenv)
        trace.append(len(nxt))
        cur = nxt[0] if nxt else cur
    rep.check("the translation reduces three times in a row", trace == [1, 1, 1])
    rep.check("and then stops", not step_gamma_tau(cur, cenv))
    return rep


def lost_reduction() -> Report:
    rep = Report("bb98")
    p, env, *_ = _tau_pair(rep, LOST_REDUCTION, 2)
    enc = translate_E(p)
    bE = ccs_bts(enc, env, classic=True)
    rep.check("the pair-action encoding has a longest reduction chain of 1", bE.max_tau_chain() == 1)
    r = check_reduction_bisim(pi_bts(p, env), bE)
    rep.check(f"the pair-action encoding is not reduction bisimilar: {r}",
              not r.holds and r.witness.length == 2)
    try:
        replay(r.witness, PiSystem(env), CcsSystem(env, classic=True), (p, enc), use_barbs=False)
        rep.check("the witness replays", True)
    except AssertionError:
        rep.check("the witness replays", False)
    return rep


def ccs_barbs(k: int = 10) -> Report:
    rep = Report("ccs-barbs")
    a, env = parse_ccs("A", WEAK_BARBS_DEFS)
    barbs = weak_barb_probe(a, env, k)
    want = {f"'x{i}" for i in range(k + 1)}
    rep.check(f"{len(barbs)} distinct weak barbs within {k} reductions", {str(b) for b in barbs} == want)
    a, env = parse_ccs("A", WEAK_BARBS_INPUT_DEFS)
    barbs = weak_barb_probe(a, env, k)
    rep.check(f"input variant: {len(barbs)} distinct weak barbs on names",
              {str(b) for b in barbs} == {f"x{i}" for i in range(k + 1)})
    return rep


def pi_pa() -> Report:
    rep = Report("pi-pa")
    for r_src, chain in PI_PA.items():
        src = f"'x<v>.0 | x(y).(({r_src}) | 0 | 0)"
        p, env, e, cenv = _pair(src)
        b1, b2 = pi_bts(p, env), ccs_bts(e, cenv)
        rep.check(f"R = {r_src}: longest reduction chain {chain}", b1.max_tau_chain() == chain)
        res = check_reduction_bisim(b1, b2)
        rep.check(f"R = {r_src}: translation reduction bisimilar", res.holds and res.exact)
    return rep


FIXTURES: dict[str, Callable[..., Report]] = {
    "ex1": ex1, "ex2": ex2, "ex3": ex3, "ex4": ex4, "ex5": ex5, "ex6": ex6, "ex7": ex7,
    "bb98": lost_reduction, "ccs-barbs": ccs_barbs, "pi-pa": pi_pa,
}


def run_fixture(name: str, k: int = 10) -> Report:
    if name == "ccs-barbs":
        return ccs_barbs(k)
    return FIXTURES[name]()

import json

import pytest
from hypothesis import given, settings, strategies as st

from gen import random_lts, recursive_terms
from oracles import naive_bisimilar
from picalc.encode import translate_E, translate_T
from picalc.equiv import (
    BISIMILAR, BISIMILAR_TO_DEPTH, MAX_STATES_ENV, NOT_BISIMILAR, CcsSystem, IncomparablePools, Lts,
    PiSystem, ReplayError, Witness, bisimulation_classes, bts_to_dot, ccs_bts, check_barbed_bisim,
    check_reduction_bisim, check_strong_bisim, default_max_states, explore_bts, explore_lts,
    lts_to_dot, pi_bts, replay, weak_barbs,
)
from picalc.names import Public
from picalc.syntax import ccs_term, parse_pi, pi_term
from picalc.syntax.env import EMPTY_ENV

E = EMPTY_ENV


def bts(src):
    return pi_bts(pi_term(src, "im"), E)


def make_lts(states, edges, root):
    return Lts(root, {s: s for s in states}, edges, {s: 0 for s in states}, frozenset(), frozenset())


def ccs_lts(src, pool=()):
    return explore_lts(ccs_term(src), CcsSystem(E, classic=True), pool)


def test_basic_verdicts():
    assert check_barbed_bisim(bts("0"), bts("0")).verdict == BISIMILAR
    r = check_barbed_bisim(bts("tau.0"), bts("tau.tau.0"))
    assert r.verdict == NOT_BISIMILAR and r.witness.length == 2
    assert check_reduction_bisim(bts("'x<y>.0"), bts("'v<w>.0")).holds
    r = check_barbed_bisim(bts("'x<y>.0"), bts("'v<w>.0"))
    assert not r.holds and r.witness.reason == "barbs" and r.witness.length == 0
    assert check_strong_bisim(ccs_lts("a!b.0"), ccs_lts("a!b.0 + a!b.0")).verdict == BISIMILAR
    r = check_strong_bisim(ccs_lts("a!b.0"), ccs_lts("a!b.a!b.0"))
    assert not r.holds and r.witness.length == 2


def test_incomparable_pools():
    with pytest.raises(IncomparablePools):
        check_strong_bisim(ccs_lts("0", {Public("a")}), ccs_lts("0"))


def test_depth_bounded_verdict_and_monotonicity():
    p, env = parse_pi("A", "im", "A := tau.A")
    q, env2 = parse_pi("B", "im", "B := tau.tau.B")
    r = check_barbed_bisim(pi_bts(p, env), pi_bts(q, env2))
    assert r.verdict == BISIMILAR and r.exact
    p, env = parse_pi("C(x)", "im", "C(x) := nu y. tau.('y<x>.0 | C(y))")
    results = [check_barbed_bisim(pi_bts(p, env, max_depth=d), pi_bts(p, env, max_depth=d))
               for d in (2, 4, 8)]
    assert [r.verdict for r in results] == [BISIMILAR_TO_DEPTH] * 3
    assert [r.depth for r in results] == [2, 4, 8]


def test_depth_bounded_separation_is_definite():
    p, env = parse_pi("C(x)", "im", "C(x) := nu y. tau.('y<x>.0 | C(y))")
    q = pi_term("'x<x>.0")
    r = check_barbed_bisim(pi_bts(p, env, max_depth=3), pi_bts(q, E))
    assert r.verdict == NOT_BISIMILAR


def test_max_states_from_environment(monkeypatch):
    monkeypatch.setenv(MAX_STATES_ENV, "3")
    assert default_max_states() == 3
    p, env = parse_pi("C(x)", "im", "C(x) := nu y. tau.('y<x>.0 | C(y))")
    b = pi_bts(p, env)
    assert len(b.states) == 3 and not b.complete
    monkeypatch.delenv(MAX_STATES_ENV)
    assert default_max_states() == 20000


def test_witness_replay_and_json():
    src = "'x<v>.0 | x(y).('y<u>.0 | v(w).0)"
    p = pi_term(src, "im")
    enc = translate_E(p)
    r = check_reduction_bisim(pi_bts(p, E), ccs_bts(enc, E, classic=True))
    assert not r.holds and r.witness.length == 2
    replay(r.witness, PiSystem(E), CcsSystem(E, classic=True), (p, enc), use_barbs=False)
    with pytest.raises(ReplayError):
        replay(r.witness, PiSystem(E), CcsSystem(E, classic=True), (p, translate_E(pi_term("0"))), use_barbs=False)
    doc = json.loads(json.dumps(r.to_json()))
    assert set(doc) == {"verdict", "depth", "states", "witness"}
    assert doc["witness"]["reason"] == "move" and r.witness.path()
    fake = Witness(r.witness.left, r.witness.right, "barbs", barbs=(frozenset(), frozenset()))
    with pytest.raises(ReplayError):
        replay(fake, PiSystem(E), CcsSystem(E, classic=True), (p, enc))


def test_translation_is_barbed_bisimilar_on_an_example():
    p = pi_term("x(y).'y<w>.0 | 'x<u>.u(v).0", "im")
    e, env = translate_T(p, E, "im")
    r = check_barbed_bisim(pi_bts(p, E), ccs_bts(e, env))
    assert r.verdict == BISIMILAR


def test_weak_barbs_and_dot():
    b = bts("tau.'x<y>.0 | v(w).0")
    assert {str(x) for x in weak_barbs(pi_term("tau.'x<y>.0", "im"), PiSystem(E), 1)} == {"'x"}
    assert weak_barbs(pi_term("tau.'x<y>.0", "im"), PiSystem(E), 0) == frozenset()
    dot = bts_to_dot(b)
    assert dot.startswith("digraph bts {") and dot.count("->") == 1 and "peripheries=2" in dot
    dot = lts_to_dot(ccs_lts("a!b.0 + tau.0"))
    assert dot.count("->") == 2 and 'label="a!b"' in dot


def test_bisimulation_classes():
    l = ccs_lts("a!b.0 + a!b.a!b.0")
    classes = bisimulation_classes(l)
    assert sum(len(c) for c in classes) == len(l.states)
    assert len(classes) == 3


# ------------------------------------------------------------------ properties


def _valid_lts_witness(w, e1, e2):
    """Check a strong-bisimulation witness tree directly against two edge maps."""
    if w.reason == "barbs":
        return False
    att, dfd = (e1, e2) if w.side == "left" else (e2, e1)
    a, d = (w.left, w.right) if w.side == "left" else (w.right, w.left)
    if (w.label, w.target) not in att[a]:
        return False
    answers = {t for lab, t in dfd[d] if lab == w.label}
    if {s for s, _ in w.answers} != answers:
        return False
    return all(_valid_lts_witness(sub, e1, e2) for _, sub in w.answers)


@settings(max_examples=100)
@given(st.integers(0, 2**32), st.integers(0, 2**32))
def test_refinement_agrees_with_naive_fixpoint(s1, s2):
    st1, ed1, r1 = random_lts(s1, 12)
    st2, ed2, r2 = random_lts(s2, 12)
    res = check_strong_bisim(make_lts(st1, ed1, r1), make_lts(st2, ed2, r2))
    assert res.exact
    assert res.holds == naive_bisimilar(ed1, r1, ed2, r2)
    if not res.holds:
        assert _valid_lts_witness(res.witness, ed1, ed2)


@settings(max_examples=60)
@given(st.integers(0, 2**32))
def test_bisimilarity_is_reflexive_and_symmetric(seed):
    st1, ed1, r1 = random_lts(seed, 15)
    st2, ed2, r2 = random_lts(seed + 1, 15)
    a, b = make_lts(st1, ed1, r1), make_lts(st2, ed2, r2)
    assert check_strong_bisim(a, a).holds
    assert check_strong_bisim(a, b).holds == check_strong_bisim(b, a).holds


@settings(max_examples=60)
@given(st.integers(0, 2**32))
def test_classes_are_bisimulations(seed):
    states, edges, root = random_lts(seed, 15)
    lts = make_lts(states, edges, root)
    cls = {s: i for i, c in enumerate(bisimulation_classes(lts)) for s in c}
    for c in bisimulation_classes(lts):
        sigs = {frozenset((lab, cls[t]) for lab, t in edges[s]) for s in c}
        assert len(sigs) == 1
        p = next(iter(c))
        for q in c:
            assert naive_bisimilar(edges, p, edges, q)


@settings(max_examples=50, deadline=None)
@given(recursive_terms(8, "im"))
def test_translated_recursive_terms_are_bisimilar(pe):
    p, env = pe
    e, cenv = translate_T(p, env, "im")
    r = check_barbed_bisim(pi_bts(p, env), ccs_bts(e, cenv))
    assert r.holds


def test_depth_never_changes_a_definite_verdict():
    p, env = parse_pi("C(x)", "im", "C(x) := nu y. tau.('y<x>.0 | C(y))")
    q, env2 = parse_pi("D(x)", "im", "D(x) := nu y. tau.('x<y>.0 | D(y))")
    verdicts = [check_barbed_bisim(pi_bts(p, env, max_depth=d), pi_bts(q, env2, max_depth=d))
                for d in (3, 5, 7)]
    assert all(not v.holds for v in verdicts)
    assert all(v.witness.length == verdicts[0].witness.length for v in verdicts)

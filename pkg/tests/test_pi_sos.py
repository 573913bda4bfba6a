import pytest
from hypothesis import given, settings

from gen import pi_terms
from picalc.actions import Kind, bound_in, bound_out, free_in, free_out, match_seq, tau
from picalc.names import Public
from picalc.pi_sos import (
    barbs_pi, default_pool, h_closure, is_clash_free, rename_bound_object, rn, step_early,
    step_early_symbolic, step_early_symbolic_tau, step_early_tau, step_late, step_late_symbolic,
)
from picalc.syntax import parse_pi, pi, pi_term
from picalc.syntax.env import EMPTY_ENV, RecursionGuardError

x, y, z, u, v, w = (Public(n) for n in "xyzuvw")
E = EMPTY_ENV


def labels(trs):
    return sorted(str(t.action) for t in trs)


def canon(trs):
    return {(t.action, pi.alpha_canonical(t.target)) for t in trs}


def test_late_examples():
    assert [(t.action, t.target) for t in step_late(pi_term("tau.0"), E)] == [(tau(), pi.NIL)]
    trs = step_late(pi_term("x!y.0 | x(z).z!w.0"), E)
    assert (tau(), pi_term("0 | y!w.0")) in {(t.action, t.target) for t in trs}
    trs = step_late(pi_term("nu y. x!y.y!w.0"), E)
    assert [t.action.kind for t in trs] == [Kind.BOUND_OUT]
    assert trs[0].action.subject == x


def test_late_input_uses_one_canonical_bound_name():
    trs = step_late(pi_term("x(y).y!w.0"), E)
    assert len(trs) == 1 and trs[0].action == bound_in(x, z)
    assert trs[0].target == pi_term("z!w.0")
    other = rename_bound_object(trs[0], v)
    assert other.action == bound_in(x, v) and other.target == pi_term("v!w.0")
    with pytest.raises(ValueError):
        rename_bound_object(trs[0], w)


def test_close_and_scope_extrusion():
    p = pi_term("nu y. x!y.y!w.0 | x(u).u(v).0")
    (t1,) = step_early_tau(p, E)
    assert isinstance(t1.target, pi.Nu)
    (t2,) = step_early_tau(t1.target, E)
    assert not step_early_tau(t2.target, E)


def test_rule_alpha_is_folded_into_restriction():
    p = pi_term("x!y.0 | nu y. x(z).0")
    assert len(step_early_tau(p, E)) == 1
    assert tau() in {t.action for t in step_late(p, E)}


def test_early_input_instantiates_the_pool():
    trs = step_early(pi_term("x(y).0"), E, {x, v})
    assert labels(trs) == ["x?v", "x?x"]


def test_early_two_step_chain():
    p = pi_term("x!v.0 | x(y).(y!u.0 | v(w).0)")
    (t1,) = step_early_tau(p, E)
    assert pi.alpha_eq(t1.target, pi_term("0 | (v!u.0 | v(w).0)"))
    assert len(step_early_tau(t1.target, E)) == 1


def test_symbolic_examples():
    assert [(t.action, t.target) for t in step_late_symbolic(pi_term("[x=y]tau.0"), E)] == [
        (tau(match_seq((x, y))), pi.NIL)]
    trs = step_late_symbolic(pi_term("x!y.0 | v(z).0"), E)
    assert (tau(match_seq((x, v))), pi_term("0 | 0")) in {(t.action, t.target) for t in trs}
    im = pi_term("[x=x]tau.0", "im")
    assert [t.action for t in step_late_symbolic(im, E)] == [tau()]
    assert [str(t.action) for t in step_early_symbolic_tau(pi_term("y!u.0 | v(w).0"), E)] == ["[y=v]tau"]
    assert step_early_tau(pi_term("y!u.0 | v(w).0"), E) == []
    assert [t.action for t in step_early_symbolic_tau(pi_term("v!u.0 | v(w).0"), E)] == [tau()]
    assert step_early_symbolic(pi.NIL, E) == []


def test_plain_engines_ignore_guarded_prefixes():
    p = pi_term("[x=y]tau.0", "im")
    assert step_late(p, E) == [] and step_early(p, E) == []


def test_barbs_examples():
    assert {str(b) for b in barbs_pi(pi_term("x!y.0 | v(w).0"), E)} == {"'x", "v"}
    assert barbs_pi(pi_term("nu x. x!y.0"), E) == frozenset()
    guarded = pi_term("[x=y]u!v.0", "im")
    assert barbs_pi(guarded, E) == frozenset()
    assert all(t.action.observation() is None for t in step_early_symbolic(guarded, E))


def test_recursion():
    p, env = parse_pi("A(x)", defs_text="A(a) := a!a.A(a)")
    (t,) = step_late(p, env)
    assert t.action == free_out(x, x) and t.target == pi.Ide("A", (x,))
    p, env = parse_pi("B", defs_text="B := B | tau.0")
    with pytest.raises(RecursionGuardError):
        step_late(p, env)
    with pytest.raises(RecursionGuardError):
        barbs_pi(p, env)


def test_clash_freedom():
    assert rn(pi_term("nu y. (x!y.0 | nu z. z!w.0)"), E) == {y, z}
    ok, why = is_clash_free(pi_term("nu y. x!y.0 | nu y. x(u).0"), E)
    assert not ok and any("share" in s for s in why)
    assert is_clash_free(pi_term("x!y.0"), E) == (True, [])
    assert is_clash_free(pi_term("nu y. x!y.y!w.0 | x(u).u(v).0"), E)[0]
    assert not is_clash_free(pi_term("nu y. nu y. 0"), E)[0]
    assert not is_clash_free(pi_term("y!y.0 | nu y. 0"), E)[0]
    assert not is_clash_free(pi_term("x(y).0 | nu y. 0"), E)[0]


def test_h_closure_terminates_on_recursion():
    p, env = parse_pi("A(x)", defs_text="A(a) := nu b. a!b.A(b) | B\nB := tau.B")
    h = h_closure(p, env)
    assert pi.Ide("B") in h and rn(p, env) == {Public("b")}


# ------------------------------------------------------------------ properties


@settings(max_examples=150)
@given(pi_terms(10, "strict"))
def test_early_agrees_with_late(p):
    pool = default_pool(p)
    early, late = step_early(p, E, pool), step_late(p, E)
    keep = (Kind.SILENT, Kind.FREE_OUT, Kind.BOUND_OUT)
    assert canon(t for t in early if t.action.kind in keep) == canon(t for t in late if t.action.kind in keep)
    # every late bound input instantiates to the early free inputs, and nothing else exists
    expected = set()
    for t in late:
        if t.action.kind is Kind.BOUND_IN:
            for n in pool:
                a = free_in(t.action.subject, n)
                expected.add((a, pi.alpha_canonical(pi.rename(t.target, n, t.action.obj))))
    assert canon(t for t in early if t.action.kind is Kind.FREE_IN) == expected


@settings(max_examples=150)
@given(pi_terms(10, "im"))
def test_symbolic_restricts_to_early(p):
    pool = default_pool(p)
    sym = [t for t in step_early_symbolic(p, E, pool) if not t.action.m]
    assert canon(sym) == canon(step_early(p, E, pool))
    late_sym = [t for t in step_late_symbolic(p, E) if not t.action.m]
    assert canon(late_sym) == canon(step_late(p, E))


@settings(max_examples=150)
@given(pi_terms(10, "im"))
def test_tau_engine_is_exact(p):
    assert canon(step_early_tau(p, E)) == canon(t for t in step_early(p, E) if t.action.is_tau)


@settings(max_examples=150)
@given(pi_terms(10, "im"))
def test_free_names_do_not_grow(p):
    fp = pi.free_names(p)
    for t in step_early_symbolic(p, E) + step_late_symbolic(p, E):
        assert pi.free_names(t.target) <= fp | t.action.n


@settings(max_examples=150)
@given(pi_terms(10, "strict"))
def test_barbs_agree_across_engines(p):
    b = barbs_pi(p, E)
    assert barbs_pi(pi.alpha_canonical(p), E) == b
    for trs in (step_late(p, E), step_early(p, E), step_late_symbolic(p, E), step_early_symbolic(p, E)):
        assert {t.action.observation() for t in trs} - {None} == b

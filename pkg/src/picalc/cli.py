"""Command-line front end: ``picalc parse | translate | lts | check | replay``.

Exit codes: 0 success or passed check, 1 failed check (or a malformed file for
``parse``), 2 usage, input or definition errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .encode import TranslationError, translate_E, translate_T
from .equiv import (
    DEFAULT_MAX_DEPTH, CcsSystem, PiSystem, check_barbed_bisim, check_reduction_bisim,
    check_strong_bisim, explore_bts, explore_lts, lts_to_dot,
)
from .fixtures import FIXTURES, run_fixture
from .names import BadName, parse_name
from .pi_sos import default_pool
from .syntax import ParseError, ccs, parse_ccs, parse_pi, pi, show_ccs, show_pi
from .syntax.env import DefEnv, DefinitionError, RecursionGuardError

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2
PI_SEMANTICS = ("late", "early", "late-sym", "early-sym")
CCS_SEMANTICS = ("ccs", "ccs-gamma")


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _is_ccs_file(path: str) -> bool:
    return path.endswith(".ccs")


def _load_pi(path: str, mode: str, defs: str | None) -> tuple[pi.PiTerm, DefEnv]:
    return parse_pi(_read(path), mode, _read(defs) if defs else "")


def _load_ccs(path: str, defs: str | None) -> tuple[ccs.CcsTerm, DefEnv]:
    return parse_ccs(_read(path), _read(defs) if defs else "")


def _pool(text: str | None):
    if not text:
        return None
    try:
        return frozenset(parse_name(n.strip()) for n in text.split(",") if n.strip())
    except BadName as exc:
        raise UsageError(str(exc)) from None


def _show_defs(env: DefEnv, unicode: bool) -> list[str]:
    return [f"{a} := {show_ccs(body, unicode)}" for a, body in sorted(env.ccs_defs.items())]


# ------------------------------------------------------------------ commands


def cmd_parse(args) -> int:
    try:
        if args.calculus == "ccs" or _is_ccs_file(args.file):
            e, env = _load_ccs(args.file, args.defs)
            lines = _show_defs(env, args.unicode) + [show_ccs(e, args.unicode)]
        else:
            p, env = _load_pi(args.file, args.mode, args.defs)
            lines = [
                f"{d.name}({', '.join(map(str, d.params))}) := {show_pi(d.body, args.unicode)}"
                for _, d in sorted(env.pi_defs.items())
            ] + [show_pi(p, args.unicode)]
    except (ParseError, DefinitionError) as exc:
        print(f"{args.file}: {exc}", file=sys.stderr)
        return EXIT_FAILED
    print("\n".join(lines))
    return EXIT_OK


def cmd_translate(args) -> int:
    p, env = _load_pi(args.file, args.mode, args.defs)
    if args.encoder == "E":
        out = [show_ccs(translate_E(p), args.unicode)]
    else:
        e, cenv = translate_T(p, env, args.mode)
        out = _show_defs(cenv, args.unicode) + [show_ccs(e, args.unicode)]
    print("\n".join(out))
    return EXIT_OK


def cmd_lts(args) -> int:
    pool = _pool(args.pool)
    if args.semantics in CCS_SEMANTICS:
        term, env = _load_ccs(args.file, args.defs)
        system = CcsSystem(env, classic=args.semantics == "ccs")
        pool = pool if pool is not None else frozenset(
            n for n in ccs.mentioned_names(term) if n.is_public
        )
    else:
        term, env = _load_pi(args.file, args.mode, args.defs)
        system = PiSystem(env, symbolic=args.semantics.endswith("sym"),
                          early=args.semantics.startswith("early"))
        pool = pool if pool is not None else default_pool(term)
    lts = explore_lts(term, system, pool, max_depth=args.depth)
    for s in sorted(lts.terms, key=lambda s: (lts.depth[s], s)):
        print(s)
        for lab, t in sorted(lts.transitions[s]):
            print(f"  --{lab}-> {t}")
        if s in lts.frontier:
            print("  (unexpanded)")
    if args.dot:
        Path(args.dot).write_text(lts_to_dot(lts), encoding="utf-8")
    return EXIT_OK


def _systems_for_check(args):
    """(left term, left system, right term, right system) for ``check``."""
    if _is_ccs_file(args.file):
        left, lenv = _load_ccs(args.file, args.defs)
        lsys = CcsSystem(lenv)
    else:
        left, lenv = _load_pi(args.file, args.mode, args.defs)
        lsys = PiSystem(lenv, symbolic=args.equiv == "strong")
    if args.against in ("translation-T", "translation-E"):
        if not isinstance(left, pi.PiTerm):
            raise UsageError("translations apply to pi processes only")
        if args.against == "translation-T":
            right, renv = translate_T(left, lenv, args.mode)
            return left, lsys, right, CcsSystem(renv)
        return left, lsys, translate_E(left), CcsSystem(lenv, classic=True)
    if _is_ccs_file(args.against):
        right, renv = _load_ccs(args.against, args.defs)
        return left, lsys, right, CcsSystem(renv)
    right, renv = _load_pi(args.against, args.mode, args.defs)
    return left, lsys, right, PiSystem(renv, symbolic=args.equiv == "strong")


def cmd_check(args) -> int:
    left, lsys, right, rsys = _systems_for_check(args)
    if args.equiv == "strong":
        pool = _pool(args.pool)
        if pool is None:
            pool = default_pool(left, 1) if isinstance(left, pi.PiTerm) else frozenset(
                n for n in ccs.mentioned_names(left) if n.is_public)
        result = check_strong_bisim(explore_lts(left, lsys, pool, max_depth=args.depth),
                                    explore_lts(right, rsys, pool, max_depth=args.depth))
    else:
        b1 = explore_bts(left, lsys, max_depth=args.depth)
        b2 = explore_bts(right, rsys, max_depth=args.depth)
        check = check_barbed_bisim if args.equiv == "barbed" else check_reduction_bisim
        result = check(b1, b2)
    passed = result.holds != args.expect_fail
    print(f"{'PASS' if passed else 'FAIL'} {result}")
    if result.witness is not None:
        for line in result.witness.path():
            print(f"  {line}")
    if args.json:
        Path(args.json).write_text(json.dumps(result.to_json(), indent=2) + "\n", encoding="utf-8")
    return EXIT_OK if passed else EXIT_FAILED


def _replay_one(name: str, k: int) -> tuple[str, bool, list[str]]:
    rep = run_fixture(name, k)
    return name, rep.passed, rep.lines()


def cmd_replay(args) -> int:
    if args.all:
        names = list(FIXTURES)
    elif args.fixture:
        names = [args.fixture]
    else:
        raise UsageError("give --fixture NAME or --all")
    if args.jobs > 1 and len(names) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_replay_one, names, [args.k] * len(names)))
    else:
        results = [_replay_one(n, args.k) for n in names]
    ok = True
    for name, passed, lines in results:
        print("\n".join(lines))
        ok &= passed
    passed = ok != args.expect_fail
    print(f"{'PASS' if passed else 'FAIL'} {len(results)} fixture(s)")
    return EXIT_OK if passed else EXIT_FAILED


# ------------------------------------------------------------------ wiring


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="picalc", description="pi-calculus to CCS workbench")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, mode=True):
        p.add_argument("file")
        p.add_argument("--defs", help="file of definitions A(x1,...,xn) := P")
        if mode:
            p.add_argument("--mode", choices=("strict", "im"), default="im")
        p.add_argument("--unicode", action="store_true", help="cosmetic Unicode output")

    p = sub.add_parser("parse", help="parse and print canonically")
    common(p)
    p.add_argument("--calculus", choices=("pi", "ccs"), help="default: by extension (.ccs)")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("translate", help="translate a pi process into CCS")
    common(p)
    p.add_argument("--encoder", choices=("T", "E"), default="T")
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("lts", help="explore and print a transition system")
    common(p)
    p.add_argument("--semantics", choices=PI_SEMANTICS + CCS_SEMANTICS, default="early")
    p.add_argument("--pool", help="comma-separated input objects")
    p.add_argument("--depth", type=int, default=DEFAULT_MAX_DEPTH)
    p.add_argument("--dot", help="write GraphViz output here")
    p.set_defaults(func=cmd_lts)

    p = sub.add_parser("check", help="check an equivalence")
    common(p)
    p.add_argument("--against", default="translation-T",
                   help="translation-T, translation-E or a second file")
    p.add_argument("--equiv", choices=("barbed", "reduction", "strong"), default="barbed")
    p.add_argument("--pool", help="input objects for --equiv strong")
    p.add_argument("--depth", type=int, default=DEFAULT_MAX_DEPTH)
    p.add_argument("--json", help="write a JSON report here")
    p.add_argument("--expect-fail", action="store_true", help="succeed only if the check fails")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("replay", help="run built-in fixtures")
    p.add_argument("--fixture", choices=sorted(FIXTURES))
    p.add_argument("--all", action="store_true")
    p.add_argument("--k", type=int, default=10, help="reduction depth for ccs-barbs")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--expect-fail", action="store_true")
    p.set_defaults(func=cmd_replay)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ParseError, DefinitionError, TranslationError, RecursionGuardError) as exc:
        print(f"picalc: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""Syntax of both calculi: terms, definitions, parsing and printing."""

from . import ccs, pi
from .env import DEFAULT_MAX_UNFOLD, DefEnv, DefinitionError, PiDef, RecursionGuardError, check_env
from .parser import (
    ParseError,
    ccs_term,
    parse_ccs,
    parse_ccs_defs,
    parse_pi,
    parse_pi_defs,
    pi_term,
)
from .printer import show_ccs, show_pi

__all__ = [
    "ccs", "pi", "DefEnv", "DefinitionError", "PiDef", "check_env", "ParseError",
    "ccs_term", "parse_ccs", "parse_ccs_defs", "parse_pi", "parse_pi_defs", "pi_term",
    "show_ccs", "show_pi", "DEFAULT_MAX_UNFOLD", "RecursionGuardError",
]

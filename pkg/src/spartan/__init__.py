"""A small checker and evaluator for spartan Martin-Löf type theory."""

from .checker import check, check_decl, check_module, conv, infer
from .env import GlobalEnv
from .errors import CheckError, ParseError, SpartanError
from .evaluator import Context, eval_term, normalize, quote
from .levels import level_equal, level_normalize
from .parser import parse_module, parse_term
from .printer import print_term
from .syntax import syntactic_equal

__all__ = [
    "CheckError", "Context", "GlobalEnv", "ParseError", "SpartanError",
    "check", "check_decl", "check_module", "conv", "eval_term", "infer",
    "level_equal", "level_normalize", "normalize", "parse_module", "parse_term",
    "print_term", "quote", "syntactic_equal",
]

"""Arithmetic syntax, proof checking, and a naming-paradox engine."""

from __future__ import annotations

from .berry import (
    berry_number,
    boolos_sentence,
    budget_term,
    certify_bounds,
    enumerate_formulas,
)
from .coding import decode, encode
from .demos import run_demo
from .parser import parse, parse_formula, parse_term
from .semantics import Truth, eval_budgeted, eval_delta0, eval_term
from .syntax import length, numeral, render

__version__ = "0.1.0"

__all__ = [
    "Truth",
    "berry_number",
    "boolos_sentence",
    "budget_term",
    "certify_bounds",
    "decode",
    "encode",
    "enumerate_formulas",
    "eval_budgeted",
    "eval_delta0",
    "eval_term",
    "length",
    "numeral",
    "parse",
    "parse_formula",
    "parse_term",
    "render",
    "run_demo",
    "__version__",
]

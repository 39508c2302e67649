"""Grammar round-trips and rejection behavior."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings

import strategies as gen
from berrykit.errors import InputError
from berrykit.parser import ParseError, parse, parse_formula, parse_term
from berrykit.syntax import expand_bounded, render


@settings(max_examples=120, deadline=None)
@given(gen.formulas())
def test_formula_round_trip(f):
    assert render(parse_formula(render(f))) == render(f)


@settings(max_examples=120, deadline=None)
@given(gen.terms())
def test_term_round_trip(t):
    assert render(parse_term(render(t))) == render(t)


def test_bulk_round_trip_seeded():
    rng = random.Random(20260822)
    for _ in range(500):
        f = gen.random_formula(rng)
        assert render(parse_formula(render(f))) == render(f)


def test_successor_grouping_regression():
    # "s s 0 + 0" is an addition of a numeral, not a successor of one
    t = parse_term("s s 0 + 0")
    assert render(t) == "s s 0 + 0"
    u = parse_term("s ( s 0 + 0 )")
    assert render(u) == "s ( s 0 + 0 )"
    assert render(t) != render(u)


def test_parse_dispatches_on_shape():
    assert render(parse("0 + 0")) == "0 + 0"
    assert render(parse("0 = 0")) == "0 = 0"


def test_parsed_bounded_forms_match_expansion():
    f = parse_formula("( A v0 ) ( ( s v0 <= s s s 0 ) -> ( v0 = 0 ) )")
    assert render(expand_bounded(f)) == render(f)


@pytest.mark.parametrize(
    "text",
    [
        "",
        "0 =",
        "= 0",
        "0 = = 0",
        "( 0 = 0",
        "0 = 0 )",
        "v 0 = 0",
        "vx = 0",
        "0 <= <= 0",
        "A v0 ( 0 = 0 )",
        "( A v0 ) 0 = 0 )",
        "s = 0",
    ],
)
def test_rejects_malformed(text):
    with pytest.raises(ParseError):
        parse_formula(text)


def test_parse_error_is_input_error():
    with pytest.raises(InputError):
        parse_term("+ 0 0")


def test_error_position_points_at_offender():
    with pytest.raises(ParseError) as exc:
        parse_formula("0 = 0 & ( 0 = 0 )")
    # connectives demand parenthesized operands; the bare left side trips first
    assert "token" in str(exc.value).lower() or "expected" in str(exc.value).lower()

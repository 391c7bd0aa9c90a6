from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ncsaito.errors import ParseError, UnknownVariable
from ncsaito.expr import format_rational, format_series, format_word, parse, parse_ast
from ncsaito.ncseries import Series

XY = ("x", "y")


def test_parse_examples():
    assert parse("x^3 + 2*x*y", XY, 6) == Series(2, 6, {(0, 0, 0): 1, (0, 1): 2})
    f = parse("x*y - y*x", XY, 6)
    assert not f.is_zero() and f == Series(2, 6, {(0, 1): 1, (1, 0): -1})
    assert parse("1/3*x^3", ("x",), 6) == Series(1, 6, {(0, 0, 0): Fraction(1, 3)})


def test_parse_whitespace_and_signs():
    assert parse("  - x *y+ 2 /4 * y ^2 ", XY, 6) == Series(2, 6, {(0, 1): -1, (1, 1): Fraction(1, 2)})
    assert parse("3", XY, 6) == Series.one(2, 6).scale(3)


def test_parse_errors_carry_offsets():
    with pytest.raises(ParseError) as e:
        parse("x + * y", XY, 6)
    assert e.value.offset == 4
    with pytest.raises(ParseError) as e:
        parse("x y", XY, 6)
    assert e.value.offset == 2 and "end of input" in e.value.expected
    with pytest.raises(ParseError):
        parse("x^0", XY, 6)
    with pytest.raises(ParseError):
        parse("1/0*x", XY, 6)
    with pytest.raises(ParseError):
        parse("x^", XY, 6)
    with pytest.raises(ParseError):
        parse("0.5*x", XY, 6)


def test_unknown_variable():
    with pytest.raises(UnknownVariable) as e:
        parse("x + z", XY, 6)
    assert e.value.offset == 4


def test_parse_ast_keeps_written_order():
    ast = parse_ast("2*y*x^2")
    assert ast.terms[0].factors == (("y", 1), ("x", 2))
    assert ast.terms[0].coeff == 2


def test_formatting():
    assert format_rational(Fraction(-3, 6)) == "-1/2"
    assert format_rational(4) == "4"
    assert format_word((0, 0, 1, 0), XY) == "x^2*y*x"
    assert format_word((0, 0, 1), XY, powers=False) == "x*x*y"
    assert format_word((), XY) == "1"
    assert format_series(parse("y*x - 1/2*x^3 + 2", XY, 6), XY) == "2 + y*x - 1/2*x^3"
    assert format_series(Series.zero(2, 6), XY) == "0"


series_st = st.dictionaries(
    st.lists(st.integers(0, 2), max_size=5).map(tuple),
    st.fractions(min_value=-5, max_value=5, max_denominator=6),
    max_size=6,
).map(lambda t: Series(3, 6, t))


@settings(max_examples=100, deadline=None)
@given(series_st)
def test_print_parse_round_trip(f):
    names = ("a", "b", "c")
    assert parse(format_series(f, names), names, 6) == f

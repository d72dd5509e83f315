import pytest
from hypothesis import given

from symmax.errors import ParseError, UnknownRule
from symmax.rules import (
    EMPTY, Concat, Letter, Star, letters, lookup, parse, parse_rules_text, registry, to_text,
)

from conftest import rule_exprs


def test_parse_basic_forms():
    assert parse("r3") == Letter(3)
    assert parse("r3*") == Star(Letter(3))
    assert parse("ρ1 ρ3") == Concat((Letter(1), Letter(3)))
    assert parse("(r4 r5)* r3") == Concat((Star(Concat((Letter(4), Letter(5)))), Letter(3)))


def test_adjacent_groups_need_no_space():
    assert parse("(r4 r5)*(r1 r2 r3)*") == parse("(r4 r5)* (r1 r2 r3)*")


def test_registry_names():
    reg = registry()
    assert set(reg) == {"zero", "plus", "least", "pess", "opt", "left", "right"}
    assert parse("@least") == reg["least"]
    assert to_text(reg["least"]) == "(r4 r5)* r1 r2 r3"
    assert lookup("@zero") == Star(Letter(3))


def test_unknown_names_and_letters():
    with pytest.raises(UnknownRule):
        lookup("@nope")
    with pytest.raises(ParseError):
        parse("@nope")
    with pytest.raises(ParseError) as exc:
        parse("r1 r6")
    assert exc.value.position == 3


@pytest.mark.parametrize("text", ["", "(r1", "r1)", "*", "r", "r1 **"])
def test_malformed(text):
    with pytest.raises(ParseError):
        parse(text)


def test_letters_and_empty():
    assert letters(parse("(r4 r5)* r1 r3")) == {1, 3, 4, 5}
    assert to_text(EMPTY) == "ε"


def test_rules_text():
    rs = parse_rules_text("# family\n@zero\n\n(r1 r3)*  # left\n")
    assert [to_text(r) for r in rs] == ["r3*", "(r1 r3)*"]
    with pytest.raises(ParseError, match="line 2"):
        parse_rules_text("r1\nr7\n")


@given(rule_exprs())
def test_print_parse_round_trip(r):
    text = to_text(r)
    assert to_text(parse(text)) == text

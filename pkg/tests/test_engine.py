import random

import pytest
from hypothesis import given

from symmax.core import PsiEncoding, encode, fulfills_associativity, parse_encoding
from symmax.engine import (
    BasicRule, apply_basic, apply_elementary, basic_word, construct_target_rule, evaluate, residue, run,
    run_basic_word,
)
from symmax.errors import NotMadeAssociative, PreconditionFailed
from symmax.rules import Star, parse, registry, to_text

from conftest import encodings, random_encoding, random_wf_rules

E = parse_encoding


@pytest.mark.parametrize("letter, before, after", [
    (1, "(3,2)(1,0)", "(1,2)(1,0)"),
    (1, "(1,2)", "(1,2)"),
    (2, "(3,2)", "(3,1)"),
    (3, "(3,2)(1,1)", "(1,0)(1,1)"),
    (3, "(2,2)(1,1)", "(1,1)"),
    (4, "(1,1)(2,1)", "(1,1)(0,1)"),
    (4, "(1,1)(2,0)(1,0)", "(1,1)(1,0)"),
    (5, "(1,1)(2,1)", "(1,1)(2,0)"),
    (5, "(1,1)(2,0)", "(1,1)(2,0)"),
    (4, "(2,0)(1,1)", "(2,0)(1,1)"),
])
def test_elementary_rules(letter, before, after):
    assert apply_elementary(letter, E(before)).pairs == E(after).pairs


def test_deletion_renumbers_magnitudes():
    e = encode((3, 2, -2, 1))
    out = apply_elementary(4, apply_elementary(5, e))  # only (1,1) top would qualify; no change here
    assert out == e
    e = encode((3, -3, 2, 1, -1))
    out = apply_elementary(4, e)
    assert out.theta == (3, 1)


def test_worked_example_values():
    s = (3, 2, 1, 0, -2, -3, -3)
    reg = registry()
    assert evaluate(reg["zero"], s) == -3
    assert evaluate(reg["plus"], s) == 1


def test_least_deletes_everything_sample():
    least = registry()["least"]
    assert residue(least, E("(2,3)(1,1)(4,0)")) == PsiEncoding()


def test_profile_and_trace():
    res = run(parse("(r1 r3)*"), E("(2,2)(1,0)"), trace=True)
    assert res.profile.deleted == ((2, 1), (0, 0))
    assert res.encoding == E("(0,1)(1,0)")
    assert [s.action for s in res.trace] == ["r1", "r3"]
    assert res.profile.survivors() == res.encoding
    assert res.profile.removed().theta == (2,)
    assert res.profile.removed().pairs == ((2, 1),)


def test_not_made_associative():
    with pytest.raises(NotMadeAssociative):
        evaluate(parse("r1"), E("(2,2)"))


def test_basic_rules():
    assert apply_basic(BasicRule(3, 2), E("(1,1)(2,1)")) == E("(1,1)(1,0)")
    assert apply_basic(BasicRule(1, 1), E("(1,1)")) == E("(1,1)")
    with pytest.raises(ValueError):
        BasicRule(4, 1)
    with pytest.raises(ValueError):
        BasicRule(6, 1)


def test_basic_word_not_a_computation_rule():
    w = basic_word(*[BasicRule(5, 3)] * 3,
                   Star(basic_word(Star(BasicRule(1, 1)), Star(BasicRule(2, 1)), BasicRule(3, 1))))
    a = run_basic_word(w, E("(2,3)(1,0)(0,1)(2,1)"))
    b = run_basic_word(w, E("(2,3)(1,1)(0,1)(2,0)"))
    assert a.value == 3   # n_2 of a four-level encoding with magnitudes 4..1
    assert b.value == 1   # n_4


@pytest.mark.parametrize("pairs, k, sign, text", [
    (((2, 1),), 1, 1, "r2 r3"),
    (((1, 2),), 1, -1, "r1 r3"),
    (((1, 1), (2, 1)), 2, 1, "r5 r1 r2 r3"),
])
def test_target_construction_examples(pairs, k, sign, text):
    e = PsiEncoding.from_pairs(pairs)
    r = construct_target_rule(e, k, sign)
    assert to_text(r) == text
    assert evaluate(r, e) == sign * e.levels[k - 1].magnitude


def test_target_construction_preconditions():
    with pytest.raises(PreconditionFailed):
        construct_target_rule(E("(1,1)"), 1, 1)
    with pytest.raises(PreconditionFailed):
        construct_target_rule(E("(2,0)"), 1, 1)
    with pytest.raises(PreconditionFailed):
        construct_target_rule(E("(1,1)(1,0)"), 2, -1)
    with pytest.raises(PreconditionFailed):
        construct_target_rule(E("(1,1)"), 3, 1)


@given(encodings(max_levels=5, max_count=4))
def test_registry_makes_associative(e):
    for r in registry().values():
        out = run(r, e)
        assert fulfills_associativity(out.encoding)
        assert out.profile.survivors() == out.encoding


@given(encodings(max_levels=5, max_count=4))
def test_associative_input_untouched(e):
    if fulfills_associativity(e) and not (e.levels[0].pos and e.levels[0].neg):
        for r in registry().values():
            assert run(r, e).profile.is_empty


def test_star_pass_bound_sampled():
    rng = random.Random(7)
    rules = random_wf_rules(3, 40)
    for _ in range(500):
        r = rng.choice(rules)
        e = random_encoding(rng, 6, 5)
        assert run(r, e).max_passes <= e.total + 1

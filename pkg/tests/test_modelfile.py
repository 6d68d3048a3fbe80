from fractions import Fraction as F

import pytest
from hypothesis import given

from epiprob.errors import ModelSyntaxError
from epiprob.modelfile import parse_model, write_model
from strategies import models

TEXT = """# example
states: s0 s1 s2
init: s0 1/2, s1 1/2
trans: s0 -> s0 1/2, s0 -> s1 1/2, s1 -> s1 1, s2 -> s2 1
agent i obs: s0 a, s1 a, s2 b
label: s0 {p, q}, s1 {p}
"""


def test_parse_reads_exact_rationals():
    m = parse_model(TEXT)
    assert m.init == (F(1, 2), F(1, 2), 0)
    assert m.trans[0] == (F(1, 2), F(1, 2), 0)
    assert m.obs["i"] == ("a", "a", "b")
    assert m.labels[0] == {"p", "q"} and m.labels[2] == frozenset()


def test_one_third_is_exact():
    m = parse_model("states: a b c\ninit: a 1/3, b 1/3, c 1/3\ntrans: a -> a 1, b -> b 1, c -> c 1\n")
    assert m.init[0] == F(1, 3)


def test_round_trip_is_canonical():
    text = write_model(parse_model(TEXT))
    assert write_model(parse_model(text)) == text
    assert parse_model(text) == parse_model(TEXT)


def test_declared_propositions_survive_round_trip():
    m = parse_model("states: a\ninit: a 1\ntrans: a -> a 1\nprops: p\n")
    assert m.knows_proposition("p") and not m.prop_states("p")
    assert parse_model(write_model(m)) == m


@pytest.mark.parametrize("text, fragment", [
    ("states: a a\n", "duplicate state name 'a'"),
    ("states: a\ninit: b 1\n", "undeclared state 'b'"),
    ("states: a\ninit: a 0.5\n", "rational"),
    ("states: a\nfrobnicate: a\n", "unknown declaration"),
    ("init: a 1\n", "'states:' must be declared first"),
])
def test_errors_name_the_problem(text, fragment):
    with pytest.raises(ModelSyntaxError) as info:
        parse_model(text)
    assert fragment in str(info.value)


def test_errors_carry_line_and_column():
    with pytest.raises(ModelSyntaxError) as info:
        parse_model("states: a\ninit: a 1\ntrans: a -> b 1\n")
    assert info.value.line == 3 and info.value.column > 1


@given(models())
def test_random_models_round_trip(m):
    assert parse_model(write_model(m)) == m

from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from epiprob.errors import DimensionMismatch, InvalidPrefix
from epiprob.markov import (bilinear_form, cylinder_probability, distribution_at, enumerate_paths, identity,
                            is_path, make_model, matrix_power, validate)
from epiprob.reductions import diophantine_chain
from oracles import marginal, naive_power
from strategies import matrices, models

FIB = ((F(1), F(1)), (F(1), F(0)))


def two_state_chain():
    return make_model(["a", "b"], {"a": 1}, {"a": {"a": F(1, 2), "b": F(1, 2)}, "b": {"b": 1}})


def test_identity_chain_is_valid():
    m = make_model(["s"], {"s": 1}, {("s", "s"): 1})
    assert validate(m) == []


def test_row_sum_violation_is_reported():
    m = make_model(["a", "b"], {"a": 1}, {"a": {"a": F(3, 4)}, "b": {"b": 1}})
    problems = validate(m)
    assert any("row 0 sums to 3/4" in p for p in problems)


def test_fixed_chain_is_valid():
    assert validate(diophantine_chain()) == []


def test_missing_observation_is_reported():
    m = make_model(["a", "b"], {"a": 1}, {"a": {"a": 1}, "b": {"b": 1}}, obs={"i": {"a": "x"}})
    assert any("no observation" in p for p in validate(m))


def test_cylinder_probability():
    m = two_state_chain()
    assert cylinder_probability(m, ["a", "a", "b"]) == F(1, 4)
    assert cylinder_probability(m, ["a"]) == 1


@pytest.mark.parametrize("prefix", [["a", "b", "a"], ["b"], [], ["zz"]])
def test_cylinder_probability_rejects_non_paths(prefix):
    with pytest.raises(InvalidPrefix):
        cylinder_probability(two_state_chain(), prefix)
    assert not is_path(two_state_chain(), prefix)


def test_distribution_of_fixed_chain():
    m = diophantine_chain()
    assert distribution_at(m, 0) == {"s_exp": 1, "s_lin": 0, "s_sink": 0, "s_pad": 0}
    assert distribution_at(m, 2) == {"s_exp": F(1, 4), "s_lin": F(1, 2), "s_sink": F(1, 4), "s_pad": 0}
    assert distribution_at(m, 3) == {"s_exp": F(1, 8), "s_lin": F(3, 8), "s_sink": F(1, 2), "s_pad": 0}


def test_matrix_power_examples():
    assert matrix_power(FIB, 5) == ((8, 5), (5, 3))
    assert matrix_power(((F(1, 2),),), 3) == ((F(1, 8),),)
    assert matrix_power(identity(3), 7) == identity(3)
    assert matrix_power(FIB, 0) == identity(2)


def test_matrix_power_needs_square():
    with pytest.raises(DimensionMismatch):
        matrix_power(((1, 2),), 2)


def test_bilinear_form_examples():
    assert bilinear_form((1, 0), FIB, 5, (0, 1)) == 5
    assert bilinear_form((1, 0), FIB, 0, (0, 1)) == 0
    assert bilinear_form((1,), ((F(1, 2),),), 2, (1,)) == F(1, 4)


@given(matrices(size=4), st.integers(0, 20))
def test_repeated_squaring_matches_iteration(A, n):
    assert [list(r) for r in matrix_power(A, n)] == naive_power(A, n)


@given(models(), st.integers(0, 6))
def test_marginals_match_path_enumeration(m, t):
    dist = distribution_at(m, t)
    assert [dist[s] for s in m.states] == marginal(m, t)
    assert sum(dist.values()) == 1


@given(models(), st.integers(1, 6))
def test_prefix_probabilities_sum_to_one(m, length):
    assert sum(p for _, p in enumerate_paths(m, length)) == 1

import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from epiprob.checker import (Fails, Holds, NoWitnessUpTo, Witness, check_mixed_time, check_skolem_form,
                             mixed_time_of, model_check, skolem_form_of)
from epiprob.errors import UnknownProposition
from epiprob.logic import MixedTimeFormula, parse_ctlkp, parse_wmlo
from epiprob.logic.poly import Poly
from epiprob.markov import make_model
from epiprob.random_models import random_model
from epiprob.reductions import diophantine_chain
from oracles import transient_exists
from strategies import seeds


def test_linear_term_hits_three_eighths():
    assert check_skolem_form(diophantine_chain(), "p_lin", "=", F(3, 8), 10) == Witness({"t": 3})


def test_power_of_half_never_hits_a_third():
    assert check_skolem_form(diophantine_chain(), "p_exp", "=", F(1, 3), 30) == NoWitnessUpTo(30)


def test_positive_mass_is_decided_without_a_bound():
    assert check_skolem_form(diophantine_chain(), "p_lin", ">", 0, 0) == Holds()
    assert check_skolem_form(diophantine_chain(), "p_lin", "=", 1, 0) == Fails()


def test_unknown_proposition():
    with pytest.raises(UnknownProposition):
        check_skolem_form(diophantine_chain(), "nope", "=", F(1, 2), 3)


def test_mixed_time_with_a_repeated_atom():
    psi = MixedTimeFormula(("t",), Poly.var(0) - Poly.var(1), (("p_exp", "t"), ("p_exp", "t")))
    assert check_mixed_time(diophantine_chain(), psi, 5) == Witness({"t": 0})


def test_query_shapes_are_recognised():
    assert skolem_form_of(parse_wmlo("exists t . P(p@t) >= 1/2")) == ("t", "p", ">=", F(1, 2))
    assert skolem_form_of(parse_wmlo("exists t . P(p@t) * P(p@t) = 1/4")) is None
    psi = mixed_time_of(parse_wmlo("exists t u . P(p@t) - 2 * P(q@u) = 1/3"))
    assert psi.variables == ("t", "u") and psi.poly.constant_term() == F(-1, 3)
    assert mixed_time_of(parse_wmlo("forall t . P(p@t) = 0")) is None


@given(seeds, st.integers(0, 12), st.sampled_from(["=", "<", ">", "<=", ">="]))
def test_witness_is_stable_under_larger_bounds(seed, T, op):
    rng = random.Random(seed)
    m = random_model(rng)
    c = rng.choice([F(1, 4), F(1, 3), F(1, 2), F(3, 4)])
    v = check_skolem_form(m, "p", op, c, T)
    if isinstance(v, Witness):
        for T2 in (T, T + 3, 2 * T + 5):
            assert check_skolem_form(m, "p", op, c, T2) == v


@given(seeds, st.sampled_from(["=", "<", ">", "<=", ">="]), st.sampled_from([0, 1]))
def test_qualitative_cases_match_transient_computation(seed, op, c):
    m = random_model(random.Random(seed))
    v = check_skolem_form(m, "p", op, c, 0)
    assert isinstance(v, (Holds, Fails))
    assert (v == Holds()) == transient_exists(m, "p", op, c, 64)


@given(seeds, st.sampled_from(["=", ">", ">=", "<"]))
def test_eventual_value_agrees_with_branching_encoding_for_blind_agents(seed, op):
    # for a blind agent, AF(Pr(p) op c) is a statement about the marginal sequence
    rng = random.Random(seed)
    m = random_model(rng, max_agents=0)
    c = rng.choice([F(1, 4), F(1, 2), F(3, 4)])
    T = 6
    bounded = model_check(m, "spr", parse_ctlkp(f"A F<={T} (Pr[bot](p) {op} {c})"))
    assert (bounded == Holds()) == isinstance(check_skolem_form(m, "p", op, c, T), Witness)

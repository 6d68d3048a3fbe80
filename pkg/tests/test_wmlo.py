import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from epiprob.checker import Fails, Holds, NoWitnessUpTo, WMLOEvaluator, Witness, eval_wmlo
from epiprob.errors import UnboundedQuantifier, UnboundVariable, UnknownProposition, UnsupportedSecondOrder
from epiprob.logic import parse_wmlo
from epiprob.logic.ast import ForallT
from epiprob.markov import make_model
from epiprob.random_models import random_model, random_wmlo_open
from epiprob.reductions import diophantine_chain
from oracles import TimeLogicOracle, all_runs
from strategies import seeds


def identity_chain():
    return make_model(["a", "b"], {"a": F(1, 3), "b": F(2, 3)}, {"a": {"a": 1}, "b": {"b": 1}},
                      labels={"a": ["p"]})


def test_witness_for_marginal_value():
    phi = parse_wmlo("exists t . P(p_exp@t) = 1/8")
    assert eval_wmlo(diophantine_chain(), "spr", phi, 10) == Witness({"t": 3})


def test_universal_sentence_on_absorbing_chain():
    m = make_model(["a"], {"a": 1}, {"a": {"a": 1}}, labels={"a": ["p"]})
    assert eval_wmlo(m, "spr", parse_wmlo("forall t . P(p@t) = 1"), 10) == Holds()
    assert eval_wmlo(m, "spr", parse_wmlo("forall t . P(p@t) < 1"), 10) == Fails()


def test_independence_needs_a_degenerate_mass():
    phi = parse_wmlo("exists t u . t < u and P(p@t and p@u) = P(p@t) * P(p@u)")
    assert eval_wmlo(identity_chain(), "spr", phi, 4) == NoWitnessUpTo(4)
    # brute-force joint at two times: P(p@0 and p@1) = 1/3, product = 1/9
    runs = all_runs(identity_chain(), 2)
    joint = sum(p for r, p in runs if r[0] == 0 and r[1] == 0)
    assert joint == F(1, 3) != F(1, 9)
    sure = make_model(["a"], {"a": 1}, {"a": {"a": 1}}, labels={"a": ["p"]})
    assert eval_wmlo(sure, "spr", phi, 4) == Witness({"t": 0, "u": 1})


def test_run_dependent_existential():
    m = identity_chain()
    assert eval_wmlo(m, "spr", parse_wmlo("exists t . p@t or not p@t"), 2) == Holds()
    assert eval_wmlo(m, "spr", parse_wmlo("exists t . p@t"), 2) == NoWitnessUpTo(2)


def test_errors():
    m = identity_chain()
    with pytest.raises(UnboundedQuantifier):
        eval_wmlo(m, "spr", parse_wmlo("forall t . p@t"), None)
    with pytest.raises(UnsupportedSecondOrder):
        eval_wmlo(m, "spr", parse_wmlo("forall set X . forall t . t in X"), 3)
    with pytest.raises(UnknownProposition):
        eval_wmlo(m, "spr", parse_wmlo("forall t . zz@t"), 3)
    with pytest.raises(UnboundVariable):
        eval_wmlo(m, "spr", parse_wmlo("p@t", free_vars=("t",)), 3)


@given(seeds, st.sampled_from(["clk", "spr"]))
def test_matches_run_enumeration(seed, sem):
    rng = random.Random(seed)
    m = random_model(rng, max_states=3)
    phi = random_wmlo_open(rng, 3, m.agents)
    T = 3
    oracle, ev = TimeLogicOracle(m, sem, T), WMLOEvaluator(m, sem, T)
    for run, _ in oracle.runs:
        for t in range(T + 1):
            assert ev.holds(phi, {"t": t}, run) == oracle.sat(phi, {"t": t}, run)


@given(seeds)
def test_sentence_verdicts_match_enumeration(seed):
    rng = random.Random(seed)
    m = random_model(rng, max_states=3)
    phi = ForallT("t", random_wmlo_open(rng, 2, m.agents))
    oracle = TimeLogicOracle(m, "spr", 3)
    expected = all(oracle.sat(phi, {}, r) for r, _ in oracle.runs)
    assert eval_wmlo(m, "spr", phi, 3) == (Holds() if expected else Fails())

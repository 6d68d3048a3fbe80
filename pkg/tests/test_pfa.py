import random
from fractions import Fraction as F

import pytest
from hypothesis import given

from epiprob.checker import Holds, eval_prob_term, model_check
from epiprob.errors import EmptyWord, ModelSyntaxError, UnknownLetter
from epiprob.logic import parse_ctlkp
from epiprob.logic.ast import CurProb, Prop
from epiprob.markov import validate
from epiprob.random_models import random_pfa
from epiprob.reductions.pfa import (PFA, emptiness_formula, parse_pfa, pfa_correspondence_check, pfa_to_podtmc,
                                    pfa_value, write_pfa)
from oracles import pfa_nonempty_upto
from strategies import seeds

HALVING = """states: q1 q2
letters: a
init: q1 1
trans a: q1 -> q1 1/2, q1 -> q2 1/2, q2 -> q2 1
final: q2
lambda: 1/2
"""


def halving():
    return parse_pfa(HALVING)


def test_acceptance_values():
    P = halving()
    assert pfa_value(P, "a") == F(1, 2)
    assert pfa_value(P, "aa") == F(3, 4)


def test_single_accepting_state_accepts_everything():
    P = PFA(("q",), ("a", "b"), (F(1),), {"a": ((F(1),),), "b": ((F(1),),)}, frozenset({"q"}), F(1, 2))
    assert pfa_value(P, "abba") == 1


def test_no_final_states_accepts_nothing():
    P = parse_pfa(HALVING.replace("final: q2\n", ""))
    assert pfa_value(P, "aaa") == 0
    assert model_check(pfa_to_podtmc(P), "spr", parse_ctlkp(emptiness_formula(P, 3))) != Holds()


def test_word_errors():
    with pytest.raises(EmptyWord):
        pfa_value(halving(), "")
    with pytest.raises(UnknownLetter):
        pfa_value(halving(), "ab")


def test_one_letter_encoding():
    M = pfa_to_podtmc(halving())
    assert M.states == ("q1.a", "q2.a")
    assert M.init == (1, 0)
    assert M.trans == halving().mats["a"]
    assert validate(M) == []


def test_two_letter_encoding_splits_the_initial_mass():
    P = parse_pfa(HALVING.replace("letters: a", "letters: a b") + "trans b: q1 -> q1 1, q2 -> q1 1\n")
    M = pfa_to_podtmc(P)
    assert len(M.states) == 4
    assert dict(zip(M.states, M.init)) == {"q1.a": F(1, 2), "q1.b": F(1, 2), "q2.a": 0, "q2.b": 0}


def test_belief_after_a_word_is_the_acceptance_probability():
    P = halving()
    M = pfa_to_podtmc(P)
    value = eval_prob_term(M, "spr", CurProb("i", Prop("p")), ["q1.a", "q1.a", "q2.a"], 2)
    assert value == pfa_value(P, "aa")
    assert pfa_correspondence_check(P, 5)
    assert pfa_correspondence_check(P, 1)


def test_file_format_round_trip():
    assert parse_pfa(write_pfa(halving())) == halving()


def test_bad_cut_point():
    with pytest.raises(ModelSyntaxError):
        parse_pfa(HALVING.replace("lambda: 1/2", "lambda: 1"))


@given(seeds)
def test_random_two_letter_automata(seed):
    P = random_pfa(random.Random(seed), max_states=2, max_letters=2)
    assert validate(pfa_to_podtmc(P)) == []
    assert pfa_correspondence_check(P, 4)


@given(seeds)
def test_bounded_emptiness_matches_word_enumeration(seed):
    P = random_pfa(random.Random(seed))
    T = 3
    verdict = model_check(pfa_to_podtmc(P), "spr", parse_ctlkp(emptiness_formula(P, T)))
    assert (verdict == Holds()) == pfa_nonempty_upto(P, T)

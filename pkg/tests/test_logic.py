import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from epiprob.errors import FormulaSyntaxError, UnboundVariable, UnknownAgent
from epiprob.logic import (UNBOUNDED, eliminate_clock, eval_polynomial, normalize_conditional, parse_ctlkp,
                           parse_wmlo, temporal_depth, to_text, translate_prop2)
from epiprob.logic.ast import (TRUE, A, AgentProbAt, And, Compare, CurProb, ExistsT, ForallT, GlobalProb, KnowAt,
                               Not, Prop, PropAt, Until, walk)
from epiprob.logic.poly import Poly
from epiprob.markov import make_model
from epiprob.random_models import random_ctl, random_wmlo_open
from strategies import seeds

x, y = Poly.var(0), Poly.var(1)


def clock_example():
    return make_model(["u", "v", "w"], {"u": F(1, 3), "v": F(1, 3), "w": F(1, 3)},
                      {"u": {"u": 1}, "v": {"v": 1}, "w": {"w": 1}},
                      obs={"i": {"u": "a", "v": "a", "w": "b"}}, labels={"u": ["p"]})


# parsing ------------------------------------------------------------------------

def test_ef_desugars_to_not_a_not_until():
    phi = parse_ctlkp("EF (Pr[i](p) > 1/2)")
    inner = Compare(x, ">", F(1, 2), (CurProb("i", Prop("p")),))
    assert phi == Not(A(Not(Until(TRUE, inner))))


def test_global_probability_sentence():
    phi = parse_wmlo("exists t . P(p@t) = 1/4")
    assert phi == ExistsT("t", Compare(x, "=", F(1, 4), (GlobalProb(PropAt("p", "t")),)))


def test_two_variable_polynomial_atom():
    phi = parse_ctlkp("Pr[i](p) * Pr[i](q) - 1/4 >= 0")
    assert isinstance(phi, Compare) and len(phi.terms) == 2
    assert phi.poly == x * y and phi.c == F(1, 4)


def test_precedence_unary_over_until_over_and():
    assert parse_ctlkp("not p U q and r") == And(Until(Not(Prop("p")), Prop("q")), Prop("r"))


@pytest.mark.parametrize("text", ["p and", "Pr[i](p) >", "(p", "p U<=x q", "K[] p"])
def test_syntax_errors_have_positions(text):
    with pytest.raises(FormulaSyntaxError) as info:
        parse_ctlkp(text)
    assert info.value.position is not None


def test_free_time_variable_is_rejected():
    with pytest.raises(UnboundVariable):
        parse_wmlo("P(p@t) = 1")
    assert parse_wmlo("P(p@t) = 1", free_vars=("t",)) is not None


def test_set_variables_parse_and_print():
    phi = parse_wmlo("forall set X . exists t . t in X and p@t")
    assert parse_wmlo(to_text(phi)) == phi


@given(seeds, st.integers(0, 5))
def test_branching_formulas_round_trip(seed, depth):
    rng = random.Random(seed)
    phi = random_ctl(rng, depth, ("i", "j"))
    if rng.random() < 0.3:
        phi = Until(phi, random_ctl(rng, 1, ("i",)))
    assert parse_ctlkp(to_text(phi)) == phi


@given(seeds, st.integers(0, 5))
def test_time_formulas_round_trip(seed, depth):
    rng = random.Random(seed)
    phi = ForallT("t", random_wmlo_open(rng, depth, ("i", "j")))
    assert parse_wmlo(to_text(phi)) == phi


# depth ------------------------------------------------------------------------------

@pytest.mark.parametrize("text, depth", [
    ("X X p", 2), ("p U<=3 q", 3), ("p U q", UNBOUNDED), ("p", 0), ("A F<=2 p", 2),
    ("K[i](F p)", 0), ("Pr[i](G p) = 0", 0), ("X (p U q)", UNBOUNDED),
])
def test_temporal_depth(text, depth):
    assert temporal_depth(parse_ctlkp(text)) == depth


# polynomials ------------------------------------------------------------------------

def test_polynomial_evaluation():
    f = 4 * x ** 5 * y ** 3 + F(7, 15) * x
    assert eval_polynomial(f, [1, 1]) == F(67, 15)
    assert eval_polynomial(Poly(), [F(1, 2)]) == 0
    assert eval_polynomial(x - 2 * y, [F(3, 8), F(1, 8)]) == F(1, 8)


polys = st.lists(st.tuples(st.integers(-3, 3), st.integers(0, 2), st.integers(0, 2)), max_size=4).map(
    lambda ms: sum((c * x ** a * y ** b for c, a, b in ms), Poly()))


@given(polys, polys, polys)
def test_polynomial_canonical_form(f, g, h):
    assert f + g == g + f and f * g == g * f
    assert (f + g) + h == f + (g + h) and (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f - f == Poly()


# conditional normalisation ------------------------------------------------------------

def test_two_conditionals_multiply_out():
    p1, q1, p2, q2 = (PropAt(n, "t") for n in ("a", "b", "c", "d"))
    got = normalize_conditional([(1, p1, q1), (1, p2, q2)], "<=", F(1, 3))
    want = parse_wmlo("P(a@t and b@t) * P(d@t) + P(c@t and d@t) * P(b@t) <= 1/3 * P(b@t) * P(d@t)",
                      free_vars=("t",))
    assert got == want


def test_conditioning_on_true_simplifies():
    got = parse_wmlo("P(p@t | true) <= 1/2", free_vars=("t",))
    assert got == parse_wmlo("P(p@t) <= 1/2", free_vars=("t",))


def test_single_conditional():
    got = parse_wmlo("P(p@t | q@t) = 1/2", free_vars=("t",))
    assert got == parse_wmlo("P(p@t and q@t) - 1/2 * P(q@t) = 0", free_vars=("t",))


# translation into the time logic ---------------------------------------------------------

def test_next_uses_the_successor_time():
    star = translate_prop2(parse_ctlkp("X p"), "spr")
    assert isinstance(star, ExistsT)
    u = star.var
    assert PropAt("p", u) in set(walk(star))
    assert any(isinstance(n, ForallT) for n in walk(star))  # u = t + 1 spelt out


def test_knowledge_translates_pointwise():
    assert translate_prop2(parse_ctlkp("K[i] p"), "spr") == KnowAt("i", "t", PropAt("p", "t"))


def test_prior_reads_time_zero():
    star = translate_prop2(parse_ctlkp("Prior[i](p) > 1/2"), "clk")
    terms = [n for n in walk(star) if isinstance(n, AgentProbAt)]
    assert len(terms) == 1 and terms[0].var != "t" and terms[0].arg == PropAt("p", terms[0].var)


def test_clock_path_quantifier_uses_state_guards():
    star = translate_prop2(parse_ctlkp("A X p"), "clk", clock_example())
    props = {n.prop for n in walk(star) if isinstance(n, PropAt)}
    assert {"@state_u", "@state_v", "@state_w"} <= props
    assert any(isinstance(n, KnowAt) and n.agent == "top" for n in walk(star))


# clock elimination ------------------------------------------------------------------------

def test_knowledge_elimination_splits_on_observations():
    got = eliminate_clock(parse_wmlo("K[i]@t (p@t)", free_vars=("t",)), clock_example())
    want = parse_wmlo("(@obs_i_a@t -> K[bot]@t (@obs_i_a@t -> p@t)) and "
                      "(@obs_i_b@t -> K[bot]@t (@obs_i_b@t -> p@t))", free_vars=("t",))
    assert got == want


def test_probability_elimination_with_one_observation():
    m = make_model(["a", "b"], {"a": 1}, {"a": {"b": 1}, "b": {"b": 1}}, obs={"i": {"a": "o", "b": "o"}},
                   labels={"b": ["p"]})
    got = eliminate_clock(parse_wmlo("Pr[i]@t (p@t) = 1/2", free_vars=("t",)), m)
    assert got == parse_wmlo("P(@obs_i_o@t and p@t) = 1/2 * P(@obs_i_o@t)", free_vars=("t",))


def test_agent_free_formulas_are_unchanged():
    phi = parse_wmlo("forall t . P(p@t) >= 1/2 or p@t")
    assert eliminate_clock(phi, clock_example()) == phi


def test_elimination_rejects_unknown_agents():
    with pytest.raises(UnknownAgent):
        eliminate_clock(parse_wmlo("K[nobody]@t (p@t)", free_vars=("t",)), clock_example())

"""Branching-time formulas versus their time-logic translations, and clock elimination."""
import random

from hypothesis import given, strategies as st

from epiprob.checker import CTLChecker, WMLOEvaluator
from epiprob.logic import eliminate_clock, temporal_depth, translate_prop2
from epiprob.random_models import random_ctl, random_model, random_wmlo_open
from oracles import all_runs
from strategies import seeds


def translation_agrees(m, sem, phi, n, sample=None):
    T = n + temporal_depth(phi)
    star = translate_prop2(phi, sem, m)
    chk = CTLChecker.for_formula(m, sem, phi)
    ev = WMLOEvaluator(m, sem, T)
    runs = [r for r, _ in all_runs(m, T + 1)]
    if sample is not None:
        runs = sample(runs)
    return all(chk.holds(phi, chk.ctx_of_prefix(r[: n + 1]), r[n:]) == ev.holds(star, {"t": n}, r) for r in runs)


def elimination_agrees(m, phi, T):
    psi = eliminate_clock(phi, m)
    ev = WMLOEvaluator(m, "clk", T)
    return all(ev.holds(phi, {"t": n}, r) == ev.holds(psi, {"t": n}, r)
               for n in range(T + 1) for r, _ in ev.partial_runs(range(T + 1)))


@given(seeds, st.sampled_from(["clk", "spr"]), st.integers(0, 2))
def test_translation_preserves_truth(seed, sem, n):
    rng = random.Random(seed)
    m = random_model(rng, max_states=3)
    assert translation_agrees(m, sem, random_ctl(rng, 2, m.agents), n)


@given(seeds)
def test_clock_elimination_preserves_truth(seed):
    rng = random.Random(seed)
    m = random_model(rng, max_states=3)
    assert elimination_agrees(m, random_wmlo_open(rng, 3, m.agents), 3)

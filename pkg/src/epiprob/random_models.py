"""Seeded generators of small random models, formulas and reduction inputs.

Shared by the test suite and the experiment scripts.  Probabilities use
small denominators and transition rows have bounded out-degree so that
exhaustive oracles stay cheap.
"""
from __future__ import annotations

import random
from fractions import Fraction

from .logic.ast import (TRUE, A, And, AgentProbAt, BoundedUntil, Compare, CurProb, E, ExistsT, ForallT,
                        GlobalProb, Know, KnowAt, Less, Not, PriorProb, Prop, PropAt, X)
from .logic.poly import Poly
from .markov import PODTMC


def random_distribution(rng: random.Random, n: int, max_support: int, max_den: int = 4) -> list:
    """Distribution over range(n) with at most `max_support` positive entries."""
    k = rng.randint(1, min(max_support, n))
    support = rng.sample(range(n), k)
    den = rng.randint(k, max(k, max_den))
    cuts = sorted(rng.sample(range(1, den), k - 1))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [den])]
    out = [Fraction(0)] * n
    for s, w in zip(support, parts):
        out[s] = Fraction(w, den)
    return out


def random_model(rng: random.Random, max_states: int = 4, max_agents: int = 2, max_obs: int = 3,
                 props=("p", "q"), max_out: int = 2, max_den: int = 4, min_states: int = 1) -> PODTMC:
    n = rng.randint(min_states, max_states)
    states = tuple(f"s{i}" for i in range(n))
    init = tuple(random_distribution(rng, n, n, max_den))
    trans = tuple(tuple(random_distribution(rng, n, max_out, max_den)) for _ in range(n))
    agents = tuple(f"a{k}" for k in range(rng.randint(1, max_agents))) if max_agents else ()
    obs = {}
    for a in agents:
        k = rng.randint(1, max_obs)
        obs[a] = tuple(f"o{rng.randrange(k)}" for _ in range(n))
    labels = [set(p for p in props if rng.random() < 0.5) for _ in range(n)]
    for p in props:  # every proposition labels some state, so formulas can mention it
        if not any(p in lab for lab in labels):
            labels[rng.randrange(n)].add(p)
    labels = tuple(frozenset(lab) for lab in labels)
    return PODTMC(states, init, trans, agents, obs, labels)


def random_matrix(rng: random.Random, n: int, lo: int = -3, hi: int = 3) -> tuple:
    return tuple(tuple(Fraction(rng.randint(lo, hi)) for _ in range(n)) for _ in range(n))


_CONSTS = (Fraction(0), Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(2, 3), Fraction(1))
_OPS = ("<", "<=", "=", ">", ">=")


def _random_compare(rng, terms):
    if len(terms) == 1 or terms[0] == terms[1] or rng.random() < 0.6:
        poly = Poly.var(0)
        terms = terms[:1]
    else:
        poly = Poly.var(0) - Poly.var(1) if rng.random() < 0.5 else Poly.var(0) * Poly.var(1)
    return Compare(poly, rng.choice(_OPS), rng.choice(_CONSTS), tuple(terms))


def random_ctl(rng: random.Random, depth: int, agents, props=("p", "q"), max_bound: int = 2):
    """Random branching-time formula with bounded temporal operators."""
    if depth == 0 or rng.random() < 0.15:
        return Prop(rng.choice(props)) if rng.random() < 0.9 else TRUE
    kind = rng.choice(["not", "and", "X", "BU", "A", "K", "Pr", "Prior"])
    sub = lambda: random_ctl(rng, depth - 1, agents, props, max_bound)
    if kind == "not":
        return Not(sub())
    if kind == "and":
        return And(sub(), sub())
    if kind == "X":
        return X(sub())
    if kind == "BU":
        return BoundedUntil(sub(), sub(), rng.randint(0, max_bound))
    if kind == "A":
        return A(sub())
    if kind == "K":
        return Know(rng.choice(agents), sub())
    cls = CurProb if kind == "Pr" else PriorProb
    terms = [cls(rng.choice(agents), sub()) for _ in range(2)]
    return _random_compare(rng, terms)


def random_ctlpk(rng: random.Random, depth: int, agents, props=("p", "q"), max_bound: int = 2):
    """Random state formula of the fragment where X and U only occur right under A or E."""
    if depth == 0 or rng.random() < 0.15:
        return Prop(rng.choice(props)) if rng.random() < 0.9 else TRUE
    kind = rng.choice(["not", "and", "AX", "EX", "AU", "EU", "K", "Pr"])
    sub = lambda: random_ctlpk(rng, depth - 1, agents, props, max_bound)
    if kind == "not":
        return Not(sub())
    if kind == "and":
        return And(sub(), sub())
    if kind == "AX":
        return A(X(sub()))
    if kind == "EX":
        return E(X(sub()))
    if kind in ("AU", "EU"):
        path = BoundedUntil(sub(), sub(), rng.randint(0, max_bound))
        return A(path) if kind == "AU" else E(path)
    if kind == "K":
        return Know(rng.choice(agents), sub())
    return _random_compare(rng, [CurProb(rng.choice(agents), sub()) for _ in range(2)])


def random_wmlo_open(rng: random.Random, depth: int, agents, var: str = "t", props=("p", "q"),
                     bound_vars=(), counter=None):
    """Random time-logic formula whose free variable is `var` (plus `bound_vars`)."""
    counter = counter if counter is not None else [0]
    scope = (var,) + tuple(bound_vars)
    if depth == 0 or rng.random() < 0.15:
        if len(scope) > 1 and rng.random() < 0.3:
            a, b = rng.sample(scope, 2)
            return Less(a, b)
        return PropAt(rng.choice(props), rng.choice(scope))
    kind = rng.choice(["not", "and", "K", "Pr", "P", "Q"])
    sub = lambda v=var, bv=bound_vars: random_wmlo_open(rng, depth - 1, agents, v, props, bv, counter)
    if kind == "not":
        return Not(sub())
    if kind == "and":
        return And(sub(), sub())
    if kind == "K":
        return KnowAt(rng.choice(agents), rng.choice(scope), sub())
    if kind == "Q":
        counter[0] += 1
        u = f"u{counter[0]}"
        body = sub(var, tuple(bound_vars) + (u,))
        return ExistsT(u, body) if rng.random() < 0.5 else ForallT(u, body)
    if kind == "P":
        terms = [GlobalProb(sub()) for _ in range(2)]
    else:
        terms = [AgentProbAt(rng.choice(agents), rng.choice(scope), sub()) for _ in range(2)]
    return _random_compare(rng, terms)


def random_pfa(rng: random.Random, max_states: int = 3, max_letters: int = 2, max_den: int = 4):
    from .reductions.pfa import PFA

    n = rng.randint(1, max_states)
    k = rng.randint(1, max_letters)
    states = tuple(f"q{i}" for i in range(n))
    letters = tuple("abcdefgh"[:k])
    v0 = tuple(random_distribution(rng, n, n, max_den))
    mats = {a: tuple(tuple(random_distribution(rng, n, n, max_den)) for _ in range(n)) for a in letters}
    final = frozenset(q for q in states if rng.random() < 0.5)
    lam = rng.choice([Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(2, 3), Fraction(3, 4)])
    return PFA(states, letters, v0, mats, final, lam)


def random_lrs(rng: random.Random, max_order: int = 4, lo: int = -3, hi: int = 3):
    from .reductions.lrs import LRS

    k = rng.randint(1, max_order)
    coeffs = [Fraction(rng.randint(lo, hi)) for _ in range(k)]
    if coeffs[-1] == 0:
        coeffs[-1] = Fraction(rng.choice([-1, 1]))
    if rng.random() < 0.3:
        coeffs = [c / rng.choice([1, 2, 3]) for c in coeffs]
    init = [Fraction(rng.randint(lo, hi)) for _ in range(k)]
    return LRS(tuple(coeffs), tuple(init))

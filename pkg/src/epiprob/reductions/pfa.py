"""Probabilistic finite automata and their encoding as a partially observed chain.

The chain has a state ``q.a`` for every automaton state q and letter a.
Each step draws the next letter uniformly and moves q with that letter's
matrix; agent ``i`` observes only the letter, and ``p`` marks accepting q.
After observing a0 a1..am the agent's belief that ``p`` holds equals the
acceptance probability of a1..am.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from ..errors import EmptyWord, ModelSyntaxError, UnknownLetter
from ..markov import PODTMC, is_stochastic, vec_mat
from ..modelfile import format_rational, source_lines

AGENT = "i"
ACCEPT = "p"


@dataclass(frozen=True)
class PFA:
    states: tuple
    letters: tuple
    v0: tuple
    mats: Mapping[str, tuple]
    final: frozenset
    lam: Fraction

    __hash__ = object.__hash__

    def letter_matrix(self, a: str):
        try:
            return self.mats[a]
        except KeyError:
            raise UnknownLetter(f"unknown letter {a!r}") from None


def validate_pfa(P: PFA) -> list:
    problems = []
    n = len(P.states)
    if len(P.v0) != n or sum(P.v0, Fraction(0)) != 1 or any(not 0 <= x <= 1 for x in P.v0):
        problems.append("initial vector is not a distribution")
    if not P.letters:
        problems.append("empty alphabet")
    for a in P.letters:
        M = P.mats.get(a)
        if M is None or len(M) != n or not is_stochastic(M):
            problems.append(f"matrix of letter {a} is not stochastic")
    if not P.final <= set(P.states):
        problems.append("final states are not states")
    if not 0 < P.lam < 1:
        problems.append(f"cut-point {P.lam} outside (0,1)")
    return problems


def _word(P: PFA, w) -> tuple:
    if isinstance(w, str):
        w = tuple(w) if all(len(a) == 1 for a in P.letters) else tuple(w.split())
    return tuple(w)


def state_vector(P: PFA, w) -> tuple:
    """v0 A(a1) ... A(an); the empty word gives v0."""
    v = tuple(P.v0)
    for a in _word(P, w):
        v = vec_mat(v, P.letter_matrix(a))
    return v


def pfa_value(P: PFA, w) -> Fraction:
    """Acceptance probability of a nonempty word."""
    w = _word(P, w)
    if not w:
        raise EmptyWord("acceptance is defined for nonempty words")
    v = state_vector(P, w)
    return sum((x for q, x in zip(P.states, v) if q in P.final), Fraction(0))


def accepted_mass(P: PFA, v) -> Fraction:
    return sum((x for q, x in zip(P.states, v) if q in P.final), Fraction(0))


def pair_name(q: str, a: str) -> str:
    return f"{q}.{a}"


def pfa_to_podtmc(P: PFA) -> PODTMC:
    N = len(P.letters)
    pairs = [(q, a) for q in P.states for a in P.letters]
    states = tuple(pair_name(q, a) for q, a in pairs)
    qi = {q: k for k, q in enumerate(P.states)}
    init = tuple(P.v0[qi[q]] / N for q, _ in pairs)
    trans = tuple(tuple(P.mats[b][qi[q]][qi[q2]] / N for q2, b in pairs) for q, _ in pairs)
    obs = {AGENT: tuple(a for _, a in pairs)}
    labels = tuple(frozenset((ACCEPT,)) if q in P.final else frozenset() for q, _ in pairs)
    return PODTMC(states, init, trans, (AGENT,), obs, labels, frozenset((ACCEPT,)))


def words(letters, max_len: int, min_len: int = 1):
    for n in range(min_len, max_len + 1):
        yield from itertools.product(letters, repeat=n)


def pfa_correspondence_check(P: PFA, maxlen: int) -> bool:
    """Whether beliefs on the encoding reproduce the automaton for all words up to `maxlen`.

    For every word w and every time-0 letter a0, the perfect-recall belief
    after a0 w, summed over letter components, must equal v0 A(w), and the
    agent's probability of ``p`` must equal the acceptance probability of w.
    """
    from ..checker.ctl import CTLChecker
    from ..logic.ast import CurProb, Prop
    from ..semantics import spr_belief

    M = pfa_to_podtmc(P)
    term = CurProb(AGENT, Prop(ACCEPT))
    chk = CTLChecker(M, "spr", (AGENT,))
    for w in words(P.letters, maxlen):
        target = state_vector(P, w)
        expected = pfa_value(P, w)
        for a0 in P.letters:
            history = (a0,) + w
            post = spr_belief(M, AGENT, history).posterior
            agg = tuple(sum((post[pair_name(q, a)] for a in P.letters), Fraction(0)) for q in P.states)
            if agg != target:
                return False
            members = chk.groups(AGENT, len(w)).get(history)
            if not members:
                return False
            ctx, s, _ = members[0]
            if chk.term_value(term, ctx, s) != expected:
                return False
    return True


def emptiness_formula(P: PFA, T: int) -> str:
    """``EF<=T (Pr[i](p) > lambda)``, the bounded emptiness query on the encoding."""
    return f"EF<={T} (Pr[{AGENT}]({ACCEPT}) > {format_rational(P.lam)})"


# file format -------------------------------------------------------------------

def parse_pfa(text: str) -> PFA:
    """Text format::

        states: q1 q2
        letters: a b
        init: q1 1
        trans a: q1 -> q1 1/2, q1 -> q2 1/2, q2 -> q2 1
        final: q2
        lambda: 1/2
    """
    states, letters, init, mats, final, lam = [], [], {}, {}, set(), None
    for lineno, toks in source_lines(text):
        head, col = toks.next()
        if head in ("states", "letters"):
            toks.expect(":")
            target = states if head == "states" else letters
            while not toks.at_end():
                name, ncol = toks.name()
                if name in target:
                    raise ModelSyntaxError(f"duplicate name {name!r}", lineno, ncol)
                target.append(name)
        elif head == "init":
            toks.expect(":")

            def entry():
                q, qcol = toks.name("state")
                if q not in states:
                    raise ModelSyntaxError(f"undeclared state {q!r}", lineno, qcol)
                init[q] = toks.rational()
            toks.separated(entry)
        elif head == "trans":
            a, acol = toks.name("letter")
            if a not in letters:
                raise ModelSyntaxError(f"undeclared letter {a!r}", lineno, acol)
            toks.expect(":")
            rows = mats.setdefault(a, {})

            def entry():
                q, qcol = toks.name("state")
                toks.expect("->")
                q2, q2col = toks.name("state")
                for name, c in ((q, qcol), (q2, q2col)):
                    if name not in states:
                        raise ModelSyntaxError(f"undeclared state {name!r}", lineno, c)
                rows[(q, q2)] = toks.rational()
            toks.separated(entry)
        elif head == "final":
            toks.expect(":")
            while not toks.at_end():
                q, qcol = toks.name("state")
                if q not in states:
                    raise ModelSyntaxError(f"undeclared state {q!r}", lineno, qcol)
                final.add(q)
        elif head == "lambda":
            toks.expect(":")
            lam = toks.rational()
        else:
            raise ModelSyntaxError(f"unknown declaration {head!r}", lineno, col)
    if not states or not letters or lam is None:
        raise ModelSyntaxError("a PFA needs states, letters and lambda", 1, 1)
    zero = Fraction(0)
    v0 = tuple(init.get(q, zero) for q in states)
    full = {a: tuple(tuple(mats.get(a, {}).get((q, q2), zero) for q2 in states) for q in states) for a in letters}
    P = PFA(tuple(states), tuple(letters), v0, full, frozenset(final), lam)
    problems = validate_pfa(P)
    if problems:
        raise ModelSyntaxError("; ".join(problems), 1, 1)
    return P


def write_pfa(P: PFA) -> str:
    lines = ["states: " + " ".join(P.states), "letters: " + " ".join(P.letters)]
    lines.append("init: " + ", ".join(f"{q} {format_rational(x)}" for q, x in zip(P.states, P.v0) if x))
    for a in P.letters:
        entries = [f"{q} -> {q2} {format_rational(x)}"
                   for q, row in zip(P.states, P.mats[a]) for q2, x in zip(P.states, row) if x]
        lines.append(f"trans {a}: " + ", ".join(entries))
    if P.final:
        lines.append("final: " + " ".join(q for q in P.states if q in P.final))
    lines.append(f"lambda: {format_rational(P.lam)}")
    return "\n".join(lines) + "\n"

"""Brute-force reference implementations used by the tests.

Everything here works on explicitly enumerated runs (all positive paths
of a fixed length with their cylinder probabilities) and shares no code
with the library's evaluators beyond the model container itself.
"""
from __future__ import annotations

import itertools
import operator
from fractions import Fraction

from epiprob.logic.ast import (AgentProbAt, And, A, BoundedUntil, Compare, CurProb, ExistsT, ForallT, GlobalProb,
                               Know, KnowAt, Less, Not, PriorProb, Prop, PropAt, Top, X)

ZERO = Fraction(0)
_OPS = {"<": operator.lt, "<=": operator.le, "=": operator.eq, ">": operator.gt, ">=": operator.ge}


def compare(x, op, c):
    return _OPS[op](x, c)


def all_runs(model, length):
    """Every positive path with `length` states, with its probability (no library helpers)."""
    runs = [((s,), p) for s, p in enumerate(model.init) if p > 0]
    for _ in range(length - 1):
        runs = [(r + (j,), p * q) for r, p in runs for j, q in enumerate(model.trans[r[-1]]) if q > 0]
    return runs


def marginal(model, t):
    out = [ZERO] * len(model.states)
    for run, p in all_runs(model, t + 1):
        out[run[-1]] += p
    return out


def naive_power(A, n):
    k = len(A)
    P = [[Fraction(int(i == j)) for j in range(k)] for i in range(k)]
    for _ in range(n):
        P = [[sum((P[i][m] * A[m][j] for m in range(k)), ZERO) for j in range(k)] for i in range(k)]
    return P


def conditioned_posterior(model, agent, history):
    """P(state at time m | agent observed history[0..m]) by summing cylinder probabilities."""
    m = len(history) - 1
    weights = [ZERO] * len(model.states)
    for run, p in all_runs(model, m + 1):
        if all(model.observation(agent, s) == o for s, o in zip(run, history)):
            weights[run[-1]] += p
    total = sum(weights, ZERO)
    if total == 0:
        return None
    return {name: w / total for name, w in zip(model.states, weights)}


def observation_histories(model, agent, m):
    return sorted({tuple(model.observation(agent, s) for s in run) for run, _ in all_runs(model, m + 1)})


class RunOracle:
    """Branching-time semantics evaluated clause by clause over explicit runs of length H+1."""

    def __init__(self, model, semantics, H):
        self.model, self.semantics, self.H = model, semantics, H
        self.runs = all_runs(model, H + 1)
        self._memo = {}

    def local(self, agent, run, m):
        if self.semantics == "clk":
            return self.model.observation(agent, run[m])
        return tuple(self.model.observation(agent, s) for s in run[: m + 1])

    def sat(self, phi, run, m):
        key = (phi, run, m)
        if key not in self._memo:
            self._memo[key] = self._sat(phi, run, m)
        return self._memo[key]

    def _sat(self, phi, run, m):
        if m > self.H:
            raise ValueError("oracle horizon too small")
        t = type(phi)
        if t is Top:
            return True
        if t is Prop:
            return self.model.holds(run[m], phi.name)
        if t is Not:
            return not self.sat(phi.arg, run, m)
        if t is And:
            return self.sat(phi.left, run, m) and self.sat(phi.right, run, m)
        if t is X:
            return self.sat(phi.arg, run, m + 1)
        if t is BoundedUntil:
            return any(self.sat(phi.right, run, m + j) and all(self.sat(phi.left, run, m + i) for i in range(j))
                       for j in range(phi.bound + 1))
        if t is A:
            return all(self.sat(phi.arg, r2, m) for r2, _ in self.runs if r2[: m + 1] == run[: m + 1])
        if t is Know:
            here = self.local(phi.agent, run, m)
            return all(self.sat(phi.arg, r2, m) for r2, _ in self.runs if self.local(phi.agent, r2, m) == here)
        if t is Compare:
            values = [self.term(term, run, m) for term in phi.terms]
            return compare(phi.poly.evaluate(values), phi.op, phi.c)
        raise TypeError(phi)

    def term(self, term, run, m):
        at = 0 if isinstance(term, PriorProb) else m
        here = self.local(term.agent, run, at)
        total = good = ZERO
        for r2, p in self.runs:
            if self.local(term.agent, r2, at) == here:
                total += p
                if self.sat(term.arg, r2, at):
                    good += p
        return good / total

    def points(self, m):
        """One representative run per distinct prefix of length m+1."""
        seen = {}
        for run, _ in self.runs:
            seen.setdefault(run[: m + 1], run)
        return list(seen.values())


class TimeLogicOracle:
    """First-order time logic over explicit runs of length T+1, quantifiers over [0, T]."""

    def __init__(self, model, semantics, T):
        self.model, self.semantics, self.T = model, semantics, T
        self.runs = all_runs(model, T + 1)

    def local(self, agent, run, n):
        if self.semantics == "clk":
            return self.model.observation(agent, run[n])
        return tuple(self.model.observation(agent, s) for s in run[: n + 1])

    def sat(self, phi, tau, run):
        t = type(phi)
        if t is Top:
            return True
        if t is PropAt:
            return self.model.holds(run[tau[phi.var]], phi.prop)
        if t is Less:
            return tau[phi.left] < tau[phi.right]
        if t is Not:
            return not self.sat(phi.arg, tau, run)
        if t is And:
            return self.sat(phi.left, tau, run) and self.sat(phi.right, tau, run)
        if t is ForallT:
            return all(self.sat(phi.arg, {**tau, phi.var: n}, run) for n in range(self.T + 1))
        if t is ExistsT:
            return any(self.sat(phi.arg, {**tau, phi.var: n}, run) for n in range(self.T + 1))
        if t is KnowAt:
            n = tau[phi.var]
            here = self.local(phi.agent, run, n)
            return all(self.sat(phi.arg, tau, r2) for r2, _ in self.runs if self.local(phi.agent, r2, n) == here)
        if t is Compare:
            values = [self.term(term, tau, run) for term in phi.terms]
            return compare(phi.poly.evaluate(values), phi.op, phi.c)
        raise TypeError(phi)

    def term(self, term, tau, run):
        if isinstance(term, GlobalProb):
            return sum((p for r2, p in self.runs if self.sat(term.arg, tau, r2)), ZERO)
        assert isinstance(term, AgentProbAt)
        n = tau[term.var]
        here = self.local(term.agent, run, n)
        total = good = ZERO
        for r2, p in self.runs:
            if self.local(term.agent, r2, n) == here:
                total += p
                if self.sat(term.arg, tau, r2):
                    good += p
        return good / total


def pfa_nonempty_upto(P, T):
    """Whether some word of length <= T (the empty word included) is accepted above the cut-point."""
    for n in range(T + 1):
        for w in itertools.product(P.letters, repeat=n):
            v = list(P.v0)
            for a in w:
                M = P.mats[a]
                v = [sum((v[i] * M[i][j] for i in range(len(v))), ZERO) for j in range(len(v))]
            if sum((x for q, x in zip(P.states, v) if q in P.final), ZERO) > P.lam:
                return True
    return False


def lrs_naive(coeffs, init, n):
    u = list(init)
    while len(u) <= n:
        u.append(sum((a * u[-1 - i] for i, a in enumerate(coeffs)), ZERO))
    return u[n]


def transient_exists(model, prop, op, c, horizon):
    """exists t <= horizon . P(prop@t) op c, from iterated exact marginals."""
    good = [model.holds(s, prop) for s in range(len(model.states))]
    v = list(model.init)
    for t in range(horizon + 1):
        if t:
            v = [sum((v[i] * model.trans[i][j] for i in range(len(v))), ZERO) for j in range(len(v))]
        if compare(sum((x for x, g in zip(v, good) if g), ZERO), op, Fraction(c)):
            return True
    return False

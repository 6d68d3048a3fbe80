"""Evaluation of the first-order time logic with quantifiers truncated to [0, T].

A run is represented by a tuple of length T+1 whose unknown positions are
``None``.  Every subformula is evaluated on the partial run restricted to
the times it actually depends on, so probabilities are sums over partial
runs (built from matrix powers) rather than over full runs.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache

from ..errors import UnboundedQuantifier, UnboundVariable, UnknownAgent, UnknownProposition, UnsupportedSecondOrder
from ..logic.ast import (AgentProbAt, And, Compare, ExistsT, ForallSet, ForallT, GlobalProb, KnowAt, Less, Not,
                         PropAt, SetAt, Top, walk)
from ..markov import PODTMC, distribution_vector, matrix_power
from .ctl import compare
from .verdict import Fails, Holds, NoWitnessUpTo, Witness

ZERO = Fraction(0)


@lru_cache(maxsize=None)
def free_vars(phi) -> frozenset:
    t = type(phi)
    if t is Top:
        return frozenset()
    if t is PropAt:
        return frozenset((phi.var,))
    if t is SetAt:
        return frozenset((phi.var,))
    if t is Less:
        return frozenset((phi.left, phi.right))
    if t is Not:
        return free_vars(phi.arg)
    if t is And:
        return free_vars(phi.left) | free_vars(phi.right)
    if t in (ForallT, ExistsT):
        return free_vars(phi.arg) - {phi.var}
    if t is ForallSet:
        return free_vars(phi.arg)
    if t is KnowAt or t is AgentProbAt:
        return free_vars(phi.arg) | {phi.var}
    if t is GlobalProb:
        return free_vars(phi.arg)
    if t is Compare:
        return frozenset().union(*(free_vars(term) for term in phi.terms))
    raise TypeError(f"not a time-logic formula: {phi!r}")


def check_first_order(phi):
    for n in walk(phi):
        if isinstance(n, (SetAt, ForallSet)):
            raise UnsupportedSecondOrder("set variables are parsed but cannot be evaluated")


class WMLOEvaluator:
    def __init__(self, model: PODTMC, semantics: str, T: int):
        if semantics not in ("clk", "spr"):
            raise ValueError(f"unknown semantics {semantics!r}")
        if T is None:
            raise UnboundedQuantifier("a quantifier bound T is required")
        if T < 0:
            raise ValueError("the quantifier bound must be nonnegative")
        self.model = model
        self.semantics = semantics
        self.T = T
        self._rel: dict = {}
        self._holds: dict = {}
        self._runs: dict = {}
        self._powers: dict = {}
        self._by_local: dict = {}
        self._group: dict = {}
        self._dist: dict = {}

    # helpers ------------------------------------------------------------------
    def _tau_key(self, phi, tau: dict) -> tuple:
        try:
            return tuple(sorted((v, tau[v]) for v in free_vars(phi)))
        except KeyError as exc:
            raise UnboundVariable(f"time variable {exc.args[0]!r} has no value") from None

    def local_times(self, n: int) -> tuple:
        return (n,) if self.semantics == "clk" else tuple(range(n + 1))

    def local_value(self, agent, n, run) -> tuple:
        return tuple(self.model.observation(agent, run[t]) for t in self.local_times(n))

    def relevant(self, phi, tau) -> frozenset:
        """Times of the run the truth of `phi` under `tau` depends on."""
        key = (phi, self._tau_key(phi, tau))
        out = self._rel.get(key)
        if out is not None:
            return out
        t = type(phi)
        if t in (Top, Less):
            out = frozenset()
        elif t is PropAt:
            out = frozenset((tau[phi.var],))
        elif t is Not:
            out = self.relevant(phi.arg, tau)
        elif t is And:
            out = self.relevant(phi.left, tau) | self.relevant(phi.right, tau)
        elif t in (ForallT, ExistsT):
            out = frozenset().union(*(self.relevant(phi.arg, {**tau, phi.var: n}) for n in range(self.T + 1)))
        elif t is KnowAt:
            out = frozenset(self.local_times(tau[phi.var]))
        elif t is Compare:
            out = frozenset()
            for term in phi.terms:
                if isinstance(term, AgentProbAt):
                    out |= frozenset(self.local_times(tau[term.var]))
        elif t in (SetAt, ForallSet):
            raise UnsupportedSecondOrder("set variables are parsed but cannot be evaluated")
        else:
            raise TypeError(f"not a time-logic formula: {phi!r}")
        self._rel[key] = out
        return out

    def _power(self, d: int):
        P = self._powers.get(d)
        if P is None:
            P = matrix_power(self.model.trans, d)
            P = tuple(tuple((j, p) for j, p in enumerate(row) if p) for row in P)
            self._powers[d] = P
        return P

    def partial_runs(self, times) -> list:
        """(partial run, probability) over the sorted `times`, positive ones only."""
        times = tuple(sorted(times))
        out = self._runs.get(times)
        if out is not None:
            return out
        empty = (None,) * (self.T + 1)
        if not times:
            out = [(empty, Fraction(1))]
        else:
            start = times[0]
            dist = distribution_vector(self.model, start)
            frontier = []
            for s, p in enumerate(dist):
                if p:
                    run = list(empty)
                    run[start] = s
                    frontier.append((run, p))
            for prev, cur in zip(times, times[1:]):
                P = self._power(cur - prev)
                nxt = []
                for run, p in frontier:
                    for j, q in P[run[prev]]:
                        r2 = list(run)
                        r2[cur] = j
                        nxt.append((r2, p * q))
                frontier = nxt
            out = [(tuple(r), p) for r, p in frontier]
        self._runs[times] = out
        return out

    def _check_time(self, n):
        if n > self.T:
            raise ValueError(f"time {n} exceeds the bound {self.T}")

    def _local_groups(self, agent, n, times) -> dict:
        """Partial runs over `times` (which include the local times) grouped by local state."""
        key = (agent, n, times)
        out = self._by_local.get(key)
        if out is None:
            if not self.model.has_agent(agent):
                raise UnknownAgent(f"unknown agent {agent!r}")
            out = {}
            for run, p in self.partial_runs(times):
                out.setdefault(self.local_value(agent, n, run), []).append((run, p))
            self._by_local[key] = out
        return out

    # evaluation -----------------------------------------------------------------
    def holds(self, phi, tau: dict, run) -> bool:
        rel = self.relevant(phi, tau)
        key = (phi, self._tau_key(phi, tau), tuple(run[t] for t in sorted(rel)))
        val = self._holds.get(key)
        if val is None:
            val = self._eval(phi, tau, run)
            self._holds[key] = val
        return val

    def _eval(self, phi, tau, run) -> bool:
        t = type(phi)
        if t is Top:
            return True
        if t is PropAt:
            s = run[tau[phi.var]]
            if s is None:
                raise ValueError("partial run lacks a needed time")
            return self.model.holds(s, phi.prop)
        if t is Less:
            return tau[phi.left] < tau[phi.right]
        if t is Not:
            return not self.holds(phi.arg, tau, run)
        if t is And:
            return self.holds(phi.left, tau, run) and self.holds(phi.right, tau, run)
        if t is ForallT:
            return all(self.holds(phi.arg, {**tau, phi.var: n}, run) for n in range(self.T + 1))
        if t is ExistsT:
            return any(self.holds(phi.arg, {**tau, phi.var: n}, run) for n in range(self.T + 1))
        if t is KnowAt:
            return self._knows(phi, tau, run)
        if t is Compare:
            values = [self.term_value(term, tau, run) for term in phi.terms]
            return compare(phi.poly.evaluate(values), phi.op, phi.c)
        if t in (SetAt, ForallSet):
            raise UnsupportedSecondOrder("set variables are parsed but cannot be evaluated")
        raise TypeError(f"not a time-logic formula: {phi!r}")

    def _conditioned(self, agent, var, body, tau, run):
        n = tau[var]
        self._check_time(n)
        times = tuple(sorted(self.relevant(body, tau) | set(self.local_times(n))))
        groups = self._local_groups(agent, n, times)
        local = self.local_value(agent, n, run)
        return local, groups.get(local, [])

    def _knows(self, phi, tau, run) -> bool:
        local, members = self._conditioned(phi.agent, phi.var, phi.arg, tau, run)
        key = ("K", phi, self._tau_key(phi, tau), local)
        val = self._group.get(key)
        if val is None:
            val = all(self.holds(phi.arg, tau, r2) for r2, _ in members)
            self._group[key] = val
        return val

    def term_value(self, term, tau, run) -> Fraction:
        if isinstance(term, GlobalProb):
            key = ("P", term, self._tau_key(term, tau))
            val = self._group.get(key)
            if val is None:
                runs = self.partial_runs(self.relevant(term.arg, tau))
                val = sum((p for r2, p in runs if self.holds(term.arg, tau, r2)), ZERO)
                self._group[key] = val
            return val
        if isinstance(term, AgentProbAt):
            local, members = self._conditioned(term.agent, term.var, term.arg, tau, run)
            key = ("Pr", term, self._tau_key(term, tau), local)
            val = self._group.get(key)
            if val is None:
                total = sum((p for _, p in members), ZERO)
                if total == 0:
                    raise ValueError("agent local state has probability 0")
                good = sum((p for r2, p in members if self.holds(term.arg, tau, r2)), ZERO)
                val = good / total
                self._group[key] = val
            return val
        raise TypeError(f"not a probability term: {term!r}")

    # sentences -------------------------------------------------------------------
    def all_runs_satisfy(self, phi, tau=None) -> bool:
        tau = dict(tau or {})
        runs = self.partial_runs(self.relevant(phi, tau))
        return all(self.holds(phi, tau, r) for r, _ in runs)


def _check_props(model, phi):
    for n in walk(phi):
        if isinstance(n, PropAt) and not model.knows_proposition(n.prop):
            raise UnknownProposition(f"unknown proposition {n.prop!r}")
        if isinstance(n, (KnowAt, AgentProbAt)) and not model.has_agent(n.agent):
            raise UnknownAgent(f"unknown agent {n.agent!r}")


def eval_wmlo(model: PODTMC, semantics: str, phi, T: int | None):
    """Verdict for a sentence with every quantifier ranging over [0, T].

    A leading block of existential quantifiers over a run-independent body
    is a search: the lexicographically least Witness or NoWitnessUpTo(T).
    With a run-dependent body the search must succeed on every run: Holds
    if it does, otherwise NoWitnessUpTo(T).  Other sentences get Holds or
    Fails.
    """
    if T is None:
        raise UnboundedQuantifier("quantifiers need an explicit bound T")
    check_first_order(phi)
    if free_vars(phi):
        raise UnboundVariable(f"free time variables {sorted(free_vars(phi))}")
    _check_props(model, phi)
    ev = WMLOEvaluator(model, semantics, T)
    names, body = [], phi
    while isinstance(body, ExistsT):
        names.append(body.var)
        body = body.arg
    if not names:
        return Holds() if ev.all_runs_satisfy(phi) else Fails()
    if ev.relevant(phi, {}):
        return Holds() if ev.all_runs_satisfy(phi) else NoWitnessUpTo(T)
    empty = (None,) * (T + 1)
    for values in itertools.product(range(T + 1), repeat=len(names)):
        tau = dict(zip(names, values))
        if ev.holds(body, tau, empty):
            return Witness(tau)
    return NoWitnessUpTo(T)

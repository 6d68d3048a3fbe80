"""Exact evaluation of branching-time formulas over a model's points.

A point (r, m) is abstracted to ``(ctx, path)``: ``ctx`` carries what the
past contributes (the time, plus the initial state under the clock
semantics or the relevant agents' observation histories under perfect
recall) and ``path`` holds the current state followed by as many future
states as the formula can look at.  Points sharing ctx and current state
are indistinguishable to every operator, so layers of ``(ctx, state)``
with their probabilities replace explicit run enumeration.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from ..errors import HorizonTooSmall, InvalidPrefix, UnknownAgent, UnknownProposition, UnsupportedUnbounded
from ..logic.ast import (TRUE, A, And, BoundedUntil, Compare, CurProb, Know, Not, PriorProb, Prop, Top,
                         Until, X, agents_of, propositions_of)
from ..logic.transform import find_unsupported_until, qualitative_shape, temporal_depth
from ..markov import BOT, TOP, PODTMC, cylinder_probability
from ..semantics import infinite_path_states, positive_stay_states, reachable_states
from .verdict import Fails, Holds

ZERO = Fraction(0)


def compare(x: Fraction, op: str, c: Fraction) -> bool:
    if op == "<":
        return x < c
    if op == "<=":
        return x <= c
    if op == "=":
        return x == c
    if op == ">":
        return x > c
    return x >= c


@lru_cache(maxsize=None)
def reach(phi) -> int:
    """Future states the path-level truth of `phi` depends on (state operators reset to 0)."""
    if qualitative_shape(phi) is not None:
        return 0
    t = type(phi)
    if t in (Top, Prop, A, Know, Compare):
        return 0
    if t is Not:
        return reach(phi.arg)
    if t is And:
        return max(reach(phi.left), reach(phi.right))
    if t is X:
        return 1 + reach(phi.arg)
    if t is BoundedUntil:
        if phi.bound == 0:
            return reach(phi.right)
        return max(phi.bound + reach(phi.right), phi.bound - 1 + reach(phi.left))
    if t is Until:
        raise UnsupportedUnbounded(phi)
    raise TypeError(f"not a branching-time formula: {phi!r}")


@dataclass(frozen=True)
class PointSpec:
    """A point given by a path prefix; `time` defaults to its last position.

    States after `time` fix part of the future; any future the formula
    needs beyond the prefix is quantified universally.
    """
    prefix: tuple
    time: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        if not self.prefix:
            raise InvalidPrefix("empty prefix")
        if self.time is None:
            object.__setattr__(self, "time", len(self.prefix) - 1)
        if not 0 <= self.time < len(self.prefix):
            raise InvalidPrefix(f"time {self.time} outside the prefix")


class CTLChecker:
    """Evaluator for one model, semantics and set of observing agents."""

    def __init__(self, model: PODTMC, semantics: str, agents=()):
        if semantics not in ("clk", "spr"):
            raise ValueError(f"unknown semantics {semantics!r}")
        for a in agents:
            if not model.has_agent(a):
                raise UnknownAgent(f"unknown agent {a!r}")
        self.model = model
        self.semantics = semantics
        self.agents = tuple(sorted(set(agents)))
        self.slot = {a: k for k, a in enumerate(self.agents)}
        self._layers: list = []
        self._groups: dict = {}
        self._ext: dict = {}
        self._holds: dict = {}
        self._pext: dict = {}
        self._group_cache: dict = {}

    @classmethod
    def for_formula(cls, model, semantics, phi, extra_agents=()):
        for p in propositions_of(phi):
            if not model.knows_proposition(p):
                raise UnknownProposition(f"unknown proposition {p!r}")
        return cls(model, semantics, agents_of(phi) | set(extra_agents))

    # contexts -------------------------------------------------------------
    def initial_ctx(self, s: int):
        if self.semantics == "clk":
            return (0, s)
        return (0, tuple((self.model.observation(a, s),) for a in self.agents))

    def advance(self, ctx, s: int):
        if self.semantics == "clk":
            return (ctx[0] + 1, ctx[1])
        return (ctx[0] + 1, tuple(h + (self.model.observation(a, s),) for a, h in zip(self.agents, ctx[1])))

    def ctx_of_prefix(self, prefix) -> tuple:
        ctx = self.initial_ctx(prefix[0])
        for s in prefix[1:]:
            ctx = self.advance(ctx, s)
        return ctx

    def local_key(self, agent: str, ctx, s: int):
        if self.semantics == "clk":
            return self.model.observation(agent, s)
        return ctx[1][self.slot[agent]]

    def prior_key(self, agent: str, ctx):
        if self.semantics == "clk":
            return self.model.observation(agent, ctx[1])
        return ctx[1][self.slot[agent]][:1]

    # layers ----------------------------------------------------------------
    def layer(self, m: int) -> dict:
        """(ctx, state) -> probability for every time-m point class."""
        if not self._layers:
            first: dict = {}
            for s in self.model.initial_support:
                key = (self.initial_ctx(s), s)
                first[key] = first.get(key, ZERO) + self.model.init[s]
            self._layers.append(first)
        while len(self._layers) <= m:
            nxt: dict = {}
            for (ctx, s), p in self._layers[-1].items():
                for j, q in self.model.successors[s]:
                    key = (self.advance(ctx, j), j)
                    nxt[key] = nxt.get(key, ZERO) + p * q
            self._layers.append(nxt)
        return self._layers[m]

    def groups(self, agent: str, m: int) -> dict:
        """Local state -> [(ctx, state, probability)] at time m."""
        key = (agent, m)
        out = self._groups.get(key)
        if out is None:
            out = {}
            for (ctx, s), p in self.layer(m).items():
                out.setdefault(self.local_key(agent, ctx, s), []).append((ctx, s, p))
            self._groups[key] = out
        return out

    def extensions(self, s: int, d: int) -> list:
        """(path, probability) for all positive paths of d steps from s."""
        key = (s, d)
        out = self._ext.get(key)
        if out is None:
            if d == 0:
                out = [((s,), Fraction(1))]
            else:
                out = [((s,) + path, q * p)
                       for j, q in self.model.successors[s]
                       for path, p in self.extensions(j, d - 1)]
            self._ext[key] = out
        return out

    # evaluation ---------------------------------------------------------------
    def holds(self, phi, ctx, path) -> bool:
        r = reach(phi)
        if len(path) <= r:
            raise ValueError("path too short for the formula")
        key = (phi, ctx, path[:r + 1])
        val = self._holds.get(key)
        if val is None:
            val = self._eval(phi, ctx, path)
            self._holds[key] = val
        return val

    def all_extensions(self, phi, ctx, path) -> bool:
        """Truth for every continuation of `path` far enough for `phi`."""
        missing = reach(phi) + 1 - len(path)
        if missing <= 0:
            return self.holds(phi, ctx, path)
        return all(self.holds(phi, ctx, path[:-1] + ext)
                   for ext, _ in self.extensions(path[-1], missing))

    def prob_extensions(self, phi, ctx, s: int) -> Fraction:
        """Probability that a continuation from (ctx, s) satisfies `phi`."""
        key = (phi, ctx, s)
        val = self._pext.get(key)
        if val is None:
            d = reach(phi)
            val = sum((p for ext, p in self.extensions(s, d) if self.holds(phi, ctx, ext)), ZERO)
            self._pext[key] = val
        return val

    def _eval(self, phi, ctx, path) -> bool:
        shape = qualitative_shape(phi)
        if shape is not None:
            return self._qualitative(phi, shape, ctx, path[0])
        t = type(phi)
        if t is Top:
            return True
        if t is Prop:
            return self.model.holds(path[0], phi.name)
        if t is Not:
            return not self.holds(phi.arg, ctx, path)
        if t is And:
            return self.holds(phi.left, ctx, path) and self.holds(phi.right, ctx, path)
        if t is X:
            return self.holds(phi.arg, self.advance(ctx, path[1]), path[1:])
        if t is BoundedUntil:
            for j in range(phi.bound + 1):
                if self.holds(phi.right, ctx, path[j:]):
                    return True
                if j == phi.bound or not self.holds(phi.left, ctx, path[j:]):
                    return False
                ctx = self.advance(ctx, path[j + 1])
            return False
        if t is A:
            return self.all_extensions(phi.arg, ctx, path[:1])
        if t is Know:
            return self.knows(phi.agent, phi.arg, ctx, path[0])
        if t is Compare:
            values = [self.term_value(term, ctx, path[0]) for term in phi.terms]
            return compare(phi.poly.evaluate(values), phi.op, phi.c)
        if t is Until:
            raise UnsupportedUnbounded(phi)
        raise TypeError(f"not a branching-time formula: {phi!r}")

    def _members(self, agent, ctx, s):
        return self.groups(agent, ctx[0])[self.local_key(agent, ctx, s)]

    def _prior_members(self, agent, ctx):
        return self.groups(agent, 0)[self.prior_key(agent, ctx)]

    def knows(self, agent, phi, ctx, s) -> bool:
        m = ctx[0]
        key = ("K", phi, agent, m, self.local_key(agent, ctx, s))
        val = self._group_cache.get(key)
        if val is None:
            val = all(self.all_extensions(phi, c2, (s2,)) for c2, s2, _ in self._members(agent, ctx, s))
            self._group_cache[key] = val
        return val

    def group_probability(self, agent, phi, members, cache_key) -> Fraction:
        val = self._group_cache.get(cache_key)
        if val is None:
            total = sum((p for _, _, p in members), ZERO)
            good = sum((p * self.prob_extensions(phi, c2, s2) for c2, s2, p in members), ZERO)
            val = good / total
            self._group_cache[cache_key] = val
        return val

    def term_value(self, term, ctx, s) -> Fraction:
        if isinstance(term, CurProb):
            key = ("Pr", term.arg, term.agent, ctx[0], self.local_key(term.agent, ctx, s))
            return self.group_probability(term.agent, term.arg, self._members(term.agent, ctx, s), key)
        if isinstance(term, PriorProb):
            key = ("Pr", term.arg, term.agent, 0, self.prior_key(term.agent, ctx))
            return self.group_probability(term.agent, term.arg, self._prior_members(term.agent, ctx), key)
        raise TypeError(f"not a probability term: {term!r}")

    # qualitative shapes --------------------------------------------------------
    def _qualitative(self, phi, shape, ctx, s) -> bool:
        kind, agent, op, prop = shape
        states = self._support(kind, agent, ctx, s)
        model = self.model
        good = frozenset(j for j in range(model.n) if self._prop_holds(prop, j))
        if kind in ("A", "K"):
            if op == "F":
                # every path meets p iff no infinite path avoids it
                avoid = infinite_path_states(model, frozenset(range(model.n)) - good)
                return not (states & avoid)
            return not (reachable_states(model, states) - good)
        # probability shapes: only "is it 0" and "is it 1" matter
        if op == "G":
            is_one = not (reachable_states(model, states) - good)
            is_zero = not (states & positive_stay_states(model, good))
        else:
            bad = frozenset(range(model.n)) - good
            is_one = not (states & positive_stay_states(model, bad))
            is_zero = not (reachable_states(model, states) & good)
        c = phi.c
        if c == 1:
            return compare(Fraction(1), phi.op, c) if is_one else phi.op in ("<", "<=")
        return compare(ZERO, phi.op, c) if is_zero else phi.op in (">", ">=")

    def _prop_holds(self, prop, s) -> bool:
        return self.holds(prop, None, (s,))

    def _support(self, kind, agent, ctx, s) -> frozenset:
        if kind == "A":
            return frozenset((s,))
        members = self._prior_members(agent, ctx) if kind == "Prior" else self._members(agent, ctx, s)
        return frozenset(s2 for _, s2, p in members if p > 0)

    # points --------------------------------------------------------------------
    def eval_point(self, phi, point: PointSpec) -> bool:
        prefix = tuple(self.model.state_index(s) for s in point.prefix)
        cylinder_probability(self.model, prefix)
        ctx = self.ctx_of_prefix(prefix[:point.time + 1])
        return self.all_extensions(phi, ctx, prefix[point.time:])

    def points(self, m: int):
        return self.layer(m).keys()


def _check_supported(phi):
    bad = find_unsupported_until(phi)
    if bad is not None:
        raise UnsupportedUnbounded(bad)


def model_check(model: PODTMC, semantics: str, phi) -> object:
    """Holds iff `phi` is true at time 0 of every run."""
    return Holds() if not failing_initial_states(model, semantics, phi) else Fails()


def failing_initial_states(model: PODTMC, semantics: str, phi) -> list:
    """Initial states whose time-0 points do not all satisfy `phi`."""
    _check_supported(phi)
    chk = CTLChecker.for_formula(model, semantics, phi)
    return [s for s in model.initial_support
            if not chk.all_extensions(phi, chk.initial_ctx(s), (s,))]


def eval_point(model: PODTMC, semantics: str, phi, point, horizon: int) -> bool:
    _check_supported(phi)
    if not isinstance(point, PointSpec):
        point = PointSpec(tuple(point))
    depth = temporal_depth(phi)
    if horizon < depth:
        raise HorizonTooSmall(f"horizon {horizon} is below the formula's depth {depth}")
    chk = CTLChecker.for_formula(model, semantics, phi)
    return chk.eval_point(phi, point)


def eval_prob_term(model: PODTMC, semantics: str, term, point, horizon: int) -> Fraction:
    """Value of Pr[i](f) or Prior[i](f) at a point."""
    _check_supported(term.arg)
    if not isinstance(point, PointSpec):
        point = PointSpec(tuple(point))
    depth = temporal_depth(term.arg)
    if horizon < depth:
        raise HorizonTooSmall(f"horizon {horizon} is below the formula's depth {depth}")
    chk = CTLChecker.for_formula(model, semantics, term)
    prefix = tuple(model.state_index(s) for s in point.prefix[:point.time + 1])
    cylinder_probability(model, prefix)
    return chk.term_value(term, chk.ctx_of_prefix(prefix), prefix[-1])


def prop5_equivalence(model: PODTMC, semantics: str, phi, horizon: int, agents=None) -> bool:
    """Whether K[i] f and Pr[i](f) = 1 agree at every point up to `horizon`.

    Checks every agent of the model plus the built-in full-information and
    blind agents unless `agents` is given.
    """
    from ..logic.ast import var_compare

    _check_supported(Know(BOT, phi))
    if agents is None:
        agents = tuple(model.agents) + (TOP, BOT)
    for agent in agents:
        know = Know(agent, phi)
        sure = var_compare(CurProb(agent, phi), "=", 1)
        chk = CTLChecker.for_formula(model, semantics, And(know, sure), agents)
        for m in range(horizon + 1):
            for members in chk.groups(agent, m).values():
                ctx, s, _ = members[0]
                if chk.holds(know, ctx, (s,)) != chk.holds(sure, ctx, (s,)):
                    return False
    return True

"""Agent beliefs under the clock and perfect-recall semantics, and the
graph analyses behind qualitative (probability 0/1) questions."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import UnknownAgent, UnknownProposition, ZeroMassHistory, ZeroMassObservation
from .markov import PODTMC, distribution_vector, reachable_states

ZERO = Fraction(0)


@dataclass(frozen=True)
class ClockObs:
    """Clock local state: the current observation (the time lives in the belief)."""
    symbol: str


@dataclass(frozen=True)
class SprHistory:
    """Perfect-recall local state: every observation from time 0 on."""
    symbols: tuple

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(self.symbols))
        if not self.symbols:
            raise ValueError("an observation history has at least one symbol")


@dataclass(frozen=True)
class BeliefState:
    agent: str
    time: int
    conditioning: object
    posterior: Mapping[str, Fraction]

    def support(self) -> frozenset:
        return frozenset(s for s, p in self.posterior.items() if p > 0)


def _agent(model: PODTMC, agent: str):
    if not model.has_agent(agent):
        raise UnknownAgent(f"unknown agent {agent!r}")


def _normalise(model: PODTMC, weights: Sequence[Fraction]) -> dict:
    total = sum(weights, ZERO)
    return {name: w / total for name, w in zip(model.states, weights)}


def clock_belief(model: PODTMC, agent: str, t: int, o: str) -> BeliefState:
    """Posterior over time-t states given that `agent` observes `o` at time t."""
    _agent(model, agent)
    prior = distribution_vector(model, t)
    weights = [p if model.observation(agent, s) == o else ZERO for s, p in enumerate(prior)]
    if sum(weights, ZERO) == 0:
        raise ZeroMassObservation(f"agent {agent} observes {o!r} at time {t} with probability 0")
    return BeliefState(agent, t, ClockObs(o), _normalise(model, weights))


def forward(model: PODTMC, agent: str, history: Sequence[str]) -> tuple:
    """Unnormalised filter vector: alpha(s) = P(history observed and state s now)."""
    alpha = [p if model.observation(agent, s) == history[0] else ZERO for s, p in enumerate(model.init)]
    for sym in history[1:]:
        alpha = filter_step(model, agent, alpha, sym)
    return tuple(alpha)


def filter_step(model: PODTMC, agent: str, alpha: Sequence[Fraction], sym: str) -> list:
    nxt = [ZERO] * model.n
    for s, a in enumerate(alpha):
        if a:
            for j, p in model.successors[s]:
                nxt[j] += a * p
    return [a if model.observation(agent, j) == sym else ZERO for j, a in enumerate(nxt)]


def history_probability(model: PODTMC, agent: str, history: Sequence[str]) -> Fraction:
    _agent(model, agent)
    if len(history) == 0:
        raise ValueError("empty observation history")
    return sum(forward(model, agent, history), ZERO)


def spr_belief(model: PODTMC, agent: str, history: Sequence[str]) -> BeliefState:
    """Posterior over current states given the full observation history."""
    _agent(model, agent)
    hist = SprHistory(tuple(history))
    alpha = forward(model, agent, hist.symbols)
    if sum(alpha, ZERO) == 0:
        raise ZeroMassHistory(f"history {' '.join(hist.symbols)} of agent {agent} has probability 0")
    return BeliefState(agent, len(hist.symbols) - 1, hist, _normalise(model, alpha))


def enumerate_histories(model: PODTMC, agent: str, T: int) -> list:
    """Positive-probability histories of length T+1 with their probabilities, sorted."""
    _agent(model, agent)
    layer: dict = {}
    for s, p in enumerate(model.init):
        if p:
            key = (model.observation(agent, s),)
            vec = layer.setdefault(key, [ZERO] * model.n)
            vec[s] += p
    for _ in range(T):
        nxt: dict = {}
        for hist, alpha in layer.items():
            spread = [ZERO] * model.n
            for s, a in enumerate(alpha):
                if a:
                    for j, p in model.successors[s]:
                        spread[j] += a * p
            for j, a in enumerate(spread):
                if a:
                    key = hist + (model.observation(agent, j),)
                    vec = nxt.setdefault(key, [ZERO] * model.n)
                    vec[j] += a
        layer = nxt
    return sorted((hist, sum(alpha, ZERO)) for hist, alpha in layer.items())


def knowledge_support(model: PODTMC, agent: str, conditioning, t: int | None = None) -> frozenset:
    """States the agent considers possible; clock conditioning needs the time `t`."""
    if isinstance(conditioning, ClockObs):
        if t is None:
            raise ValueError("clock conditioning needs the time")
        return clock_belief(model, agent, t, conditioning.symbol).support()
    if isinstance(conditioning, SprHistory):
        return spr_belief(model, agent, conditioning.symbols).support()
    raise TypeError(f"unknown conditioning {conditioning!r}")


# graph analyses --------------------------------------------------------------

def infinite_path_states(model: PODTMC, good: frozenset) -> frozenset:
    """States from which some infinite path stays inside `good`.

    Greatest fixed point: repeatedly drop good states without a good successor.
    """
    alive = set(good)
    changed = True
    while changed:
        changed = False
        for s in list(alive):
            if not any(j in alive for j, _ in model.successors[s]):
                alive.discard(s)
                changed = True
    return frozenset(alive)


def closed_core(model: PODTMC, good: frozenset) -> frozenset:
    """Largest subset of `good` that no positive transition leaves."""
    core = set(good)
    changed = True
    while changed:
        changed = False
        for s in list(core):
            if any(j not in core for j, _ in model.successors[s]):
                core.discard(s)
                changed = True
    return frozenset(core)


def positive_stay_states(model: PODTMC, good: frozenset) -> frozenset:
    """States s with P_s(always good) > 0: those reaching the closed core through good states."""
    core = closed_core(model, good)
    preds: dict = {}
    for s in good:
        for j, _ in model.successors[s]:
            preds.setdefault(j, set()).add(s)
    seen = set(core)
    stack = list(core)
    while stack:
        j = stack.pop()
        for s in preds.get(j, ()):
            if s not in seen:
                seen.add(s)
                stack.append(s)
    return frozenset(seen)


def can_reach(model: PODTMC, start: Iterable[int], target: frozenset) -> bool:
    return bool(reachable_states(model, start) & target)


def _states(model: PODTMC, refs) -> frozenset:
    return frozenset(model.state_index(r) for r in refs)


def _prop_states(model: PODTMC, p: str) -> frozenset:
    if not model.knows_proposition(p):
        raise UnknownProposition(f"unknown proposition {p!r}")
    return model.prop_states(p)


def exists_path_globally(model: PODTMC, start, p: str) -> bool:
    """Whether some infinite path from a state in `start` stays in p-states forever."""
    good = _prop_states(model, p)
    return bool(_states(model, start) & infinite_path_states(model, good))


def prob_globally_positive(model: PODTMC, start, p: str) -> bool:
    """Whether P(always p) > 0 from the distribution `start` (a name->weight map or a tuple)."""
    good = _prop_states(model, p)
    if isinstance(start, Mapping):
        support = {model.state_index(s) for s, w in start.items() if w > 0}
    else:
        support = {i for i, w in enumerate(start) if w > 0}
    return bool(support & positive_stay_states(model, good))

"""Exact-rational partially observed Markov chains.

Everything here works over :class:`fractions.Fraction`; no floating point is
used on any path that produces a verdict.  Matrices are plain tuples of rows.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Iterable, Mapping, Sequence, Union

from .errors import DimensionMismatch, InvalidPrefix

Rational = Fraction
Matrix = tuple  # tuple[tuple[Fraction, ...], ...]

# Built-in agents: TOP sees the state, BOT sees nothing.
TOP = "top"
BOT = "bot"
BLIND_SYMBOL = "blind"
OBS_PREFIX = "@obs_"
STATE_PREFIX = "@state_"

StateRef = Union[str, int]


def rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass an int, str or Fraction")
    return Fraction(x)


def obs_prop(agent: str, symbol: str) -> str:
    """Name of the derived proposition that holds where `agent` observes `symbol`."""
    return f"{OBS_PREFIX}{agent}_{symbol}"


def state_prop(state: str) -> str:
    return f"{STATE_PREFIX}{state}"


# --------------------------------------------------------------------------
# matrices

def as_matrix(rows) -> Matrix:
    m = tuple(tuple(rational(x) for x in row) for row in rows)
    if m and any(len(r) != len(m[0]) for r in m):
        raise DimensionMismatch("ragged matrix")
    return m


def identity(n: int) -> Matrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def shape(A: Matrix) -> tuple[int, int]:
    return len(A), (len(A[0]) if A else 0)


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    n, k = shape(A)
    k2, m = shape(B)
    if k != k2:
        raise DimensionMismatch(f"cannot multiply {n}x{k} by {k2}x{m}")
    cols = list(zip(*B)) if B else []
    return tuple(tuple(sum((a * b for a, b in zip(row, col) if a and b), Fraction(0))
                       for col in cols) for row in A)


def vec_mat(v: Sequence[Fraction], A: Matrix) -> tuple:
    n, m = shape(A)
    if len(v) != n:
        raise DimensionMismatch(f"vector of length {len(v)} against {n}x{m} matrix")
    out = [Fraction(0)] * m
    for x, row in zip(v, A):
        if x:
            for j, a in enumerate(row):
                if a:
                    out[j] += x * a
    return tuple(out)


def matrix_power(A: Matrix, n: int) -> Matrix:
    """A**n by repeated squaring; A**0 is the identity."""
    A = as_matrix(A)
    rows, cols = shape(A)
    if rows != cols:
        raise DimensionMismatch(f"matrix_power needs a square matrix, got {rows}x{cols}")
    if n < 0:
        raise ValueError("negative exponent")
    result = identity(rows)
    base = A
    while n:
        if n & 1:
            result = mat_mul(result, base)
        n >>= 1
        if n:
            base = mat_mul(base, base)
    return result


def bilinear_form(v: Sequence, A: Matrix, n: int, w: Sequence) -> Fraction:
    """v . A**n . w, exactly."""
    v = [rational(x) for x in v]
    w = [rational(x) for x in w]
    P = matrix_power(A, n)
    rows, cols = shape(P)
    if len(v) != rows or len(w) != cols:
        raise DimensionMismatch("vector lengths do not conform to the matrix")
    return sum((x * y for x, y in zip(vec_mat(v, P), w)), Fraction(0))


def is_stochastic(A: Matrix) -> bool:
    return all(all(0 <= a <= 1 for a in row) and sum(row) == 1 for row in A)


# --------------------------------------------------------------------------
# the model

@dataclass(frozen=True, eq=True)
class PODTMC:
    """States, initial distribution, transition matrix, per-agent observations, labels.

    ``obs`` maps an agent to a tuple holding one observation symbol per state
    (``None`` marks a missing entry, which :func:`validate` reports).  Models
    are never validated on construction so broken ones can still be inspected.
    """

    states: tuple
    init: tuple
    trans: Matrix
    agents: tuple
    obs: Mapping[str, tuple] = field(hash=False)
    labels: tuple
    declared: frozenset = frozenset()  # propositions known even if no state carries them

    __hash__ = object.__hash__

    @cached_property
    def index(self) -> dict:
        return {s: i for i, s in enumerate(self.states)}

    def state_index(self, ref: StateRef) -> int:
        if isinstance(ref, int):
            if not 0 <= ref < len(self.states):
                raise KeyError(f"state index {ref} out of range")
            return ref
        try:
            return self.index[ref]
        except KeyError:
            raise KeyError(f"unknown state {ref!r}") from None

    @property
    def n(self) -> int:
        return len(self.states)

    @cached_property
    def successors(self) -> tuple:
        """Per state, the (successor, probability) pairs with positive probability."""
        return tuple(tuple((j, p) for j, p in enumerate(row) if p > 0) for row in self.trans)

    @cached_property
    def initial_support(self) -> tuple:
        return tuple(i for i, p in enumerate(self.init) if p > 0)

    def has_agent(self, agent: str) -> bool:
        return agent in (TOP, BOT) or agent in self.obs

    def observation(self, agent: str, s: int) -> str:
        if agent == TOP and TOP not in self.obs:
            return self.states[s]
        if agent == BOT and BOT not in self.obs:
            return BLIND_SYMBOL
        return self.obs[agent][s]

    def observation_symbols(self, agent: str) -> tuple:
        """Observation range of `agent`, sorted."""
        return tuple(sorted({self.observation(agent, s) for s in range(self.n)}))

    @cached_property
    def user_propositions(self) -> frozenset:
        return frozenset(self.declared).union(*self.labels)

    @cached_property
    def _derived(self) -> dict:
        table: dict = {}
        for agent in tuple(self.agents) + tuple(a for a in (TOP, BOT) if a not in self.obs):
            for s in range(self.n):
                sym = self.observation(agent, s)
                if sym is None:
                    continue
                table.setdefault(obs_prop(agent, sym), set()).add(s)
        for s, name in enumerate(self.states):
            table.setdefault(state_prop(name), set()).add(s)
        return {k: frozenset(v) for k, v in table.items()}

    def is_derived(self, prop: str) -> bool:
        return prop in self._derived

    def knows_proposition(self, prop: str) -> bool:
        return prop == "true" or prop in self.user_propositions or prop in self._derived

    def holds(self, s: int, prop: str) -> bool:
        """Whether `prop` labels state `s`; reserved ``@obs_``/``@state_`` names are derived."""
        if prop in self.labels[s]:
            return True
        derived = self._derived.get(prop)
        return derived is not None and s in derived

    def prop_states(self, prop: str) -> frozenset:
        if prop == "true":
            return frozenset(range(self.n))
        return frozenset(s for s in range(self.n) if self.holds(s, prop))

    def init_distribution(self) -> dict:
        return dict(zip(self.states, self.init))

    def with_derived_labels(self) -> "PODTMC":
        """Copy whose labelling carries every derived observation/state proposition."""
        extra = [set() for _ in self.states]
        for prop, members in self._derived.items():
            for s in members:
                extra[s].add(prop)
        labels = tuple(frozenset(l | e) for l, e in zip(self.labels, extra))
        return PODTMC(self.states, self.init, self.trans, self.agents, dict(self.obs), labels, self.declared)


def make_model(states: Sequence[str],
               init: Mapping[str, object],
               trans: Mapping,
               obs: Mapping[str, Mapping[str, str]] | None = None,
               labels: Mapping[str, Iterable[str]] | None = None) -> PODTMC:
    """Build a model from name-keyed dictionaries.

    ``trans`` is either ``{(src, dst): p}`` or ``{src: {dst: p}}``; anything
    missing defaults to 0.  ``obs`` maps each agent to ``{state: symbol}``.
    """
    states = tuple(states)
    idx = {s: i for i, s in enumerate(states)}
    n = len(states)
    pi = [Fraction(0)] * n
    for s, p in init.items():
        pi[idx[s]] = rational(p)
    rows = [[Fraction(0)] * n for _ in range(n)]
    for key, val in trans.items():
        if isinstance(key, tuple):
            src, dst = key
            rows[idx[src]][idx[dst]] = rational(val)
        else:
            for dst, p in val.items():
                rows[idx[key]][idx[dst]] = rational(p)
    obs = obs or {}
    obs_t = {a: tuple(m.get(s) for s in states) for a, m in obs.items()}
    labels = labels or {}
    lab = tuple(frozenset(labels.get(s, ())) for s in states)
    return PODTMC(states, tuple(pi), tuple(tuple(r) for r in rows), tuple(obs), obs_t, lab)


def validate(model: PODTMC) -> list:
    """Every invariant violation of `model`, as human-readable strings (empty when valid)."""
    problems = []
    n = len(model.states)
    if n == 0:
        problems.append("model has no states")
    seen = set()
    for s in model.states:
        if s in seen:
            problems.append(f"duplicate state name {s!r}")
        seen.add(s)
    if len(model.init) != n:
        problems.append(f"init has {len(model.init)} entries for {n} states")
    else:
        for i, p in enumerate(model.init):
            if not 0 <= p <= 1:
                problems.append(f"init entry {i} ({model.states[i]}) = {p} outside [0,1]")
        total = sum(model.init, Fraction(0))
        if total != 1:
            problems.append(f"init sums to {total}")
    if len(model.trans) != n or any(len(r) != n for r in model.trans):
        problems.append(f"transition matrix is not {n}x{n}")
    else:
        for i, row in enumerate(model.trans):
            for j, p in enumerate(row):
                if not 0 <= p <= 1:
                    problems.append(f"entry ({i},{j}) = {p} outside [0,1]")
            total = sum(row, Fraction(0))
            if total != 1:
                problems.append(f"row {i} sums to {total} (state {model.states[i]})")
    for agent in model.agents:
        if agent in (TOP, BOT):
            problems.append(f"agent name {agent!r} is reserved")
        row = model.obs.get(agent)
        if row is None or len(row) != n:
            problems.append(f"agent {agent} has no observation map over all states")
            continue
        for i, sym in enumerate(row):
            if sym is None:
                problems.append(f"agent {agent} has no observation for state {model.states[i]}")
    if len(model.labels) != n:
        problems.append("labelling does not cover all states")
    else:
        for i, props in enumerate(model.labels):
            for p in props:
                if p.startswith("@"):
                    problems.append(f"proposition {p!r} at state {model.states[i]} uses the reserved '@' prefix")
                if p == "true":
                    problems.append(f"proposition name 'true' is reserved (state {model.states[i]})")
    # derived names must be unambiguous
    owners: dict = {}
    for agent in model.agents:
        row = model.obs.get(agent) or ()
        for sym in set(row) - {None}:
            owners.setdefault(obs_prop(agent, sym), set()).add((agent, sym))
    for name, who in owners.items():
        if len(who) > 1:
            problems.append(f"derived proposition {name} is ambiguous between {sorted(who)}")
    return problems


def _prefix_indices(model: PODTMC, prefix: Sequence[StateRef]) -> tuple:
    if len(prefix) == 0:
        raise InvalidPrefix("empty prefix")
    try:
        return tuple(model.state_index(s) for s in prefix)
    except KeyError as exc:
        raise InvalidPrefix(str(exc)) from None


def cylinder_probability(model: PODTMC, prefix: Sequence[StateRef]) -> Fraction:
    """Measure of the runs extending `prefix`: PI(s0) * prod PT(s_k, s_k+1)."""
    path = _prefix_indices(model, prefix)
    p = model.init[path[0]]
    if p == 0:
        raise InvalidPrefix(f"initial probability of {model.states[path[0]]} is 0")
    for a, b in zip(path, path[1:]):
        step = model.trans[a][b]
        if step == 0:
            raise InvalidPrefix(f"transition {model.states[a]} -> {model.states[b]} has probability 0")
        p *= step
    return p


def is_path(model: PODTMC, prefix: Sequence[StateRef]) -> bool:
    try:
        cylinder_probability(model, prefix)
    except InvalidPrefix:
        return False
    return True


def distribution_vector(model: PODTMC, t: int) -> tuple:
    """PI . PT**t as a tuple indexed by state."""
    v = tuple(model.init)
    for _ in range(t):
        v = vec_mat(v, model.trans)
    return v


def distribution_at(model: PODTMC, t: int) -> dict:
    """Exact marginal distribution over states at time t (all states, zeros included)."""
    if t < 0:
        raise ValueError("time must be nonnegative")
    return dict(zip(model.states, distribution_vector(model, t)))


def enumerate_paths(model: PODTMC, length: int):
    """Yield (path, probability) for every positive-probability path with `length` states."""
    if length <= 0:
        return
    frontier = [((s,), model.init[s]) for s in model.initial_support]
    for _ in range(length - 1):
        frontier = [(path + (j,), p * q) for path, p in frontier for j, q in model.successors[path[-1]]]
    yield from frontier


def reachable_states(model: PODTMC, start: Iterable[int]) -> frozenset:
    seen = set(start)
    stack = list(seen)
    while stack:
        s = stack.pop()
        for j, _ in model.successors[s]:
            if j not in seen:
                seen.add(j)
                stack.append(j)
    return frozenset(seen)


def all_prefix_states(model: PODTMC, length: int) -> list:
    """Every state tuple of the given length, ignoring probabilities (for oracles)."""
    return list(product(range(model.n), repeat=length))

"""Abstract syntax for the branching-time logic and the monadic time logic.

Both logics share ``Top``, ``Not``, ``And`` and ``Compare``.  The branching
logic adds ``Prop``, ``A``, ``X``, ``Until``, ``BoundedUntil`` and ``Know``
with the probability terms ``CurProb``/``PriorProb``.  The time logic adds
explicit time variables: ``PropAt``, ``Less``, ``KnowAt``, the quantifiers,
and the probability terms ``GlobalProb``/``AgentProbAt``.  Set variables
(``SetAt``, ``ForallSet``) exist only so formulas can be parsed and printed.

Nodes are immutable and hash in O(1) after the first call, so they work as
memo keys.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .poly import Poly

OPS = ("<", "<=", "=", ">", ">=")


class Node:
    def _key(self) -> tuple:
        k = self.__dict__.get("_k")
        if k is None:
            k = tuple(getattr(self, f) for f in self.__dataclass_fields__)
            object.__setattr__(self, "_k", k)
        return k

    def __eq__(self, other):
        if self is other:
            return True
        return type(self) is type(other) and hash(self) == hash(other) and self._key() == other._key()

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((type(self).__name__,) + self._key())
            object.__setattr__(self, "_hash", h)
        return h

    def __str__(self):
        return to_text(self)


def node(cls):
    return dataclass(frozen=True, eq=False)(cls)


# shared -------------------------------------------------------------------

@node
class Top(Node):
    pass


@node
class Not(Node):
    arg: Node


@node
class And(Node):
    left: Node
    right: Node


@node
class Compare(Node):
    """``poly(terms) op c``; terms are canonically ordered and all used by poly."""

    poly: Poly
    op: str
    c: Fraction
    terms: tuple

    def __post_init__(self):
        if self.op not in OPS:
            raise ValueError(f"unknown comparison {self.op!r}")
        object.__setattr__(self, "c", Fraction(self.c))
        text = {v: to_text(self.terms[v]) for v in self.poly.variables()}
        distinct = sorted(set(text.values()))  # equal terms share one variable
        slot = {t: k for k, t in enumerate(distinct)}
        first = {}
        for v, t in text.items():
            first.setdefault(t, self.terms[v])
        object.__setattr__(self, "poly", self.poly.remap({v: slot[t] for v, t in text.items()}))
        object.__setattr__(self, "terms", tuple(first[t] for t in distinct))


# branching-time logic -----------------------------------------------------

@node
class Prop(Node):
    name: str


@node
class A(Node):
    arg: Node


@node
class X(Node):
    arg: Node


@node
class Until(Node):
    left: Node
    right: Node


@node
class BoundedUntil(Node):
    left: Node
    right: Node
    bound: int

    def __post_init__(self):
        if self.bound < 0:
            raise ValueError("until bound must be nonnegative")


@node
class Know(Node):
    agent: str
    arg: Node


@node
class CurProb(Node):
    agent: str
    arg: Node


@node
class PriorProb(Node):
    agent: str
    arg: Node


# monadic time logic -------------------------------------------------------

@node
class PropAt(Node):
    prop: str
    var: str


@node
class SetAt(Node):
    setvar: str
    var: str


@node
class Less(Node):
    left: str
    right: str


@node
class KnowAt(Node):
    agent: str
    var: str
    arg: Node


@node
class ForallT(Node):
    var: str
    arg: Node


@node
class ExistsT(Node):
    var: str
    arg: Node


@node
class ForallSet(Node):
    setvar: str
    arg: Node


@node
class GlobalProb(Node):
    arg: Node


@node
class AgentProbAt(Node):
    agent: str
    var: str
    arg: Node


TRUE = Top()
FALSE = Not(TRUE)


# derived connectives --------------------------------------------------------

def Or(a, b):
    return Not(And(Not(a), Not(b)))


def Implies(a, b):
    return Not(And(a, Not(b)))


def Iff(a, b):
    return And(Implies(a, b), Implies(b, a))


def E(a):
    return Not(A(Not(a)))


def F(a, bound=None):
    return Until(TRUE, a) if bound is None else BoundedUntil(TRUE, a, bound)


def G(a, bound=None):
    return Not(F(Not(a), bound))


def conj(items):
    items = list(items)
    if not items:
        return TRUE
    out = items[0]
    for it in items[1:]:
        out = And(out, it)
    return out


def var_compare(term, op, c):
    """The comparison ``term op c``."""
    return Compare(Poly.var(0), op, Fraction(c), (term,))


# printing -------------------------------------------------------------------

def _frac(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


_SELF_DELIMITED = (Top, Prop, PropAt, And, Until, BoundedUntil, ForallT, ExistsT, ForallSet)


def _wrap(phi) -> str:
    text = to_text(phi)
    if isinstance(phi, _SELF_DELIMITED) or (isinstance(phi, Not) and phi.arg == TRUE):
        return text
    return f"({text})"


def to_text(phi) -> str:
    """Concrete syntax accepted by the parsers."""
    t = type(phi)
    if t is Top:
        return "true"
    if t is Prop:
        return phi.name
    if t is Not:
        if phi.arg == TRUE:
            return "false"
        return "not " + _wrap(phi.arg)
    if t is And:
        return f"({to_text(phi.left)} and {to_text(phi.right)})"
    if t is A:
        return "A " + _wrap(phi.arg)
    if t is X:
        return "X " + _wrap(phi.arg)
    if t is Until:
        return f"({to_text(phi.left)} U {to_text(phi.right)})"
    if t is BoundedUntil:
        return f"({to_text(phi.left)} U<={phi.bound} {to_text(phi.right)})"
    if t is Know:
        return f"K[{phi.agent}] " + _wrap(phi.arg)
    if t is Compare:
        names = [to_text(term) for term in phi.terms]
        return f"{phi.poly.to_text(lambda v: names[v])} {phi.op} {_frac(phi.c)}"
    if t is CurProb:
        return f"Pr[{phi.agent}]({to_text(phi.arg)})"
    if t is PriorProb:
        return f"Prior[{phi.agent}]({to_text(phi.arg)})"
    if t is PropAt:
        return f"{phi.prop}@{phi.var}"
    if t is SetAt:
        return f"{phi.var} in {phi.setvar}"
    if t is Less:
        return f"{phi.left} < {phi.right}"
    if t is KnowAt:
        return f"K[{phi.agent}]@{phi.var} " + _wrap(phi.arg)
    if t is ForallT:
        return f"(forall {phi.var} . {to_text(phi.arg)})"
    if t is ExistsT:
        return f"(exists {phi.var} . {to_text(phi.arg)})"
    if t is ForallSet:
        return f"(forall set {phi.setvar} . {to_text(phi.arg)})"
    if t is GlobalProb:
        return f"P({to_text(phi.arg)})"
    if t is AgentProbAt:
        return f"Pr[{phi.agent}]@{phi.var}({to_text(phi.arg)})"
    raise TypeError(f"not a formula node: {phi!r}")


# traversal ------------------------------------------------------------------

def children(phi) -> tuple:
    t = type(phi)
    if t in (Top, Prop, PropAt, SetAt, Less):
        return ()
    if t in (And, Until, BoundedUntil):
        return (phi.left, phi.right)
    if t is Compare:
        return phi.terms
    return (phi.arg,)


def walk(phi):
    """Pre-order iteration over all nodes (probability terms included)."""
    stack = [phi]
    while stack:
        cur = stack.pop()
        yield cur
        stack.extend(reversed(children(cur)))


def agents_of(phi) -> set:
    return {n.agent for n in walk(phi) if hasattr(n, "agent")}


def propositions_of(phi) -> set:
    out = set()
    for n in walk(phi):
        if isinstance(n, Prop):
            out.add(n.name)
        elif isinstance(n, PropAt):
            out.add(n.prop)
    return out


def is_propositional(phi) -> bool:
    return all(isinstance(n, (Top, Prop, Not, And)) for n in walk(phi))

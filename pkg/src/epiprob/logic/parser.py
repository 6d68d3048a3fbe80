"""Recursive-descent parsers for both logics.

Branching-time syntax::

    p | true | false | not f | f and f | f or f | f -> f | f <-> f
    A f | E f | X f | F f | G f | F<=k f | G<=k f | f U f | f U<=k f
    K[i] f | poly op c          (terms Pr[i](f), Prior[i](f))

Time-logic syntax::

    p@t | t in S | t < u (also <=, >, >=, =, !=) | K[i]@t f
    forall t u . f | exists t . f | forall set S . f
    poly op c                   (terms P(f), P(f | g), Pr[i]@t(f))

Precedence from loosest: ``<->``, ``->`` (right associative), ``or``,
``and``, ``U`` (right associative), unary operators.  Quantifier bodies
extend as far right as possible.
"""
from __future__ import annotations

import re
from fractions import Fraction

from ..errors import FormulaSyntaxError, UnboundVariable
from .ast import (TRUE, FALSE, A, And, AgentProbAt, BoundedUntil, Compare, CurProb, E, ExistsT,
                  F, ForallSet, ForallT, G, GlobalProb, Iff, Implies, KnowAt, Know, Less, Not, Or,
                  PriorProb, Prop, PropAt, SetAt, Until, X)
from .poly import Poly

_TOKEN = re.compile(r"""
    \s*(?:
      (?P<num>\d+(?:\.\d+)?)
    | (?P<ident>@(?:state|obs)_[A-Za-z0-9_'.]+|[A-Za-z_][A-Za-z0-9_']*(?:\.[A-Za-z0-9_']+)*)
    | (?P<sym><->|->|<=|>=|!=|/\\|\\/|[()\[\],.+\-*/^<>=!&|~@])
    )""", re.VERBOSE)

_REL = ("<", "<=", "=", ">", ">=", "!=")
_CTL_KEYWORDS = {"not", "and", "or", "true", "false", "A", "E", "X", "F", "G", "U", "K", "Pr", "Prior"}
_WMLO_KEYWORDS = {"not", "and", "or", "true", "false", "forall", "exists", "set", "in", "K", "Pr", "P"}


def tokenize(text: str) -> list:
    """List of (kind, value, position); kind is 'num', 'ident', 'sym' or 'end'."""
    out = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


_STACKED = re.compile(r"[AEXFG]{2,}$")


def _split_stacked(toks):
    """``EF`` and friends read as consecutive unary operators."""
    out = []
    for kind, val, pos in toks:
        if kind == "ident" and _STACKED.match(val):
            out.extend(("ident", ch, pos + k) for k, ch in enumerate(val))
        else:
            out.append((kind, val, pos))
    return out


class _CondTerm:
    """P(f | g) while a comparison is being assembled."""

    def __init__(self, event, given):
        self.event = event
        self.given = given

    def __eq__(self, other):
        return isinstance(other, _CondTerm) and (self.event, self.given) == (other.event, other.given)

    def __hash__(self):
        return hash((self.event, self.given))


class _Parser:
    def __init__(self, text: str, wmlo: bool, free_vars=()):
        self.text = text
        self.toks = tokenize(text)
        if not wmlo:
            self.toks = _split_stacked(self.toks)
        self.i = 0
        self.wmlo = wmlo
        self.keywords = _WMLO_KEYWORDS if wmlo else _CTL_KEYWORDS
        self.scope = list(free_vars)

    # token helpers
    def peek(self, k=0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, value, k=0) -> bool:
        kind, val, _ = self.peek(k)
        return kind != "end" and val == value

    def error(self, message, pos=None):
        if pos is None:
            pos = self.peek()[2]
        return FormulaSyntaxError(message, pos, self.text)

    def advance(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, value):
        kind, val, pos = self.peek()
        if kind == "end" or val != value:
            raise self.error(f"expected {value!r}, found {val or 'end of input'!r}")
        self.i += 1

    def accept(self, *values) -> bool:
        if any(self.at(v) for v in values):
            self.i += 1
            return True
        return False

    def name(self, what) -> str:
        kind, val, pos = self.peek()
        if kind != "ident" or val in self.keywords:
            raise self.error(f"expected {what}, found {val or 'end of input'!r}")
        self.i += 1
        return val

    def integer(self) -> int:
        kind, val, pos = self.peek()
        if kind != "num" or "." in val:
            raise self.error(f"expected a natural number, found {val or 'end of input'!r}")
        self.i += 1
        return int(val)

    def timevar(self) -> str:
        pos = self.peek()[2]
        v = self.name("time variable")
        if v not in self.scope:
            raise UnboundVariable(f"unbound time variable {v!r}", pos, self.text)
        return v

    # entry point
    def parse(self):
        if self.peek()[0] == "end":
            raise self.error("empty formula")
        phi = self.formula()
        if self.peek()[0] != "end":
            raise self.error(f"unexpected {self.peek()[1]!r}")
        return phi

    # formulas
    def formula(self):
        left = self.implication()
        while self.accept("<->"):
            left = Iff(left, self.implication())
        return left

    def implication(self):
        left = self.disjunction()
        if self.accept("->"):
            return Implies(left, self.implication())
        return left

    def disjunction(self):
        left = self.conjunction()
        while self.accept("or", "\\/"):
            left = Or(left, self.conjunction())
        return left

    def conjunction(self):
        left = self.until()
        while self.accept("and", "&", "/\\"):
            left = And(left, self.until())
        return left

    def until(self):
        left = self.unary()
        if not self.wmlo and self.accept("U"):
            if self.accept("<="):
                k = self.integer()
                return BoundedUntil(left, self.until(), k)
            return Until(left, self.until())
        return left

    def bound(self):
        if self.accept("<="):
            return self.integer()
        return None

    def agent(self) -> str:
        self.expect("[")
        a = self.name("agent name")
        self.expect("]")
        return a

    def unary(self):
        if self.accept("not", "!", "~"):
            return Not(self.unary())
        if self.wmlo:
            if self.at("K") and self.at("[", 1):
                self.advance()
                ag = self.agent()
                self.expect("@")
                t = self.timevar()
                return KnowAt(ag, t, self.unary())
            if self.at("forall") or self.at("exists"):
                return self.quantifier()
            return self.atom()
        if self.accept("A"):
            return A(self.unary())
        if self.accept("E"):
            return E(self.unary())
        if self.accept("X"):
            return X(self.unary())
        if self.accept("F"):
            k = self.bound()
            return F(self.unary(), k)
        if self.accept("G"):
            k = self.bound()
            return G(self.unary(), k)
        if self.at("K") and self.at("[", 1):
            self.advance()
            ag = self.agent()
            return Know(ag, self.unary())
        return self.atom()

    def quantifier(self):
        universal = self.advance()[1] == "forall"
        if universal and self.accept("set"):
            s = self.name("set variable")
            self.expect(".")
            self.scope.append(("set", s))
            body = self.formula()
            self.scope.pop()
            return ForallSet(s, body)
        names = [self.name("time variable")]
        while not self.at("."):
            names.append(self.name("time variable"))
        self.expect(".")
        self.scope.extend(names)
        body = self.formula()
        del self.scope[len(self.scope) - len(names):]
        for v in reversed(names):
            body = ForallT(v, body) if universal else ExistsT(v, body)
        return body

    def atom(self):
        kind, val, pos = self.peek()
        if kind == "end":
            raise self.error("unexpected end of input")
        if val == "true" and kind == "ident":
            self.advance()
            return TRUE
        if val == "false" and kind == "ident":
            self.advance()
            return FALSE
        if val == "(":
            save = self.i
            try:
                return self.comparison()
            except FormulaSyntaxError as first:
                if isinstance(first, UnboundVariable):
                    raise
                self.i = save
                try:
                    self.expect("(")
                    phi = self.formula()
                    self.expect(")")
                    return phi
                except FormulaSyntaxError as second:
                    raise max((first, second), key=lambda e: e.position or 0) from None
        if kind == "num" or val == "-" or self.starts_term():
            return self.comparison()
        if kind == "ident" and val not in self.keywords:
            if not self.wmlo:
                self.advance()
                return Prop(val)
            return self.time_atom()
        raise self.error(f"unexpected {val!r}")

    def starts_term(self) -> bool:
        kind, val, _ = self.peek()
        if kind != "ident":
            return False
        if self.wmlo:
            return (val == "P" and self.at("(", 1)) or (val == "Pr" and self.at("[", 1))
        return val in ("Pr", "Prior") and self.at("[", 1)

    def time_atom(self):
        kind, val, pos = self.peek()
        if self.at("@", 1):
            self.advance()
            self.advance()
            return PropAt(val, self.timevar())
        if self.at("in", 1):
            t = self.timevar()
            self.advance()
            s = self.name("set variable")
            if ("set", s) not in self.scope:
                raise UnboundVariable(f"unbound set variable {s!r}", pos, self.text)
            return SetAt(s, t)
        if self.peek(1)[1] in _REL and self.peek(1)[0] == "sym":
            t = self.timevar()
            op = self.advance()[1]
            u = self.timevar()
            return {
                "<": lambda: Less(t, u),
                ">": lambda: Less(u, t),
                "<=": lambda: Not(Less(u, t)),
                ">=": lambda: Not(Less(t, u)),
                "=": lambda: And(Not(Less(t, u)), Not(Less(u, t))),
                "!=": lambda: Or(Less(t, u), Less(u, t)),
            }[op]()
        raise self.error(f"expected '@' after proposition {val!r}")

    # comparisons
    def comparison(self):
        start = self.peek()[2]
        terms: list = []
        left = self.arith(terms)
        kind, op, pos = self.peek()
        if kind != "sym" or op not in _REL:
            raise self.error("expected a comparison operator")
        self.advance()
        right = self.arith(terms)
        poly = left - right.without_constant()
        c = right.constant_term()
        if not poly.variables():
            raise FormulaSyntaxError("comparison mentions no probability term", start, self.text)
        if any(isinstance(t, _CondTerm) for t in terms):
            phi = self.conditional(poly, op, c, terms, start)
        else:
            c = c - poly.constant_term()
            poly = poly.without_constant()
            phi = Compare(poly, "=" if op == "!=" else op, c, tuple(terms))
            if op == "!=":
                return Not(phi)
            return phi
        return phi

    def conditional(self, poly, op, c, terms, start):
        from .transform import normalize_conditional

        if poly.total_degree() > 1:
            raise FormulaSyntaxError("conditional probabilities may only appear linearly", start, self.text)
        items = []
        for mono, coef in poly.terms:
            if mono == ():
                c -= coef
                continue
            term = terms[mono[0][0]]
            if isinstance(term, _CondTerm):
                items.append((coef, term.event, term.given))
            elif isinstance(term, GlobalProb):
                items.append((coef, term.arg, TRUE))
            else:
                raise FormulaSyntaxError("agent probabilities cannot be mixed with conditionals", start, self.text)
        if op == "!=":
            return Not(normalize_conditional(items, "=", c))
        return normalize_conditional(items, op, c)

    def arith(self, terms) -> Poly:
        out = self.product(terms)
        while True:
            if self.accept("+"):
                out = out + self.product(terms)
            elif self.accept("-"):
                out = out - self.product(terms)
            else:
                return out

    def product(self, terms) -> Poly:
        out = self.signed(terms)
        while True:
            if self.accept("*"):
                out = out * self.signed(terms)
            elif self.at("/"):
                pos = self.advance()[2]
                d = self.signed(terms)
                if not d.is_constant() or d.is_zero():
                    raise FormulaSyntaxError("division only by a nonzero constant", pos, self.text)
                out = out * Poly.const(1 / d.constant_term())
            else:
                return out

    def signed(self, terms) -> Poly:
        if self.accept("-"):
            return -self.signed(terms)
        if self.accept("+"):
            return self.signed(terms)
        return self.power(terms)

    def power(self, terms) -> Poly:
        base = self.primary(terms)
        if self.accept("^"):
            return base ** self.integer()
        return base

    def primary(self, terms) -> Poly:
        kind, val, pos = self.peek()
        if kind == "num":
            self.advance()
            return Poly.const(Fraction(val))
        if self.accept("("):
            inner = self.arith(terms)
            self.expect(")")
            return inner
        if self.starts_term():
            term = self.prob_term()
            if term not in terms:
                terms.append(term)
            return Poly.var(terms.index(term))
        raise self.error(f"expected a number or probability term, found {val or 'end of input'!r}")

    def prob_term(self):
        head = self.advance()[1]
        if head == "P":
            self.expect("(")
            event = self.formula()
            given = None
            if self.accept("|"):
                given = self.formula()
            self.expect(")")
            return GlobalProb(event) if given is None else _CondTerm(event, given)
        ag = self.agent()
        if self.wmlo:
            self.expect("@")
            t = self.timevar()
            self.expect("(")
            body = self.formula()
            self.expect(")")
            return AgentProbAt(ag, t, body)
        self.expect("(")
        body = self.formula()
        self.expect(")")
        return CurProb(ag, body) if head == "Pr" else PriorProb(ag, body)


def parse_ctlkp(text: str):
    """Parse a branching-time formula."""
    return _Parser(text, wmlo=False).parse()


def parse_wmlo(text: str, free_vars=()):
    """Parse a time-logic formula; `free_vars` may occur unbound."""
    return _Parser(text, wmlo=True, free_vars=free_vars).parse()

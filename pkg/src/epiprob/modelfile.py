"""Line-oriented text format for models.

::

    states: s0 s1 s2
    init: s0 1/2, s1 1/2
    trans: s0 -> s0 1/2, s0 -> s1 1/2, s1 -> s1 1
    agent i obs: s0 a, s1 a, s2 b
    label: s0 {p, q}, s1 {p}

``#`` starts a comment.  Missing transitions and init entries are 0, missing
labels are empty.  Probabilities are integers or ``a/b`` literals.
"""
from __future__ import annotations

import re
from fractions import Fraction

from .errors import ModelSyntaxError
from .markov import PODTMC

_TOKEN = re.compile(r"\s*(->|[,:{}]|-?[A-Za-z0-9_.'/]+)")
_RATIONAL = re.compile(r"-?\d+(?:/\d+)?$")
_NAME = re.compile(r"[A-Za-z0-9_][A-Za-z0-9_.']*$")


class LineTokens:
    """Tokens of one source line with their 1-based columns."""

    def __init__(self, text: str, lineno: int):
        self.lineno = lineno
        self.items = []
        pos = 0
        stripped = text.split("#", 1)[0].rstrip()
        while pos < len(stripped):
            m = _TOKEN.match(stripped, pos)
            if not m or m.end() == pos:
                col = pos + 1 + (len(stripped[pos:]) - len(stripped[pos:].lstrip()))
                raise ModelSyntaxError(f"unexpected character {stripped[col - 1]!r}", lineno, col)
            self.items.append((m.group(1), m.start(1) + 1))
            pos = m.end()
        self.i = 0

    def error(self, message, col=None):
        if col is None:
            col = self.items[self.i][1] if self.i < len(self.items) else (self.items[-1][1] + len(self.items[-1][0]) if self.items else 1)
        return ModelSyntaxError(message, self.lineno, col)

    def at_end(self) -> bool:
        return self.i >= len(self.items)

    def peek(self):
        return self.items[self.i][0] if self.i < len(self.items) else None

    def next(self, what="token"):
        if self.at_end():
            raise self.error(f"expected {what}, found end of line")
        tok, col = self.items[self.i]
        self.i += 1
        return tok, col

    def expect(self, literal):
        tok, col = self.next(repr(literal))
        if tok != literal:
            raise ModelSyntaxError(f"expected {literal!r}, found {tok!r}", self.lineno, col)

    def name(self, what="name"):
        tok, col = self.next(what)
        if not _NAME.match(tok):
            raise ModelSyntaxError(f"expected {what}, found {tok!r}", self.lineno, col)
        return tok, col

    def rational(self):
        tok, col = self.next("probability")
        return parse_rational(tok, self.lineno, col)

    def separated(self, item):
        """Parse ``item (',' item)*`` up to the end of the line."""
        out = [item()]
        while not self.at_end():
            self.expect(",")
            out.append(item())
        return out


def parse_rational(tok: str, lineno=None, col=None) -> Fraction:
    if not _RATIONAL.match(tok):
        raise ModelSyntaxError(f"{tok!r} is not a rational literal (use an integer or a/b)", lineno, col)
    num, _, den = tok.partition("/")
    if den and int(den) == 0:
        raise ModelSyntaxError(f"zero denominator in {tok!r}", lineno, col)
    return Fraction(int(num), int(den) if den else 1)


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def source_lines(text: str):
    """(lineno, LineTokens) for every non-blank line."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        toks = LineTokens(raw, lineno)
        if not toks.at_end():
            yield lineno, toks


def parse_model(text: str) -> PODTMC:
    states: list = []
    index: dict = {}
    init: dict = {}
    trans: dict = {}
    obs: dict = {}
    labels: dict = {}
    declared: set = set()

    def state(toks):
        name, col = toks.name("state name")
        if not states:
            raise ModelSyntaxError("'states:' must be declared first", toks.lineno, col)
        if name not in index:
            raise ModelSyntaxError(f"undeclared state {name!r}", toks.lineno, col)
        return index[name], col

    for lineno, toks in source_lines(text):
        head, col = toks.next()
        if head == "states":
            toks.expect(":")
            if states:
                raise ModelSyntaxError("'states:' declared twice", lineno, col)
            while not toks.at_end():
                name, ncol = toks.name("state name")
                if name in index:
                    raise ModelSyntaxError(f"duplicate state name {name!r}", lineno, ncol)
                index[name] = len(states)
                states.append(name)
            if not states:
                raise toks.error("expected at least one state")
        elif head == "init":
            toks.expect(":")

            def init_entry():
                s, scol = state(toks)
                if s in init:
                    raise ModelSyntaxError(f"duplicate init entry for {states[s]!r}", lineno, scol)
                init[s] = toks.rational()
            toks.separated(init_entry)
        elif head == "trans":
            toks.expect(":")

            def trans_entry():
                a, acol = state(toks)
                toks.expect("->")
                b, _ = state(toks)
                if (a, b) in trans:
                    raise ModelSyntaxError(f"duplicate transition {states[a]} -> {states[b]}", lineno, acol)
                trans[(a, b)] = toks.rational()
            toks.separated(trans_entry)
        elif head == "agent":
            agent, acol = toks.name("agent name")
            toks.expect("obs")
            toks.expect(":")
            row = obs.setdefault(agent, {})

            def obs_entry():
                s, scol = state(toks)
                if s in row:
                    raise ModelSyntaxError(f"duplicate observation for {states[s]!r}", lineno, scol)
                row[s] = toks.name("observation symbol")[0]
            toks.separated(obs_entry)
        elif head == "label":
            toks.expect(":")

            def label_entry():
                s, _ = state(toks)
                toks.expect("{")
                props = labels.setdefault(s, set())
                if toks.peek() != "}":
                    props.add(toks.name("proposition")[0])
                    while toks.peek() == ",":
                        toks.next()
                        props.add(toks.name("proposition")[0])
                toks.expect("}")
            toks.separated(label_entry)
        elif head == "props":
            toks.expect(":")
            while not toks.at_end():
                declared.add(toks.name("proposition")[0])
        else:
            raise ModelSyntaxError(f"unknown declaration {head!r}", lineno, col)

    if not states:
        raise ModelSyntaxError("no 'states:' declaration", 1, 1)
    n = len(states)
    zero = Fraction(0)
    pi = tuple(init.get(i, zero) for i in range(n))
    pt = tuple(tuple(trans.get((i, j), zero) for j in range(n)) for i in range(n))
    obs_t = {a: tuple(row.get(i) for i in range(n)) for a, row in obs.items()}
    lab = tuple(frozenset(labels.get(i, ())) for i in range(n))
    return PODTMC(tuple(states), pi, pt, tuple(obs), obs_t, lab, frozenset(declared))


def write_model(model: PODTMC) -> str:
    """Canonical text: one transition line per source state, zero entries omitted."""
    st = model.states
    lines = ["states: " + " ".join(st)]
    entries = [f"{st[i]} {format_rational(p)}" for i, p in enumerate(model.init) if p != 0]
    if entries:
        lines.append("init: " + ", ".join(entries))
    for i, row in enumerate(model.trans):
        entries = [f"{st[i]} -> {st[j]} {format_rational(p)}" for j, p in enumerate(row) if p != 0]
        if entries:
            lines.append("trans: " + ", ".join(entries))
    for agent in model.agents:
        row = model.obs[agent]
        entries = [f"{st[i]} {sym}" for i, sym in enumerate(row) if sym is not None]
        if entries:
            lines.append(f"agent {agent} obs: " + ", ".join(entries))
    entries = [f"{st[i]} {{{', '.join(sorted(props))}}}" for i, props in enumerate(model.labels) if props]
    if entries:
        lines.append("label: " + ", ".join(entries))
    if model.declared:
        lines.append("props: " + " ".join(sorted(model.declared)))
    return "\n".join(lines) + "\n"


def load_model(path) -> PODTMC:
    with open(path, encoding="utf-8") as fh:
        return parse_model(fh.read())

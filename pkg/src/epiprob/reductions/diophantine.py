"""Integer polynomials and their encoding as mixed-time probability formulas.

On the fixed chain below P(p_exp at t) = (1/2)^t and P(p_lin at t) =
t (1/2)^t.  Replacing each n_i^e in a monomial by X_i^e Y_i^(d_i - e), with
X_i = P(p_lin@t_i), Y_i = P(p_exp@t_i) and d_i the degree of n_i, turns
p(n_1..n_k) into (1/2)^(sum d_i t_i) p(t_1..t_k), which vanishes exactly
at the roots of p.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from ..errors import FormulaSyntaxError, ZeroPolynomial
from ..logic.poly import Poly
from ..logic.transform import MixedTimeFormula
from ..markov import PODTMC, make_model

EXP, LIN = "p_exp", "p_lin"


@dataclass(frozen=True)
class IntPolynomial:
    variables: tuple
    poly: Poly

    def __post_init__(self):
        for _, c in self.poly.terms:
            if Fraction(c).denominator != 1:
                raise ValueError("coefficients must be integers")

    def evaluate(self, values) -> Fraction:
        if isinstance(values, dict):
            values = [values[v] for v in self.variables]
        return self.poly.evaluate([Fraction(x) for x in values])

    def text(self) -> str:
        return self.poly.to_text(lambda i: self.variables[i])


_TOK = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


def parse_int_polynomial(text: str, variables=None) -> IntPolynomial:
    """Parse ``x^2*y - 3*x + 1``; variables default to the sorted names used.

    A first line ``vars: x y`` fixes the variable order.
    """
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if lines and lines[0].startswith("vars:"):
        variables = tuple(lines[0][5:].split())
        lines = lines[1:]
    body = " ".join(lines)
    toks = []
    for m in _TOK.finditer(body):
        if m.group(1):
            toks.append(("num", int(m.group(1)), m.start(1)))
        elif m.group(2):
            toks.append(("var", m.group(2), m.start(2)))
        elif m.group(3) and not m.group(3).isspace():
            toks.append(("sym", m.group(3), m.start(3)))
    names = sorted({v for kind, v, _ in toks if kind == "var"})
    if variables is None:
        variables = tuple(names)
    variables = tuple(variables)
    unknown = set(names) - set(variables)
    if unknown:
        raise FormulaSyntaxError(f"undeclared variables {sorted(unknown)}", 0, text)
    index = {v: i for i, v in enumerate(variables)}
    pos = [0]

    def peek():
        return toks[pos[0]] if pos[0] < len(toks) else ("end", None, len(body))

    def take(sym):
        if peek()[0] == "sym" and peek()[1] == sym:
            pos[0] += 1
            return True
        return False

    def expr():
        out = term()
        while True:
            if take("+"):
                out = out + term()
            elif take("-"):
                out = out - term()
            else:
                return out

    def term():
        out = factor()
        while take("*"):
            out = out * factor()
        return out

    def factor():
        if take("-"):
            return -factor()
        base = atom()
        if take("^"):
            kind, val, p = peek()
            if kind != "num":
                raise FormulaSyntaxError("expected an exponent", p, text)
            pos[0] += 1
            return base ** val
        return base

    def atom():
        kind, val, p = peek()
        if kind == "num":
            pos[0] += 1
            return Poly.const(val)
        if kind == "var":
            pos[0] += 1
            return Poly.var(index[val])
        if take("("):
            inner = expr()
            if not take(")"):
                raise FormulaSyntaxError("expected ')'", peek()[2], text)
            return inner
        raise FormulaSyntaxError(f"unexpected {val!r}", p, text)

    if not toks:
        raise FormulaSyntaxError("empty polynomial", 0, text)
    poly = expr()
    if pos[0] != len(toks):
        raise FormulaSyntaxError(f"unexpected {peek()[1]!r}", peek()[2], text)
    return IntPolynomial(variables, poly)


def diophantine_chain() -> PODTMC:
    """Fixed four-state chain; s_pad is unreachable and only pads the state count."""
    half = Fraction(1, 2)
    return make_model(
        ["s_exp", "s_lin", "s_sink", "s_pad"],
        {"s_exp": 1},
        {"s_exp": {"s_exp": half, "s_lin": half},
         "s_lin": {"s_lin": half, "s_sink": half},
         "s_sink": {"s_sink": 1},
         "s_pad": {"s_pad": 1}},
        labels={"s_exp": [EXP], "s_lin": [LIN]},
    )


def diophantine_to_formula(p: IntPolynomial) -> MixedTimeFormula:
    if p.poly.is_zero():
        raise ZeroPolynomial("the zero polynomial has every point as a root")
    k = len(p.variables)
    tvars = tuple(f"t{i + 1}" for i in range(k))
    atoms = []
    for tv in tvars:
        atoms += [(LIN, tv), (EXP, tv)]
    degrees = [p.poly.degree_in(i) for i in range(k)]
    f = Poly()
    for mono, coef in p.poly.terms:
        exps = dict(mono)
        piece = Poly.const(coef)
        for i in range(k):
            e = exps.get(i, 0)
            piece = piece * Poly.var(2 * i, e) * Poly.var(2 * i + 1, degrees[i] - e)
        f = f + piece
    return MixedTimeFormula(tvars, f, tuple(atoms))

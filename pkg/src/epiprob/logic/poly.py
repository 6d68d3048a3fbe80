"""Multivariate polynomials with rational coefficients in canonical form.

A monomial is a sorted tuple of ``(variable_index, exponent)`` pairs with
positive exponents; the constant monomial is ``()``.  A polynomial is the
sorted tuple of ``(monomial, coefficient)`` pairs with nonzero coefficients,
so structural equality is polynomial equality.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence


def _mono_mul(a: tuple, b: tuple) -> tuple:
    exps: dict = dict(a)
    for v, e in b:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items()))


@dataclass(frozen=True)
class Poly:
    terms: tuple = ()

    @staticmethod
    def from_dict(d: Mapping) -> "Poly":
        return Poly(tuple(sorted((m, Fraction(c)) for m, c in d.items() if c != 0)))

    @staticmethod
    def const(c) -> "Poly":
        return Poly.from_dict({(): Fraction(c)})

    @staticmethod
    def var(i: int, power: int = 1) -> "Poly":
        if power == 0:
            return Poly.const(1)
        return Poly(((((i, power),), Fraction(1)),))

    def as_dict(self) -> dict:
        return dict(self.terms)

    def __add__(self, other) -> "Poly":
        other = _coerce(other)
        d = self.as_dict()
        for m, c in other.terms:
            d[m] = d.get(m, 0) + c
        return Poly.from_dict(d)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(tuple((m, -c) for m, c in self.terms))

    def __sub__(self, other) -> "Poly":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "Poly":
        return _coerce(other) - self

    def __mul__(self, other) -> "Poly":
        other = _coerce(other)
        d: dict = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                m = _mono_mul(m1, m2)
                d[m] = d.get(m, 0) + c1 * c2
        return Poly.from_dict(d)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = Poly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(m == () for m, _ in self.terms)

    def constant_term(self) -> Fraction:
        return self.as_dict().get((), Fraction(0))

    def without_constant(self) -> "Poly":
        return Poly(tuple((m, c) for m, c in self.terms if m != ()))

    def variables(self) -> tuple:
        return tuple(sorted({v for m, _ in self.terms for v, _ in m}))

    def degree_in(self, var: int) -> int:
        return max((dict(m).get(var, 0) for m, _ in self.terms), default=0)

    def total_degree(self) -> int:
        return max((sum(e for _, e in m) for m, _ in self.terms), default=0)

    def remap(self, mapping: Mapping[int, int]) -> "Poly":
        d: dict = {}
        for m, c in self.terms:
            powers: dict = {}
            for v, e in m:
                powers[mapping[v]] = powers.get(mapping[v], 0) + e
            key = tuple(sorted(powers.items()))
            d[key] = d.get(key, 0) + c
        return Poly.from_dict(d)

    def evaluate(self, values: Sequence) -> Fraction:
        total = Fraction(0)
        for m, c in self.terms:
            term = c
            for v, e in m:
                term *= values[v] ** e
            total += term
        return total

    def substitute(self, images: Mapping[int, "Poly"]) -> "Poly":
        """Replace variable i by images[i] (variables absent from the map stay)."""
        out = Poly()
        for m, c in self.terms:
            term = Poly.const(c)
            for v, e in m:
                term = term * (images[v] ** e if v in images else Poly.var(v, e))
            out = out + term
        return out

    def to_text(self, name: Callable[[int], str]) -> str:
        if not self.terms:
            return "0"
        # constant last reads more naturally
        ordered = [t for t in self.terms if t[0] != ()] + [t for t in self.terms if t[0] == ()]
        parts = []
        for k, (m, c) in enumerate(ordered):
            sign = "-" if c < 0 else "+"
            mag = -c if c < 0 else c
            factors = [name(v) if e == 1 else f"{name(v)}^{e}" for v, e in m]
            if not factors:
                body = _frac(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([_frac(mag)] + factors)
            if k == 0:
                parts.append(("-" if sign == "-" else "") + body)
            else:
                parts.append(f" {sign} {body}")
        return "".join(parts)


def _frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _coerce(x) -> Poly:
    if isinstance(x, Poly):
        return x
    return Poly.const(x)

"""Sign-preserving embedding of an integer matrix power entry into a Markov chain.

Split A = P - N into nonnegative parts and form M = [[P, N], [N, P]]; the
blocks of M^n are [[X, Y], [Y, X]] with X - Y = A^n, so
(A^n)[0][k-1] = (M^n)[0][k-1] - (M^n)[0][2k-1].  Scaling M by 1/(2s)
(s = largest row sum) leaves at least half of each row's mass free.  Each
block state sends 1/4 plus a signed correction proportional to that
column difference to a target T, and the rest to a sink.  The sink and T
both move to T with probability 1/4, which gives

    P(at T at time n) = 1/4 + (1/4) (2s)^-n (A^n)[0][k-1]     (n >= 1).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..markov import PODTMC, Matrix, as_matrix

QUARTER = Fraction(1, 4)


@dataclass(frozen=True)
class StochasticEmbedding:
    B: Matrix
    v: tuple
    w: tuple
    c: Fraction
    scale: Fraction  # 2s

    def recover(self, value: Fraction, n: int) -> Fraction:
        """(A^n)[0][k-1] from v B^n w."""
        return (value - self.c) * 4 * self.scale ** n


def stochastic_embedding(A) -> StochasticEmbedding:
    A = as_matrix(A)
    k = len(A)
    if any(x.denominator != 1 for row in A for x in row):
        raise ValueError("the embedding needs an integer matrix")
    zero = Fraction(0)
    P = [[max(x, zero) for x in row] for row in A]
    N = [[max(-x, zero) for x in row] for row in A]
    M = [P[i] + N[i] for i in range(k)] + [N[i] + P[i] for i in range(k)]
    s = max((sum(row) for row in M), default=zero) or Fraction(1)
    scale = 2 * s
    size = 2 * k + 2
    sink, target = 2 * k, 2 * k + 1
    B = [[zero] * size for _ in range(size)]
    for j, row in enumerate(M):
        for j2, x in enumerate(row):
            B[j][j2] = x / scale
        B[j][target] = QUARTER + (row[k - 1] - row[2 * k - 1]) / (4 * scale)
        B[j][sink] = 1 - sum(B[j][:2 * k], zero) - B[j][target]
    for j in (sink, target):
        B[j][target] = QUARTER
        B[j][sink] = 1 - QUARTER
    v = tuple(Fraction(int(i == 0)) for i in range(size))
    w = tuple(Fraction(int(i == target)) for i in range(size))
    return StochasticEmbedding(tuple(tuple(r) for r in B), v, w, QUARTER, scale)


def embedding_model(E: StochasticEmbedding, prop: str = "p") -> PODTMC:
    """The chain started in the first block state, with `prop` marking the target."""
    size = len(E.B)
    names = tuple([f"b{i}" for i in range(size - 2)] + ["sink", "target"])
    labels = tuple(frozenset((prop,)) if i == size - 1 else frozenset() for i in range(size))
    return PODTMC(names, tuple(E.v), E.B, (), {}, labels, frozenset((prop,)))

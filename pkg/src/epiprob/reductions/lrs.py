"""Linear recurrence sequences: evaluation, matrix forms and bounded Skolem-type searches."""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from ..checker.verdict import Fails, NoWitnessUpTo, Witness
from ..markov import Matrix, matrix_power
from ..modelfile import format_rational


@dataclass(frozen=True)
class LRS:
    """u_{n+k} = coeffs[0] u_{n+k-1} + ... + coeffs[k-1] u_n with u_0..u_{k-1} = init."""

    coeffs: tuple
    init: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))
        object.__setattr__(self, "init", tuple(Fraction(c) for c in self.init))
        if not self.coeffs:
            raise ValueError("order must be at least 1")
        if len(self.coeffs) != len(self.init):
            raise ValueError("order does not match the number of initial values")
        if self.coeffs[-1] == 0:
            raise ValueError("the last coefficient must be nonzero")

    @property
    def order(self) -> int:
        return len(self.coeffs)


def lrs_terms(L: LRS, n: int) -> list:
    """u_0 .. u_n."""
    out = list(L.init[: n + 1])
    while len(out) <= n:
        out.append(sum((a * u for a, u in zip(L.coeffs, reversed(out[-L.order:]))), Fraction(0)))
    return out


def lrs_eval(L: LRS, n: int) -> Fraction:
    return lrs_terms(L, n)[n]


def companion(L: LRS) -> Matrix:
    """Top-row companion matrix: first row holds the coefficients, ones below the diagonal."""
    k = L.order
    rows = [list(L.coeffs)]
    for i in range(1, k):
        rows.append([Fraction(int(j == i - 1)) for j in range(k)])
    return tuple(tuple(r) for r in rows)


def _shift_matrix(L: LRS) -> Matrix:
    """C with (u_{n+1}..u_{n+k}) = C (u_n..u_{n+k-1})."""
    k = L.order
    rows = [[Fraction(int(j == i + 1)) for j in range(k)] for i in range(k - 1)]
    rows.append(list(reversed(L.coeffs)))
    return tuple(tuple(r) for r in rows)


def lrs_to_companion(L: LRS) -> Matrix:
    """Square A with u_n = (A^n)[0][-1] for every n >= 1.

    The plain k x k companion works when its corner entries already match
    u_1..u_k (both sides obey the same recurrence, so agreement on k terms
    is agreement everywhere).  Otherwise a (k+2) x (k+2) block matrix
    [[0, e1, u_1], [0, C, x_2], [0, 0, 0]] is used, where C shifts the
    state vector and x_2 = (u_2..u_{k+1}); its corner is e1 C^(n-2) x_2.
    """
    k = L.order
    C = companion(L)
    u = lrs_terms(L, 2 * k + 1)
    P = C
    ok = True
    for n in range(1, k + 1):
        if n > 1:
            P = _mul(P, C)
        if P[0][k - 1] != u[n]:
            ok = False
            break
    if ok:
        return C
    S = _shift_matrix(L)
    size = k + 2
    A = [[Fraction(0)] * size for _ in range(size)]
    A[0][1] = Fraction(1)
    A[0][size - 1] = u[1]
    for i in range(k):
        for j in range(k):
            A[1 + i][1 + j] = S[i][j]
        A[1 + i][size - 1] = u[2 + i]
    return tuple(tuple(r) for r in A)


def _mul(A, B):
    from ..markov import mat_mul
    return mat_mul(A, B)


def lrs_to_bilinear(L: LRS) -> tuple:
    """(v, A, w) with 0/1 vectors v, w and u_n = v A^n w for n >= 1."""
    A = lrs_to_companion(L)
    m = len(A)
    v = tuple(Fraction(int(i == 0)) for i in range(m))
    w = tuple(Fraction(int(i == m - 1)) for i in range(m))
    return v, A, w


def corner_values(A: Matrix, N: int) -> list:
    """(A^n)[0][-1] for n = 0..N."""
    out = []
    P = matrix_power(A, 0)
    for n in range(N + 1):
        if n:
            P = _mul(P, A)
        out.append(P[0][len(A) - 1])
    return out


def skolem_search(L: LRS, mode: str, N: int, from_one: bool = False):
    """Bounded scan of u_n for n <= N.

    zero: least n with u_n = 0 (Witness) or NoWitnessUpTo(N).
    positivity: least n with u_n < 0 (Fails) or NoWitnessUpTo(N).
    ultimate_positivity: NoWitnessUpTo(N) carrying the last negative index seen.
    """
    start = 1 if from_one else 0
    terms = lrs_terms(L, N)
    if mode == "zero":
        for n in range(start, N + 1):
            if terms[n] == 0:
                return Witness({"n": n})
        return NoWitnessUpTo(N)
    if mode == "positivity":
        for n in range(start, N + 1):
            if terms[n] < 0:
                return Fails({"n": n})
        return NoWitnessUpTo(N)
    if mode == "ultimate_positivity":
        negatives = [n for n in range(start, N + 1) if terms[n] < 0]
        return NoWitnessUpTo(N, last_negative=negatives[-1] if negatives else None)
    raise ValueError(f"unknown mode {mode!r}")


_FIELD = re.compile(r"(\w+)\s*=\s*([^\s]+)")


def parse_lrs(text: str) -> LRS:
    """``order=2 coeffs=1,1 init=0,1`` (comments after '#')."""
    from ..modelfile import parse_rational

    body = " ".join(line.split("#", 1)[0] for line in text.splitlines())
    fields = dict(_FIELD.findall(body))
    missing = {"order", "coeffs", "init"} - set(fields)
    if missing:
        raise ValueError(f"LRS description lacks {', '.join(sorted(missing))}")
    order = int(fields["order"])
    coeffs = tuple(parse_rational(x) for x in fields["coeffs"].split(","))
    init = tuple(parse_rational(x) for x in fields["init"].split(","))
    if len(coeffs) != order or len(init) != order:
        raise ValueError(f"order {order} does not match the listed values")
    return LRS(coeffs, init)


def format_lrs(L: LRS) -> str:
    return (f"order={L.order} coeffs={','.join(format_rational(c) for c in L.coeffs)} "
            f"init={','.join(format_rational(c) for c in L.init)}")

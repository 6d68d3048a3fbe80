from fractions import Fraction as F

from hypothesis import given, strategies as st

from epiprob.checker import Witness, check_skolem_form
from epiprob.markov import bilinear_form, is_stochastic, matrix_power, validate
from epiprob.reductions.embedding import embedding_model, stochastic_embedding
from strategies import matrices


def sign(x):
    return (x > 0) - (x < 0)


def check(A, N):
    E = stochastic_embedding(A)
    assert is_stochastic(E.B)
    assert sum(E.v) == 1 and set(E.w) <= {0, 1} and E.w[-1] == 1
    k = len(A)
    for n in range(1, N + 1):
        a = matrix_power(A, n)[0][k - 1]
        b = bilinear_form(E.v, E.B, n, E.w)
        assert sign(b - E.c) == sign(a)
        assert E.recover(b, n) == a


def test_zero_matrix():
    check(((F(0),),), 10)


def test_fibonacci_stays_above_the_threshold():
    A = ((F(1), F(1)), (F(1), F(0)))
    E = stochastic_embedding(A)
    assert all(bilinear_form(E.v, E.B, n, E.w) > E.c for n in range(1, 21))


def test_chain_form_for_the_checker():
    A = ((F(1), F(-1), F(1)), (F(1), F(0), F(0)), (F(0), F(1), F(0)))
    E = stochastic_embedding(A)
    M = embedding_model(E)
    assert validate(M) == []
    zero = next(n for n in range(1, 20) if matrix_power(A, n)[0][2] == 0)
    assert check_skolem_form(M, "p", "=", E.c, 20) == Witness({"t": zero})


@given(matrices(size=2))
def test_two_by_two(A):
    check(A, 25)


@given(st.integers(1, 3).flatmap(lambda k: matrices(size=k)))
def test_small_matrices(A):
    check(A, 12)

"""Scan random recurrences for zeros through the stochastic embedding.

For each recurrence the zero search is run twice: directly on the sequence
and as a threshold query on the embedded chain. The verdicts must agree.
"""
import argparse
import random

from epiprob.checker import Witness, check_skolem_form, describe
from epiprob.random_models import random_lrs
from epiprob.reductions import embedding_model, format_lrs, lrs_to_bilinear, skolem_search, stochastic_embedding


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=20)
    ap.add_argument("--bound", type=int, default=15)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    disagreements = 0
    for _ in range(args.count):
        L = random_lrs(rng, max_order=3)
        direct = skolem_search(L, "zero", args.bound, from_one=True)
        _, A, _ = lrs_to_bilinear(L)
        if any(x.denominator != 1 for row in A for x in row):
            continue
        E = stochastic_embedding(A)
        chain = check_skolem_form(embedding_model(E), "p", "=", E.c, args.bound)
        same = isinstance(direct, Witness) == isinstance(chain, Witness)
        disagreements += not same
        print(f"{format_lrs(L):40s} direct: {describe(direct):22s} chain: {describe(chain)}")
    print(f"disagreements: {disagreements}")


if __name__ == "__main__":
    main()

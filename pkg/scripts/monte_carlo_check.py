"""Compare sampled state frequencies with exact marginals on random models."""
import argparse
import math
import random

from epiprob.checker import simulate_runs
from epiprob.markov import distribution_at
from epiprob.random_models import random_model


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--models", type=int, default=10)
    ap.add_argument("-n", type=int, default=100_000)
    ap.add_argument("--horizon", type=int, default=6)
    args = ap.parse_args()
    for k in range(args.models):
        m = random_model(random.Random(800 + k))
        table = simulate_runs(m, args.horizon, args.n, k)
        worst = 0.0
        for t in range(args.horizon + 1):
            for s, p in distribution_at(m, t).items():
                p = float(p)
                if 0 < p < 1:
                    worst = max(worst, abs(table[t][s] - p) / math.sqrt(p * (1 - p) / args.n))
        print(f"model {k}: {len(m.states)} states, largest deviation {worst:.2f} sigma")


if __name__ == "__main__":
    main()

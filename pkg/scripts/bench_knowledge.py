"""Time the knowledge-versus-probability-one sweep at a chosen size."""
import argparse
import random
import time

from epiprob.checker import prop5_equivalence
from epiprob.random_models import random_ctlpk, random_model


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--models", type=int, default=20)
    ap.add_argument("--formulas", type=int, default=50)
    ap.add_argument("--horizon", type=int, default=4)
    args = ap.parse_args()
    rng = random.Random(404)
    start = time.perf_counter()
    failures = 0
    for _ in range(args.models):
        m = random_model(rng, max_states=3)
        for _ in range(args.formulas):
            phi = random_ctlpk(rng, 2, m.agents)
            failures += sum(not prop5_equivalence(m, sem, phi, args.horizon) for sem in ("clk", "spr"))
    print(f"{args.models * args.formulas * 2} checks, {failures} failures, {time.perf_counter() - start:.1f}s")


if __name__ == "__main__":
    main()

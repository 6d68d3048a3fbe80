"""Monte Carlo sampling of runs, used only to cross-check exact marginals."""
from __future__ import annotations

import numpy as np

from ..markov import PODTMC


def _cumulative(rows) -> np.ndarray:
    probs = np.array([[float(p) for p in row] for row in rows], dtype=float)
    cum = np.cumsum(probs, axis=-1)
    return cum / cum[..., -1:]


def simulate_runs(model: PODTMC, horizon: int, n: int, seed) -> dict:
    """Empirical state frequencies: {t: {state: fraction}} for t = 0..horizon.

    Runs are sampled independently with numpy's default generator; the
    result depends only on (model, horizon, n, seed).
    """
    if n == 0:
        return {}
    rng = np.random.default_rng(seed)
    init_cum = _cumulative([model.init])[0]
    trans_cum = _cumulative(model.trans)
    cur = np.minimum(np.searchsorted(init_cum, rng.random(n), side="right"), model.n - 1)
    table = {}
    for t in range(horizon + 1):
        if t:
            u = rng.random(n)
            nxt = (trans_cum[cur] <= u[:, None]).sum(axis=1)
            cur = np.minimum(nxt, model.n - 1)
        counts = np.bincount(cur, minlength=model.n)
        table[t] = {name: counts[i] / n for i, name in enumerate(model.states)}
    return table

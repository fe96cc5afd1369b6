"""Benchmark the compiled kernels against the pure-python reference.

Workloads mirror the hot paths: canonical labeling of slice-sized colored
graphs and mod-p elimination on differential-shaped sparse matrices.
"""

from __future__ import annotations

import random
import time
from itertools import combinations

from . import _pure, kernels


def _random_graphs(trials, n_lo=8, n_hi=16, seed=11):
    rng = random.Random(seed)
    out = []
    for _ in range(trials):
        n = rng.randrange(n_lo, n_hi + 1)
        colors = [rng.randrange(3) for _ in range(n)]
        adj = [0] * n
        for u, v in combinations(range(n), 2):
            if rng.random() < 3.0 / n:  # sparse, graph-complex-like
                adj[u] |= 1 << v
                adj[v] |= 1 << u
        out.append((n, colors, adj))
    return out


def _random_matrices(trials, seed=12):
    rng = random.Random(seed)
    out = []
    for _ in range(trials):
        rows = rng.randrange(50, 150)
        cols = rng.randrange(50, 150)
        ents = []
        seen = set()
        for c in range(cols):
            for _ in range(rng.randrange(2, 8)):
                r = rng.randrange(rows)
                if (r, c) in seen:
                    continue
                seen.add((r, c))
                ents.append((r, c, rng.choice((-1, 1, 2, -2))))
        out.append((rows, cols, ents))
    return out


def _time(fn, payloads):
    t0 = time.perf_counter()
    acc = 0
    for p in payloads:
        res = fn(*p)
        acc += res if isinstance(res, int) else len(res[0])
    return time.perf_counter() - t0, acc


def run(trials=200):
    graphs = _random_graphs(trials)
    mats = _random_matrices(max(trials // 4, 10))

    t_pure_c, chk1 = _time(_pure.canon_search, graphs)
    t_pure_r, chk2 = _time(lambda r, c, e: _pure.modp_rank(r, c, e, 32189),
                           mats)
    rows = [("canonical labeling", t_pure_c, None),
            ("mod-p rank", t_pure_r, None)]
    if kernels.IMPL == "compiled":
        t_fast_c, chk1b = _time(kernels.canon_search, graphs)
        t_fast_r, chk2b = _time(
            lambda r, c, e: kernels.modp_rank(r, c, e, 32189), mats)
        assert chk1 == chk1b and chk2 == chk2b, "kernel outputs disagree"
        rows = [("canonical labeling", t_pure_c, t_fast_c),
                ("mod-p rank", t_pure_r, t_fast_r)]
    print(f"kernel benchmark ({trials} graphs, {len(mats)} matrices); "
          f"active implementation: {kernels.IMPL}")
    print(f"{'workload':<20} {'pure [s]':>10} {'compiled [s]':>13} {'speedup':>9}")
    for name, tp, tf in rows:
        if tf is None:
            print(f"{name:<20} {tp:>10.3f} {'n/a':>13} {'n/a':>9}")
        else:
            print(f"{name:<20} {tp:>10.3f} {tf:>13.3f} {tp / tf:>8.1f}x")


if __name__ == "__main__":
    run()

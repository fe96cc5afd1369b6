"""Parity between the compiled kernels and the pure-python reference."""

import random
from itertools import combinations

import pytest

from ghx import _pure, kernels


def closure(gens, n):
    elems = {tuple(range(n))}
    frontier = [tuple(range(n))]
    while frontier:
        cur = frontier.pop()
        for g in gens:
            nxt = tuple(g[cur[k]] for k in range(n))
            if nxt not in elems:
                elems.add(nxt)
                frontier.append(nxt)
    return elems


def random_graph(rng, n, colored=True):
    colors = [rng.randrange(3) if colored else 0 for _ in range(n)]
    adj = [0] * n
    for u, v in combinations(range(n), 2):
        if rng.random() < 0.35:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
    return colors, adj


pytestmark = pytest.mark.skipif(kernels.IMPL != "compiled",
                                reason="compiled kernels unavailable")


def test_canonical_forms_identical():
    rng = random.Random(2024)
    for _ in range(150):
        n = rng.randrange(1, 13)
        colors, adj = random_graph(rng, n)
        p1, _ = _pure.canon_search(n, colors, adj)
        p2, _ = kernels.canon_search(n, colors, adj)
        key1 = relabel_key(n, adj, p1)
        key2 = relabel_key(n, adj, p2)
        assert key1 == key2


def relabel_key(n, adj, perm):
    out = [0] * n
    for v in range(n):
        m = adj[v]
        row = 0
        while m:
            low = m & -m
            row |= 1 << perm[low.bit_length() - 1]
            m ^= low
        out[perm[v]] = row
    return tuple(out)


def test_automorphism_groups_identical():
    rng = random.Random(7)
    for _ in range(60):
        n = rng.randrange(1, 9)
        colors, adj = random_graph(rng, n)
        _, g1 = _pure.canon_search(n, colors, adj)
        _, g2 = kernels.canon_search(n, colors, adj)
        assert closure(g1, n) == closure(g2, n)


def test_regular_graph_groups():
    # K5 and the 5-cycle, one color
    n = 5
    adjK = [(1 << n) - 1 - (1 << v) for v in range(n)]
    _, gens = kernels.canon_search(n, [0] * n, adjK)
    assert len(closure(gens, n)) == 120
    adjC = [0] * n
    for v in range(n):
        adjC[v] |= 1 << ((v + 1) % n)
        adjC[(v + 1) % n] |= 1 << v
    _, gens = kernels.canon_search(n, [0] * n, adjC)
    assert len(closure(gens, n)) == 10


def test_modp_ranks_identical():
    rng = random.Random(5)
    for _ in range(80):
        rows, cols = rng.randrange(1, 15), rng.randrange(1, 15)
        ents = []
        for r in range(rows):
            for c in range(cols):
                if rng.random() < 0.3:
                    ents.append((r, c, rng.randint(-9, 9)))
        ents = [(r, c, v) for r, c, v in ents if v]
        seen = set()
        ents = [(r, c, v) for r, c, v in ents
                if (r, c) not in seen and not seen.add((r, c))]
        for p in (2, 101, 32189):
            assert (_pure.modp_rank(rows, cols, ents, p)
                    == kernels.modp_rank(rows, cols, ents, p))

import random
from itertools import combinations

from ghx.enumerate_graphs import (
    degree_partitions,
    enumerate_slice_graphs,
    graphs_with_degrees,
)
from ghx.graphs import ColoredGraph, canonicalize, structural_predicates


def brute_force_classes(colors, degrees):
    """Oracle: scan all labeled graphs, filter, dedupe by canonical form."""
    n = len(colors)
    pairs = list(combinations(range(n), 2))
    seen = set()
    for mask in range(1 << len(pairs)):
        edges = [p for k, p in enumerate(pairs) if (mask >> k) & 1]
        g = ColoredGraph.build(n, colors, edges)
        if list(g.degrees) != list(degrees):
            continue
        if not structural_predicates(g)["connected"]:
            continue
        # color classes must separate distinct degrees for a fair comparison
        seen.add(canonicalize(g)[0].key())
    return seen


def enum_classes(colors, degrees):
    out = set()
    for adj in graphs_with_degrees(list(colors), list(degrees)):
        n = len(colors)
        edges = set()
        for u in range(n):
            m = adj[u]
            while m:
                low = m & -m
                v = low.bit_length() - 1
                if v > u:
                    edges.add((u, v))
                m ^= low
        g = ColoredGraph(n, tuple(colors), frozenset(edges))
        assert list(g.degrees) == list(degrees)
        key = canonicalize(g)[0].key()
        assert key not in out, "duplicate isomorphism class generated"
        out.add(key)
    return out


def test_cubic_counts_match_known_values():
    # connected cubic simple graphs: 1 on 4 vertices, 2 on 6, 5 on 8
    for n, expect in ((4, 1), (6, 2), (8, 5)):
        got = enum_classes((0,) * n, (3,) * n)
        assert len(got) == expect


def test_matches_brute_force_various_small():
    cases = [
        ((0, 0, 0, 0), (3, 3, 3, 3)),
        ((0, 0, 0, 0, 0), (4, 3, 3, 3, 3)),
        ((0, 0, 0, 0, 0, 0), (3, 3, 3, 3, 3, 3)),
        ((0, 0, 0, 0, 1, 1), (3, 3, 3, 3, 1, 1)),
        ((0, 0, 0, 1, 2), (3, 3, 2, 1, 1)),
        ((0, 0, 1), (2, 2, 2)),
        ((0,) * 6, (4, 4, 3, 3, 3, 3)),
    ]
    for colors, degrees in cases:
        assert enum_classes(colors, degrees) == brute_force_classes(colors, degrees)


def test_empty_and_infeasible():
    assert enum_classes((0, 0, 0), (3, 3, 3)) == set()  # odd degree sum... no
    assert enum_classes((0, 0), (0, 0)) == set()  # disconnected pair
    assert enum_classes((0,), (0,)) == {canonicalize(
        ColoredGraph(1, (0,), frozenset()))[0].key()}


def test_degree_partitions():
    assert degree_partitions(9, 3, 3, 5) == [(3, 3, 3)]
    assert set(degree_partitions(10, 3, 3, 6)) == {(4, 3, 3)}
    assert set(degree_partitions(11, 3, 3, 6)) == {(5, 3, 3), (4, 4, 3)}
    assert degree_partitions(0, 0, 3, 6) == [()]


def test_slice_graphs_k4_slice():
    # one color, 4 vertices of degree 3: exactly K4
    got = enumerate_slice_graphs([(0, 3, 4)])
    assert len(got) == 1
    assert len(got[0].edges) == 6


def test_randomized_against_brute_force():
    rng = random.Random(17)
    for _ in range(8):
        n = rng.randrange(3, 7)
        degrees = sorted((rng.randrange(1, min(4, n)) for _ in range(n)),
                         reverse=True)
        if sum(degrees) % 2:
            degrees[-1] += 1
            degrees.sort(reverse=True)
            if degrees[0] >= n:
                continue
        colors = tuple(0 for _ in range(n))
        assert enum_classes(colors, tuple(degrees)) == brute_force_classes(
            colors, tuple(degrees))

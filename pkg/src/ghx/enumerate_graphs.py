"""Isomorph-free generation of colored simple graphs with exact degrees.

Orderly edge-augmentation: graphs are grown one edge at a time, keeping the
set of non-isolated vertices connected (every connected graph admits a
spanning-tree-first edge order, so nothing is missed), and each level is
deduplicated by canonical form.  Vertices are classed by (color, target
degree); vertices within a class are interchangeable.
"""

from __future__ import annotations

from itertools import combinations

from . import kernels
from .graphs import ColoredGraph


def _canon_key(n, classes, adj):
    perm, _ = kernels.canon_search(n, classes, adj)
    key = [0] * n
    for v in range(n):
        m = adj[v]
        row = 0
        while m:
            low = m & -m
            row |= 1 << perm[low.bit_length() - 1]
            m ^= low
        key[perm[v]] = row
    return tuple(key)


def graphs_with_degrees(colors, degrees):
    """All connected simple graphs with the exact colored degree sequence.

    colors[i], degrees[i] prescribe vertex i; vertices sharing
    (color, degree) are unlabeled.  Yields adjacency mask tuples.
    """
    n = len(colors)
    total = sum(degrees)
    if total % 2:
        return
    nedges = total // 2
    class_of = {}
    classes = []
    for c, d in zip(colors, degrees):
        if (c, d) not in class_of:
            class_of[(c, d)] = len(class_of)
        classes.append(class_of[(c, d)])
    if nedges == 0:
        if all(d == 0 for d in degrees) and n <= 1:
            yield (0,) * n
        return
    if any(d == 0 for d in degrees) or any(d >= n for d in degrees):
        return

    level = {_canon_key(n, classes, (0,) * n): (0,) * n}
    for k in range(nedges):
        remaining = nedges - k - 1
        nxt = {}
        for adj in level.values():
            deg = [adj[v].bit_count() for v in range(n)]
            support = [v for v in range(n) if deg[v] > 0]
            if support:
                cands = []
                for u in support:
                    if deg[u] >= degrees[u]:
                        continue
                    for v in range(n):
                        if v != u and not (adj[u] >> v) & 1 \
                                and deg[v] < degrees[v] \
                                and (deg[v] > 0 and v < u or deg[v] == 0):
                            cands.append((min(u, v), max(u, v)))
                cands = set(cands)
            else:
                cands = {(u, v) for u, v in combinations(range(n), 2)}
            for u, v in cands:
                isolated = sum(1 for w in range(n)
                               if deg[w] == 0 and w not in (u, v))
                if isolated > remaining:
                    continue
                adj2 = list(adj)
                adj2[u] |= 1 << v
                adj2[v] |= 1 << u
                adj2 = tuple(adj2)
                key = _canon_key(n, classes, adj2)
                if key not in nxt:
                    nxt[key] = adj2
        level = nxt
    for adj in level.values():
        yield adj


def degree_partitions(total, parts, minimum, maximum):
    """Weakly decreasing sequences of length parts summing to total."""
    out = []

    def rec(rest, k, cap, acc):
        if k == 0:
            if rest == 0:
                out.append(tuple(acc))
            return
        for d in range(min(cap, rest - minimum * (k - 1)), minimum - 1, -1):
            rec(rest - d, k - 1, d, acc + [d])

    if parts == 0:
        return [()] if total == 0 else []
    rec(total, parts, maximum, [])
    return out


def enumerate_slice_graphs(class_specs):
    """Connected graphs for a list of (color, degree, count) vertex classes.

    Returns canonical ColoredGraph values (true colors), deduplicated.
    """
    colors = []
    degrees = []
    for color, degree, count in class_specs:
        colors.extend([color] * count)
        degrees.extend([degree] * count)
    out = []
    for adj in graphs_with_degrees(colors, degrees):
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
        out.append(ColoredGraph(n, tuple(colors), frozenset(edges)))
    return out

"""Pure-python kernels: canonical labeling search and mod-p sparse elimination.

Reference implementations.  ghx._speedups provides compiled equivalents with
identical semantics; ghx.kernels picks one at import time.
"""

from __future__ import annotations


def _refine(cells, adj):
    """Equitable refinement of an ordered partition.

    cells: list of lists of vertices. Each cell is split by the number of
    neighbours its members have in every cell, until stable. Subcells are
    ordered by ascending count, which keeps the result invariant under
    relabeling.
    """
    while True:
        changed = False
        for splitter in list(cells):
            smask = 0
            for v in splitter:
                smask |= 1 << v
            out = []
            for cell in cells:
                if len(cell) == 1:
                    out.append(cell)
                    continue
                groups = {}
                for v in cell:
                    groups.setdefault((adj[v] & smask).bit_count(), []).append(v)
                if len(groups) == 1:
                    out.append(cell)
                else:
                    changed = True
                    for k in sorted(groups):
                        out.append(groups[k])
            cells = out
            if changed:
                break
        if not changed:
            return cells


def canon_search(n, colors, adj):
    """Canonical labeling and automorphism generators of a colored graph.

    adj[v] is the neighbour bitmask of vertex v.  Returns (perm, gens) where
    perm[old] = new gives the labeling whose color sequence is nondecreasing
    and whose relabeled adjacency-row tuple is lexicographically minimal among
    all color-preserving labelings.  gens is a generating set of Aut (as
    old-label image tuples).
    """
    if n == 0:
        return [], []
    bycolor = {}
    for v in range(n):
        bycolor.setdefault(colors[v], []).append(v)
    cells0 = [bycolor[c] for c in sorted(bycolor)]

    best_key = None
    best_perm = None
    gens = []
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    def handle_leaf(cells):
        nonlocal best_key, best_perm
        perm = [0] * n
        for newlab, cell in enumerate(cells):
            perm[cell[0]] = newlab
        key = []
        inv = [0] * n
        for v in range(n):
            inv[perm[v]] = v
        for i in range(n):
            m = adj[inv[i]]
            row = 0
            while m:
                low = m & -m
                row |= 1 << perm[low.bit_length() - 1]
                m ^= low
            key.append(row)
        key = tuple(key)
        if best_key is None or key < best_key:
            best_key = key
            best_perm = perm
        elif key == best_key:
            binv = [0] * n
            for v in range(n):
                binv[best_perm[v]] = v
            sigma = tuple(binv[perm[v]] for v in range(n))
            if any(sigma[v] != v for v in range(n)):
                gens.append(sigma)
                for v in range(n):
                    union(v, sigma[v])

    def recurse(cells, path):
        cells = _refine(cells, adj)
        target = None
        for idx, cell in enumerate(cells):
            if len(cell) > 1:
                target = idx
                break
        if target is None:
            handle_leaf(cells)
            return
        cell = cells[target]
        tried = []
        for v in cell:
            if not path:
                # root level: prune via global orbits of found automorphisms
                if any(find(v) == find(w) for w in tried):
                    continue
            else:
                # deeper: prune only by generators fixing the path pointwise
                skip = False
                for sg in gens:
                    if all(sg[x] == x for x in path) and sg[v] in tried:
                        skip = True
                        break
                if skip:
                    continue
            tried.append(v)
            rest = [w for w in cell if w != v]
            sub = cells[:target] + [[v], rest] + cells[target + 1:]
            recurse(sub, path + [v])

    recurse(cells0, [])
    return best_perm, [tuple(g) for g in gens]


def modp_rank(nrows, ncols, entries, p):
    """Rank over F_p by sparse Gaussian elimination.

    entries: iterable of (row, col, value). Pivots chosen by minimum
    Markowitz count (nnz_row-1)*(nnz_col-1) among the rows of least fill,
    ties broken by lowest column then lowest row. Deterministic.
    """
    rows = {}
    colrows = {}
    for r, c, v in entries:
        v %= p
        if v == 0:
            continue
        row = rows.setdefault(r, {})
        if c in row:
            raise ValueError(f"duplicate entry at ({r},{c})")
        row[c] = v
        colrows.setdefault(c, set()).add(r)

    rank = 0
    while rows:
        # candidate rows of minimal length
        minlen = min(len(row) for row in rows.values())
        best = None  # (markowitz, col, row)
        for r, row in rows.items():
            if len(row) != minlen:
                continue
            for c in row:
                mk = (minlen - 1) * (len(colrows[c]) - 1)
                cand = (mk, c, r)
                if best is None or cand < best:
                    best = cand
        _, pc, pr = best
        prow = rows.pop(pr)
        for c in prow:
            colrows[c].discard(pr)
            if not colrows[c]:
                del colrows[c]
        rank += 1
        inv = pow(prow[pc], p - 2, p)
        targets = list(colrows.get(pc, ()))
        for r in targets:
            row = rows[r]
            f = (row[pc] * inv) % p
            for c, v in prow.items():
                cur = row.get(c)
                if cur is None:
                    nv = (-f * v) % p
                    if nv:
                        row[c] = nv
                        colrows.setdefault(c, set()).add(r)
                else:
                    nv = (cur - f * v) % p
                    if nv:
                        row[c] = nv
                    else:
                        del row[c]
                        colrows[c].discard(r)
                        if not colrows[c]:
                            del colrows[c]
            if not row:
                del rows[r]
    return rank

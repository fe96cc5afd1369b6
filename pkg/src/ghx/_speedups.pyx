# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled kernels: canonical labeling search and mod-p sparse elimination.

Semantics mirror ghx._pure exactly (same canonical forms, same generator
discovery, same pivoting); the pure module is the reference.  Graphs with
more than 64 vertices are routed to the pure kernel by ghx.kernels.
"""

from libc.string cimport memcpy

ctypedef unsigned long long u64

cdef extern from *:
    """
    static inline int ghx_popcount(unsigned long long x) {
        return __builtin_popcountll(x);
    }
    static inline int ghx_ctz(unsigned long long x) {
        return __builtin_ctzll(x);
    }
    """
    int ghx_popcount(u64 x)
    int ghx_ctz(u64 x)


cdef struct Part:
    # ordered partition: vertices in lab[]; cellstart[i] marks cell starts
    int lab[64]
    int cellstart[64]
    int n


cdef void _refine(Part *part, u64 *adj):
    """Equitable refinement; subcells ordered by ascending neighbour count,
    stable within a cell (matches the pure implementation)."""
    cdef int n = part.n
    cdef int i, j, s, e, cs, ce, changed, cnt, distinct
    cdef u64 smask
    cdef int counts[64]
    cdef int tmp[64]
    cdef int order[64]
    while True:
        changed = 0
        s = 0
        while s < n and not changed:
            e = s + 1
            while e < n and not part.cellstart[e]:
                e += 1
            smask = 0
            for i in range(s, e):
                smask |= (<u64>1) << part.lab[i]
            cs = 0
            while cs < n:
                ce = cs + 1
                while ce < n and not part.cellstart[ce]:
                    ce += 1
                if ce - cs > 1:
                    distinct = 0
                    for i in range(cs, ce):
                        counts[i] = ghx_popcount(adj[part.lab[i]] & smask)
                    for i in range(cs + 1, ce):
                        if counts[i] != counts[cs]:
                            distinct = 1
                            break
                    if distinct:
                        # stable counting sort of lab[cs:ce] by counts
                        cnt = 0
                        for j in range(0, n + 1):
                            for i in range(cs, ce):
                                if counts[i] == j:
                                    order[cnt] = part.lab[i]
                                    tmp[cnt] = j
                                    cnt += 1
                            if cnt == ce - cs:
                                break
                        for i in range(ce - cs):
                            part.lab[cs + i] = order[i]
                        for i in range(cs + 1, ce):
                            part.cellstart[i] = tmp[i - cs] != tmp[i - cs - 1]
                        changed = 1
                cs = ce
            s = e
        if not changed:
            return


cdef class _Search:
    cdef u64 adj[64]
    cdef int n
    cdef int best_perm[64]
    cdef u64 best_key[64]
    cdef bint have_best
    cdef list gens
    cdef int parent[64]
    cdef int path[64]

    cdef int _find(self, int x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    cdef void _leaf(self, Part *part):
        cdef int perm[64]
        cdef int binv[64]
        cdef u64 key[64]
        cdef int i, v, cmp_res, a, b
        cdef bint nontrivial
        cdef u64 m, row
        cdef int n = self.n
        for i in range(n):
            perm[part.lab[i]] = i
        for i in range(n):
            m = self.adj[part.lab[i]]
            row = 0
            while m:
                v = ghx_ctz(m)
                row |= (<u64>1) << perm[v]
                m &= m - 1
            key[i] = row
        cmp_res = 0
        if self.have_best:
            for i in range(n):
                if key[i] < self.best_key[i]:
                    cmp_res = -1
                    break
                if key[i] > self.best_key[i]:
                    cmp_res = 1
                    break
        if not self.have_best or cmp_res < 0:
            self.have_best = True
            memcpy(self.best_key, key, n * sizeof(u64))
            memcpy(self.best_perm, perm, n * sizeof(int))
        elif cmp_res == 0:
            for i in range(n):
                binv[self.best_perm[i]] = i
            sigma = tuple([binv[perm[v]] for v in range(n)])
            nontrivial = False
            for v in range(n):
                if sigma[v] != v:
                    nontrivial = True
                    break
            if nontrivial:
                self.gens.append(sigma)
                for v in range(n):
                    a = self._find(v)
                    b = self._find(sigma[v])
                    if a != b:
                        self.parent[a] = b

    cdef void _recurse(self, Part *part, int depth):
        cdef int n = self.n
        cdef int target, ts, te, i, j, v, w, skip, pos
        cdef int tried[64]
        cdef int ntried
        cdef bint ok
        cdef Part sub
        _refine(part, self.adj)
        target = -1
        ts = 0
        while ts < n:
            te = ts + 1
            while te < n and not part.cellstart[te]:
                te += 1
            if te - ts > 1:
                target = ts
                break
            ts = te
        if target < 0:
            self._leaf(part)
            return
        te = target + 1
        while te < n and not part.cellstart[te]:
            te += 1
        ntried = 0
        for i in range(target, te):
            v = part.lab[i]
            if depth == 0:
                skip = 0
                for j in range(ntried):
                    if self._find(v) == self._find(tried[j]):
                        skip = 1
                        break
                if skip:
                    continue
            else:
                skip = 0
                for sg in self.gens:
                    ok = True
                    for j in range(depth):
                        if sg[self.path[j]] != self.path[j]:
                            ok = False
                            break
                    if not ok:
                        continue
                    w = sg[v]
                    for j in range(ntried):
                        if tried[j] == w:
                            skip = 1
                            break
                    if skip:
                        break
                if skip:
                    continue
            tried[ntried] = v
            ntried += 1
            sub = part[0]
            pos = target
            for j in range(target, te):
                if sub.lab[j] == v:
                    pos = j
                    break
            while pos > target:
                sub.lab[pos] = sub.lab[pos - 1]
                pos -= 1
            sub.lab[target] = v
            sub.cellstart[target] = 1
            if target + 1 < n:
                sub.cellstart[target + 1] = 1
            self.path[depth] = v
            self._recurse(&sub, depth + 1)


def canon_search(n, colors, adj):
    """Mirror of ghx._pure.canon_search for graphs on at most 64 vertices."""
    cdef int nn = n
    if nn == 0:
        return [], []
    if nn > 64:
        raise ValueError("compiled kernel limited to 64 vertices")
    cdef _Search s = _Search.__new__(_Search)
    cdef int i
    s.n = nn
    s.gens = []
    s.have_best = False
    for i in range(nn):
        s.adj[i] = <u64>adj[i]
        s.parent[i] = i
    order = sorted(range(nn), key=lambda vv: (colors[vv], vv))
    cdef Part part
    part.n = nn
    for i in range(nn):
        part.lab[i] = order[i]
        if i == 0 or colors[order[i]] != colors[order[i - 1]]:
            part.cellstart[i] = 1
        else:
            part.cellstart[i] = 0
    s._recurse(&part, 0)
    return [s.best_perm[i] for i in range(nn)], list(s.gens)


def modp_rank(nrows, ncols, entries, p_in):
    """Rank over F_p; same pivot strategy as the pure kernel."""
    cdef long long p = p_in
    cdef dict rows = {}
    cdef dict colrows = {}
    cdef long long v, minlen, mk, best_mk, f, inv, nv, cur
    cdef int rank = 0
    for rr, cc, vv in entries:
        v = vv % p
        if v == 0:
            continue
        row = rows.get(rr)
        if row is None:
            row = {}
            rows[rr] = row
        if cc in <dict>row:
            raise ValueError(f"duplicate entry at ({rr},{cc})")
        (<dict>row)[cc] = v
        s = colrows.get(cc)
        if s is None:
            s = set()
            colrows[cc] = s
        (<set>s).add(rr)

    while rows:
        minlen = -1
        for row in rows.values():
            if minlen < 0 or len(<dict>row) < minlen:
                minlen = len(<dict>row)
        best = None
        for r, row in rows.items():
            if len(<dict>row) != minlen:
                continue
            for c in <dict>row:
                mk = (minlen - 1) * (len(<set>colrows[c]) - 1)
                cand = (mk, c, r)
                if best is None or cand < best:
                    best = cand
        pc = best[1]
        pr = best[2]
        prow = rows.pop(pr)
        for c in <dict>prow:
            s = colrows[c]
            (<set>s).discard(pr)
            if not <set>s:
                del colrows[c]
        rank += 1
        inv = pow((<dict>prow)[pc], p - 2, p)
        targets = list(colrows.get(pc, ()))
        for rt in targets:
            row = rows[rt]
            f = ((<dict>row)[pc] * inv) % p
            for c, vv in (<dict>prow).items():
                v = vv
                cur_obj = (<dict>row).get(c)
                if cur_obj is None:
                    nv = (-f * v) % p
                    if nv:
                        (<dict>row)[c] = nv
                        s = colrows.get(c)
                        if s is None:
                            s = set()
                            colrows[c] = s
                        (<set>s).add(rt)
                else:
                    cur = cur_obj
                    nv = (cur - f * v) % p
                    if nv:
                        (<dict>row)[c] = nv
                    else:
                        del (<dict>row)[c]
                        s = colrows[c]
                        (<set>s).discard(rt)
                        if not <set>s:
                            del colrows[c]
            if not <dict>row:
                del rows[rt]
    return rank

"""Forested graph complexes: graphs with a distinguished marked forest,
encoded as colored simple graphs, with the contraction (d_c) and unmarking
(d_u) differentials forming a bicomplex.

Species level: internal vertices of valence >= 3 counting hairs, tadpoles
and parallel edges allowed, r numbered hairs, a cycle-free marked set of
internal non-tadpole edges.  Encoding (the one canonicalizer serves all
families): internal vertices color 0; a marked edge is a direct edge between
color-0 vertices; an unmarked edge is subdivided by one color-1 vertex (a
tadpole by two, forming a 2-path back to its vertex); hair k is a univalent
vertex of color 1+k.

Orientations: n=0 orders the marked edges; n=1 orders internal vertices,
half-edges and unmarked edges (blocks in that order).  Half-edges are flags
(vertex, incident encoded edge); hair edges contribute their flags but are
not unmarked edges.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from .engine import SliceSpec
from .graphs import ColoredGraph, automorphism_generators, canonicalize
from .orientation import extract, word_parity


@dataclass(frozen=True)
class ForestedGraph:
    """Species-level forested graph; edge identity is the index."""

    nv: int
    edges: tuple        # ((a, b) with a <= b; a == b is a tadpole)
    marked: frozenset   # edge indices, spanning no cycle
    hairs: tuple        # hairs[k] = vertex carrying hair number k+1

    def __post_init__(self):
        for a, b in self.edges:
            if not (0 <= a <= b < self.nv):
                raise ValueError("bad edge endpoints")
        for i in self.marked:
            a, b = self.edges[i]
            if a == b:
                raise ValueError("tadpoles cannot be marked")
        if not _is_forest([self.edges[i] for i in self.marked]):
            raise ValueError("marked set contains a cycle")
        for h in self.hairs:
            if not (0 <= h < self.nv):
                raise ValueError("hair attached to missing vertex")

    def valences(self):
        val = [0] * self.nv
        for a, b in self.edges:
            val[a] += 1
            val[b] += 1
        for h in self.hairs:
            val[h] += 1
        return val

    def loops(self):
        return len(self.edges) - self.nv + 1

    def excess(self):
        return sum(v - 3 for v in self.valences())


def _is_forest(pairs):
    parent = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        parent[ra] = rb
    return True


def species_connected(fg):
    if fg.nv == 0:
        return False
    seen = {0}
    stack = [0]
    adj = {v: set() for v in range(fg.nv)}
    for a, b in fg.edges:
        adj[a].add(b)
        adj[b].add(a)
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == fg.nv


def species_bridges(fg):
    """Bridge edge indices; hairs never count, parallels and tadpoles are
    never bridges."""
    mult = {}
    for a, b in fg.edges:
        mult[(a, b)] = mult.get((a, b), 0) + 1
    out = set()
    for i, (a, b) in enumerate(fg.edges):
        if a == b or mult[(a, b)] > 1:
            continue
        seen = {a}
        stack = [a]
        while stack:
            v = stack.pop()
            for j, (x, y) in enumerate(fg.edges):
                if j == i:
                    continue
                if x == v and y not in seen:
                    seen.add(y)
                    stack.append(y)
                elif y == v and x not in seen:
                    seen.add(x)
                    stack.append(x)
        if b not in seen:
            out.add(i)
    return out


def excess_and_filters(fg):
    """(excess, bridgeless) of a species graph."""
    return fg.excess(), not species_bridges(fg)


# -- encoding ------------------------------------------------------------------

def encode_forested(fg):
    """Colored-simple-graph encoding; returns (graph, objmap).

    objmap carries the orientation objects of fg in encoded labels:
      objmap["vertex"][v]      internal vertex label
      objmap["marked"][i]      ("e", a, b)
      objmap["unmarked"][i]    ("ue", s) or ("ut", s1, s2)
      objmap["flags"][(i, end)] ("h", vertex, other)  end in (0, 1)
      objmap["hairflags"][(k, end)]  flags of hair k's edge
    """
    nv = fg.nv
    colors = [0] * nv
    edges = set()
    objmap = {"vertex": list(range(nv)), "marked": {}, "unmarked": {},
              "flags": {}, "hairflags": {}}
    nxt = nv
    for i, (a, b) in enumerate(fg.edges):
        if i in fg.marked:
            edges.add((min(a, b), max(a, b)))
            objmap["marked"][i] = ("e", min(a, b), max(a, b))
            objmap["flags"][(i, 0)] = ("h", a, b)
            objmap["flags"][(i, 1)] = ("h", b, a)
        elif a == b:
            s1, s2 = nxt, nxt + 1
            nxt += 2
            colors.extend([1, 1])
            edges.update({(a, s1), (a, s2), (s1, s2)})
            objmap["unmarked"][i] = ("ut", s1, s2)
            objmap["flags"][(i, 0)] = ("h", a, s1)
            objmap["flags"][(i, 1)] = ("h", a, s2)
        else:
            s = nxt
            nxt += 1
            colors.append(1)
            edges.update({(a, s), (b, s)})
            objmap["unmarked"][i] = ("ue", s)
            objmap["flags"][(i, 0)] = ("h", a, s)
            objmap["flags"][(i, 1)] = ("h", b, s)
    for k, h in enumerate(fg.hairs):
        hv = nxt
        nxt += 1
        colors.append(2 + k)
        edges.add((h, hv))
        objmap["hairflags"][(k, 0)] = ("h", h, hv)
        objmap["hairflags"][(k, 1)] = ("h", hv, h)
    g = ColoredGraph(nxt, tuple(colors), frozenset(edges))
    return g, objmap


def decode_forested(g):
    """Inverse of encode_forested on canonical encoded graphs.

    Returns a ForestedGraph whose vertex labels are the positions of the
    color-0 vertices of g (in label order) and whose edge order is: marked
    edges sorted by endpoints, then unmarked gadgets sorted by smallest
    subdivision label.
    """
    internal = [v for v in range(g.vertex_count) if g.colors[v] == 0]
    pos = {v: i for i, v in enumerate(internal)}
    subdiv = [v for v in range(g.vertex_count) if g.colors[v] == 1]
    hairv = {g.colors[v] - 1: v for v in range(g.vertex_count)
             if g.colors[v] >= 2}
    marked = []
    for u, v in g.sorted_edges:
        if g.colors[u] == 0 and g.colors[v] == 0:
            marked.append((pos[u], pos[v]))
    gadgets = []
    seen = set()
    for s in subdiv:
        if s in seen:
            continue
        nbrs = g.neighbors(s)
        if len(nbrs) != 2:
            raise ValueError("subdivision vertex must be bivalent")
        others = [w for w in nbrs if g.colors[w] == 1]
        if others:
            s2 = others[0]
            if g.colors[s2] != 1 or s2 in seen:
                raise ValueError("malformed tadpole pair")
            (v,) = [w for w in g.neighbors(s) if w != s2]
            (v2,) = [w for w in g.neighbors(s2) if w != s]
            if v != v2 or g.colors[v] != 0:
                raise ValueError("malformed tadpole pair")
            seen.update({s, s2})
            gadgets.append((min(s, s2), (pos[v], pos[v])))
        else:
            u, w = nbrs
            if g.colors[u] != 0 or g.colors[w] != 0:
                raise ValueError("subdivision neighbor not internal")
            seen.add(s)
            a, b = pos[u], pos[w]
            gadgets.append((s, (min(a, b), max(a, b))))
    gadgets.sort()
    edges = tuple(marked) + tuple(e for _, e in gadgets)
    hairs = []
    for k in range(len(hairv)):
        if k + 1 not in hairv:
            raise ValueError("hair numbers must be 1..r")
        hv = hairv[k + 1]
        (u,) = g.neighbors(hv)
        if g.colors[u] != 0:
            raise ValueError("hair attached to non-internal vertex")
        hairs.append(pos[u])
    return ForestedGraph(len(internal), edges,
                         frozenset(range(len(marked))), tuple(hairs))


# -- orientation words ---------------------------------------------------------

def forested_word(g, n):
    """Reference orientation word of a canonical encoded forested graph."""
    internal = [v for v in range(g.vertex_count) if g.colors[v] == 0]
    marked = [("e", u, v) for u, v in g.sorted_edges
              if g.colors[u] == 0 and g.colors[v] == 0]
    if n == 0:
        return marked
    word = [("v", v) for v in internal]
    flags = []
    for u, v in g.sorted_edges:
        cu, cv = g.colors[u], g.colors[v]
        if cu == 1 and cv == 1:
            continue  # the inner edge of a tadpole pair carries no flag
        flags.append(("h", u, v))
        flags.append(("h", v, u))
    # flags at subdivision vertices are not half-edges of the species; keep
    # only flags whose carrier is internal or a hair vertex
    flags = [f for f in flags if g.colors[f[1]] != 1]
    flags.sort()
    word += flags
    unmarked = []
    seen = set()
    for s in range(g.vertex_count):
        if g.colors[s] != 1 or s in seen:
            continue
        mates = [w for w in g.neighbors(s) if g.colors[w] == 1]
        if mates:
            s2 = mates[0]
            seen.update({s, s2})
            unmarked.append(("ut", min(s, s2), max(s, s2)))
        else:
            seen.add(s)
            unmarked.append(("ue", s))
    unmarked.sort()
    word += unmarked
    return word


def map_forested_object(obj, vmap):
    tag = obj[0]
    if tag in ("v",):
        return ("v", vmap[obj[1]])
    if tag == "e":
        a, b = vmap[obj[1]], vmap[obj[2]]
        return ("e", min(a, b), max(a, b))
    if tag == "h":
        return ("h", vmap[obj[1]], vmap[obj[2]])
    if tag == "ue":
        return ("ue", vmap[obj[1]])
    if tag == "ut":
        a, b = vmap[obj[1]], vmap[obj[2]]
        return ("ut", min(a, b), max(a, b))
    raise ValueError(f"unknown forested object {obj!r}")


def forested_sign(sigma_images, g, n, target=None):
    """Sign by which an isomorphism of encoded forested graphs acts."""
    if target is None:
        target = g
    src = forested_word(g, n)
    tgt = forested_word(target, n)
    return word_parity([map_forested_object(o, sigma_images) for o in src],
                       tgt)


@lru_cache(maxsize=200_000)
def forested_is_zero(g, n):
    gens = automorphism_generators(g)
    for sg in gens:
        if forested_sign(sg.images, g, n) == -1:
            return True
    return False


# -- slice generation ----------------------------------------------------------

def slice_vertex_count(spec):
    """v = 2g - 2 + r - e for valence bookkeeping; None if infeasible."""
    v = 2 * spec.loops - 2 + spec.hairs - spec.excess
    return v if v >= 1 else None


def _valence_distributions(v, excess):
    """Sorted valence tuples: v parts, each >= 3, total 3v + excess."""
    out = []

    def rec(i, rest, cap, acc):
        if i == v:
            if rest == 0:
                out.append(tuple(acc))
            return
        for add in range(min(cap, rest), -1, -1):
            rec(i + 1, rest - add, add, acc + [3 + add])

    rec(0, excess, excess, [])
    return out


def species_multigraphs(valences):
    """Connected multigraphs (tadpoles allowed) with the exact valence
    sequence; yields edge tuples.  Labeled enumeration; callers deduplicate
    through the encoded canonical form."""
    nv = len(valences)
    slots = [(i, j) for i in range(nv) for j in range(i, nv)]
    total = sum(valences)
    if total % 2:
        return
    target = list(valences)

    def rec(k, deg, acc):
        if k == len(slots):
            if deg == target:
                yield tuple(acc)
            return
        i, j = slots[k]
        # max multiplicity of this slot
        if i == j:
            room = (target[i] - deg[i]) // 2
        else:
            room = min(target[i] - deg[i], target[j] - deg[j])
        # feasibility: remaining slots must be able to finish each vertex
        for mult in range(room, -1, -1):
            deg2 = list(deg)
            if i == j:
                deg2[i] += 2 * mult
            else:
                deg2[i] += mult
                deg2[j] += mult
            # vertices with no remaining slots must be saturated
            ok = True
            for x in range(nv):
                if deg2[x] > target[x]:
                    ok = False
                    break
                if deg2[x] < target[x]:
                    remaining = any(
                        (a == x or b == x) for a, b in slots[k + 1:])
                    if not remaining:
                        ok = False
                        break
            if ok:
                yield from rec(k + 1, deg2, acc + [(i, j)] * mult)

    yield from rec(0, [0] * nv, [])


def hair_assignments(nv, r, capacity):
    """All maps hair number -> vertex respecting per-vertex capacity."""
    if r == 0:
        yield ()
        return
    for head in range(nv):
        if capacity[head] <= 0:
            continue
        cap2 = list(capacity)
        cap2[head] -= 1
        for tail in hair_assignments(nv, r - 1, cap2):
            yield (head,) + tuple(t for t in tail)


class ForestedFamily:
    """Bridgeless (or full) forested slices keyed by (n parity, loops,
    hairs, excess, marked count)."""

    name = "forested"

    @staticmethod
    def n_of(spec):
        return 0 if spec.n_parity == "even" else 1

    def generate(self, engine, spec):
        v = slice_vertex_count(spec)
        if v is None or spec.marked > max(v - 1, 0) or spec.marked < 0:
            return []
        n = self.n_of(spec)
        out = {}
        for valences in _valence_distributions(v, spec.excess):
            for hairs_at in self._hair_splits(v, spec.hairs, valences):
                internal_val = [valences[i] - hairs_at.count(i)
                                for i in range(v)]
                if any(d < 0 for d in internal_val):
                    continue
                if sum(internal_val) != 2 * (v - 1 + spec.loops):
                    continue
                for edges in species_multigraphs(internal_val):
                    base = ForestedGraph(v, edges, frozenset(), hairs_at)
                    if not species_connected(base):
                        continue
                    if spec.bridgeless and species_bridges(base):
                        continue
                    nontad = [i for i, (a, b) in enumerate(edges) if a != b]
                    for sub in combinations(nontad, spec.marked):
                        pairs = [edges[i] for i in sub]
                        if not _is_forest(pairs):
                            continue
                        fg = ForestedGraph(v, edges, frozenset(sub), hairs_at)
                        enc, _ = encode_forested(fg)
                        canon, _ = canonicalize(enc)
                        key = canon.key()
                        if key in out:
                            continue
                        if forested_is_zero(canon, n):
                            continue
                        out[key] = canon
        return list(out.values())

    @staticmethod
    def _hair_splits(v, r, valences):
        # hairs are numbered: enumerate all assignments, capacity = valence
        yield from hair_assignments(v, r, list(valences))

    def op_targets(self, op_name, spec):
        down = lambda **kw: SliceSpec(  # noqa: E731
            "forested", spec.n_parity, spec.loops, hairs=spec.hairs,
            marked=spec.marked - 1, bridgeless=spec.bridgeless, **kw)
        if op_name == "d_u":
            return [down(excess=spec.excess)]
        if op_name == "d_c":
            return [down(excess=spec.excess + 1)]
        if op_name == "d_uc":
            return [down(excess=spec.excess), down(excess=spec.excess + 1)]
        raise ValueError(f"forested has no operator {op_name!r}")

    def op_terms(self, engine, op_name, spec, g):
        n = self.n_of(spec)
        fg = decode_forested(g)
        src_word = forested_word(g, n)
        want_u = op_name in ("d_u", "d_uc")
        want_c = op_name in ("d_c", "d_uc")
        slot_c = 0 if op_name == "d_c" else 1
        for i in sorted(fg.marked):
            if want_u:
                term = unmark_term(g, fg, i, n, src_word)
                if term is not None:
                    canon, sign = term
                    if not forested_is_zero(canon, n):
                        yield 0, canon, sign
            if want_c:
                term = contract_term(g, fg, i, n, src_word)
                if term is not None:
                    canon, sign = term
                    if not forested_is_zero(canon, n):
                        yield slot_c, canon, sign


def gadget_signatures(g):
    """Edge signatures of the encoded graph g, aligned with the edge order
    of decode_forested: ("e",u,v) for marked, ("ue",s,u,w) for a single
    subdivision, ("ut",s1,s2,v) for a tadpole pair."""
    marked = [("e", u, v) for u, v in g.sorted_edges
              if g.colors[u] == 0 and g.colors[v] == 0]
    gadgets = []
    seen = set()
    for s in range(g.vertex_count):
        if g.colors[s] != 1 or s in seen:
            continue
        mates = [w for w in g.neighbors(s) if g.colors[w] == 1]
        if mates:
            s2 = mates[0]
            seen.update({s, s2})
            (v,) = [w for w in g.neighbors(s) if w != s2]
            gadgets.append((min(s, s2), ("ut", min(s, s2), max(s, s2), v)))
        else:
            seen.add(s)
            u, w = g.neighbors(s)
            gadgets.append((s, ("ue", s, u, w)))
    gadgets.sort()
    return marked + [sig for _, sig in gadgets]


def _flag_map_for_unmark(a, b, s):
    """Object map fixing labels, turning marked edge (a,b) into the
    subdivided unmarked edge through s."""

    def mapper(obj):
        if obj == ("e", a, b):
            raise ValueError("extracted object mapped")
        if obj == ("h", a, b):
            return ("h", a, s)
        if obj == ("h", b, a):
            return ("h", b, s)
        return obj

    return mapper


def unmark_term(g, fg, i, n, src_word):
    """(canonical target, sign) for unmarking marked edge i, or None."""
    sigs = gadget_signatures(g)
    _, a, b = sigs[i]
    s = g.vertex_count
    colors = g.colors + (1,)
    edges = set(g.edges)
    edges.remove((a, b))
    edges.update({(min(a, s), max(a, s)), (min(b, s), max(b, s))})
    g2 = ColoredGraph(s + 1, colors, frozenset(edges))
    canon, rel = canonicalize(g2)
    vmap = list(rel.images)
    premap = _flag_map_for_unmark(a, b, s)
    word = list(src_word)
    sign = 1
    if n == 0:
        sign = extract(word, ("e", a, b), sign)
        image = [map_forested_object(premap(o), vmap) for o in word]
    else:
        image = [("ue", vmap[s])]
        image += [map_forested_object(premap(o), vmap) for o in word]
    tgt = forested_word(canon, n)
    return canon, sign * word_parity(image, tgt)


def contract_term(g, fg, i, n, src_word):
    """(canonical target, sign) for contracting marked edge i, or None."""
    sigs = gadget_signatures(g)
    _, a, b = sigs[i]  # a < b, both internal, distinct
    nold = g.vertex_count

    def mm(x):
        if x == b:
            return a
        return x if x < b else x - 1

    # gadgets that become tadpoles: single subdivision between a and b
    new_edges = set()
    colors = [g.colors[x] for x in range(nold) if x != b]
    extra = []  # appended subdiv mates for newly formed tadpoles
    pairmate = {}
    for sig in sigs:
        if sig[0] == "ue":
            _, s, u, w = sig
            if {u, w} == {a, b}:
                s2 = len(colors) + len(extra)
                extra.append(1)
                pairmate[s] = s2
    flagmap = {}
    for u, v in g.edges:
        if (u, v) == (a, b):
            continue
        x, y = mm(u), mm(v)
        if x == y:
            # edge between a and b collapsing: only the marked edge itself
            # does this (direct subdiv paths survive as tadpole pairs)
            raise RuntimeError("unexpected collapsed edge")
        new_edges.add((min(x, y), max(x, y)))
    for s, s2 in pairmate.items():
        # break the double edge a'-s into the pair path a'-s-s2-a'
        sa = mm(s)
        new_edges.discard((min(mm(a), sa), max(mm(a), sa)))
        new_edges.update({(min(mm(a), sa), max(mm(a), sa)),
                          (min(sa, s2), max(sa, s2)),
                          (min(mm(a), s2), max(mm(a), s2))})
    colors.extend([1] * len(extra))
    g2 = ColoredGraph(len(colors), tuple(colors), frozenset(new_edges))
    canon, rel = canonicalize(g2)

    def final(x):
        return rel(x)

    def mapper(obj):
        tag = obj[0]
        if tag == "v":
            return ("v", final(mm(obj[1])))
        if tag == "e":
            x, y = final(mm(obj[1])), final(mm(obj[2]))
            return ("e", min(x, y), max(x, y))
        if tag == "h":
            x, y = obj[1], obj[2]
            if g.colors[x] == 0 and g.colors[y] == 1 and y in pairmate:
                # ends of a collapsing parallel edge: one end keeps the old
                # subdivision vertex, the other moves to its new mate; tie
                # the a-side to the old label, the b-side to the mate
                if x == a:
                    return ("h", final(mm(a)), final(mm(y)))
                if x == b:
                    return ("h", final(mm(a)), final(pairmate[y]))
            return ("h", final(mm(x)), final(mm(y)))
        if tag == "ue":
            s = obj[1]
            if s in pairmate:
                x, y = final(mm(s)), final(pairmate[s])
                return ("ut", min(x, y), max(x, y))
            return ("ue", final(mm(s)))
        if tag == "ut":
            x, y = final(mm(obj[1])), final(mm(obj[2]))
            return ("ut", min(x, y), max(x, y))
        raise ValueError(f"unknown object {obj!r}")

    word = list(src_word)
    sign = 1
    if n == 0:
        sign = extract(word, ("e", a, b), sign)
        image = [mapper(o) for o in word]
    else:
        sign = extract(word, ("h", b, a), sign)
        sign = extract(word, ("h", a, b), sign)
        sign = extract(word, ("v", b), sign)
        sign = extract(word, ("v", a), sign)
        image = [("v", final(mm(a)))] + [mapper(o) for o in word]
    tgt = forested_word(canon, n)
    return canon, sign * word_parity(image, tgt)


# -- homology pipeline ---------------------------------------------------------

def forested_slice(n_parity, loops, marked, hairs=0, excess=0,
                   bridgeless=True):
    return SliceSpec("forested", n_parity, loops, hairs=hairs, marked=marked,
                     excess=excess, bridgeless=bridgeless)


def dc_rank_by_euler(engine, n_parity, loops, marked_plus_1, hairs,
                     bridgeless=True):
    """Exact rank of d_c out of the 0-excess slice with m+1 marked edges,
    from the excess-graded Euler characteristic: the contraction complex is
    exact above excess zero, so the rank telescopes into an alternating sum
    of slice dimensions (no matrix needed)."""
    total = 0
    e = 1
    while True:
        m = marked_plus_1 - e
        if m < 0 or slice_vertex_count(
                forested_slice(n_parity, loops, m, hairs, e, bridgeless)) is None:
            break
        dim = engine.dim(forested_slice(n_parity, loops, m, hairs, e,
                                        bridgeless))
        total += dim if e % 2 == 1 else -dim
        e += 1
    if total < 0:
        from .engine import NegativeHomologyError
        raise NegativeHomologyError(
            f"negative d_c rank {total} from the excess Euler sum")
    return total


def forested_homology(engine, n_parity, loops, marked, hairs=0,
                      bridgeless=True):
    """(value, exact_over_q) of the forested homology at (loops, marked).

    D = dim V_m - rank d_uc(m) - rank d_uc(m+1) + rank d_c(m+1), the last
    term exact via the excess Euler sum, so computed values are upper bounds
    over Q and exact when 0.
    """
    spec = forested_slice(n_parity, loops, marked, hairs, 0, bridgeless)
    dim_v = engine.dim(spec)
    if dim_v == 0:
        return None, True
    r_uc = engine.rank("d_uc", spec) if marked >= 1 else None
    rank_out = r_uc.rank if r_uc else 0
    up = forested_slice(n_parity, loops, marked + 1, hairs, 0, bridgeless)
    rank_in = 0
    dc_exact = 0
    exact = r_uc.exact_over_q if r_uc else True
    if engine.dim(up) > 0:
        r_in = engine.rank("d_uc", up)
        rank_in = r_in.rank
        exact = exact and r_in.exact_over_q
        dc_exact = dc_rank_by_euler(engine, n_parity, loops, marked + 1,
                                    hairs, bridgeless)
    value = dim_v - rank_out - rank_in + dc_exact
    if value < 0:
        from .engine import NegativeHomologyError
        raise NegativeHomologyError(
            f"negative forested homology {value} at {spec.path()}")
    return value, exact or value == 0


# -- distinguished cycles ------------------------------------------------------

def w_ladder(length):
    """Cycle of `length` doubled rungs: 2*length vertices, one strand of
    each doubled pair marked.  Loop order length+1."""
    if length < 2:
        raise ValueError("ladder needs at least 2 rungs")
    nv = 2 * length
    edges = []
    marked = []
    for k in range(length):
        a, b = 2 * k, 2 * k + 1
        nxt = (a + 2) % nv
        marked.append(len(edges))
        edges.append((a, b))     # marked strand
        edges.append((a, b))     # parallel unmarked strand
        edges.append((min(b, nxt), max(b, nxt)))  # connector
    return ForestedGraph(nv, tuple(edges), frozenset(marked), ())


def w_cycle(k):
    """W_{2k}: the even ladder cycle with 4k-2 vertices, 6k-3 edges and
    2k-1 marked rungs, a d_c- and d_u-closed class for n = 1."""
    if k < 2:
        raise ValueError("the family starts at k = 2")
    return w_ladder(2 * k - 1)


def morita_gluing(images):
    """One double-ladder gluing: two columns of 2k+1 trivalent vertices,
    marked paths down each column, a closing unmarked edge per column, and
    horizontal rungs pairing the columns by the permutation."""
    rows = len(images)
    edges = []
    marked = []
    for side in (0, rows):
        for i in range(rows - 1):
            marked.append(len(edges))
            edges.append((side + i, side + i + 1))
        edges.append((side, side + rows - 1))  # closing unmarked edge
    for i in range(rows):
        edges.append(tuple(sorted((i, rows + images[i]))))
    return ForestedGraph(2 * rows, tuple(edges), frozenset(marked), ())


def morita_cycle(k):
    """Morita cycle at loop order 2k+2: 4k+2 vertices, 4k marked edges.

    The cycle is the (unique up to scale) d_c- and d_u-closed combination of
    the column-ladder gluings; the gluing coefficients are solved for
    exactly, since the relative signs of the published sum depend on a
    reference-orientation gauge.  Returns a dict canonical graph -> integer
    coefficient.
    """
    if k < 1:
        raise ValueError("the family starts at k = 1")
    if k > 2:
        from .linalg import CapacityError
        raise CapacityError("morita cycles beyond k = 2 exceed desk scale")
    from itertools import permutations as _perms

    from .linalg import SparseIntMatrix, nullspace_mod_p, DEFAULT_PRIME

    span = {}
    for images in _perms(range(2 * k + 1)):
        chain = chain_graphs_from_terms([(morita_gluing(images), 1)], 0)
        if not chain:
            continue
        ((g, sign),) = chain.items()
        span.setdefault(g.key(), (g, {}))
    reps = [g for g, _ in span.values()]
    images_u = [chain_differential({g: 1}, 0, "d_u") for g in reps]
    images_c = [chain_differential({g: 1}, 0, "d_c") for g in reps]
    # stacked constraint matrix: rows indexed by (block, target graph)
    rowindex = {}
    ents = []
    for j, g in enumerate(reps):
        for label, img in (("u", images_u[j]), ("c", images_c[j])):
            for tg, coeff in img.items():
                key = (label, tg.key())
                r = rowindex.setdefault(key, len(rowindex))
                ents.append((r, j, coeff))
    mat = SparseIntMatrix.build(len(rowindex), len(reps), ents)
    ns = nullspace_mod_p(mat, DEFAULT_PRIME)
    if ns.cols != 1:
        raise RuntimeError(
            f"morita gluing span has kernel dimension {ns.cols}, expected 1")
    raw = {r: v for r, _, v in ns.entries}
    lead = raw[min(raw)]
    inv = pow(lead, DEFAULT_PRIME - 2, DEFAULT_PRIME)
    coeffs = {}
    for r, v in raw.items():
        w = (v * inv) % DEFAULT_PRIME
        coeffs[r] = w if w <= DEFAULT_PRIME // 2 else w - DEFAULT_PRIME
    from math import gcd
    g0 = 0
    for v in coeffs.values():
        g0 = gcd(g0, v)
    chain = {reps[j]: v // g0 for j, v in coeffs.items()}
    # certify exactly over the integers
    assert not chain_differential(chain, 0, "d_u")
    assert not chain_differential(chain, 0, "d_c")
    return chain


def chain_from_terms(terms, n):
    """Express (graph, coeff) terms in canonical-basis coordinates.

    Returns dict canonical-key -> coefficient; zero graphs contribute 0.
    """
    out = {}
    for fg, coeff in terms:
        enc, _ = encode_forested(fg)
        canon, rel = canonicalize(enc)
        if forested_is_zero(canon, n):
            continue
        sign = forested_sign(rel.images, enc, n, target=canon)
        key = canon.key()
        out[key] = out.get(key, 0) + coeff * sign
    return {k: v for k, v in out.items() if v}


def chain_image(engine, spec, chain, op_name):
    """Image coordinates of a chain (dict key -> coeff) under an operator."""
    basis = engine.basis(spec)
    handle = engine.operator(op_name, spec)
    cols = {}
    for r, c, v in handle.matrix.entries:
        cols.setdefault(c, []).append((r, v))
    out = {}
    for key, coeff in chain.items():
        j = basis.index[key]
        for r, v in cols.get(j, ()):
            out[r] = out.get(r, 0) + coeff * v
    return {r: v for r, v in out.items() if v}


def is_zero_ladder(length):
    """Whether the odd-length ladder cycle is a zero graph (n = 1)."""
    fg = w_ladder(length)
    enc, _ = encode_forested(fg)
    canon, _ = canonicalize(enc)
    return forested_is_zero(canon, 1)


def chain_differential(chain_graphs, n, op_name):
    """Image of a chain under d_u / d_c without building slice bases.

    chain_graphs: dict canonical-encoded-graph -> coefficient. Returns the
    image in the same form (zero graphs dropped)."""
    out = {}
    for g, coeff in chain_graphs.items():
        fg = decode_forested(g)
        word = forested_word(g, n)
        for i in sorted(fg.marked):
            if op_name == "d_u":
                term = unmark_term(g, fg, i, n, word)
            else:
                term = contract_term(g, fg, i, n, word)
            if term is None:
                continue
            canon, sign = term
            if forested_is_zero(canon, n):
                continue
            out[canon] = out.get(canon, 0) + coeff * sign
    return {g: v for g, v in out.items() if v}


def chain_graphs_from_terms(terms, n):
    """Like chain_from_terms but keyed by the canonical graph itself."""
    out = {}
    for fg, coeff in terms:
        enc, _ = encode_forested(fg)
        canon, rel = canonicalize(enc)
        if forested_is_zero(canon, n):
            continue
        sign = forested_sign(rel.images, enc, n, target=canon)
        out[canon] = out.get(canon, 0) + coeff * sign
    return {g: v for g, v in out.items() if v}

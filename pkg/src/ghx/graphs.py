"""Colored simple graphs: canonical forms, automorphisms, contraction,
structural predicates and the graph6 text encoding.

Every graph species in the engine (ordinary, hairy, colored-hairy, encoded
forested) is carried by ColoredGraph; vertex colors encode the extra
structure.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, permutations

from . import kernels


@dataclass(frozen=True)
class Permutation:
    """Bijection on [0, size), stored as the image tuple."""

    images: tuple

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError("not a bijection")

    def __call__(self, i):
        return self.images[i]

    def __len__(self):
        return len(self.images)

    @staticmethod
    def identity(n):
        return Permutation(tuple(range(n)))

    def inverse(self):
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(tuple(inv))

    def compose(self, other):
        """self after other: (self.compose(other))(x) = self(other(x))."""
        return Permutation(tuple(self.images[other.images[x]]
                                 for x in range(len(self.images))))

    @property
    def parity(self):
        """+1 for even, -1 for odd."""
        seen = [False] * len(self.images)
        sign = 1
        for i in range(len(self.images)):
            if seen[i]:
                continue
            j = i
            clen = 0
            while not seen[j]:
                seen[j] = True
                j = self.images[j]
                clen += 1
            if clen % 2 == 0:
                sign = -sign
        return sign


def perm_parity(images):
    """Parity of an image sequence without constructing a Permutation."""
    return Permutation(tuple(images)).parity


@dataclass(frozen=True)
class ColoredGraph:
    """Undirected simple graph with an integer color per vertex."""

    vertex_count: int
    colors: tuple
    edges: frozenset

    def __post_init__(self):
        if len(self.colors) != self.vertex_count:
            raise ValueError("colors length != vertex_count")
        for u, v in self.edges:
            if u == v:
                raise ValueError("self-loop")
            if not (0 <= u < v < self.vertex_count):
                raise ValueError("bad edge endpoints")

    @staticmethod
    def build(vertex_count, colors, edges):
        norm = frozenset((min(u, v), max(u, v)) for u, v in edges)
        if len(norm) != len(list(edges)):
            raise ValueError("duplicate edge")
        return ColoredGraph(vertex_count, tuple(colors), norm)

    @cached_property
    def adjacency(self):
        adj = [0] * self.vertex_count
        for u, v in self.edges:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return tuple(adj)

    @cached_property
    def sorted_edges(self):
        return tuple(sorted(self.edges))

    def degree(self, v):
        return self.adjacency[v].bit_count()

    @cached_property
    def degrees(self):
        return tuple(self.adjacency[v].bit_count() for v in range(self.vertex_count))

    def neighbors(self, v):
        m = self.adjacency[v]
        out = []
        while m:
            low = m & -m
            out.append(low.bit_length() - 1)
            m ^= low
        return out

    def relabel(self, perm):
        """Apply perm (old label -> new label)."""
        colors = [0] * self.vertex_count
        for v in range(self.vertex_count):
            colors[perm(v)] = self.colors[v]
        edges = frozenset((min(perm(u), perm(v)), max(perm(u), perm(v)))
                          for u, v in self.edges)
        return ColoredGraph(self.vertex_count, tuple(colors), edges)

    def key(self):
        """Hashable identity used for basis ordering and dedup."""
        return (self.vertex_count, self.colors, self.sorted_edges)


def canonicalize(g):
    """Canonical representative of g's isomorphism class plus the relabeling.

    Two color-isomorphic graphs canonicalize to the identical ColoredGraph,
    deterministically across runs and platforms.
    """
    perm, _ = kernels.canon_search(g.vertex_count, g.colors, g.adjacency)
    p = Permutation(tuple(perm)) if perm is not None else Permutation.identity(0)
    if g.vertex_count == 0:
        return g, Permutation(())
    return g.relabel(p), p


def automorphism_generators(g):
    """Generators of the color-preserving automorphism group of g."""
    _, gens = kernels.canon_search(g.vertex_count, g.colors, g.adjacency)
    return [Permutation(t) for t in gens]


def brute_force_automorphisms(g):
    """All automorphisms by exhaustive search; small graphs only (tests)."""
    out = []
    for images in permutations(range(g.vertex_count)):
        p = Permutation(images)
        ok = all(g.colors[images[v]] == g.colors[v] for v in range(g.vertex_count))
        if ok and g.relabel(p) == g:
            out.append(p)
    return out


def contract_edge(g, e):
    """Contract edge e, merging its endpoints at the smaller label.

    Returns (contracted graph, merge map old vertex -> new vertex), or None
    when the result is not simple (a parallel edge would be created), in
    which case the corresponding differential term is zero.
    """
    u, v = min(e), max(e)
    if (u, v) not in g.edges:
        raise ValueError(f"edge {e} not in graph")
    if g.adjacency[u] & g.adjacency[v]:
        return None  # common neighbour: contraction doubles an edge
    merge = []
    for w in range(g.vertex_count):
        if w == v:
            merge.append(u)
        elif w > v:
            merge.append(w - 1)
        else:
            merge.append(w)
    edges = set()
    for a, b in g.edges:
        if (a, b) == (u, v):
            continue
        na, nb = merge[a], merge[b]
        edges.add((min(na, nb), max(na, nb)))
    colors = tuple(g.colors[w] for w in range(g.vertex_count) if w != v)
    return ColoredGraph(g.vertex_count - 1, colors, frozenset(edges)), merge


def _connected(n, adj, members):
    if not members:
        return True
    seen = 1 << members[0]
    stack = [members[0]]
    mask = 0
    for v in members:
        mask |= 1 << v
    while stack:
        w = stack.pop()
        m = adj[w] & mask & ~seen
        while m:
            low = m & -m
            x = low.bit_length() - 1
            seen |= low
            stack.append(x)
            m ^= low
    return all((seen >> v) & 1 for v in members)


def structural_predicates(g, external=frozenset()):
    """Connectivity, 1-vertex irreducibility and bridges.

    external vertices (pendant legs, hairs) are excluded from the core on
    which 1-vertex irreducibility and bridges are evaluated; legs never count
    as edges for bridge purposes.
    """
    n = g.vertex_count
    adj = g.adjacency
    core = [v for v in range(n) if v not in external]
    connected = _connected(n, adj, list(range(n)))
    # 1-VI on the core: removing any single core vertex leaves the rest of
    # the core connected
    one_vi = True
    if len(core) > 2:
        for x in core:
            rest = [v for v in core if v != x]
            if not _connected(n, adj, rest):
                one_vi = False
                break
    bridges = set()
    coreset = set(core)
    for u, v in g.edges:
        if u not in coreset or v not in coreset:
            continue
        adj2 = list(adj)
        adj2[u] &= ~(1 << v)
        adj2[v] &= ~(1 << u)
        if not _connected(n, adj2, core):
            bridges.add((u, v))
    return {
        "connected": connected,
        "one_vertex_irreducible": one_vi,
        "bridgeless": not bridges,
        "bridges": frozenset(bridges),
    }


# -- graph6 encoding ---------------------------------------------------------

def encode_g6(g):
    """graph6 string of g; colors are carried separately (see write_line)."""
    n = g.vertex_count
    if n > 62:
        raise ValueError("graph6 short form limited to 62 vertices")
    bits = []
    for j in range(n):
        for i in range(j):
            bits.append(1 if (i, j) in g.edges else 0)
    chars = [chr(63 + n)]
    for k in range(0, len(bits), 6):
        chunk = bits[k:k + 6]
        chunk += [0] * (6 - len(chunk))
        val = 0
        for b in chunk:
            val = (val << 1) | b
        chars.append(chr(63 + val))
    return "".join(chars)


def decode_g6(text, colors=None):
    """Inverse of encode_g6. colors defaults to all zero."""
    if not text:
        raise ValueError("empty graph6 string")
    n = ord(text[0]) - 63
    if not (0 <= n <= 62):
        raise ValueError("malformed graph6 header")
    need = (n * (n - 1) // 2 + 5) // 6
    if len(text) != 1 + need:
        raise ValueError("graph6 length mismatch")
    bits = []
    for ch in text[1:]:
        val = ord(ch) - 63
        if not (0 <= val < 64):
            raise ValueError("malformed graph6 character")
        for k in range(5, -1, -1):
            bits.append((val >> k) & 1)
    edges = set()
    idx = 0
    for j in range(n):
        for i in range(j):
            if bits[idx]:
                edges.add((i, j))
            idx += 1
    if colors is None:
        colors = (0,) * n
    if len(colors) != n:
        raise ValueError("colors length mismatch")
    return ColoredGraph(n, tuple(colors), frozenset(edges))


def write_line(g):
    """One basis-file line: `<g6>[;<color-csv>]`, colors omitted when all 0."""
    s = encode_g6(g)
    if any(c != 0 for c in g.colors):
        s += ";" + ",".join(str(c) for c in g.colors)
    return s


def read_line(line):
    line = line.strip()
    if ";" in line:
        g6, csv = line.split(";", 1)
        colors = tuple(int(x) for x in csv.split(",")) if csv else ()
        return decode_g6(g6, colors)
    return decode_g6(line)


def enumerate_all_graphs(n, colors=None):
    """Every simple graph on n labeled vertices (tests/oracles only)."""
    pairs = list(combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        edges = frozenset(p for k, p in enumerate(pairs) if (mask >> k) & 1)
        yield ColoredGraph(n, tuple(colors) if colors else (0,) * n, edges)

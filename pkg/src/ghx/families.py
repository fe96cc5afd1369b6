"""Simple-graph complex families: ordinary (Kontsevich), Merkulov-truncated,
hairy, and colored-hairy (numbered hairs).

Admissible graphs are connected, 1-vertex irreducible (evaluated on the
internal core for hairy species), simple, with internal valence >= 3 and
hair valence 1.  The differential contracts internal edges; terms whose
contraction is not simple vanish.

Orientation conventions, pinned by the reference tables:
  n even: ordering of all edges (hair edges included);
  n odd:  ordering of internal vertices and all half-edges;
  m odd (hairy): additionally an ordering of the hairs.
"""

from __future__ import annotations

from functools import lru_cache

from .engine import SliceSpec
from .enumerate_graphs import degree_partitions, enumerate_slice_graphs
from .graphs import canonicalize, automorphism_generators, contract_edge, \
    structural_predicates
from .orientation import (
    EDGE_ORDER,
    VERTEX_HALF_EDGE,
    OrientationConvention,
    extract,
    is_zero_graph,
    map_object,
    reference_word,
    word_parity,
)


def internal_vertices(g):
    return [v for v in range(g.vertex_count) if g.colors[v] == 0]


def hair_vertices(g):
    return [v for v in range(g.vertex_count) if g.colors[v] != 0]


def convention(spec):
    """Orientation convention of a slice.

    The hair-permutation parity enters the orientation exactly when m+n is
    odd; the reference tables pin this down (for n even that reads "an
    ordering of the hairs for m odd", and for n odd the hair vertices inside
    the vertex block already carry the swap signs, so the explicit hair
    ordering enters on the opposite m parity).
    """
    hair_order = (spec.family == "hairy"
                  and (spec.m_parity == "odd") != (spec.n_parity == "odd"))
    if spec.n_parity == "even":
        return OrientationConvention(EDGE_ORDER, hair_order)
    return OrientationConvention(VERTEX_HALF_EDGE, hair_order)


@lru_cache(maxsize=200_000)
def _zero_info(g, kind, hair_order):
    """Whether a canonical graph is zero (odd automorphism) under a
    convention.  The vertex block of a vertex-half-edge orientation contains
    every vertex, hairs included."""
    conv = OrientationConvention(kind, hair_order)
    gens = automorphism_generators(g)
    zero = is_zero_graph(g, conv, gens, internal=None,
                         hairs=tuple(hair_vertices(g)))
    return zero


def graph_is_zero(g, conv):
    return _zero_info(g, conv.kind, conv.hair_order)


@lru_cache(maxsize=200_000)
def _core_admissible(g):
    """Connected and 1-vertex irreducible on the internal core.

    Needed for contraction images too: contracting an edge of a 1-VI graph
    can create a cut vertex, and the complex is the quotient by the
    (contraction-closed) span of non-1-VI graphs, so such terms vanish.
    """
    ext = frozenset(hair_vertices(g))
    preds = structural_predicates(g, external=ext)
    return preds["connected"] and preds["one_vertex_irreducible"]


def degree(spec, vertices=None, edges=None, hairs=None):
    """Homological degree of a slice as (constant, n-coefficient).

    ordinary: n(v-1) - (n-1)e; hairy: nv + m(h-1) - (n-1)e, reported as an
    affine function of n with the m-term folded into the constant via the
    parity convention m = n - 1 shift being irrelevant for tables; forested
    degree is the marked-edge count (handled in ghx.forested).
    """
    v = spec.vertices if vertices is None else vertices
    if spec.family in ("ordinary", "merkulov34", "merkulov56"):
        e = v + spec.loops - 1 if edges is None else edges
        return (e, v - 1 - e)  # degree = const + coeff*n = e... -> n(v-1)-(n-1)e
    if spec.family in ("hairy", "chairy"):
        h = spec.hairs if hairs is None else hairs
        e = spec.loops + v + h - 1 if edges is None else edges
        # nv + m(h-1) - (n-1)e: report the n-part; the m-part is constant
        # per table and carried separately by callers that need it
        return (e, v - e)
    raise ValueError(f"no simple degree formula for {spec.family}")


class SimpleGraphFamily:
    """Shared machinery: enumerate by degree classes, drop zero graphs,
    contract edges with signs."""

    name = None

    def degree_classes(self, spec):
        raise NotImplementedError

    def admissible(self, g, spec):
        raise NotImplementedError

    def op_targets(self, op_name, spec):
        raise NotImplementedError

    def route(self, tgraph, spec, op_name):
        """Which target slot a contracted graph lands in (None = dropped)."""
        return 0

    def generate(self, engine, spec):
        out = []
        conv = convention(spec)
        for class_spec in self.degree_classes(spec):
            for g in enumerate_slice_graphs(class_spec):
                canon, _ = canonicalize(g)
                if not self.admissible(canon, spec):
                    continue
                if graph_is_zero(canon, conv):
                    continue
                out.append(canon)
        return out

    def contractible_edges(self, g):
        ints = set(internal_vertices(g))
        return [e for e in g.sorted_edges if e[0] in ints and e[1] in ints]

    def op_terms(self, engine, op_name, spec, g):
        """Contraction differential: one signed term per contractible edge."""
        conv = convention(spec)
        hs = hair_vertices(g)
        src_word = reference_word(g, conv, internal=None, hairs=hs)
        for e in self.contractible_edges(g):
            res = contract_edge(g, e)
            if res is None:
                continue  # contraction not simple: term is zero
            image, merge = res
            canon, rel = canonicalize(image)
            slot = self.route(canon, spec, op_name)
            if slot is None:
                continue
            if not self.admissible(canon, spec):
                continue  # quotient by the inadmissible subcomplex
            if graph_is_zero(canon, conv):
                continue
            vmap = [rel(merge[w]) for w in range(g.vertex_count)]
            sign = contraction_sign(g, e, canon, vmap, conv, hs, src_word)
            yield slot, canon, sign


def contraction_sign(g, e, canon, vmap, conv, hairs, src_word=None):
    """Sign of the contraction term g/e relative to reference orientations.

    vmap sends old vertices to canonical target labels (both endpoints of e
    to the merged vertex).
    """
    if src_word is None:
        src_word = reference_word(g, conv, internal=None, hairs=hairs)
    a, b = min(e), max(e)
    word = list(src_word)
    sign = 1
    if conv.kind == EDGE_ORDER:
        sign = extract(word, ("e", a, b), sign)
        prefix = []
    else:
        # v_e wedge d/dv1 d/dv2 d/dh1 d/dh2, rightmost first
        sign = extract(word, ("h", b, a), sign)
        sign = extract(word, ("h", a, b), sign)
        sign = extract(word, ("v", b), sign)
        sign = extract(word, ("v", a), sign)
        prefix = [("v", vmap[a])]
    image_word = prefix + [map_object(o, vmap) for o in word]
    tgt_word = reference_word(canon, conv, internal=None,
                              hairs=hair_vertices(canon))
    return sign * word_parity(image_word, tgt_word)


class OrdinaryFamily(SimpleGraphFamily):
    """Connected 1-vertex-irreducible simple graphs, valence >= 3, with the
    edge-contraction differential."""

    name = "ordinary"
    min_degree = 3
    max_degree = None

    def degree_classes(self, spec):
        v, g = spec.vertices, spec.loops
        if v <= 0:
            return []
        e = v + g - 1
        hi = min(v - 1, self.max_degree or v - 1)
        out = []
        for part in degree_partitions(2 * e, v, self.min_degree, hi):
            if not self.degrees_ok(part):
                continue
            counts = {}
            for d in part:
                counts[d] = counts.get(d, 0) + 1
            out.append([(0, d, c) for d, c in sorted(counts.items())])
        return out

    def degrees_ok(self, part):
        return True

    def admissible(self, g, spec):
        return _core_admissible(g)

    def op_targets(self, op_name, spec):
        if op_name != "d":
            raise ValueError(f"ordinary has no operator {op_name!r}")
        return [spec.with_vertices(spec.vertices - 1)]


def ordinary_admissible(g):
    """Connected, 1-vertex irreducible, all valences >= 3 (simple is
    structural)."""
    if g.vertex_count == 0:
        return False
    if any(d < 3 for d in g.degrees):
        return False
    preds = structural_predicates(g)
    return preds["connected"] and preds["one_vertex_irreducible"]


class Merkulov34Family(OrdinaryFamily):
    """Valences restricted to {3,4}; d splits into the part staying 3/4-valent
    (d_1) and the part creating one 5/6-valent vertex (d_2)."""

    name = "merkulov34"
    max_degree = 4

    def degrees_ok(self, part):
        return all(d in (3, 4) for d in part)

    def op_targets(self, op_name, spec):
        t34 = SliceSpec("merkulov34", spec.n_parity, spec.loops,
                        spec.vertices - 1)
        t56 = SliceSpec("merkulov56", spec.n_parity, spec.loops,
                        spec.vertices - 1)
        if op_name == "d_1":
            return [t34]
        if op_name == "d_2":
            return [t56]
        if op_name == "d_12":
            return [t34, t56]
        raise ValueError(f"merkulov34 has no operator {op_name!r}")

    def route(self, tgraph, spec, op_name):
        big = max(tgraph.degrees)
        slot34 = 0 if op_name in ("d_1", "d_12") else None
        slot56 = {"d_2": 0, "d_12": 1}.get(op_name)
        if big <= 4:
            return slot34
        # contraction raises one valence at a time: exactly one 5/6 vertex
        assert big in (5, 6) and sum(1 for d in tgraph.degrees if d >= 5) == 1
        return slot56


class Merkulov56Family(OrdinaryFamily):
    """Exactly one vertex of valence 5 or 6, the rest 3/4-valent."""

    name = "merkulov56"
    max_degree = 6

    def degrees_ok(self, part):
        big = [d for d in part if d >= 5]
        return len(big) == 1 and all(d in (3, 4, 5, 6) for d in part)

    def op_targets(self, op_name, spec):
        raise ValueError("merkulov56 carries no operators in this pipeline")


def hair_multiplicity_ok(g, loops):
    """In positive loop order, at most one hair may attach to a vertex.

    Graphs with a repeated attachment span a subcomplex (contraction only
    accumulates hairs) and the engine computes the quotient by it; at loop
    order zero the full complex is kept.
    """
    if loops == 0:
        return True
    counts = {}
    for h in hair_vertices(g):
        (u,) = [w for w in g.neighbors(h)]
        counts[u] = counts.get(u, 0) + 1
        if counts[u] > 1:
            return False
    return True


class HairyFamily(SimpleGraphFamily):
    """Hairs are univalent color-1 vertices, indistinguishable; only
    internal-internal edges are contracted, so the hair count is preserved."""

    name = "hairy"

    def degree_classes(self, spec):
        v, g, h = spec.vertices, spec.loops, spec.hairs
        if v <= 0:
            return []
        e = g + v + h - 1
        out = []
        for part in degree_partitions(2 * e - h, v, 3, v - 1 + h):
            counts = {}
            for d in part:
                counts[d] = counts.get(d, 0) + 1
            classes = [(0, d, c) for d, c in sorted(counts.items())]
            classes.extend(self.hair_classes(spec))
            out.append(classes)
        return out

    def hair_classes(self, spec):
        return [(1, 1, spec.hairs)]

    def admissible(self, g, spec):
        return _core_admissible(g) and hair_multiplicity_ok(g, spec.loops)

    def op_targets(self, op_name, spec):
        if op_name == "d":
            return [spec.with_vertices(spec.vertices - 1)]
        if op_name == "hair_removal":
            if spec.hairs != 1:
                raise ValueError("hair removal needs exactly one hair")
            return HairRemovalOperator.targets(spec)
        raise ValueError(f"hairy has no operator {op_name!r}")

    def op_terms(self, engine, op_name, spec, g):
        if op_name == "hair_removal":
            yield from HairRemovalOperator.terms(spec, g)
        else:
            yield from super().op_terms(engine, op_name, spec, g)


class ColoredHairyFamily(HairyFamily):
    """Numbered hairs: hair i carries color i, isomorphisms preserve it."""

    name = "chairy"

    def hair_classes(self, spec):
        return [(i, 1, 1) for i in range(1, spec.hairs + 1)]

    def op_targets(self, op_name, spec):
        if op_name != "d":
            raise ValueError(f"chairy has no operator {op_name!r}")
        return [spec.with_vertices(spec.vertices - 1)]


def hairy_vanishing_range(g, h):
    """Vertex window outside which hairy homology provably vanishes."""
    if h < 1:
        raise ValueError("hairy complexes need at least one hair")
    return (g + h - 2, 2 * g + h - 2)


def ordinary_vertex_range(g):
    """Feasible vertex counts at loop order g: the trivalence bound gives
    v <= 2g-2, simplicity needs v(v-1)/2 >= v+g-1."""
    lo = next((v for v in range(1, 2 * g - 1)
               if v * (v - 1) // 2 >= v + g - 1), 2 * g - 1)
    return range(max(lo, 3), 2 * g - 1)


class HairRemovalOperator:
    """Chain map from the 1-hair hairy complex to the ordinary complex by
    deleting the hair; the term vanishes if the attachment vertex would drop
    below valence 3."""

    @staticmethod
    def targets(spec):
        return [SliceSpec("ordinary", spec.n_parity, spec.loops, spec.vertices)]

    @staticmethod
    def terms(spec, g):
        conv = convention(spec)
        hv = hair_vertices(g)[0]
        (u,) = g.neighbors(hv)
        if g.degree(u) - 1 < 3:
            return
        edges = [e for e in g.sorted_edges if hv not in e]
        shift = [w - 1 if w > hv else w for w in range(g.vertex_count)]
        image = type(g)(g.vertex_count - 1,
                        tuple(g.colors[w] for w in range(g.vertex_count)
                              if w != hv),
                        frozenset((min(shift[a], shift[b]),
                                   max(shift[a], shift[b]))
                                  for a, b in edges))
        canon, rel = canonicalize(image)
        if graph_is_zero(canon, OrientationConvention(conv.kind, False)):
            return
        vmap = {w: rel(shift[w]) for w in range(g.vertex_count) if w != hv}
        word = list(reference_word(g, conv, internal=None, hairs=[hv]))
        sign = 1
        a, b = min(u, hv), max(u, hv)
        if conv.kind == EDGE_ORDER:
            sign = extract(word, ("e", a, b), sign)
        else:
            sign = extract(word, ("h", hv, u), sign)
            sign = extract(word, ("h", u, hv), sign)
            sign = extract(word, ("v", hv), sign)
        if conv.hair_order:
            sign = extract(word, ("hair", hv), sign)
        image_word = [map_object(o, vmap) for o in word]
        tgt_word = reference_word(canon, OrientationConvention(conv.kind, False),
                                  internal=None, hairs=())
        yield 0, canon, sign * word_parity(image_word, tgt_word)


def register_all(engine):
    from .forested import ForestedFamily

    for fam in (OrdinaryFamily(), Merkulov34Family(), Merkulov56Family(),
                HairyFamily(), ColoredHairyFamily(), ForestedFamily()):
        engine.register(fam)
    return engine


def hairy_differential_spec(spec):
    """Descriptor of the hairy contraction differential: only edges between
    internal vertices are contracted, so the hair count is preserved."""
    return {
        "op": "d",
        "contracts": "internal-internal edges",
        "preserves": ("hairs", "loops"),
        "target": spec.with_vertices(spec.vertices - 1),
    }


def hair_removal_matrix(engine, n_parity, g, v):
    """Matrix of the hair-removal chain map on the 1-hair slice (g, v)."""
    spec = SliceSpec("hairy", n_parity, g, v, hairs=1, m_parity="even")
    return engine.operator("hair_removal", spec)

"""Orientation conventions and signs.

An orientation is an ordering of a set of combinatorial objects attached to a
graph (edges, or vertices plus half-edges, ...), defined up to even
permutation.  Bases fix one reference ordering per canonical graph; every
sign in the engine is the parity of a permutation relative to reference
orderings, so signs are reproducible across runs.

Objects are plain tuples:
    ("v", i)        vertex i
    ("e", u, v)     edge {u,v}, u < v
    ("h", u, v)     half-edge of {u,v} at u (a flag)
    ("hair", i)     hair vertex i, used by the hairy m-odd supplement
"""

from __future__ import annotations

from dataclasses import dataclass

from .graphs import perm_parity

EDGE_ORDER = "edge_order"                # n even
VERTEX_HALF_EDGE = "vertex_half_edge"    # n odd
FORESTED_EVEN = "forested_even"          # n = 0: marked edges
FORESTED_ODD = "forested_odd"            # n = 1: internal vertices,
                                         # half-edges, unmarked edges

KINDS = (EDGE_ORDER, VERTEX_HALF_EDGE, FORESTED_EVEN, FORESTED_ODD)


@dataclass(frozen=True)
class OrientationConvention:
    kind: str
    hair_order: bool = False  # multiply in the hair-permutation parity

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown orientation kind {self.kind!r}")


def edge_objects(g):
    return [("e", u, v) for u, v in g.sorted_edges]


def vertex_objects(g, vertices=None):
    if vertices is None:
        vertices = range(g.vertex_count)
    return [("v", i) for i in sorted(vertices)]


def half_edge_objects(g):
    flags = []
    for u, v in g.edges:
        flags.append(("h", u, v))
        flags.append(("h", v, u))
    flags.sort()
    return flags


def hair_objects(hairs):
    return [("hair", i) for i in sorted(hairs)]


def reference_word(g, conv, internal=None, hairs=()):
    """The reference ordering of orientation objects for graph g.

    internal: vertices counted in the vertex block (n odd); defaults to all.
    hairs: hair vertices, used only when conv.hair_order is set.
    """
    if conv.kind == EDGE_ORDER:
        word = edge_objects(g)
    elif conv.kind == VERTEX_HALF_EDGE:
        word = vertex_objects(g, internal) + half_edge_objects(g)
    else:
        raise ValueError(
            f"{conv.kind} orientations live on forested graphs; "
            "use ghx.forested")
    if conv.hair_order:
        word = word + hair_objects(hairs)
    return word


def map_object(obj, vmap):
    """Push an orientation object through a vertex map."""
    tag = obj[0]
    if tag == "v":
        return ("v", vmap[obj[1]])
    if tag == "e":
        a, b = vmap[obj[1]], vmap[obj[2]]
        return ("e", min(a, b), max(a, b))
    if tag == "h":
        return ("h", vmap[obj[1]], vmap[obj[2]])
    if tag == "hair":
        return ("hair", vmap[obj[1]])
    raise ValueError(f"unknown orientation object {obj!r}")


def word_parity(image_word, target_word):
    """Parity of the permutation placing image_word onto target_word."""
    pos = {obj: i for i, obj in enumerate(target_word)}
    if len(pos) != len(target_word):
        raise ValueError("target word has repeats")
    try:
        images = [pos[o] for o in image_word]
    except KeyError as exc:
        raise ValueError(f"image object {exc} missing from target word")
    if len(image_word) != len(target_word):
        raise ValueError("word length mismatch")
    return perm_parity(images)


def extract(word, obj, sign):
    """Remove obj from word; returns the derivative sign times sign."""
    i = word.index(obj)
    word.pop(i)
    return sign if i % 2 == 0 else -sign


def orientation_sign(g, sigma, conv, internal=None, hairs=(), target=None):
    """Sign by which the isomorphism sigma acts on the orientation.

    sigma maps g onto target (defaults to g itself, i.e. an automorphism).
    Raises if sigma is not an isomorphism of the stated structure.
    """
    if target is None:
        target = g
    if g.relabel(sigma) != target:
        raise ValueError("sigma is not an isomorphism onto the target")
    vmap = sigma.images
    src = reference_word(g, conv, internal=internal, hairs=hairs)
    tgt_internal = None if internal is None else [vmap[i] for i in internal]
    tgt_hairs = [vmap[i] for i in hairs]
    tgt = reference_word(target, conv, internal=tgt_internal, hairs=tgt_hairs)
    return word_parity([map_object(o, vmap) for o in src], tgt)


def is_zero_graph(g, conv, generators, internal=None, hairs=()):
    """True iff some automorphism reverses orientation (graph is 0)."""
    for sg in generators:
        if orientation_sign(g, sg, conv, internal=internal, hairs=hairs) == -1:
            return True
    return False

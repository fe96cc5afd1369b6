import random
from itertools import combinations, permutations

import pytest

from ghx.graphs import (
    ColoredGraph,
    Permutation,
    automorphism_generators,
    brute_force_automorphisms,
    canonicalize,
    contract_edge,
    decode_g6,
    encode_g6,
    enumerate_all_graphs,
    read_line,
    structural_predicates,
    write_line,
)


def G(n, edges, colors=None):
    return ColoredGraph.build(n, colors or [0] * n, edges)


K4 = G(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
TRIANGLE = G(3, [(0, 1), (1, 2), (0, 2)])
PATH3 = G(3, [(0, 1), (1, 2)])


def random_relabel(g, rng):
    images = list(range(g.vertex_count))
    rng.shuffle(images)
    return g.relabel(Permutation(tuple(images)))


def test_triangle_relabelings_identical_canonical():
    canon, _ = canonicalize(TRIANGLE)
    for images in permutations(range(3)):
        h = TRIANGLE.relabel(Permutation(images))
        assert canonicalize(h)[0] == canon


def test_k4_canonical_under_any_labeling():
    canon, _ = canonicalize(K4)
    rng = random.Random(7)
    for _ in range(10):
        assert canonicalize(random_relabel(K4, rng))[0] == canon


def test_colored_path_canonical_and_relabel_consistent():
    g = G(3, [(0, 1), (1, 2)], colors=[1, 2, 1])
    canon, _ = canonicalize(g)
    for images in permutations(range(3)):
        h = g.relabel(Permutation(images))
        canon2, rel = canonicalize(h)
        assert canon2 == canon
        assert h.relabel(rel) == canon


def group_closure(gens, n):
    elems = {tuple(range(n))}
    frontier = [tuple(range(n))]
    gen_imgs = [tuple(p.images) for p in gens]
    while frontier:
        cur = frontier.pop()
        for gi in gen_imgs:
            nxt = tuple(gi[cur[k]] for k in range(n))
            if nxt not in elems:
                elems.add(nxt)
                frontier.append(nxt)
    return elems


def test_k4_automorphism_group_order_24():
    gens = automorphism_generators(K4)
    assert len(group_closure(gens, 4)) == 24


def test_path_symmetry_group_order():
    assert len(group_closure(automorphism_generators(PATH3), 3)) == 2
    rigid = G(3, [(0, 1), (1, 2)], colors=[1, 2, 3])
    assert len(group_closure(automorphism_generators(rigid), 3)) == 1


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_automorphisms_match_brute_force_small(n):
    rng = random.Random(n)
    pairs = list(combinations(range(n), 2))
    for _ in range(20):
        edges = [p for p in pairs if rng.random() < 0.5]
        colors = [rng.randrange(2) for _ in range(n)]
        g = G(n, edges, colors)
        gens = automorphism_generators(g)
        assert group_closure(gens, n) == {
            tuple(p.images) for p in brute_force_automorphisms(g)
        }


def test_canonical_soundness_exhaustive_small():
    # every 4-vertex graph: all relabelings agree
    for g in enumerate_all_graphs(4):
        canon, _ = canonicalize(g)
        for images in permutations(range(4)):
            assert canonicalize(g.relabel(Permutation(images)))[0] == canon


def test_canonical_soundness_randomized_larger():
    rng = random.Random(123)
    for n in (8, 10, 12):
        pairs = list(combinations(range(n), 2))
        for _ in range(10):
            edges = [p for p in pairs if rng.random() < 0.3]
            colors = [rng.randrange(3) for _ in range(n)]
            g = G(n, edges, colors)
            canon, _ = canonicalize(g)
            for _ in range(5):
                assert canonicalize(random_relabel(g, rng))[0] == canon


def test_permutation_parity():
    assert Permutation((0, 1, 2)).parity == 1
    assert Permutation((1, 0, 2)).parity == -1
    assert Permutation((1, 2, 0)).parity == 1


def test_contract_triangle_gives_none():
    for e in TRIANGLE.edges:
        assert contract_edge(TRIANGLE, e) is None


def test_contract_k4_gives_none():
    for e in K4.edges:
        assert contract_edge(K4, e) is None


def test_contract_square_gives_triangle():
    sq = G(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
    got, merge = contract_edge(sq, (0, 1))
    assert got.vertex_count == 3
    assert len(got.edges) == 3
    assert merge[0] == merge[1] == 0
    canon, _ = canonicalize(got)
    assert canon == canonicalize(TRIANGLE)[0]


def test_contract_preserves_loop_order():
    rng = random.Random(5)
    for _ in range(50):
        n = rng.randrange(4, 9)
        pairs = list(combinations(range(n), 2))
        edges = [p for p in pairs if rng.random() < 0.4]
        g = G(n, edges)
        for e in list(g.edges)[:4]:
            res = contract_edge(g, e)
            if res is None:
                continue
            h, _ = res
            assert len(h.edges) - h.vertex_count == len(g.edges) - g.vertex_count


def test_structural_predicates_k4():
    p = structural_predicates(K4)
    assert p["connected"] and p["one_vertex_irreducible"] and p["bridgeless"]
    assert p["bridges"] == frozenset()


def test_two_triangles_sharing_vertex_not_1vi():
    g = G(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])
    p = structural_predicates(g)
    assert p["connected"]
    assert not p["one_vertex_irreducible"]


def test_two_triangles_joined_by_edge_has_bridge():
    g = G(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])
    p = structural_predicates(g)
    # brute-force check: removing exactly the joining edge disconnects
    assert p["bridges"] == frozenset({(2, 3)})
    assert not p["bridgeless"]


def test_g6_empty_graph():
    empty = G(0, [])
    assert encode_g6(empty) == "?"
    assert decode_g6("?") == empty


def test_g6_triangle_two_chars():
    s = encode_g6(TRIANGLE)
    assert len(s) == 2
    assert decode_g6(s) == TRIANGLE


def test_g6_roundtrip_random():
    rng = random.Random(99)
    for _ in range(100):
        n = rng.randrange(0, 11)
        pairs = list(combinations(range(n), 2))
        edges = [p for p in pairs if rng.random() < 0.5]
        colors = [rng.randrange(4) for _ in range(n)]
        g = G(n, edges, colors)
        assert read_line(write_line(g)) == g


def test_g6_k4_roundtrip_canonical():
    canon, _ = canonicalize(K4)
    assert read_line(write_line(canon)) == canon


def test_g6_malformed():
    with pytest.raises(ValueError):
        decode_g6("")
    with pytest.raises(ValueError):
        decode_g6("B")  # missing adjacency chars

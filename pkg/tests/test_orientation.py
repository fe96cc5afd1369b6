import pytest

from ghx.graphs import ColoredGraph, Permutation, automorphism_generators
from ghx.orientation import (
    EDGE_ORDER,
    VERTEX_HALF_EDGE,
    OrientationConvention,
    is_zero_graph,
    orientation_sign,
    reference_word,
    word_parity,
)

K4 = ColoredGraph.build(4, [0] * 4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3),
                                     (2, 3)])
EDGE = OrientationConvention(EDGE_ORDER)
VHE = OrientationConvention(VERTEX_HALF_EDGE)


def test_identity_sign_is_plus_one():
    ident = Permutation.identity(4)
    assert orientation_sign(K4, ident, EDGE) == 1
    assert orientation_sign(K4, ident, VHE) == 1


def test_k4_three_cycle_edge_sign():
    # a 3-cycle on vertices 0,1,2: induced edge permutation has two 3-cycles
    # ({01,12,02} among themselves) and one 3-cycle on {03,13,23}: even
    sigma = Permutation((1, 2, 0, 3))
    assert orientation_sign(K4, sigma, EDGE) == 1


def test_k4_transposition_signs():
    sigma = Permutation((1, 0, 2, 3))
    # edges: {02}<->{12}, {03}<->{13}: two transpositions, even
    assert orientation_sign(K4, sigma, EDGE) == 1
    # vertices: one transposition; half-edges: five transpositions: product +
    assert orientation_sign(K4, sigma, VHE) == 1


def test_k4_survives_both_parities():
    gens = automorphism_generators(K4)
    assert not is_zero_graph(K4, EDGE, gens)
    assert not is_zero_graph(K4, VHE, gens)


def test_parallel_strand_swap_is_odd():
    # species with a doubled unmarked edge: swapping the two parallel
    # strands transposes two unmarked edges, an odd symmetry for n = 1
    # (this is what kills graphs with multiple unmarked edges there)
    from ghx.forested import (ForestedGraph, encode_forested,
                              forested_is_zero)
    from ghx.graphs import canonicalize

    theta = ForestedGraph(2, ((0, 1), (0, 1), (0, 1)), frozenset({0}), ())
    enc, _ = encode_forested(theta)
    canon, _ = canonicalize(enc)
    assert forested_is_zero(canon, 1)       # odd strand swap
    assert not forested_is_zero(canon, 0)   # marked-edge order unaffected


def test_non_isomorphism_rejected():
    path = ColoredGraph.build(3, [0] * 3, [(0, 1), (1, 2)])
    not_auto = Permutation((1, 0, 2))
    with pytest.raises(ValueError):
        orientation_sign(path, not_auto, EDGE)


def test_sign_multiplicative_over_composition():
    gens = automorphism_generators(K4)
    for a in gens:
        for b in gens:
            for conv in (EDGE, VHE):
                sa = orientation_sign(K4, a, conv)
                sb = orientation_sign(K4, b, conv)
                sc = orientation_sign(K4, a.compose(b), conv)
                assert sc == sa * sb


def test_word_parity_basics():
    tgt = [("a",), ("b",), ("c",)]
    assert word_parity([("a",), ("b",), ("c",)], tgt) == 1
    assert word_parity([("b",), ("a",), ("c",)], tgt) == -1


def test_reference_word_blocks():
    w = reference_word(K4, VHE)
    assert w[:4] == [("v", 0), ("v", 1), ("v", 2), ("v", 3)]
    assert len(w) == 4 + 12

import pytest

from ghx.engine import SliceSpec
from ghx.families import (
    degree,
    hair_multiplicity_ok,
    hairy_differential_spec,
    hairy_vanishing_range,
    ordinary_admissible,
    ordinary_vertex_range,
)
from ghx.graphs import ColoredGraph


def G(n, edges, colors=None):
    return ColoredGraph.build(n, colors or [0] * n, edges)


K4 = G(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])


def test_ordinary_admissible_examples():
    assert ordinary_admissible(K4)
    two_tri = G(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])
    assert not ordinary_admissible(two_tri)  # cut vertex
    square = G(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
    assert not ordinary_admissible(square)  # valence 2


def test_degree_formulas():
    # ordinary: v=4, e=6 -> 6 - 3n, reported as (const, n-coefficient)
    spec = SliceSpec("ordinary", "odd", 3, 4)
    assert degree(spec) == (6, -3)
    # hairy: v=4, e=6, h=1 -> 6 - 2n (the m-term is constant per table)
    hspec = SliceSpec("hairy", "odd", 2, 4, hairs=1, m_parity="even")
    assert degree(hspec) == (6, -2)


def test_vanishing_range_values():
    assert hairy_vanishing_range(3, 1) == (2, 5)
    assert hairy_vanishing_range(1, 1) == (0, 1)
    assert hairy_vanishing_range(5, 2) == (5, 10)
    with pytest.raises(ValueError):
        hairy_vanishing_range(3, 0)


def test_ordinary_vertex_range():
    assert list(ordinary_vertex_range(3)) == [4]
    assert list(ordinary_vertex_range(6)) == [5, 6, 7, 8, 9, 10]
    assert list(ordinary_vertex_range(2)) == []


def test_hair_multiplicity_rule():
    # triangle with two hairs at one corner: excluded in positive loop order
    g = G(6, [(0, 1), (1, 2), (0, 2), (0, 3), (0, 4), (1, 5)],
          colors=[0, 0, 0, 1, 1, 1])
    assert not hair_multiplicity_ok(g, loops=1)
    assert hair_multiplicity_ok(g, loops=0)
    one_each = G(6, [(0, 1), (1, 2), (0, 2), (0, 3), (1, 4), (2, 5)],
                 colors=[0, 0, 0, 1, 1, 1])
    assert hair_multiplicity_ok(one_each, loops=1)


def test_ordinary_slice_dimensions(engine):
    # K4 spans (3,4) in both parities; (3,3) is empty
    for parity in ("odd", "even"):
        assert engine.dim(SliceSpec("ordinary", parity, 3, 4)) == 1
        assert engine.dim(SliceSpec("ordinary", parity, 3, 3)) == 0


def test_merkulov_window_routing(engine):
    # d_12 on V34 splits image by maximal valence; stacked shape checks
    spec = SliceSpec("merkulov34", "odd", 4, 6)
    h = engine.operator("d_12", spec)
    t34, t56 = h.targets
    assert t34.family == "merkulov34" and t56.family == "merkulov56"
    assert h.matrix.cols == engine.dim(spec)
    assert h.matrix.rows == engine.dim(t34) + engine.dim(t56)


def test_hairy_differential_descriptor():
    spec = SliceSpec("hairy", "odd", 3, 4, hairs=1, m_parity="even")
    d = hairy_differential_spec(spec)
    assert d["target"].vertices == 3
    assert "hairs" in d["preserves"]


def test_tripod_alive_in_colored_dead_in_plain(engine):
    # 3 numbered hairs on one vertex: admissible colored slice of dim 1
    assert engine.dim(SliceSpec("chairy", "even", 0, 1, hairs=3)) == 1
    assert engine.dim(SliceSpec("chairy", "odd", 0, 1, hairs=3)) == 1
    # with indistinguishable hairs one parity kills it per n
    dead = engine.dim(SliceSpec("hairy", "even", 0, 1, hairs=3,
                                m_parity="even"))
    alive = engine.dim(SliceSpec("hairy", "even", 0, 1, hairs=3,
                                 m_parity="odd"))
    assert (dead, alive) == (0, 1)


def test_hair_removal_k4(engine):
    spec = SliceSpec("hairy", "odd", 3, 4, hairs=1, m_parity="even")
    h = engine.operator("hair_removal", spec)
    assert h.matrix.rows == 1 and h.matrix.cols == 1
    assert abs(h.matrix.entries[0][2]) == 1


def test_loop_order_preserved_by_operators(engine):
    spec = SliceSpec("hairy", "odd", 4, 6, hairs=1, m_parity="even")
    for t in engine.family("hairy").op_targets("d", spec):
        assert t.loops == spec.loops
        assert t.hairs == spec.hairs

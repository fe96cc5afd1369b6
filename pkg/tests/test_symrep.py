from math import factorial

import pytest

from ghx.engine import Engine, SliceSpec, Store
from ghx.families import register_all
from ghx.linalg import SparseIntMatrix, is_zero, multiply_rational
from ghx.symrep import (
    Partition,
    character,
    conjugacy_classes,
    cycle_type_of,
    isotypic_projector,
    partitions,
    permutation_action,
)


def test_partition_counts():
    assert [len(partitions(r)) for r in range(0, 9)] == \
        [1, 1, 2, 3, 5, 7, 11, 15, 22]


def test_partitions_r3():
    assert [p.parts for p in partitions(3)] == [(3,), (2, 1), (1, 1, 1)]


def test_trivial_and_sign_characters():
    for r in range(1, 6):
        for rho, _ in conjugacy_classes(r):
            assert character(Partition((r,)), rho) == 1
            sgn = (-1) ** (r - len(rho.parts))
            assert character(Partition((1,) * r), rho) == sgn


def test_standard_rep_s3():
    lam = Partition((2, 1))
    assert character(lam, Partition((1, 1, 1))) == 2
    assert character(lam, Partition((3,))) == -1
    assert character(lam, Partition((2, 1))) == 0


def test_s4_character_table_row():
    lam = Partition((2, 2))
    values = {
        (1, 1, 1, 1): 2, (2, 1, 1): 0, (2, 2): 2, (3, 1): -1, (4,): 0,
    }
    for rho, want in values.items():
        assert character(lam, Partition(rho)) == want


def test_dimension_matches_character_at_identity():
    for r in range(1, 7):
        ident = Partition((1,) * r)
        for lam in partitions(r):
            assert lam.dimension() == character(lam, ident)


def test_character_orthogonality_up_to_r6():
    for r in range(1, 7):
        classes = conjugacy_classes(r)
        assert sum(size for _, size in classes) == factorial(r)
        ps = partitions(r)
        for a in ps:
            for b in ps:
                s = sum(size * character(a, rho) * character(b, rho)
                        for rho, size in classes)
                assert s == (factorial(r) if a == b else 0)


def test_cycle_type():
    assert cycle_type_of((1, 0, 2)).parts == (2, 1)
    assert cycle_type_of((1, 2, 0)).parts == (3,)


@pytest.fixture(scope="module")
def engine(tmp_path_factory):
    store = Store(str(tmp_path_factory.mktemp("ghxdata")))
    return register_all(Engine(store))


def chg(parity, loops, vertices, hairs):
    return SliceSpec("chairy", parity, loops, vertices, hairs=hairs)


def test_action_identity_and_group_law(engine):
    spec = chg("even", 1, 4, 4)
    n = engine.dim(spec)
    assert n > 0
    ident = permutation_action(engine, spec, (0, 1, 2, 3))
    assert ident == SparseIntMatrix.build(n, n, [(i, i, 1) for i in range(n)])
    sigma = (1, 2, 0, 3)
    tau = (0, 2, 1, 3)
    comp = tuple(sigma[tau[i]] for i in range(4))
    lhs = multiply_rational(permutation_action(engine, spec, sigma),
                            permutation_action(engine, spec, tau))
    assert lhs == permutation_action(engine, spec, comp)
    inv = permutation_action(engine, spec, (2, 0, 1, 3))
    prod = multiply_rational(permutation_action(engine, spec, sigma), inv)
    assert prod == ident


def test_projector_idempotent_orthogonal_complete(engine):
    for spec in (chg("even", 2, 4, 2), chg("even", 1, 3, 3),
                 chg("odd", 1, 4, 4)):
        r = spec.hairs
        n = engine.dim(spec)
        if n == 0:
            continue
        projs = [isotypic_projector(engine, lam, spec)
                 for lam in partitions(r)]
        rfact = factorial(r)
        total = {}
        for p in projs:
            # idempotence: (P/r!)^2 = P/r!  <=>  P.P = r! P
            sq = multiply_rational(p.matrix, p.matrix)
            want = SparseIntMatrix.build(
                n, n, [(a, b, rfact * v) for a, b, v in p.matrix.entries])
            assert sq == want
            for (a, b, v) in p.matrix.entries:
                total[(a, b)] = total.get((a, b), 0) + v
        for q in projs[1:]:
            assert is_zero(multiply_rational(projs[0].matrix, q.matrix))
        ident = {(i, i): rfact for i in range(n)}
        assert {k: v for k, v in total.items() if v} == ident


def test_projector_commutes_with_differential(engine):
    spec = chg("even", 2, 4, 2)
    down = spec.with_vertices(3)
    if engine.dim(down) == 0 or engine.dim(spec) == 0:
        pytest.skip("empty neighbour slice")
    d = engine.operator("d", spec).matrix
    for lam in partitions(2):
        p_up = isotypic_projector(engine, lam, spec).matrix
        p_dn = isotypic_projector(engine, lam, down).matrix
        assert multiply_rational(d, p_up) == multiply_rational(p_dn, d)

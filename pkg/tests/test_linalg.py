import random

import pytest

from ghx.linalg import (
    DEFAULT_PRIME,
    CapacityError,
    SparseIntMatrix,
    in_column_span_mod_p,
    is_zero,
    multiply_mod_p,
    nullspace_mod_p,
    rank_exact_dense_oracle,
    rank_mod_p,
    rank_rational,
    sms_read,
    sms_write,
)


def from_dense(rows):
    ents = []
    for r, row in enumerate(rows):
        for c, v in enumerate(row):
            if v:
                ents.append((r, c, v))
    return SparseIntMatrix.build(len(rows), len(rows[0]) if rows else 0, ents)


def random_matrix(rng, rows, cols, density=0.4, lo=-5, hi=5):
    ents = []
    for r in range(rows):
        for c in range(cols):
            if rng.random() < density:
                v = rng.randint(lo, hi)
                if v:
                    ents.append((r, c, v))
    return SparseIntMatrix.build(rows, cols, ents)


def test_zero_matrix_rank():
    assert rank_mod_p(SparseIntMatrix.zero(5, 7), DEFAULT_PRIME).rank == 0


def test_identity_rank():
    ident = from_dense([[1 if i == j else 0 for j in range(6)] for i in range(6)])
    assert rank_mod_p(ident, DEFAULT_PRIME).rank == 6


def test_prime_divides_entry_lower_bound_semantics():
    m = from_dense([[DEFAULT_PRIME, 0], [0, 1]])
    assert rank_mod_p(m, DEFAULT_PRIME).rank == 1
    assert rank_rational(m).rank == 2


def test_rank_rational_proportional_rows():
    assert rank_rational(from_dense([[2, 4], [1, 2]])).rank == 1


def test_rank_requires_prime():
    with pytest.raises(ValueError):
        rank_mod_p(SparseIntMatrix.zero(1, 1), 10)


def test_random_rank_cross_field_consistency():
    rng = random.Random(42)
    for _ in range(25):
        m = random_matrix(rng, rng.randrange(1, 12), rng.randrange(1, 12))
        rq = rank_rational(m).rank
        assert rq == rank_exact_dense_oracle(m)
        for p in (2, 101, DEFAULT_PRIME):
            assert rank_mod_p(m, p).rank <= rq
        assert rank_mod_p(m, DEFAULT_PRIME).rank == rq  # small entries: no loss


def test_modp_rank_leq_rational_200_random_at_3_primes():
    rng = random.Random(7)
    for _ in range(200):
        m = random_matrix(rng, rng.randrange(1, 9), rng.randrange(1, 9),
                          density=0.5, lo=-60, hi=60)
        rq = rank_rational(m).rank
        for p in (2, 97, DEFAULT_PRIME):
            assert rank_mod_p(m, p).rank <= rq


def test_rank_transpose_and_permutation_invariance():
    rng = random.Random(3)
    for _ in range(20):
        m = random_matrix(rng, 8, 6)
        r = rank_mod_p(m).rank
        assert rank_mod_p(m.transpose()).rank == r
        rowp = list(range(m.rows))
        colp = list(range(m.cols))
        rng.shuffle(rowp)
        rng.shuffle(colp)
        pm = SparseIntMatrix.build(
            m.rows, m.cols,
            [(rowp[a], colp[b], v) for a, b, v in m.entries])
        assert rank_mod_p(pm).rank == r


def test_multiply_identity():
    rng = random.Random(1)
    a = random_matrix(rng, 5, 4)
    ident = from_dense([[1 if i == j else 0 for j in range(4)] for i in range(4)])
    prod = multiply_mod_p(a, ident, 7)
    expect = SparseIntMatrix.build(
        5, 4, [(r, c, v % 7) for r, c, v in a.entries if v % 7])
    assert prod == expect


def test_multiply_hand_example_mod_5():
    a = from_dense([[1, 1], [0, 1]])
    b = from_dense([[1, 0], [1, 1]])
    assert multiply_mod_p(a, b, 5).to_dense() == [[2, 1], [1, 1]]


def test_multiply_dimension_mismatch():
    with pytest.raises(ValueError):
        multiply_mod_p(SparseIntMatrix.zero(2, 3), SparseIntMatrix.zero(2, 3), 5)


def test_sms_empty():
    assert sms_write(SparseIntMatrix.zero(3, 4)) == "3 4 M\n0 0 0\n"


def test_sms_minimal():
    m = from_dense([[5]])
    assert sms_write(m) == "1 1 M\n1 1 5\n0 0 0\n"


def test_sms_roundtrip_random():
    rng = random.Random(11)
    for _ in range(30):
        m = random_matrix(rng, rng.randrange(0, 9), rng.randrange(0, 9))
        assert sms_read(sms_write(m)) == m


def test_sms_negative_entries_preserved():
    m = from_dense([[0, -3], [2, 0]])
    assert sms_read(sms_write(m)) == m


def test_sms_malformed():
    with pytest.raises(ValueError):
        sms_read("3 4\n0 0 0\n")
    with pytest.raises(ValueError):
        sms_read("2 2 M\n1 1 5\n")
    with pytest.raises(ValueError):
        sms_read("2 2 M\n5 1 3\n0 0 0\n")


def test_rational_capacity_guard():
    with pytest.raises(CapacityError):
        rank_rational(SparseIntMatrix.zero(3000, 3000))


def test_nullspace():
    m = from_dense([[1, 2, 3], [2, 4, 6]])
    ns = nullspace_mod_p(m, DEFAULT_PRIME)
    assert ns.cols == 2
    prod = multiply_mod_p(m, ns, DEFAULT_PRIME)
    assert is_zero(prod)


def test_column_span_membership():
    m = from_dense([[1, 0], [0, 1], [0, 0]])
    assert in_column_span_mod_p(m, {0: 3, 1: 4})
    assert not in_column_span_mod_p(m, {2: 1})


def test_duplicate_entry_rejected():
    with pytest.raises(ValueError):
        SparseIntMatrix.build(2, 2, [(0, 0, 1), (0, 0, 2)])

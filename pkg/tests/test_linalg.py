"""grsdual.linalg against naive scalar arithmetic.

The float64 digit-split product and the scalar Zech-table loop share no
code beyond the field tables, so agreement between them is a real check.
"""

import numpy as np
import pytest

from grsdual.field import ZERO_EXP, build_field
from grsdual.linalg import (_check_bound, batched_nonsingular, gf_gram,
                            gf_matmul, gf_rank, rowwise_inner, value_matmul)


def naive_matmul(field, A, B):
    n, k = A.shape
    k2, m = B.shape
    assert k == k2
    out = np.empty((n, m), dtype=np.int64)
    for i in range(n):
        for j in range(m):
            acc = field.zero()
            for t in range(k):
                acc = acc + field.element(int(A[i, t])) * field.element(int(B[t, j]))
            out[i, j] = acc.exp
    return out


def random_exps(field, rng, shape):
    return rng.integers(-1, field.q - 1, size=shape, dtype=np.int64)


def test_gf7_integer_product_frozen():
    field = build_field(7, 1)
    A = field.v_exp(np.array([[1, 2], [3, 4]], dtype=np.int64))
    B = field.v_exp(np.array([[5, 6], [0, 1]], dtype=np.int64))
    got = field.v_value(gf_matmul(field, A, B))
    assert got.tolist() == [[5, 1], [1, 1]]


@pytest.mark.parametrize("p,m", [(7, 1), (5, 2), (3, 4), (13, 2)])
def test_matmul_matches_naive(p, m):
    field = build_field(p, m)
    rng = np.random.default_rng(p * 100 + m)
    for _ in range(4):
        A = random_exps(field, rng, (5, 7))
        B = random_exps(field, rng, (7, 4))
        assert np.array_equal(gf_matmul(field, A, B), naive_matmul(field, A, B))


def test_matmul_identity_and_associativity():
    field = build_field(5, 2)
    rng = np.random.default_rng(0)
    A = random_exps(field, rng, (6, 6))
    eye = np.full((6, 6), ZERO_EXP, dtype=np.int64)
    np.fill_diagonal(eye, 0)
    assert np.array_equal(gf_matmul(field, A, eye), A)
    B = random_exps(field, rng, (6, 6))
    C = random_exps(field, rng, (6, 6))
    left = gf_matmul(field, gf_matmul(field, A, B), C)
    right = gf_matmul(field, A, gf_matmul(field, B, C))
    assert np.array_equal(left, right)


def test_gram_is_symmetric_and_matches_naive():
    field = build_field(7, 2)
    rng = np.random.default_rng(3)
    G = random_exps(field, rng, (4, 9))
    gram = gf_gram(field, G)
    assert np.array_equal(gram, gram.T)
    assert np.array_equal(gram, naive_matmul(field, G, G.T))


def test_rowwise_inner_is_product_diagonal():
    field = build_field(13, 2)
    rng = np.random.default_rng(7)
    U = random_exps(field, rng, (50, 11))
    V = random_exps(field, rng, (50, 11))
    diag = rowwise_inner(field, U, V)
    full = gf_matmul(field, U, V.T)
    assert np.array_equal(diag, np.diagonal(full))
    with pytest.raises(ValueError):
        rowwise_inner(field, U, V[:, :5])


def test_value_matmul_large_inner_dimension_exact():
    # inner dimension big enough that a single wrong carry would show
    field = build_field(149, 2)
    rng = np.random.default_rng(11)
    A = rng.integers(0, field.q, size=(2, 4000), dtype=np.int64)
    B = rng.integers(0, field.q, size=(4000, 2), dtype=np.int64)
    got = value_matmul(field, A, B)
    want = field.v_value(naive_matmul(field, field.v_exp(A), field.v_exp(B)))
    assert np.array_equal(got, want)


def test_check_bound_refuses_absurd_inner_dim():
    field = build_field(151, 2)
    with pytest.raises(ValueError):
        _check_bound(field, 10**12)
    _check_bound(field, 10**7)  # comfortably exact


def test_rank_known_matrices():
    field = build_field(5, 2)
    eye = np.full((5, 5), ZERO_EXP, dtype=np.int64)
    np.fill_diagonal(eye, 0)
    assert gf_rank(field, eye) == 5
    assert gf_rank(field, np.full((3, 4), ZERO_EXP, dtype=np.int64)) == 0
    # rank-1 outer product of two nonzero vectors
    u = np.array([0, 3, 7], dtype=np.int64)
    v = np.array([5, 1, 2, 9], dtype=np.int64)
    outer = field.v_mul(u[:, None], v[None, :])
    assert gf_rank(field, outer) == 1


def test_rank_vandermonde_full():
    # distinct evaluation points give an invertible Vandermonde block
    field = build_field(7, 2)
    pts = np.arange(0, 20, dtype=np.int64)  # theta^0 .. theta^19, distinct
    k = 6
    V = np.stack([field.v_pow(pts, i) for i in range(k)])
    assert gf_rank(field, V) == k


def test_batched_nonsingular_agrees_with_rank():
    field = build_field(5, 2)
    rng = np.random.default_rng(17)
    mats = random_exps(field, rng, (64, 4, 4))
    mats[0] = ZERO_EXP                       # zero matrix
    mats[1, 2, :] = ZERO_EXP                 # a zero row
    mats[2, 3, :] = mats[2, 0, :]            # duplicate rows
    eye = np.full((4, 4), ZERO_EXP, dtype=np.int64)
    np.fill_diagonal(eye, 0)
    mats[3] = eye
    got = batched_nonsingular(field, mats)
    want = np.array([gf_rank(field, m) == 4 for m in mats])
    assert np.array_equal(got, want)
    assert not got[0] and not got[1] and not got[2] and got[3]


def test_batched_nonsingular_requires_square():
    field = build_field(5, 2)
    with pytest.raises(ValueError):
        batched_nonsingular(field, np.zeros((2, 3, 4), dtype=np.int64))

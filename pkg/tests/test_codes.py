"""grsdual.codes: representation, duality checks, MDS certificates.

The Gram matrix of a twisted evaluation code equals the Hankel matrix of
power sums sum_t v_t^2 a_t^(i+j) (plus 1 in the corner for the infinity
column), which a scalar loop can compute independently of the dgemm
path; that identity is the main oracle here.  The hand-checked self-dual
controls over GF(7) were worked out on paper from the twist equations.
"""

import json

import numpy as np
import pytest

from grsdual.codes import (EvaluationSet, GrsCode, _monic_from_roots,
                           _newton_coeffs, _newton_to_monomial,
                           subgroup_points, subgroup_vanishing_derivative,
                           vanishing_derivative)
from grsdual.field import ZERO_EXP, build_field
from grsdual.linalg import gf_rank


def code_from_values(field, point_vals, twist_vals, k, infinity=False,
                     validate=True):
    pts = EvaluationSet(field, field.v_exp(np.array(point_vals, dtype=np.int64)),
                        includes_infinity=infinity, validate=validate)
    return GrsCode(points=pts,
                   twist=field.v_exp(np.array(twist_vals, dtype=np.int64)), k=k)


def power_sum_gram(code):
    # independent scalar-arithmetic Gram matrix
    field, k = code.field, code.k
    pts = [field.element(int(e)) for e in code.points.exps]
    tw = [field.element(int(e)) for e in code.twist]
    P = []
    for ell in range(2 * k - 1):
        acc = field.zero()
        for a, v in zip(pts, tw):
            acc = acc + v * v * a**ell
        P.append(acc)
    gram = [[P[i + j] for j in range(k)] for i in range(k)]
    if code.is_extended:
        gram[k - 1][k - 1] = gram[k - 1][k - 1] + field.one()
    return np.array([[e.exp for e in row] for row in gram], dtype=np.int64)


# ---------------------------------------------------------------------------
# Evaluation sets and the vanishing-polynomial derivative
# ---------------------------------------------------------------------------

def test_vanishing_derivative_two_and_three_points():
    field = build_field(7, 1)
    # A = {0, 1}: derivative values -1 and 1
    d = vanishing_derivative(field, field.v_exp(np.array([0, 1])))
    assert field.v_value(d).tolist() == [6, 1]
    # A = {1, 2, 3}: (1-2)(1-3) = 2, (2-1)(2-3) = 6, (3-1)(3-2) = 2
    d = vanishing_derivative(field, field.v_exp(np.array([1, 2, 3])))
    assert field.v_value(d).tolist() == [2, 6, 2]


def test_vanishing_derivative_rejects_duplicates():
    field = build_field(7, 1)
    exps = field.v_exp(np.array([1, 2, 1]))
    with pytest.raises(ValueError):
        vanishing_derivative(field, exps)


@pytest.mark.parametrize("p,m", [(7, 1), (5, 2), (3, 4)])
def test_subgroup_closed_form_matches_brute_force(p, m):
    field = build_field(p, m)
    q = field.q
    for n in range(1, q):
        if (q - 1) % n:
            continue
        pts = subgroup_points(field, n)
        assert np.array_equal(subgroup_vanishing_derivative(field, n),
                              vanishing_derivative(field, pts))


def test_subgroup_points_validation():
    field = build_field(5, 2)
    with pytest.raises(ValueError):
        subgroup_points(field, 7)   # 7 does not divide 24
    with pytest.raises(ValueError):
        subgroup_points(field, 0)


def test_evaluation_set_validation():
    field = build_field(7, 1)
    with pytest.raises(ValueError):
        EvaluationSet(field, np.array([0, 3, 3], dtype=np.int64))
    with pytest.raises(ValueError):
        EvaluationSet(field, np.array([0, 9], dtype=np.int64))
    # the backdoor used further down
    s = EvaluationSet(field, np.array([0, 3, 3], dtype=np.int64), validate=False)
    assert s.n == 3


# ---------------------------------------------------------------------------
# Generator matrices
# ---------------------------------------------------------------------------

def test_generator_matrix_plain():
    field = build_field(7, 1)
    code = code_from_values(field, [1, 2], [1, 1], k=2)
    G = field.v_value(code.generator_matrix())
    assert G.tolist() == [[1, 1], [1, 2]]


def test_generator_matrix_zero_point_and_infinity():
    field = build_field(7, 1)
    code = code_from_values(field, [0, 2, 3], [1, 2, 3], k=2, infinity=True)
    G = field.v_value(code.generator_matrix())
    # 0^0 = 1 in row 0; infinity column is e_{k-1}
    assert G.tolist() == [[1, 2, 3, 0], [0, 4, 2, 1]]


def test_code_validation():
    field = build_field(7, 1)
    with pytest.raises(ValueError):
        code_from_values(field, [1, 2], [1], k=2)       # twist length
    with pytest.raises(ValueError):
        code_from_values(field, [1, 2], [0, 1], k=2)    # zero twist entry
    with pytest.raises(ValueError):
        code_from_values(field, [1, 2], [1, 1], k=3)    # k > n


# ---------------------------------------------------------------------------
# Gram matrices against the power-sum oracle
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("p,m,infinity", [(5, 2, False), (7, 2, False),
                                          (3, 4, False), (5, 2, True),
                                          (13, 2, True)])
def test_gram_matches_power_sums(p, m, infinity):
    field = build_field(p, m)
    rng = np.random.default_rng(p + m)
    for k in (1, 2, 4):
        n_fin = 9
        pts = rng.choice(field.q, size=n_fin, replace=False).astype(np.int64)
        tw = rng.integers(1, field.q, size=n_fin, dtype=np.int64)
        code = code_from_values(field, pts, tw, k=k, infinity=infinity)
        assert np.array_equal(code.gram_matrix(), power_sum_gram(code))


# ---------------------------------------------------------------------------
# Hand-checked self-dual controls over GF(7)
# ---------------------------------------------------------------------------
# [4, 2]: points {1, 2, 3, 5} all have non-square derivative values
# (6, 3, 3, 3), so twist^2 = 3/derivative gives (2, 1, 1, 1).
# Extended [4, 2]: points {0, 2, 3} have -derivative = (1, 2, 4), all
# squares, twist = (1, 2, 3), plus the infinity column.

def plain_self_dual_control():
    return code_from_values(build_field(7, 1), [1, 2, 3, 5], [2, 1, 1, 1], k=2)


def extended_self_dual_control():
    return code_from_values(build_field(7, 1), [0, 2, 3], [1, 2, 3], k=2,
                            infinity=True)


@pytest.mark.parametrize("make", [plain_self_dual_control,
                                  extended_self_dual_control])
def test_self_dual_controls(make):
    code = make()
    assert code.is_self_orthogonal()
    assert code.is_self_dual()
    assert not code.is_almost_self_dual()
    assert code.min_distance() == code.n - code.k + 1
    result = code.mds_check()
    assert result.status == "proven" and result.ok
    assert gf_rank(code.field, code.generator_matrix()) == code.k


def test_non_self_orthogonal_code():
    field = build_field(7, 1)
    code = code_from_values(field, [1, 2, 3, 5], [1, 1, 1, 1], k=2)
    assert not code.is_self_orthogonal()
    assert not code.is_self_dual()


def test_sampled_inner_products():
    rng = np.random.default_rng(5)
    good = plain_self_dual_control()
    assert np.all(good.sampled_inner_products(pairs=200, rng=rng) == ZERO_EXP)
    field = build_field(7, 1)
    bad = code_from_values(field, [1, 2, 3, 5], [1, 1, 1, 1], k=2)
    assert np.any(bad.sampled_inner_products(pairs=200, rng=rng) != ZERO_EXP)


# ---------------------------------------------------------------------------
# Distance and MDS checks
# ---------------------------------------------------------------------------

def test_min_distance_budget():
    field = build_field(5, 2)
    rng = np.random.default_rng(1)
    pts = rng.choice(25, size=10, replace=False).astype(np.int64)
    code = code_from_values(field, pts, np.ones(10, dtype=np.int64), k=6)
    with pytest.raises(ValueError):
        code.min_distance(budget=10**6)  # 25^6 > 10^6


def test_duplicate_point_backdoor_breaks_mds():
    # two equal columns: the honest checks must notice
    field = build_field(7, 1)
    code = code_from_values(field, [1, 2, 4, 2], [1, 1, 1, 1], k=2,
                            validate=False)
    result = code.mds_check()
    assert result.status == "fail"
    assert result.witness == (1, 3)
    assert not result.ok
    assert code.min_distance() < code.n - code.k + 1


def test_certificate_agrees_with_exhaustive():
    code = plain_self_dual_control()
    n, k = code.n, code.k
    import itertools
    subsets = np.array(list(itertools.combinations(range(n), k)),
                       dtype=np.int64)
    assert code.certify_full_rank(subsets) is None


def test_certificate_extended_subsets():
    code = extended_self_dual_control()
    n, k = code.n, code.k
    import itertools
    subsets = np.array(list(itertools.combinations(range(n), k)),
                       dtype=np.int64)
    # includes subsets with and without the infinity column
    assert code.certify_full_rank(subsets) is None


def test_certificate_subset_width_validation():
    code = plain_self_dual_control()
    with pytest.raises(ValueError):
        code.certify_full_rank(np.array([[0, 1, 2]], dtype=np.int64))


def test_mds_sampled_path():
    # force the sampled branch with a tiny exhaustive budget
    code = plain_self_dual_control()
    result = code.mds_check(exhaustive_budget=1, trials=50)
    assert result.status == "sampled"
    assert result.subsets_checked == 50


# ---------------------------------------------------------------------------
# Interpolation helpers
# ---------------------------------------------------------------------------

def test_monic_from_roots():
    field = build_field(7, 1)
    pts = field.v_exp(np.array([[1, 2]], dtype=np.int64))
    M = _monic_from_roots(field, pts)
    # (x - 1)(x - 2) = x^2 - 3x + 2 = 2 + 4x + x^2
    assert field.v_value(M).tolist() == [[2, 4, 1]]


def test_newton_interpolation_recovers_polynomial():
    field = build_field(7, 1)
    # f(x) = 5 + x + 3x^2 at x = 1, 2, 4: values 2, 5, 1
    pts = field.v_exp(np.array([[1, 2, 4]], dtype=np.int64))
    targets = field.v_exp(np.array([[2, 5, 1]], dtype=np.int64))
    coeffs = _newton_to_monomial(field, pts, _newton_coeffs(field, pts, targets))
    assert field.v_value(coeffs).tolist() == [[5, 1, 3]]


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def test_json_round_trip():
    code = extended_self_dual_control()
    code.recipe = {"kind": "hand-made", "note": "paper-checked control"}
    blob = json.dumps(code.to_dict(), sort_keys=True)
    back = GrsCode.from_dict(json.loads(blob))
    assert back.k == code.k
    assert back.is_extended
    assert np.array_equal(back.points.exps, code.points.exps)
    assert np.array_equal(back.twist, code.twist)
    assert back.recipe == code.recipe
    assert json.dumps(back.to_dict(), sort_keys=True) == blob


def test_json_zero_point_marker():
    code = extended_self_dual_control()
    data = code.to_dict()
    assert data["points"][0] == "zero"
    assert data["infinity"] is True


def test_json_rejects_foreign_polynomial():
    data = plain_self_dual_control().to_dict()
    data["defining_poly"] = [3, 1]
    with pytest.raises(ValueError):
        GrsCode.from_dict(data)
    data = plain_self_dual_control().to_dict()
    data["q"] = 49
    with pytest.raises(ValueError):
        GrsCode.from_dict(data)


def test_encode_linearity():
    field = build_field(5, 2)
    rng = np.random.default_rng(9)
    pts = rng.choice(25, size=8, replace=False).astype(np.int64)
    tw = rng.integers(1, 25, size=8, dtype=np.int64)
    code = code_from_values(field, pts, tw, k=3)
    a = rng.integers(0, 25, size=(6, 3), dtype=np.int64)
    b = rng.integers(0, 25, size=(6, 3), dtype=np.int64)
    lhs = code.encode_values(field.add_values(a, b))
    rhs = field.add_values(code.encode_values(a), code.encode_values(b))
    assert np.array_equal(lhs, rhs)

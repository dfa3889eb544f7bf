"""Exact matrix arithmetic over GF(p^m) built on float64 matrix products.

The one high-throughput primitive available on a plain CPU is the BLAS
dgemm behind numpy's ``@``.  float64 products are exact as long as every
accumulated entry stays below 2^53, so a product over GF(p^m) can be done
exactly by splitting packed values into base-p digit matrices, multiplying
the digit pairs as floats, and reducing the digit convolution modulo the
field polynomial in int64.  With inner dimension K every accumulated entry
is at most m * K * (p-1)^2; each public function checks that bound and
refuses inputs past it rather than risking a rounding error.

All functions speak the exponent representation of grsdual.field: int64
arrays with ZERO_EXP marking zeros.  Conversions to and from packed values
happen internally.
"""

from __future__ import annotations

import numpy as np

from grsdual.field import ZERO_EXP, FiniteField, _poly_mod

_EXACT_LIMIT = float(1 << 53)


def _reduction_table(field: FiniteField) -> np.ndarray:
    """R[t, u] = coefficient of x^u in (x^t mod field.poly), t < 2m-1."""
    m = field.m
    R = np.zeros((2 * m - 1, m), dtype=np.int64)
    for t in range(2 * m - 1):
        rem = _poly_mod([0] * t + [1], list(field.poly), field.p)
        for u, c in enumerate(rem):
            R[t, u] = c
    return R


def _check_bound(field: FiniteField, inner: int) -> None:
    worst = field.m * inner * (field.p - 1) ** 2
    if worst >= _EXACT_LIMIT:
        raise ValueError(
            f"inner dimension {inner} too large for exact float64 "
            f"accumulation over GF({field.p}^{field.m})")


def _combine_digit_products(field: FiniteField, prods: list[np.ndarray]) -> np.ndarray:
    """Packed values from the digit convolution prods[t] = sum_{i+j=t} A_i B_j."""
    R = _reduction_table(field)
    m = field.m
    digits = []
    for u in range(m):
        acc = np.zeros(prods[0].shape, dtype=np.int64)
        for t in range(2 * m - 1):
            if R[t, u]:
                acc += R[t, u] * prods[t]
        digits.append(acc % field.p)
    return field.pack_digits(digits)


def value_matmul(field: FiniteField, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Exact product of packed-value matrices A (n x K) and B (K x m)."""
    _check_bound(field, A.shape[-1])
    dA = field.split_digits(A)
    dB = field.split_digits(B)
    m = field.m
    prods = []
    for t in range(2 * m - 1):
        acc = None
        for i in range(m):
            j = t - i
            if 0 <= j < m:
                term = dA[i] @ dB[j]
                acc = term if acc is None else acc + term
        prods.append(np.asarray(np.rint(acc), dtype=np.int64))
    return _combine_digit_products(field, prods)


def gf_matmul(field: FiniteField, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Matrix product of exponent-form matrices, returned in exponent form."""
    vals = value_matmul(field, field.v_value(A), field.v_value(B))
    return field.v_exp(vals)


def gf_gram(field: FiniteField, G: np.ndarray) -> np.ndarray:
    """Gram matrix G G^T of an exponent-form generator matrix."""
    return gf_matmul(field, G, G.T)


def rowwise_inner(field: FiniteField, U: np.ndarray, V: np.ndarray) -> np.ndarray:
    """Exponent of sum_j U[i, j] * V[i, j] for each row i.

    The diagonal of U V^T without forming the product; used for bulk
    sampled inner-product checks.
    """
    if U.shape != V.shape:
        raise ValueError("shape mismatch")
    _check_bound(field, U.shape[-1])
    dU = field.split_digits(field.v_value(U))
    dV = field.split_digits(field.v_value(V))
    m = field.m
    prods = []
    for t in range(2 * m - 1):
        acc = None
        for i in range(m):
            j = t - i
            if 0 <= j < m:
                term = (dU[i] * dV[j]).sum(axis=-1)
                acc = term if acc is None else acc + term
        prods.append(np.asarray(np.rint(acc), dtype=np.int64))
    vals = _combine_digit_products(field, prods)
    return field.v_exp(vals)


def gf_rank(field: FiniteField, M: np.ndarray) -> int:
    """Rank by Gaussian elimination in the exponent domain."""
    M = np.array(M, dtype=np.int64)
    rows, cols = M.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        col = M[r:, c]
        nz = np.nonzero(col != ZERO_EXP)[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            M[[r, piv]] = M[[piv, r]]
        inv = (-M[r, c]) % (field.q - 1)
        below = M[r + 1:, c]
        factor = field.v_mul(below, np.int64(inv))
        update = field.v_mul(factor[:, None], M[r][None, :])
        M[r + 1:] = field.v_sub(M[r + 1:], update)
        r += 1
    return r


def batched_nonsingular(field: FiniteField, mats: np.ndarray) -> np.ndarray:
    """Boolean array: which of the (S, k, k) exponent matrices are invertible.

    One vectorized elimination sweep over the whole batch; a matrix is
    flagged singular as soon as some column has no usable pivot.
    """
    mats = np.array(mats, dtype=np.int64)
    S, k, k2 = mats.shape
    if k != k2:
        raise ValueError("matrices must be square")
    ok = np.ones(S, dtype=bool)
    idx = np.arange(S)
    qm1 = field.q - 1
    for j in range(k):
        colj = mats[:, j:, j]
        nz = colj != ZERO_EXP
        ok &= nz.any(axis=1)
        piv = j + np.argmax(nz, axis=1)
        rowp = mats[idx, piv, :].copy()
        mats[idx, piv, :] = mats[:, j, :]
        mats[:, j, :] = rowp
        if j == k - 1:
            break
        pivot = mats[:, j, j]
        inv = (-np.where(pivot == ZERO_EXP, 0, pivot)) % qm1
        factor = field.v_mul(mats[:, j + 1:, j], inv[:, None])
        update = field.v_mul(factor[:, :, None], mats[:, None, j, j:])
        mats[:, j + 1:, j:] = field.v_sub(mats[:, j + 1:, j:], update)
    return ok

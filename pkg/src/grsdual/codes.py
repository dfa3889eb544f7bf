"""Generalized Reed-Solomon codes and their duality checks.

A code here is determined by an evaluation set (distinct field points,
optionally plus a point at infinity), a vector of nonzero column
multipliers (the twist), and a dimension k.  Row i of the generator
matrix evaluates twist * x^i at the points; when the point at infinity
is present it contributes a final column equal to e_{k-1}, i.e. the
x^{k-1} coefficient shows up there instead of an evaluation.

Everything downstream of the representation is a check, not an
assumption: self-orthogonality is decided by the actual Gram matrix,
MDS-ness by minors or by verified random certificates, and the minimum
distance (where feasible) by enumerating codewords.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from grsdual import linalg
from grsdual.field import ZERO_EXP, FiniteField, build_field

_DEFAULT_SEED = 0x5EED


# ---------------------------------------------------------------------------
# Evaluation sets
# ---------------------------------------------------------------------------

class EvaluationSet:
    """Distinct evaluation points, optionally with the point at infinity.

    Parameters
    ----------
    field : FiniteField
    exps : array_like of int64
        Exponent representation of the finite points (ZERO_EXP for 0).
    includes_infinity : bool
        Whether the evaluation extends by the point at infinity.
    provenance : dict
        Free-form record of how the set was assembled (coset structure,
        construction parameters); carried along for reporting only.
    validate : bool
        Distinctness is checked unless this is lowered, which exists so
        tests can feed broken sets to the honest checks downstream.
    """

    def __init__(self, field: FiniteField, exps, includes_infinity: bool = False,
                 provenance: dict | None = None, validate: bool = True):
        self.field = field
        self.exps = np.asarray(exps, dtype=np.int64)
        self.includes_infinity = bool(includes_infinity)
        self.provenance = dict(provenance or {})
        if self.exps.ndim != 1:
            raise ValueError("points must form a one-dimensional array")
        if validate:
            bad = (self.exps < ZERO_EXP) | (self.exps >= field.q - 1)
            if np.any(bad):
                raise ValueError("point exponent out of range")
            if np.unique(self.exps).size != self.exps.size:
                raise ValueError("evaluation points must be distinct")

    @property
    def n(self) -> int:
        """Code length this set supports: finite points plus infinity."""
        return self.exps.size + int(self.includes_infinity)

    def values(self) -> np.ndarray:
        return self.field.v_value(self.exps)

    def __repr__(self) -> str:
        inf = " + infinity" if self.includes_infinity else ""
        return f"EvaluationSet({self.exps.size} points{inf}, GF({self.field.q}))"


def subgroup_points(field: FiniteField, n: int) -> np.ndarray:
    """Exponents of the order-n subgroup of the multiplicative group."""
    if n < 1 or (field.q - 1) % n != 0:
        raise ValueError(f"{n} does not divide q - 1 = {field.q - 1}")
    step = (field.q - 1) // n
    return np.arange(n, dtype=np.int64) * step


def vanishing_derivative(field: FiniteField, exps: np.ndarray,
                         chunk: int = 1024) -> np.ndarray:
    """For each point a, the product of (a - a') over the other points.

    This is the formal derivative of prod(x - a_i) evaluated at a_i, the
    quantity every twist construction divides by.  O(n^2) pairwise
    differences, processed in row chunks.
    """
    exps = np.asarray(exps, dtype=np.int64)
    n = exps.size
    vals = field.v_value(exps)
    out = np.empty(n, dtype=np.int64)
    qm1 = field.q - 1
    for start in range(0, n, chunk):
        stop = min(start + chunk, n)
        diffs = field.sub_values(vals[start:stop, None], vals[None, :])
        de = field.v_exp(diffs)
        zero = de == ZERO_EXP
        if np.any(zero.sum(axis=1) != 1):
            raise ValueError("duplicate evaluation points")
        out[start:stop] = np.where(zero, 0, de).sum(axis=1) % qm1
    return out


def subgroup_vanishing_derivative(field: FiniteField, n: int) -> np.ndarray:
    """Closed form of :func:`vanishing_derivative` on the order-n subgroup.

    The subgroup's vanishing polynomial is x^n - 1, whose derivative is
    n x^(n-1) = n / a on the subgroup itself.  Point order matches
    :func:`subgroup_points`.
    """
    pts = subgroup_points(field, n)
    n_elem = field.from_int(n)
    if n_elem.is_zero:
        raise ValueError("subgroup order divisible by the characteristic")
    return (n_elem.exp - pts) % (field.q - 1)


# ---------------------------------------------------------------------------
# The codes
# ---------------------------------------------------------------------------

@dataclass
class MdsCheckResult:
    """Outcome of an MDS (every k columns independent) check.

    status is "proven" when every column subset was eliminated, "sampled"
    when a batch of random subsets each passed a verified full-rank
    certificate (error probability at most 1/q per subset), and "fail"
    when some subset was singular, in which case witness holds its column
    indices.
    """
    status: str
    subsets_checked: int
    witness: tuple[int, ...] | None = None

    @property
    def ok(self) -> bool:
        return self.status in ("proven", "sampled")


@dataclass(eq=False)
class GrsCode:
    """A (possibly extended) generalized Reed-Solomon code.

    Attributes
    ----------
    points : EvaluationSet
    twist : np.ndarray
        Exponents of the nonzero column multipliers, one per finite point.
    k : int
        Dimension, 1 <= k <= n.
    recipe : dict
        Free-form construction record, preserved through serialization.
    """

    points: EvaluationSet
    twist: np.ndarray
    k: int
    recipe: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        self.twist = np.asarray(self.twist, dtype=np.int64)
        if self.twist.shape != self.points.exps.shape:
            raise ValueError("one twist entry per finite point required")
        if np.any(self.twist == ZERO_EXP):
            raise ValueError("twist entries must be nonzero")
        if not 1 <= self.k <= self.points.n:
            raise ValueError(f"dimension {self.k} outside [1, {self.points.n}]")

    @property
    def field(self) -> FiniteField:
        return self.points.field

    @property
    def n(self) -> int:
        return self.points.n

    @property
    def is_extended(self) -> bool:
        return self.points.includes_infinity

    def __repr__(self) -> str:
        return (f"GrsCode([{self.n}, {self.k}] over GF({self.field.q})"
                f"{', extended' if self.is_extended else ''})")

    # -- generator matrix ----------------------------------------------

    def generator_matrix(self) -> np.ndarray:
        """Exponent-form k x n generator matrix."""
        field = self.field
        pts = self.points.exps
        qm1 = field.q - 1
        powers = np.arange(self.k, dtype=np.int64)
        mat = (pts[None, :] * powers[:, None]) % qm1
        zero_pt = pts == ZERO_EXP
        if np.any(zero_pt):
            # 0^0 = 1, 0^i = 0 for i > 0
            mat[:, zero_pt] = ZERO_EXP
            mat[0, zero_pt] = 0
        mat = field.v_mul(self.twist[None, :], mat)
        if self.is_extended:
            inf_col = np.full((self.k, 1), ZERO_EXP, dtype=np.int64)
            inf_col[self.k - 1, 0] = 0
            mat = np.concatenate([mat, inf_col], axis=1)
        return mat

    def encode_values(self, messages: np.ndarray) -> np.ndarray:
        """Codewords (packed values) for packed-value message rows."""
        G_vals = self.field.v_value(self.generator_matrix())
        return linalg.value_matmul(self.field, np.asarray(messages, dtype=np.int64),
                                   G_vals)

    # -- duality checks -------------------------------------------------

    def gram_matrix(self) -> np.ndarray:
        return linalg.gf_gram(self.field, self.generator_matrix())

    def is_self_orthogonal(self) -> bool:
        """Whether every pair of generator rows has zero inner product."""
        return bool(np.all(self.gram_matrix() == ZERO_EXP))

    def is_self_dual(self) -> bool:
        return self.n == 2 * self.k and self.is_self_orthogonal()

    def is_almost_self_dual(self) -> bool:
        """Self-orthogonal with the dual exactly one dimension bigger."""
        return self.n == 2 * self.k + 1 and self.is_self_orthogonal()

    def sampled_inner_products(self, pairs: int = 1000,
                               rng: np.random.Generator | None = None) -> np.ndarray:
        """Exponents of <c1, c2> for random codeword pairs.

        All-ZERO_EXP output is evidence of self-orthogonality sized to the
        sample, for lengths where the full Gram matrix is unreasonable.
        """
        rng = rng or np.random.default_rng(_DEFAULT_SEED)
        field = self.field
        ma = rng.integers(0, field.q, size=(pairs, self.k), dtype=np.int64)
        mb = rng.integers(0, field.q, size=(pairs, self.k), dtype=np.int64)
        ca = field.v_exp(self.encode_values(ma))
        cb = field.v_exp(self.encode_values(mb))
        return linalg.rowwise_inner(field, ca, cb)

    # -- distance and MDS -----------------------------------------------

    def min_distance(self, budget: int = 10**7, chunk: int = 1 << 14) -> int:
        """Exact minimum weight by enumerating all q^k codewords."""
        field = self.field
        total = field.q**self.k
        if total > budget:
            raise ValueError(f"q^k = {total} exceeds enumeration budget {budget}")
        G_vals = field.v_value(self.generator_matrix())
        best = self.n
        for start in range(1, total, chunk):
            ids = np.arange(start, min(start + chunk, total), dtype=np.int64)
            msgs = np.empty((ids.size, self.k), dtype=np.int64)
            rem = ids
            for t in range(self.k):
                msgs[:, t] = rem % field.q
                rem = rem // field.q
            words = linalg.value_matmul(field, msgs, G_vals)
            best = min(best, int(np.count_nonzero(words, axis=1).min()))
        return best

    def mds_check(self, exhaustive_budget: int = 10**6, trials: int = 1000,
                  rng: np.random.Generator | None = None) -> MdsCheckResult:
        """Check that every k columns of the generator are independent.

        Exhausts all column subsets when their number fits the budget;
        otherwise draws ``trials`` random subsets and runs the verified
        interpolation certificate on each.
        """
        n, k = self.n, self.k
        if math.comb(n, k) <= exhaustive_budget:
            return self._mds_exhaustive()
        rng = rng or np.random.default_rng(_DEFAULT_SEED)
        # uniform k-subsets: the k smallest of n random keys per row
        keys = rng.random((trials, n))
        subsets = np.sort(np.argpartition(keys, k - 1, axis=1)[:, :k], axis=1)
        bad = self.certify_full_rank(subsets, rng=rng)
        if bad is not None:
            return MdsCheckResult("fail", trials, tuple(int(c) for c in bad))
        return MdsCheckResult("sampled", trials)

    def _mds_exhaustive(self) -> MdsCheckResult:
        G = self.generator_matrix()
        n, k = self.n, self.k
        combos = itertools.combinations(range(n), k)
        checked = 0
        while True:
            block = list(itertools.islice(combos, 1 << 13))
            if not block:
                break
            idx = np.array(block, dtype=np.int64)
            mats = G[:, idx].transpose(1, 0, 2)
            ok = linalg.batched_nonsingular(self.field, mats)
            checked += idx.shape[0]
            if not np.all(ok):
                first = int(np.nonzero(~ok)[0][0])
                return MdsCheckResult("fail", checked, tuple(block[first]))
        return MdsCheckResult("proven", checked)

    # -- verified full-rank certificate ---------------------------------

    def certify_full_rank(self, subsets: np.ndarray,
                          rng: np.random.Generator | None = None):
        """Verified full-rank certificate for k-column subsets.

        For each subset, a random target vector is hit by solving an
        interpolation problem against the claimed column structure; the
        solutions are then re-evaluated against the actual generator
        matrix in one exact matrix product.  A passing subset is full
        rank except with probability at most 1/q: a rank-deficient
        submatrix leaves the target reachable only on a proper subspace,
        and a defective solver can only make the re-evaluation fail, not
        pass.  Returns None when all subsets verify, else the first
        failing subset.
        """
        rng = rng or np.random.default_rng(_DEFAULT_SEED)
        field = self.field
        subsets = np.sort(np.asarray(subsets, dtype=np.int64), axis=1)
        S, k = subsets.shape
        if k != self.k:
            raise ValueError("subsets must pick exactly k columns")
        y_vals = rng.integers(0, field.q, size=(S, k), dtype=np.int64)
        y = field.v_exp(y_vals)

        inf_index = self.n - 1 if self.is_extended else None
        has_inf = ((subsets == inf_index).any(axis=1) if inf_index is not None
                   else np.zeros(S, dtype=bool))
        coeffs = np.full((S, k), ZERO_EXP, dtype=np.int64)
        if np.any(~has_inf):
            rows = np.nonzero(~has_inf)[0]
            coeffs[rows] = self._interp_coeffs(subsets[rows], y[rows])
        if np.any(has_inf):
            rows = np.nonzero(has_inf)[0]
            coeffs[rows] = self._interp_coeffs_with_infinity(subsets[rows], y[rows])

        # Honest re-evaluation: coefficients against the real generator.
        E = linalg.gf_matmul(field, coeffs, self.generator_matrix())
        got = np.take_along_axis(E, subsets, axis=1)
        mismatch = (got != y).any(axis=1)
        if np.any(mismatch):
            return subsets[int(np.nonzero(mismatch)[0][0])]
        return None

    def _interp_coeffs(self, subsets: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Monomial coefficients of the degree < k interpolants through
        (a_j, y_j / v_j) for each subset row, batched."""
        field = self.field
        targets = field.v_mul(y, field.v_inv(self.twist[subsets]))
        if self.k + 1 <= self.points.exps.size:
            return self._lagrange_coeffs(subsets, targets, False)[0]
        # k = n leaves no spare grid node; fall back to divided differences
        pts = self.points.exps[subsets]
        newton = _newton_coeffs(field, pts, targets)
        return _newton_to_monomial(field, pts, newton)

    def _interp_coeffs_with_infinity(self, subsets: np.ndarray,
                                     y: np.ndarray) -> np.ndarray:
        """Same, for subsets containing the infinity column: the infinity
        target pins the x^{k-1} coefficient, the k-1 finite points are
        interpolated underneath it."""
        field = self.field
        k = self.k
        inf_index = self.n - 1
        S = subsets.shape[0]
        fin_cols = np.empty((S, k - 1), dtype=np.int64)
        y_fin = np.empty((S, k - 1), dtype=np.int64)
        y_inf = np.empty(S, dtype=np.int64)
        for i in range(S):
            mask = subsets[i] != inf_index
            fin_cols[i] = subsets[i][mask]
            y_fin[i] = y[i][mask]
            y_inf[i] = y[i][~mask][0]
        if k == 1:
            return y_inf[:, None]
        # f = y_inf * M + g with M = prod(x - a_j) monic of degree k-1,
        # g of degree <= k-2 interpolating y_j / v_j at the finite points
        # (M vanishes there, so those targets need no adjustment).
        targets = field.v_mul(y_fin, field.v_inv(self.twist[fin_cols]))
        if k <= self.points.exps.size:
            g, M = self._lagrange_coeffs(fin_cols, targets, True)
        else:
            pts = self.points.exps[fin_cols]
            M = _monic_from_roots(field, pts)                  # (S, k)
            newton = _newton_coeffs(field, pts, targets)
            g = _newton_to_monomial(field, pts, newton)        # (S, k-1)
        g = np.concatenate(
            [g, np.full((S, 1), ZERO_EXP, dtype=np.int64)], axis=1)
        return field.v_add(field.v_mul(y_inf[:, None], M), g)

    def _lagrange_coeffs(self, cols: np.ndarray, targets: np.ndarray,
                         want_vanishing: bool):
        """Batched interpolation through subset columns, shaped for BLAS.

        Rather than running divided differences level by level, each
        interpolant is recovered from its values on a fixed grid (the
        first j+1 finite points).  Away from its own subset the
        interpolant factors as f(z) = P(z) * sum_t w_t / (z - a_t) with
        P the subset vanishing polynomial, delta its derivative at the
        subset points and w_t = u_t / delta_t, so the heavy inner sums
        become matrix products against global operands: the pairwise
        difference-log table gives every delta and every P grid value in
        one product, a Cauchy value table gives the grid values of the
        weighted sum in another, and a fixed per-grid matrix turns grid
        values into monomial coefficients.  All products stay exact
        (log sums stay far below 2**53, value products go through the
        checked digit-split path), and the seconds-per-thousand-subsets
        cost is dominated by dgemm throughput instead of per-level
        kernel overhead.

        Parameters
        ----------
        cols : (S, j) int64
            Sorted finite-column indices per row.
        targets : (S, j) int64
            Exponent-form interpolation targets u.
        want_vanishing : bool
            Also return the monic subset vanishing polynomials.

        Returns
        -------
        (coeffs, vanishing)
            ``coeffs``: (S, j) exponents, degree < j interpolants.
            ``vanishing``: (S, j+1) exponents of prod(x - a_t), monic of
            degree j, or None unless requested.
        """
        field = self.field
        qm1 = field.q - 1
        S, j = cols.shape
        fin = self.points.exps
        nf = fin.size
        vals = field.v_value(fin)
        grid = np.arange(j + 1, dtype=np.int64)

        # row sums over the pairwise difference-log table, by dgemm
        X = np.zeros((S, nf))
        X[np.arange(S)[:, None], cols] = 1.0
        row_sums = np.zeros((S, nf))
        chunk = max(1, (1 << 23) // nf)
        for z0 in range(0, nf, chunk):
            z1 = min(z0 + chunk, nf)
            diff = field.sub_values(vals[z0:z1, None], vals[None, :])
            dlog = field.v_exp(diff).astype(np.float64)
            # the self-difference cell must contribute nothing to a sum
            dlog[np.arange(z1 - z0), np.arange(z0, z1)] = 0.0
            row_sums[:, z0:z1] = X @ dlog.T
        # sums of at most j logs below q-1: exact in float64
        delta = np.take_along_axis(row_sums, cols, axis=1).astype(np.int64) % qm1
        p_grid = row_sums[:, grid].astype(np.int64) % qm1

        # Cauchy operand 1/(g_z - a_t), zero where the node meets itself
        gdiff = field.v_exp(field.sub_values(vals[None, grid], vals[:, None]))
        inv_exp = np.where(gdiff != ZERO_EXP, (qm1 - gdiff) % qm1, ZERO_EXP)
        cauchy = field.v_value(inv_exp)                        # (nf, j+1)

        w_scat = np.zeros((S, nf), dtype=np.int64)
        np.put_along_axis(
            w_scat, cols,
            field.v_value(field.v_mul(targets, field.v_inv(delta))), axis=1)
        f_exp = field.v_mul(
            field.v_exp(linalg.value_matmul(field, w_scat, cauchy)), p_grid)
        # on grid nodes inside a subset the factored form degenerates
        # (P vanishes there); the interpolant value is the target itself
        memb_rows, memb_pos = np.nonzero(cols <= j)
        memb_cols = cols[memb_rows, memb_pos]
        f_exp[memb_rows, memb_cols] = targets[memb_rows, memb_pos]

        basis = self._grid_coeff_matrix(j)
        coeffs = field.v_exp(
            linalg.value_matmul(field, field.v_value(f_exp), basis))
        # the top coefficient is zero whenever the columns were genuinely
        # interpolable; truncating keeps a defective row detectable by the
        # honest re-evaluation instead of masking it
        coeffs = coeffs[:, :j]
        if not want_vanishing:
            return coeffs, None
        p_vals = field.v_value(p_grid)
        p_vals[memb_rows, memb_cols] = 0
        vanishing = field.v_exp(
            linalg.value_matmul(field, p_vals, basis))         # (S, j+1)
        return coeffs, vanishing

    def _grid_coeff_matrix(self, j: int) -> np.ndarray:
        """Packed-value (j+1, j+1) map from values on the first j+1
        finite points to coefficients of the degree <= j interpolant.

        Row z holds the coefficients of the Lagrange basis polynomial of
        grid node z: the monic grid vanishing polynomial divided by
        (x - g_z) via batched synthetic division, scaled by the inverse
        derivative value.  Cached per dimension on the code object.
        """
        cache = self.__dict__.setdefault("_grid_basis_cache", {})
        if j in cache:
            return cache[j]
        field = self.field
        grid = self.points.exps[: j + 1]
        m = _monic_from_roots(field, grid[None, :])[0]         # (j+2,)
        d = vanishing_derivative(field, grid)                  # (j+1,)
        quot = np.empty((j + 1, j + 1), dtype=np.int64)
        quot[:, j] = 0
        for i in range(j - 1, -1, -1):
            quot[:, i] = field.v_add(
                np.full(j + 1, m[i + 1], dtype=np.int64),
                field.v_mul(grid, quot[:, i + 1]))
        basis = field.v_value(field.v_mul(quot, field.v_inv(d)[:, None]))
        cache[j] = basis
        return basis

    # -- serialization --------------------------------------------------

    def to_dict(self) -> dict:
        field = self.field
        return {
            "q": field.q,
            "p": field.p,
            "m": field.m,
            "defining_poly": list(field.poly),
            "points": ["zero" if e == ZERO_EXP else int(e)
                       for e in self.points.exps],
            "infinity": self.is_extended,
            "twist": [int(e) for e in self.twist],
            "k": self.k,
            "recipe": self.recipe,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GrsCode":
        field = build_field(int(data["p"]), int(data["m"]))
        if field.q != int(data["q"]):
            raise ValueError("inconsistent p, m, q")
        if list(field.poly) != list(data["defining_poly"]):
            raise ValueError(
                "defining polynomial does not match the canonical one; "
                "exponents would mean something else")
        exps = np.array([ZERO_EXP if e == "zero" else int(e)
                         for e in data["points"]], dtype=np.int64)
        points = EvaluationSet(field, exps,
                               includes_infinity=bool(data["infinity"]))
        return cls(points=points, twist=np.array(data["twist"], dtype=np.int64),
                   k=int(data["k"]), recipe=dict(data.get("recipe", {})))


# ---------------------------------------------------------------------------
# Batched polynomial helpers (exponent domain)
# ---------------------------------------------------------------------------

def _newton_coeffs(field: FiniteField, pts: np.ndarray,
                   targets: np.ndarray) -> np.ndarray:
    """Divided-difference coefficients, one interpolation problem per row."""
    coef = np.array(targets, dtype=np.int64)
    levels = pts.shape[1]
    for lev in range(1, levels):
        num = field.v_sub(coef[:, lev:], coef[:, lev - 1:-1])
        den = field.v_sub(pts[:, lev:], pts[:, :-lev])
        coef[:, lev:] = field.v_mul(num, field.v_inv(den))
    return coef


def _newton_to_monomial(field: FiniteField, pts: np.ndarray,
                        newton: np.ndarray) -> np.ndarray:
    """Expand Newton-form interpolants to monomial coefficients.

    Horner over the nested form: c <- c * (x - a_i) + coef_i, batched
    across rows; output column t is the x^t coefficient.
    """
    S, k = newton.shape
    out = np.full((S, k), ZERO_EXP, dtype=np.int64)
    out[:, 0] = newton[:, k - 1]
    deg = 0
    for i in range(k - 2, -1, -1):
        neg_a = field.v_neg(pts[:, i])
        shifted = np.full((S, deg + 2), ZERO_EXP, dtype=np.int64)
        shifted[:, 1:] = out[:, :deg + 1]
        scaled = field.v_mul(out[:, :deg + 1], neg_a[:, None])
        shifted[:, :deg + 1] = field.v_add(shifted[:, :deg + 1], scaled)
        shifted[:, 0] = field.v_add(shifted[:, 0], newton[:, i])
        deg += 1
        out[:, :deg + 1] = shifted
        out[:, deg + 1:] = ZERO_EXP
    return out


def _monic_from_roots(field: FiniteField, pts: np.ndarray) -> np.ndarray:
    """Coefficients of prod(x - a_j) per row; output has one extra column."""
    S, d = pts.shape
    out = np.full((S, d + 1), ZERO_EXP, dtype=np.int64)
    out[:, 0] = 0  # the constant polynomial 1
    deg = 0
    for i in range(d):
        neg_a = field.v_neg(pts[:, i])
        shifted = np.full((S, deg + 2), ZERO_EXP, dtype=np.int64)
        shifted[:, 1:] = out[:, :deg + 1]
        scaled = field.v_mul(out[:, :deg + 1], neg_a[:, None])
        shifted[:, :deg + 1] = field.v_add(shifted[:, :deg + 1], scaled)
        deg += 1
        out[:, :deg + 1] = shifted
    return out

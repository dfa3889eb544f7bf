"""Exact arithmetic in odd-characteristic finite fields GF(p^m).

Elements are held in discrete-log form: a nonzero element is theta^e for a
fixed primitive element theta, and only the exponent e (0 <= e <= q-2) is
stored.  The additive zero gets the sentinel exponent -1, so a whole vector
of elements is just an int64 numpy array.  This makes multiplication,
inversion, powers, the quadratic character and square roots O(1) exponent
arithmetic; addition goes through a precomputed Zech-logarithm table
(zech[e] = dlog(1 + theta^e)).

Everything about the construction is deterministic:

* the reducing polynomial is the lexicographically smallest monic
  irreducible of degree m, comparing coefficient tuples from the
  x^(m-1) coefficient down to the constant term;
* theta is the first primitive element in ascending packed-integer order,
  where a polynomial c_0 + c_1 x + ... packs as sum(c_i * p^i);
* sqrt returns the root with the smaller exponent.

Fields are cached by (p, m), so two calls to build_field with equal
arguments return the identical object.
"""

from __future__ import annotations

import math
from typing import Iterator

import numpy as np

# Fields above this order would still work but the dense log/Zech tables stop
# being obviously cheap; every target field here is far below it.
MAX_ORDER = 1 << 18

# Exponent-domain sentinel for the additive zero.
ZERO_EXP = -1

_FIELD_CACHE: dict[tuple[int, int], "FiniteField"] = {}


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


# ----------------------------------------------------------------------
# Polynomial arithmetic over GF(p), coefficients lowest-degree first
# ----------------------------------------------------------------------

def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_trim(out)


def _poly_mod(a: list[int], f: list[int], p: int) -> list[int]:
    # f is monic.
    a = a[:]
    df = len(f) - 1
    while len(a) - 1 >= df and a:
        lead = a[-1]
        shift = len(a) - 1 - df
        if lead:
            for i, fi in enumerate(f):
                a[shift + i] = (a[shift + i] - lead * fi) % p
        a.pop()
        _poly_trim(a)
    return a


def _poly_pow_mod(base: list[int], e: int, f: list[int], p: int) -> list[int]:
    result = [1]
    base = _poly_mod(base, f, p)
    while e:
        if e & 1:
            result = _poly_mod(_poly_mul(result, base, p), f, p)
        base = _poly_mod(_poly_mul(base, base, p), f, p)
        e >>= 1
    return result


def _poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = a[:], b[:]
    while b:
        # Make b monic before reducing so _poly_mod's monic assumption holds.
        inv = pow(b[-1], -1, p)
        b = [(c * inv) % p for c in b]
        a, b = b, _poly_mod(a, b, p)
    return a


def _poly_sub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p
           for i in range(n)]
    return _poly_trim(out)


def _is_irreducible(f: list[int], p: int) -> bool:
    # Rabin's test: x^(p^m) == x mod f, and gcd(x^(p^(m/l)) - x, f) = 1 for
    # every prime l dividing m.
    m = len(f) - 1
    x = [0, 1]
    xq = _poly_pow_mod(x, p**m, f, p)
    if _poly_sub(xq, x, p):
        return False
    for l in _prime_factors(m):
        xe = _poly_pow_mod(x, p ** (m // l), f, p)
        g = _poly_gcd(f, _poly_sub(xe, x, p), p)
        if len(g) - 1 != 0:
            return False
    return True


def _smallest_irreducible(p: int, m: int) -> tuple[int, ...]:
    """Monic irreducible of degree m over GF(p), minimal in the
    (c_{m-1}, ..., c_1, c_0) lexicographic order.  Returned as the full
    coefficient tuple (c_0, ..., c_{m-1}, 1), lowest degree first."""
    if m == 1:
        return (0, 1)  # the polynomial x
    # Iterate tails in lexicographic order on (c_{m-1}, ..., c_0).
    for packed in range(p**m):
        coeffs = []
        v = packed
        for _ in range(m):
            coeffs.append(v % p)
            v //= p
        # packed = sum(c_i * p^i), so ascending packed order is lexicographic
        # on (c_{m-1}, ..., c_0) and coeffs is already (c_0, ..., c_{m-1}).
        f = coeffs + [1]
        if _is_irreducible(f, p):
            return tuple(f)
    raise RuntimeError(f"no irreducible polynomial of degree {m} over GF({p})")


# ----------------------------------------------------------------------
# Field element (scalar API)
# ----------------------------------------------------------------------

class Fe:
    """One element of a FiniteField, in exponent form.

    ``exp`` is the discrete log of the element with respect to the field's
    theta, or ZERO_EXP (-1) for the additive zero.  Instances are immutable
    and compare by (field, exp).
    """

    __slots__ = ("field", "exp")

    def __init__(self, field: "FiniteField", exp: int):
        self.field = field
        self.exp = exp

    @property
    def is_zero(self) -> bool:
        return self.exp == ZERO_EXP

    def value(self) -> int:
        """Packed-integer representation sum(c_i * p^i) of the element."""
        if self.is_zero:
            return 0
        return int(self.field._value_of_exp[self.exp])

    def __add__(self, other: "Fe") -> "Fe":
        return Fe(self.field, self.field.add_exps(self.exp, other.exp))

    def __sub__(self, other: "Fe") -> "Fe":
        return self + (-other)

    def __neg__(self) -> "Fe":
        return Fe(self.field, self.field.neg_exp(self.exp))

    def __mul__(self, other: "Fe") -> "Fe":
        if self.is_zero or other.is_zero:
            return Fe(self.field, ZERO_EXP)
        return Fe(self.field, (self.exp + other.exp) % (self.field.q - 1))

    def __truediv__(self, other: "Fe") -> "Fe":
        return self * other.inverse()

    def __pow__(self, k: int) -> "Fe":
        return Fe(self.field, self.field.pow_exp(self.exp, k))

    def inverse(self) -> "Fe":
        if self.is_zero:
            raise ZeroDivisionError("inverse of zero")
        return Fe(self.field, (-self.exp) % (self.field.q - 1))

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, Fe) and other.field is self.field
                and other.exp == self.exp)

    def __hash__(self) -> int:
        return hash((id(self.field), self.exp))

    def __repr__(self) -> str:
        if self.is_zero:
            return f"Fe(GF({self.field.q}), 0)"
        return f"Fe(GF({self.field.q}), theta^{self.exp})"


# ----------------------------------------------------------------------
# The field
# ----------------------------------------------------------------------

class FiniteField:
    """GF(p^m) with dense discrete-log, value and Zech tables.

    Do not call the constructor directly; use :func:`build_field`, which
    validates arguments and caches the result.

    Attributes
    ----------
    p, m, q : int
        Characteristic, extension degree, order q = p^m.
    r : int or None
        Integer square root of q when q is a perfect square, else None.
    poly : tuple[int, ...]
        Reducing polynomial, coefficients lowest degree first, monic.
    theta : Fe
        The fixed primitive element; every nonzero element is theta^e.
    """

    def __init__(self, p: int, m: int, _token: object = None):
        if _token is not _BUILD_TOKEN:
            raise TypeError("use build_field(p, m)")
        self.p = p
        self.m = m
        self.q = p**m
        s = math.isqrt(self.q)
        self.r: int | None = s if s * s == self.q else None
        self.poly = _smallest_irreducible(p, m)

        self._build_tables()
        self.theta = Fe(self, 1)

    # -- construction ---------------------------------------------------

    def _mul_packed(self, u: int, v: int) -> int:
        """Product of two packed values, by coefficient convolution."""
        p, m = self.p, self.m
        a = [0] * m
        b = [0] * m
        for i in range(m):
            a[i] = u % p
            u //= p
            b[i] = v % p
            v //= p
        prod = _poly_mod(_poly_mul(_poly_trim(a), _poly_trim(b), p),
                         list(self.poly), p)
        out = 0
        for c in reversed(prod):
            out = out * p + c
        return out

    def _order_is_full(self, v: int, factors: list[int]) -> bool:
        qm1 = self.q - 1
        for l in factors:
            if self._pow_packed(v, qm1 // l) == 1:
                return False
        return True

    def _pow_packed(self, v: int, e: int) -> int:
        out = 1
        while e:
            if e & 1:
                out = self._mul_packed(out, v)
            v = self._mul_packed(v, v)
            e >>= 1
        return out

    def _build_tables(self) -> None:
        q = self.q
        factors = _prime_factors(q - 1)
        theta_val = None
        for cand in range(2, q):
            if self._order_is_full(cand, factors):
                theta_val = cand
                break
        if theta_val is None:  # impossible: the group is cyclic
            raise RuntimeError("no primitive element found")
        self._theta_value = theta_val

        value_of_exp = np.empty(q - 1, dtype=np.int64)
        v = 1
        for e in range(q - 1):
            value_of_exp[e] = v
            v = self._mul_packed(v, theta_val)
        if v != 1:
            raise RuntimeError("theta order exceeds q-1")  # unreachable
        exp_of_value = np.full(q, ZERO_EXP, dtype=np.int64)
        exp_of_value[value_of_exp] = np.arange(q - 1, dtype=np.int64)
        if np.count_nonzero(exp_of_value == ZERO_EXP) != 1:
            raise RuntimeError("theta is not primitive")  # unreachable

        self._value_of_exp = value_of_exp
        self._exp_of_value = exp_of_value

        # zech[e] = dlog(1 + theta^e); ZERO_EXP at the single e with
        # theta^e = -1.
        one_plus = self.add_values(np.int64(1), value_of_exp)
        self._zech = exp_of_value[one_plus]

    # -- scalar element constructors ------------------------------------

    def zero(self) -> Fe:
        return Fe(self, ZERO_EXP)

    def one(self) -> Fe:
        return Fe(self, 0)

    def element(self, exp: int) -> Fe:
        """theta^exp (exp reduced mod q-1), or zero for exp = ZERO_EXP."""
        if exp == ZERO_EXP:
            return Fe(self, ZERO_EXP)
        return Fe(self, exp % (self.q - 1))

    def from_value(self, v: int) -> Fe:
        """Element from its packed-integer representation."""
        if not 0 <= v < self.q:
            raise ValueError(f"value {v} outside [0, {self.q})")
        return Fe(self, int(self._exp_of_value[v]))

    def from_int(self, c: int) -> Fe:
        """Image of the integer c under Z -> GF(p) -> GF(p^m)."""
        return self.from_value(c % self.p)

    def elements(self) -> Iterator[Fe]:
        """All q elements: zero first, then theta^0, theta^1, ..."""
        yield self.zero()
        for e in range(self.q - 1):
            yield Fe(self, e)

    # -- exponent-domain scalar arithmetic ------------------------------

    def add_exps(self, ea: int, eb: int) -> int:
        if ea == ZERO_EXP:
            return eb
        if eb == ZERO_EXP:
            return ea
        qm1 = self.q - 1
        z = int(self._zech[(eb - ea) % qm1])
        if z == ZERO_EXP:
            return ZERO_EXP
        return (ea + z) % qm1

    def neg_exp(self, e: int) -> int:
        if e == ZERO_EXP:
            return ZERO_EXP
        return (e + (self.q - 1) // 2) % (self.q - 1)

    def pow_exp(self, e: int, k: int) -> int:
        if e == ZERO_EXP:
            if k == 0:
                return 0  # convention: 0^0 = 1
            if k < 0:
                raise ZeroDivisionError("negative power of zero")
            return ZERO_EXP
        return (e * k) % (self.q - 1)

    # -- character and square root --------------------------------------

    def quadratic_character(self, x: Fe) -> int:
        """+1 on nonzero squares, -1 on non-squares; undefined on zero."""
        if x.is_zero:
            raise ValueError("quadratic character of zero")
        return 1 if x.exp % 2 == 0 else -1

    def sqrt(self, x: Fe) -> Fe:
        """The square root with the smaller exponent; requires eta(x) = +1."""
        if x.is_zero:
            raise ValueError("sqrt of zero")
        if x.exp % 2 != 0:
            raise ValueError("sqrt of a non-square")
        return Fe(self, x.exp // 2)

    # -- vectorized exponent-domain arithmetic --------------------------
    # All of these take int64 arrays of exponents with ZERO_EXP marking
    # zeros, and return the same.

    def v_add(self, ea: np.ndarray, eb: np.ndarray) -> np.ndarray:
        ea = np.asarray(ea, dtype=np.int64)
        eb = np.asarray(eb, dtype=np.int64)
        qm1 = self.q - 1
        za = ea == ZERO_EXP
        zb = eb == ZERO_EXP
        # Force zero slots to a harmless exponent, fix up afterwards.
        sa = np.where(za, 0, ea)
        sb = np.where(zb, 0, eb)
        z = self._zech[(sb - sa) % qm1]
        out = np.where(z == ZERO_EXP, ZERO_EXP, (sa + z) % qm1)
        out = np.where(za, eb, out)
        out = np.where(zb & ~za, ea, out)
        return out

    def v_neg(self, e: np.ndarray) -> np.ndarray:
        e = np.asarray(e, dtype=np.int64)
        qm1 = self.q - 1
        return np.where(e == ZERO_EXP, ZERO_EXP, (e + qm1 // 2) % qm1)

    def v_sub(self, ea: np.ndarray, eb: np.ndarray) -> np.ndarray:
        return self.v_add(ea, self.v_neg(eb))

    def v_mul(self, ea: np.ndarray, eb: np.ndarray) -> np.ndarray:
        ea = np.asarray(ea, dtype=np.int64)
        eb = np.asarray(eb, dtype=np.int64)
        z = (ea == ZERO_EXP) | (eb == ZERO_EXP)
        return np.where(z, ZERO_EXP, (ea + eb) % (self.q - 1))

    def v_inv(self, e: np.ndarray) -> np.ndarray:
        e = np.asarray(e, dtype=np.int64)
        if np.any(e == ZERO_EXP):
            raise ZeroDivisionError("inverse of zero")
        return (-e) % (self.q - 1)

    def v_pow(self, e: np.ndarray, k: int) -> np.ndarray:
        e = np.asarray(e, dtype=np.int64)
        z = e == ZERO_EXP
        if k == 0:
            return np.zeros_like(e)  # x^0 = 1 for every x, zero included
        if k < 0 and np.any(z):
            raise ZeroDivisionError("negative power of zero")
        out = (np.where(z, 0, e) * k) % (self.q - 1)
        return np.where(z, ZERO_EXP, out)

    def v_eta(self, e: np.ndarray) -> np.ndarray:
        e = np.asarray(e, dtype=np.int64)
        if np.any(e == ZERO_EXP):
            raise ValueError("quadratic character of zero")
        return np.where(e % 2 == 0, 1, -1).astype(np.int64)

    def v_sqrt(self, e: np.ndarray) -> np.ndarray:
        e = np.asarray(e, dtype=np.int64)
        if np.any(e == ZERO_EXP) or np.any(e % 2 != 0):
            raise ValueError("sqrt of zero or of a non-square")
        return e // 2

    # -- exponent <-> packed value, vectorized --------------------------

    def v_value(self, e: np.ndarray) -> np.ndarray:
        e = np.asarray(e, dtype=np.int64)
        out = np.zeros_like(e)
        nz = e != ZERO_EXP
        out[nz] = self._value_of_exp[e[nz]]
        return out

    def v_exp(self, values: np.ndarray) -> np.ndarray:
        values = np.asarray(values, dtype=np.int64)
        return self._exp_of_value[values]

    # -- value-domain (packed) addition, vectorized ---------------------
    # Packed values add digit-by-digit mod p; no table needed, so these are
    # the workhorses for bulk pairwise differences.

    def add_values(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        p = self.p
        out = np.zeros(np.broadcast(u, v).shape, dtype=np.int64)
        scale = 1
        for _ in range(self.m):
            out += ((u + v) % p) * scale
            u = u // p      # not //=: asarray may alias the caller's array
            v = v // p
            scale *= p
        return out

    def neg_values(self, u: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=np.int64)
        p = self.p
        out = np.zeros_like(u)
        scale = 1
        for _ in range(self.m):
            out += ((-u) % p) * scale
            u = u // p
            scale *= p
        return out

    def sub_values(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        return self.add_values(u, self.neg_values(v))

    def split_digits(self, values: np.ndarray) -> list[np.ndarray]:
        """Base-p digits of packed values as float64 arrays, lowest first."""
        values = np.asarray(values, dtype=np.int64)
        out = []
        for _ in range(self.m):
            out.append((values % self.p).astype(np.float64))
            values = values // self.p
        return out

    def pack_digits(self, digits: list[np.ndarray]) -> np.ndarray:
        """Inverse of split_digits for already-reduced int64 digits."""
        out = np.zeros_like(digits[0], dtype=np.int64)
        scale = 1
        for d in digits:
            out += d * scale
            scale *= self.p
        return out

    # -- diagnostics ----------------------------------------------------

    def dump(self) -> dict:
        """JSON-ready description of the field construction."""
        return {
            "p": self.p,
            "m": self.m,
            "q": self.q,
            "r": self.r,
            "poly": list(self.poly),
            "theta_value": int(self._theta_value),
        }

    def __repr__(self) -> str:
        return f"FiniteField(p={self.p}, m={self.m}, q={self.q})"


_BUILD_TOKEN = object()


def build_field(p: int, m: int) -> FiniteField:
    """Construct (or fetch from cache) GF(p^m) for odd prime p.

    Raises ValueError for non-prime or even p, m < 1, or p^m > MAX_ORDER.
    """
    key = (p, m)
    cached = _FIELD_CACHE.get(key)
    if cached is not None:
        return cached
    if m < 1:
        raise ValueError(f"extension degree must be >= 1, got {m}")
    if not is_prime(p):
        raise ValueError(f"p = {p} is not prime")
    if p == 2:
        raise ValueError("only odd characteristic is supported")
    if p**m > MAX_ORDER:
        raise ValueError(f"q = {p}^{m} exceeds the ceiling {MAX_ORDER}")
    field = FiniteField(p, m, _token=_BUILD_TOKEN)
    _FIELD_CACHE[key] = field
    return field

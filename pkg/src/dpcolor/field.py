"""Table-driven arithmetic over GF(p^r).

Elements are plain integer indices. For a prime field the index is the
residue itself; for an extension field the index is the coefficient vector
of the element (constant term first) read as a base-p integer, so index 0
is zero, index 1 is one and index p is the class of x.
"""
from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

MAX_ORDER = 1 << 16
# full k x k add/mul tables are only materialised up to this order
TABLE_LIMIT = 1024


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_power(k: int) -> tuple[int, int] | None:
    """Return (p, r) with p**r == k, or None if k is not a prime power."""
    if k < 2:
        return None
    for p in range(2, k + 1):
        if k % p == 0:
            if not is_prime(p):
                return None
            r = 0
            while k % p == 0:
                k //= p
                r += 1
            return (p, r) if k == 1 else None
    return None


def is_prime_power(k: int) -> bool:
    return prime_power(k) is not None


# -- polynomials over the prime field, coefficient lists low-to-high -------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    m = _trim(list(m))
    lead_inv = pow(m[-1], -1, p)
    while len(a) >= len(m):
        coef = a[-1] * lead_inv % p
        shift = len(a) - len(m)
        for i, c in enumerate(m):
            a[shift + i] = (a[shift + i] - coef * c) % p
        _trim(a)
    return a


def _poly_mul(a: list[int], b: list[int], p: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def _monic(p: int, d: int):
    """All monic polynomials of degree d, lexicographic in (c_0, ..., c_{d-1})."""
    for low in itertools.product(range(p), repeat=d):
        yield list(low) + [1]


def is_irreducible(poly: list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    deg = len(poly) - 1
    if deg < 1:
        return False
    if deg == 1:
        return True
    for d in range(1, deg // 2 + 1):
        for q in _monic(p, d):
            if not _poly_mod(poly, q, p):
                return False
    return True


def smallest_irreducible(p: int, r: int) -> tuple[int, ...]:
    for cand in _monic(p, r):
        if is_irreducible(cand, p):
            return tuple(cand)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


class FieldSpec:
    """GF(p^r) with a fixed modulus and canonical element order.

    All operations accept ints or integer numpy arrays of indices.
    """

    def __init__(self, p: int, r: int):
        if not is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if r < 1:
            raise ValueError("extension degree must be >= 1")
        k = p**r
        if k > MAX_ORDER:
            raise ValueError(f"field order {k} exceeds {MAX_ORDER}")
        self.p, self.r, self.k = p, r, k
        self.modulus = smallest_irreducible(p, r)

        powers = p ** np.arange(r, dtype=np.int64)
        self.digits = (np.arange(k, dtype=np.int64)[:, None] // powers) % p
        self._powers = powers

        self.exp, self.log = self._build_log_tables()
        idx = np.arange(k, dtype=np.int64)
        self.neg_table = ((-self.digits) % p) @ powers
        inv = np.zeros(k, dtype=np.int64)
        inv[1:] = self.exp[(-self.log[1:]) % (k - 1)]
        self.inv_table = inv

        self.add_table = self.mul_table = self.sub_table = None
        if k <= TABLE_LIMIT:
            self.add_table = self._add_vec(idx[:, None], idx[None, :])
            self.mul_table = self._mul_vec(idx[:, None], idx[None, :])
            self.sub_table = self.add_table[:, self.neg_table]
        for t in (self.digits, self.exp, self.log, self.neg_table, self.inv_table):
            t.setflags(write=False)

    def __repr__(self) -> str:
        return f"FieldSpec(p={self.p}, r={self.r})"

    @property
    def elements(self) -> range:
        return range(self.k)

    # -- construction helpers ------------------------------------------

    def _to_poly(self, a: int) -> list[int]:
        return [int(c) for c in self.digits[a]]

    def _from_poly(self, coeffs: list[int]) -> int:
        coeffs = list(coeffs) + [0] * (self.r - len(coeffs))
        return sum(int(c) * self.p**i for i, c in enumerate(coeffs[: self.r]))

    def _mul_slow(self, a: int, b: int) -> int:
        prod = _poly_mul(self._to_poly(a), self._to_poly(b), self.p)
        if not prod:
            return 0
        return self._from_poly(_poly_mod(prod, list(self.modulus), self.p))

    def _build_log_tables(self):
        k = self.k
        exp = np.zeros(k - 1, dtype=np.int64)
        log = np.zeros(k, dtype=np.int64)
        if k == 2:
            exp[0] = 1
            return exp, log
        for g in range(2, k):
            x, seen = 1, []
            for _ in range(k - 1):
                seen.append(x)
                x = self._mul_slow(x, g)
                if x == 1:
                    break
            if len(seen) == k - 1:
                exp[:] = seen
                log[exp] = np.arange(k - 1)
                return exp, log
        raise AssertionError("no primitive element")  # pragma: no cover

    def _add_vec(self, a, b):
        return ((self.digits[a] + self.digits[b]) % self.p) @ self._powers

    def _mul_vec(self, a, b):
        a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        out = self.exp[(self.log[a] + self.log[b]) % (self.k - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    # -- arithmetic ------------------------------------------------------

    @staticmethod
    def _ret(x):
        return int(x) if np.ndim(x) == 0 else x

    def add(self, a, b):
        if self.add_table is not None:
            return self._ret(self.add_table[a, b])
        return self._ret(self._add_vec(a, b))

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def neg(self, a):
        return self._ret(self.neg_table[a])

    def mul(self, a, b):
        if self.mul_table is not None:
            return self._ret(self.mul_table[a, b])
        return self._ret(self._mul_vec(a, b))

    def inv(self, a):
        if np.any(np.asarray(a) == 0):
            raise ZeroDivisionError("inverse of zero")
        return self._ret(self.inv_table[a])

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            return 0 if e > 0 else 1
        return int(self.exp[(int(self.log[a]) * e) % (self.k - 1)])

    def element(self, value: int) -> int:
        """Image of an integer under the canonical map Z -> prime subfield."""
        return value % self.p


@lru_cache(maxsize=None)
def make_field(p: int, r: int = 1) -> FieldSpec:
    return FieldSpec(p, r)


def field_of_order(k: int) -> FieldSpec:
    pr = prime_power(k)
    if pr is None:
        raise ValueError(f"{k} is not a prime power")
    return make_field(*pr)

"""Exact arithmetic in small Galois fields GF(p^m) and linear algebra over them.

Field elements are stored as integers ``0 <= v < q`` encoding the coefficient
vector of a polynomial in the residue class ring ``GF(p)[x] / (f)``:
``v = c_0 + c_1 p + ... + c_{m-1} p^{m-1}``.  Every operation goes through
precomputed ``q x q`` tables, which also back the vectorized paths used by the
group algebra code.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

__all__ = [
    "FieldConfigError",
    "FieldDesc",
    "FieldElement",
    "Matrix",
    "REDUCTION_POLYNOMIALS",
    "is_irreducible",
    "kernel",
    "make_field",
    "rank",
]


class FieldConfigError(ValueError):
    """Raised for unsupported (p, m) pairs or malformed field descriptors."""


# Coefficient lists, lowest degree first.  One fixed choice per (p, m) so that
# every downstream count is reproducible.
REDUCTION_POLYNOMIALS: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 1): (0, 1),
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (3, 1): (0, 1),
    (3, 2): (1, 0, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 1, 0, 0, 1),
    (5, 1): (0, 1),
    (5, 2): (2, 0, 1),
    (5, 3): (1, 1, 0, 1),
    (5, 4): (2, 0, 0, 0, 1),
    (7, 1): (0, 1),
    (7, 2): (1, 0, 1),
    (7, 3): (2, 0, 0, 1),
    (7, 4): (1, 1, 0, 0, 1),
}


def _poly_rem(a: list[int], b: tuple[int, ...], p: int) -> list[int]:
    a = list(a)
    lead_inv = pow(b[-1], -1, p)
    while a and a[-1] == 0:
        a.pop()
    while len(a) >= len(b):
        c = a[-1] * lead_inv % p
        shift = len(a) - len(b)
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bi) % p
        while a and a[-1] == 0:
            a.pop()
    return a


def is_irreducible(poly: tuple[int, ...], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    m = len(poly) - 1
    if m < 1:
        return False
    for d in range(1, m // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not _poly_rem(list(poly), tuple(low) + (1,), p):
                return False
    return True


@dataclass(frozen=True)
class FieldDesc:
    """Descriptor of GF(p^m) with a fixed monic reduction polynomial."""

    p: int
    m: int
    reduction_poly: tuple[int, ...]

    def __post_init__(self):
        if self.p < 2 or any(self.p % d == 0 for d in range(2, int(self.p**0.5) + 1)):
            raise FieldConfigError(f"characteristic {self.p} is not prime")
        if self.m < 1:
            raise FieldConfigError("extension degree must be >= 1")
        poly = tuple(int(c) % self.p for c in self.reduction_poly)
        if len(poly) != self.m + 1 or poly[-1] != 1:
            raise FieldConfigError("reduction polynomial must be monic of degree m")
        if not is_irreducible(poly, self.p):
            raise FieldConfigError(f"{poly} is reducible over GF({self.p})")
        object.__setattr__(self, "reduction_poly", poly)

    @property
    def q(self) -> int:
        return self.p**self.m

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.m})" if self.m > 1 else f"GF({self.p})"

    # -- encoding -------------------------------------------------------
    def to_coeffs(self, v: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.m):
            v, r = divmod(v, self.p)
            out.append(r)
        return tuple(out)

    def from_coeffs(self, coeffs) -> int:
        v = 0
        for c in reversed(list(coeffs)):
            v = v * self.p + int(c) % self.p
        return v

    # -- tables ---------------------------------------------------------
    @cached_property
    def add_table(self) -> np.ndarray:
        q, p = self.q, self.p
        digits = np.array([self.to_coeffs(v) for v in range(q)], dtype=np.int64)
        s = (digits[:, None, :] + digits[None, :, :]) % p
        weights = p ** np.arange(self.m, dtype=np.int64)
        return (s * weights).sum(axis=-1).astype(np.int64)

    @cached_property
    def mul_table(self) -> np.ndarray:
        q, p, m = self.q, self.p, self.m
        table = np.zeros((q, q), dtype=np.int64)
        for a in range(q):
            ca = self.to_coeffs(a)
            for b in range(a, q):
                cb = self.to_coeffs(b)
                prod = [0] * (2 * m - 1)
                for i, x in enumerate(ca):
                    if x:
                        for j, y in enumerate(cb):
                            prod[i + j] = (prod[i + j] + x * y) % p
                r = _poly_rem(prod, self.reduction_poly, p) if m > 1 else [prod[0] % p]
                table[a, b] = table[b, a] = self.from_coeffs(r + [0] * (m - len(r)))
        return table

    @cached_property
    def neg_table(self) -> np.ndarray:
        return np.argmin(self.add_table, axis=1).astype(np.int64)

    @cached_property
    def inv_table(self) -> np.ndarray:
        """inv_table[0] is 0 as a sentinel; callers must reject zero."""
        inv = np.zeros(self.q, dtype=np.int64)
        rows, cols = np.nonzero(self.mul_table == 1)
        inv[rows] = cols
        return inv

    @cached_property
    def frobenius_table(self) -> np.ndarray:
        return np.array([self.power(v, self.p) for v in range(self.q)], dtype=np.int64)

    # -- scalar operations on encoded values ------------------------------
    def add(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def sub(self, a: int, b: int) -> int:
        return int(self.add_table[a, self.neg_table[b]])

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def neg(self, a: int) -> int:
        return int(self.neg_table[a])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError(f"zero has no inverse in {self!r}")
        return int(self.inv_table[a])

    def power(self, a: int, e: int) -> int:
        if e < 0:
            return self.power(self.inv(a), -e)
        result, base = 1, a
        while e:
            if e & 1:
                result = int(self.mul_table[result, base])
            base = int(self.mul_table[base, base])
            e >>= 1
        return result

    def __call__(self, value) -> FieldElement:
        if isinstance(value, FieldElement):
            value = value.value
        if isinstance(value, (tuple, list)):
            value = self.from_coeffs(value)
        value = int(value)
        if not 0 <= value < self.q:
            raise ValueError(f"{value} is not an encoded element of {self!r}")
        return FieldElement(self, value)

    def elements(self) -> list[FieldElement]:
        return [FieldElement(self, v) for v in range(self.q)]

    @property
    def zero(self) -> FieldElement:
        return FieldElement(self, 0)

    @property
    def one(self) -> FieldElement:
        return FieldElement(self, 1)

    @property
    def x(self) -> FieldElement:
        """Class of the indeterminate (the prime-field element 0 when m == 1)."""
        return FieldElement(self, self.p % self.q if self.m > 1 else 0)


def make_field(p: int, m: int = 1) -> FieldDesc:
    """Return GF(p^m) with the built-in reduction polynomial."""
    try:
        poly = REDUCTION_POLYNOMIALS[(p, m)]
    except KeyError:
        raise FieldConfigError(
            f"unsupported field GF({p}^{m}); supported: p in {{2,3,5,7}}, 1 <= m <= 4"
        ) from None
    return FieldDesc(p, m, poly)


@dataclass(frozen=True)
class FieldElement:
    field: FieldDesc
    value: int

    def _check(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError(f"field mismatch: {self.field!r} vs {other.field!r}")
            return other.value
        if isinstance(other, int):
            return other % self.field.p
        return NotImplemented

    def __add__(self, other):
        b = self._check(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.add(self.value, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._check(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.sub(self.value, b))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        b = self._check(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.mul(self.value, b))

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __truediv__(self, other):
        b = self._check(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.mul(self.value, self.field.inv(b)))

    def inverse(self) -> FieldElement:
        return FieldElement(self.field, self.field.inv(self.value))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.power(self.value, e))

    def __bool__(self) -> bool:
        return self.value != 0

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.to_coeffs(self.value)

    def __repr__(self) -> str:
        if self.field.m == 1:
            return str(self.value)
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                mono = "1" if i == 0 else ("x" if i == 1 else f"x^{i}")
                terms.append(mono if c == 1 and i else f"{c}{'' if i == 0 else '*' + mono}")
        return "+".join(reversed(terms)) or "0"


def _as_int_array(field: FieldDesc, entries) -> np.ndarray:
    rows = [[e.value if isinstance(e, FieldElement) else int(e) for e in row] for row in entries]
    arr = np.array(rows, dtype=np.int64).reshape(len(rows), -1 if rows else 0)
    if arr.size and (arr.min() < 0 or arr.max() >= field.q):
        raise ValueError("matrix entries are not encoded elements of the field")
    return arr


def _row_reduce(field: FieldDesc, a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over ``field``; returns (matrix, pivot columns)."""
    a = np.array(a, dtype=np.int64, copy=True)
    add, mul, neg, inv = field.add_table, field.mul_table, field.neg_table, field.inv_table
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            a[[r, k]] = a[[k, r]]
        a[r] = mul[inv[a[r, c]], a[r]]
        for i in np.nonzero(a[:, c])[0]:
            if i != r:
                a[i] = add[a[i], mul[neg[a[i, c]], a[r]]]
        pivots.append(c)
        r += 1
    return a, pivots


def rank(field: FieldDesc, entries) -> int:
    a = _as_int_array(field, entries)
    if a.size == 0:
        return 0
    return len(_row_reduce(field, a)[1])


def kernel(field: FieldDesc, entries) -> list[np.ndarray]:
    """Basis of the right null space ``{v : M v = 0}`` by Gauss-Jordan elimination."""
    a = _as_int_array(field, entries)
    rows, cols = a.shape
    if rows == 0:
        return [np.eye(cols, dtype=np.int64)[i] for i in range(cols)]
    red, pivots = _row_reduce(field, a)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = np.zeros(cols, dtype=np.int64)
        v[f] = 1
        for r, pc in enumerate(pivots):
            v[pc] = field.neg_table[red[r, f]]
        basis.append(v)
    return basis


@dataclass(frozen=True)
class Matrix:
    """Dense matrix over a small field, entries held as encoded integers."""

    field: FieldDesc
    entries: np.ndarray

    @classmethod
    def from_rows(cls, field: FieldDesc, rows) -> Matrix:
        return cls(field, _as_int_array(field, rows))

    @classmethod
    def identity(cls, field: FieldDesc, n: int) -> Matrix:
        return cls(field, np.eye(n, dtype=np.int64))

    @classmethod
    def zeros(cls, field: FieldDesc, rows: int, cols: int) -> Matrix:
        return cls(field, np.zeros((rows, cols), dtype=np.int64))

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    def __matmul__(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=np.int64)
        add, mul = self.field.add_table, self.field.mul_table
        prods = mul[self.entries, v[None, :]]
        out = np.zeros(self.entries.shape[0], dtype=np.int64)
        for j in range(prods.shape[1]):
            out = add[out, prods[:, j]]
        return out

    def rank(self) -> int:
        return rank(self.field, self.entries)

    def kernel(self) -> list[np.ndarray]:
        return kernel(self.field, self.entries)

"""The group algebra FG over a small finite field.

Elements are coefficient vectors indexed by the elements of a
:class:`~unitary_forge.groups.GroupTable`.  Besides the value type
:class:`AlgebraElement`, every algebra has a *key* encoding
``key = sum_k c_k q^k`` (``c_k`` the encoded coefficient of group element k)
used by the vectorized routines.  Over GF(2) the key is exactly the packed
bit word with bit k holding the coefficient of element k, and products are
computed by XOR-accumulating precomputed bit permutations.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .finite_field import FieldDesc, FieldElement, kernel
from .groups import GroupTable

__all__ = ["AlgebraElement", "GroupAlgebra", "CapacityError"]


class CapacityError(RuntimeError):
    """An enumeration or encoding exceeds the supported size bound."""


class GroupAlgebra:
    """FG with both a scalar element API and vectorized key arithmetic."""

    def __init__(self, field: FieldDesc, group: GroupTable):
        self.field = field
        self.group = group
        self.n = group.size
        self.q = field.q
        if self.q ** self.n >= 2**63:
            raise CapacityError(f"|F|^|G| = {self.q}^{self.n} does not fit a 63-bit key")
        self.packed = self.q == 2
        self.weights = self.q ** np.arange(self.n, dtype=np.int64)
        g = group.mul_table
        # left[g, k] = index of g*k; ldiv[g, k] = index of g^-1 * k
        self._ldiv = g[group.inv_table[:, None], np.arange(self.n)[None, :]]

    def __repr__(self) -> str:
        return f"{self.field!r}[{self.group.name}]"

    def __eq__(self, other) -> bool:
        return isinstance(other, GroupAlgebra) and other.field == self.field and other.group is self.group

    def __hash__(self) -> int:
        return hash((self.field, id(self.group)))

    # -- scalar element API ---------------------------------------------
    def element(self, coeffs) -> AlgebraElement:
        if isinstance(coeffs, dict):
            vec = [0] * self.n
            for k, c in coeffs.items():
                vec[int(k)] = c.value if isinstance(c, FieldElement) else int(c)
            coeffs = vec
        vals = tuple(c.value if isinstance(c, FieldElement) else int(c) for c in coeffs)
        if len(vals) != self.n or any(not 0 <= v < self.q for v in vals):
            raise ValueError("coefficients must be |G| encoded field elements")
        return AlgebraElement(self, vals)

    def embed(self, g: int) -> AlgebraElement:
        vec = [0] * self.n
        vec[int(g)] = 1
        return AlgebraElement(self, tuple(vec))

    @property
    def zero(self) -> AlgebraElement:
        return AlgebraElement(self, (0,) * self.n)

    @property
    def one(self) -> AlgebraElement:
        return self.embed(0)

    def from_key(self, key: int) -> AlgebraElement:
        return AlgebraElement(self, tuple(int(c) for c in self.decode(np.array([key]))[0]))

    def sum_of(self, terms) -> AlgebraElement:
        """Sum of group elements or (scalar, group element) pairs."""
        out = self.zero
        for t in terms:
            if isinstance(t, tuple):
                c, g = t
                out = out + self.embed(g).scale(c)
            else:
                out = out + self.embed(t)
        return out

    # -- key encoding ---------------------------------------------------------
    def encode(self, rows) -> np.ndarray:
        rows = np.asarray(rows, dtype=np.int64)
        return rows @ self.weights

    def decode(self, keys) -> np.ndarray:
        keys = np.atleast_1d(np.asarray(keys, dtype=np.int64))
        if self.packed:
            return ((keys[:, None] >> np.arange(self.n, dtype=np.int64)[None, :]) & 1).astype(np.int64)
        out = np.empty((len(keys), self.n), dtype=np.int64)
        k = keys.copy()
        for i in range(self.n):
            k, out[:, i] = np.divmod(k, self.q)
        return out

    @property
    def identity_key(self) -> int:
        return 1

    # -- vectorized arithmetic on rows ---------------------------------------
    def mul_rows(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Generic product of coefficient rows (broadcast over the leading axis)."""
        x, y = np.broadcast_arrays(np.asarray(x, dtype=np.int64), np.asarray(y, dtype=np.int64))
        f = self.field
        out = np.zeros(x.shape, dtype=np.int64)
        prime = f.m == 1
        for g in range(self.n):
            xg = x[:, g]
            if not xg.any():
                continue
            # (x y)_k = sum_g x_g * y_{g^-1 k}
            shifted = y[:, self._ldiv[g]]
            if prime:
                out += xg[:, None] * shifted
            else:
                out = f.add_table[out, f.mul_table[xg[:, None], shifted]]
        if prime:
            out %= f.p
        return out

    def star_rows(self, x: np.ndarray) -> np.ndarray:
        return np.asarray(x)[:, self.group.inv_table]

    # -- packed GF(2) tables ---------------------------------------------
    @cached_property
    def _nbytes(self) -> int:
        return (self.n + 7) // 8

    def _perm_byte_tables(self, perms: np.ndarray) -> np.ndarray:
        """tables[r, b, v] = image under permutation r of the byte v placed at byte b."""
        nb = self._nbytes
        vals = np.arange(256, dtype=np.int64)
        bits = (vals[:, None] >> np.arange(8)[None, :]) & 1
        tables = np.zeros((len(perms), nb, 256), dtype=np.int64)
        for b in range(nb):
            for j in range(8):
                k = 8 * b + j
                if k >= self.n:
                    break
                tables[:, b, :] |= bits[None, :, j] << perms[:, k][:, None]
        return tables

    @cached_property
    def _left_tables(self) -> np.ndarray:
        return self._perm_byte_tables(self.group.mul_table)

    @cached_property
    def _star_table(self) -> np.ndarray:
        return self._perm_byte_tables(self.group.inv_table[None, :])[0]

    def _apply(self, tables: np.ndarray, words: np.ndarray) -> np.ndarray:
        out = np.zeros_like(words)
        for b in range(self._nbytes):
            out ^= tables[b][(words >> (8 * b)) & 0xFF]
        return out

    def left_mul_group_keys(self, g: int, keys) -> np.ndarray:
        """Keys of g * y for a fixed group element g."""
        keys = np.asarray(keys, dtype=np.int64)
        if self.packed:
            return self._apply(self._left_tables[g], keys)
        rows = self.decode(keys)
        out = np.empty_like(rows)
        out[:, self.group.mul_table[g]] = rows
        return self.encode(out)

    # -- vectorized arithmetic on keys --------------------------------------
    def mul_keys(self, x, y) -> np.ndarray:
        x, y = np.broadcast_arrays(np.atleast_1d(np.asarray(x, dtype=np.int64)),
                                   np.atleast_1d(np.asarray(y, dtype=np.int64)))
        if not self.packed:
            return self.mul_keys_generic(x, y)
        out = np.zeros(x.shape, dtype=np.int64)
        if x.size and np.all(x == x.flat[0]):
            # constant left factor: only its support contributes
            w = int(x.flat[0])
            for g in range(self.n):
                if (w >> g) & 1:
                    out ^= self._apply(self._left_tables[g], y)
            return out
        for g in range(self.n):
            bit = (x >> g) & 1
            if not bit.any():
                continue
            out ^= self._apply(self._left_tables[g], y) & -bit
        return out

    def mul_keys_generic(self, x, y) -> np.ndarray:
        x, y = np.broadcast_arrays(np.atleast_1d(np.asarray(x, dtype=np.int64)),
                                   np.atleast_1d(np.asarray(y, dtype=np.int64)))
        return self.encode(self.mul_rows(self.decode(x.ravel()), self.decode(y.ravel()))).reshape(x.shape)

    def star_keys(self, x) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=np.int64))
        if self.packed:
            return self._apply(self._star_table, x)
        return self.encode(self.star_rows(self.decode(x)))

    def add_keys(self, x, y) -> np.ndarray:
        if self.packed:
            return np.asarray(x, dtype=np.int64) ^ np.asarray(y, dtype=np.int64)
        f = self.field
        return self.encode(f.add_table[self.decode(x), self.decode(y)])

    def augmentation_keys(self, x) -> np.ndarray:
        rows = self.decode(x)
        f = self.field
        if f.m == 1:
            return rows.sum(axis=1) % f.p
        acc = np.zeros(len(rows), dtype=np.int64)
        for i in range(self.n):
            acc = f.add_table[acc, rows[:, i]]
        return acc

    def power_keys(self, x, k: int) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=np.int64))
        out = np.full_like(x, self.identity_key)
        base = x
        while k:
            if k & 1:
                out = self.mul_keys(out, base)
            k >>= 1
            if k:
                base = self.mul_keys(base, base)
        return out

    def inverse_keys(self, x) -> np.ndarray:
        """Inverses of normalized units as x^(p^k - 1) with p^k >= |G|."""
        # (x - 1)^(p^k) = x^(p^k) - 1 and the augmentation ideal is nilpotent of index <= |G|
        pk = 1
        while pk < self.n:
            pk *= self.field.p
        return self.power_keys(x, pk - 1)

    def random_keys(self, rng: np.random.Generator, size: int, normalized: bool = False) -> np.ndarray:
        rows = rng.integers(0, self.q, size=(size, self.n))
        if normalized:
            f = self.field
            rows[:, 0] = 0
            aug = self.augmentation_keys(self.encode(rows))
            # c_0 = 1 - (sum of the others)
            rows[:, 0] = f.add_table[1, f.neg_table[aug]]
        return self.encode(rows)

    # -- structure ----------------------------------------------------------
    def multiplication_matrix(self, x: AlgebraElement) -> np.ndarray:
        """Matrix of y -> x y in the group basis (columns are images of basis elements)."""
        m = np.zeros((self.n, self.n), dtype=np.int64)
        for h in range(self.n):
            m[:, h] = np.asarray(x.coeffs)[self.group.mul_table[np.arange(self.n), self.group.inv_table[h]]]
        return m

    def annihilator_dim(self, x: AlgebraElement) -> int:
        """dim_F {y : x y = 0}."""
        return len(kernel(self.field, self.multiplication_matrix(x)))

    def cyclic_parameters(self) -> int:
        """n with G cyclic of order 2^n, labelled so that element k is a^k."""
        g = self.group
        if g.family != "cyclic" or g.size < 4 or g.size & (g.size - 1):
            raise ValueError(f"{g.name} is not a cyclic group of order 2^n with n >= 2")
        if not all(int(g.mul_table[1, k]) == (k + 1) % g.size for k in range(g.size)):
            raise ValueError("cyclic group is not in power normal form")
        return g.size.bit_length() - 1

    @cached_property
    def tilde_perm(self) -> np.ndarray:
        n = self.cyclic_parameters()
        N = 2**n
        k = np.arange(N)
        return (k * (1 + N // 2)) % N


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    algebra: GroupAlgebra
    coeffs: tuple[int, ...]

    def _same(self, other: AlgebraElement) -> AlgebraElement:
        if not isinstance(other, AlgebraElement):
            raise TypeError(f"cannot combine algebra element with {type(other).__name__}")
        if other.algebra != self.algebra:
            raise ValueError(f"elements of {self.algebra!r} and {other.algebra!r} do not mix")
        return other

    def __eq__(self, other) -> bool:
        return isinstance(other, AlgebraElement) and other.algebra == self.algebra and other.coeffs == self.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    @property
    def key(self) -> int:
        return int(self.algebra.encode(np.array(self.coeffs)))

    def _rows(self) -> np.ndarray:
        return np.array([self.coeffs], dtype=np.int64)

    def _wrap(self, row) -> AlgebraElement:
        return AlgebraElement(self.algebra, tuple(int(c) for c in np.asarray(row).ravel()))

    def __add__(self, other) -> AlgebraElement:
        other = self._same(other)
        f = self.algebra.field
        return self._wrap(f.add_table[np.array(self.coeffs), np.array(other.coeffs)])

    def __neg__(self) -> AlgebraElement:
        return self._wrap(self.algebra.field.neg_table[np.array(self.coeffs)])

    def __sub__(self, other) -> AlgebraElement:
        return self + (-self._same(other))

    def __mul__(self, other) -> AlgebraElement:
        if isinstance(other, (FieldElement, int)):
            return self.scale(other)
        other = self._same(other)
        return self._wrap(self.algebra.mul_rows(self._rows(), other._rows()))

    def __rmul__(self, other) -> AlgebraElement:
        if isinstance(other, (FieldElement, int)):
            return self.scale(other)
        return NotImplemented

    def scale(self, c) -> AlgebraElement:
        f = self.algebra.field
        v = c.value if isinstance(c, FieldElement) else int(c) % f.p
        return self._wrap(f.mul_table[v, np.array(self.coeffs)])

    def __pow__(self, k: int) -> AlgebraElement:
        if k < 0:
            return self.unit_inverse() ** (-k)
        out, base = self.algebra.one, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def augmentation(self) -> FieldElement:
        f = self.algebra.field
        acc = 0
        for c in self.coeffs:
            acc = f.add(acc, c)
        return FieldElement(f, acc)

    def star(self) -> AlgebraElement:
        """Classical involution: the coefficient of g moves to g^-1."""
        return self._wrap(np.array(self.coeffs)[self.algebra.group.inv_table])

    def tilde(self) -> AlgebraElement:
        """Automorphism of FC_{2^n} induced by a -> a^(1 + 2^(n-1))."""
        perm = self.algebra.tilde_perm
        out = np.zeros(self.algebra.n, dtype=np.int64)
        out[perm] = self.coeffs
        return self._wrap(out)

    def multiplicative_order(self, bound: int | None = None) -> int:
        bound = bound or self.algebra.q ** self.algebra.n
        one = self.algebra.one
        cur, k = self, 1
        while cur != one:
            cur = cur * self
            k += 1
            if k > bound:
                raise ValueError("element is not a unit")
        return k

    def unit_inverse(self) -> AlgebraElement:
        """x^(ord(x) - 1) for a normalized unit x."""
        if self.augmentation().value != 1:
            raise ValueError("unit_inverse needs an element of augmentation 1")
        return self ** (self.multiplicative_order() - 1)

    def support(self) -> list[int]:
        return [i for i, c in enumerate(self.coeffs) if c]

    def __repr__(self) -> str:
        f = self.algebra.field
        labels = self.algebra.group.labels
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                coef = "" if c == 1 else f"({FieldElement(f, c)!r})"
                terms.append(f"{coef}{labels[i]}")
        return " + ".join(terms) or "0"

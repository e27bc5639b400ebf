"""Finite groups as Cayley tables.

Families are realized through hand-written normal-form multiplication and then
compiled into a table; the defining relations are re-checked on the compiled
table.  Index 0 is always the identity.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .blackbox import BlackBoxGroup

__all__ = [
    "GroupTable",
    "GROUP_NAMES",
    "abelian_group",
    "abelian_groups",
    "c4_semidirect_c4",
    "catalog",
    "central_product_d8_c4",
    "cyclic",
    "dihedral",
    "direct_product",
    "g44",
    "m16",
    "parse_group",
    "partitions",
    "quaternion",
    "quotient_by_central",
    "semidihedral",
]


@dataclass(eq=False)
class GroupTable(BlackBoxGroup):
    name: str
    mul_table: np.ndarray
    labels: list[str]
    generators: list[int]
    family: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        self.mul_table = np.asarray(self.mul_table, dtype=np.int64)
        n = self.mul_table.shape[0]
        self.inv_table = np.argmin(self.mul_table, axis=1).astype(np.int64)
        self.identity = 0
        self.elements = np.arange(n, dtype=np.int64)
        self._validate()

    @property
    def size(self) -> int:
        return self.mul_table.shape[0]

    def __len__(self) -> int:
        return self.size

    def __repr__(self) -> str:
        return f"GroupTable({self.name}, order={self.size})"

    # BlackBoxGroup interface
    def mul(self, x, y):
        return self.mul_table[x, y]

    def inv(self, x):
        return self.inv_table[x]

    @property
    def p(self) -> int:
        n = self.size
        for d in range(2, n + 1):
            if n % d == 0:
                while n % d == 0:
                    n //= d
                return d if n == 1 else 1
        return 1

    def _validate(self) -> None:
        t = self.mul_table
        n = t.shape[0]
        if t.shape != (n, n):
            raise ValueError("multiplication table must be square")
        expect = np.arange(n)
        if not (np.array_equal(t[0], expect) and np.array_equal(t[:, 0], expect)):
            raise ValueError(f"{self.name}: index 0 is not a two-sided identity")
        srt = np.sort(t, axis=1)
        if not (np.all(srt == expect) and np.all(np.sort(t, axis=0) == expect[:, None])):
            raise ValueError(f"{self.name}: table is not a Latin square")
        if not np.all(t[expect, self.inv_table] == 0):
            raise ValueError(f"{self.name}: inverse table inconsistent")
        if n <= 64:
            # (xy)z == x(yz) for all triples
            left = t[t[:, :, None], expect[None, None, :]]
            right = t[expect[:, None, None], t[None, :, :]]
            if not np.array_equal(left, right):
                raise ValueError(f"{self.name}: multiplication is not associative")
        else:
            gens = self.generators or list(range(n))
            for g in gens:
                for h in gens:
                    if not np.array_equal(t[t[:, g], h], t[:, t[g, h]]):
                        raise ValueError(f"{self.name}: associativity spot check failed")

    # helpers on single elements
    def power(self, g: int, k: int) -> int:
        out, base = 0, int(g)
        if k < 0:
            base, k = int(self.inv_table[g]), -k
        while k:
            if k & 1:
                out = int(self.mul_table[out, base])
            base = int(self.mul_table[base, base])
            k >>= 1
        return out

    def word(self, *factors: tuple[int, int]) -> int:
        """Evaluate a word given as (element, exponent) pairs."""
        out = 0
        for g, k in factors:
            out = int(self.mul_table[out, self.power(g, k)])
        return out

    def commutator(self, x: int, y: int) -> int:
        """(x, y) = x^-1 y^-1 x y."""
        return self.word((x, -1), (y, -1), (x, 1), (y, 1))

    def index_of(self, label: str) -> int:
        return self.labels.index(label)

    def relabel(self, perm: Sequence[int]) -> GroupTable:
        """Isomorphic copy with element i renamed to perm[i] (perm[0] must be 0)."""
        perm = np.asarray(perm, dtype=np.int64)
        if perm[0] != 0:
            raise ValueError("relabelling must fix the identity")
        inv = np.empty_like(perm)
        inv[perm] = np.arange(len(perm))
        table = perm[self.mul_table[inv[:, None], inv[None, :]]]
        labels = [self.labels[i] for i in inv]
        return GroupTable(
            self.name, table, labels, [int(perm[g]) for g in self.generators], self.family, dict(self.params)
        )


def _compile(
    name: str,
    forms: list,
    mul: Callable,
    labels: Callable,
    gens: list,
    family: str,
    params: dict | None = None,
) -> GroupTable:
    index = {f: i for i, f in enumerate(forms)}
    n = len(forms)
    table = np.empty((n, n), dtype=np.int64)
    for i, x in enumerate(forms):
        for j, y in enumerate(forms):
            table[i, j] = index[mul(x, y)]
    return GroupTable(name, table, [labels(f) for f in forms], [index[g] for g in gens], family, params or {})


def _mono(sym: str, k: int) -> str:
    return "" if k == 0 else (sym if k == 1 else f"{sym}^{k}")


def _ab_label(i: int, j: int, k: int = 0) -> str:
    s = _mono("a", i) + _mono("b", j) + _mono("c", k)
    return s or "1"


def metacyclic(name: str, n_a: int, n_b: int, s: int, t: int, family: str, params=None) -> GroupTable:
    """<a, b | a^n_a = 1, b^n_b = a^t, b a b^-1 = a^s> in normal form a^i b^j.

    Requires s^2 = 1 mod n_a (so b^-1 a b = a^s as well) and s t = t mod n_a.
    """
    if (s * s) % n_a != 1 % n_a or (s * t - t) % n_a:
        raise ValueError("inconsistent metacyclic parameters")
    forms = [(i, j) for j in range(n_b) for i in range(n_a)]

    def mul(x, y):
        i, j = x
        k, l = y
        e = i + k * pow(s, j, n_a)
        jj = j + l
        if jj >= n_b:
            jj -= n_b
            e += t
        return (e % n_a, jj)

    return _compile(name, forms, mul, lambda f: _ab_label(*f), [(1, 0), (0, 1)], family, params)


# -- families ------------------------------------------------------------

def cyclic(n: int) -> GroupTable:
    if n < 1:
        raise ValueError("cyclic group order must be >= 1")
    forms = list(range(n))
    g = _compile(f"C{n}", forms, lambda x, y: (x + y) % n, lambda f: _mono("a", f) or "1",
                 [1 % n] if n > 1 else [], "cyclic", {"n": n})
    return g


def _check_relations(g: GroupTable, relations: list[tuple[list[tuple[int, int]], list[tuple[int, int]]]]) -> None:
    for lhs, rhs in relations:
        if g.word(*lhs) != g.word(*rhs):
            raise AssertionError(f"{g.name}: relation {lhs} = {rhs} fails")


def dihedral(n: int) -> GroupTable:
    """Dihedral group of order 2^(n+1): a^(2^n) = b^2 = 1, (a, b) = a^-2."""
    if n < 2:
        raise ValueError("dihedral family needs n >= 2")
    N = 2**n
    g = metacyclic(f"D{2 * N}", N, 2, N - 1, 0, "dihedral", {"n": n})
    a, b = g.generators
    _check_relations(g, [([(a, N)], []), ([(b, 2)], []), ([(a, -1), (b, -1), (a, 1), (b, 1)], [(a, -2)])])
    return g


def quaternion(n: int) -> GroupTable:
    """Generalized quaternion group of order 2^(n+1): b^2 = a^(2^(n-1)), (a, b) = a^-2."""
    if n < 2:
        raise ValueError("quaternion family needs n >= 2")
    N = 2**n
    g = metacyclic(f"Q{2 * N}", N, 2, N - 1, N // 2, "quaternion", {"n": n})
    a, b = g.generators
    _check_relations(g, [([(a, N)], []), ([(b, 2)], [(a, N // 2)]), ([(a, -1), (b, -1), (a, 1), (b, 1)], [(a, -2)])])
    return g


def semidihedral(n: int) -> GroupTable:
    """Semidihedral group of order 2^(n+1): b^2 = 1, (a, b) = a^(-2 + 2^(n-1))."""
    if n < 3:
        raise ValueError("semidihedral family needs n >= 3")
    N = 2**n
    g = metacyclic(f"SD{2 * N}", N, 2, N // 2 - 1, 0, "semidihedral", {"n": n})
    a, b = g.generators
    _check_relations(g, [([(a, N)], []), ([(b, 2)], []), ([(a, -1), (b, -1), (a, 1), (b, 1)], [(a, -2 + N // 2)])])
    return g


def m16() -> GroupTable:
    """Modular group of order 16: a^8 = b^2 = 1, (a, b) = a^4."""
    g = metacyclic("M16", 8, 2, 5, 0, "M16")
    a, b = g.generators
    _check_relations(g, [([(a, 8)], []), ([(b, 2)], []), ([(a, -1), (b, -1), (a, 1), (b, 1)], [(a, 4)])])
    return g


def c4_semidirect_c4() -> GroupTable:
    """<a> x| <b> with a^4 = b^4 = 1 and b inverting a."""
    g = metacyclic("C4sC4", 4, 4, 3, 0, "C4sC4")
    a, b = g.generators
    _check_relations(g, [([(a, 4)], []), ([(b, 4)], []), ([(b, -1), (a, 1), (b, 1)], [(a, -1)])])
    return g


def g44() -> GroupTable:
    """G(4,4) = <a, b, c | a^4 = b^2 = c^2 = 1, (a, b) = 1, (a, c) = b, (b, c) = 1>."""
    forms = [(i, j, k) for k in range(2) for j in range(2) for i in range(4)]

    def mul(x, y):
        i, j, k = x
        i2, j2, k2 = y
        # c a^i' = a^i' b^i' c
        return ((i + i2) % 4, (j + j2 + k * i2) % 2, (k + k2) % 2)

    g = _compile("G44", forms, mul, lambda f: _ab_label(*f), [(1, 0, 0), (0, 1, 0), (0, 0, 1)], "G44")
    a, b, c = g.generators
    _check_relations(g, [
        ([(a, 4)], []), ([(b, 2)], []), ([(c, 2)], []),
        ([(a, -1), (b, -1), (a, 1), (b, 1)], []),
        ([(a, -1), (c, -1), (a, 1), (c, 1)], [(b, 1)]),
        ([(b, -1), (c, -1), (b, 1), (c, 1)], []),
    ])
    return g


def direct_product(g: GroupTable, h: GroupTable, name: str | None = None) -> GroupTable:
    m, n = g.size, h.size
    # element (x, y) -> index x * n + y keeps the identity at 0
    gx = np.arange(m)[:, None, None, None]
    gy = np.arange(n)[None, :, None, None]
    hx = np.arange(m)[None, None, :, None]
    hy = np.arange(n)[None, None, None, :]
    table = (g.mul_table[gx, hx] * n + h.mul_table[gy, hy]).reshape(m * n, m * n)
    labels = [f"({lx},{ly})" for lx in g.labels for ly in h.labels]
    gens = [x * n for x in g.generators] + list(h.generators)
    return GroupTable(
        name or f"{g.name}x{h.name}", table, labels, gens, "product", {"factors": (g.name, h.name)}
    )


def quotient_by_central(g: GroupTable, z: Sequence[int], name: str | None = None) -> GroupTable:
    """G / Z for a central subgroup Z (given as element indices)."""
    z = sorted(set(int(x) for x in z))
    zs = set(z)
    if 0 not in zs or any(int(g.mul_table[x, y]) not in zs for x in z for y in z):
        raise ValueError("Z is not a subgroup")
    for x in z:
        if not np.array_equal(g.mul_table[x, :], g.mul_table[:, x]):
            raise ValueError("Z is not central")
    rep = np.full(g.size, -1, dtype=np.int64)
    reps = []
    for x in range(g.size):
        if rep[x] < 0:
            coset = g.mul_table[x, z]
            rep[coset] = len(reps)
            reps.append(int(coset.min()))
    k = len(reps)
    table = np.empty((k, k), dtype=np.int64)
    for i, x in enumerate(reps):
        table[i] = rep[g.mul_table[x, reps]]
    gens = sorted(set(int(rep[s]) for s in g.generators) - {0})
    return GroupTable(
        name or f"{g.name}/Z{len(z)}", table, [g.labels[r] for r in reps], gens, "quotient", {"parent": g.name}
    )


def central_product_d8_c4() -> GroupTable:
    """D8 Y C4: D8 x C4 with the central involutions a^2 and c^2 identified."""
    d8, c4 = dihedral(2), cyclic(4)
    prod = direct_product(d8, c4)
    a2 = d8.power(d8.generators[0], 2)
    c2 = c4.power(c4.generators[0], 2)
    g = quotient_by_central(prod, [0, a2 * c4.size + c2], name="D8YC4")
    g.family = "D8YC4"
    return g


def partitions(n: int, max_part: int | None = None):
    """Partitions of n as non-increasing tuples."""
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    for k in range(min(n, max_part), 0, -1):
        for rest in partitions(n - k, k):
            yield (k,) + rest


def _cyclic_name(orders: Sequence[int]) -> str:
    parts = sorted(orders)
    out = []
    for o, grp in itertools.groupby(parts):
        cnt = len(list(grp))
        out.append(f"C{o}" if cnt == 1 else f"C{o}^{cnt}")
    return "x".join(out) if out else "C1"


def abelian_group(orders: Sequence[int], name: str | None = None) -> GroupTable:
    """Direct product of cyclic groups of the given orders."""
    orders = sorted(int(o) for o in orders)
    if not orders:
        return cyclic(1)
    g = cyclic(orders[0])
    for o in orders[1:]:
        g = direct_product(g, cyclic(o))
    g.name = name or _cyclic_name(orders)
    g.family = "cyclic" if len(orders) == 1 else "abelian"
    g.params = {"invariants": tuple(orders)}
    return g


def abelian_groups(p: int, order: int) -> list[GroupTable]:
    """Every abelian group of the prime-power order, one per partition."""
    e, o = 0, order
    while o % p == 0:
        o //= p
        e += 1
    if o != 1:
        raise ValueError(f"{order} is not a power of {p}")
    return [abelian_group([p**k for k in part]) for part in partitions(e)]


def _maximal_class(order: int) -> list[GroupTable]:
    n = order.bit_length() - 2
    out = []
    if n >= 2:
        out += [dihedral(n), quaternion(n)]
    if n >= 3:
        out.append(semidihedral(n))
    return out


def _nonabelian(order: int) -> list[GroupTable]:
    if order <= 4:
        return []
    if order == 8:
        return [dihedral(2), quaternion(2)]
    if order == 16:
        q8c2 = direct_product(quaternion(2), cyclic(2), name="Q8xC2")
        d8c2 = direct_product(dihedral(2), cyclic(2), name="D8xC2")
        return [q8c2, m16(), quaternion(3), c4_semidirect_c4(), semidihedral(3),
                central_product_d8_c4(), dihedral(3), g44(), d8c2]
    raise ValueError(f"nonabelian groups of order {order} are not catalogued")


CATALOG_ORDERS = (2, 3, 4, 8, 9, 16, 27, 32)
CATALOG_FILTERS = ("abelian", "nonabelian", "maximal-class", "all")


def catalog(order: int, filter: str = "all") -> list[GroupTable]:
    """Groups of a supported order, in a fixed order.

    Order 32 covers the abelian and maximal-class groups only; asking for the
    nonabelian (or all) groups of order 32 is rejected.
    """
    if order not in CATALOG_ORDERS:
        raise ValueError(f"unsupported catalog order {order}; choose from {CATALOG_ORDERS}")
    if filter not in CATALOG_FILTERS:
        raise ValueError(f"unknown filter {filter!r}; choose from {CATALOG_FILTERS}")
    p = 3 if order % 3 == 0 else 2
    if filter == "abelian":
        return abelian_groups(p, order)
    if filter == "maximal-class":
        return _maximal_class(order) if p == 2 else []
    if p == 3:
        if filter == "nonabelian" and order < 27:
            return []
        if order < 27:
            return abelian_groups(p, order)
        raise ValueError("nonabelian groups of order 27 are not catalogued")
    if filter == "nonabelian":
        return _nonabelian(order)
    if order == 32:
        raise ValueError("order 32 supports only the abelian and maximal-class filters")
    return abelian_groups(p, order) + _nonabelian(order)


# -- name parsing ----------------------------------------------------------

_SPECIAL = {
    "M16": m16,
    "G44": g44,
    "D8YC4": central_product_d8_c4,
    "C4sC4": c4_semidirect_c4,
    "Q8xC2": lambda: direct_product(quaternion(2), cyclic(2), name="Q8xC2"),
    "D8xC2": lambda: direct_product(dihedral(2), cyclic(2), name="D8xC2"),
}

GROUP_NAMES = (
    "C{n}", "C{a}xC{b}...", "C{a}^{k}", "D{2^k}", "Q{2^k}", "SD{2^k}", *_SPECIAL,
)


def _two_power_exp(n: int) -> int | None:
    if n >= 1 and n & (n - 1) == 0:
        return n.bit_length() - 1
    return None


def parse_group(name: str) -> GroupTable:
    """Build a group from its CLI name (see ``GROUP_NAMES``)."""
    s = name.strip()
    if s in _SPECIAL:
        return _SPECIAL[s]()
    m = re.fullmatch(r"(SD|D|Q)(\d+)", s)
    if m:
        fam, order = m.group(1), int(m.group(2))
        k = _two_power_exp(order)
        try:
            if k is None:
                raise ValueError
            return {"D": dihedral, "Q": quaternion, "SD": semidihedral}[fam](k - 1)
        except ValueError:
            pass
    elif re.fullmatch(r"C\d+(\^\d+)?(xC\d+(\^\d+)?)*", s):
        orders = []
        for part in s.split("x"):
            base, _, k = part[1:].partition("^")
            orders += [int(base)] * (int(k) if k else 1)
        if all(o >= 1 for o in orders) and len(orders) <= 8:
            return abelian_group(orders)
    raise ValueError(f"unknown group name {name!r}; valid forms: {', '.join(GROUP_NAMES)}")

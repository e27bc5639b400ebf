"""Analysis of finite groups given only through a multiplication oracle.

A :class:`BlackBoxGroup` stores its elements as a sorted ``int64`` array of
keys and multiplies whole key arrays at once.  Cayley tables (keys are table
indices) and unit groups of group algebras (keys are encoded coefficient
vectors) both implement it, so subgroup closures, derived subgroups and order
statistics run unchanged on either.
"""

from __future__ import annotations

import numpy as np

from .abelian import AbelianType

__all__ = [
    "BlackBoxGroup",
    "SubgroupView",
    "abelian_type",
    "abelianization_type",
    "center",
    "closure",
    "commutators",
    "derived_subgroup",
    "element_orders",
    "exponent",
    "generating_set",
    "is_abelian",
    "is_hamiltonian",
    "is_normal",
    "normal_closure",
    "order_spectrum",
    "power",
    "power_subgroup",
    "torsion_subgroup",
]


class BlackBoxGroup:
    """Finite group with vectorized multiplication on element keys.

    Subclasses set ``elements`` (sorted int64 keys), ``identity`` and ``p``
    (the prime when the group is a p-group, else 1) and implement ``mul`` and
    ``inv`` on arrays of keys.
    """

    elements: np.ndarray
    identity: int

    def mul(self, x, y):
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    @property
    def p(self) -> int:
        return 1

    @property
    def order(self) -> int:
        return int(len(self.elements))

    def contains(self, keys) -> np.ndarray:
        keys = np.asarray(keys, dtype=np.int64)
        pos = np.searchsorted(self.elements, keys)
        pos = np.minimum(pos, len(self.elements) - 1)
        return self.elements[pos] == keys

    def index(self, keys) -> np.ndarray:
        keys = np.asarray(keys, dtype=np.int64)
        pos = np.searchsorted(self.elements, keys)
        if np.any(pos >= len(self.elements)) or np.any(self.elements[np.minimum(pos, len(self.elements) - 1)] != keys):
            raise KeyError("key outside the group")
        return pos

    def _gens_cache(self):
        return getattr(self, "_generating_set", None)


class SubgroupView(BlackBoxGroup):
    """A subset of a parent group that is closed under its multiplication."""

    def __init__(self, parent: BlackBoxGroup, keys, name: str | None = None):
        self.parent = parent
        self.elements = np.unique(np.asarray(keys, dtype=np.int64))
        self.identity = parent.identity
        self.name = name or f"subgroup of {getattr(parent, 'name', 'G')}"

    def mul(self, x, y):
        return self.parent.mul(x, y)

    def inv(self, x):
        return self.parent.inv(x)

    @property
    def p(self) -> int:
        return self.parent.p

    def __repr__(self) -> str:
        return f"SubgroupView(order={self.order}, in {getattr(self.parent, 'name', 'G')})"

    def to_table(self):
        """Induced Cayley table, element i being ``self.elements[i]``."""
        from .groups import GroupTable

        keys = self.elements
        # identity must come first
        order = np.concatenate([[np.searchsorted(keys, self.identity)],
                                np.flatnonzero(keys != self.identity)])
        keys = keys[order]
        lookup = {int(k): i for i, k in enumerate(keys)}
        n = len(keys)
        prod = self.mul(np.repeat(keys, n), np.tile(keys, n))
        table = np.array([lookup[int(k)] for k in prod], dtype=np.int64).reshape(n, n)
        return GroupTable(self.name, table, [str(int(k)) for k in keys], [], "subgroup")


def _keys(x) -> np.ndarray:
    return np.atleast_1d(np.asarray(x, dtype=np.int64))


def power(g: BlackBoxGroup, x, k: int) -> np.ndarray:
    x = _keys(x)
    if k < 0:
        x, k = g.inv(x), -k
    out = np.full_like(x, g.identity)
    base = x
    while k:
        if k & 1:
            out = g.mul(out, base)
        k >>= 1
        if k:
            base = g.mul(base, base)
    return out


def element_orders(g: BlackBoxGroup, x=None) -> np.ndarray:
    """Orders of the given elements (all elements by default)."""
    x = g.elements if x is None else _keys(x)
    orders = np.ones(len(x), dtype=np.int64)
    p = g.p
    cur = x.copy()
    if p > 1:
        # p-groups: orders are powers of p, found by repeated p-th powers
        live = cur != g.identity
        while np.any(live):
            cur[live] = power(g, cur[live], p)
            orders[live] *= p
            live = cur != g.identity
            if orders.max() > g.order:
                raise RuntimeError("element order exceeds group order")
        return orders
    live = cur != g.identity
    k = 1
    while np.any(live):
        k += 1
        cur[live] = g.mul(cur[live], x[live])
        orders[live] = k
        live = cur != g.identity
        if k > g.order:
            raise RuntimeError("element order exceeds group order")
    return orders


def order_spectrum(g: BlackBoxGroup) -> dict[int, int]:
    vals, counts = np.unique(element_orders(g), return_counts=True)
    return {int(v): int(c) for v, c in zip(vals, counts)}


def exponent(g: BlackBoxGroup) -> int:
    return int(np.lcm.reduce(element_orders(g)))


def closure(g: BlackBoxGroup, gens, extra_conjugators=None) -> SubgroupView:
    """Subgroup generated by ``gens``.

    With ``extra_conjugators`` the result is also closed under conjugation by
    those elements, which makes it the normal closure when they generate ``g``.
    """
    gens = np.unique(_keys(gens)) if len(np.atleast_1d(gens)) else np.zeros(0, dtype=np.int64)
    conj = _keys(extra_conjugators) if extra_conjugators is not None else np.zeros(0, dtype=np.int64)
    conj_inv = g.inv(conj) if len(conj) else conj
    seen = np.array([g.identity], dtype=np.int64)
    frontier = seen
    while len(frontier):
        cand = [g.mul(frontier, np.full_like(frontier, s)) for s in gens]
        for c, ci in zip(conj, conj_inv):
            cc = np.full_like(frontier, c)
            cand.append(g.mul(g.mul(np.full_like(frontier, ci), frontier), cc))
        if not cand:
            break
        cand = np.unique(np.concatenate(cand))
        new = np.setdiff1d(cand, seen, assume_unique=True)
        seen = np.union1d(seen, new)
        frontier = new
        if len(seen) > g.order:
            raise RuntimeError("closure escaped the ambient group")
    return SubgroupView(g, seen)


def normal_closure(g: BlackBoxGroup, seeds) -> SubgroupView:
    return closure(g, seeds, extra_conjugators=generating_set(g))


def generating_set(g: BlackBoxGroup, seed: int = 0) -> np.ndarray:
    """Small generating set: add random elements outside the current span until it is all of g."""
    cached = g._gens_cache()
    if cached is not None:
        return cached
    rng = np.random.default_rng(seed)
    gens: list[int] = []
    span = np.array([g.identity], dtype=np.int64)
    while len(span) < g.order:
        outside = g.elements[~np.isin(g.elements, span, assume_unique=True)]
        gens.append(int(outside[rng.integers(len(outside))]))
        span = closure(g, gens).elements
    out = np.array(gens, dtype=np.int64)
    try:
        g._generating_set = out
    except AttributeError:
        pass
    return out


def commutators(g: BlackBoxGroup, x, y) -> np.ndarray:
    """(x, y) = x^-1 y^-1 x y, elementwise."""
    x, y = _keys(x), _keys(y)
    return g.mul(g.mul(g.inv(x), g.inv(y)), g.mul(x, y))


def is_abelian(g: BlackBoxGroup) -> bool:
    gens = generating_set(g)
    xs, ys = np.meshgrid(gens, gens)
    xs, ys = xs.ravel(), ys.ravel()
    return bool(np.all(g.mul(xs, ys) == g.mul(ys, xs)))


def derived_subgroup(g: BlackBoxGroup) -> SubgroupView:
    """Normal closure of the commutators of a generating set."""
    gens = generating_set(g)
    if len(gens) > 20:
        xs, ys = np.meshgrid(g.elements, g.elements)
        comm = np.unique(commutators(g, xs.ravel(), ys.ravel()))
        return closure(g, comm)
    xs, ys = np.meshgrid(gens, gens)
    comm = np.unique(commutators(g, xs.ravel(), ys.ravel()))
    comm = comm[comm != g.identity]
    d = normal_closure(g, comm)
    d.name = f"{getattr(g, 'name', 'G')}'"
    return d


def center(g: BlackBoxGroup) -> SubgroupView:
    keep = np.ones(g.order, dtype=bool)
    x = g.elements
    for s in generating_set(g):
        ss = np.full_like(x, s)
        keep &= g.mul(x, ss) == g.mul(ss, x)
    return SubgroupView(g, x[keep], name=f"Z({getattr(g, 'name', 'G')})")


def is_normal(g: BlackBoxGroup, s: BlackBoxGroup) -> bool:
    x = s.elements
    for t in generating_set(g):
        tt = np.full_like(x, t)
        conj = g.mul(g.mul(g.inv(tt), x), tt)
        if not np.all(s.contains(conj)):
            return False
    return True


def is_hamiltonian(g: BlackBoxGroup) -> bool:
    """Nonabelian with every cyclic subgroup normal."""
    if is_abelian(g):
        return False
    x = g.elements
    e = int(element_orders(g).max())
    pw = [np.full_like(x, g.identity)]
    for _ in range(1, e):
        pw.append(g.mul(pw[-1], x))
    pw = np.stack(pw)
    for t in generating_set(g):
        tt = np.full_like(x, t)
        conj = g.mul(g.mul(g.inv(tt), x), tt)
        if not np.all(np.any(pw == conj[None, :], axis=0)):
            return False
    return True


def _require_abelian(g: BlackBoxGroup) -> None:
    if not is_abelian(g):
        raise ValueError(f"{getattr(g, 'name', 'group')} is not abelian")


def power_subgroup(g: BlackBoxGroup, k: int) -> SubgroupView:
    """G^k = {x^k} (a subgroup because g is abelian)."""
    _require_abelian(g)
    return SubgroupView(g, power(g, g.elements, k), name=f"{getattr(g, 'name', 'G')}^{k}")


def torsion_subgroup(g: BlackBoxGroup, k: int) -> SubgroupView:
    """G[k] = {x : x^k = 1}."""
    _require_abelian(g)
    x = g.elements
    return SubgroupView(g, x[power(g, x, k) == g.identity], name=f"{getattr(g, 'name', 'G')}[{k}]")


def abelian_type(g: BlackBoxGroup) -> AbelianType:
    """Cyclic decomposition of an abelian p-group from the counts of x^(p^i) = 1."""
    _require_abelian(g)
    p = g.p
    if p <= 1:
        if g.order == 1:
            return AbelianType(2, ())
        raise ValueError("abelian_type needs a p-group")
    x = g.elements.copy()
    counts = [1]
    while counts[-1] < g.order:
        x = power(g, x, p)
        counts.append(int(np.count_nonzero(x == g.identity)))
    return AbelianType.from_counts(p, counts)


def abelianization_type(g: BlackBoxGroup, derived: BlackBoxGroup | None = None) -> AbelianType:
    """Type of G/G' from the counts #{x : x^(p^i) in G'} / |G'|."""
    d = derived if derived is not None else derived_subgroup(g)
    p = g.p
    x = g.elements.copy()
    counts = [1]
    total = g.order // d.order
    while counts[-1] < total:
        x = power(g, x, p)
        counts.append(int(np.count_nonzero(d.contains(x))) // d.order)
    return AbelianType.from_counts(p, counts)

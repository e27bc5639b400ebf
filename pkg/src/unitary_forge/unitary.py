"""Normalized units, unitary subgroups and involution counts by direct computation.

Everything here is computed, never looked up: enumeration over the
augmentation-1 coset, structured counting over a cyclic subalgebra, and exact
kernel counts for abelian base groups.  The closed forms these are checked
against live in :mod:`unitary_forge.formulas`.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import blackbox as bb
from .abelian import AbelianType
from .blackbox import BlackBoxGroup
from .finite_field import FieldDesc, kernel, make_field, rank
from .group_algebra import AlgebraElement, CapacityError, GroupAlgebra
from .groups import GroupTable, cyclic, dihedral, quaternion, semidihedral

__all__ = [
    "MATERIALIZE_LIMIT",
    "ThetaRecord",
    "UnitGroupView",
    "enumerate_normalized_units",
    "h_set_size",
    "iter_normalized_keys",
    "maximal_class_group",
    "s_star_two_size",
    "theta_brute",
    "theta_structured",
    "unitary_subgroup",
    "unitary_torsion_counts",
    "unitary_type_exact",
]

MATERIALIZE_LIMIT = 2**24
CHUNK = 2**16


class UnitGroupView(BlackBoxGroup):
    """A group of normalized units of FG, held as sorted element keys."""

    def __init__(self, algebra: GroupAlgebra, keys, unitary: bool, name: str | None = None, check: bool = True):
        self.algebra = algebra
        self.elements = np.asarray(keys, dtype=np.int64)
        if np.any(self.elements[1:] <= self.elements[:-1]):
            self.elements = np.unique(self.elements)
        self.identity = algebra.identity_key
        self.unitary = unitary
        self.name = name or (f"V_*({algebra!r})" if unitary else f"V({algebra!r})")
        if check:
            self._spot_check()

    @property
    def p(self) -> int:
        return self.algebra.field.p

    def mul(self, x, y):
        return self.algebra.mul_keys(x, y)

    def inv(self, x):
        if self.unitary:
            return self.algebra.star_keys(x)
        return self.algebra.inverse_keys(x)

    def element(self, key: int) -> AlgebraElement:
        return self.algebra.from_key(int(key))

    def _spot_check(self, pairs: int = 1000, seed: int = 0) -> None:
        keys = self.elements
        if not len(keys) or not self.contains([self.identity])[0]:
            raise AssertionError("unit group must contain the identity")
        if np.any(self.algebra.augmentation_keys(keys[: min(len(keys), 4096)]) != 1):
            raise AssertionError("unit group element with augmentation != 1")
        rng = np.random.default_rng(seed)
        i = rng.integers(len(keys), size=pairs)
        j = rng.integers(len(keys), size=pairs)
        if not np.all(self.contains(self.mul(keys[i], keys[j]))):
            raise AssertionError("unit group not closed under multiplication")
        if not np.all(self.contains(self.inv(keys[i]))):
            raise AssertionError("unit group not closed under inversion")

    def assert_subgroup(self) -> None:
        """Exact closure proof: the span of a generating subset is the whole set."""
        gens = bb.generating_set(self)
        span = bb.closure(self, gens)
        if span.order != self.order:
            raise AssertionError("element set is not a subgroup")


def iter_normalized_keys(algebra: GroupAlgebra, chunk: int = CHUNK):
    """Keys of all augmentation-1 elements in increasing order, chunk by chunk.

    The coefficient of the identity is eliminated: the remaining |G| - 1
    coefficients run through all q^(|G|-1) values lexicographically.
    """
    q, n = algebra.q, algebra.n
    total = q ** (n - 1)
    f = algebra.field
    for start in range(0, total, chunk):
        r = np.arange(start, min(start + chunk, total), dtype=np.int64)
        if algebra.packed:
            par = r.copy()
            for s in (32, 16, 8, 4, 2, 1):
                par ^= par >> s
            yield (r << 1) | ((par & 1) ^ 1)
            continue
        digits = np.empty((len(r), n), dtype=np.int64)
        rr = r.copy()
        digits[:, 0] = 0
        for k in range(1, n):
            rr, digits[:, k] = np.divmod(rr, q)
        aug = algebra.augmentation_keys(algebra.encode(digits))
        digits[:, 0] = f.add_table[1, f.neg_table[aug]]
        yield algebra.encode(digits)


def _check_capacity(algebra: GroupAlgebra, limit: int) -> None:
    size = algebra.q ** (algebra.n - 1)
    if size > limit:
        raise CapacityError(
            f"|V({algebra!r})| = {algebra.q}^{algebra.n - 1} exceeds the materialization bound {limit}"
        )


def enumerate_normalized_units(algebra: GroupAlgebra, limit: int = MATERIALIZE_LIMIT) -> UnitGroupView:
    _check_capacity(algebra, limit)
    keys = np.concatenate(list(iter_normalized_keys(algebra)))
    return UnitGroupView(algebra, keys, unitary=False)


def _workers(workers: int | None) -> int:
    if workers is None:
        workers = int(os.environ.get("UNITARY_FORGE_PARALLEL", "1") or 1)
    return max(1, workers)


def _unitary_chunk(algebra: GroupAlgebra, keys: np.ndarray) -> np.ndarray:
    prod = algebra.mul_keys(keys, algebra.star_keys(keys))
    return keys[prod == algebra.identity_key]


def unitary_subgroup(
    algebra: GroupAlgebra, limit: int = MATERIALIZE_LIMIT, workers: int | None = None, check: bool = True
) -> UnitGroupView:
    """V_*(FG) = {u in V(FG) : u u^* = 1}, filtered chunk by chunk."""
    _check_capacity(algebra, limit)
    chunks = iter_normalized_keys(algebra)
    w = _workers(workers)
    if w == 1:
        parts = [_unitary_chunk(algebra, c) for c in chunks]
    else:
        with ThreadPoolExecutor(w) as pool:
            parts = list(pool.map(lambda c: _unitary_chunk(algebra, c), chunks))
    keys = np.concatenate(parts)
    view = UnitGroupView(algebra, keys, unitary=True, check=check)
    if check and view.order <= 2**12:
        view.assert_subgroup()
    return view


# -- involution counts ----------------------------------------------------------

FAMILIES = ("D", "Q", "SD")


def maximal_class_group(family: str, n: int) -> GroupTable:
    try:
        ctor = {"D": dihedral, "Q": quaternion, "SD": semidihedral}[family]
    except KeyError:
        raise ValueError(f"unknown family {family!r}; choose from {FAMILIES}") from None
    return ctor(n)


@dataclass
class ThetaRecord:
    """Number of x in V_*(FG) with x^2 = 1, the identity included."""

    family: str
    n: int
    theta: int
    method: str
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.theta < 1:
            raise ValueError("theta counts the identity, so it is at least 1")


def theta_of_view(view: UnitGroupView) -> int:
    sq = view.mul(view.elements, view.elements)
    return int(np.count_nonzero(sq == view.identity))


def theta_brute(algebra: GroupAlgebra, workers: int | None = None) -> ThetaRecord:
    g = algebra.group
    fam = {"dihedral": "D", "quaternion": "Q", "semidihedral": "SD"}.get(g.family, g.name)
    view = unitary_subgroup(algebra, workers=workers, check=False)
    return ThetaRecord(fam, g.params.get("n", 0), theta_of_view(view), "brute", {"unitary_order": view.order})


def _cyclic_algebra(n: int) -> GroupAlgebra:
    return GroupAlgebra(make_field(2), cyclic(2**n))


def _one_plus_a_power(alg: GroupAlgebra, i: int, inverse: bool = False) -> AlgebraElement:
    a = alg.embed(alg.n - 1 if inverse else 1)
    base = alg.one + a
    out = alg.one
    for _ in range(i):
        out = out * base
    return out


def _symmetric_normalized_keys(alg: GroupAlgebra) -> np.ndarray:
    keys = np.concatenate(list(iter_normalized_keys(alg)))
    return keys[alg.star_keys(keys) == keys]


def theta_structured(family: str, n: int) -> ThetaRecord:
    """Count x = x1 + x2 b in V_*(F G)[2] by solving over FC, C = <a> of order 2^n.

    With b y = s(y) b for y in FC, x^* = x and x^2 = 1 unwind to

        x1 = x1^*,  x2 = t(x2),  x1^2 = x2 x2^* + 1,  x2 (x1 + s(x1)) = 0

    where t = identity (D), multiplication by a^(2^(n-1)) (Q) or the tilde
    automorphism (SD), and s is the conjugation action of b.  The last
    condition is vacuous for D and Q.  The x1 side is a lookup into the
    squares of the symmetric elements of FC.
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; choose from {FAMILIES}")
    if n < (3 if family == "SD" else 2) or n > 4:
        raise ValueError(f"theta_structured supports n in [{3 if family == 'SD' else 2}, 4] for {family}")
    alg = _cyclic_algebra(n)
    N = 2**n
    x2 = np.arange(2**N, dtype=np.int64)
    if family == "Q":
        z = N // 2
        x2 = x2[alg.left_mul_group_keys(z, x2) == x2]
    elif family == "SD":
        tilde = alg._perm_byte_tables(alg.tilde_perm[None, :])[0]
        x2 = x2[alg._apply(tilde, x2) == x2]
    target = alg.mul_keys(x2, alg.star_keys(x2)) ^ 1

    # symmetric x1 of either augmentation
    sym1 = _symmetric_normalized_keys(alg)
    all_sym = np.concatenate([sym1, sym1 ^ 1])  # x1 + 1 flips the identity coefficient
    all_sym = np.unique(all_sym[alg.star_keys(all_sym) == all_sym])
    squares = alg.mul_keys(all_sym, all_sym)
    order = np.argsort(squares, kind="stable")
    squares, all_sym = squares[order], all_sym[order]
    lo = np.searchsorted(squares, target, side="left")
    hi = np.searchsorted(squares, target, side="right")
    counts = hi - lo

    if family == "SD":
        # b a b^-1 = a^(2^(n-1) - 1): s(x1) = tilde(x1^*) = tilde(x1) for symmetric x1
        tilde = alg._perm_byte_tables(alg.tilde_perm[None, :])[0]
        idx = np.repeat(np.arange(len(x2)), counts)
        starts = np.repeat(lo, counts)
        offs = np.arange(idx.size) - np.repeat(np.cumsum(counts) - counts, counts)
        x1 = all_sym[starts + offs]
        ok = alg.mul_keys(x2[idx], x1 ^ alg._apply(tilde, x1)) == 0
        per_x2 = np.bincount(idx[ok], minlength=len(x2))
        diag_system_only = int(counts.sum())
        counts = per_x2
    else:
        diag_system_only = int(counts.sum())

    aug2 = alg.augmentation_keys(x2)
    diagnostics = {
        "chi_x2_0": int(counts[aug2 == 0].sum()),
        "chi_x2_1": int(counts[aug2 == 1].sum()),
        "symmetric_square_solutions": diag_system_only,
        "s_star_two": _s_star_two_from(alg),
    }
    return ThetaRecord(family, n, int(counts.sum()), "structured", diagnostics)


def _s_star_two_from(alg: GroupAlgebra) -> int:
    sym = _symmetric_normalized_keys(alg)
    return int(np.count_nonzero(alg.mul_keys(sym, sym) == 1))


def s_star_two_size(n: int) -> int:
    """|S_*(FC)[2]|: symmetric units of V(F C_{2^n}) squaring to 1."""
    if n < 2:
        raise ValueError("need n >= 2")
    return _s_star_two_from(_cyclic_algebra(n))


def h_set_size(n: int, i: int) -> int:
    """#{h in V(FC) : h h^* (1+a)^i (1+a^-1)^i lies in F C^2}, C cyclic of order 2^n."""
    N = 2**n
    if not 0 <= i < N:
        raise ValueError(f"need 0 <= i < {N}")
    alg = _cyclic_algebra(n)
    w = (_one_plus_a_power(alg, i) * _one_plus_a_power(alg, i, inverse=True)).key
    odd_mask = sum(1 << k for k in range(1, N, 2))
    total = 0
    for h in iter_normalized_keys(alg):
        norm = alg.mul_keys(h, alg.star_keys(h))
        prod = alg.mul_keys(np.full_like(norm, w), norm)
        total += int(np.count_nonzero((prod & odd_mask) == 0))
    return total


def annihilator_of_power(n: int, i: int) -> int:
    alg = _cyclic_algebra(n)
    return alg.annihilator_dim(_one_plus_a_power(alg, i))


# -- exact counts for abelian base groups ---------------------------------------

def _prime_field_kernel(field: FieldDesc, rows) -> list[np.ndarray]:
    rows = np.asarray(rows, dtype=np.int64)
    if rows.size == 0:
        return [np.eye(rows.shape[1], dtype=np.int64)[k] for k in range(rows.shape[1])]
    return kernel(make_field(field.p), rows % field.p)


def _frobenius_equations(group: GroupTable, i: int) -> np.ndarray:
    """Rows of the linear system x^(p^i) = 0: one row per fibre of g -> g^(p^i)."""
    p = group.p
    img = np.array([group.power(g, p**i) for g in range(group.size)])
    rows = []
    for h in np.unique(img):
        rows.append((img == h).astype(np.int64))
    return np.array(rows, dtype=np.int64)


def _augmentation_powers(group: GroupTable, p: int) -> list[np.ndarray]:
    """GF(p)-bases of I, I^2, ... (I the augmentation ideal), down to zero."""
    n = group.size
    fp = make_field(p)
    basis = []
    for g in range(1, n):
        v = np.zeros(n, dtype=np.int64)
        v[0], v[g] = p - 1, 1
        basis.append(v)
    gens = [np.array(b) for b in basis]
    levels = [np.array(basis)]
    alg = GroupAlgebra(fp, group)
    while len(levels[-1]):
        prods = alg.mul_rows(np.repeat(levels[-1], len(gens), axis=0), np.tile(np.array(gens), (len(levels[-1]), 1)))
        red, piv = _reduced_basis(fp, prods)
        levels.append(red)
    return levels


def _reduced_basis(fp: FieldDesc, rows: np.ndarray) -> tuple[np.ndarray, list[int]]:
    from .finite_field import _row_reduce

    if rows.size == 0:
        return np.zeros((0, rows.shape[1] if rows.ndim == 2 else 0), dtype=np.int64), []
    red, piv = _row_reduce(fp, rows % fp.p)
    return red[: len(piv)], piv


def _intersect(fp: FieldDesc, basis: np.ndarray, equations: np.ndarray) -> np.ndarray:
    """Basis of {v in span(basis) : equations v = 0}."""
    if len(basis) == 0:
        return basis
    coeff = (equations @ basis.T) % fp.p
    ks = kernel(fp, coeff)
    if not ks:
        return np.zeros((0, basis.shape[1]), dtype=np.int64)
    return (np.array(ks) @ basis) % fp.p


def _filtered_basis(fp: FieldDesc, levels: list[np.ndarray], equations: np.ndarray) -> list[np.ndarray]:
    """GF(p)-basis of J = ker(equations) on I, adapted to J cap I^k."""
    out: list[np.ndarray] = []
    chosen = np.zeros((0, levels[0].shape[1]), dtype=np.int64)
    for lvl in reversed(levels[:-1]):
        sub = _intersect(fp, lvl, equations)
        for v in sub:
            trial = np.vstack([chosen, v[None, :]])
            if rank(fp, trial) > len(chosen):
                chosen = trial
                out.append(v)
    return out


def unitary_torsion_counts(algebra: GroupAlgebra) -> list[int]:
    """N_i = #{u in V_*(FG) : u^(p^i) = 1}, i = 0, 1, ..., for abelian G.

    Odd p: the Cayley transform k -> (1 - k)(1 + k)^-1 is a bijection from the
    skew elements onto V_*(FG) and commutes with Frobenius, so N_i is the size
    of a linear subspace.  p = 2: u -> u u^* is a homomorphism of V(FG) with
    kernel V_*(FG); on the subgroup 1 + J_i of elements killed by 2^i it has
    kernel of size |1 + J_i| / |image|, and the image is spanned by the images
    of a generating set of 1 + J_i read off a filtration-adapted basis of J_i.
    """
    g = algebra.group
    f = algebra.field
    p = f.p
    if not bb.is_abelian(g):
        raise ValueError("exact kernel counts need an abelian group")
    n = g.size
    exp = bb.exponent(g)
    fp = make_field(p)
    counts = [1]
    if p != 2:
        inv = g.inv_table
        skew = []
        for k in range(n):
            if inv[k] == k:
                v = np.zeros(n, dtype=np.int64)
                v[k] = 1
                skew.append(v)
            elif k < inv[k]:
                v = np.zeros(n, dtype=np.int64)
                v[k], v[inv[k]] = 1, 1
                skew.append(v)
        skew = np.array(skew)  # equations alpha_g + alpha_{g^-1} = 0
        i = 1
        while True:
            eq = np.vstack([skew, _frobenius_equations(g, i)])
            dim = len(_prime_field_kernel(f, eq))
            counts.append(f.q**dim)
            if p**i >= exp:
                return counts
            i += 1

    levels = _augmentation_powers(g, 2)
    x_gen = [1] if f.m == 1 else [f.power(f.p, k) for k in range(f.m)]  # 1, x, x^2, ...
    i = 1
    while True:
        basis = _filtered_basis(fp, levels, _frobenius_equations(g, i))
        gens = []
        for v in basis:
            for c in x_gen:
                row = f.mul_table[c, v]
                row[0] = f.add_table[row[0], 1]
                gens.append(row)
        dim_f = len(basis)
        if gens:
            gk = algebra.encode(np.array(gens))
            img = algebra.mul_keys(gk, algebra.star_keys(gk))
            image = bb.closure(_KeySpace(algebra), img).order
        else:
            image = 1
        counts.append(f.q**dim_f // image)
        if 2**i >= exp:
            return counts
        i += 1


class _KeySpace(BlackBoxGroup):
    """The normalized units of a commutative group algebra, without enumeration."""

    def __init__(self, algebra: GroupAlgebra):
        self.algebra = algebra
        self.identity = algebra.identity_key
        self.elements = np.zeros(0, dtype=np.int64)

    @property
    def order(self) -> int:
        return self.algebra.q ** (self.algebra.n - 1)

    @property
    def p(self) -> int:
        return self.algebra.field.p

    def mul(self, x, y):
        return self.algebra.mul_keys(x, y)

    def inv(self, x):
        return self.algebra.inverse_keys(x)


def unitary_type_exact(algebra: GroupAlgebra) -> AbelianType:
    """Abelian type of V_*(FG) for abelian G from :func:`unitary_torsion_counts`."""
    return AbelianType.from_counts(algebra.field.p, unitary_torsion_counts(algebra))

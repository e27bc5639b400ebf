"""Isomorphism invariants of unit groups and pairwise separation of group catalogs.

Equal fingerprints never prove isomorphism; a pair with equal fingerprints
is reported as unseparated and nothing more.
"""

from __future__ import annotations

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, fields
from itertools import combinations

from . import blackbox as bb
from .abelian import AbelianType
from .finite_field import make_field
from .group_algebra import GroupAlgebra
from .groups import GroupTable, catalog
from .unitary import unitary_subgroup

__all__ = [
    "NONABELIAN",
    "Fingerprint",
    "PairReport",
    "distinguish",
    "fingerprint",
    "unitary_order_table",
]

NONABELIAN = "nonabelian"

# comparison order used when naming the first separating field
FIELD_ORDER = (
    "order",
    "exponent",
    "theta",
    "hamiltonian",
    "derived",
    "abelianization",
    "center",
    "order_spectrum",
)


@dataclass(frozen=True)
class Fingerprint:
    order: int
    exponent: int
    order_spectrum: tuple[tuple[int, int], ...]
    theta: int
    abelianization: AbelianType
    derived: AbelianType | str
    center: AbelianType
    hamiltonian: bool

    def __post_init__(self):
        if sum(c for _, c in self.order_spectrum) != self.order:
            raise ValueError("order spectrum does not sum to the order")
        counts = dict(self.order_spectrum)
        if self.theta != counts.get(1, 0) + counts.get(2, 0):
            raise ValueError("theta disagrees with the order spectrum")

    def to_json(self) -> dict:
        out = asdict(self)
        out["order_spectrum"] = {str(k): v for k, v in self.order_spectrum}
        for key in ("abelianization", "derived", "center"):
            val = getattr(self, key)
            out[key] = str(val) if isinstance(val, AbelianType) else val
        return out


def _type_or_marker(g: bb.BlackBoxGroup, what: str) -> AbelianType | str:
    if bb.is_abelian(g):
        return bb.abelian_type(g)
    warnings.warn(f"{what} subgroup of order {g.order} is nonabelian; marking it", RuntimeWarning, stacklevel=3)
    return NONABELIAN


def fingerprint(v: bb.BlackBoxGroup) -> Fingerprint:
    """All invariants of a materialized p-group."""
    orders = bb.element_orders(v)
    spectrum = bb.order_spectrum(v)
    derived = bb.derived_subgroup(v)
    return Fingerprint(
        order=v.order,
        exponent=int(orders.max()),
        order_spectrum=tuple(sorted(spectrum.items())),
        theta=spectrum.get(1, 0) + spectrum.get(2, 0),
        abelianization=bb.abelianization_type(v, derived),
        derived=_type_or_marker(derived, "derived"),
        center=_type_or_marker(bb.center(v), "center"),
        hamiltonian=bb.is_hamiltonian(v),
    )


@dataclass
class PairReport:
    first: str
    second: str
    field: str | None  # None: unseparated
    values: tuple | None = None

    @property
    def separated(self) -> bool:
        return self.field is not None


def _first_difference(a: Fingerprint, b: Fingerprint, by=FIELD_ORDER):
    names = {f.name for f in fields(Fingerprint)}
    unknown = set(by) - names
    if unknown:
        raise ValueError(f"unknown fingerprint fields {sorted(unknown)}")
    for name in by:
        x, y = getattr(a, name), getattr(b, name)
        if x != y:
            return name, (x, y)
    return None, None


def _unit_fingerprint(g: GroupTable, p: int, m: int) -> Fingerprint:
    return fingerprint(unitary_subgroup(GroupAlgebra(make_field(p, m), g)))


def distinguish(groups: list[GroupTable], p: int = 2, m: int = 1, workers: int = 1, by=FIELD_ORDER):
    """Fingerprint V_*(FG) for each group and report how every pair is told apart.

    Only the fields named in ``by`` are compared, in that order.  Returns
    ``(fingerprints, pairs)`` with ``fingerprints`` keyed by group name.
    """
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        fps = list(pool.map(lambda g: _unit_fingerprint(g, p, m), groups))
    named = {g.name: fp for g, fp in zip(groups, fps)}
    pairs = []
    for (g, a), (h, b) in combinations(zip(groups, fps), 2):
        name, vals = _first_difference(a, b, by)
        pairs.append(PairReport(g.name, h.name, name, vals))
    return named, pairs


def unitary_order_table(order: int, p: int = 2, m: int = 1, filter: str = "all") -> dict[str, int]:
    """|V_*(FG)| by enumeration for every catalog group of the given order."""
    field_ = make_field(p, m)
    return {g.name: unitary_subgroup(GroupAlgebra(field_, g)).order for g in catalog(order, filter)}

"""Closed-form invariants of unitary subgroups and recovery of abelian base groups.

The abelian formulas take an :class:`AbelianType` for the base group G and a
field GF(p^m); nothing here enumerates group algebra elements.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .abelian import AbelianType, all_types

__all__ = [
    "FormulaDomainError",
    "FormulaInconsistency",
    "InconsistentInput",
    "ReconstructionResult",
    "UniquenessViolation",
    "UnitaryInvariants",
    "is_full_unitary",
    "lemma1_forward",
    "lemma1_order",
    "lemma1_rank",
    "lemma2_forward",
    "odd_group_invariants",
    "two_group_invariants",
    "two_group_unitary_order",
    "two_group_unitary_rank",
    "order_of_base_group",
    "reconstruct",
    "t_value",
    "theta_case_counts",
    "theta_closed_form",
    "top_t_identity",
]


class FormulaInconsistency(AssertionError):
    """Independent evaluations of the abelian 2-group formulas disagree."""


class FormulaDomainError(ValueError):
    """A formula produced a non-integral multiplicity."""


class InconsistentInput(ValueError):
    """Invariants that no base group of the recovered order produces."""


class UniquenessViolation(RuntimeError):
    """More than one base group produces the same unitary invariants."""

    def __init__(self, message: str, matches: list[AbelianType]):
        super().__init__(message)
        self.matches = matches


@dataclass(frozen=True)
class UnitaryInvariants:
    order: int
    rank: int
    p: int
    m: int
    abelian_type: AbelianType | None = None
    complement: AbelianType | None = None  # M in V_* = G x M, when known

    def __post_init__(self):
        t = self.abelian_type
        if t is not None and (t.order != self.order or t.rank != self.rank):
            raise ValueError("order/rank inconsistent with abelian type")

    def to_json(self) -> dict:
        out = {"order": self.order, "rank": self.rank, "p": self.p, "m": self.m}
        if self.abelian_type is not None:
            out["abelian_type"] = self.abelian_type.to_json()
        if self.complement is not None:
            out["complement"] = self.complement.to_json()
        return out

    @classmethod
    def from_json(cls, data: dict) -> UnitaryInvariants:
        t = data.get("abelian_type")
        c = data.get("complement")
        p = int(data["p"])
        return cls(
            order=int(data["order"]),
            rank=int(data["rank"]) if "rank" in data else (AbelianType.from_json(t).rank if t else 0),
            p=p,
            m=int(data["m"]),
            abelian_type=AbelianType.from_json(t) if t else None,
            complement=AbelianType.from_json(c) if c else None,
        )


def _half(m: int, x: int, what: str) -> int:
    v = Fraction(m, 2) * x
    if v.denominator != 1:
        raise FormulaDomainError(f"{what} = (m/2)*{x} is not an integer for m = {m}")
    return int(v)


def t_value(g: AbelianType, m: int, i: int) -> int:
    """t_i = (m/2)(|G^{2^i}| - |G^{2^i}[2]|)."""
    return _half(m, g.power_order(i) - g.power_torsion_order(i), f"t_{i}")


def two_group_unitary_rank(g: AbelianType, m: int) -> int:
    """2-rank of V_*(FG): (m/2)(|G| + |G[2]| + |G^2[2]| - |G^2|) - m."""
    s = g.order + g.torsion_order(1) + g.power_torsion_order(1) - g.power_order(1)
    return _half(m, s, "rank") - m


def two_group_unitary_order(g: AbelianType, m: int) -> int:
    """|V_*(FG)| = |G^2[2]| * 2^((m/2)(|G| + |G[2]|) - m)."""
    e = _half(m, g.order + g.torsion_order(1), "order exponent") - m
    return g.power_torsion_order(1) * 2**e


def _complement_type(g: AbelianType, m: int) -> AbelianType:
    f = [
        t_value(g, m, 0) - 2 * t_value(g, m, 1) + t_value(g, m, 2)
        - g.mult(1) - g.mult(2) + m * (g.torsion_order(1) - 1)
    ]
    for i in range(2, len(g.f) + 2):
        f.append(t_value(g, m, i - 1) - 2 * t_value(g, m, i) + t_value(g, m, i + 1) - g.mult(i + 1))
    if any(x < 0 for x in f):
        raise FormulaInconsistency(f"negative complement multiplicities {f} for G = {g}, m = {m}")
    return AbelianType(2, tuple(f))


def two_group_invariants(g: AbelianType, m: int) -> UnitaryInvariants:
    """Invariants of V_*(FG) for an abelian 2-group G over GF(2^m).

    The type comes from V_* = G x M with the multiplicities of M; rank and
    order are evaluated from their own formulas and must agree with it.
    """
    if g.p != 2:
        raise ValueError("needs an abelian 2-group")
    if m < 1:
        raise ValueError("m must be >= 1")
    comp = _complement_type(g, m)
    vtype = g * comp
    order = two_group_unitary_order(g, m)
    rnk = two_group_unitary_rank(g, m)
    if vtype.order != order or vtype.rank != rnk:
        raise FormulaInconsistency(
            f"G = {g}, m = {m}: type {vtype} (order {vtype.order}, rank {vtype.rank}) "
            f"vs order formula {order}, rank formula {rnk}"
        )
    return UnitaryInvariants(order, rnk, 2, m, vtype, comp)


def odd_group_invariants(g: AbelianType, m: int) -> UnitaryInvariants:
    """f_i(V_*(FG)) = (m/2)(|G^{p^(i-1)}| - 2|G^{p^i}| + |G^{p^(i+1)}|) for odd p."""
    p = g.p
    if p == 2:
        raise ValueError("needs an abelian p-group with p odd")
    f = []
    for i in range(1, len(g.f) + 1):
        diff = g.power_order(i - 1) - 2 * g.power_order(i) + g.power_order(i + 1)
        f.append(_half(m, diff, f"f_{i}"))
    t = AbelianType(p, tuple(f))
    return UnitaryInvariants(t.order, t.rank, p, m, t)


def forward(g: AbelianType, m: int) -> UnitaryInvariants:
    return two_group_invariants(g, m) if g.p == 2 else odd_group_invariants(g, m)


def is_full_unitary(g: AbelianType, m: int) -> bool:
    """Whether V_*(FG) = V(FG), i.e. |V_*| = |F|^(|G|-1)."""
    return two_group_unitary_order(g, m) == (2**m) ** (g.order - 1)


def _log(x: int, base: int) -> int | None:
    e = 0
    while x % base == 0 and x > 1:
        x //= base
        e += 1
    return e if x == 1 else None


def order_of_base_group(unitary_order: int, field_size: int) -> int:
    """|G| from |V_*(FG)| for abelian G.

    Characteristic 2: the unique |G| = 2^n with
    |F|^(|G|/2) <= |V_*| <= |F|^(|G|-1); consecutive windows are disjoint.
    Odd characteristic: |V_*| = |F|^((|G|-1)/2).
    """
    p = next(d for d in range(2, field_size + 1) if field_size % d == 0)
    if _log(field_size, p) is None:
        raise ValueError(f"{field_size} is not a prime power")
    if unitary_order < 1 or _log(unitary_order, p) is None:
        raise InconsistentInput(f"|V_*| = {unitary_order} is not a power of the characteristic {p}")
    if unitary_order == 1:
        return 1
    q = field_size
    if p == 2:
        size = 2
        while q ** (size // 2) <= unitary_order:
            if unitary_order <= q ** (size - 1):
                return size
            size *= 2
        raise InconsistentInput(f"|V_*| = {unitary_order} lies in no window over GF({q})")
    e = _log(unitary_order, q)
    if e is None or _log(2 * e + 1, p) is None:
        raise InconsistentInput(f"|V_*| = {unitary_order} is not |F|^((|G|-1)/2) for a {p}-group G")
    return 2 * e + 1


@dataclass
class ReconstructionResult:
    base_type: AbelianType
    base_order: int
    candidates: list[tuple[AbelianType, UnitaryInvariants, bool]] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "base_type": self.base_type.to_json(),
            "base_order": self.base_order,
            "candidates": [
                {"type": str(t), "invariants": inv.to_json(), "match": ok} for t, inv, ok in self.candidates
            ],
        }


def _matches(inv: UnitaryInvariants, cand: UnitaryInvariants) -> bool:
    if inv.order != cand.order:
        return False
    if inv.abelian_type is not None:
        return inv.abelian_type == cand.abelian_type
    return inv.rank == cand.rank


def reconstruct(inv: UnitaryInvariants, p: int | None = None, m: int | None = None) -> ReconstructionResult:
    """Find the abelian base group G whose forward invariants equal ``inv``.

    Every abelian type of the order forced by |V_*| is forward-mapped; exactly
    one is expected to match.
    """
    p = inv.p if p is None else p
    m = inv.m if m is None else m
    size = order_of_base_group(inv.order, p**m)
    if size == 1:
        return ReconstructionResult(AbelianType(p, ()), 1, [])
    cands = []
    for t in all_types(p, _log(size, p)):
        ci = forward(t, m)
        cands.append((t, ci, _matches(inv, ci)))
    hits = [t for t, _, ok in cands if ok]
    if not hits:
        raise InconsistentInput(f"no abelian group of order {size} yields these invariants")
    if len(hits) > 1:
        raise UniquenessViolation(f"{len(hits)} abelian groups of order {size} share these invariants", hits)
    return ReconstructionResult(hits[0], size, cands)


def theta_closed_form(family: str, n: int) -> int:
    """Number of x^2 = 1 in V_*(GF(2)G) for the dihedral and quaternion families."""
    if n < 2:
        raise ValueError("need n >= 2")
    if family == "D":
        return 2 ** (2**n + 2) - 2 ** (3 * 2 ** (n - 2) + 1)
    if family == "Q":
        return 2 ** (3 * 2 ** (n - 2) + 1)
    if family == "SD":
        raise NotImplementedError("no closed form for the semidihedral family")
    raise ValueError(f"unknown family {family!r}")


def theta_case_counts(n: int) -> dict[str, int]:
    """Dihedral count split by the augmentation of the b-component x2."""
    return {
        "chi_x2_0": 2 ** (3 * 2 ** (n - 2)) * (2 ** (2 ** (n - 2) + 1) - 2),
        "chi_x2_1": 2 ** (2**n + 1),
    }


def top_t_identity(g: AbelianType, m: int) -> tuple[int, int]:
    """(t_{e-2} from its definition, (m/2) 2^(f_{e-1} + f_e) (2^f_e - 1)) for exponent 2^e, e >= 2."""
    e = len(g.f)
    if e < 2:
        raise ValueError("needs exponent >= 4")
    lhs = t_value(g, m, e - 2)
    rhs = _half(m, 2 ** (g.mult(e - 1) + g.mult(e)) * (2 ** g.mult(e) - 1), "t_{e-2}")
    return lhs, rhs


# names of the public operation contract
lemma1_forward = two_group_invariants
lemma1_order = two_group_unitary_order
lemma1_rank = two_group_unitary_rank
lemma2_forward = odd_group_invariants

"""Finite abelian p-groups described by the multiplicities of their cyclic factors."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

__all__ = ["AbelianType", "all_types"]


@dataclass(frozen=True)
class AbelianType:
    """``f[i-1]`` is the number of factors C_{p^i}; trailing zeros are trimmed."""

    p: int
    f: tuple[int, ...]

    def __post_init__(self):
        f = [int(x) for x in self.f]
        if any(x < 0 for x in f):
            raise ValueError("multiplicities must be non-negative")
        while f and f[-1] == 0:
            f.pop()
        object.__setattr__(self, "f", tuple(f))

    @classmethod
    def from_invariants(cls, p: int, orders: Iterable[int]) -> AbelianType:
        f: list[int] = []
        for o in orders:
            e = 0
            while o % p == 0:
                o //= p
                e += 1
            if o != 1:
                raise ValueError(f"cyclic factor order is not a power of {p}")
            if e == 0:
                continue
            f += [0] * (e - len(f))
            f[e - 1] += 1
        return cls(p, tuple(f))

    @classmethod
    def from_counts(cls, p: int, counts: Sequence[int]) -> AbelianType:
        """Recover f from N_i = #{x : x^(p^i) = 1}, i = 0, 1, ..., up to the exponent."""
        logs = []
        for n in counts:
            e = 0
            while n % p == 0 and n > 1:
                n //= p
                e += 1
            if n != 1:
                raise ValueError(f"count is not a power of {p}")
            logs.append(e)
        # log N_i - log N_{i-1} = number of factors of order >= p^i
        d = [logs[i] - logs[i - 1] for i in range(1, len(logs))] + [0]
        return cls(p, tuple(d[i] - d[i + 1] for i in range(len(d) - 1)))

    def exponents(self) -> list[int]:
        """Cyclic factor exponents, largest first."""
        return [i + 1 for i in reversed(range(len(self.f))) for _ in range(self.f[i])]

    @property
    def invariants(self) -> list[int]:
        return [self.p**e for e in self.exponents()]

    @property
    def log_order(self) -> int:
        return sum((i + 1) * c for i, c in enumerate(self.f))

    @property
    def order(self) -> int:
        return self.p**self.log_order

    @property
    def rank(self) -> int:
        return sum(self.f)

    @property
    def exponent(self) -> int:
        return self.p ** len(self.f)

    def mult(self, i: int) -> int:
        """f_i, zero beyond the exponent."""
        return self.f[i - 1] if 1 <= i <= len(self.f) else 0

    def power_order(self, i: int) -> int:
        """|G^{p^i}|."""
        return self.p ** sum(max(e - i, 0) for e in self.exponents())

    def power_torsion_order(self, i: int, j: int = 1) -> int:
        """|G^{p^i}[p^j]|: elements of G^{p^i} killed by p^j."""
        return self.p ** sum(min(max(e - i, 0), j) for e in self.exponents())

    def torsion_order(self, j: int = 1) -> int:
        """|G[p^j]|."""
        return self.power_torsion_order(0, j)

    def counts(self) -> list[int]:
        """N_i = #{x : x^(p^i) = 1} for i = 0..len(f)."""
        return [self.torsion_order(i) for i in range(len(self.f) + 1)]

    def __mul__(self, other: AbelianType) -> AbelianType:
        if other.p != self.p:
            raise ValueError("direct product of groups of different primes")
        n = max(len(self.f), len(other.f))
        return AbelianType(self.p, tuple(self.mult(i) + other.mult(i) for i in range(1, n + 1)))

    def is_elementary(self) -> bool:
        return len(self.f) <= 1

    def __str__(self) -> str:
        if not self.f:
            return "1"
        parts = []
        for i in reversed(range(len(self.f))):
            c = self.f[i]
            if c:
                base = f"C{self.p ** (i + 1)}"
                parts.append(base if c == 1 else f"{base}^{c}")
        return "x".join(parts)

    def to_json(self) -> dict:
        return {"p": self.p, "f": list(self.f), "name": str(self)}

    @classmethod
    def from_json(cls, data: dict) -> AbelianType:
        return cls(int(data["p"]), tuple(data["f"]))


def all_types(p: int, log_order: int) -> list[AbelianType]:
    """Every abelian p-group of order p^log_order, one per partition."""
    from .groups import partitions

    return [AbelianType.from_invariants(p, [p**k for k in part]) for part in partitions(log_order)]

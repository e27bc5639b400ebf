"""Verification suites: every closed form checked against an independent computation.

A suite is a list of checks.  Each check produces an expected value (with a
provenance tag saying where it came from) and a computed value; it passes
only on exact equality.  Reports serialize to a fixed JSON schema.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Any, Callable

import numpy as np

from . import blackbox as bb
from . import formulas as fm
from .abelian import AbelianType, all_types
from .fingerprint import distinguish, fingerprint
from .finite_field import make_field
from .group_algebra import GroupAlgebra
from .groups import GroupTable, abelian_groups, catalog
from .unitary import (
    FAMILIES,
    annihilator_of_power,
    h_set_size,
    maximal_class_group,
    s_star_two_size,
    theta_brute,
    theta_structured,
    unitary_subgroup,
    unitary_type_exact,
)

SUITES = (
    "lemma1", "lemma2", "lemma3", "lemma4", "lemma5", "lemma6", "lemma7",
    "theta", "theorem1", "theorem2", "theorem3",
)

# enumerate V(FG) directly only up to this many normalized units
BRUTE_LIMIT = 2**22

ANCHORS = {
    "lemma1": "abelian 2-groups: rank, complement multiplicities and order of V_*",
    "lemma2": "abelian p-groups, p odd: multiplicities of V_* from power-subgroup orders",
    "lemma3": "abelian 2-groups with V_* = V",
    "lemma4": "|V_*| determines |G| for abelian 2-groups",
    "lemma5": "top power subgroup of an abelian 2-group is elementary",
    "lemma6": "sizes of the sets H_i in V(F C_{2^n})",
    "lemma7": "symmetric involutions in V(F C_{2^n}) and annihilators of (1+a)^i",
    "theta": "number of x^2 = 1 in V_* for dihedral, quaternion and semidihedral groups",
    "theorem1": "abelian base group recovered from the invariants of V_*",
    "theorem2": "maximal-class 2-groups separated by unitary involution counts",
    "theorem3": "2-groups of order 16 separated by their unitary subgroups",
}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    p: int = 2
    m: int = 2
    max_order: int = 32
    parallel: int = 1
    long: bool = False
    format: str = "table"

    def __post_init__(self):
        if self.p not in (2, 3):
            raise ConfigError(f"p must be 2 or 3, got {self.p}")
        if not 1 <= self.m <= 2:
            raise ConfigError(f"m must be 1 or 2, got {self.m}")
        if not 1 <= self.max_order <= 32:
            raise ConfigError(f"max group order must be in [1, 32], got {self.max_order}")
        if self.parallel < 1:
            raise ConfigError("parallelism width must be >= 1")
        if self.format not in ("json", "table"):
            raise ConfigError(f"unknown format {self.format!r}")

    @classmethod
    def from_env(cls, **kw) -> RunConfig:
        if kw.get("parallel") is None:
            kw["parallel"] = int(os.environ.get("UNITARY_FORGE_PARALLEL", "1"))
        return cls(**kw)


@dataclass
class CheckResult:
    id: str
    anchor: str
    expected: Any
    computed: Any
    provenance: str
    status: str
    ms: float

    def __post_init__(self):
        if self.status not in ("pass", "fail", "skipped"):
            raise ValueError(f"bad status {self.status!r}")


@dataclass
class VerificationReport:
    suite: str
    config: dict
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def counts(self) -> dict[str, int]:
        out = {"pass": 0, "fail": 0, "skipped": 0}
        for c in self.checks:
            out[c.status] += 1
        return out

    def to_json(self) -> str:
        return json.dumps(
            {"suite": self.suite, "config": self.config, "checks": [asdict(c) for c in self.checks]},
            indent=2,
        )

    @classmethod
    def from_json(cls, text: str) -> VerificationReport:
        data = json.loads(text)
        return cls(data["suite"], data["config"], [CheckResult(**c) for c in data["checks"]])

    def to_table(self) -> str:
        lines = [f"suite {self.suite}"]
        w = max((len(c.id) for c in self.checks), default=10)
        for c in self.checks:
            lines.append(
                f"  {c.status.upper():7s} {c.id:<{w}}  expected={_short(c.expected)} "
                f"computed={_short(c.computed)} [{c.provenance}] {c.ms:.0f} ms"
            )
        n = self.counts()
        lines.append(f"  {n['pass']} pass, {n['fail']} fail, {n['skipped']} skipped")
        return "\n".join(lines)


def _short(v, limit: int = 60) -> str:
    s = json.dumps(v) if not isinstance(v, str) else v
    return s if len(s) <= limit else s[: limit - 3] + "..."


# -- check plumbing ----------------------------------------------------------

@dataclass
class Check:
    id: str
    provenance: str
    run: Callable[[], tuple[Any, Any]] | None  # returns (expected, computed)
    skip_reason: str | None = None
    expected_if_skipped: Any = None


def _execute(suite: str, check: Check) -> CheckResult:
    anchor = ANCHORS[suite]
    if check.run is None:
        return CheckResult(check.id, anchor, check.expected_if_skipped, f"skipped: {check.skip_reason}",
                           check.provenance, "skipped", 0.0)
    t0 = time.perf_counter()
    try:
        expected, computed = check.run()
        expected, computed = _plain(expected), _plain(computed)
        status = "pass" if expected == computed else "fail"
    except Exception as exc:  # a crashing check is a failing check, the run goes on
        expected, computed, status = None, f"error: {type(exc).__name__}: {exc}", "fail"
    ms = (time.perf_counter() - t0) * 1000.0
    return CheckResult(check.id, anchor, expected, computed, check.provenance, status, round(ms, 3))


def _plain(v):
    """JSON-friendly form, so reports round-trip without loss."""
    if isinstance(v, AbelianType):
        return str(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.bool_,)):
        return bool(v)
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    return v


def run_suite(name: str, config: RunConfig | None = None) -> VerificationReport:
    config = config or RunConfig()
    if name not in SUITES:
        raise ConfigError(f"unknown suite {name!r}; choose from {SUITES + ('all',)}")
    checks = SUITE_BUILDERS[name](config)
    if config.parallel > 1:
        with ThreadPoolExecutor(config.parallel) as pool:
            results = list(pool.map(lambda c: _execute(name, c), checks))
    else:
        results = [_execute(name, c) for c in checks]
    return VerificationReport(name, asdict(config), results)


def run_all(config: RunConfig | None = None) -> list[VerificationReport]:
    return [run_suite(s, config) for s in SUITES]


# -- shared oracles ----------------------------------------------------------

@lru_cache(maxsize=None)
def _unitary_view(group_name: str, p: int, m: int):
    from .groups import parse_group

    return unitary_subgroup(GroupAlgebra(make_field(p, m), parse_group(group_name)))


def unit_type_oracle(g: GroupTable, p: int, m: int) -> tuple[AbelianType, str]:
    """Abelian type of V_*(FG) by enumeration when small, else by the exact linear route."""
    q = p**m
    if q ** (g.order - 1) <= BRUTE_LIMIT:
        return bb.abelian_type(_unitary_view(g.name, p, m)), "brute-force"
    return unitary_type_exact(GroupAlgebra(make_field(p, m), g)), "exact-linear"


def _abelian_2groups(max_order: int) -> list[GroupTable]:
    return [g for o in (2, 4, 8, 16) if o <= max_order for g in abelian_groups(2, o)]


def _ms(config: RunConfig):
    return range(1, config.m + 1)


# -- suites ------------------------------------------------------------

def _two_group_formula_checks(config: RunConfig) -> list[Check]:
    checks = []
    for g in _abelian_2groups(min(config.max_order, 16)):
        gt = bb.abelian_type(g)
        for m in _ms(config):
            small = (2**m) ** (g.order - 1) <= BRUTE_LIMIT

            def run(g=g, gt=gt, m=m):
                inv = fm.two_group_invariants(gt, m)
                vt, _ = unit_type_oracle(g, 2, m)
                return ([str(inv.abelian_type), inv.rank, inv.order], [str(vt), vt.rank, vt.order])

            checks.append(Check(f"type/{g.name}/m{m}", "formula vs " + ("brute-force" if small else "exact-linear"), run))
    hand = [  # evaluated by hand from the rank, multiplicity and order formulas
        ((4,), 1, "C4xC2", 2, 8),
        ((8,), 1, "C8xC2^2", 3, 32),
        ((2, 4), 1, "C4xC2^4", 5, 64),
        ((16,), 1, "C16xC4xC2^3", 5, 512),
    ]
    for inv_orders, m, name, rank, order in hand:
        def run(inv_orders=inv_orders, m=m, name=name, rank=rank, order=order):
            inv = fm.two_group_invariants(AbelianType.from_invariants(2, inv_orders), m)
            return [name, rank, order], [str(inv.abelian_type), inv.rank, inv.order]

        checks.append(Check(f"hand/{name}", "hand-computed", run))
    for o in (8, 16, 32):
        for gt in all_types(2, o.bit_length() - 1):
            if len(gt.f) < 2:
                continue
            for m in _ms(config):
                checks.append(Check(f"top-t/{gt}/m{m}", "definition vs rewritten form",
                                    lambda gt=gt, m=m: fm.top_t_identity(gt, m)))
    return checks


def _odd_group_formula_checks(config: RunConfig) -> list[Check]:
    checks = []
    for o in (3, 9, 27):
        if o > config.max_order:
            continue
        for g in abelian_groups(3, o):
            gt = bb.abelian_type(g)
            for m in _ms(config):
                units = (3**m) ** (o - 1)
                if units <= BRUTE_LIMIT:
                    def run(g=g, gt=gt, m=m):
                        return (str(fm.odd_group_invariants(gt, m).abelian_type),
                                str(bb.abelian_type(_unitary_view(g.name, 3, m))))
                    checks.append(Check(f"brute/{g.name}/m{m}", "formula vs brute-force", run))
                else:
                    checks.append(Check(f"brute/{g.name}/m{m}", "brute-force", None,
                                        skip_reason=f"{units} normalized units exceed the enumeration bound",
                                        expected_if_skipped=str(fm.odd_group_invariants(gt, m).abelian_type)))
                if (3**m) ** o < 2**63:
                    def run_exact(g=g, gt=gt, m=m):
                        return (str(fm.odd_group_invariants(gt, m).abelian_type),
                                str(unitary_type_exact(GroupAlgebra(make_field(3, m), g))))
                    checks.append(Check(f"exact/{g.name}/m{m}", "formula vs exact-linear", run_exact))
    checks.append(Check("order/C9", "closed form |F|^((|G|-1)/2)",
                        lambda: (3**4, fm.odd_group_invariants(AbelianType(3, (0, 1)), 1).order)))
    return checks


def _full_unitary_checks(config: RunConfig) -> list[Check]:
    checks = []
    for g in _abelian_2groups(min(config.max_order, 16)):
        gt = bb.abelian_type(g)
        for m in _ms(config):
            def run(g=g, gt=gt, m=m):
                predicted = gt.is_elementary() or (gt == AbelianType(2, (0, 1)) and m == 1)
                vt, _ = unit_type_oracle(g, 2, m)
                return [predicted, predicted], [fm.is_full_unitary(gt, m), vt.order == (2**m) ** (g.order - 1)]

            checks.append(Check(f"full/{g.name}/m{m}", "classification vs formula and enumeration", run))
    return checks


def _base_order_checks(config: RunConfig) -> list[Check]:
    checks = []
    for g in _abelian_2groups(min(config.max_order, 16)):
        for m in _ms(config):
            def run(g=g, m=m):
                vt, _ = unit_type_oracle(g, 2, m)
                return g.order, fm.order_of_base_group(vt.order, 2**m)

            checks.append(Check(f"base-order/{g.name}/m{m}", "group order", run))
    for (vo, q), want in [((32, 2), 8), ((2**13, 2), 16)]:
        checks.append(Check(f"window/{vo}/{q}", "window arithmetic",
                            lambda vo=vo, q=q, want=want: (want, fm.order_of_base_group(vo, q))))
    return checks


def _top_power_checks(config: RunConfig) -> list[Check]:
    checks = []
    for g in _abelian_2groups(config.max_order) + (abelian_groups(2, 32) if config.max_order >= 32 else []):
        gt = bb.abelian_type(g)
        if gt.exponent < 4:
            continue
        e = len(gt.f)

        def run(g=g, e=e):
            top = bb.power_subgroup(g, 2 ** (e - 1))
            return top.order, bb.torsion_subgroup(top, 2).order

        checks.append(Check(f"top/{g.name}", "enumeration of the group table", run))
    return checks


def h_closed_form(n: int, i: int) -> int:
    half = 2 ** (n - 1)
    if i >= half:
        return 2 ** (2**n - 1)
    if i % 2:
        return 0
    return 2 ** (3 * 2 ** (n - 2) + i // 2)


def _h_set_checks(config: RunConfig) -> list[Check]:
    checks = []
    for n in (2, 3, 4):
        def run(n=n):
            idx = range(2**n)
            return [h_closed_form(n, i) for i in idx], [h_set_size(n, i) for i in idx]

        checks.append(Check(f"H/n{n}", "closed form vs enumeration", run))
    return checks


def _symmetric_involution_checks(config: RunConfig) -> list[Check]:
    checks = []
    for n in (2, 3, 4):
        checks.append(Check(f"S2/n{n}", "closed form vs enumeration",
                            lambda n=n: (2 ** (2 ** (n - 2) + 1), s_star_two_size(n))))
        checks.append(Check(f"annihilator/n{n}", "dimension i vs rank computation",
                            lambda n=n: (list(range(2**n + 1)), [annihilator_of_power(n, i) for i in range(2**n + 1)])))
    return checks


def _theta_algebra(family: str, n: int) -> GroupAlgebra:
    return GroupAlgebra(make_field(2), maximal_class_group(family, n))


def _theta(config: RunConfig) -> list[Check]:
    checks = []
    brute = lru_cache(maxsize=None)(lambda fam, n: theta_brute(_theta_algebra(fam, n)).theta)
    for n in (2, 3):
        for fam in ("D", "Q"):
            checks.append(Check(f"brute/{fam}/n{n}", "closed form vs brute-force",
                                lambda fam=fam, n=n: (fm.theta_closed_form(fam, n), brute(fam, n))))
    checks.append(Check("brute/SD/n3-between", "strict bounds vs brute-force",
                        lambda: (True, fm.theta_closed_form("Q", 3) < brute("SD", 3) < fm.theta_closed_form("D", 3))))
    checks.append(Check("chain/n3", "ordering by brute-force",
                        lambda: (True, brute("Q", 3) < brute("SD", 3) < brute("D", 3))))
    for fam in FAMILIES:
        checks.append(Check(f"structured/{fam}/n3", "brute-force vs structured",
                            lambda fam=fam: (brute(fam, 3), theta_structured(fam, 3).theta)))
    checks.append(Check("split/D/n3", "closed-form case split vs structured",
                        lambda: (fm.theta_case_counts(3), {k: theta_structured("D", 3).diagnostics[k]
                                                          for k in ("chi_x2_0", "chi_x2_1")})))
    long_checks = [
        Check("structured/D/n4", "closed form vs structured",
              lambda: (fm.theta_closed_form("D", 4), theta_structured("D", 4).theta),
              expected_if_skipped=fm.theta_closed_form("D", 4)),
        Check("structured/Q/n4", "closed form vs structured",
              lambda: (fm.theta_closed_form("Q", 4), theta_structured("Q", 4).theta),
              expected_if_skipped=fm.theta_closed_form("Q", 4)),
        Check("chain/n4", "ordering by structured counts",
              lambda: (True, theta_structured("Q", 4).theta < theta_structured("SD", 4).theta
                       < theta_structured("D", 4).theta),
              expected_if_skipped=True),
    ]
    for c in long_checks:
        if not config.long:
            c.run, c.skip_reason = None, "needs --long"
        checks.append(c)
    return checks


def _reconstruction_checks(config: RunConfig) -> list[Check]:
    from .groups import parse_group

    checks = []
    cases = [(2, o) for o in (2, 4, 8, 16, 32)] + [(3, o) for o in (3, 9, 27)]
    for p, o in cases:
        if o > config.max_order:
            continue
        for m in (1, 2):
            def run(p=p, o=o, m=m):
                got, unique = [], []
                for gt in all_types(p, round(np.log(o) / np.log(p))):
                    res = fm.reconstruct(fm.forward(gt, m))
                    got.append(str(res.base_type))
                    unique.append(sum(ok for _, _, ok in res.candidates))
                want = [str(gt) for gt in all_types(p, round(np.log(o) / np.log(p)))]
                return [want, [1] * len(want)], [got, unique]

            checks.append(Check(f"roundtrip/p{p}/order{o}/m{m}", "forward formulas", run))
    # reconstruction from enumerated invariants
    for name, p, m in [("C4", 2, 1), ("C2xC4", 2, 1), ("C8", 2, 1), ("C3", 3, 2)]:
        def run(name=name, p=p, m=m):
            want = str(bb.abelian_type(parse_group(name)))
            v = _unitary_view(name, p, m)
            vt = bb.abelian_type(v)
            inv = fm.UnitaryInvariants(vt.order, vt.rank, p, m, vt)
            return want, str(fm.reconstruct(inv).base_type)

        checks.append(Check(f"from-brute/{name}/p{p}/m{m}", "brute-force invariants", run))
    for g in abelian_groups(2, 32) if config.max_order >= 32 else []:
        def run(g=g):
            vt = unitary_type_exact(GroupAlgebra(make_field(2), g))
            inv = fm.UnitaryInvariants(vt.order, vt.rank, 2, 1, vt)
            return str(bb.abelian_type(g)), str(fm.reconstruct(inv).base_type)

        c = Check(f"from-exact/{g.name}/m1", "exact-linear invariants", run)
        if not config.long:
            c.run, c.skip_reason = None, "needs --long"
            c.expected_if_skipped = str(bb.abelian_type(g))
        checks.append(c)
    return checks


def _maximal_class_checks(config: RunConfig) -> list[Check]:
    checks = []
    for n in (2, 3):
        def run(n=n):
            groups = [maximal_class_group(f, n) for f in FAMILIES if n >= 3 or f != "SD"]
            _, pairs = distinguish(groups, by=("theta",))
            return [True] * len(pairs), [p.separated for p in pairs]

        checks.append(Check(f"theta-separates/n{n}", "pairwise separation", run))
    c = Check("theta-separates/n4", "structured counts",
              lambda: (3, len({theta_structured(f, 4).theta for f in FAMILIES})))
    if not config.long:
        c.run, c.skip_reason, c.expected_if_skipped = None, "needs --long", 3
    checks.append(c)
    return checks


# values stated for the order-16 catalog over GF(2)
ORDER16_ORDERS = {
    "Q8xC2": 2**11, "M16": 2**10, "Q16": 2**10, "C4sC4": 2**11, "SD16": 2**11,
    "D8YC4": 2**11, "D16": 2**12, "G44": 2**12, "D8xC2": 2**13,
}
ORDER16_DERIVED = {
    "M16": "C2^3", "Q16": "C4xC2^2", "C4sC4": "C2^4", "SD16": "C4xC2^4",
    "D8YC4": "C2", "G44": "C2^4", "D16": "C4xC2^5",
}
# V_* = G x C2^k as stated for these groups
ORDER16_SPLIT = {"Q8": 3, "D8": 3, "Q8xC2": 7, "D8YC4": 7}


def product_spectrum(spectrum: dict[int, int], k: int) -> dict[int, int]:
    """Order spectrum of G x C2^k from that of G."""
    out = {}
    for o, c in spectrum.items():
        if o == 1:
            out[1] = out.get(1, 0) + 1
            out[2] = out.get(2, 0) + 2**k - 1
        else:
            out[o] = out.get(o, 0) + c * 2**k
    return dict(sorted(out.items()))


def _order16_checks(config: RunConfig) -> list[Check]:
    from .groups import parse_group

    box: dict[str, Any] = {}

    def fps():
        if "fps" not in box:
            box["fps"], box["pairs"] = distinguish(catalog(16, "nonabelian"), by=("order", "hamiltonian", "derived"))
        return box["fps"], box["pairs"]

    checks = [Check("orders", "stated ladder vs brute-force",
                    lambda: (ORDER16_ORDERS, {k: f.order for k, f in fps()[0].items()}))]
    for name, want in ORDER16_DERIVED.items():
        checks.append(Check(f"derived/{name}", "stated type vs commutator closure",
                            lambda name=name, want=want: (want, str(fps()[0][name].derived))))
    checks.append(Check("hamiltonian", "flag true exactly for Q8xC2",
                        lambda: ({k: k == "Q8xC2" for k in ORDER16_ORDERS},
                                 {k: f.hamiltonian for k, f in fps()[0].items()})))
    checks.append(Check("separated", "order, hamiltonian flag and derived type",
                        lambda: ([], [(p.first, p.second) for p in fps()[1] if not p.separated])))
    for name, k in ORDER16_SPLIT.items():
        def run(name=name, k=k):
            g = parse_group(name)
            return product_spectrum(bb.order_spectrum(g), k), bb.order_spectrum(_unitary_view(name, 2, 1))

        checks.append(Check(f"spectrum/{name}", f"spectrum of G x C2^{k}", run))
    checks.append(Check("hamiltonian/order8", "flag true exactly for Q8",
                        lambda: ({"D8": False, "Q8": True},
                                 {n: fingerprint(_unitary_view(n, 2, 1)).hamiltonian for n in ("D8", "Q8")})))
    return checks


SUITE_BUILDERS: dict[str, Callable[[RunConfig], list[Check]]] = {
    "lemma1": _two_group_formula_checks,
    "lemma2": _odd_group_formula_checks,
    "lemma3": _full_unitary_checks,
    "lemma4": _base_order_checks,
    "lemma5": _top_power_checks,
    "lemma6": _h_set_checks,
    "lemma7": _symmetric_involution_checks,
    "theta": _theta,
    "theorem1": _reconstruction_checks,
    "theorem2": _maximal_class_checks,
    "theorem3": _order16_checks,
}

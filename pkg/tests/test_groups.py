import numpy as np
import pytest

from unitary_forge import blackbox as bb
from unitary_forge.abelian import AbelianType, all_types
from unitary_forge.groups import (
    abelian_group,
    catalog,
    central_product_d8_c4,
    cyclic,
    dihedral,
    g44,
    m16,
    parse_group,
    quaternion,
    semidihedral,
)


def _affine_spectrum(units, n=8):
    """Order spectrum of {x -> u x + t mod n}, computed without any group table."""
    elems = [(u, t) for u in units for t in range(n)]

    def compose(f, g):
        return (f[0] * g[0] % n, (f[0] * g[1] + f[1]) % n)

    counts = {}
    for e in elems:
        cur, k = e, 1
        while cur != (1, 0):
            cur, k = compose(cur, e), k + 1
        counts[k] = counts.get(k, 0) + 1
    return dict(sorted(counts.items()))


def test_spectra_against_affine_representations():
    assert bb.order_spectrum(dihedral(3)) == _affine_spectrum((1, 7)) == {1: 1, 2: 9, 4: 2, 8: 4}
    assert bb.order_spectrum(semidihedral(3)) == _affine_spectrum((1, 3))


def test_quaternion_spectrum():
    assert bb.order_spectrum(quaternion(2)) == {1: 1, 2: 1, 4: 6}
    assert bb.order_spectrum(quaternion(3)) == {1: 1, 2: 1, 4: 10, 8: 4}


def test_family_relations():
    d = dihedral(3)
    a, b = d.generators
    assert d.power(a, 8) == 0 and d.power(b, 2) == 0
    assert d.word((b, 1), (a, 1), (b, -1)) == d.power(a, 7)
    sd = semidihedral(3)
    a, b = sd.generators
    assert sd.word((b, 1), (a, 1), (b, -1)) == sd.power(a, 3)
    q = quaternion(3)
    a, b = q.generators
    assert q.power(b, 2) == q.power(a, 4)


def test_m16_and_g44():
    g = m16()
    d = bb.derived_subgroup(g)
    a = g.generators[0]
    assert d.order == 2 and g.power(a, 4) in d.elements
    h = g44()
    a, b, c = h.generators
    assert h.commutator(a, c) == b
    assert b in bb.center(h).elements
    assert h.order // bb.derived_subgroup(h).order == 8


def test_central_product():
    g = central_product_d8_c4()
    assert g.order == 16
    assert bb.center(g).order == 4


def test_catalog_sizes():
    assert len(catalog(16, "nonabelian")) == 9
    assert [g.name for g in catalog(8, "abelian")] == ["C8", "C2xC4", "C2^3"]
    assert [g.name for g in catalog(4, "all")] == ["C4", "C2^2"]
    assert len(catalog(8)) == 5
    assert len(catalog(32, "abelian")) == 7
    with pytest.raises(ValueError):
        catalog(12)
    with pytest.raises(ValueError):
        catalog(32, "nonabelian")


def test_order16_groups_pairwise_nonisomorphic():
    def invariants(g):
        return (tuple(sorted(bb.order_spectrum(g).items())), bb.abelian_type(bb.center(g)),
                bb.derived_subgroup(g).order, bb.is_hamiltonian(g))

    groups = catalog(16, "nonabelian")
    inv = {g.name: invariants(g) for g in groups}
    # Q8xC2 and C4sC4 share a spectrum (the Hamiltonian flag separates them);
    # so do D8xC2 and D8YC4 (centers C2^2 and C4)
    assert len(set(inv.values())) == 9


def test_derived_subgroup_is_normal_with_abelian_quotient():
    for g in catalog(16, "nonabelian"):
        d = bb.derived_subgroup(g)
        assert bb.is_normal(g, d)
        # G/G' abelian: every commutator lies in G'
        x, y = np.meshgrid(g.elements, g.elements)
        assert np.all(d.contains(bb.commutators(g, x.ravel(), y.ravel())))


def test_hamiltonian():
    assert bb.is_hamiltonian(quaternion(2))
    assert not bb.is_hamiltonian(dihedral(2))
    assert not bb.is_hamiltonian(cyclic(8))
    assert [g.name for g in catalog(16, "nonabelian") if bb.is_hamiltonian(g)] == ["Q8xC2"]


def test_derived_of_d8():
    d = bb.derived_subgroup(dihedral(2))
    g = dihedral(2)
    assert sorted(d.elements) == sorted([0, g.power(g.generators[0], 2)])


def test_abelian_types_roundtrip():
    for k in range(1, 6):
        for t in all_types(2, k):
            g = abelian_group(t.invariants)
            assert bb.abelian_type(g) == t
    g = abelian_group([2, 4])
    assert bb.power_subgroup(g, 2).order == 2
    assert bb.torsion_subgroup(bb.power_subgroup(g, 2), 2).order == 2


def test_abelian_type_accessors():
    t = AbelianType.from_invariants(2, [4, 2, 2, 2])
    assert str(t) == "C4xC2^3" and t.order == 32 and t.rank == 4 and t.exponent == 4
    assert t.power_order(1) == 2 and t.torsion_order() == 16
    assert AbelianType.from_counts(2, t.counts()) == t
    assert AbelianType.from_json(t.to_json()) == t


def test_parse_group():
    assert parse_group("SD16").family == "semidihedral"
    assert parse_group("C2xC4").order == 8
    assert parse_group("C2^3").order == 8
    assert parse_group("C4sC4").name == "C4sC4"
    for bad in ("D12", "X8", "SD8", "C4xx"):
        with pytest.raises(ValueError, match="valid"):
            parse_group(bad)


def test_relabel_keeps_invariants():
    g = semidihedral(3)
    rng = np.random.default_rng(3)
    perm = np.concatenate([[0], 1 + rng.permutation(g.order - 1)])
    h = g.relabel(perm)
    assert bb.order_spectrum(h) == bb.order_spectrum(g)
    assert bb.derived_subgroup(h).order == bb.derived_subgroup(g).order

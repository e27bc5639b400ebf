import pytest

from unitary_forge import formulas as fm
from unitary_forge.abelian import AbelianType, all_types


def t(*orders, p=2):
    return AbelianType.from_invariants(p, orders)


def test_hand_values():
    inv = fm.two_group_invariants(t(2, 4), 1)
    assert (inv.rank, inv.order, str(inv.abelian_type), str(inv.complement)) == (5, 64, "C4xC2^4", "C2^3")
    assert str(fm.two_group_invariants(t(4), 1).abelian_type) == "C4xC2"
    assert str(fm.two_group_invariants(t(8), 1).abelian_type) == "C8xC2^2"
    assert str(fm.two_group_invariants(t(16), 1).abelian_type) == "C16xC4xC2^3"


def test_cyclic_orders_closed_form():
    for n in range(2, 7):
        assert fm.two_group_unitary_order(t(2**n), 1) == 2 ** (2 ** (n - 1) + 1)


def test_odd_p_values():
    assert fm.odd_group_invariants(t(9, p=3), 1).abelian_type.f == (2, 1)
    assert fm.odd_group_invariants(t(3, p=3), 1).abelian_type == t(3, p=3)
    assert fm.odd_group_invariants(t(3, 3, p=3), 1).abelian_type.f == (4,)
    for k in range(1, 4):
        for gt in all_types(3, k):
            for m in (1, 2):
                assert fm.odd_group_invariants(gt, m).order == (3**m) ** ((gt.order - 1) // 2)


def test_forward_formulas_internally_consistent():
    # two_group_invariants raises if the rank/order formulas disagree with the type
    for k in range(1, 8):
        for gt in all_types(2, k):
            for m in (1, 2, 3):
                inv = fm.two_group_invariants(gt, m)
                assert inv.abelian_type.order == inv.order


def test_top_t_rewrite():
    for k in range(2, 7):
        for gt in all_types(2, k):
            if gt.exponent >= 4:
                a, b = fm.top_t_identity(gt, 1)
                assert a == b


def test_full_unitary_classification():
    for k in range(1, 6):
        for gt in all_types(2, k):
            for m in (1, 2, 3):
                want = gt.is_elementary() or (gt == t(4) and m == 1)
                assert fm.is_full_unitary(gt, m) == want


def test_order_of_base_group_examples():
    assert fm.order_of_base_group(2, 2) == 2
    assert fm.order_of_base_group(32, 2) == 8
    assert fm.order_of_base_group(2**13, 2) == 16
    assert fm.order_of_base_group(81, 3) == 9
    with pytest.raises(fm.InconsistentInput):
        fm.order_of_base_group(3**5, 3)
    with pytest.raises(fm.InconsistentInput):
        fm.order_of_base_group(48, 2)


def test_base_order_windows_are_disjoint():
    for m in (1, 2, 3):
        for k in range(1, 7):
            for gt in all_types(2, k):
                assert fm.order_of_base_group(fm.two_group_unitary_order(gt, m), 2**m) == gt.order


def test_reconstruct_candidates():
    res = fm.reconstruct(fm.two_group_invariants(t(4), 1))
    assert res.base_type == t(4)
    assert [str(c[0]) for c in res.candidates] == ["C4", "C2^2"]
    assert [c[2] for c in res.candidates] == [True, False]
    assert fm.reconstruct(fm.odd_group_invariants(t(3, p=3), 2)).base_type == t(3, p=3)


def test_reconstruct_order_only_input_and_errors():
    inv = fm.two_group_invariants(t(8), 1)
    by_rank = fm.UnitaryInvariants(inv.order, inv.rank, 2, 1)
    # C8 and C2xC4 both give rank <= 5 at order 8; rank alone still separates them here
    assert fm.reconstruct(by_rank).base_type == t(8)
    with pytest.raises(fm.InconsistentInput):
        fm.reconstruct(fm.UnitaryInvariants(64, 1, 2, 1, t(64)))


def test_uniqueness_violation_carries_matches(monkeypatch):
    # a forward map that forgets the group makes every candidate match
    fixed = fm.two_group_invariants(t(4), 1)
    monkeypatch.setattr(fm, "forward", lambda gt, m: fixed)
    with pytest.raises(fm.UniquenessViolation) as info:
        fm.reconstruct(fixed)
    assert sorted(map(str, info.value.matches)) == ["C2^2", "C4"]


def test_theta_closed_forms():
    assert [fm.theta_closed_form("D", n) for n in (2, 3, 4)] == [48, 896, 2**18 - 2**13]
    assert [fm.theta_closed_form("Q", n) for n in (2, 3, 4)] == [16, 128, 8192]
    with pytest.raises(NotImplementedError):
        fm.theta_closed_form("SD", 3)


def test_invariants_json_roundtrip():
    inv = fm.two_group_invariants(t(2, 8), 2)
    assert fm.UnitaryInvariants.from_json(inv.to_json()) == inv
    with pytest.raises(ValueError):
        fm.UnitaryInvariants(10, 1, 2, 1, t(8))

import numpy as np
import pytest

from unitary_forge.finite_field import make_field
from unitary_forge.group_algebra import CapacityError, GroupAlgebra
from unitary_forge.groups import abelian_group, cyclic, dihedral, quaternion, semidihedral


def test_one_plus_a_to_the_fourth_vanishes_in_gf2_c4():
    alg = GroupAlgebra(make_field(2), cyclic(4))
    x = alg.one + alg.embed(1)
    assert x**4 == alg.zero
    assert x**3 != alg.zero


def test_inverse_by_exhaustive_search():
    alg = GroupAlgebra(make_field(2), cyclic(4))
    a = alg.embed(1)
    x = alg.one + a + a * a
    y = x.unit_inverse()
    assert x * y == alg.one
    normalized = [alg.from_key(int(k)) for k in range(16) if alg.from_key(int(k)).augmentation().value == 1]
    assert len(normalized) == 8
    assert [z for z in normalized if x * z == alg.one] == [y]


def test_unit_inverse_rejects_augmentation_zero():
    alg = GroupAlgebra(make_field(2), cyclic(4))
    with pytest.raises(ValueError):
        (alg.one + alg.embed(1)).unit_inverse()


def test_tilde_on_semidihedral_base():
    alg = GroupAlgebra(make_field(2), cyclic(8))
    assert alg.embed(3).tilde() == alg.embed(7)
    assert alg.embed(1).tilde() == alg.embed(5)


def test_star_reverses_products_elementwise():
    alg = GroupAlgebra(make_field(3, 2), dihedral(2))
    rng = np.random.default_rng(0)
    for _ in range(50):
        x = alg.from_key(int(alg.random_keys(rng, 1)[0]))
        y = alg.from_key(int(alg.random_keys(rng, 1)[0]))
        assert (x * y).star() == y.star() * x.star()
        assert x.star().star() == x


def test_mixed_algebras_rejected():
    a = GroupAlgebra(make_field(2), cyclic(4))
    b = GroupAlgebra(make_field(2), cyclic(8))
    with pytest.raises(ValueError):
        a.one + b.one


def test_key_capacity_guard():
    with pytest.raises(CapacityError):
        GroupAlgebra(make_field(3, 2), abelian_group([27]))


def test_encode_decode_roundtrip():
    alg = GroupAlgebra(make_field(3), abelian_group([3, 3]))
    rng = np.random.default_rng(5)
    keys = alg.random_keys(rng, 500)
    assert np.array_equal(alg.encode(alg.decode(keys)), keys)


@pytest.mark.parametrize("group", [quaternion(2), semidihedral(3), abelian_group([2, 4])])
def test_packed_multiplication_matches_rows(group):
    alg = GroupAlgebra(make_field(2), group)
    rng = np.random.default_rng(2)
    x, y = alg.random_keys(rng, 2000), alg.random_keys(rng, 2000)
    assert np.array_equal(alg.mul_keys(x, y), alg.mul_keys_generic(x, y))
    # constant left factor takes the support-only path
    c = np.full_like(y, x[0])
    assert np.array_equal(alg.mul_keys(c, y), alg.mul_keys_generic(c, y))


def test_element_multiplication_matches_definition():
    g = dihedral(2)
    alg = GroupAlgebra(make_field(2, 2), g)
    rng = np.random.default_rng(9)
    for _ in range(20):
        x, y = alg.random_keys(rng, 2)
        cx, cy = alg.decode(np.array([x]))[0], alg.decode(np.array([y]))[0]
        want = [0] * g.order
        f = alg.field
        for i in range(g.order):
            for j in range(g.order):
                k = g.mul_table[i, j]
                want[k] = f.add(want[k], f.mul(int(cx[i]), int(cy[j])))
        assert list(alg.decode(alg.mul_keys(x, y))[0]) == want


def test_annihilator_dimensions_in_gf2_c8():
    alg = GroupAlgebra(make_field(2), cyclic(8))
    x = alg.one + alg.embed(1)
    assert [alg.annihilator_dim(x**i) for i in range(9)] == list(range(9))

from collections import Counter

import numpy as np
import pytest

from cayley_ci.groups import (
    FiniteGroup,
    cyclic,
    dihedral,
    direct_product,
    elementary_abelian,
    find_isomorphism,
    quaternion,
    small_groups,
)
from cayley_ci.perm import Perm


def test_small_group_catalogue():
    groups = small_groups(8)
    orders = Counter(g.order for g in groups)
    # isomorphism types of order 1..8: 1,1,1,2,1,2,1,5
    assert orders == Counter({1: 1, 2: 1, 3: 1, 4: 2, 5: 1, 6: 2, 7: 1, 8: 5})
    for g in groups:
        assert np.array_equal(np.sort(g.mul, axis=1), np.tile(np.arange(g.order), (g.order, 1)))
    same_order = [(a, b) for a in groups for b in groups if a is not b and a.order == b.order]
    for a, b in same_order:
        assert find_isomorphism(a, b) is None


def test_associativity_of_tables():
    for g in small_groups(8) + [dihedral(9)]:
        m = g.mul
        n = np.arange(g.order)
        lhs = m[m[:, :, None], n[None, None, :]]  # (a b) c
        rhs = m[n[:, None, None], m[None, :, :]]  # a (b c)
        assert np.array_equal(lhs, rhs)


def test_quaternion_and_dihedral_profiles():
    assert quaternion().order_profile() == Counter({1: 1, 2: 1, 4: 6})
    assert dihedral(4).order_profile() == Counter({1: 1, 2: 5, 4: 2})
    assert not quaternion().is_abelian()
    assert direct_product(cyclic(4), cyclic(2)).is_abelian()


def test_isomorphism_with_a_permutation_group():
    a = Perm.from_cycles(3, (0, 1, 2))
    b = Perm.from_cycles(3, (0, 1))
    elems = sorted({a ** i * b ** j for i in range(3) for j in range(2)})
    S3 = FiniteGroup.from_perms(elems)
    phi = find_isomorphism(dihedral(3), S3)
    assert phi is not None
    D = dihedral(3)
    for x in range(6):
        for y in range(6):
            assert phi[D.mul[x, y]] == S3.mul[phi[x], phi[y]]


def test_right_regular_representation():
    for g in small_groups(8):
        R = g.right_regular()
        assert R.order == g.order
        assert R.is_transitive()


def test_generators_generate():
    for g in small_groups(8) + [elementary_abelian(3, 3), dihedral(9)]:
        assert len(g.closure(g.generators)) == g.order


def test_bad_tables_rejected():
    with pytest.raises(ValueError):
        FiniteGroup([0, 1], np.array([[1, 1], [1, 1]]))

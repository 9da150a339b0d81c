import itertools

import pytest

from cayley_ci import matgroup as mg
from cayley_ci.matgroup import DElem, HElem


def all_h(q):
    return [HElem.from_index(i, q) for i in range(2 * q * q)]


def all_d(q):
    return [DElem(a, x, q) for a in (1, -1) for x in range(q)]


@pytest.mark.parametrize("q", [3, 5, 7])
def test_h_product_is_the_matrix_product(q):
    for p, r in itertools.product(all_h(q), repeat=2):
        assert (p * r).matrix() == mg.mat_mul(p.matrix(), r.matrix(), q)


@pytest.mark.parametrize("q", [3, 5])
def test_bracket_rule_is_the_reversed_matrix_product(q):
    for p, r in itertools.product(all_h(q), repeat=2):
        assert mg.h_mul_bracket(p, r) == mg.h_mul(r, p)


@pytest.mark.parametrize("q", [3, 5, 7])
def test_d_product_is_the_matrix_product(q):
    for p, r in itertools.product(all_d(q), repeat=2):
        assert (p * r).matrix() == mg.mat_mul(p.matrix(), r.matrix(), q)


@pytest.mark.parametrize("q", [3, 5])
def test_d_action_formula_matches_conjugation(q):
    for h in all_h(q):
        for d in all_d(q):
            lhs = mg.mat_mul(h.matrix(), d.matrix(), q)
            rhs = mg.mat_mul(d.matrix(), mg.d_act_h(h, d).matrix(), q)
            assert lhs == rhs


def test_bracket_identities():
    q = 7
    e = mg.identity_h(q)
    for h in all_h(q):
        assert e * h == h == h * e
        assert h * h.inverse() == e
        if h.a == -1:
            assert h * h == e
    assert mg.d_act_h(HElem(1, 3, 2, q), DElem(1, 0, q)) == HElem(1, 3, 2, q)


def test_modulus_checks():
    with pytest.raises(ValueError):
        mg.h_mul(HElem(1, 0, 0, 3), HElem(1, 0, 0, 5))
    for bad in (2, 9, 15, 17):
        with pytest.raises(ValueError):
            mg.check_q(bad)


@pytest.mark.parametrize("q", [3, 5, 7, 11])
def test_group_orders(q):
    groups = mg.build_groups(q)
    assert len(groups.G) == 4 * q**3
    assert len(groups.D) == 2 * q
    assert len(groups.H) == len(groups.K) == 2 * q * q
    assert set(groups.D) & set(groups.H) == {mg.identity_mat(q)}
    assert set(groups.D) & set(groups.K) == {mg.identity_mat(q)}
    assert mg.closure_size(groups.G_gens, q) == 4 * q**3


@pytest.mark.parametrize("q", [3, 5, 7, 11])
def test_orbit_families_are_the_stabilizer_orbits(q):
    fams = mg.orbit_families(q)
    assert [f.kind for f in fams].count("S") == q
    assert [f.kind for f in fams].count("C") == (q - 1) // 2
    assert [f.kind for f in fams].count("P") == q
    computed = sorted(sorted(o) for o in mg.coset_representation(q).D.orbits())
    assert computed == sorted(sorted(f.members) for f in fams)
    paired = [f.label for f in fams if mg.is_self_paired(f)]
    assert [p for p in paired if p.startswith("S")] == ["S_0"]
    assert all(mg.is_self_paired(f) for f in fams if f.kind != "S")


@pytest.mark.parametrize("q", [3, 5, 7])
def test_d_action_orbits_match_the_permutation_image(q):
    cr = mg.coset_representation(q)
    d_elems = all_d(q)
    for i, h in enumerate(all_h(q)):
        orbit = {mg.d_act_h(h, d).index for d in d_elems}
        assert orbit == set(cr.D.orbit(i))


def _smallest_admissible(q):
    # independent restatement of the admissibility rule
    inv2 = pow(2, -1, q)
    for x in range(2, q):
        if x in (1, q - 1, 2, q - 2, inv2) or pow(x, 6, q) == 1:
            continue
        return x
    return None


def test_choose_x():
    assert mg.choose_x(11) == _smallest_admissible(11) == 3
    assert mg.choose_x(13) == _smallest_admissible(13) == 5
    assert mg.valid_x(11, 4)
    with pytest.raises(ValueError):
        mg.choose_x(7)
    with pytest.raises(ValueError):
        mg.build_T(11, 1)


@pytest.mark.parametrize("q,x,size", [(11, 4, 55), (11, None, 55), (13, None, 65), (7, None, 35)])
def test_connection_set_sizes(q, x, size):
    H = mg.h_group(q)
    T = mg.build_T(q, x)
    assert len(T) == size
    assert H.is_inverse_closed(T)
    assert 0 not in T


@pytest.mark.parametrize("q", [3, 5])
def test_small_q_connection_set_is_directed(q):
    H = mg.h_group(q)
    T = mg.build_T(q)
    assert len(T) == q + 1
    assert not H.is_inverse_closed(T)


@pytest.mark.parametrize("q", [3, 5, 7])
def test_alpha_lemma(q):
    assert all(mg.alpha_lemma_checks(q).values())


@pytest.mark.parametrize("q", [7, 11])
def test_alpha_hat_maps_T_to_T_prime(q):
    a = mg.alpha_hat_perm(q)
    assert frozenset(a(t) for t in mg.build_T(q)) == mg.build_Tprime(q)
    assert a(0) == 0


def test_alpha_is_an_involutive_automorphism():
    q = 5
    G = mg.build_groups(q).G
    for g, h in itertools.islice(itertools.product(G, repeat=2), 0, 4000, 7):
        assert mg.alpha(mg.mat_mul(g, h, q), q) == mg.mat_mul(mg.alpha(g, q), mg.alpha(h, q), q)
    assert all(mg.alpha(mg.alpha(g, q), q) == g for g in G)


def test_dihedral_construction():
    A = [mg.Perm.from_cycles(6, (0, 1, 2)), mg.Perm.from_cycles(6, (3, 4, 5))]
    d = mg.dih(A)
    assert d.order == 18
    assert d.regular.order == 18
    x = d.involution
    G = d.group
    assert G.element_order(x) == 2
    with pytest.raises(ValueError):
        mg.dih([mg.Perm.from_cycles(3, (0, 1)), mg.Perm.from_cycles(3, (1, 2))])


def test_special_case():
    sc = mg.special_case_z27()
    R = sc.group
    assert R.order == 54 and len(sc.A) == 27 and len(sc.S) == 9
    assert all(R.element_order(s) == 2 and s not in sc.A for s in sc.S)
    assert sc.gamma.n == 54 and sc.gamma.num_arcs == 486
    assert sc.gamma.is_symmetric()

import itertools
import random

import numpy as np
import pytest

from cayley_ci import matgroup as mg
from cayley_ci.ci import (
    Certificate,
    aut_group_of_group,
    babai_ci_check,
    brute_dci_oracle,
    cayley_iso_witness,
    ci_witness_certificate,
    non_ci_certificate,
    oracle_agreement,
    oracle_cases,
    regular_subgroup_search,
    same_isomorphism_type,
    separation_check,
)
from cayley_ci.digraph import BudgetExceeded, automorphism_group, cayley, isomorphism
from cayley_ci.groups import cyclic, dihedral, direct_product, elementary_abelian, quaternion, small_groups
from cayley_ci.perm import are_conjugate


def brute_aut_count(R):
    n = R.order
    e = R.identity
    others = [g for g in range(n) if g != e]
    count = 0
    for img in itertools.permutations(others):
        m = dict(zip(others, img))
        m[e] = e
        if all(m[int(R.mul[a, b])] == R.mul[m[a], m[b]] for a in range(n) for b in range(n)):
            count += 1
    return count


@pytest.mark.parametrize("R", small_groups(8), ids=lambda g: g.name)
def test_automorphism_counts_match_brute_force(R):
    auts = aut_group_of_group(R)
    assert auts.order == brute_aut_count(R)
    assert auts.perm_group().order == auts.order


@pytest.mark.parametrize("R,order", [(dihedral(9), 54), (cyclic(5), 4), (elementary_abelian(3, 2), 48)])
def test_automorphism_counts_of_larger_groups(R, order):
    assert aut_group_of_group(R).order == order


def test_automorphism_cap():
    with pytest.raises(ValueError):
        aut_group_of_group(mg.h_group(7))
    assert aut_group_of_group(mg.h_group(3), max_order=18).order == 432


def test_cayley_iso_witness():
    R = dihedral(4)
    rnd = random.Random(3)
    auts = aut_group_of_group(R)
    maps = next(auts.iter_maps())
    for _ in range(20):
        S = {g for g in range(8) if g != R.identity and rnd.random() < 0.5}
        beta = maps[rnd.randrange(len(maps))]
        T = {int(beta[s]) for s in S}
        w = cayley_iso_witness(R, S, T, auts)
        assert w is not None and {w(s) for s in S} == T
    assert cayley_iso_witness(cyclic(8), [1], [2]) is None


def test_witness_certificate_round_trip():
    R = cyclic(7)
    cert = ci_witness_certificate(R, [1, 2, 4], [3, 6, 5])
    assert cert.ok
    again = Certificate.from_json(cert.to_json())
    assert again.replay() == cert.checks
    assert ci_witness_certificate(R, [1, 2, 4], [1, 2, 3]) is None


def test_same_isomorphism_type():
    assert same_isomorphism_type(dihedral(4), dihedral(4))
    assert not same_isomorphism_type(dihedral(4), quaternion())
    assert not same_isomorphism_type(direct_product(cyclic(4), cyclic(2)), cyclic(8))
    assert same_isomorphism_type(direct_product(cyclic(2), cyclic(3)), cyclic(6))


def test_rigid_case_has_one_regular_subgroup():
    R = cyclic(7)
    A = automorphism_group(cayley(R, [1])).group
    res = regular_subgroup_search(A, R)
    assert len(res.subgroups) == 1 and res.n_classes == 1 and res.complete


@pytest.mark.parametrize("R", small_groups(8), ids=lambda g: g.name)
def test_right_regular_copy_is_always_found(R):
    rnd = random.Random(11)
    for _ in range(3):
        S = [g for g in range(R.order) if g != R.identity and rnd.random() < 0.4]
        A = automorphism_group(cayley(R, S)).group
        res = regular_subgroup_search(A, R)
        right = np.array([R.mul[:, g] for g in range(R.order)])
        found = {frozenset(map(tuple, rows.tolist())) for rows in res.subgroups}
        assert frozenset(map(tuple, right.tolist())) in found
        for rows in res.subgroups:
            assert all(A.contains(res.as_group(rows).gens[k]) for k in range(len(res.as_group(rows).gens)))


def test_q3_group_has_the_two_expected_classes():
    cr = mg.coset_representation(3)
    res = regular_subgroup_search(cr.G, mg.h_group(3))
    assert res.complete and len(res.subgroups) == 2 and res.n_classes == 2
    groups = [res.as_group(r) for r in res.subgroups]
    assert any(g.same_group(cr.H) for g in groups)
    assert any(g.same_group(cr.K) for g in groups)
    assert are_conjugate(cr.G, cr.H, cr.K) is None


def test_babai_on_small_cyclic_groups():
    assert babai_ci_check(cyclic(5), [1, 2]).is_ci
    res = babai_ci_check(cyclic(8), [1, 2, 5])
    assert not res.is_ci and len(res.classes) >= 2


def test_babai_budget():
    with pytest.raises(BudgetExceeded):
        babai_ci_check(cyclic(8), [1], budget=2)


@pytest.mark.parametrize("R,S", [(cyclic(8), [1, 2, 5]), (dihedral(4), [2])])
def test_known_non_dci_sets(R, S):
    assert not brute_dci_oracle(R, S)
    assert not babai_ci_check(R, S).is_ci


def test_dci_groups_have_no_counterexamples():
    for R in (elementary_abelian(2, 3), quaternion(), cyclic(6)):
        others = [g for g in range(R.order) if g != R.identity]
        assert all(brute_dci_oracle(R, S) for k in range(3) for S in itertools.combinations(others, k))


def test_oracle_on_a_sample():
    cases = [c for c in oracle_cases() if c[0].order <= 5]
    assert len(cases) == 1 + 2 + 4 + 2 * 8 + 16
    agreement = oracle_agreement(cases)
    assert agreement.ok, agreement.disagreements


def test_oracle_case_list_is_deterministic():
    a = oracle_cases()
    b = oracle_cases()
    assert [(R.name, sorted(S)) for R, S in a] == [(R.name, sorted(S)) for R, S in b]
    assert all(R.order != 7 for R, _ in a)


@pytest.mark.parametrize("q", [5, 7, 11])
def test_connection_set_separates(q):
    assert separation_check(q, mg.build_T(q))


def test_identity_alone_does_not_separate():
    assert not separation_check(5, [0])
    assert not separation_check(5, [])


def test_q7_certificate():
    q = 7
    cert = non_ci_certificate(q)
    assert cert.kind == "NonCI" and cert.ok
    again = Certificate.from_json(cert.to_json())
    assert again.replay() == cert.checks
    H = mg.h_group(q)
    assert isomorphism(cayley(H, mg.build_T(q)), cayley(H, mg.build_Tprime(q))) is not None


@pytest.mark.parametrize("q", [3, 5])
def test_small_q_certificates(q):
    cert = non_ci_certificate(q)
    assert cert.ok, cert.checks
    assert Certificate.from_json(cert.to_json()).replay() == cert.checks
    assert len(cert.payload["class_representatives"]) >= 2


def test_tampered_certificate_fails_replay():
    cert = ci_witness_certificate(cyclic(7), [1, 2, 4], [3, 6, 5])
    cert.payload["T"] = [1, 2, 3]
    assert not all(cert.replay().values())
    with pytest.raises(ValueError):
        Certificate("Bogus", {})

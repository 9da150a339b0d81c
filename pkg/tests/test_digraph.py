import itertools
import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cayley_ci.digraph import (
    BudgetExceeded,
    ColoredDigraph,
    Digraph,
    arc_transitive,
    automorphism_group,
    cayley,
    haar,
    isomorphism,
    orbital_coloring,
    two_closure,
    verify_phi_t,
)
from cayley_ci.groups import cyclic, dihedral, elementary_abelian, small_groups
from cayley_ci.matgroup import coset_representation
from cayley_ci.perm import Perm, PermGroup


def undirected(n, edges):
    return Digraph.from_arcs(n, [a for u, v in edges for a in ((u, v), (v, u))])


def petersen():
    pairs = list(itertools.combinations(range(5), 2))
    edges = [(i, j) for i, a in enumerate(pairs) for j, b in enumerate(pairs) if i < j and not set(a) & set(b)]
    return undirected(10, edges)


def cube():
    edges = [(u, u ^ (1 << k)) for u in range(8) for k in range(3) if u < u ^ (1 << k)]
    return undirected(8, edges)


def brute_aut_count(d):
    n = d.n
    return sum(1 for p in itertools.permutations(range(n)) if d.is_isomorphism(d, p))


@pytest.mark.parametrize("graph,order", [
    (Digraph.from_arcs(7, [(i, (i + 1) % 7) for i in range(7)]), 7),
    (undirected(6, list(itertools.combinations(range(6), 2))), 720),
    (petersen(), 120),
    (cube(), 48),
    (Digraph(np.zeros((8, 8), dtype=bool)), 40320),
])
def test_known_automorphism_group_orders(graph, order):
    res = automorphism_group(graph)
    assert res.order == order
    assert all(graph.is_automorphism(g) for g in res.generators)
    assert res.group.order == order


random_digraph = st.integers(1, 6).flatmap(
    lambda n: st.lists(st.booleans(), min_size=n * n, max_size=n * n).map(
        lambda bits: Digraph(np.array(bits, dtype=bool).reshape(n, n))))


@settings(max_examples=80, deadline=None)
@given(random_digraph)
def test_automorphism_order_matches_brute_force(d):
    assert automorphism_group(d).order == brute_aut_count(d)


@settings(max_examples=40, deadline=None)
@given(random_digraph, st.randoms(use_true_random=False))
def test_isomorphism_of_relabelled_copies(d, rnd):
    perm = list(range(d.n))
    rnd.shuffle(perm)
    other = d.relabel(perm)
    m = isomorphism(d, other)
    assert m is not None and d.is_isomorphism(other, m)


def test_non_isomorphic_pair():
    c5 = Digraph.from_arcs(5, [(i, (i + 1) % 5) for i in range(5)])
    assert isomorphism(c5, Digraph(c5.adj.T)) is not None
    path = Digraph.from_arcs(5, [(i, i + 1) for i in range(4)] + [(4, 0), (0, 2)])
    assert isomorphism(c5, path) is None


def test_generator_order_does_not_change_the_group():
    gens = automorphism_group(petersen()).generators
    assert PermGroup(list(reversed(gens)), 10).order == PermGroup(gens, 10).order == 120


def test_budget():
    with pytest.raises(BudgetExceeded):
        automorphism_group(Digraph(np.zeros((9, 9), dtype=bool)), budget=3)


def test_text_formats_round_trip():
    d = petersen()
    assert Digraph.from_text(d.to_text()) == d
    assert d.to_text().splitlines()[0] == "10 30"
    c = orbital_coloring(automorphism_group(d).generators, 10)
    c2 = ColoredDigraph.from_text(c.to_text())
    assert np.array_equal(c.color, c2.color)


def test_cayley_and_haar():
    Z = cyclic(6)
    d = cayley(Z, [1])
    assert d.adj[1, 0] and not d.adj[0, 1]  # 1 - 0 = 1 lies in S
    with pytest.raises(ValueError):
        cayley(Z, [0])
    h = haar(Z, [0, 1])
    ok, side = h.is_bipartite()
    assert ok and h.is_symmetric() and sorted(side) == [0] * 6 + [1] * 6


@pytest.mark.parametrize("R", small_groups(8), ids=lambda g: g.name)
def test_right_regular_copy_lies_in_every_cayley_automorphism_group(R):
    rnd = random.Random(7)
    others = [g for g in range(R.order) if g != R.identity]
    for _ in range(5):
        S = [g for g in others if rnd.random() < 0.5]
        A = automorphism_group(cayley(R, S)).group
        assert all(A.contains(R.right_translation(g)) for g in range(R.order))


def test_orbital_coloring_of_a_transitive_group():
    c = orbital_coloring(dihedral(5).right_regular().gens, 10)
    assert (np.diagonal(c.color) == 0).all()
    assert c.num_colors == 10


@pytest.mark.parametrize("q,order", [(3, 108), (5, 500)])
def test_two_closure(q, order):
    cr = coset_representation(q)
    res = two_closure(cr.G.gens, cr.degree)
    assert res.order == order
    assert PermGroup(res.generators, cr.degree).same_group(cr.G)


def test_two_closure_of_a_non_closed_group():
    # the cyclic group on 4 points generated by a 4-cycle is 2-closed; A4 on 4 points is not
    a4 = [Perm.from_cycles(4, (0, 1, 2)), Perm.from_cycles(4, (1, 2, 3))]
    assert two_closure(a4, 4).order == 24


def test_arc_transitivity():
    assert arc_transitive(petersen(), automorphism_group(petersen()))
    p = Digraph.from_arcs(3, [(0, 1), (1, 2)])
    assert not arc_transitive(p, automorphism_group(p))


@pytest.mark.parametrize("q", [5, 7])
def test_phi_isomorphism(q):
    assert all(verify_phi_t(q, t) for t in range(1, q))
    with pytest.raises(ValueError):
        verify_phi_t(q, 0)


def test_elementary_abelian_cayley_graph():
    Z = elementary_abelian(2, 3)
    d = cayley(Z, [Z.index(v) for v in ((1, 0, 0), (0, 1, 0), (0, 0, 1))])
    assert automorphism_group(d).order == 48
    assert math.factorial(3) * 8 == 48

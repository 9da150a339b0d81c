"""Cayley-isomorphism analysis: Babai's criterion, regular subgroups, certificates.

Babai's criterion says Cay(R, S) is a DCI-graph exactly when its automorphism
group has a single conjugacy class of regular subgroups isomorphic to R.  The
search here enumerates those subgroups outright, so every answer comes with
the subgroups (or automorphisms) that justify it.
"""

from __future__ import annotations

import json
import random
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from itertools import permutations

import numpy as np

from .digraph import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    Digraph,
    arc_transitive,
    automorphism_group,
    cayley,
    haar,
    isomorphism,
)
from .groups import FiniteGroup, _bfs_words, elementary_abelian, find_isomorphism, small_groups
from .perm import Perm, PermGroup, are_conjugate, is_regular

ORACLE_SEED = 20200220
ORACLE_SAMPLES = 100
AUT_ORDER_CAP = 54
_CHUNK_ENTRIES = 1 << 23


# -- certificates -------------------------------------------------------------

CERT_KINDS = ("NonCI", "NonConjugacy", "BCICounterexample", "CIWitness")


@dataclass
class Certificate:
    """A conclusion plus the data needed to re-check it.

    ``checks`` records the outcome of each check when the certificate was
    built; ``replay`` recomputes them from ``payload`` alone.
    """

    kind: str
    payload: dict
    checks: dict[str, bool] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in CERT_KINDS:
            raise ValueError(f"unknown certificate kind {self.kind!r}")

    @property
    def ok(self) -> bool:
        return bool(self.checks) and all(self.checks.values())

    def to_dict(self) -> dict:
        return {"kind": self.kind, "payload": self.payload,
                "replay": [{"check": k, "expected": True, "actual": v} for k, v in self.checks.items()]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1)

    @classmethod
    def from_json(cls, text: str) -> Certificate:
        d = json.loads(text)
        return cls(d["kind"], d["payload"], {c["check"]: c["actual"] for c in d["replay"]})

    def replay(self, deep: bool = False) -> dict[str, bool]:
        """Re-run the checks from the payload; ``deep`` repeats exhaustive searches too."""
        route = self.payload.get("route")
        if route == "isomorphism":
            return _replay_isomorphism(self.payload, deep)
        if route == "non-conjugate regular subgroups":
            return _replay_non_conjugate(self.payload)
        if self.kind == "BCICounterexample":
            return _replay_bci(self.payload)
        if self.kind == "CIWitness":
            return _replay_witness(self.payload)
        raise ValueError("certificate has no replayable route")


def _perms(lists: Iterable[Sequence[int]]) -> list[Perm]:
    return [Perm(p) for p in lists]


def _plain(p: Perm) -> list[int]:
    return [int(v) for v in p.images]


# -- element-array helpers ----------------------------------------------------

def _key(rows: np.ndarray) -> bytes:
    """Order-independent fingerprint of a set of permutations."""
    return np.unique(rows, axis=0).tobytes()


def _conjugate_rows(rows: np.ndarray, g: np.ndarray, g_inv: np.ndarray) -> np.ndarray:
    # (g^-1 x g)[i] = g[x[g^-1[i]]]
    return g[rows[:, g_inv]]


def _semiregular_orders(elems: np.ndarray, max_order: int) -> tuple[np.ndarray, np.ndarray]:
    """Element orders (0 when above max_order) and a semiregularity mask."""
    n = elems.shape[1]
    ident = np.arange(n, dtype=elems.dtype)
    orders = np.zeros(len(elems), dtype=np.int64)
    semireg = np.ones(len(elems), dtype=bool)
    power = elems.copy()
    for k in range(1, max_order + 1):
        fixed = power == ident
        is_id = fixed.all(axis=1)
        open_ = orders == 0
        semireg &= ~(open_ & ~is_id & fixed.any(axis=1))
        orders[open_ & is_id] = k
        if (orders > 0).all():
            break
        power = np.take_along_axis(elems, power, axis=1)
    return orders, semireg


def _table_from_regular(rows: np.ndarray) -> FiniteGroup:
    """Multiplication table of a regular group whose row v sends 0 to v."""
    n = rows.shape[1]
    return FiniteGroup(list(range(n)), rows.T.astype(np.int32), name="regular subgroup")


def _dihedral_half(G: FiniteGroup) -> list[int] | None:
    """Elements of odd order, when they form an abelian index-2 subgroup inverted by an involution."""
    odd = [i for i in range(G.order) if G.element_orders[i] % 2 == 1]
    if 2 * len(odd) != G.order:
        return None
    sub = np.array(odd)
    block = G.mul[np.ix_(sub, sub)]
    if not np.isin(block, sub).all() or not np.array_equal(block, block.T):
        return None
    x = next(i for i in range(G.order) if G.element_orders[i] % 2 == 0)
    if G.element_orders[x] != 2:
        return None
    conj = G.mul[G.mul[x, sub], x]
    return odd if np.array_equal(conj, G.inv[sub]) else None


def same_isomorphism_type(X: FiniteGroup, target: FiniteGroup) -> bool:
    """Exact isomorphism test with cheap routes for abelian and odd generalised dihedral targets."""
    if X.order != target.order or X.order_profile() != target.order_profile():
        return False
    if target.is_abelian():
        # finite abelian groups are determined by their order statistics
        return X.is_abelian()
    if _dihedral_half(target) is not None:
        # Dih(A) with |A| odd: A is the odd part, abelian, fixed by the profile
        return _dihedral_half(X) is not None
    return find_isomorphism(X, target) is not None


# -- regular subgroups --------------------------------------------------------

@dataclass
class RegularSearchResult:
    subgroups: list[np.ndarray]  # element rows, row v sends 0 to v
    class_of: list[int]  # ambient conjugacy class per subgroup
    complete: bool
    nodes: int

    @property
    def n_classes(self) -> int:
        return len(set(self.class_of))

    def representatives(self) -> list[np.ndarray]:
        seen, reps = set(), []
        for rows, c in zip(self.subgroups, self.class_of):
            if c not in seen:
                seen.add(c)
                reps.append(rows)
        return reps

    @staticmethod
    def as_group(rows: np.ndarray) -> PermGroup:
        G = _table_from_regular(rows)
        return PermGroup([Perm(rows[g].tolist()) for g in G.generators] or [Perm.identity(rows.shape[1])],
                         rows.shape[1])


def regular_subgroup_search(A: PermGroup, target: FiniteGroup,
                            budget: int = DEFAULT_BUDGET) -> RegularSearchResult:
    """All regular subgroups of A isomorphic to ``target``, grouped by A-conjugacy.

    Each regular subgroup holds exactly one element sending 0 to each vertex.
    The search always extends the current subgroup by its element sending 0
    to the smallest vertex not yet reached, so each subgroup is met once.
    """
    n = A.degree
    if target.order != n:
        raise ValueError("target order must equal the degree")
    elems = A.element_array()
    profile = target.order_profile()
    orders, semireg = _semiregular_orders(elems, max(profile))
    mask = semireg & np.isin(orders, list(profile))
    cand = elems[mask]
    cand_orders = orders[mask]
    cand_key = {row.tobytes(): int(o) for row, o in zip(cand, cand_orders)}
    by_image: dict[int, list[int]] = {}
    for r in range(len(cand)):
        v = int(cand[r, 0])
        if v != 0:
            by_image.setdefault(v, []).append(r)

    ident = np.arange(n, dtype=elems.dtype)
    found: list[np.ndarray] = []
    nodes = 0
    complete = True

    def close(members: dict[int, np.ndarray], counts: dict[int, int], gens: list[np.ndarray],
              c: np.ndarray):
        members = dict(members)
        counts = dict(counts)
        new_gens = gens + [c]
        queue = list(members.values())
        if int(c[0]) not in members:
            o = cand_key[c.tobytes()]
            counts[o] = counts.get(o, 0) + 1
            if counts[o] > profile[o]:
                return None
            members[int(c[0])] = c
            queue.append(c)
        head = 0
        while head < len(queue):
            x = queue[head]
            head += 1
            for g in new_gens:
                y = g[x]
                v = int(y[0])
                old = members.get(v)
                if old is not None:
                    if not np.array_equal(old, y):
                        return None
                    continue
                o = cand_key.get(y.tobytes())
                if o is None:
                    return None
                counts[o] = counts.get(o, 0) + 1
                if counts[o] > profile[o]:
                    return None
                members[v] = y
                queue.append(y)
        return members, counts, new_gens

    def extend(members, counts, gens):
        nonlocal nodes, complete
        if len(members) == n:
            rows = np.stack([members[v] for v in range(n)])
            if same_isomorphism_type(_table_from_regular(rows), target):
                found.append(rows)
            return
        v = next(u for u in range(n) if u not in members)
        for r in by_image.get(v, ()):
            nodes += 1
            if nodes > budget:
                complete = False
                return
            step = close(members, counts, gens, cand[r])
            if step is not None:
                extend(*step)
                if not complete:
                    return

    extend({0: ident}, {1: 1}, [])
    return RegularSearchResult(found, _conjugacy_classes(A, found), complete, nodes)


def _conjugacy_classes(A: PermGroup, subgroups: list[np.ndarray]) -> list[int]:
    """Class index per subgroup, via orbits of subgroup fingerprints under A's generators."""
    gens = [np.asarray(g.images, dtype=np.int16) for g in A.gens]
    gens = [(g, np.argsort(g).astype(np.int16)) for g in gens]
    class_by_key: dict[bytes, int] = {}
    out = []
    for rows in subgroups:
        k = _key(rows)
        if k not in class_by_key:
            cid = len(set(class_by_key.values()))
            class_by_key[k] = cid
            frontier = [rows]
            while frontier:
                nxt = []
                for r in frontier:
                    for g, g_inv in gens:
                        c = _conjugate_rows(r, g, g_inv)
                        ck = _key(c)
                        if ck not in class_by_key:
                            class_by_key[ck] = cid
                            nxt.append(c)
                frontier = nxt
        out.append(class_by_key[k])
    return out


@dataclass
class BabaiResult:
    aut_order: int
    n_subgroups: int
    classes: list[PermGroup]
    complete: bool
    is_ci: bool


def babai_ci_check(R: FiniteGroup, S: Iterable[int], budget: int = DEFAULT_BUDGET,
                   aut: PermGroup | None = None) -> BabaiResult:
    """Count A-classes of regular subgroups isomorphic to R in A = Aut(Cay(R, S))."""
    A = aut if aut is not None else automorphism_group(cayley(R, S), budget).group
    res = regular_subgroup_search(A, R, budget)
    reps = [RegularSearchResult.as_group(r) for r in res.representatives()]
    if not res.complete and len(reps) < 2:
        raise BudgetExceeded("regular subgroup search ran out of budget before a second class appeared")
    return BabaiResult(A.order, len(res.subgroups), reps, res.complete, len(reps) == 1)


# -- automorphisms of a finite group ------------------------------------------

@dataclass
class GroupAutomorphisms:
    """All automorphisms of a group, stored as images of a generating tuple."""

    group: FiniteGroup
    generators: tuple[int, ...]
    images: np.ndarray  # (count, len(generators))

    @property
    def order(self) -> int:
        return len(self.images)

    def iter_maps(self, batch: int | None = None) -> Iterator[np.ndarray]:
        """Full element maps, ``batch`` automorphisms at a time."""
        n = self.group.order
        batch = batch or max(1, _CHUNK_ENTRIES // n)
        words = _bfs_words(self.group, self.generators)
        for lo in range(0, self.order, batch):
            yield _evaluate_words(self.group, words, self.images[lo:lo + batch])

    def perm_group(self) -> PermGroup:
        """Automorphisms as permutations of the element indices, generated by sifting."""
        from .perm import StabilizerChain

        n = self.group.order
        chain = StabilizerChain([], n)
        gens: list[Perm] = []
        for maps in self.iter_maps():
            for row in maps:
                if chain.order == self.order:
                    break
                p = Perm._raw(tuple(int(v) for v in row))
                if not chain.contains(p):
                    gens.append(p)
                    chain = StabilizerChain(gens, n)
        if chain.order != self.order:
            raise AssertionError("automorphism count disagrees with the generated group")
        return PermGroup(gens or [Perm.identity(n)], n, name=f"Aut({self.group.name})")


def _evaluate_words(G: FiniteGroup, words, images: np.ndarray) -> np.ndarray:
    """Extend generator images along a BFS word tree, for many tuples at once."""
    out = np.empty((len(images), G.order), dtype=np.int32)
    for y, x, gi in words:
        out[:, y] = G.identity if x < 0 else G.mul[out[:, x], images[:, gi]]
    return out


def _hom_injective(G: FiniteGroup, gens: Sequence[int], images: np.ndarray) -> np.ndarray:
    """Mask of image tuples that extend to injective homomorphisms on <gens>."""
    words = _bfs_words(G, gens)
    members = np.array([w[0] for w in words])
    col = np.full(G.order, -1, dtype=np.int64)
    col[members] = np.arange(len(members))
    ok = np.ones(len(images), dtype=bool)
    step = max(1, _CHUNK_ENTRIES // len(members))
    local = [(col[y], -1 if x < 0 else col[x], gi) for y, x, gi in words]
    for lo in range(0, len(images), step):
        imgs = images[lo:lo + step]
        phi = np.empty((len(imgs), len(members)), dtype=np.int32)
        for y, x, gi in local:
            phi[:, y] = G.identity if x < 0 else G.mul[phi[:, x], imgs[:, gi]]
        good = np.ones(len(imgs), dtype=bool)
        for gi, g in enumerate(gens):
            lhs = phi[:, col[G.mul[members, g]]]
            rhs = G.mul[phi, imgs[:, gi:gi + 1]]
            good &= (lhs == rhs).all(axis=1)
        srt = np.sort(phi, axis=1)
        good &= (np.diff(srt, axis=1) != 0).all(axis=1)
        ok[lo:lo + step] = good
    return ok


def aut_group_of_group(R: FiniteGroup, max_order: int = AUT_ORDER_CAP) -> GroupAutomorphisms:
    """Every automorphism of R, by level-wise backtracking on generator images.

    Level k keeps the image tuples of the first k generators that extend to an
    injective homomorphism on the subgroup they generate; candidates for each
    generator share its element order.
    """
    if R.order > max_order:
        raise ValueError(f"group order {R.order} exceeds the cap {max_order}")
    gens = R.generators
    orders = R.element_orders
    tuples = np.zeros((1, 0), dtype=np.int32)
    for k, g in enumerate(gens):
        cand = np.flatnonzero(orders == orders[g]).astype(np.int32)
        grown = np.concatenate([np.repeat(tuples, len(cand), axis=0),
                                np.tile(cand, len(tuples))[:, None]], axis=1)
        tuples = grown[_hom_injective(R, gens[:k + 1], grown)]
    return GroupAutomorphisms(R, tuple(gens), tuples)


def cayley_iso_witness(R: FiniteGroup, S: Iterable[int], T: Iterable[int],
                       auts: GroupAutomorphisms | None = None,
                       max_order: int = AUT_ORDER_CAP) -> Perm | None:
    """Some automorphism beta of R with S^beta = T, or None after trying all of Aut(R)."""
    S, T = sorted(set(S)), frozenset(T)
    if len(S) != len(T):
        return None
    auts = auts or aut_group_of_group(R, max_order)
    t_mask = np.zeros(R.order, dtype=bool)
    t_mask[list(T)] = True
    for maps in auts.iter_maps():
        hits = np.flatnonzero(t_mask[maps[:, S]].all(axis=1)) if S else np.arange(len(maps))
        if hits.size:
            return Perm(maps[hits[0]].tolist())
    return None


# -- separation ---------------------------------------------------------------

def separation_check(q: int, S: Iterable[int]) -> bool:
    """Whether S separates the orbitals of G acting on H."""
    from .matgroup import coset_representation, h_group

    H = h_group(q)
    labels = np.empty(H.order, dtype=np.int64)
    for k, orb in enumerate(coset_representation(q).D.orbits()):
        labels[orb] = k
    S = sorted(set(S))
    rest = np.array(sorted(set(range(H.order)) - set(S)), dtype=np.int64)
    if len(rest) < 2:
        return True
    if not S:
        return False
    # column h holds the suborbit of s h^-1 for every s in S
    M = labels[H.mul[np.ix_(S, H.inv[rest])]]
    return len(np.unique(M.T, axis=0)) == len(rest)


# -- certificates for H -------------------------------------------------------

def non_ci_certificate(q: int, budget: int = DEFAULT_BUDGET) -> Certificate:
    """Non-CI evidence for H: alpha_hat route for q >= 7, regular subgroups for q = 3, 5."""
    from .matgroup import check_q

    check_q(q)
    if q >= 7:
        return _isomorphism_certificate(q)
    return _non_conjugacy_certificate(q, budget)


def _gl2_order(q: int) -> int:
    return (q * q - 1) * (q * q - q)


def _isomorphism_certificate(q: int) -> Certificate:
    from .matgroup import alpha_hat_perm, build_T, build_Tprime, h_group

    H = h_group(q)
    T, Tp = build_T(q), build_Tprime(q)
    a_hat = alpha_hat_perm(q)
    auts = aut_group_of_group(H, max_order=H.order)
    beta = cayley_iso_witness(H, T, Tp, auts)
    payload = {
        "route": "isomorphism", "q": q, "n": H.order,
        "T": sorted(T), "T_prime": sorted(Tp), "map": _plain(a_hat),
        "aut_group_order": auts.order, "aut_group_order_formula": q * q * _gl2_order(q),
        "witness": None if beta is None else _plain(beta),
    }
    return Certificate("NonCI", payload, _replay_isomorphism(payload, deep=False))


def _replay_isomorphism(p: dict, deep: bool) -> dict[str, bool]:
    from .matgroup import h_group

    H = h_group(p["q"])
    T, Tp, m = p["T"], p["T_prime"], p["map"]
    checks = {
        "T inverse-closed": H.is_inverse_closed(T),
        "T' is the image of T": sorted(m[t] for t in T) == sorted(Tp),
        "map is an isomorphism Cay(H,T) -> Cay(H,T')": cayley(H, T).is_isomorphism(cayley(H, Tp), m),
        "|Aut(H)| = q^2 |GL(2,q)|": p["aut_group_order"] == p["aut_group_order_formula"],
        "no automorphism of H maps T to T'": p["witness"] is None,
    }
    if deep:
        auts = aut_group_of_group(H, max_order=H.order)
        checks["|Aut(H)| recomputed"] = auts.order == p["aut_group_order"]
        checks["no witness on recomputation"] = cayley_iso_witness(H, T, Tp, auts) is None
    return checks


def _non_conjugacy_certificate(q: int, budget: int) -> Certificate:
    from .matgroup import build_T, coset_representation, h_group, symmetric_non_ci_set

    H = h_group(q)
    S = build_T(q) if q == 3 else symmetric_non_ci_set(q)
    aut = automorphism_group(cayley(H, S), budget)
    babai = babai_ci_check(H, S, budget, aut=aut.group)
    cr = coset_representation(q)
    conj = are_conjugate(aut.group, cr.H, cr.K)
    payload = {
        "route": "non-conjugate regular subgroups", "q": q, "n": H.order,
        "S": sorted(S), "aut_order": aut.order,
        "aut_generators": [_plain(g) for g in aut.generators],
        "class_representatives": [_plain_gens(X) for X in babai.classes],
        "search_complete": babai.complete,
        "H_generators": [_plain(g) for g in cr.H.gens],
        "K_generators": [_plain(g) for g in cr.K.gens],
        "H_to_K_conjugator": None if conj is None else _plain(conj),
    }
    return Certificate("NonCI", payload, _replay_non_conjugate(payload))


def _plain_gens(X: PermGroup) -> list[list[int]]:
    return [_plain(g) for g in X.gens]


def _replay_non_conjugate(p: dict) -> dict[str, bool]:
    """Checks that establish non-CI: at least two Aut-classes of regular copies of H."""
    from .matgroup import h_group

    n = p["n"]
    H = h_group(p["q"])
    d = cayley(H, p["S"])
    A = PermGroup(_perms(p["aut_generators"]), n)
    reps = [PermGroup(_perms(g), n) for g in p["class_representatives"]]
    Hs = PermGroup(_perms(p["H_generators"]), n)
    Ks = PermGroup(_perms(p["K_generators"]), n)
    c = p["H_to_K_conjugator"]
    if c is None:
        hk = are_conjugate(A, Hs, Ks) is None
    else:
        g = Perm(c)
        hk = A.contains(g) and {g.inverse() * h * g for h in Hs.element_set} == set(Ks.element_set)
    return {
        "generators are automorphisms": all(d.is_automorphism(g) for g in A.gens),
        "automorphism group order": A.order == p["aut_order"],
        "H and K regular inside Aut": all(is_regular(X, n) and X.is_subgroup_of(A) for X in (Hs, Ks)),
        "H/K conjugacy as recorded": hk,
        "representatives regular and isomorphic to H": all(
            is_regular(X, n) and X.is_subgroup_of(A)
            and same_isomorphism_type(_table_from_regular(_regular_rows(X)), H) for X in reps),
        "at least two classes of regular copies of H": len(reps) >= 2 and all(
            are_conjugate(A, reps[i], reps[j]) is None
            for i in range(len(reps)) for j in range(i + 1, len(reps))),
    }


# -- the 54-vertex example ----------------------------------------------------

def _haar_connection_set(sc) -> tuple[FiniteGroup, list[int]]:
    """Z_3^3 and the A-parts w of the connection set {w x}, as exponent vectors."""
    Z = elementary_abelian(3, 3)
    vecs = []
    for s in sorted(sc.S):
        i, rest = divmod(s % 27, 9)
        j, k = divmod(rest, 3)
        vecs.append(Z.index((i, j, k)))
    return Z, vecs


def bci_check_z27(budget: int = DEFAULT_BUDGET) -> Certificate:
    from .matgroup import special_case_z27

    sc = special_case_z27()
    R, S, gamma = sc.group, sc.S, sc.gamma
    aut = automorphism_group(gamma, budget)
    Z, W = _haar_connection_set(sc)
    iso = isomorphism(haar(Z, W), gamma, budget)
    res = regular_subgroup_search(aut.group, R, budget)
    reps = res.representatives()
    payload = {
        "route": "haar", "S": sorted(S), "aut_order": aut.order,
        "aut_generators": [_plain(g) for g in aut.generators],
        "haar_connection_set": sorted(W),
        "haar_isomorphism": None if iso is None else [int(v) for v in iso],
        "regular_subgroups_found": len(res.subgroups),
        "class_representatives": [[[int(v) for v in rows[g]] for g in _table_from_regular(rows).generators]
                                  for rows in reps],
        "classes_found": len(reps), "search_complete": res.complete,
    }
    return Certificate("BCICounterexample", payload, _replay_bci(payload))


def _replay_bci(p: dict) -> dict[str, bool]:
    from .matgroup import special_case_z27

    sc = special_case_z27()
    R, gamma = sc.group, sc.gamma
    A = PermGroup(_perms(p["aut_generators"]), R.order)
    abelian_half = set(sc.A)
    is_bip, parts = _bipartition(gamma)
    iso = p["haar_isomorphism"]
    Z = elementary_abelian(3, 3)
    reps = [PermGroup(_perms(g), R.order) for g in p["class_representatives"]]
    rep_ok = all(is_regular(X, R.order) and X.is_subgroup_of(A)
                 and same_isomorphism_type(_table_from_regular(_regular_rows(X)), R) for X in reps)
    pairwise = all(are_conjugate(A, reps[i], reps[j]) is None
                   for i in range(len(reps)) for j in range(i + 1, len(reps)))
    return {
        "generators are automorphisms": all(gamma.is_automorphism(g) for g in A.gens),
        "|Aut| = 46656": A.order == p["aut_order"] == 46656,
        "arc-transitive": arc_transitive(gamma, A.gens),
        "S consists of involutions outside A": all(
            s not in abelian_half and R.element_order(s) == 2 for s in p["S"]),
        "bipartite with parts of size 27": is_bip and sorted(map(len, parts)) == [27, 27],
        "isomorphic to a Haar graph of Z3^3": iso is not None
        and haar(Z, p["haar_connection_set"]).is_isomorphism(gamma, iso),
        "representatives regular and isomorphic to R": rep_ok,
        "at least two classes of regular subgroups": len(reps) >= 2 and pairwise,
    }


def _regular_rows(X: PermGroup) -> np.ndarray:
    rows = X.element_array()
    return rows[np.argsort(rows[:, 0])]


def _bipartition(d: Digraph) -> tuple[bool, list[list[int]]]:
    ok, side = d.is_bipartite()
    if not ok:
        return False, []
    return True, [[v for v in range(d.n) if side[v] == k] for k in (0, 1)]


def ci_witness_certificate(R: FiniteGroup, S: Iterable[int], T: Iterable[int]) -> Certificate | None:
    beta = cayley_iso_witness(R, S, T)
    if beta is None:
        return None
    payload = {"route": "witness", "table": R.mul.tolist(), "S": sorted(set(S)), "T": sorted(set(T)),
               "beta": _plain(beta)}
    return Certificate("CIWitness", payload, _replay_witness(payload))


def _replay_witness(p: dict) -> dict[str, bool]:
    mul = np.asarray(p["table"])
    b = np.asarray(p["beta"])
    return {
        "beta is an automorphism": bool((b[mul] == mul[b[:, None], b[None, :]]).all())
        and len(set(p["beta"])) == len(b),
        "S^beta = T": sorted(int(b[s]) for s in p["S"]) == p["T"],
    }


# -- brute-force oracle -------------------------------------------------------

class _DCIOracle:
    """Every Cayley digraph of a tiny group, classified by brute force."""

    def __init__(self, R: FiniteGroup):
        n = R.order
        e = R.identity
        others = [g for g in range(n) if g != e]
        maps = []
        for perm in permutations(others):
            m = [0] * n
            m[e] = e
            for g, h in zip(others, perm):
                m[g] = h
            maps.append(m)
        self.maps = np.array(maps, dtype=np.int64)
        # automorphisms of R among the bijections fixing e
        P = self.maps
        hom = np.ones(len(P), dtype=bool)
        for i in range(n):
            hom &= (P[:, R.mul[i]] == R.mul[P[:, i][:, None], P]).all(axis=1)
        self.auts = P[hom]
        self.R = R
        self.others = others
        self._canon: dict[frozenset[int], bytes] = {}

    def canon(self, S: frozenset[int]) -> bytes:
        """Smallest relabelled adjacency over all bijections fixing e."""
        c = self._canon.get(S)
        if c is None:
            adj = cayley(self.R, S).adj
            inv = np.argsort(self.maps, axis=1)
            relabelled = adj[inv[:, :, None], inv[:, None, :]].reshape(len(inv), -1)
            packed = np.packbits(relabelled, axis=1)
            c = min(row.tobytes() for row in packed)
            self._canon[S] = c
        return c

    def is_dci(self, S: frozenset[int]) -> bool:
        target = self.canon(S)
        s_list = sorted(S)
        images = {frozenset(int(v) for v in row[s_list]) for row in self.auts}
        for mask in range(1 << len(self.others)):
            T = frozenset(g for k, g in enumerate(self.others) if mask >> k & 1)
            if len(T) == len(S) and T not in images and self.canon(T) == target:
                return False
        return True


_ORACLES: dict[int, tuple[FiniteGroup, _DCIOracle]] = {}


def brute_dci_oracle(R: FiniteGroup, S: Iterable[int]) -> bool:
    """DCI property of Cay(R, S) straight from the definition, for |R| <= 8."""
    if R.order > 8:
        raise ValueError("brute-force oracle is limited to groups of order <= 8")
    entry = _ORACLES.get(id(R))
    if entry is None or entry[0] is not R:
        entry = (R, _DCIOracle(R))
        _ORACLES[id(R)] = entry
    return entry[1].is_dci(frozenset(S))


@dataclass
class OracleAgreement:
    cases: int = 0
    disagreements: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.cases > 0 and not self.disagreements


def oracle_cases(seed: int = ORACLE_SEED, samples: int = ORACLE_SAMPLES) -> list[tuple[FiniteGroup, frozenset]]:
    """Every subset of R - {e} for |R| <= 6, plus fixed-seed samples for |R| = 8."""
    cases = []
    for R in small_groups(8):
        if R.order == 7:
            continue
        others = [g for g in range(R.order) if g != R.identity]
        masks = range(1 << len(others))
        if R.order == 8:
            masks = sorted(random.Random(seed).sample(list(masks), samples))
        for mask in masks:
            cases.append((R, frozenset(g for k, g in enumerate(others) if mask >> k & 1)))
    return cases


def oracle_agreement(cases=None, budget: int = DEFAULT_BUDGET) -> OracleAgreement:
    cases = oracle_cases() if cases is None else cases
    out = OracleAgreement()
    verdicts: dict[tuple[int, bytes], bool] = {}
    for R, S in cases:
        aut = automorphism_group(cayley(R, S), budget).group
        key = (id(R), _key(aut.element_array()))
        if key not in verdicts:
            verdicts[key] = babai_ci_check(R, S, budget, aut=aut).is_ci
        out.cases += 1
        if verdicts[key] != brute_dci_oracle(R, S):
            out.disagreements.append(f"{R.name} S={sorted(S)}")
    return out

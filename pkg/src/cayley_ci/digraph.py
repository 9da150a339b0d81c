"""Cayley, Haar and orbital digraphs; automorphisms and isomorphisms.

Automorphism groups are found by individualization-refinement.  Vertex
partitions are refined with directed 1-WL on the arc-colour matrix until
stable; the search walks a first path down to a discrete partition and then,
level by level from the bottom, tries every vertex of the target cell that is
not already in the orbit of the first-path vertex under the automorphisms
found so far.  The group order is the product of those orbit lengths.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from math import prod

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .groups import FiniteGroup
from .perm import Perm, PermGroup, StabilizerChain, orbits

DEFAULT_BUDGET = 10**7


class BudgetExceeded(RuntimeError):
    """The search tree grew past its node budget; no answer was produced."""


class Digraph:
    """A digraph on vertices 0..n-1 stored as a dense boolean matrix."""

    def __init__(self, adj: np.ndarray):
        adj = np.asarray(adj, dtype=bool)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise ValueError("adjacency must be square")
        self.adj = adj

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[tuple[int, int]]) -> Digraph:
        adj = np.zeros((n, n), dtype=bool)
        for u, v in arcs:
            adj[u, v] = True
        return cls(adj)

    @property
    def n(self) -> int:
        return self.adj.shape[0]

    @property
    def num_arcs(self) -> int:
        return int(self.adj.sum())

    def arcs(self) -> list[tuple[int, int]]:
        us, vs = np.nonzero(self.adj)
        return list(zip(us.tolist(), vs.tolist()))

    def has_arc(self, u: int, v: int) -> bool:
        return bool(self.adj[u, v])

    def out_degrees(self) -> np.ndarray:
        return self.adj.sum(axis=1)

    def is_symmetric(self) -> bool:
        return bool(np.array_equal(self.adj, self.adj.T))

    def has_loops(self) -> bool:
        return bool(np.diagonal(self.adj).any())

    def relabel(self, perm: Sequence[int]) -> Digraph:
        """Image under the vertex map u -> perm[u]."""
        p = np.asarray(perm)
        out = np.zeros_like(self.adj)
        out[np.ix_(p, p)] = self.adj
        return Digraph(out)

    def is_isomorphism(self, other: Digraph, mapping: Sequence[int]) -> bool:
        p = np.asarray(mapping)
        if sorted(p.tolist()) != list(range(self.n)) or other.n != self.n:
            return False
        return bool(np.array_equal(other.adj[np.ix_(p, p)], self.adj))

    def is_automorphism(self, g: Perm) -> bool:
        return self.is_isomorphism(self, g.images)

    def colored(self) -> ColoredDigraph:
        color = np.where(self.adj, 2, 1).astype(np.int32)
        diag = np.where(np.diagonal(self.adj), 3, 0)
        np.fill_diagonal(color, diag)
        return ColoredDigraph(color)

    def is_bipartite(self) -> tuple[bool, list[int]]:
        """Two-colouring of the underlying graph (side per vertex) if one exists."""
        und = self.adj | self.adj.T
        side = [-1] * self.n
        for s in range(self.n):
            if side[s] >= 0:
                continue
            side[s] = 0
            stack = [s]
            while stack:
                u = stack.pop()
                for v in np.flatnonzero(und[u]).tolist():
                    if side[v] < 0:
                        side[v] = 1 - side[u]
                        stack.append(v)
                    elif side[v] == side[u]:
                        return False, []
        return True, side

    def to_text(self) -> str:
        arcs = sorted(self.arcs())
        lines = [f"{self.n} {len(arcs)}"] + [f"{u} {v}" for u, v in arcs]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> Digraph:
        rows = [line.split() for line in text.strip().splitlines()]
        n, m = int(rows[0][0]), int(rows[0][1])
        arcs = [(int(u), int(v)) for u, v in rows[1:1 + m]]
        if len(arcs) != m:
            raise ValueError("arc count does not match header")
        return cls.from_arcs(n, arcs)

    def __eq__(self, other):
        return isinstance(other, Digraph) and np.array_equal(self.adj, other.adj)

    def __repr__(self):
        return f"<Digraph n={self.n} arcs={self.num_arcs}>"


class ColoredDigraph:
    """Complete arc colouring: color[u, v] is a small integer, diagonal included."""

    def __init__(self, color: np.ndarray):
        color = np.asarray(color, dtype=np.int32)
        if color.ndim != 2 or color.shape[0] != color.shape[1]:
            raise ValueError("colour matrix must be square")
        self.color = color

    @property
    def n(self) -> int:
        return self.color.shape[0]

    @property
    def num_colors(self) -> int:
        return len(np.unique(self.color))

    def is_automorphism(self, g: Perm) -> bool:
        p = np.asarray(g.images)
        return bool(np.array_equal(self.color[np.ix_(p, p)], self.color))

    def to_text(self) -> str:
        lines = [f"{self.n} {self.num_colors}"]
        lines += [" ".join(map(str, row)) for row in self.color.tolist()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> ColoredDigraph:
        rows = [line.split() for line in text.strip().splitlines()]
        n = int(rows[0][0])
        color = np.array([[int(c) for c in r] for r in rows[1:1 + n]], dtype=np.int32)
        return cls(color)

    def __repr__(self):
        return f"<ColoredDigraph n={self.n} colors={self.num_colors}>"


def _as_colored(d: Digraph | ColoredDigraph) -> ColoredDigraph:
    return d if isinstance(d, ColoredDigraph) else d.colored()


def cayley(group: FiniteGroup, S: Iterable[int]) -> Digraph:
    """Cay(R, S): arc (x, y) iff x * y^-1 lies in S."""
    S = sorted(set(S))
    if group.identity in S:
        raise ValueError("connection set contains the identity (loops)")
    mask = np.zeros(group.order, dtype=bool)
    mask[S] = True
    quotient = group.mul[:, group.inv]  # quotient[x, y] = x * y^-1
    return Digraph(mask[quotient])


def haar(group: FiniteGroup, S: Iterable[int]) -> Digraph:
    """Bipartite graph on G x {0, 1}; (g, 0) is vertex g, (g, 1) is vertex |G| + g."""
    n = group.order
    adj = np.zeros((2 * n, 2 * n), dtype=bool)
    for s in set(S):
        for g in range(n):
            h = int(group.mul[s, g])
            adj[g, n + h] = adj[n + h, g] = True
    return Digraph(adj)


def orbital_coloring(gens: Sequence[Perm], n: int) -> ColoredDigraph:
    """Colour each ordered pair by its orbit under the group generated by gens.

    Colours are numbered by first occurrence in row-major order, so the
    diagonal of a transitive group is colour 0.
    """
    pairs = np.arange(n * n)
    rows, cols = [pairs], [pairs]
    for g in gens:
        img = np.asarray(g.images)
        rows.append(pairs)
        cols.append((img[:, None] * n + img[None, :]).ravel())
    r = np.concatenate(rows)
    c = np.concatenate(cols)
    graph = coo_matrix((np.ones(len(r), dtype=np.int8), (r, c)), shape=(n * n, n * n))
    _, labels = connected_components(graph, directed=True, connection="weak")
    _, first, inverse = np.unique(labels, return_index=True, return_inverse=True)
    rank = np.argsort(np.argsort(first))
    return ColoredDigraph(rank[inverse].reshape(n, n))


class _Refiner:
    def __init__(self, color: np.ndarray):
        self.C = np.asarray(color, dtype=np.int64)
        self.CT = np.ascontiguousarray(self.C.T)
        self.symmetric = bool(np.array_equal(self.C, self.CT))
        self.n = self.C.shape[0]

    def refine(self, cells: np.ndarray) -> tuple[np.ndarray, int]:
        """Refine an ordered partition (cell rank per vertex) to equitable; return it and a trace."""
        trace = []
        k = int(cells.max()) + 1 if self.n else 0
        while True:
            parts = [cells[:, None], np.sort(self.C * k + cells[None, :], axis=1)]
            if not self.symmetric:
                parts.append(np.sort(self.CT * k + cells[None, :], axis=1))
            sig = np.hstack(parts)
            uniq, inverse, counts = np.unique(sig, axis=0, return_inverse=True, return_counts=True)
            trace.append(hash((uniq.tobytes(), counts.tobytes())))
            cells = inverse.reshape(-1)
            if len(uniq) == k:
                return cells, hash(tuple(trace))
            k = len(uniq)


def _ranks(values: np.ndarray) -> np.ndarray:
    _, inverse = np.unique(values, return_inverse=True)
    return inverse.reshape(-1)


def _individualize(cells: np.ndarray, v: int) -> np.ndarray:
    split = 2 * cells + 1
    split[v] -= 1
    return _ranks(split)


def _target_cell(cells: np.ndarray) -> list[int] | None:
    """Smallest non-singleton cell, earliest in the cell order."""
    counts = np.bincount(cells)
    big = np.flatnonzero(counts > 1)
    if big.size == 0:
        return None
    best = big[np.argmin(counts[big])]
    return np.flatnonzero(cells == best).tolist()


@dataclass
class AutResult:
    generators: list[Perm]
    order: int
    degree: int
    base: list[int] = field(default_factory=list)
    orbit_lengths: list[int] = field(default_factory=list)
    nodes: int = 0

    @property
    def group(self) -> PermGroup:
        return PermGroup(self.generators, self.degree, name="Aut")


class _Search:
    def __init__(self, cd: ColoredDigraph, budget: int):
        self.cd = cd
        self.ref = _Refiner(cd.color)
        self.n = cd.n
        self.budget = budget
        self.nodes = 0

    def tick(self):
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded(f"search exceeded {self.budget} nodes")

    def leaf_map(self, leaf: np.ndarray) -> np.ndarray:
        # vertex with rank k on the first leaf goes to the vertex with rank k on this leaf
        inv = np.empty(self.n, dtype=np.int64)
        inv[leaf] = np.arange(self.n)
        return inv[self.first_leaf]

    def is_aut(self, g: np.ndarray) -> bool:
        C = self.cd.color
        return bool(np.array_equal(C[np.ix_(g, g)], C))

    def run(self) -> AutResult:
        n = self.n
        if n == 0:
            return AutResult([], 1, 0)
        self.tick()
        cells, trace = self.ref.refine(_ranks(np.diagonal(self.cd.color)))
        self.traces = [trace]
        path = []
        while True:
            cell = _target_cell(cells)
            if cell is None:
                break
            v = cell[0]
            path.append((cells, cell, v))
            self.tick()
            cells, trace = self.ref.refine(_individualize(cells, v))
            self.traces.append(trace)
        self.first_leaf = cells
        gens: list[Perm] = []
        lengths = [0] * len(path)
        for level in reversed(range(len(path))):
            parent, cell, v = path[level]
            label = _orbit_labels(gens, n)
            failed: list[int] = []
            for w in cell:
                if label[w] == label[v] or any(label[w] == label[f] for f in failed):
                    continue
                g = self.search(parent, w, level + 1)
                if g is None:
                    failed.append(w)
                    continue
                gens.append(Perm._raw(tuple(g.tolist())))
                label = _orbit_labels(gens, n)
            lengths[level] = int(sum(1 for w in cell if label[w] == label[v]))
        return AutResult(gens, prod(lengths), n, base=[p[2] for p in path],
                         orbit_lengths=lengths, nodes=self.nodes)

    def search(self, parent: np.ndarray, w: int, depth: int) -> np.ndarray | None:
        self.tick()
        cells, trace = self.ref.refine(_individualize(parent, w))
        if trace != self.traces[depth]:
            return None
        cell = _target_cell(cells)
        if cell is None:
            g = self.leaf_map(cells)
            return g if self.is_aut(g) else None
        for u in cell:
            g = self.search(cells, u, depth + 1)
            if g is not None:
                return g
        return None


def _orbit_labels(gens: Sequence[Perm], n: int) -> list[int]:
    label = list(range(n))
    for orb in orbits(gens, n):
        for x in orb:
            label[x] = orb[0]
    return label


def automorphism_group(d: Digraph | ColoredDigraph, budget: int = DEFAULT_BUDGET) -> AutResult:
    """Full colour-preserving automorphism group of a (coloured) digraph."""
    cd = _as_colored(d)
    result = _Search(cd, budget).run()
    if result.generators:
        chain_order = StabilizerChain(result.generators, cd.n).order
        if chain_order != result.order:
            raise AssertionError(
                f"orbit-length product {result.order} disagrees with chain order {chain_order}")
    return result


def isomorphism(d1: Digraph | ColoredDigraph, d2: Digraph | ColoredDigraph,
                budget: int = DEFAULT_BUDGET) -> list[int] | None:
    """A vertex bijection mapping d1 onto d2, or None when none exists.

    The two graphs are placed side by side with a fresh colour on every
    cross pair; the union has an automorphism exchanging the halves exactly
    when d1 and d2 are isomorphic.
    """
    c1, c2 = _as_colored(d1).color, _as_colored(d2).color
    n = c1.shape[0]
    if c2.shape[0] != n:
        return None
    if n == 0:
        return []
    cross = int(max(c1.max(), c2.max())) + 1
    union = np.full((2 * n, 2 * n), cross, dtype=np.int32)
    union[:n, :n] = c1
    union[n:, n:] = c2
    result = automorphism_group(ColoredDigraph(union), budget)
    for g in result.generators:
        if g.images[0] >= n:
            mapping = [g.images[u] - n for u in range(n)]
            p = np.asarray(mapping)
            if not np.array_equal(c2[np.ix_(p, p)], c1):
                raise AssertionError("exchanging automorphism does not restrict to an isomorphism")
            return mapping
    return None


def two_closure(gens: Sequence[Perm], n: int, budget: int = DEFAULT_BUDGET) -> AutResult:
    return automorphism_group(orbital_coloring(gens, n), budget)


def arc_transitive(d: Digraph, gens: Sequence[Perm] | AutResult) -> bool:
    if isinstance(gens, AutResult):
        gens = gens.generators
    arcs = d.arcs()
    if not arcs:
        return True
    n = d.n
    start = arcs[0][0] * n + arcs[0][1]
    seen = {start}
    stack = [start]
    while stack:
        p = stack.pop()
        u, v = divmod(p, n)
        for g in gens:
            r = g.images[u] * n + g.images[v]
            if r not in seen:
                seen.add(r)
                stack.append(r)
    return len(seen) == len(arcs) and all(d.adj[divmod(p, n)] for p in seen)


def induced_subgraph(d: Digraph, vertices: Iterable[int]) -> Digraph:
    """Subgraph on the given vertices, relabelled 0..k-1 in increasing vertex order."""
    vs = sorted(set(vertices))
    if not vs:
        return Digraph(np.zeros((0, 0), dtype=bool))
    return Digraph(d.adj[np.ix_(vs, vs)])


def verify_phi_t(q: int, t: int) -> bool:
    """Check that z -> 2z carries the subgraph of Cay(H, C_t u C_-t) on P_0 onto Cay(F_q, {t, -t})."""
    from .groups import cyclic
    from .matgroup import HElem, coset_class, h_group, parabolic

    t %= q
    if t == 0:
        raise ValueError("t must be nonzero")
    H = h_group(q)
    gamma = cayley(H, coset_class(q, t).members)
    p0 = sorted(parabolic(q, 0).members)
    phi_t = induced_subgraph(gamma, p0)
    # vertex of P_0 with index i is [-1, (z^2, 2z)]; its image is the second coordinate 2z
    images = [HElem.from_index(i, q).y for i in p0]
    if sorted(images) != list(range(q)):
        return False
    circulant = cayley(cyclic(q), {t, (-t) % q})
    return phi_t.is_isomorphism(circulant, images)

"""Finite groups as multiplication tables over a fixed element order.

Every Cayley digraph, group-algebra vector and automorphism search in the
package indexes group elements by their position in ``FiniteGroup.elements``;
``mul[i, j]`` is the index of ``elements[i] * elements[j]``.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Callable, Hashable, Sequence
from functools import cached_property
from itertools import product

import numpy as np

from .perm import Perm, PermGroup


class FiniteGroup:
    def __init__(self, elements: Sequence[Hashable], mul: np.ndarray, name: str = ""):
        self.elements = list(elements)
        self.mul = np.asarray(mul, dtype=np.int32)
        n = len(self.elements)
        if self.mul.shape != (n, n):
            raise ValueError("multiplication table has the wrong shape")
        self.name = name
        self._index = {e: i for i, e in enumerate(self.elements)}
        ident = [i for i in range(n) if np.array_equal(self.mul[i], np.arange(n))]
        if len(ident) != 1:
            raise ValueError("table has no unique identity")
        self.identity = ident[0]
        inv = np.full(n, -1, dtype=np.int32)
        rows, cols = np.nonzero(self.mul == self.identity)
        inv[rows] = cols
        if (inv < 0).any():
            raise ValueError("table has elements without inverses")
        self.inv = inv

    @classmethod
    def from_function(cls, elements: Sequence[Hashable], mulfn: Callable, name: str = "") -> FiniteGroup:
        elements = list(elements)
        index = {e: i for i, e in enumerate(elements)}
        n = len(elements)
        table = np.empty((n, n), dtype=np.int32)
        for i, a in enumerate(elements):
            for j, b in enumerate(elements):
                table[i, j] = index[mulfn(a, b)]
        return cls(elements, table, name)

    @classmethod
    def from_perms(cls, elements: Sequence[Perm], name: str = "") -> FiniteGroup:
        return cls.from_function(elements, lambda a, b: a * b, name)

    def __len__(self):
        return len(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __repr__(self):
        return f"<FiniteGroup {self.name or '?'} of order {self.order}>"

    def index(self, element: Hashable) -> int:
        return self._index[element]

    def element_order(self, i: int) -> int:
        k, x = 1, i
        while x != self.identity:
            x = int(self.mul[x, i])
            k += 1
        return k

    @cached_property
    def element_orders(self) -> np.ndarray:
        return np.array([self.element_order(i) for i in range(self.order)], dtype=np.int32)

    def order_profile(self) -> Counter:
        return Counter(self.element_orders.tolist())

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    def closure(self, gens: Sequence[int]) -> list[int]:
        """Subgroup generated by element indices, breadth first."""
        seen = {self.identity}
        out = [self.identity]
        i = 0
        while i < len(out):
            x = out[i]
            i += 1
            for g in gens:
                y = int(self.mul[x, g])
                if y not in seen:
                    seen.add(y)
                    out.append(y)
        return out

    @cached_property
    def generators(self) -> tuple[int, ...]:
        """Greedy generating tuple: scan elements in order, keep those outside the span so far."""
        gens: list[int] = []
        span = {self.identity}
        for i in range(self.order):
            if i not in span:
                gens.append(i)
                span = set(self.closure(gens))
                if len(span) == self.order:
                    break
        return tuple(gens)

    def right_translation(self, g: int) -> Perm:
        return Perm._raw(tuple(int(v) for v in self.mul[:, g]))

    def right_regular(self) -> PermGroup:
        gens = [self.right_translation(g) for g in self.generators]
        return PermGroup(gens, self.order, name=f"right-regular {self.name}")

    def subset_inverse(self, subset: Sequence[int]) -> frozenset[int]:
        return frozenset(int(self.inv[s]) for s in subset)

    def is_inverse_closed(self, subset: Sequence[int]) -> bool:
        subset = frozenset(subset)
        return self.subset_inverse(subset) == subset


def cyclic(n: int) -> FiniteGroup:
    idx = np.arange(n)
    return FiniteGroup(list(range(n)), (idx[:, None] + idx[None, :]) % n, name=f"Z{n}")


def direct_product(A: FiniteGroup, B: FiniteGroup) -> FiniteGroup:
    elements = list(product(range(A.order), range(B.order)))
    nb = B.order
    table = np.empty((len(elements), len(elements)), dtype=np.int32)
    for i, (a1, b1) in enumerate(elements):
        for j, (a2, b2) in enumerate(elements):
            table[i, j] = int(A.mul[a1, a2]) * nb + int(B.mul[b1, b2])
    return FiniteGroup(elements, table, name=f"{A.name}x{B.name}")


def elementary_abelian(p: int, k: int) -> FiniteGroup:
    elements = list(product(range(p), repeat=k))
    return FiniteGroup.from_function(
        elements, lambda u, v: tuple((a + b) % p for a, b in zip(u, v)), name=f"Z{p}^{k}")


def dihedral(m: int) -> FiniteGroup:
    """Dihedral group of order 2m; element (s, i) stands for r^i t^s."""
    elements = [(s, i) for s in (0, 1) for i in range(m)]

    def mulfn(a, b):
        s1, i1 = a
        s2, i2 = b
        return ((s1 + s2) % 2, (i1 + (i2 if s1 == 0 else -i2)) % m)

    # r^i1 t^s1 r^i2 t^s2 = r^(i1 +- i2) t^(s1+s2)
    return FiniteGroup.from_function(elements, mulfn, name=f"D{2 * m}")


def quaternion() -> FiniteGroup:
    # unit quaternions as (sign, axis) with axis in 1, i, j, k
    table = {
        ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
        ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
        ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
        ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
    }
    elements = [(s, a) for s in (1, -1) for a in ("1", "i", "j", "k")]

    def mulfn(x, y):
        sign, axis = table[(x[1], y[1])]
        return (x[0] * y[0] * sign, axis)

    return FiniteGroup.from_function(elements, mulfn, name="Q8")


def small_groups(max_order: int = 8) -> list[FiniteGroup]:
    """One representative of every isomorphism type of order <= 8."""
    catalogue = [
        cyclic(1), cyclic(2), cyclic(3), cyclic(4), elementary_abelian(2, 2),
        cyclic(5), cyclic(6), dihedral(3), cyclic(7),
        cyclic(8), direct_product(cyclic(4), cyclic(2)), elementary_abelian(2, 3),
        dihedral(4), quaternion(),
    ]
    return [g for g in catalogue if g.order <= max_order]


def find_isomorphism(A: FiniteGroup, B: FiniteGroup) -> list[int] | None:
    """An isomorphism A -> B as an index map, by backtracking on generator images."""
    if A.order != B.order or A.order_profile() != B.order_profile():
        return None
    gens = A.generators
    words = _bfs_words(A, gens)
    b_orders = B.element_orders
    a_orders = A.element_orders
    candidates = [np.flatnonzero(b_orders == a_orders[g]).tolist() for g in gens]

    def extend(images: list[int]) -> list[int] | None:
        k = len(images)
        if k == len(gens):
            phi = _evaluate(B, words, images, A.order)
            if phi is None or len(set(phi)) != A.order:
                return None
            for x in range(A.order):
                for gi, g in enumerate(gens):
                    if phi[int(A.mul[x, g])] != int(B.mul[phi[x], images[gi]]):
                        return None
            return phi
        for c in candidates[k]:
            if c in images:
                continue
            found = extend(images + [c])
            if found is not None:
                return found
        return None

    return extend([])


def _bfs_words(A: FiniteGroup, gens: Sequence[int]) -> list[tuple[int, int]]:
    """Spanning tree of the Cayley graph: (parent, generator position) per element in BFS order."""
    parent: dict[int, tuple[int, int]] = {A.identity: (-1, -1)}
    order = [A.identity]
    i = 0
    while i < len(order):
        x = order[i]
        i += 1
        for gi, g in enumerate(gens):
            y = int(A.mul[x, g])
            if y not in parent:
                parent[y] = (x, gi)
                order.append(y)
    return [(y, *parent[y]) for y in order]


def _evaluate(B: FiniteGroup, words, images, n) -> list[int] | None:
    phi = [-1] * n
    for y, x, gi in words:
        phi[y] = B.identity if x < 0 else int(B.mul[phi[x], images[gi]])
    return phi

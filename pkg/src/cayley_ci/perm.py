"""Permutations and permutation groups on {0, ..., n-1}.

Points are acted on from the right and products compose left to right:
``(p * q)[i] == q[p[i]]``.  Group orders are computed with a deterministic
Schreier-Sims stabilizer chain (base points are the first moved point of the
element that forced a new level, transversals are built breadth-first in
generator order), so enumeration order is reproducible from run to run.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable, Iterator, Sequence
from functools import cached_property
from itertools import product

import numpy as np

MAX_DEGREE = 4096
ENUMERATION_BOUND = 10**6
ELEMENT_CACHE_BOUND = 10**5


class DegreeMismatch(ValueError):
    pass


class EnumerationBoundExceeded(RuntimeError):
    pass


class Perm:
    """A permutation stored as its tuple of point images."""

    __slots__ = ("images", "_hash")

    def __init__(self, images: Iterable[int], check: bool = True):
        images = tuple(int(i) for i in images)
        if check:
            n = len(images)
            if n > MAX_DEGREE:
                raise ValueError(f"degree {n} exceeds cap {MAX_DEGREE}")
            if sorted(images) != list(range(n)):
                raise ValueError("images do not form a bijection")
        self.images = images
        self._hash = None

    @classmethod
    def _raw(cls, images: tuple) -> Perm:
        p = cls.__new__(cls)
        p.images = images
        p._hash = None
        return p

    @classmethod
    def identity(cls, n: int) -> Perm:
        return cls._raw(tuple(range(n)))

    @classmethod
    def from_cycles(cls, n: int, *cycles: Sequence[int]) -> Perm:
        images = list(range(n))
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                images[a] = b
        return cls(images)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __len__(self):
        return len(self.images)

    def __getitem__(self, i):
        return self.images[i]

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: Perm) -> Perm:
        return compose(self, other)

    def __invert__(self) -> Perm:
        return self.inverse()

    def inverse(self) -> Perm:
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Perm._raw(tuple(inv))

    def __pow__(self, k: int) -> Perm:
        if k < 0:
            return self.inverse() ** (-k)
        result = Perm.identity(self.degree)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        return isinstance(other, Perm) and self.images == other.images

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.images)
        return self._hash

    def __lt__(self, other: Perm):
        return self.images < other.images

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def first_moved(self) -> int | None:
        for i, j in enumerate(self.images):
            if i != j:
                return i
        return None

    def fixed_points(self) -> list[int]:
        return [i for i, j in enumerate(self.images) if i == j]

    def cycles(self) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for i in range(len(self.images)):
            if i in seen or self.images[i] == i:
                continue
            cyc = [i]
            seen.add(i)
            j = self.images[i]
            while j != i:
                cyc.append(j)
                seen.add(j)
                j = self.images[j]
            out.append(tuple(cyc))
        return out

    def order(self) -> int:
        from math import lcm

        result = 1
        for c in self.cycles():
            result = lcm(result, len(c))
        return result

    def conjugate(self, g: Perm) -> Perm:
        """Return g^-1 * self * g."""
        return g.inverse() * self * g

    def __repr__(self):
        cyc = self.cycles()
        if not cyc:
            return f"Perm(id, n={self.degree})"
        return "Perm(" + "".join("(" + " ".join(map(str, c)) + ")" for c in cyc) + f", n={self.degree})"


def compose(p: Perm, q: Perm) -> Perm:
    """Left-to-right product: first p, then q."""
    if len(p.images) != len(q.images):
        raise DegreeMismatch(f"cannot compose degree {len(p.images)} with {len(q.images)}")
    return Perm._raw(tuple(map(q.images.__getitem__, p.images)))


def orbit(gens: Sequence[Perm], point: int) -> set[int]:
    return set(orbit_list(gens, point))


def orbit_list(gens: Sequence[Perm], point: int) -> list[int]:
    """Breadth-first orbit in generator order."""
    seen = {point}
    out = [point]
    queue = deque([point])
    while queue:
        p = queue.popleft()
        for g in gens:
            r = g.images[p]
            if r not in seen:
                seen.add(r)
                out.append(r)
                queue.append(r)
    return out


def orbits(gens: Sequence[Perm], n: int) -> list[list[int]]:
    """All orbits on range(n), each sorted, listed by smallest point."""
    seen = set()
    out = []
    for i in range(n):
        if i in seen:
            continue
        orb = orbit_list(gens, i)
        seen.update(orb)
        out.append(sorted(orb))
    return out


class _Level:
    __slots__ = ("base", "gens", "orbit", "transversal", "inverses")

    def __init__(self, base: int, n: int):
        self.base = base
        self.gens: list[Perm] = []
        self.orbit = [base]
        self.transversal = {base: Perm.identity(n)}
        self.inverses = {base: Perm.identity(n)}


class StabilizerChain:
    """Base and strong generating set for the group generated by ``gens``."""

    def __init__(self, gens: Sequence[Perm], degree: int | None = None):
        gens = list(gens)
        if degree is None:
            if not gens:
                raise ValueError("degree required for an empty generating set")
            degree = gens[0].degree
        if degree > MAX_DEGREE:
            raise ValueError(f"degree {degree} exceeds cap {MAX_DEGREE}")
        for g in gens:
            if g.degree != degree:
                raise DegreeMismatch("generator degree differs from the ambient degree")
        self.degree = degree
        self.levels: list[_Level] = []
        self._identity = Perm.identity(degree)
        for g in gens:
            if not g.is_identity() and not self.contains(g):
                self._extend(0, g)

    def _extend(self, i: int, g: Perm) -> None:
        if i == len(self.levels):
            self.levels.append(_Level(g.first_moved(), self.degree))
        lev = self.levels[i]
        lev.gens.append(g)
        trans = lev.transversal
        pairs = []
        # new generator applied to every known point, then every new point
        # under every generator, breadth first
        queue = deque()
        for p in list(lev.orbit):
            pairs.append((p, g))
            r = g.images[p]
            if r not in trans:
                t = trans[p] * g
                trans[r] = t
                lev.inverses[r] = t.inverse()
                lev.orbit.append(r)
                queue.append(r)
        while queue:
            p = queue.popleft()
            for s in lev.gens:
                pairs.append((p, s))
                r = s.images[p]
                if r not in trans:
                    t = trans[p] * s
                    trans[r] = t
                    lev.inverses[r] = t.inverse()
                    lev.orbit.append(r)
                    queue.append(r)
        for p, s in pairs:
            r = s.images[p]
            schreier = trans[p] * s * lev.inverses[r]
            if schreier.is_identity():
                continue
            residue = self._sift_from(schreier, i + 1)
            if not residue.is_identity():
                self._extend(i + 1, residue)

    def _sift_from(self, g: Perm, start: int) -> Perm:
        for lev in self.levels[start:]:
            p = g.images[lev.base]
            inv = lev.inverses.get(p)
            if inv is None:
                return g
            g = g * inv
        return g

    def sift(self, g: Perm) -> tuple[Perm, int]:
        """Return the residue of g and the number of levels it passed."""
        for k, lev in enumerate(self.levels):
            p = g.images[lev.base]
            inv = lev.inverses.get(p)
            if inv is None:
                return g, k
            g = g * inv
        return g, len(self.levels)

    def contains(self, g: Perm) -> bool:
        if g.degree != self.degree:
            raise DegreeMismatch("element degree differs from the chain degree")
        residue, _ = self.sift(g)
        return residue.is_identity()

    @property
    def base(self) -> list[int]:
        return [lev.base for lev in self.levels]

    @property
    def order(self) -> int:
        result = 1
        for lev in self.levels:
            result *= len(lev.orbit)
        return result

    @property
    def strong_generators(self) -> list[Perm]:
        seen = set()
        out = []
        for lev in self.levels:
            for g in lev.gens:
                if g not in seen:
                    seen.add(g)
                    out.append(g)
        return out

    def transversal_lists(self) -> list[list[Perm]]:
        return [[lev.transversal[p] for p in lev.orbit] for lev in self.levels]

    def elements(self, bound: int = ENUMERATION_BOUND) -> Iterator[Perm]:
        """Every element once: products u_k * ... * u_1 * u_0 of coset representatives."""
        if self.order > bound:
            raise EnumerationBoundExceeded(f"group order {self.order} exceeds bound {bound}")
        trans = self.transversal_lists()
        if not trans:
            yield self._identity
            return
        for reps in product(*reversed(trans)):
            g = reps[0]
            for u in reps[1:]:
                g = g * u
            yield g

    def element_array(self, bound: int = ENUMERATION_BOUND) -> np.ndarray:
        """All elements as rows of an int array, same order as elements()."""
        if self.order > bound:
            raise EnumerationBoundExceeded(f"group order {self.order} exceeds bound {bound}")
        arr = np.arange(self.degree, dtype=np.int16)[None, :]
        for reps in reversed(self.transversal_lists()):
            arr = _right_multiply(arr, reps)
        return arr

    def iter_element_batches(self) -> Iterator[np.ndarray]:
        """Stream the elements, one batch per coset of the first-level stabilizer."""
        arr = np.arange(self.degree, dtype=np.int16)[None, :]
        trans = self.transversal_lists()
        if not trans:
            yield arr
            return
        for reps in reversed(trans[1:]):
            arr = _right_multiply(arr, reps)
        for u in trans[0]:
            yield np.asarray(u.images, dtype=np.int16)[arr]


def _right_multiply(arr: np.ndarray, reps: Sequence[Perm]) -> np.ndarray:
    # rows h * u for every representative u (outer) and row h (inner)
    U = np.array([u.images for u in reps], dtype=np.int16)
    return U[:, arr].reshape(-1, arr.shape[1])


def enumerate_elements(chain: StabilizerChain, bound: int = ENUMERATION_BOUND) -> Iterator[Perm]:
    return chain.elements(bound)


def bsgs_build(gens: Sequence[Perm], degree: int | None = None) -> StabilizerChain:
    return StabilizerChain(gens, degree)


class PermGroup:
    """A permutation group given by generators, with a lazily built chain."""

    def __init__(self, gens: Sequence[Perm], degree: int | None = None, name: str = ""):
        gens = list(gens)
        if degree is None:
            if not gens:
                raise ValueError("degree required for an empty generating set")
            degree = gens[0].degree
        for g in gens:
            if g.degree != degree:
                raise DegreeMismatch("generator degree differs from the ambient degree")
        self.gens = gens
        self.degree = degree
        self.name = name

    def __repr__(self):
        label = self.name or "PermGroup"
        return f"<{label}: degree {self.degree}, {len(self.gens)} generators>"

    @cached_property
    def chain(self) -> StabilizerChain:
        return StabilizerChain(self.gens, self.degree)

    @property
    def order(self) -> int:
        return self.chain.order

    def contains(self, g: Perm) -> bool:
        return self.chain.contains(g)

    __contains__ = contains

    def orbit(self, point: int) -> set[int]:
        return orbit(self.gens, point)

    def orbits(self) -> list[list[int]]:
        return orbits(self.gens, self.degree)

    def stabilizer(self, point: int) -> PermGroup:
        """Point stabilizer, generated by Schreier generators."""
        transversal = {point: Perm.identity(self.degree)}
        queue = deque([point])
        while queue:
            x = queue.popleft()
            for g in self.gens:
                y = g.images[x]
                if y not in transversal:
                    transversal[y] = transversal[x] * g
                    queue.append(y)
        gens = set()
        for x, t in transversal.items():
            for g in self.gens:
                s = t * g * transversal[g.images[x]].inverse()
                if not s.is_identity():
                    gens.add(s)
        return PermGroup(sorted(gens), self.degree)

    def is_transitive(self) -> bool:
        return len(orbit_list(self.gens, 0)) == self.degree if self.degree else True

    @cached_property
    def element_set(self) -> frozenset[Perm]:
        if self.order > ELEMENT_CACHE_BOUND:
            raise EnumerationBoundExceeded(
                f"order {self.order} above the element-cache bound {ELEMENT_CACHE_BOUND}")
        return frozenset(self.chain.elements())

    def elements(self, bound: int = ENUMERATION_BOUND) -> Iterator[Perm]:
        return self.chain.elements(bound)

    def element_array(self, bound: int = ENUMERATION_BOUND) -> np.ndarray:
        return self.chain.element_array(bound)

    def conjugate(self, g: Perm) -> PermGroup:
        return PermGroup([a.conjugate(g) for a in self.gens], self.degree)

    def is_subgroup_of(self, other: PermGroup) -> bool:
        return all(other.contains(g) for g in self.gens)

    def same_group(self, other: PermGroup) -> bool:
        return self.order == other.order and self.is_subgroup_of(other)


def symmetric_group(n: int) -> PermGroup:
    if n <= 1:
        return PermGroup([], max(n, 1), name=f"Sym({n})")
    gens = [Perm.from_cycles(n, tuple(range(n)))]
    if n > 2:
        gens.append(Perm.from_cycles(n, (0, 1)))
    return PermGroup(gens, n, name=f"Sym({n})")


def is_regular(sub: PermGroup, n: int | None = None) -> bool:
    n = sub.degree if n is None else n
    if sub.degree != n:
        return False
    return sub.is_transitive() and sub.order == n


def inverse_rows(arr: np.ndarray) -> np.ndarray:
    inv = np.empty_like(arr)
    rows = np.arange(arr.shape[0])[:, None]
    inv[rows, arr] = np.arange(arr.shape[1], dtype=arr.dtype)[None, :]
    return inv


def are_conjugate(ambient: PermGroup, A: PermGroup, B: PermGroup,
                  bound: int = ENUMERATION_BOUND) -> Perm | None:
    """First ambient element g (enumeration order) with g^-1 A g == B, else None."""
    if A.degree != B.degree or A.degree != ambient.degree:
        raise DegreeMismatch("subgroups live on different domains")
    if A.order != B.order:
        return None
    if ambient.order > bound:
        raise EnumerationBoundExceeded(f"ambient order {ambient.order} exceeds bound {bound}")
    b_keys = {np.asarray(b.images, dtype=np.int16).tobytes() for b in B.element_set}
    a_gens = [np.asarray(a.images, dtype=np.int16) for a in A.gens if not a.is_identity()]
    for batch in ambient.chain.iter_element_batches():
        inv = inverse_rows(batch)
        ok = np.ones(batch.shape[0], dtype=bool)
        for a in a_gens:
            # (g^-1 a g)[x] = g[a[g^-1[x]]]
            conj = np.take_along_axis(batch, a[inv], axis=1)
            for r in np.flatnonzero(ok):
                if conj[r].tobytes() not in b_keys:
                    ok[r] = False
        hits = np.flatnonzero(ok)
        if hits.size:
            return Perm._raw(tuple(int(v) for v in batch[hits[0]]))
    return None


def is_normal(ambient: PermGroup, A: PermGroup) -> bool:
    for g in ambient.gens:
        for a in A.gens:
            if not A.contains(a.conjugate(g)):
                return False
    return True


def coset_action(gens, D: Sequence, H: Sequence, mul) -> tuple[list[Perm], list]:
    """Action of ``gens`` on the right cosets D\\G, labelled by a complement H.

    ``D`` and ``H`` are element lists with D*H = G and D & H = {1};
    ``mul`` multiplies two group elements.  The coset Dg is labelled by the
    index of the unique h in H with Dg = Dh.  Returns the permutation images of
    the generators and the labelling theta (index -> element of H).
    """
    theta_of = {}
    for d in D:
        for i, h in enumerate(H):
            m = mul(d, h)
            if m in theta_of:
                raise ValueError("coset labelling undefined: D and H intersect nontrivially")
            theta_of[m] = i
    if len(theta_of) != len(D) * len(H):
        raise ValueError("coset labelling undefined")
    perms = []
    for g in gens:
        images = []
        for h in H:
            m = mul(h, g)
            if m not in theta_of:
                raise ValueError("coset labelling undefined: DH does not contain the product")
            images.append(theta_of[m])
        perms.append(Perm(images))
    return perms, list(H)

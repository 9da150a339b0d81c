"""Exact group-algebra arithmetic and Schur rings over a finite group.

Vectors carry integer coefficients indexed by the group's canonical element
order.  Products use int64 only when the worst-case coefficient provably fits;
otherwise they fall back to Python integers, so nothing overflows silently.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass, field

import numpy as np

from .digraph import DEFAULT_BUDGET, AutResult, ColoredDigraph, automorphism_group
from .groups import FiniteGroup
from .perm import PermGroup

_INT64_SAFE = 2**62


class GroupAlgebraVec:
    """An element sum_g c_g g of the integral group algebra."""

    __slots__ = ("group", "coeffs")

    def __init__(self, group: FiniteGroup, coeffs):
        coeffs = np.asarray(coeffs)
        if coeffs.shape != (group.order,):
            raise ValueError("coefficient vector has the wrong length")
        if coeffs.dtype != object:
            coeffs = coeffs.astype(np.int64)
        self.group = group
        self.coeffs = coeffs

    @classmethod
    def zero(cls, group: FiniteGroup) -> GroupAlgebraVec:
        return cls(group, np.zeros(group.order, dtype=np.int64))

    @classmethod
    def unit(cls, group: FiniteGroup) -> GroupAlgebraVec:
        return simple_quantity(group, [group.identity])

    def _check(self, other: GroupAlgebraVec):
        if other.group is not self.group:
            raise ValueError("vectors over different groups")

    def __add__(self, other: GroupAlgebraVec) -> GroupAlgebraVec:
        self._check(other)
        return GroupAlgebraVec(self.group, _exact(self.coeffs, other.coeffs, np.add))

    def __sub__(self, other: GroupAlgebraVec) -> GroupAlgebraVec:
        self._check(other)
        return GroupAlgebraVec(self.group, _exact(self.coeffs, other.coeffs, np.subtract))

    def __neg__(self) -> GroupAlgebraVec:
        return GroupAlgebraVec(self.group, -self.coeffs)

    def __rmul__(self, k: int) -> GroupAlgebraVec:
        if not isinstance(k, (int, np.integer)):
            return NotImplemented
        k = int(k)
        if self.coeffs.dtype != object and _max_abs(self.coeffs) * abs(k) < _INT64_SAFE:
            return GroupAlgebraVec(self.group, self.coeffs * k)
        return GroupAlgebraVec(self.group, self.coeffs.astype(object) * k)

    def __mul__(self, other):
        if isinstance(other, GroupAlgebraVec):
            return gmul(self, other)
        return self.__rmul__(other)

    def __pow__(self, k: int) -> GroupAlgebraVec:
        out = GroupAlgebraVec.unit(self.group)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, GroupAlgebraVec) or other.group is not self.group:
            return NotImplemented
        return all(int(a) == int(b) for a, b in zip(self.coeffs, other.coeffs))

    def support(self) -> frozenset[int]:
        return frozenset(int(i) for i in np.flatnonzero(self.coeffs != 0))

    def values(self) -> list[int]:
        return sorted({int(c) for c in self.coeffs})

    def __repr__(self):
        terms = {int(i): int(self.coeffs[i]) for i in np.flatnonzero(self.coeffs != 0)}
        return f"GroupAlgebraVec({terms})"


def _max_abs(c: np.ndarray) -> int:
    return int(np.abs(c).max()) if len(c) else 0


def _exact(a: np.ndarray, b: np.ndarray, op):
    if a.dtype != object and b.dtype != object and _max_abs(a) + _max_abs(b) < _INT64_SAFE:
        return op(a, b)
    return op(a.astype(object), b.astype(object))


def simple_quantity(group: FiniteGroup, subset: Iterable[int]) -> GroupAlgebraVec:
    c = np.zeros(group.order, dtype=np.int64)
    c[sorted(set(subset))] = 1
    return GroupAlgebraVec(group, c)


def gmul(u: GroupAlgebraVec, v: GroupAlgebraVec) -> GroupAlgebraVec:
    """Convolution: coefficient of g is the sum of u_h v_k over hk = g."""
    u._check(v)
    G = u.group
    su = np.flatnonzero(u.coeffs != 0)
    sv = np.flatnonzero(v.coeffs != 0)
    if su.size == 0 or sv.size == 0:
        return GroupAlgebraVec.zero(G)
    idx = G.mul[np.ix_(su, sv)].ravel()
    bound = _max_abs(u.coeffs) * _max_abs(v.coeffs) * min(su.size, sv.size)
    if u.coeffs.dtype != object and v.coeffs.dtype != object and bound < _INT64_SAFE:
        out = np.zeros(G.order, dtype=np.int64)
        np.add.at(out, idx, np.outer(u.coeffs[su], v.coeffs[sv]).ravel())
        return GroupAlgebraVec(G, out)
    out = [0] * G.order
    cu = [int(c) for c in u.coeffs[su]]
    cv = [int(c) for c in v.coeffs[sv]]
    k = 0
    for a in cu:
        for b in cv:
            out[int(idx[k])] += a * b
            k += 1
    return GroupAlgebraVec(G, np.array(out, dtype=object))


def hadamard(u: GroupAlgebraVec, v: GroupAlgebraVec) -> GroupAlgebraVec:
    """Coefficient-wise (Schur-Hadamard) product."""
    u._check(v)
    if u.coeffs.dtype != object and v.coeffs.dtype != object and \
            _max_abs(u.coeffs) * _max_abs(v.coeffs) < _INT64_SAFE:
        return GroupAlgebraVec(u.group, u.coeffs * v.coeffs)
    return GroupAlgebraVec(u.group, u.coeffs.astype(object) * v.coeffs.astype(object))


def level_set(x: GroupAlgebraVec, c: int) -> GroupAlgebraVec:
    """Indicator of the elements whose coefficient equals c."""
    mask = np.array([int(v) == c for v in x.coeffs], dtype=np.int64)
    return GroupAlgebraVec(x.group, mask)


# -- partitions ---------------------------------------------------------------

def _ranks(values: np.ndarray) -> np.ndarray:
    _, inverse = np.unique(values, return_inverse=True)
    return inverse.reshape(-1).astype(np.int64)


def _pair_ranks(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return _ranks(a * (int(b.max()) + 1) + b)


@dataclass
class SRingPartition:
    """A partition of the group, classes ordered {e} first, then by (size, smallest member)."""

    group: FiniteGroup
    classes: list[frozenset[int]] = field(default_factory=list)

    @classmethod
    def from_labels(cls, group: FiniteGroup, labels) -> SRingPartition:
        labels = np.asarray(labels)
        buckets: dict[int, list[int]] = {}
        for i, lab in enumerate(labels.tolist()):
            buckets.setdefault(lab, []).append(i)
        return cls.from_classes(group, buckets.values())

    @classmethod
    def from_classes(cls, group: FiniteGroup, classes: Iterable[Iterable[int]]) -> SRingPartition:
        cl = [frozenset(c) for c in classes if c]
        e = group.identity
        cl.sort(key=lambda c: (c != frozenset({e}), len(c), min(c)))
        seen = set()
        for c in cl:
            if seen & c:
                raise ValueError("classes overlap")
            seen |= c
        if seen != set(range(group.order)):
            raise ValueError("classes do not cover the group")
        return cls(group, cl)

    @property
    def labels(self) -> np.ndarray:
        out = np.empty(self.group.order, dtype=np.int64)
        for k, c in enumerate(self.classes):
            out[list(c)] = k
        return out

    def __len__(self):
        return len(self.classes)

    def __eq__(self, other):
        return isinstance(other, SRingPartition) and other.group is self.group \
            and self.classes == other.classes

    def basic_quantities(self) -> list[GroupAlgebraVec]:
        return [simple_quantity(self.group, c) for c in self.classes]

    def is_union_of_classes(self, subset: Iterable[int]) -> bool:
        subset = set(subset)
        return all(c <= subset or not (c & subset) for c in self.classes)

    def refines(self, other: SRingPartition) -> bool:
        """Every class of self lies inside a class of other."""
        lab = other.labels
        return all(len({int(lab[i]) for i in c}) == 1 for c in self.classes)

    def to_text(self) -> str:
        return "".join(" ".join(map(str, sorted(c))) + "\n" for c in self.classes)

    @classmethod
    def from_text(cls, group: FiniteGroup, text: str) -> SRingPartition:
        classes = [[int(t) for t in line.split()] for line in text.strip().splitlines()]
        return cls.from_classes(group, classes)


def transitivity_module(group: FiniteGroup, stabilizer: PermGroup) -> SRingPartition:
    """Orbits of the identity's stabilizer, acting on the group's element indices."""
    if stabilizer.degree != group.order:
        raise ValueError("stabilizer must act on the group's elements")
    return SRingPartition.from_classes(group, stabilizer.orbits())


def _class_product(group: FiniteGroup, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.bincount(group.mul[np.ix_(a, b)].ravel(), minlength=group.order)


def generated_sring(group: FiniteGroup, subset: Iterable[int]) -> SRingPartition:
    """Smallest Schur ring containing the simple quantity of ``subset``.

    Start from {e}, S - {e}, rest; then alternately split by the class of the
    inverse and by the coefficients of every product of two class sums, until
    nothing splits.
    """
    n = group.order
    subset = set(subset)
    labels = np.full(n, 2, dtype=np.int64)
    labels[sorted(subset)] = 1
    labels[group.identity] = 0
    labels = _ranks(labels)
    while True:
        k = int(labels.max()) + 1
        labels = _pair_ranks(labels, labels[group.inv])
        classes = [np.flatnonzero(labels == c) for c in range(int(labels.max()) + 1)]
        new = labels
        for a in classes:
            for b in classes:
                new = _pair_ranks(new, _class_product(group, a, b))
        labels = new
        if int(labels.max()) + 1 == k:
            return SRingPartition.from_labels(group, labels)


def is_sring(p: SRingPartition) -> bool:
    G = p.group
    if not p.classes or p.classes[0] != frozenset({G.identity}):
        return False
    class_set = set(p.classes)
    for c in p.classes:
        if frozenset(int(G.inv[i]) for i in c) not in class_set:
            return False
    labels = p.labels
    arrays = [np.fromiter(c, dtype=np.int64) for c in p.classes]
    for a in arrays:
        for b in arrays:
            prod = _class_product(G, a, b)
            for c in arrays:
                if len(set(prod[c].tolist())) != 1:
                    return False
    del labels
    return True


def sring_aut(p: SRingPartition, budget: int = DEFAULT_BUDGET) -> AutResult:
    """Automorphisms of the arc colouring (x, y) -> class of x y^-1."""
    if not is_sring(p):
        raise ValueError("partition is not a Schur ring")
    G = p.group
    quotient = G.mul[:, G.inv]
    return automorphism_group(ColoredDigraph(p.labels[quotient]), budget)


# -- the multiplication table of V(H, G_e) ------------------------------------

@dataclass
class Table1Report:
    q: int
    checks: int = 0
    mismatches: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.checks > 0 and not self.mismatches


def verify_table1(q: int) -> Table1Report:
    """Check every product of basic quantities S_a, C_b, P_c against the closed forms.

    The table is stated for the bracket product, which multiplies in the
    opposite order to H's matrix product, so entry (row X, column Y) is Y X.
    """
    from .matgroup import coset_half, h1_subgroup, h2_subgroup, h_group, parabolic, singleton

    H = h_group(q)
    sq = lambda s: simple_quantity(H, s)  # noqa: E731
    S = {a: sq(singleton(q, a).members) for a in range(q)}
    C = {b: sq(coset_half(q, b)) for b in range(1, q)}
    P = {c: sq(parabolic(q, c).members) for c in range(q)}
    H1, H2 = h1_subgroup(q), h2_subgroup(q)
    all_h = frozenset(range(H.order))
    outside_h1 = sq(all_h - H1)
    h1_minus_h2 = sq(H1 - H2)
    report = Table1Report(q)

    def check(name, got, want):
        report.checks += 1
        if got != want:
            report.mismatches.append(name)

    for a in range(q):
        for r in range(q):
            check(f"S_{a} S_{r}", S[r] * S[a], S[(a + r) % q])
        for s in C:
            check(f"S_{a} C_{s}", C[s] * S[a], C[s])
        for t in range(q):
            check(f"S_{a} P_{t}", P[t] * S[a], P[(t - a) % q])
    for b in C:
        for r in range(q):
            check(f"C_{b} S_{r}", S[r] * C[b], C[b])
        for s in C:
            want = q * C[(b + s) % q] if (b + s) % q else q * sq(H2)
            check(f"C_{b} C_{s}", C[s] * C[b], want)
        for t in range(q):
            check(f"C_{b} P_{t}", P[t] * C[b], outside_h1)
    for c in range(q):
        for r in range(q):
            check(f"P_{c} S_{r}", S[r] * P[c], P[(c + r) % q])
        for s in C:
            check(f"P_{c} C_{s}", C[s] * P[c], outside_h1)
        for t in range(q):
            check(f"P_{c} P_{t}", P[t] * P[c], q * S[(t - c) % q] + h1_minus_h2)
    return report

"""Upper triangular 3x3 matrix groups over a prime field F_q.

For an odd prime q the module builds

* G: upper triangular 3x3 matrices with diagonal entries +-1 and determinant 1,
* D = {[a, x]}, H = {[a, (x, y)]} and K, the three subgroups used to make H
  and K act regularly on the cosets D\\G,

together with the bracket arithmetic for D and H, the orbit families of the
point stabilizer on H, the transpose-inverse automorphism ``alpha`` and its
shadow ``alpha_hat`` on H, and the 54-vertex generalised dihedral example.

H is enumerated canonically: ``[a, (x, y)]`` has index
``sign_bit(a) * q^2 + x * q + y`` with sign_bit(+1) = 0 and sign_bit(-1) = 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from .groups import FiniteGroup
from .perm import Perm, PermGroup, coset_action

MAX_Q = 13

Mat3 = tuple  # nine entries mod q, row major


def check_q(q: int, max_q: int = MAX_Q) -> int:
    if q < 3 or q % 2 == 0 or any(q % p == 0 for p in range(3, int(q**0.5) + 1, 2)):
        raise ValueError(f"q must be an odd prime, got {q}")
    if q > max_q:
        raise ValueError(f"q = {q} is above the configured bound {max_q}")
    return q


def half(q: int) -> int:
    return pow(2, -1, q)


def sign(a: int, q: int) -> int:
    """Map +-1 (in any representation) to the residue used in matrices."""
    return 1 if a % q == 1 else q - 1


# -- 3x3 matrices -----------------------------------------------------------

def mat_mul(A: Mat3, B: Mat3, q: int) -> Mat3:
    a0, a1, a2, a3, a4, a5, a6, a7, a8 = A
    b0, b1, b2, b3, b4, b5, b6, b7, b8 = B
    return (
        (a0 * b0 + a1 * b3 + a2 * b6) % q, (a0 * b1 + a1 * b4 + a2 * b7) % q, (a0 * b2 + a1 * b5 + a2 * b8) % q,
        (a3 * b0 + a4 * b3 + a5 * b6) % q, (a3 * b1 + a4 * b4 + a5 * b7) % q, (a3 * b2 + a4 * b5 + a5 * b8) % q,
        (a6 * b0 + a7 * b3 + a8 * b6) % q, (a6 * b1 + a7 * b4 + a8 * b7) % q, (a6 * b2 + a7 * b5 + a8 * b8) % q,
    )


def mat_det(A: Mat3, q: int) -> int:
    a, b, c, d, e, f, g, h, i = A
    return (a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)) % q


def mat_inv(A: Mat3, q: int) -> Mat3:
    det = mat_det(A, q)
    if det == 0:
        raise ValueError("singular matrix")
    a, b, c, d, e, f, g, h, i = A
    adj = (e * i - f * h, c * h - b * i, b * f - c * e,
           f * g - d * i, a * i - c * g, c * d - a * f,
           d * h - e * g, b * g - a * h, a * e - b * d)
    k = pow(det, -1, q)
    return tuple((k * v) % q for v in adj)


def mat_transpose(A: Mat3) -> Mat3:
    return (A[0], A[3], A[6], A[1], A[4], A[7], A[2], A[5], A[8])


def identity_mat(q: int) -> Mat3:
    return (1, 0, 0, 0, 1, 0, 0, 0, 1)


# -- bracket forms ----------------------------------------------------------

@dataclass(frozen=True)
class DElem:
    """[a, x]: the D-matrix (a, ax, ax^2/2 / 0, 1, x / 0, 0, a)."""

    a: int
    x: int
    q: int

    def __post_init__(self):
        if self.a not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        object.__setattr__(self, "x", self.x % self.q)

    def matrix(self) -> Mat3:
        q, a, x = self.q, sign(self.a, self.q), self.x
        return (a, a * x % q, a * x * x * half(q) % q, 0, 1, x, 0, 0, a)

    def __mul__(self, other: DElem) -> DElem:
        return d_mul(self, other)


@dataclass(frozen=True)
class HElem:
    """[a, (x, y)]: the H-matrix (a, 0, x / 0, a, y / 0, 0, 1)."""

    a: int
    x: int
    y: int
    q: int

    def __post_init__(self):
        if self.a not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        object.__setattr__(self, "x", self.x % self.q)
        object.__setattr__(self, "y", self.y % self.q)

    @classmethod
    def from_index(cls, i: int, q: int) -> HElem:
        s, rest = divmod(i, q * q)
        x, y = divmod(rest, q)
        return cls(1 if s == 0 else -1, x, y, q)

    @property
    def index(self) -> int:
        return (0 if self.a == 1 else 1) * self.q * self.q + self.x * self.q + self.y

    def matrix(self) -> Mat3:
        a = sign(self.a, self.q)
        return (a, 0, self.x, 0, a, self.y, 0, 0, 1)

    def inverse(self) -> HElem:
        return HElem(self.a, -self.a * self.x, -self.a * self.y, self.q)

    def __mul__(self, other: HElem) -> HElem:
        return h_mul(self, other)

    def __repr__(self):
        return f"[{'+' if self.a == 1 else '-'}1,({self.x},{self.y})]"


def d_mul(p: DElem, r: DElem) -> DElem:
    """[a, x][b, y] = [ab, bx + y]."""
    if p.q != r.q:
        raise ValueError("modulus mismatch")
    return DElem(p.a * r.a, r.a * p.x + r.x, p.q)


def h_mul(p: HElem, r: HElem) -> HElem:
    """Matrix product: [a, v][b, w] = [ab, v + aw].

    The printed bracket rule [ab, bv + w] is this product with the factors
    swapped; see ``h_mul_bracket``.
    """
    if p.q != r.q:
        raise ValueError("modulus mismatch")
    return HElem(p.a * r.a, p.x + p.a * r.x, p.y + p.a * r.y, p.q)


def h_mul_bracket(p: HElem, r: HElem) -> HElem:
    """[a, v][b, w] = [ab, bv + w], which equals h_mul(r, p)."""
    if p.q != r.q:
        raise ValueError("modulus mismatch")
    return HElem(p.a * r.a, r.a * p.x + r.x, r.a * p.y + r.y, p.q)


def d_act_h(h: HElem, d: DElem) -> HElem:
    """h^d = d^-1 h d in bracket coordinates."""
    if h.q != d.q:
        raise ValueError("modulus mismatch")
    q, a, x, y = h.q, h.a, h.x, h.y
    b, z = d.a, d.x
    return HElem(a, (1 - a) * z * z * half(q) - b * y * z + x, (a - 1) * z + b * y, q)


def k_matrix(a: int, x: int, y: int, q: int) -> Mat3:
    s = sign(a, q)
    return (1, x % q, y % q, 0, s, 0, 0, 0, s)


# -- the groups -------------------------------------------------------------

@dataclass
class MatrixGroups:
    q: int
    G: list[Mat3]
    D: list[Mat3]
    H: list[Mat3]
    K: list[Mat3]
    G_gens: list[Mat3]
    D_gens: list[Mat3]
    H_gens: list[Mat3]
    K_gens: list[Mat3]


@lru_cache(maxsize=None)
def build_groups(q: int) -> MatrixGroups:
    check_q(q)
    m1 = q - 1
    G = [(a, x, z, 0, b, y, 0, 0, c)
         for a, b, c in product((1, m1), repeat=3) if a * b * c % q == 1
         for x, y, z in product(range(q), repeat=3)]
    D = [DElem(a, x, q).matrix() for a in (1, -1) for x in range(q)]
    H = [HElem.from_index(i, q).matrix() for i in range(2 * q * q)]
    K = [k_matrix(a, x, y, q) for a in (1, -1) for x in range(q) for y in range(q)]
    G_gens = [
        (1, 0, 0, 0, m1, 0, 0, 0, m1),
        (m1, 0, 0, 0, m1, 0, 0, 0, 1),
        (1, 1, 0, 0, 1, 0, 0, 0, 1),
        (1, 0, 0, 0, 1, 1, 0, 0, 1),
    ]
    D_gens = [DElem(-1, 0, q).matrix(), DElem(1, 1, q).matrix()]
    H_gens = [HElem(-1, 0, 0, q).matrix(), HElem(1, 1, 0, q).matrix(), HElem(1, 0, 1, q).matrix()]
    K_gens = [k_matrix(-1, 0, 0, q), k_matrix(1, 1, 0, q), k_matrix(1, 0, 1, q)]
    groups = MatrixGroups(q, G, D, H, K, G_gens, D_gens, H_gens, K_gens)
    g_set = set(G)
    for name, sub in (("D", D), ("H", H), ("K", K)):
        if len(set(sub)) != len(sub) or not set(sub) <= g_set:
            raise AssertionError(f"{name} is not a subset of G")
    if len(G) != 4 * q**3:
        raise AssertionError("|G| != 4q^3")
    return groups


def closure_size(gens: list[Mat3], q: int) -> int:
    seen = {identity_mat(q)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for m in frontier:
            for g in gens:
                p = mat_mul(m, g, q)
                if p not in seen:
                    seen.add(p)
                    nxt.append(p)
        frontier = nxt
    return len(seen)


@dataclass
class CosetRepresentation:
    """G, D, H, K acting on D\\G, with cosets labelled by H's canonical indices."""

    q: int
    G: PermGroup
    D: PermGroup
    H: PermGroup
    K: PermGroup
    theta: list[HElem]

    @property
    def degree(self) -> int:
        return 2 * self.q * self.q

    def point_stabilizer(self) -> PermGroup:
        return self.D


@lru_cache(maxsize=None)
def coset_representation(q: int) -> CosetRepresentation:
    mg = build_groups(q)
    mul = lambda A, B: mat_mul(A, B, q)  # noqa: E731
    gens = mg.G_gens + mg.D_gens + mg.H_gens + mg.K_gens
    perms, labels = coset_action(gens, mg.D, mg.H, mul)
    n = 2 * q * q
    k1, k2, k3 = 4, 4 + len(mg.D_gens), 4 + len(mg.D_gens) + len(mg.H_gens)
    theta = [HElem.from_index(i, q) for i in range(n)]
    if [h.matrix() for h in theta] != labels:
        raise AssertionError("coset labels out of canonical order")
    return CosetRepresentation(
        q,
        G=PermGroup(perms[:k1], n, name=f"G(q={q})"),
        D=PermGroup(perms[k1:k2], n, name=f"D(q={q})"),
        H=PermGroup(perms[k2:k3], n, name=f"H(q={q})"),
        K=PermGroup(perms[k3:], n, name=f"K(q={q})"),
        theta=theta,
    )


@lru_cache(maxsize=None)
def h_group(q: int) -> FiniteGroup:
    """H as a multiplication table in canonical order, under the matrix product."""
    check_q(q)
    elements = [HElem.from_index(i, q) for i in range(2 * q * q)]
    return FiniteGroup.from_function(elements, h_mul, name=f"H(q={q})")


def identity_h(q: int) -> HElem:
    return HElem(1, 0, 0, q)


# -- orbit families ---------------------------------------------------------

@dataclass(frozen=True)
class OrbitFamily:
    kind: str  # "S" singleton, "C" coset, "P" parabolic
    t: int
    q: int
    members: frozenset[int]  # canonical indices in H

    @property
    def label(self) -> str:
        return f"C_+-{self.t}" if self.kind == "C" else f"{self.kind}_{self.t}"

    @property
    def elements(self) -> list[HElem]:
        return [HElem.from_index(i, self.q) for i in sorted(self.members)]

    def __len__(self):
        return len(self.members)


def singleton(q: int, t: int) -> OrbitFamily:
    t %= q
    return OrbitFamily("S", t, q, frozenset({HElem(1, t, 0, q).index}))


def coset_half(q: int, t: int) -> frozenset[int]:
    """C_t = {[1, (z, t)]}; a single coset, not itself an orbit."""
    return frozenset(HElem(1, z, t, q).index for z in range(q))


def coset_class(q: int, t: int) -> OrbitFamily:
    t %= q
    if t == 0:
        raise ValueError("coset orbits need t != 0")
    rep = min(t, q - t)
    return OrbitFamily("C", rep, q, coset_half(q, t) | coset_half(q, -t))


def parabolic(q: int, t: int) -> OrbitFamily:
    t %= q
    return OrbitFamily("P", t, q, frozenset(HElem(-1, t + z * z, 2 * z, q).index for z in range(q)))


def orbit_families(q: int) -> list[OrbitFamily]:
    check_q(q)
    fams = [singleton(q, t) for t in range(q)]
    fams += [coset_class(q, t) for t in range(1, (q - 1) // 2 + 1)]
    fams += [parabolic(q, t) for t in range(q)]
    return fams


def family_index(q: int) -> list[int]:
    """Position in orbit_families(q) of the family containing each element of H."""
    out = [-1] * (2 * q * q)
    for k, fam in enumerate(orbit_families(q)):
        for i in fam.members:
            out[i] = k
    return out


def is_self_paired(fam: OrbitFamily) -> bool:
    return frozenset(HElem.from_index(i, fam.q).inverse().index for i in fam.members) == fam.members


def h1_subgroup(q: int) -> frozenset[int]:
    return frozenset(HElem(1, x, y, q).index for x in range(q) for y in range(q))


def h2_subgroup(q: int) -> frozenset[int]:
    return frozenset(HElem(1, t, 0, q).index for t in range(q))


# -- alpha and alpha_hat ----------------------------------------------------

_S_SWAP = (0, 0, 1, 0, 1, 0, 1, 0, 0)


def alpha(g: Mat3, q: int) -> Mat3:
    """g -> s^-1 (g^-1)^T s with s the anti-diagonal permutation matrix."""
    return mat_mul(mat_mul(_S_SWAP, mat_transpose(mat_inv(g, q)), q), _S_SWAP, q)


def alpha_hat(h: HElem) -> HElem:
    """[a, (x, y)] -> [a, (y^2/2 - x, a y)]."""
    q = h.q
    return HElem(h.a, h.y * h.y * half(q) - h.x, h.a * h.y, q)


def alpha_hat_perm(q: int) -> Perm:
    return Perm([alpha_hat(HElem.from_index(i, q)).index for i in range(2 * q * q)])


# -- connection sets --------------------------------------------------------

def valid_x(q: int, x: int) -> bool:
    x %= q
    banned = {0, 1, q - 1, 2, q - 2, half(q)}
    return x not in banned and pow(x, 6, q) != 1


def choose_x(q: int) -> int:
    """Smallest residue x >= 2 outside {0, +-1, +-2, 1/2} with x^6 != 1."""
    check_q(q)
    if q <= 7:
        raise ValueError("choose_x needs q > 7")
    for x in range(2, q):
        if valid_x(q, x):
            return x
    raise AssertionError("no admissible x")


def _union(*sets) -> frozenset[int]:
    out: set[int] = set()
    for s in sets:
        out |= s.members if isinstance(s, OrbitFamily) else s
    return frozenset(out)


def build_T(q: int, x: int | None = None) -> frozenset[int]:
    check_q(q)
    if q in (3, 5):
        return _union(singleton(q, 1), parabolic(q, 0))
    if q == 7:
        x = 3 if x is None else x
    elif x is None:
        x = choose_x(q)
    if q > 7 and not valid_x(q, x):
        raise ValueError(f"x = {x} is not admissible for q = {q}")
    return _union(parabolic(q, 0), parabolic(q, 1), parabolic(q, x), coset_class(q, 1))


def build_Tprime(q: int, x: int | None = None) -> frozenset[int]:
    check_q(q)
    if q in (3, 5):
        return _union(singleton(q, -1), parabolic(q, 0))
    if q == 7:
        x = 3 if x is None else x
    elif x is None:
        x = choose_x(q)
    if q > 7 and not valid_x(q, x):
        raise ValueError(f"x = {x} is not admissible for q = {q}")
    return _union(parabolic(q, 0), parabolic(q, -1), parabolic(q, -x), coset_class(q, 1))


def symmetric_non_ci_set(q: int) -> frozenset[int]:
    """P_0 u S_1 u S_-1, the inverse-closed candidate used at q = 5."""
    return _union(parabolic(q, 0), singleton(q, 1), singleton(q, -1))


# -- generalised dihedral groups --------------------------------------------

@dataclass
class Dihedral:
    """Dih(A) for an abelian permutation group A, as a table and a regular action."""

    group: FiniteGroup
    abelian: list[Perm]  # elements of A in enumeration order
    regular: PermGroup
    involution: int  # index of the outer involution

    @property
    def order(self) -> int:
        return self.group.order


def dih(gens: list[Perm], name: str = "") -> Dihedral:
    """Elements (i, s) stand for a_i * x^s, where the involution x inverts all of A."""
    for g in gens:
        for h in gens:
            if g * h != h * g:
                raise ValueError("generators do not commute")
    A = PermGroup(gens, gens[0].degree)
    a_elems = list(A.elements())
    a_index = {a: i for i, a in enumerate(a_elems)}
    elements = [(i, s) for s in (0, 1) for i in range(len(a_elems))]

    def mulfn(u, v):
        (i, s), (j, t) = u, v
        b = a_elems[j] if s == 0 else a_elems[j].inverse()
        return (a_index[a_elems[i] * b], (s + t) % 2)

    group = FiniteGroup.from_function(elements, mulfn, name=name or f"Dih(order {len(a_elems)})")
    return Dihedral(group, a_elems, group.right_regular(), group.index((a_index[Perm.identity(A.degree)], 1)))


@dataclass
class SpecialCase:
    group: FiniteGroup  # R of order 54, elements as permutations of 9 points
    A: list[int]  # indices of the abelian half
    x: int  # index of the outer involution
    S: frozenset[int]
    gamma: object  # Digraph
    e: tuple[Perm, Perm, Perm]


@lru_cache(maxsize=None)
def special_case_z27() -> SpecialCase:
    """R = <(123), (456), (789), (12)(45)(78)> on 9 points, S, and Cay(R, S)."""
    from .digraph import cayley

    e1 = Perm.from_cycles(9, (0, 1, 2))
    e2 = Perm.from_cycles(9, (3, 4, 5))
    e3 = Perm.from_cycles(9, (6, 7, 8))
    x = Perm.from_cycles(9, (0, 1), (3, 4), (6, 7))
    ident = Perm.identity(9)
    # canonical order: e1^i e2^j e3^k x^s at index s*27 + 9i + 3j + k
    elements = [(e1 ** i) * (e2 ** j) * (e3 ** k) * (x ** s)
                for s in (0, 1) for i in range(3) for j in range(3) for k in range(3)]
    if len(set(elements)) != 54:
        raise AssertionError("R should have order 54")
    R = FiniteGroup.from_perms(elements, name="Dih(Z3^3)")
    words = [ident, e1, e2, e3, e1 * e2, e1 ** 2 * e2 ** 2, e2 * e3, e2 ** 2 * e3 ** 2,
             e1 ** 2 * e2 ** 2 * e3 ** 2]
    S = frozenset(R.index(w * x) for w in words)
    return SpecialCase(R, list(range(27)), R.index(x), S, cayley(R, S), (e1, e2, e3))


def alpha_lemma_checks(q: int) -> dict[str, bool]:
    """The four identities relating alpha on G to alpha_hat on H, fully quantified."""
    mg = build_groups(q)
    G, D, H, K = (frozenset(mg.G), frozenset(mg.D), frozenset(mg.H), frozenset(mg.K))
    img = lambda s: frozenset(alpha(g, q) for g in s)  # noqa: E731
    cosets_ok = True
    for i in range(2 * q * q):
        h = HElem.from_index(i, q)
        lhs = frozenset(alpha(mat_mul(d, h.matrix(), q), q) for d in mg.D)
        rhs = frozenset(mat_mul(d, alpha_hat(h).matrix(), q) for d in mg.D)
        cosets_ok &= lhs == rhs
    hat = lambda s: frozenset(alpha_hat(HElem.from_index(i, q)).index for i in s)  # noqa: E731
    families_ok = all(
        hat(singleton(q, t).members) == singleton(q, -t).members
        and hat(parabolic(q, t).members) == parabolic(q, -t).members
        for t in range(q)
    ) and all(hat(coset_half(q, t)) == coset_half(q, t) for t in range(1, q))
    return {
        "G^alpha = G": img(G) == G,
        "D^alpha = D": img(D) == D,
        "H^alpha = K": img(H) == K,
        "K^alpha = H": img(K) == H,
        "(Dh)^alpha = D h^alpha_hat": cosets_ok,
        "alpha_hat on families": families_ok,
    }

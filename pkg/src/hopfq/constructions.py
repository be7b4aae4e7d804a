"""Builders for group, loop, groupoid and cochain-twisted algebras and their relatives."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .comodule import AnchorMorphism, ComoduleMagma, check_strong_eqs
from .exactlin import Mat, Swap, chain, compose, direct_sum, identity, tensor
from .report import AxiomError, AxiomReport, Check, Suite, compare
from .structures import UnitalMagma, WeakHopfQuasigroup, check_hopf_quasigroup

__all__ = [
    "MulTable",
    "Cochain2",
    "GroupoidTable",
    "TableError",
    "cyclic_group",
    "elementary_abelian",
    "direct_product",
    "group_algebra",
    "loop_algebra",
    "cochain_algebra",
    "cayley_dickson_cochain",
    "cayley_dickson_multiply",
    "sign_loop",
    "octonion_loop",
    "quaternion_loop",
    "find_ip_loop",
    "pair_groupoid",
    "groupoid_union",
    "groupoid_algebra",
    "direct_sum_whq",
    "sign_action",
    "smash_product",
    "action_multiplicative",
    "opposite_comodule_magma",
    "projection_comodule",
]


class TableError(ValueError):
    """A multiplication table violates a required law; ``witness`` names the elements."""

    def __init__(self, message: str, witness: tuple = ()):
        super().__init__(f"{message} at {witness}" if witness else message)
        self.witness = witness


@dataclass(frozen=True)
class MulTable:
    order: int
    table: tuple[tuple[int, ...], ...]
    identity: int = 0

    def __post_init__(self):
        t = tuple(tuple(int(v) for v in row) for row in self.table)
        object.__setattr__(self, "table", t)
        if len(t) != self.order or any(len(r) != self.order for r in t):
            raise TableError("table is not order x order")
        if any(not 0 <= v < self.order for r in t for v in r):
            raise TableError("table entry out of range")
        e = self.identity
        for x in range(self.order):
            if t[e][x] != x or t[x][e] != x:
                raise TableError("identity does not act trivially", (x,))

    def mul(self, x: int, y: int) -> int:
        return self.table[x][y]

    def latin_witness(self) -> tuple | None:
        full = set(range(self.order))
        for x in range(self.order):
            if set(self.table[x]) != full:
                return ("row", x)
            if {self.table[y][x] for y in range(self.order)} != full:
                return ("column", x)
        return None

    def inverses(self) -> list[int]:
        """Two-sided inverses; raises if some element lacks one."""
        e, out = self.identity, []
        for x in range(self.order):
            right = [y for y in range(self.order) if self.table[x][y] == e]
            left = [y for y in range(self.order) if self.table[y][x] == e]
            if len(right) != 1 or right != left:
                raise TableError("no two-sided inverse", (x,))
            out.append(right[0])
        return out

    def associativity_witness(self) -> tuple[int, int, int] | None:
        t = self.table
        for x, y, z in itertools.product(range(self.order), repeat=3):
            if t[t[x][y]][z] != t[x][t[y][z]]:
                return (x, y, z)
        return None

    def ip_witness(self) -> tuple | None:
        """First (x, y) violating x⁻¹(xy) = y or (yx)x⁻¹ = y, or a Latin failure."""
        w = self.latin_witness()
        if w is not None:
            return w
        inv = self.inverses()
        t = self.table
        for x, y in itertools.product(range(self.order), repeat=2):
            if t[inv[x]][t[x][y]] != y or t[t[y][x]][inv[x]] != y:
                return (x, y)
        return None

    def to_json(self) -> dict:
        return {"order": self.order, "identity": self.identity, "table": [list(r) for r in self.table]}


def cyclic_group(n: int) -> MulTable:
    return MulTable(n, tuple(tuple((i + j) % n for j in range(n)) for i in range(n)))


def elementary_abelian(k: int) -> MulTable:
    """Z₂^k with elements encoded as k-bit integers and XOR as product."""
    n = 2**k
    return MulTable(n, tuple(tuple(i ^ j for j in range(n)) for i in range(n)))


def direct_product(a: MulTable, b: MulTable) -> MulTable:
    """Pairs (x, y) encoded as x·|b| + y."""
    nb = b.order
    n = a.order * nb
    table = [[0] * n for _ in range(n)]
    for i, j in itertools.product(range(n), repeat=2):
        (x1, y1), (x2, y2) = divmod(i, nb), divmod(j, nb)
        table[i][j] = a.table[x1][x2] * nb + b.table[y1][y2]
    return MulTable(n, tuple(map(tuple, table)), a.identity * nb + b.identity)


def _grouplike_whq(L: MulTable, inv: Sequence[int], name: str) -> WeakHopfQuasigroup:
    n = L.order
    eta = np.zeros((n, 1), dtype=np.int64)
    eta[L.identity, 0] = 1
    mu = np.zeros((n, n * n), dtype=np.int64)
    delta = np.zeros((n * n, n), dtype=np.int64)
    lam = np.zeros((n, n), dtype=np.int64)
    for x in range(n):
        for y in range(n):
            mu[L.table[x][y], x * n + y] = 1
        delta[x * n + x, x] = 1
        lam[inv[x], x] = 1
    eps = np.ones((1, n), dtype=np.int64)
    return WeakHopfQuasigroup.from_maps(Mat(eta), Mat(mu), Mat(eps), Mat(delta), Mat(lam), name=name)


def group_algebra(G: MulTable, name: str = "KG") -> WeakHopfQuasigroup:
    w = G.associativity_witness()
    if w is not None:
        raise TableError("group table is not associative", w)
    inv = G.inverses()
    H = _grouplike_whq(G, inv, name)
    rep = check_hopf_quasigroup(H)
    if not rep.passed:
        raise AxiomError(rep)
    return H


def loop_algebra(L: MulTable, name: str = "KL") -> WeakHopfQuasigroup:
    w = L.ip_witness()
    if w is not None:
        raise TableError("not an IP loop", w)
    H = _grouplike_whq(L, L.inverses(), name)
    rep = check_hopf_quasigroup(H)
    if not rep.passed:
        raise AxiomError(rep)
    assert H.is_cocommutative
    return H


@dataclass(frozen=True)
class Cochain2:
    group: MulTable
    F: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        F = tuple(tuple(Fraction(v) for v in row) for row in self.F)
        object.__setattr__(self, "F", F)
        n, e = self.group.order, self.group.identity
        if len(F) != n or any(len(r) != n for r in F):
            raise TableError("cochain is not order x order")
        if any(v == 0 for r in F for v in r):
            raise TableError("cochain takes the value zero")
        for a in range(n):
            if F[e][a] != 1 or F[a][e] != 1:
                raise TableError("cochain is not normalized", (a,))


def cochain_algebra(c: Cochain2) -> UnitalMagma:
    """K_F G: e_a e_b = F(a, b) e_{ab}."""
    G = c.group
    n = G.order
    rows = [[Fraction(0)] * (n * n) for _ in range(n)]
    for a in range(n):
        for b in range(n):
            rows[G.table[a][b]][a * n + b] = c.F[a][b]
    eta = [[1 if x == G.identity else 0] for x in range(n)]
    return UnitalMagma(Mat.from_rows(eta), Mat.from_rows(rows))


def cayley_dickson_multiply(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """(a, b)(c, d) = (ac − d̄b, da + bc̄) on coefficient vectors of length 2^k."""
    if len(x) == 1:
        return x * y
    h = len(x) // 2
    a, b, c, d = x[:h], x[h:], y[:h], y[h:]
    conj = _cd_conjugate
    return np.concatenate([
        cayley_dickson_multiply(a, c) - cayley_dickson_multiply(conj(d), b),
        cayley_dickson_multiply(d, a) + cayley_dickson_multiply(b, conj(c)),
    ])


def _cd_conjugate(x: np.ndarray) -> np.ndarray:
    out = -x.copy()
    out[0] = x[0]
    return out


def cayley_dickson_cochain(k: int) -> Cochain2:
    """Sign cochain on Z₂^k from k doublings of the rationals (k = 3 gives the octonions)."""
    G = elementary_abelian(k)
    n = G.order
    F = [[Fraction(0)] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            ea = np.zeros(n, dtype=object)
            eb = np.zeros(n, dtype=object)
            ea[a] = eb[b] = 1
            prod = cayley_dickson_multiply(ea, eb)
            nz = [i for i in range(n) if prod[i] != 0]
            if nz != [a ^ b] or abs(prod[a ^ b]) != 1:
                raise TableError("doubling does not produce a signed basis product", (a, b))
            F[a][b] = Fraction(int(prod[a ^ b]))
    return Cochain2(G, tuple(map(tuple, F)))


def sign_loop(c: Cochain2) -> MulTable:
    """Loop {±e_a}: element s·|G| + a stands for (−1)^s e_a."""
    G = c.group
    n = G.order
    table = [[0] * (2 * n) for _ in range(2 * n)]
    for x, y in itertools.product(range(2 * n), repeat=2):
        (s, a), (t, b) = divmod(x, n), divmod(y, n)
        f = c.F[a][b]
        if abs(f) != 1:
            raise TableError("cochain is not ±1 valued", (a, b))
        sign = (s + t + (1 if f < 0 else 0)) % 2
        table[x][y] = sign * n + G.table[a][b]
    return MulTable(2 * n, tuple(map(tuple, table)), G.identity)


def octonion_loop() -> MulTable:
    """The 16 signed octonion basis units."""
    return sign_loop(cayley_dickson_cochain(3))


def quaternion_loop() -> MulTable:
    """The 8 signed quaternion basis units (the quaternion group)."""
    return sign_loop(cayley_dickson_cochain(2))


def find_ip_loop(order: int, nonassociative: bool = True) -> MulTable | None:
    """Backtracking search for an IP loop of the given order with identity 0.

    Filling xy = z forces x⁻¹z = y and z·y⁻¹ = x, which prunes the search
    to a few thousand nodes for orders up to 8.
    """
    n = order
    others = list(range(1, n))

    def involutions(items):
        if not items:
            yield {}
            return
        first, rest = items[0], items[1:]
        for sub in involutions(rest):
            yield {first: first, **sub}
        for k, partner in enumerate(rest):
            remaining = rest[:k] + rest[k + 1:]
            for sub in involutions(remaining):
                yield {first: partner, partner: first, **sub}

    seen_inv: set[tuple[int, ...]] = set()
    for inv_map in involutions(others):
        inv = tuple([0] + [inv_map[x] for x in others])
        # involutions with the same number of fixed points are conjugate
        key = (sum(1 for x in others if inv[x] == x),)
        if key in seen_inv:
            continue
        seen_inv.add(key)
        found = _ip_search(n, inv, nonassociative)
        if found is not None:
            return found
    return None


def _ip_search(n: int, inv: tuple[int, ...], nonassociative: bool) -> MulTable | None:
    T = [[-1] * n for _ in range(n)]
    row_used = [set() for _ in range(n)]
    col_used = [set() for _ in range(n)]
    trail: list[tuple[int, int]] = []

    def assign(x: int, y: int, z: int) -> bool:
        stack = [(x, y, z)]
        while stack:
            x, y, z = stack.pop()
            cur = T[x][y]
            if cur == z:
                continue
            if cur != -1 or z in row_used[x] or z in col_used[y]:
                return False
            T[x][y] = z
            row_used[x].add(z)
            col_used[y].add(z)
            trail.append((x, y))
            stack.append((inv[x], z, y))
            stack.append((z, inv[y], x))
        return True

    def undo(mark: int) -> None:
        while len(trail) > mark:
            x, y = trail.pop()
            z = T[x][y]
            T[x][y] = -1
            row_used[x].discard(z)
            col_used[y].discard(z)

    for x in range(n):
        if not assign(0, x, x) or not assign(x, 0, x):
            return None
    for x in range(1, n):
        if not assign(x, inv[x], 0):
            return None

    cells = [(x, y) for x in range(1, n) for y in range(1, n)]

    def search(k: int) -> MulTable | None:
        while k < len(cells) and T[cells[k][0]][cells[k][1]] != -1:
            k += 1
        if k == len(cells):
            table = MulTable(n, tuple(map(tuple, T)))
            if table.ip_witness() is not None:
                return None
            if nonassociative and table.associativity_witness() is None:
                return None
            return table
        x, y = cells[k]
        for z in range(n):
            if z in row_used[x] or z in col_used[y]:
                continue
            mark = len(trail)
            if assign(x, y, z):
                out = search(k + 1)
                if out is not None:
                    return out
            undo(mark)
        return None

    return search(0)


@dataclass(frozen=True)
class GroupoidTable:
    """Finite groupoid: arrows as (source, target); compose[g][f] = g∘f or −1."""

    objects: int
    arrows: tuple[tuple[int, int], ...]
    compose: tuple[tuple[int, ...], ...]
    inverse: tuple[int, ...]
    identities: tuple[int, ...]

    def __post_init__(self):
        arrows = tuple((int(s), int(t)) for s, t in self.arrows)
        object.__setattr__(self, "arrows", arrows)
        object.__setattr__(self, "compose", tuple(tuple(int(v) for v in r) for r in self.compose))
        object.__setattr__(self, "inverse", tuple(int(v) for v in self.inverse))
        object.__setattr__(self, "identities", tuple(int(v) for v in self.identities))
        self._validate()

    def _validate(self) -> None:
        n, C = len(self.arrows), self.compose
        if len(C) != n or any(len(r) != n for r in C) or len(self.inverse) != n:
            raise TableError("groupoid tables have inconsistent sizes")
        if len(self.identities) != self.objects:
            raise TableError("one identity arrow per object required")
        src = [s for s, _ in self.arrows]
        tgt = [t for _, t in self.arrows]
        for g, f in itertools.product(range(n), repeat=2):
            defined = src[g] == tgt[f]
            if defined != (C[g][f] >= 0):
                raise TableError("composition defined iff source and target match", (g, f))
            if defined and self.arrows[C[g][f]] != (src[f], tgt[g]):
                raise TableError("composite has wrong endpoints", (g, f))
        for o, e in enumerate(self.identities):
            if self.arrows[e] != (o, o):
                raise TableError("identity arrow is not a loop at its object", (o,))
            for f in range(n):
                if src[f] == o and C[f][e] != f:
                    raise TableError("identity fails on the right", (o, f))
                if tgt[f] == o and C[e][f] != f:
                    raise TableError("identity fails on the left", (o, f))
        for f in range(n):
            g = self.inverse[f]
            if C[g][f] != self.identities[src[f]] or C[f][g] != self.identities[tgt[f]]:
                raise TableError("inverse fails", (f,))
        for h, g, f in itertools.product(range(n), repeat=3):
            if C[h][g] >= 0 and C[g][f] >= 0 and C[C[h][g]][f] != C[h][C[g][f]]:
                raise TableError("composition is not associative", (h, g, f))

    def to_json(self) -> dict:
        return {
            "objects": self.objects,
            "arrows": [list(a) for a in self.arrows],
            "compose": [list(r) for r in self.compose],
            "inverse": list(self.inverse),
            "identities": list(self.identities),
        }


def pair_groupoid(k: int) -> GroupoidTable:
    """One arrow s → t for every ordered pair of objects; arrow index s·k + t."""
    arrows = [(s, t) for s in range(k) for t in range(k)]
    n = len(arrows)
    C = [[-1] * n for _ in range(n)]
    for g, f in itertools.product(range(n), repeat=2):
        (sg, tg), (sf, tf) = arrows[g], arrows[f]
        if sg == tf:
            C[g][f] = sf * k + tg
    inverse = [t * k + s for s, t in arrows]
    identities = [o * k + o for o in range(k)]
    return GroupoidTable(k, tuple(arrows), tuple(map(tuple, C)), tuple(inverse), tuple(identities))


def groupoid_union(groups: Sequence[MulTable]) -> GroupoidTable:
    """Disjoint union of groups, each a groupoid with one object."""
    arrows, offsets = [], []
    for o, G in enumerate(groups):
        offsets.append(len(arrows))
        arrows += [(o, o)] * G.order
    n = len(arrows)
    C = [[-1] * n for _ in range(n)]
    inverse = [0] * n
    for o, G in enumerate(groups):
        base = offsets[o]
        inv = G.inverses()
        for x in range(G.order):
            inverse[base + x] = base + inv[x]
            for y in range(G.order):
                C[base + x][base + y] = base + G.table[x][y]
    identities = [offsets[o] + G.identity for o, G in enumerate(groups)]
    return GroupoidTable(len(groups), tuple(arrows), tuple(map(tuple, C)), tuple(inverse), tuple(identities))


def groupoid_algebra(G: GroupoidTable, name: str = "KΓ") -> WeakHopfQuasigroup:
    n = len(G.arrows)
    eta = np.zeros((n, 1), dtype=np.int64)
    eta[list(G.identities), 0] = 1
    mu = np.zeros((n, n * n), dtype=np.int64)
    delta = np.zeros((n * n, n), dtype=np.int64)
    lam = np.zeros((n, n), dtype=np.int64)
    for g in range(n):
        for f in range(n):
            if G.compose[g][f] >= 0:
                mu[G.compose[g][f], g * n + f] = 1
        delta[g * n + g, g] = 1
        lam[G.inverse[g], g] = 1
    eps = np.ones((1, n), dtype=np.int64)
    H = WeakHopfQuasigroup.from_maps(Mat(eta), Mat(mu), Mat(eps), Mat(delta), Mat(lam), name=name)
    assert H.magma.is_associative
    return H


def direct_sum_whq(H1: WeakHopfQuasigroup, H2: WeakHopfQuasigroup, name: str | None = None) -> WeakHopfQuasigroup:
    """H1 ⊕ H2 with componentwise structure and zero products across components."""
    n1, n2 = H1.dim, H2.dim
    n = n1 + n2

    def embed_pairs(offset: int, k: int) -> np.ndarray:
        # positions of H_k⊗H_k inside H⊗H
        idx = [(offset + i) * n + offset + j for i in range(k) for j in range(k)]
        return np.array(idx, dtype=np.int64)

    den1, den2 = H1.mu.den, H2.mu.den
    den = den1 * den2
    mu = np.zeros((n, n * n), dtype=object)
    mu[:n1, embed_pairs(0, n1)] = H1.mu.num.astype(object) * den2
    mu[n1:, embed_pairs(n1, n2)] = H2.mu.num.astype(object) * den1
    ddn = H1.delta.den * H2.delta.den
    delta = np.zeros((n * n, n), dtype=object)
    delta[embed_pairs(0, n1), :n1] = H1.delta.num.astype(object) * H2.delta.den
    delta[embed_pairs(n1, n2), n1:] = H2.delta.num.astype(object) * H1.delta.den
    eta = direct_sum(H1.eta, H2.eta)
    eta = Mat(np.asarray(eta.num.sum(axis=1, keepdims=True)), eta.den)
    eps = direct_sum(H1.eps, H2.eps)
    eps = Mat(np.asarray(eps.num.sum(axis=0, keepdims=True)), eps.den)
    lam = direct_sum(H1.lam, H2.lam)
    return WeakHopfQuasigroup.from_maps(eta, Mat(mu, den), eps, Mat(delta, ddn), lam,
                                        name=name or f"{H1.name}⊕{H2.name}")


def sign_action(k: int, loop_order: int) -> Mat:
    """φ_A(x⊗e_b) = (−1)^{a·b} e_b on KZ₂^k, where a is the Z₂^k grade of loop element x.

    Loop elements are indexed s·2^k + a as produced by :func:`sign_loop`, so
    the grade of x is x mod 2^k and the sign bit does not enter.
    """
    na = 2**k
    out = np.zeros((na, loop_order * na), dtype=np.int64)
    for x in range(loop_order):
        a = x % na
        for b in range(na):
            out[b, x * na + b] = -1 if bin(a & b).count("1") % 2 else 1
    return Mat(out)


def smash_product(A: UnitalMagma, H: WeakHopfQuasigroup, phiA: Mat,
                  name: str = "A#H") -> tuple[ComoduleMagma, AnchorMorphism]:
    """A#H with product (μ_A⊗μ_H)∘(A⊗ψ⊗H), coaction A⊗δ_H and anchor η_A⊗H."""
    a, n = A.dim, H.dim
    if phiA.shape != (a, n * a):
        raise AxiomError(AxiomReport("smash", [Check("action shape", False, 0, f"got {phiA.shape}")]))
    s = Suite("smash action")
    s.equal("action unital in H", lambda: chain(phiA, (H.eta, a)), lambda: identity(a))
    s.equal("action fixes unit of A", lambda: chain(phiA, (n, A.eta)), lambda: tensor(H.eps, A.eta))
    rep = s.run(threads=1)
    if not rep.passed:
        raise AxiomError(rep)
    psi = chain((phiA, n), (n, Swap(n, a)), (H.delta, a))
    mu = chain((A.mu, H.mu), (a, psi, n))
    eta = tensor(A.eta, H.eta)
    rho = tensor(identity(a), H.delta)
    B = ComoduleMagma.from_maps(eta, mu, rho, H, name=name)
    anchor = AnchorMorphism(tensor(A.eta, identity(n)), H, B)
    if A.is_associative and action_multiplicative(A, H, phiA):
        rep = check_strong_eqs(B, anchor.h, co=anchor.coinvariants)
        if not rep.passed:
            raise AxiomError(rep)
    return B, anchor


def action_multiplicative(A: UnitalMagma, H: WeakHopfQuasigroup, phiA: Mat) -> bool:
    """μ_A∘(φ_A⊗φ_A)∘(H⊗c_{H,A}⊗A)∘(δ_H⊗A⊗A) = φ_A∘(H⊗μ_A)."""
    a, n = A.dim, H.dim
    lhs = chain(A.mu, (phiA, phiA), (n, Swap(n, a), a), (H.delta, a, a))
    return lhs == chain(phiA, (n, A.mu))


def opposite_comodule_magma(H: WeakHopfQuasigroup) -> tuple[ComoduleMagma, AnchorMorphism]:
    """H^op with μ∘c, coaction (H⊗λ)∘δ and anchor λ; H must be cocommutative."""
    n = H.dim
    if not H.is_cocommutative:
        raise ValueError("opposite comodule magma needs a cocommutative H")
    if compose(H.lam, H.lam) != identity(n):
        raise ValueError("antipode is not involutive")
    mu = chain(H.mu, Swap(n, n))
    rho = chain((n, H.lam), H.delta)
    B = ComoduleMagma.from_maps(H.eta, mu, rho, H, name=f"{H.name}^op")
    anchor = AnchorMorphism(H.lam, H, B)
    rep = check_strong_eqs(B, anchor.h, co=anchor.coinvariants)
    rep.checks.append(compare("q of H^op is Π^L", anchor.q, H.pi_L))
    if not rep.passed:
        raise AxiomError(rep)
    return B, anchor


def _hopf_morphism_report(f: Mat, S: WeakHopfQuasigroup, T: WeakHopfQuasigroup, label: str) -> Suite:
    s = Suite(label)
    s.equal(f"{label} unital", lambda: compose(f, S.eta), lambda: T.eta)
    s.equal(f"{label} multiplicative", lambda: compose(f, S.mu), lambda: chain(T.mu, (f, f)))
    s.equal(f"{label} counital", lambda: compose(T.eps, f), lambda: S.eps)
    s.equal(f"{label} comultiplicative", lambda: chain((f, f), S.delta), lambda: compose(T.delta, f))
    return s


def projection_comodule(B: WeakHopfQuasigroup, H: WeakHopfQuasigroup, g: Mat, f: Mat,
                        name: str | None = None) -> tuple[ComoduleMagma, AnchorMorphism]:
    """ρ_B = (B⊗g)∘δ_B with anchor f, for Hopf quasigroup maps g: B → H, f: H → B, g∘f = id."""
    rep = AxiomReport("projection")
    for label, h, S, T in (("g", g, B, H), ("f", f, H, B)):
        rep.extend(_hopf_morphism_report(h, S, T, label).run(threads=1))
    for X in (B, H):
        rep.extend(check_hopf_quasigroup(X))
    rep.checks.append(compare("g∘f = id", compose(g, f), identity(H.dim)))
    rep.checks.append(compare("antipodes intertwined by f", compose(B.lam, f), compose(f, H.lam)))
    if not rep.passed:
        raise AxiomError(rep)
    rho = chain((B.dim, g), B.delta)
    C = ComoduleMagma.from_maps(B.eta, B.mu, rho, H, name=name or f"{B.name} over {H.name}")
    return C, AnchorMorphism(f, H, C)

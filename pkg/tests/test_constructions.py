import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hopfq.comodule import check_anchor, check_comodule_magma
from hopfq.constructions import (
    Cochain2,
    GroupoidTable,
    MulTable,
    TableError,
    action_multiplicative,
    cayley_dickson_cochain,
    cochain_algebra,
    cyclic_group,
    direct_product,
    direct_sum_whq,
    elementary_abelian,
    find_ip_loop,
    group_algebra,
    groupoid_algebra,
    groupoid_union,
    loop_algebra,
    octonion_loop,
    opposite_comodule_magma,
    pair_groupoid,
    projection_comodule,
    quaternion_loop,
    sign_action,
    smash_product,
)
from hopfq.exactlin import Mat, Swap, chain, compose, identity, rank, tensor
from hopfq.report import AxiomError
from hopfq.structures import WeakHopfQuasigroup, check_hopf_quasigroup, check_whq, corollary_class

# ---- tables and group algebras -------------------------------------------


def test_group_algebras():
    for G, dim in ((cyclic_group(2), 2), (elementary_abelian(2), 4), (cyclic_group(1), 1)):
        H = group_algebra(G)
        assert H.dim == dim and check_hopf_quasigroup(H).passed and H.magma.is_associative
    triv = group_algebra(cyclic_group(1))
    assert triv.mu == identity(1) and triv.delta == identity(1) and triv.lam == identity(1)


def test_group_algebra_rejects_loops():
    with pytest.raises((TableError, AxiomError)):
        group_algebra(octonion_loop())


def test_table_rejects_bad_identity():
    with pytest.raises(TableError):
        MulTable(2, ((1, 0), (0, 1)))


def test_loop_algebra_of_group_is_group_algebra():
    G = direct_product(cyclic_group(2), cyclic_group(3))
    a, b = group_algebra(G), loop_algebra(G)
    assert (a.mu, a.delta, a.lam, a.eta, a.eps) == (b.mu, b.delta, b.lam, b.eta, b.eps)


# ---- Cayley-Dickson and the octonion loop ---------------------------------

def cd_cochain_oracle(k):
    """Signs from doubling on nested pairs of Fractions, independent of the numpy routine."""
    def mul(x, y):
        if not isinstance(x, tuple):
            return x * y
        (a, b), (c, d) = x, y
        return (sub(mul(a, c), mul(conj(d), b)), add(mul(d, a), mul(b, conj(c))))

    def conj(x):
        return x if not isinstance(x, tuple) else (conj(x[0]), neg(x[1]))

    def neg(x):
        return -x if not isinstance(x, tuple) else (neg(x[0]), neg(x[1]))

    def add(x, y):
        return x + y if not isinstance(x, tuple) else (add(x[0], y[0]), add(x[1], y[1]))

    def sub(x, y):
        return add(x, neg(y))

    def unit(a, level):
        if level == 0:
            return Fraction(1)
        half = 2 ** (level - 1)
        zero = zero_of(level - 1)
        return (unit(a, level - 1), zero) if a < half else (zero, unit(a - half, level - 1))

    def zero_of(level):
        return Fraction(0) if level == 0 else (zero_of(level - 1), zero_of(level - 1))

    def flat(x):
        return [x] if not isinstance(x, tuple) else flat(x[0]) + flat(x[1])

    n = 2**k
    F = [[None] * n for _ in range(n)]
    for a, b in itertools.product(range(n), repeat=2):
        v = flat(mul(unit(a, k), unit(b, k)))
        nz = [i for i, x in enumerate(v) if x != 0]
        assert nz == [a ^ b]
        F[a][b] = v[a ^ b]
    return F


@pytest.mark.parametrize("k", [1, 2, 3])
def test_cayley_dickson_cochain_matches_oracle(k):
    c = cayley_dickson_cochain(k)
    assert [list(r) for r in c.F] == cd_cochain_oracle(k)


def test_quaternion_relations():
    A = cochain_algebra(cayley_dickson_cochain(2))
    assert A.is_associative

    def e(a):
        v = np.zeros((4, 1), dtype=np.int64)
        v[a, 0] = 1
        return Mat(v)

    def mul(x, y):
        return compose(A.mu, tensor(x, y))

    one, i, j, k = (e(a) for a in range(4))
    for u in (i, j, k):
        assert mul(u, u) == one.scale(-1)
    assert mul(i, j) == k and mul(j, k) == i and mul(k, i) == j
    assert mul(mul(i, j), k) == one.scale(-1)


def test_trivial_cochain_gives_group_algebra():
    G = elementary_abelian(2)
    ones = tuple(tuple(1 for _ in range(4)) for _ in range(4))
    assert cochain_algebra(Cochain2(G, ones)).mu == group_algebra(G).mu


def test_cochain_normalization_checked():
    G = cyclic_group(2)
    with pytest.raises(TableError):
        Cochain2(G, ((1, -1), (1, 1)))


@pytest.fixture(scope="module")
def octonions():
    return cochain_algebra(cayley_dickson_cochain(3))


def norm(v):
    return sum(x * x for x in v)


def test_octonion_basis_norm_multiplicative(octonions):
    mu = octonions.mu
    for a, b in itertools.product(range(8), repeat=2):
        col = [mu[r, a * 8 + b] for r in range(8)]
        assert norm(col) == 1


@given(st.lists(st.integers(-5, 5), min_size=8, max_size=8), st.lists(st.integers(-5, 5), min_size=8, max_size=8))
def test_octonion_norm_multiplicative(octonions, x, y):
    X = Mat(np.array(x, dtype=np.int64).reshape(8, 1))
    Y = Mat(np.array(y, dtype=np.int64).reshape(8, 1))
    xy = compose(octonions.mu, tensor(X, Y))
    assert norm([xy[r, 0] for r in range(8)]) == norm(x) * norm(y)


def test_octonion_units(octonions):
    mu = octonions.mu
    for a in range(1, 8):
        assert mu[0, a * 8 + a] == -1
    assert not octonions.is_associative


def test_octonion_loop():
    L = octonion_loop()
    assert L.order == 16 and L.identity == 0
    assert all(L.mul(0, x) == x == L.mul(x, 0) for x in range(16))
    assert L.ip_witness() is None
    # (e1 e2) e4 ≠ e1 (e2 e4)
    assert L.mul(L.mul(1, 2), 4) != L.mul(1, L.mul(2, 4))
    H = loop_algebra(L)
    assert H.is_cocommutative and check_hopf_quasigroup(H).passed


def test_quaternion_loop_is_the_quaternion_group():
    L = quaternion_loop()
    assert L.associativity_witness() is None
    assert L.ip_witness() is None


def test_loop_algebra_rejects_non_ip():
    # a loop of order 5 that is Latin but lacks the inverse property
    t = ((0, 1, 2, 3, 4), (1, 0, 3, 4, 2), (2, 4, 0, 1, 3), (3, 2, 4, 0, 1), (4, 3, 1, 2, 0))
    L = MulTable(5, t)
    assert L.latin_witness() is None and L.ip_witness() is not None
    with pytest.raises((TableError, AxiomError)):
        loop_algebra(L)


# ---- exhaustive IP loop search oracle -------------------------------------

def normalized_latin_squares(n):
    """All Latin squares with first row and column 0..n-1, by plain cell-by-cell backtracking."""
    T = [[None] * n for _ in range(n)]
    for i in range(n):
        T[0][i] = T[i][0] = i

    def fill(pos):
        if pos == n * n:
            yield tuple(map(tuple, T))
            return
        r, c = divmod(pos, n)
        if r == 0 or c == 0:
            yield from fill(pos + 1)
            return
        used = set(T[r][:c]) | {T[k][c] for k in range(r)}
        for v in range(n):
            if v not in used:
                T[r][c] = v
                yield from fill(pos + 1)
        T[r][c] = None

    yield from fill(0)


def is_nonassociative_ip(t):
    n = len(t)
    inv = [row.index(0) for row in t]
    if any(t[inv[x]][x] != 0 for x in range(n)):
        return False
    for x, y in itertools.product(range(n), repeat=2):
        if t[inv[x]][t[x][y]] != y or t[t[y][x]][inv[x]] != y:
            return False
    return any(t[t[x][y]][z] != t[x][t[y][z]] for x, y, z in itertools.product(range(n), repeat=3))


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_no_nonassociative_ip_loop_below_seven(n):
    assert not any(is_nonassociative_ip(t) for t in normalized_latin_squares(n))
    assert find_ip_loop(n) is None


def test_order_seven_ip_loop():
    L = find_ip_loop(7)
    assert L is not None and is_nonassociative_ip(L.table)
    H = loop_algebra(L)
    assert check_hopf_quasigroup(H).passed and corollary_class(H) == "iii"


# ---- groupoids -------------------------------------------------------------

def test_one_object_groupoid_is_group_algebra():
    H = groupoid_algebra(groupoid_union([cyclic_group(3)]))
    G = group_algebra(cyclic_group(3))
    assert (H.mu, H.delta, H.lam, H.eta) == (G.mu, G.delta, G.lam, G.eta)


@pytest.mark.parametrize("T,objects", [(pair_groupoid(2), 2), (pair_groupoid(3), 3),
                                       (groupoid_union([cyclic_group(2)] * 2), 2),
                                       (groupoid_union([cyclic_group(2)]), 1)])
def test_groupoid_weakness(T, objects):
    H = groupoid_algebra(T)
    assert check_whq(H).passed and H.magma.is_associative
    assert rank(H.pi_L) == objects
    weak = H.eps_mu != tensor(H.eps, H.eps)
    assert weak == (objects >= 2)


def test_malformed_groupoid_rejected():
    T = pair_groupoid(2)
    data = T.to_json()
    data["inverse"] = [0, 1, 2, 3]
    with pytest.raises(TableError):
        GroupoidTable(data["objects"], tuple(map(tuple, data["arrows"])), tuple(map(tuple, data["compose"])),
                      tuple(data["inverse"]), tuple(data["identities"]))


# ---- smash products, opposites, projections -------------------------------

def sign_oracle(k, loop_order):
    """φ_A(x⊗e_b) = (−1)^{a·b} e_b with a the Z₂^k grade of x, written out entry by entry."""
    na = 2**k
    rows = [[0] * (loop_order * na) for _ in range(na)]
    for x in range(loop_order):
        a = x % na
        for b in range(na):
            dot = sum(((a >> i) & 1) * ((b >> i) & 1) for i in range(k))
            rows[b][x * na + b] = (-1) ** dot
    return Mat.from_rows(rows)


def test_sign_action():
    assert sign_action(2, 8) == sign_oracle(2, 8)
    A = group_algebra(elementary_abelian(2))
    H = loop_algebra(quaternion_loop())
    assert action_multiplicative(A.magma, H, sign_action(2, 8))


def test_smash_product_with_trivial_action():
    A = group_algebra(cyclic_group(2))
    H = group_algebra(cyclic_group(2))
    phi = tensor(H.eps, identity(2))
    B, anchor = smash_product(A.magma, H, phi)
    # a trivial action leaves only the symmetry between the middle factors
    assert B.mu == chain((A.mu, H.mu), (2, Swap(2, 2), 2))
    assert check_comodule_magma(B).passed and check_anchor(anchor.h, B).passed


def test_smash_product_rejects_bad_action():
    A = group_algebra(cyclic_group(2))
    H = group_algebra(cyclic_group(2))
    phi = tensor(H.eps, identity(2)).scale(2)
    with pytest.raises(AxiomError) as exc:
        smash_product(A.magma, H, phi)
    assert not exc.value.report["action unital in H"].passed


def test_smash_product_pipeline():
    A = group_algebra(elementary_abelian(2))
    H = loop_algebra(quaternion_loop())
    B, anchor = smash_product(A.magma, H, sign_action(2, 8))
    assert B.dim == 32
    assert anchor.q == tensor(identity(4), compose(H.eta, H.eps))
    assert anchor.coinvariants.dim == 4


def test_opposite():
    H = group_algebra(cyclic_group(2))
    B, anchor = opposite_comodule_magma(H)
    assert B.mu == H.mu and anchor.h == identity(2)
    O = loop_algebra(octonion_loop())
    B, anchor = opposite_comodule_magma(O)
    assert anchor.coinvariants.dim == 1 and anchor.q == O.pi_L


def test_opposite_rejects_non_cocommutative():
    H = group_algebra(cyclic_group(2))
    delta = Mat(np.array([[1, 0], [0, 1], [0, 0], [0, 0]], dtype=np.int64))
    bad = WeakHopfQuasigroup.from_maps(H.eta, H.mu, H.eps, delta, H.lam, validate=False)
    with pytest.raises(ValueError):
        opposite_comodule_magma(bad)


def test_projection_comodule():
    Bq = group_algebra(elementary_abelian(2))
    H = group_algebra(cyclic_group(2))
    g = np.zeros((2, 4), dtype=np.int64)
    for x in range(4):
        g[x & 1, x] = 1
    f = np.zeros((4, 2), dtype=np.int64)
    f[0, 0] = f[1, 1] = 1
    C, anchor = projection_comodule(Bq, H, Mat(g), Mat(f))
    assert compose(Bq.lam, Mat(f)) == compose(Mat(f), H.lam)
    assert check_comodule_magma(C).passed and anchor.coinvariants.dim == 2
    same, _ = projection_comodule(H, H, identity(2), identity(2))
    assert same.rho == H.delta
    with pytest.raises(AxiomError):
        projection_comodule(Bq, H, Mat(g), Mat(f).scale(2))


def test_direct_sum_is_class_four():
    H = direct_sum_whq(loop_algebra(find_ip_loop(7)), group_algebra(cyclic_group(1)))
    assert H.dim == 8 and check_whq(H).passed
    assert not H.magma.is_associative
    assert not check_hopf_quasigroup(H).passed
    assert corollary_class(H) == "iv"

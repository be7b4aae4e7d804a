from fractions import Fraction

import pytest

import oracles
from hopfq.constructions import (
    cyclic_group,
    elementary_abelian,
    group_algebra,
    groupoid_algebra,
    loop_algebra,
    octonion_loop,
    pair_groupoid,
)
from hopfq.exactlin import Mat, compose, identity, kernel_basis, rank, same_image, scalar, split_idempotent, tensor
from hopfq.report import AxiomError
from hopfq.structures import (
    Comonoid,
    UnitalMagma,
    WeakHopfQuasigroup,
    antipode_properties,
    associativity_witness,
    check_hopf_quasigroup,
    check_whq,
    convolution,
    corollary_class,
    lemma_projection_identities,
    pi_L,
    pi_R,
    projection_report,
    target_submonoid,
)

ONE, ZERO = Fraction(1), Fraction(0)


def grouplike_oracle(n, product, inverse, units):
    """Structure maps of a grouplike algebra written out entry by entry.

    ``product(g, f)`` returns the basis index of e_g·e_f or None when it is zero.
    """
    eta = [[ONE if g in units else ZERO] for g in range(n)]
    mu = [[ZERO] * (n * n) for _ in range(n)]
    delta = [[ZERO] * n for _ in range(n * n)]
    lam = [[ZERO] * n for _ in range(n)]
    for g in range(n):
        for f in range(n):
            k = product(g, f)
            if k is not None:
                mu[k][g * n + f] = ONE
        delta[g * n + g][g] = ONE
        lam[inverse(g)][g] = ONE
    eps = [[ONE] * n]
    return {"eta": eta, "mu": mu, "eps": eps, "delta": delta, "lam": lam}


def assert_matches(H, maps):
    for k, v in maps.items():
        assert getattr(H, k).tolist() == v, k


@pytest.fixture(scope="module")
def kz2():
    return group_algebra(cyclic_group(2))


@pytest.fixture(scope="module")
def pair2():
    return groupoid_algebra(pair_groupoid(2))


@pytest.fixture(scope="module")
def octo():
    return loop_algebra(octonion_loop())


def test_group_algebra_matches_oracle(kz2):
    assert_matches(kz2, grouplike_oracle(2, lambda g, f: (g + f) % 2, lambda g: g, {0}))
    G = group_algebra(elementary_abelian(2))
    assert_matches(G, grouplike_oracle(4, lambda g, f: g ^ f, lambda g: g, {0}))


def test_pair_groupoid_algebra_matches_oracle(pair2):
    # arrow s·2 + t goes s → t; g∘f is defined when f ends where g starts
    def product(g, f):
        sg, tg = divmod(g, 2)
        sf, tf = divmod(f, 2)
        return sf * 2 + tg if sg == tf else None

    assert_matches(pair2, grouplike_oracle(4, product, lambda g: (g % 2) * 2 + g // 2, {0, 3}))


def test_octonion_algebra_matches_loop_table(octo):
    L = octonion_loop()
    inv = L.inverses()
    assert_matches(octo, grouplike_oracle(16, L.mul, lambda g: inv[g], {L.identity}))


# ---- convolution and projections -----------------------------------------

def test_convolution_of_unit_counit(kz2):
    ee = compose(kz2.eta, kz2.eps)
    assert compose(kz2.eps, kz2.eta) == scalar(1)
    assert convolution(ee, ee, kz2.comonoid, kz2.magma) == ee


def test_id_star_lambda_on_kz2(kz2):
    got = convolution(identity(2), kz2.lam, kz2.comonoid, kz2.magma)
    # e_g ↦ e_g e_{g⁻¹} = e_0
    assert got.tolist() == [[ONE, ONE], [ZERO, ZERO]]
    assert got == compose(kz2.eta, kz2.eps) == pi_L(kz2)


@pytest.mark.parametrize("name", ["kz2", "pair2", "octo"])
def test_projection_consistency(name, request):
    H = request.getfixturevalue(name)
    assert pi_L(H) == convolution(identity(H.dim), H.lam, H.comonoid, H.magma) == H.id_conv_lam
    assert pi_R(H) == convolution(H.lam, identity(H.dim), H.comonoid, H.magma) == H.lam_conv_id
    assert projection_report(H).passed
    assert convolution(H.lam, H.pi_L, H.comonoid, H.magma) == H.lam
    assert convolution(H.pi_R, H.lam, H.comonoid, H.magma) == H.lam


def test_hopf_projections_are_unit_counit(kz2, octo):
    for H in (kz2, octo):
        ee = compose(H.eta, H.eps)
        assert H.pi_L == ee and H.pi_R == ee


def test_groupoid_pi_L_rank(pair2):
    # Π^L(e_g) = e_{g∘g⁻¹}, the identity at the target of g; one per object
    expected = [[ZERO] * 4 for _ in range(4)]
    for g in range(4):
        t = g % 2
        expected[t * 2 + t][g] = ONE
    assert pair2.pi_L.tolist() == expected
    assert split_idempotent(pair2.pi_L).rank == 2 == oracles.rank(expected)
    assert pair2.pi_L != compose(pair2.eta, pair2.eps)


def test_cocommutative_bar_projections_agree(octo):
    assert octo.is_cocommutative
    assert octo.pi_L == octo.pi_bar_L and octo.pi_R == octo.pi_bar_R


# ---- axiom suites ---------------------------------------------------------

@pytest.mark.parametrize("name", ["kz2", "pair2", "octo"])
def test_whq_suite_passes(name, request):
    H = request.getfixturevalue(name)
    rep = check_whq(H)
    assert rep.passed, rep.summary()
    assert all(c.witness is None for c in rep)
    labels = set(rep.labels)
    for want in ("(a1)", "(a2) 1=2", "(a3) 2=3", "(a4-7)", "antipode preserves unit", "antipode preserves counit"):
        assert want in labels


def test_octonion_nonassociativity_witness_matches_table(octo):
    L = octonion_loop()
    x, y, z = L.associativity_witness()
    assert associativity_witness(octo.magma) == (x * 16 + y) * 16 + z
    assert not octo.magma.is_associative


def test_hopf_quasigroup_suite(kz2, octo, pair2):
    assert check_hopf_quasigroup(kz2).passed
    rep = check_hopf_quasigroup(octo)
    assert rep.passed and "implies weak axioms" in rep
    rep = check_hopf_quasigroup(pair2)
    assert not rep["counit multiplicative"].passed
    # ε(e_g e_f) = 0 ≠ 1 for a non-composable pair; index 1 is (g, f) = (0, 1)
    assert rep["counit multiplicative"].witness == 1
    assert pair2.eps_mu != tensor(pair2.eps, pair2.eps)


@pytest.mark.parametrize("name", ["kz2", "pair2", "octo"])
def test_lemma_projection_identities(name, request):
    rep = lemma_projection_identities(request.getfixturevalue(name))
    assert len(rep) == 12 and rep.passed, rep.summary()


@pytest.mark.parametrize("name", ["kz2", "pair2", "octo"])
def test_antipode_properties(name, request):
    rep = antipode_properties(request.getfixturevalue(name))
    assert rep.passed and "antimultiplicative" in rep and "anticomultiplicative" in rep


@pytest.mark.parametrize("name,dim", [("kz2", 1), ("octo", 1), ("pair2", 2)])
def test_target_submonoid(name, dim, request):
    H = request.getfixturevalue(name)
    sp, magma, comonoid = target_submonoid(H)
    assert sp.rank == dim == magma.dim == comonoid.dim
    eq = kernel_basis(H.delta - compose(tensor(identity(H.dim), H.pi_L), H.delta))
    assert same_image(eq, sp.i) and rank(eq) == dim


def test_target_submonoid_of_larger_groupoid():
    H = groupoid_algebra(pair_groupoid(3))
    assert target_submonoid(H)[0].rank == 3


def test_corollary_classes(kz2, pair2, octo):
    assert [corollary_class(H) for H in (kz2, pair2, octo)] == ["i", "ii", "iii"]


# ---- construction-time validation ----------------------------------------

def test_magma_rejects_broken_unit():
    with pytest.raises(AxiomError) as exc:
        UnitalMagma(Mat.from_rows([[1], [0]]), Mat.from_rows([[1, 0, 0, 1], [0, 1, 0, 0]]))
    assert not exc.value.report["unit right"].passed


def test_comonoid_rejects_broken_counit():
    with pytest.raises(AxiomError):
        Comonoid(Mat.from_rows([[1, 0]]), Mat.from_rows([[1, 0], [0, 0], [0, 0], [0, 1]]))


def test_whq_validation_reports_failing_axiom(kz2):
    bad_lam = Mat.from_rows([[0, 1], [1, 0]])
    with pytest.raises(AxiomError) as exc:
        WeakHopfQuasigroup(kz2.magma, kz2.comonoid, bad_lam)
    failed = {c.label for c in exc.value.report.failures()}
    assert "antipode preserves unit" in failed
    assert any(label.startswith("(a4") for label in failed)

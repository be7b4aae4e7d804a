"""Unital magmas, comonoids and weak Hopf quasigroups with their axiom suites."""
from __future__ import annotations

from functools import cached_property

from .exactlin import (
    DimensionError,
    Mat,
    SplitIdempotent,
    Swap,
    chain,
    compose,
    first_difference,
    identity,
    kernel_basis,
    same_image,
    scalar,
    split_idempotent,
    tensor,
)
from .report import AxiomError, AxiomReport, Check, Suite

__all__ = [
    "AxiomReport",
    "UnitalMagma",
    "Comonoid",
    "WeakHopfQuasigroup",
    "convolution",
    "pi_L",
    "pi_R",
    "pi_bar_L",
    "pi_bar_R",
    "check_whq",
    "check_hopf_quasigroup",
    "lemma_projection_identities",
    "projection_report",
    "antipode_properties",
    "target_submonoid",
    "associativity_witness",
    "corollary_class",
]


class UnitalMagma:
    def __init__(self, eta: Mat, mu: Mat, validate: bool = True):
        n = eta.rows
        if eta.shape != (n, 1) or mu.shape != (n, n * n):
            raise DimensionError(f"unit {eta.shape} and product {mu.shape} do not fit dimension {n}")
        self.dim = n
        self.eta = eta
        self.mu = mu
        if validate:
            rep = self.unit_report()
            if not rep.passed:
                raise AxiomError(rep)

    def add_unit_checks(self, suite: Suite) -> None:
        n, eta, mu = self.dim, self.eta, self.mu
        suite.equal("unit left", lambda: chain(mu, (eta, n)), lambda: identity(n))
        suite.equal("unit right", lambda: chain(mu, (n, eta)), lambda: identity(n))

    def unit_report(self) -> AxiomReport:
        s = Suite("unital magma")
        self.add_unit_checks(s)
        return s.run(threads=1)

    @cached_property
    def is_associative(self) -> bool:
        return associativity_witness(self) is None

    def __eq__(self, other) -> bool:
        return isinstance(other, UnitalMagma) and self.eta == other.eta and self.mu == other.mu


class Comonoid:
    def __init__(self, eps: Mat, delta: Mat, validate: bool = True):
        n = eps.cols
        if eps.shape != (1, n) or delta.shape != (n * n, n):
            raise DimensionError(f"counit {eps.shape} and coproduct {delta.shape} do not fit dimension {n}")
        self.dim = n
        self.eps = eps
        self.delta = delta
        if validate:
            rep = self.counit_report()
            if not rep.passed:
                raise AxiomError(rep)

    def add_counit_checks(self, suite: Suite) -> None:
        n, eps, delta = self.dim, self.eps, self.delta
        suite.equal("counit left", lambda: chain((eps, n), delta), lambda: identity(n))
        suite.equal("counit right", lambda: chain((n, eps), delta), lambda: identity(n))
        suite.equal(
            "coassociativity", lambda: chain((delta, n), delta), lambda: chain((n, delta), delta)
        )

    def counit_report(self) -> AxiomReport:
        s = Suite("comonoid")
        self.add_counit_checks(s)
        return s.run(threads=1)

    def __eq__(self, other) -> bool:
        return isinstance(other, Comonoid) and self.eps == other.eps and self.delta == other.delta


class WeakHopfQuasigroup:
    """Bundle (H, η, μ, ε, δ, λ); derived maps are cached on first use."""

    def __init__(self, magma: UnitalMagma, comonoid: Comonoid, lam: Mat, validate: bool = True,
                 name: str = "H"):
        if magma.dim != comonoid.dim or lam.shape != (magma.dim, magma.dim):
            raise DimensionError("magma, comonoid and antipode dimensions disagree")
        self.magma = magma
        self.comonoid = comonoid
        self.lam = lam
        self.name = name
        if validate:
            rep = check_whq(self)
            if not rep.passed:
                raise AxiomError(rep)

    @classmethod
    def from_maps(cls, eta: Mat, mu: Mat, eps: Mat, delta: Mat, lam: Mat, validate: bool = True,
                  name: str = "H") -> "WeakHopfQuasigroup":
        return cls(UnitalMagma(eta, mu, validate), Comonoid(eps, delta, validate), lam, validate, name)

    dim = property(lambda self: self.magma.dim)
    eta = property(lambda self: self.magma.eta)
    mu = property(lambda self: self.magma.mu)
    eps = property(lambda self: self.comonoid.eps)
    delta = property(lambda self: self.comonoid.delta)

    @cached_property
    def eps_mu(self) -> Mat:
        return compose(self.eps, self.mu)

    @cached_property
    def delta_eta(self) -> Mat:
        return compose(self.delta, self.eta)

    @cached_property
    def pi_L(self) -> Mat:
        n = self.dim
        return chain((self.eps_mu, n), (n, Swap(n, n)), (self.delta_eta, n))

    @cached_property
    def pi_R(self) -> Mat:
        n = self.dim
        return chain((n, self.eps_mu), (Swap(n, n), n), (n, self.delta_eta))

    @cached_property
    def pi_bar_L(self) -> Mat:
        n = self.dim
        return chain((n, self.eps_mu), (self.delta_eta, n))

    @cached_property
    def pi_bar_R(self) -> Mat:
        n = self.dim
        return chain((self.eps_mu, n), (n, self.delta_eta))

    @cached_property
    def id_conv_lam(self) -> Mat:
        return convolution(identity(self.dim), self.lam, self.comonoid, self.magma)

    @cached_property
    def lam_conv_id(self) -> Mat:
        return convolution(self.lam, identity(self.dim), self.comonoid, self.magma)

    @cached_property
    def is_cocommutative(self) -> bool:
        n = self.dim
        return chain(Swap(n, n), self.delta) == self.delta

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, WeakHopfQuasigroup)
            and self.magma == other.magma
            and self.comonoid == other.comonoid
            and self.lam == other.lam
        )

    def __repr__(self) -> str:
        return f"WeakHopfQuasigroup(name={self.name!r}, dim={self.dim})"


def convolution(f: Mat, g: Mat, D: Comonoid, A: UnitalMagma) -> Mat:
    """f∗g = μ_A∘(f⊗g)∘δ_D."""
    if f.shape != (A.dim, D.dim) or g.shape != (A.dim, D.dim):
        raise DimensionError(f"convolution needs maps {D.dim} -> {A.dim}, got {f.shape} and {g.shape}")
    return chain(A.mu, (f, g), D.delta)


def pi_L(H: WeakHopfQuasigroup) -> Mat:
    return H.pi_L


def pi_R(H: WeakHopfQuasigroup) -> Mat:
    return H.pi_R


def pi_bar_L(H: WeakHopfQuasigroup) -> Mat:
    return H.pi_bar_L


def pi_bar_R(H: WeakHopfQuasigroup) -> Mat:
    return H.pi_bar_R


def _add_whq_checks(s: Suite, H: WeakHopfQuasigroup) -> None:
    n = H.dim
    mu, delta, lam, eta, eps = H.mu, H.delta, H.lam, H.eta, H.eps
    em = lambda: H.eps_mu  # noqa: E731
    de = lambda: H.delta_eta  # noqa: E731
    H.magma.add_unit_checks(s)
    H.comonoid.add_counit_checks(s)

    s.equal("(a1)", lambda: chain(delta, mu), lambda: chain((mu, mu), (n, Swap(n, n), n), (delta, delta)))
    s.all_equal("(a2)", [
        lambda: chain(em(), (mu, n)),
        lambda: chain(em(), (n, mu)),
        lambda: chain((em(), em()), (n, delta, n)),
        lambda: chain((em(), em()), (n, Swap(n, n), n), (n, delta, n)),
    ])
    s.all_equal("(a3)", [
        lambda: chain((delta, n), delta, eta),
        lambda: chain((n, mu, n), (de(), de())),
        lambda: chain((n, mu, n), (n, Swap(n, n), n), (de(), de())),
    ])
    s.equal("(a4-1)", lambda: H.pi_L, lambda: H.id_conv_lam)
    s.equal("(a4-2)", lambda: H.pi_R, lambda: H.lam_conv_id)
    s.equal("(a4-3) left", lambda: convolution(lam, H.id_conv_lam, H.comonoid, H.magma), lambda: lam)
    s.equal("(a4-3) right", lambda: convolution(H.lam_conv_id, lam, H.comonoid, H.magma), lambda: lam)
    s.equal("(a4-4)", lambda: chain(mu, (lam, mu), (delta, n)), lambda: chain(mu, (H.lam_conv_id, n)))
    s.equal("(a4-5)", lambda: chain(mu, (n, mu), (n, lam, n), (delta, n)),
            lambda: chain(mu, (H.id_conv_lam, n)))
    s.equal("(a4-6)", lambda: chain(mu, (mu, lam), (n, delta)), lambda: chain(mu, (n, H.id_conv_lam)))
    s.equal("(a4-7)", lambda: chain(mu, (mu, n), (n, lam, n), (n, delta)),
            lambda: chain(mu, (n, H.lam_conv_id)))
    s.equal("antipode preserves unit", lambda: compose(lam, eta), lambda: eta)
    s.equal("antipode preserves counit", lambda: compose(eps, lam), lambda: eps)


def check_whq(H: WeakHopfQuasigroup, threads: int | None = None) -> AxiomReport:
    """Unit, counit and coassociativity lines followed by (a1)–(a4-7)."""
    s = Suite("whq")
    _add_whq_checks(s, H)
    return s.run(threads)


def check_hopf_quasigroup(H: WeakHopfQuasigroup, threads: int | None = None) -> AxiomReport:
    n = H.dim
    mu, delta, lam, eta, eps = H.mu, H.delta, H.lam, H.eta, H.eps
    s = Suite("hopf-quasigroup")
    H.magma.add_unit_checks(s)
    H.comonoid.add_counit_checks(s)
    s.equal("counit of unit", lambda: compose(eps, eta), lambda: scalar(1))
    s.equal("counit multiplicative", lambda: H.eps_mu, lambda: tensor(eps, eps))
    s.equal("coproduct of unit", lambda: H.delta_eta, lambda: tensor(eta, eta))
    s.equal("coproduct multiplicative", lambda: chain(delta, mu),
            lambda: chain((mu, mu), (n, Swap(n, n), n), (delta, delta)))
    left = lambda: tensor(eps, identity(n))  # noqa: E731
    right = lambda: tensor(identity(n), eps)  # noqa: E731
    s.equal("left division 1", lambda: chain(mu, (lam, mu), (delta, n)), left)
    s.equal("left division 2", lambda: chain(mu, (n, mu), (n, lam, n), (delta, n)), left)
    s.equal("right division 1", lambda: chain(mu, (mu, n), (n, lam, n), (n, delta)), right)
    s.equal("right division 2", lambda: chain(mu, (mu, lam), (n, delta)), right)
    rep = s.run(threads)
    if rep.passed:
        weak = check_whq(H, threads)
        assert weak.passed, f"Hopf quasigroup axioms hold but weak axioms fail: {weak.failures()}"
        rep.checks.append(Check("implies weak axioms", True, None))
    return rep


def lemma_projection_identities(H: WeakHopfQuasigroup, threads: int | None = None) -> AxiomReport:
    """Three associativity-type identities for each of the four projections."""
    n, mu = H.dim, H.mu
    s = Suite("lemma22")
    for name, get in (("Π^L", lambda: H.pi_L), ("Π^R", lambda: H.pi_R),
                      ("Π̄^L", lambda: H.pi_bar_L), ("Π̄^R", lambda: H.pi_bar_R)):
        s.equal(f"{name} left factor",
                lambda get=get: chain(mu, (chain(mu, (get(), n)), n)),
                lambda get=get: chain(mu, (get(), mu)))
        s.equal(f"{name} middle factor",
                lambda get=get: chain(mu, (n, chain(mu, (get(), n)))),
                lambda get=get: chain(mu, (chain(mu, (n, get())), n)))
        s.equal(f"{name} right factor",
                lambda get=get: chain(mu, (n, chain(mu, (n, get())))),
                lambda get=get: chain(mu, (mu, get())))
    return s.run(threads)


def projection_report(H: WeakHopfQuasigroup, threads: int | None = None) -> AxiomReport:
    """Idempotency of the four projections; Π^L = Π̄^L when H is cocommutative."""
    s = Suite("projections")
    for name, get in (("Π^L", lambda: H.pi_L), ("Π^R", lambda: H.pi_R),
                      ("Π̄^L", lambda: H.pi_bar_L), ("Π̄^R", lambda: H.pi_bar_R)):
        s.equal(f"{name} idempotent", lambda get=get: compose(get(), get()), get)
    if H.is_cocommutative:
        s.equal("cocommutative Π^L = Π̄^L", lambda: H.pi_L, lambda: H.pi_bar_L)
        s.equal("cocommutative Π^R = Π̄^R", lambda: H.pi_R, lambda: H.pi_bar_R)
    return s.run(threads)


def antipode_properties(H: WeakHopfQuasigroup, threads: int | None = None) -> AxiomReport:
    """Properties of λ that are consequences rather than axioms."""
    n, mu, delta, lam = H.dim, H.mu, H.delta, H.lam
    s = Suite("antipode")
    s.equal("antimultiplicative", lambda: compose(lam, mu), lambda: chain(mu, Swap(n, n), (lam, lam)))
    s.equal("anticomultiplicative", lambda: compose(delta, lam), lambda: chain(Swap(n, n), (lam, lam), delta))
    if H.is_cocommutative:
        s.equal("involutive (cocommutative case)", lambda: compose(lam, lam), lambda: identity(n))
    return s.run(threads)


def associativity_witness(A: UnitalMagma) -> int | None:
    """First basis index of A⊗A⊗A where the two bracketings differ, if any."""
    n, mu = A.dim, A.mu
    lhs = chain(mu, (mu, n))
    rhs = chain(mu, (n, mu))
    return first_difference(lhs, rhs)


def corollary_class(H: WeakHopfQuasigroup) -> str:
    """(i) Hopf algebra, (ii) weak Hopf algebra, (iii) Hopf quasigroup, (iv) weak Hopf quasigroup."""
    hopf = check_hopf_quasigroup(H, threads=1).passed
    assoc = H.magma.is_associative
    if assoc:
        return "i" if hopf else "ii"
    return "iii" if hopf else "iv"


CLASS_NAMES = {
    "i": "Hopf algebra",
    "ii": "weak Hopf algebra",
    "iii": "Hopf quasigroup",
    "iv": "weak Hopf quasigroup",
}


def target_submonoid(H: WeakHopfQuasigroup) -> tuple[SplitIdempotent, UnitalMagma, Comonoid]:
    """Split Π^L and return the induced monoid and comonoid on its image H_L."""
    sp = split_idempotent(H.pi_L)
    i, p = sp.i, sp.p
    eta_L = compose(p, H.eta)
    mu_L = chain(p, H.mu, (i, i))
    eps_L = compose(H.eps, i)
    delta_L = chain((p, p), H.delta, i)
    magma = UnitalMagma(eta_L, mu_L)
    comonoid = Comonoid(eps_L, delta_L)
    assert magma.is_associative, "H_L product is not associative"
    n = H.dim
    eq = kernel_basis(H.delta - chain((n, H.pi_L), H.delta))
    assert same_image(eq, i), "image of Π^L differs from the equalizer of δ and (H⊗Π^L)∘δ"
    return sp, magma, comonoid

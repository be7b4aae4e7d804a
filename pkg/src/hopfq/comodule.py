"""Right comodules, comodule magmas, anchor morphisms and coinvariants."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .exactlin import (
    DimensionError,
    Mat,
    NotIdempotentError,
    SplitIdempotent,
    Swap,
    chain,
    compose,
    identity,
    kernel_basis,
    same_image,
    split_idempotent,
)
from .report import AxiomError, AxiomReport, Check, Suite
from .structures import UnitalMagma, WeakHopfQuasigroup

__all__ = [
    "Comodule",
    "ComoduleMagma",
    "AnchorMorphism",
    "Coinvariants",
    "check_comodule_magma",
    "check_total_integral",
    "check_anchor",
    "q_B",
    "coinvariants",
    "check_strong_eqs",
    "equalizer_oracles",
]


class Comodule:
    def __init__(self, rho: Mat, over: WeakHopfQuasigroup, validate: bool = True):
        m = rho.cols
        if rho.rows != m * over.dim:
            raise DimensionError(f"coaction {rho.shape} does not fit comodule over dim {over.dim}")
        self.dim = m
        self.rho = rho
        self.over = over
        if validate:
            s = Suite("comodule")
            self.add_comodule_checks(s)
            rep = s.run(threads=1)
            if not rep.passed:
                raise AxiomError(rep)

    def add_comodule_checks(self, suite: Suite) -> None:
        m, n, rho, H = self.dim, self.over.dim, self.rho, self.over
        suite.equal("coaction counit", lambda: chain((m, H.eps), rho), lambda: identity(m))
        suite.equal("coaction coassociativity",
                    lambda: chain((rho, n), rho), lambda: chain((m, H.delta), rho))


class ComoduleMagma:
    """Unital magma B with a right H-coaction ρ_B."""

    def __init__(self, magma: UnitalMagma, comodule: Comodule, validate: bool = True, name: str = "B"):
        if magma.dim != comodule.dim:
            raise DimensionError("magma and comodule dimensions disagree")
        self.magma = magma
        self.comodule = comodule
        self.name = name
        if validate:
            rep = check_comodule_magma(self)
            if not rep.passed:
                raise AxiomError(rep)

    @classmethod
    def from_maps(cls, eta: Mat, mu: Mat, rho: Mat, H: WeakHopfQuasigroup, validate: bool = True,
                  name: str = "B") -> "ComoduleMagma":
        return cls(UnitalMagma(eta, mu, validate), Comodule(rho, H, validate), validate, name)

    @classmethod
    def regular(cls, H: WeakHopfQuasigroup) -> "ComoduleMagma":
        """(H, δ_H) as a comodule magma over itself."""
        return cls(H.magma, Comodule(H.delta, H, validate=False), validate=False, name=H.name)

    dim = property(lambda self: self.magma.dim)
    eta = property(lambda self: self.magma.eta)
    mu = property(lambda self: self.magma.mu)
    rho = property(lambda self: self.comodule.rho)
    H = property(lambda self: self.comodule.over)

    @cached_property
    def rho_eta(self) -> Mat:
        return compose(self.rho, self.eta)

    def __eq__(self, other) -> bool:
        return (isinstance(other, ComoduleMagma) and self.magma == other.magma
                and self.rho == other.rho and self.H == other.H)

    def __repr__(self) -> str:
        return f"ComoduleMagma(name={self.name!r}, dim={self.dim}, over={self.H.name!r})"


B_CONDITIONS = ("(b1)", "(b2)", "(b3)", "(b4)", "(b5)", "(b6)")


def check_comodule_magma(B: ComoduleMagma, threads: int | None = None) -> AxiomReport:
    """Comodule and unit laws, multiplicativity of ρ and each of (b1)–(b6).

    A final line fails when only some of (b1)–(b6) hold, since they are meant
    to be equivalent.
    """
    H = B.H
    b, n = B.dim, H.dim
    mu, rho = B.mu, B.rho
    s = Suite("comodule-magma")
    B.magma.add_unit_checks(s)
    B.comodule.add_comodule_checks(s)
    s.equal("coaction multiplicative", lambda: chain(rho, mu),
            lambda: chain((mu, H.mu), (b, Swap(n, b), n), (rho, rho)))
    lhs_unit = lambda: chain((rho, n), B.rho_eta)  # noqa: E731
    s.equal("(b1)", lhs_unit, lambda: chain((b, H.mu, n), (b, Swap(n, n), n), (B.rho_eta, H.delta_eta)))
    s.equal("(b2)", lhs_unit, lambda: chain((b, H.mu, n), (B.rho_eta, H.delta_eta)))
    s.equal("(b3)", lambda: chain((b, H.pi_bar_R), rho), lambda: chain((mu, n), (b, B.rho_eta)))
    s.equal("(b4)", lambda: chain((b, H.pi_L), rho), lambda: chain((mu, n), (Swap(b, b), n), (b, B.rho_eta)))
    s.equal("(b5)", lambda: chain((b, H.pi_bar_R), B.rho_eta), lambda: B.rho_eta)
    s.equal("(b6)", lambda: chain((b, H.pi_L), B.rho_eta), lambda: B.rho_eta)
    rep = s.run(threads)
    states = [rep[label].passed for label in B_CONDITIONS]
    consistent = all(states) or not any(states)
    witness = None if consistent else states.index(not states[0])
    rep.checks.append(Check("(b1)-(b6) agree", consistent, witness,
                            "" if consistent else "only some unit conditions hold"))
    return rep


def check_total_integral(h: Mat, B: ComoduleMagma, threads: int | None = None) -> AxiomReport:
    H = B.H
    s = Suite("total-integral")
    _add_total_integral_checks(s, h, B, H)
    return s.run(threads)


def _add_total_integral_checks(s: Suite, h: Mat, B: ComoduleMagma, H: WeakHopfQuasigroup) -> None:
    if h.shape != (B.dim, H.dim):
        raise DimensionError(f"integral must be {B.dim}x{H.dim}, got {h.shape}")
    s.equal("integral colinear", lambda: chain((h, H.dim), H.delta), lambda: compose(B.rho, h))
    s.equal("integral unital", lambda: compose(h, H.eta), lambda: B.eta)


class AnchorMorphism:
    """A multiplicative total integral h: H → B satisfying (c1) and (c2)."""

    def __init__(self, h: Mat, source: WeakHopfQuasigroup, target: ComoduleMagma, validate: bool = True):
        if h.shape != (target.dim, source.dim):
            raise DimensionError(f"anchor must be {target.dim}x{source.dim}, got {h.shape}")
        self.h = h
        self.source = source
        self.target = target
        if validate:
            rep = check_anchor(self.h, target)
            if not rep.passed:
                raise AxiomError(rep)

    H = property(lambda self: self.source)
    B = property(lambda self: self.target)

    @cached_property
    def h_lam(self) -> Mat:
        return compose(self.h, self.source.lam)

    @cached_property
    def h_pi_L(self) -> Mat:
        return compose(self.h, self.source.pi_L)

    @cached_property
    def h_pi_R(self) -> Mat:
        return compose(self.h, self.source.pi_R)

    @cached_property
    def rho_h(self) -> Mat:
        return compose(self.target.rho, self.h)

    @cached_property
    def q(self) -> Mat:
        return q_B(self.target, self.h)

    @cached_property
    def coinvariants(self) -> "Coinvariants":
        return coinvariants(self.target, self.h)

    def is_identity(self) -> bool:
        return self.h.shape[0] == self.h.shape[1] and self.h == identity(self.h.rows)

    def __repr__(self) -> str:
        return f"AnchorMorphism({self.source.name!r} -> {self.target.name!r})"


def _q_composite(B: ComoduleMagma, h: Mat) -> Mat:
    return chain(B.mu, (B.dim, compose(h, B.H.lam)), B.rho)


def check_anchor(h: Mat, B: ComoduleMagma, threads: int | None = None) -> AxiomReport:
    """Total integral, multiplicativity, (c1), (c2) and their consequences."""
    H = B.H
    b = B.dim
    mu, rho = B.mu, B.rho
    s = Suite("anchor")
    _add_total_integral_checks(s, h, B, H)
    hl = lambda: compose(h, H.lam)  # noqa: E731
    hpl = lambda: compose(h, H.pi_L)  # noqa: E731
    hpr = lambda: compose(h, H.pi_R)  # noqa: E731
    rho_h = lambda: compose(rho, h)  # noqa: E731
    q = lambda: _q_composite(B, h)  # noqa: E731
    s.equal("integral multiplicative", lambda: chain(mu, (h, h)), lambda: compose(h, H.mu))
    s.equal("(c1)", lambda: chain(mu, (chain(mu, (b, h)), hl()), (b, H.delta)),
            lambda: chain(mu, (b, hpl())))
    s.equal("(c2)", lambda: chain(mu, (chain(mu, (b, hl())), h), (b, H.delta)),
            lambda: chain(mu, (b, hpr())))
    _add_anchor_consequences(s, B, H, h, hl, hpl, hpr, rho_h, q)
    return s.run(threads)


def _add_anchor_consequences(s, B, H, h, hl, hpl, hpr, rho_h, q) -> None:
    b, n = B.dim, H.dim
    mu, rho = B.mu, B.rho
    s.equal("(c1) through coaction of h", lambda: chain(mu, (mu, hl()), (b, rho_h())),
            lambda: chain(mu, (b, hpl())))
    s.equal("h∘Π^R closed form", hpr,
            lambda: chain((b, H.eps_mu), (Swap(n, b), n), (n, B.rho_eta)))
    s.equal("h∘Π^R splits the coaction", lambda: chain(mu, (b, hpr()), rho), lambda: identity(b))
    s.equal("Π̄^R of coaction of a product", lambda: chain((b, H.pi_bar_R), rho, mu),
            lambda: chain((mu, H.pi_bar_R), (b, rho)))
    s.equal("product absorbs h∘Π^R", lambda: chain(mu, (mu, hpr()), (b, rho)), lambda: mu)
    s.equal("h∘Π^L = q∘h", hpl, lambda: compose(q(), h))
    s.equal("h∘Π^L cancels against h", lambda: chain(mu, (chain(mu, (b, hpl())), h), (b, H.delta)),
            lambda: chain(mu, (b, h)))
    s.equal("q cancels against h", lambda: chain(mu, (chain(mu, (b, q())), h), (b, rho_h())),
            lambda: chain(mu, (b, h)))
    s.equal("q and h rebuild the identity", lambda: chain(mu, (q(), h), rho), lambda: identity(b))


def anchor_identities(A: AnchorMorphism, threads: int | None = None) -> AxiomReport:
    """Only the consequences of the anchor axioms, for the identities suite."""
    B, H, h = A.target, A.source, A.h
    s = Suite("anchor-identities")
    _add_anchor_consequences(s, B, H, h, lambda: A.h_lam, lambda: A.h_pi_L, lambda: A.h_pi_R,
                             lambda: A.rho_h, lambda: _q_composite(B, h))
    return s.run(threads)


def q_B(B: ComoduleMagma, h: Mat) -> Mat:
    """The idempotent μ_B∘(B⊗(h∘λ))∘ρ_B projecting onto the coinvariants."""
    H = B.H
    b = B.dim
    q = _q_composite(B, h)
    rq = compose(B.rho, q)
    if chain((b, H.pi_L), rq) != rq:
        raise NotIdempotentError("coaction of q_B is not fixed by B⊗Π^L")
    if chain((b, H.pi_bar_R), rq) != rq:
        raise NotIdempotentError("coaction of q_B is not fixed by B⊗Π̄^R")
    if compose(q, q) != q:
        raise NotIdempotentError("q_B is not idempotent")
    return q


@dataclass(frozen=True)
class Coinvariants:
    """B^coH with its inclusion, projection and induced unital magma."""

    split: SplitIdempotent
    eta_co: Mat
    mu_co: Mat
    B: ComoduleMagma

    @property
    def dim(self) -> int:
        return self.split.rank

    @property
    def i(self) -> Mat:
        return self.split.i

    @property
    def p(self) -> Mat:
        return self.split.p

    @cached_property
    def magma(self) -> UnitalMagma:
        return UnitalMagma(self.eta_co, self.mu_co)


def equalizer_oracles(rho: Mat, m: int, H: WeakHopfQuasigroup) -> dict[str, Mat]:
    """Kernel bases of ρ − (M⊗Π)∘ρ for Π = Π^L and Π̄^R."""
    return {
        "Π^L": kernel_basis(rho - chain((m, H.pi_L), rho)),
        "Π̄^R": kernel_basis(rho - chain((m, H.pi_bar_R), rho)),
    }


def coinvariants(B: ComoduleMagma, h: Mat) -> Coinvariants:
    q = q_B(B, h)
    sp = split_idempotent(q)
    for name, k in equalizer_oracles(B.rho, B.dim, B.H).items():
        if not same_image(k, sp.i):
            raise ArithmeticError(f"image of q_B differs from the equalizer for {name}")
    eta_co = compose(sp.p, B.eta)
    mu_co = chain(sp.p, B.mu, (sp.i, sp.i))
    if compose(sp.i, eta_co) != B.eta:
        raise ArithmeticError("unit of B is not coinvariant")
    if chain(B.mu, (sp.i, sp.i)) != compose(sp.i, mu_co):
        raise ArithmeticError("product of coinvariants leaves the coinvariants")
    return Coinvariants(sp, eta_co, mu_co, B)


def check_strong_eqs(B: ComoduleMagma, h: Mat, threads: int | None = None,
                     co: Coinvariants | None = None) -> AxiomReport:
    co = co or coinvariants(B, h)
    b, mu, i = B.dim, B.mu, co.i
    s = Suite("strong")
    s.equal("strong left", lambda: chain(mu, (chain(mu, (b, i)), b)),
            lambda: chain(mu, (b, chain(mu, (i, b)))))
    s.equal("strong right", lambda: chain(mu, (i, mu)), lambda: chain(mu, (chain(mu, (i, b)), b)))
    rep = s.run(threads)
    if rep["strong left"].passed:
        assert co.magma.is_associative, "B^coH is not a monoid although the strong condition holds"
        rep.checks.append(Check("coinvariants form a monoid", True))
    return rep

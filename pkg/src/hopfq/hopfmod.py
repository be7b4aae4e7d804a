"""Strong (H, B, h)-Hopf modules, their coinvariants and the structure theorem."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import cached_property

from .comodule import AnchorMorphism, Coinvariants, equalizer_oracles
from .exactlin import (
    DimensionError,
    FactorizationError,
    Mat,
    NotIdempotentError,
    SplitIdempotent,
    Swap,
    chain,
    cokernel,
    compose,
    factor_through_epi,
    identity,
    inverse,
    rank,
    right_inverse,
    same_image,
    split_idempotent,
    tensor,
)
from .report import AxiomError, AxiomReport, Check, Suite, compare

__all__ = [
    "StrongHopfModule",
    "ModuleCoinvariants",
    "TensorOverCoinv",
    "FundamentalReport",
    "check_strong_hopf_module",
    "module_identities",
    "q_M",
    "module_coinvariants",
    "induce",
    "tensor_over_coinv",
    "omega",
    "deformed_action",
    "deformation_report",
    "fundamental_theorem",
    "check_morphism",
    "factor_epi_tensor",
]


class StrongHopfModule:
    """(M, φ_M, ρ_M) over an anchor h: H → B."""

    def __init__(self, phi: Mat, rho: Mat, anchor: AnchorMorphism, validate: bool = True, name: str = "M"):
        m = phi.rows
        B, H = anchor.target, anchor.source
        if phi.shape != (m, m * B.dim) or rho.shape != (m * H.dim, m):
            raise DimensionError(f"action {phi.shape} / coaction {rho.shape} do not fit dimension {m}")
        self.phi = phi
        self.rho = rho
        self.anchor = anchor
        self.name = name
        if validate:
            rep = check_strong_hopf_module(self)
            if not rep.passed:
                raise AxiomError(rep)

    @classmethod
    def regular(cls, anchor: AnchorMorphism, validate: bool = True) -> "StrongHopfModule":
        """(B, μ_B, ρ_B) itself."""
        B = anchor.target
        return cls(B.mu, B.rho, anchor, validate, name=B.name)

    dim = property(lambda self: self.phi.rows)
    H = property(lambda self: self.anchor.source)
    B = property(lambda self: self.anchor.target)

    @cached_property
    def q(self) -> Mat:
        return chain(self.phi, (self.dim, self.anchor.h_lam), self.rho)

    @cached_property
    def coinvariants(self) -> "ModuleCoinvariants":
        return module_coinvariants(self)

    @cached_property
    def tensor(self) -> "TensorOverCoinv":
        return tensor_over_coinv(self)

    @cached_property
    def omega_pair(self) -> tuple[Mat, Mat]:
        return omega(self)

    @cached_property
    def phi_omega(self) -> Mat:
        """The deformed action φ_M∘(q_M⊗(μ_B∘(h⊗B)))∘(ρ_M⊗B), unchecked."""
        B = self.B
        return chain(self.phi, (self.q, chain(B.mu, (self.anchor.h, B.dim))), (self.rho, B.dim))

    def __eq__(self, other) -> bool:
        return (isinstance(other, StrongHopfModule) and self.phi == other.phi and self.rho == other.rho
                and self.anchor.h == other.anchor.h and self.B == other.B)

    def __repr__(self) -> str:
        return f"StrongHopfModule(name={self.name!r}, dim={self.dim})"


def check_strong_hopf_module(M: StrongHopfModule, threads: int | None = None) -> AxiomReport:
    """(d1), (d2-1)–(d2-5) and their consequences."""
    s = Suite("module")
    _add_module_axioms(s, M)
    _add_module_consequences(s, M)
    return s.run(threads)


def module_identities(M: StrongHopfModule, threads: int | None = None) -> AxiomReport:
    s = Suite("module-identities")
    _add_module_consequences(s, M)
    return s.run(threads)


def _add_module_axioms(s: Suite, M: StrongHopfModule) -> None:
    A, B, H = M.anchor, M.B, M.H
    m, b, n = M.dim, B.dim, H.dim
    phi, rho, h = M.phi, M.rho, A.h
    s.equal("(d1) coaction counit", lambda: chain((m, H.eps), rho), lambda: identity(m))
    s.equal("(d1) coaction coassociativity", lambda: chain((rho, n), rho), lambda: chain((m, H.delta), rho))
    s.equal("(d2-1)", lambda: chain(phi, (m, B.eta)), lambda: identity(m))
    iB = lambda: A.coinvariants.i  # noqa: E731
    s.equal("(d2-2)", lambda: chain(phi, (chain(phi, (m, iB())), b)),
            lambda: chain(phi, (m, chain(B.mu, (iB(), b)))))
    s.equal("(d2-3)", lambda: chain(rho, phi), lambda: chain((phi, H.mu), (m, Swap(n, b), n), (rho, B.rho)))
    s.equal("(d2-4)", lambda: chain(phi, (chain(phi, (m, h)), A.h_lam), (m, H.delta)),
            lambda: chain(phi, (m, A.h_pi_L)))
    s.equal("(d2-5)", lambda: chain(phi, (chain(phi, (m, A.h_lam)), h), (m, H.delta)),
            lambda: chain(phi, (m, A.h_pi_R)))


def _add_module_consequences(s: Suite, M: StrongHopfModule) -> None:
    A, B, H = M.anchor, M.B, M.H
    m, n = M.dim, H.dim
    phi, rho, h = M.phi, M.rho, A.h
    s.equal("Π̄^R of coaction of the action", lambda: chain((m, H.pi_bar_R), rho, phi),
            lambda: chain((phi, H.pi_bar_R), (m, B.rho)))
    s.equal("h∘Π^R splits the coaction", lambda: chain(phi, (m, A.h_pi_R), rho), lambda: identity(m))
    s.equal("action absorbs h∘Π^R", lambda: chain(phi, (phi, A.h_pi_R), (m, B.rho)), lambda: phi)
    s.equal("h∘Π^L cancels against h", lambda: chain(phi, (chain(phi, (m, A.h_pi_L)), h), (m, H.delta)),
            lambda: chain(phi, (m, h)))
    s.equal("q_B cancels against h", lambda: chain(phi, (chain(phi, (m, A.q)), h), (m, A.rho_h)),
            lambda: chain(phi, (m, h)))
    if A.is_identity():
        # the former extra axiom for B = H, h = id, now a consequence
        s.equal("superfluous identity", lambda: chain(phi, (phi, n), (m, H.pi_L, n), (m, H.delta)),
                lambda: phi)


def q_M(M: StrongHopfModule) -> Mat:
    """φ_M∘(M⊗(h∘λ))∘ρ_M, checked to be an idempotent with coinvariant image."""
    H, m = M.H, M.dim
    q = M.q
    rq = compose(M.rho, q)
    if chain((m, H.pi_L), rq) != rq:
        raise NotIdempotentError("coaction of q_M is not fixed by M⊗Π^L")
    if chain((m, H.pi_bar_R), rq) != rq:
        raise NotIdempotentError("coaction of q_M is not fixed by M⊗Π̄^R")
    if compose(q, q) != q:
        raise NotIdempotentError("q_M is not idempotent")
    return q


@dataclass(frozen=True)
class ModuleCoinvariants:
    split: SplitIdempotent
    phi_co: Mat
    report: AxiomReport = field(compare=False)

    dim = property(lambda self: self.split.rank)
    i = property(lambda self: self.split.i)
    p = property(lambda self: self.split.p)


def module_coinvariants(M: StrongHopfModule) -> ModuleCoinvariants:
    """Split q_M and build the action of B^coH on M^coH; every identity is asserted."""
    A, B, H = M.anchor, M.B, M.H
    m, b, n = M.dim, B.dim, H.dim
    phi, rho = M.phi, M.rho
    co = A.coinvariants
    q = q_M(M)
    sp = split_idempotent(q)
    for name, k in equalizer_oracles(rho, m, H).items():
        if not same_image(k, sp.i):
            raise ArithmeticError(f"image of q_M differs from the equalizer for {name}")
    iM, pM, iB, qB = sp.i, sp.p, co.i, A.q
    phi_co = chain(pM, phi, (iM, iB))
    mc, bc = sp.rank, co.dim
    s = Suite("module-coinvariants")
    s.equal("coinvariant action lands in coinvariants", lambda: chain(rho, phi, (iM, iB)),
            lambda: chain((m, H.pi_L), rho, phi, (iM, iB)))
    s.equal("action restricts to coinvariants", lambda: chain(phi, (iM, iB)), lambda: compose(iM, phi_co))
    s.equal("coinvariant action unital", lambda: chain(phi_co, (mc, co.eta_co)), lambda: identity(mc))
    s.equal("coinvariant action associative", lambda: chain(phi_co, (phi_co, bc)),
            lambda: chain(phi_co, (mc, co.mu_co)))
    s.equal("coaction of action on coinvariants", lambda: chain(rho, phi, (iM, b)),
            lambda: chain((phi, n), (iM, B.rho)))
    s.equal("q_M of action on coinvariants", lambda: chain(q, phi, (iM, b)), lambda: chain(phi, (iM, qB)))
    s.equal("q_M coaction of action on coinvariants", lambda: chain((q, n), rho, phi, (iM, b)),
            lambda: chain((chain(phi, (m, qB)), n), (iM, B.rho)))
    s.equal("p_M coaction of action on coinvariants", lambda: chain((pM, n), rho, phi, (iM, b)),
            lambda: chain((chain(pM, phi, (m, qB)), n), (iM, B.rho)))
    s.equal("q_M fixes action of coinvariants", lambda: chain(q, phi, (iM, iB)), lambda: chain(phi, (iM, iB)))
    s.equal("p_M absorbs q_B", lambda: chain(pM, phi, (iM, b)), lambda: chain(pM, phi, (iM, qB)))
    s.equal("q_M and h rebuild the identity", lambda: chain(phi, (q, A.h), rho), lambda: identity(m))
    rep = s.run()
    if not rep.passed:
        raise AxiomError(rep)
    return ModuleCoinvariants(sp, phi_co, rep)


def factor_epi_tensor(n: Mat, right: int, g: Mat) -> Mat:
    """The unique g' with g'∘(n⊗id_right) = g, without forming n⊗id."""
    r = right_inverse(n)
    gp = chain(g, (r, right))
    if chain(gp, (n, right)) != g:
        raise FactorizationError("morphism does not vanish on the kernel of n⊗id")
    return gp


@dataclass(frozen=True)
class TensorOverCoinv:
    """N⊗_{B^coH}B as a strong Hopf module, with its coequalizer map n."""

    n: Mat
    dim: int
    phi_t: Mat
    rho_t: Mat
    module: StrongHopfModule = field(compare=False)


def induce(psi: Mat, anchor: AnchorMorphism, name: str = "N⊗B") -> TensorOverCoinv:
    """Coequalize ψ⊗B and N⊗(μ_B∘(i_B⊗B)) and transport the B-action and H-coaction."""
    B, H = anchor.target, anchor.source
    co: Coinvariants = anchor.coinvariants
    b, n_h, bc = B.dim, H.dim, co.dim
    nd = psi.rows
    if psi.shape != (nd, nd * bc):
        raise DimensionError(f"action {psi.shape} does not fit a module over a {bc}-dim algebra")
    t1 = tensor(psi, identity(b))
    t2 = tensor(identity(nd), chain(B.mu, (co.i, b)))
    n = cokernel(t1 - t2)
    phi_t = factor_epi_tensor(n, b, chain(n, (nd, B.mu)))
    rho_t = factor_through_epi(n, chain((n, n_h), (nd, B.rho)))
    module = StrongHopfModule(phi_t, rho_t, anchor, validate=False, name=name)
    rep = check_strong_hopf_module(module)
    if not rep.passed:
        raise AxiomError(rep)
    return TensorOverCoinv(n, n.rows, phi_t, rho_t, module)


def tensor_over_coinv(M: StrongHopfModule) -> TensorOverCoinv:
    return induce(M.coinvariants.phi_co, M.anchor, name=f"{M.name}^coH⊗B")


def omega(M: StrongHopfModule) -> tuple[Mat, Mat]:
    """ω_M: M^coH⊗_{B^coH}B → M and its inverse ω'_M = n∘(p_M⊗h)∘ρ_M."""
    B = M.B
    mc = M.coinvariants
    T = M.tensor
    w = factor_through_epi(T.n, chain(M.phi, (mc.i, B.dim)))
    wp = chain(T.n, (mc.p, M.anchor.h), M.rho)
    if compose(w, wp) != identity(M.dim):
        raise FactorizationError("ω∘ω' is not the identity of M")
    if compose(wp, w) != identity(T.dim):
        raise FactorizationError("ω'∘ω is not the identity of the tensor module")
    if chain((w, M.H.dim), T.rho_t) != compose(M.rho, w):
        raise FactorizationError("ω is not H-colinear")
    return w, wp


def _deformed(phi: Mat, q: Mat, M: StrongHopfModule) -> Mat:
    B = M.B
    return chain(phi, (q, chain(B.mu, (M.anchor.h, B.dim))), (M.rho, B.dim))


def deformation_report(M: StrongHopfModule, threads: int | None = None) -> AxiomReport:
    """Checks on φ^ω: idempotency, q^ω = q_M, restriction to coinvariants, transport along ω."""
    B, A = M.B, M.anchor
    m, b = M.dim, B.dim
    s = Suite("deformation")
    pw = lambda: M.phi_omega  # noqa: E731
    deformed = lambda: StrongHopfModule(M.phi_omega, M.rho, A, validate=False, name=f"{M.name}^ω")  # noqa: E731
    s.equal("q^ω = q_M", lambda: chain(pw(), (m, A.h_lam), M.rho), lambda: M.q)
    s.equal("(φ^ω)^ω = φ^ω", lambda: deformed().phi_omega, pw)
    s.equal("φ^ω agrees on coinvariants", lambda: chain(pw(), (M.coinvariants.i, b)),
            lambda: chain(M.phi, (M.coinvariants.i, b)))
    s.equal("φ^ω is φ_t transported by ω", pw,
            lambda: chain(M.omega_pair[0], M.tensor.phi_t, (M.omega_pair[1], b)))
    s.predicate("deformed module axioms", lambda: _first_failure(check_strong_hopf_module(deformed(), 1)))
    return s.run(threads)


def _first_failure(rep: AxiomReport) -> int | None:
    bad = rep.failures()
    return None if not bad else bad[0].witness


def deformed_action(M: StrongHopfModule) -> Mat:
    rep = deformation_report(M)
    if not rep.passed:
        raise AxiomError(rep)
    return M.phi_omega


@dataclass
class FundamentalReport:
    """Certificate that M ≅ M^coH⊗_{B^coH}B as strong Hopf modules."""

    module: str
    dims: dict
    report: AxiomReport
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return self.report.passed

    def to_dict(self) -> dict:
        return {"module": self.module, "dims": self.dims, "seconds": round(self.seconds, 3),
                **self.report.to_dict()}


def fundamental_theorem(M: StrongHopfModule, threads: int | None = None) -> FundamentalReport:
    """Run the whole certification; a failing stage raises with its label."""
    start = time.perf_counter()
    rep = AxiomReport("fundamental")
    rep.extend(check_strong_hopf_module(M, threads))
    if not rep.passed:
        raise AxiomError(rep)
    mc = M.coinvariants
    T = M.tensor
    w, wp = M.omega_pair
    B = M.B
    b = B.dim
    rep.checks.append(Check("dim tensor module = dim M", T.dim == M.dim, None if T.dim == M.dim else T.dim))
    r = rank(w)
    rep.checks.append(Check("rank ω = dim M", r == M.dim, None if r == M.dim else r))
    rep.checks.append(compare("ω' = inverse of ω", wp, inverse(w)))
    rep.checks.append(compare("ω colinear", chain((w, M.H.dim), T.rho_t), compose(M.rho, w)))
    rep.checks.append(compare("tensor module invariant under deformation", T.module.phi_omega, T.phi_t))
    rep.checks.append(compare("ω quasilinear", chain(M.phi_omega, (w, b)), compose(w, T.module.phi_omega)))
    rep.extend(deformation_report(M, threads))
    dims = {"M": M.dim, "B": b, "H": M.H.dim, "M^coH": mc.dim, "B^coH": M.anchor.coinvariants.dim,
            "tensor": T.dim}
    return FundamentalReport(M.name, dims, rep, time.perf_counter() - start)


def check_morphism(M: StrongHopfModule, N: StrongHopfModule, f: Mat, threads: int | None = None) -> AxiomReport:
    """Colinearity and quasilinearity with respect to the deformed actions."""
    if f.shape != (N.dim, M.dim):
        raise DimensionError(f"morphism must be {N.dim}x{M.dim}, got {f.shape}")
    n, b = M.H.dim, M.B.dim
    s = Suite("morphism")
    s.equal("colinear", lambda: chain((f, n), M.rho), lambda: compose(N.rho, f))
    s.equal("quasilinear", lambda: chain(N.phi_omega, (f, b)), lambda: compose(f, M.phi_omega))
    return s.run(threads)

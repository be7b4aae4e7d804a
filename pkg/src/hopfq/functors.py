"""Induction and coinvariant functors between strong Hopf modules and B^coH-modules."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .comodule import AnchorMorphism, Coinvariants
from .exactlin import (
    DimensionError,
    FactorizationError,
    Mat,
    chain,
    compose,
    factor_through_epi,
    factor_through_mono,
    identity,
    kernel_basis,
    rank,
)
from .hopfmod import StrongHopfModule, TensorOverCoinv, check_morphism, induce
from .report import AxiomError, AxiomReport, Check, Suite, compare
from .structures import CLASS_NAMES, corollary_class

__all__ = [
    "RightModule",
    "EquivalenceExample",
    "EquivalenceReport",
    "functor_F",
    "induced",
    "functor_F_on_morphisms",
    "functor_G",
    "G_on_morphisms",
    "unit_alpha",
    "counit_beta",
    "module_morphism_basis",
    "random_module_morphism",
    "triangle_one",
    "triangle_two",
    "equivalence_report",
]


class RightModule:
    """(N, ψ_N) over the monoid B^coH of an anchor."""

    def __init__(self, psi: Mat, anchor: AnchorMorphism, validate: bool = True, name: str = "N"):
        self.psi = psi
        self.anchor = anchor
        self.name = name
        if validate:
            self.check_shape()
            rep = self.report()
            if not rep.passed:
                raise AxiomError(rep)

    def check_shape(self) -> None:
        """Needs B^coH, so it fails with the anchor when the anchor is broken."""
        c = self.over.dim
        if self.psi.shape != (self.dim, self.dim * c):
            raise DimensionError(f"action {self.psi.shape} does not fit a module over a {c}-dim algebra")

    dim = property(lambda self: self.psi.rows)

    @property
    def over(self) -> Coinvariants:
        return self.anchor.coinvariants

    def report(self) -> AxiomReport:
        co, nd, psi = self.over, self.dim, self.psi
        s = Suite("right-module")
        s.equal("module unit", lambda: chain(psi, (nd, co.eta_co)), lambda: identity(nd))
        s.equal("module associativity", lambda: chain(psi, (psi, co.dim)), lambda: chain(psi, (nd, co.mu_co)))
        return s.run(threads=1)

    @classmethod
    def regular(cls, anchor: AnchorMorphism) -> "RightModule":
        return cls(anchor.coinvariants.mu_co, anchor, name="B^coH")

    def direct_sum(self, other: "RightModule") -> "RightModule":
        """N ⊕ P with the componentwise action."""
        a, b, c = self.dim, other.dim, self.over.dim
        n = a + b
        den = self.psi.den * other.psi.den
        out = np.zeros((n, n * c), dtype=object)
        cols1 = [x * c + k for x in range(a) for k in range(c)]
        cols2 = [(a + x) * c + k for x in range(b) for k in range(c)]
        out[np.ix_(range(a), cols1)] = self.psi.num.astype(object) * other.psi.den
        out[np.ix_(range(a, n), cols2)] = other.psi.num.astype(object) * self.psi.den
        return RightModule(Mat(out, den), self.anchor, name=f"{self.name}⊕{other.name}")

    @cached_property
    def induced(self) -> TensorOverCoinv:
        return induce(self.psi, self.anchor, name=f"{self.name}⊗B")


def induced(N: RightModule) -> TensorOverCoinv:
    return N.induced


def functor_F(N: RightModule) -> StrongHopfModule:
    """N⊗_{B^coH}B; the ω-deformation leaves its action unchanged."""
    F = N.induced.module
    if F.phi_omega != F.phi:
        raise FactorizationError("induced module is not fixed by the ω-deformation")
    return F


def _is_module_map(f: Mat, N: RightModule, P: RightModule) -> bool:
    return chain(P.psi, (f, N.over.dim)) == compose(f, N.psi)


def _F_map(f: Mat, nN: Mat, nP: Mat, b: int) -> Mat:
    return factor_through_epi(nN, chain(nP, (f, b)))


def functor_F_on_morphisms(f: Mat, N: RightModule, P: RightModule) -> Mat:
    if f.shape != (P.dim, N.dim):
        raise DimensionError(f"module map must be {P.dim}x{N.dim}, got {f.shape}")
    if not _is_module_map(f, N, P):
        raise FactorizationError("not a morphism of right B^coH-modules")
    return _F_map(f, N.induced.n, P.induced.n, N.anchor.target.dim)


def functor_G(M: StrongHopfModule) -> RightModule:
    mc = M.coinvariants
    return RightModule(mc.phi_co, M.anchor, name=f"{M.name}^coH")


def G_on_morphisms(g: Mat, M: StrongHopfModule, Q: StrongHopfModule) -> Mat:
    """The unique g^coH with i_Q∘g^coH = g∘i_M."""
    mc, qc = M.coinvariants, Q.coinvariants
    gco = factor_through_mono(qc.i, compose(g, mc.i))
    if compose(gco, mc.p) != compose(qc.p, g):
        raise FactorizationError("g^coH∘p_M differs from p_Q∘g")
    bc = M.anchor.coinvariants.dim
    if chain(qc.phi_co, (gco, bc)) != compose(gco, mc.phi_co):
        raise FactorizationError("g^coH is not a module morphism")
    return gco


def unit_alpha(N: RightModule) -> tuple[Mat, Mat]:
    """α_N: N → (N⊗_{B^coH}B)^coH and its inverse x_N = m_N∘i."""
    T = N.induced
    B = N.anchor.target
    co = N.over
    FN = T.module
    fc = FN.coinvariants
    alpha = factor_through_mono(fc.i, chain(T.n, (N.dim, B.eta)))
    m_N = factor_through_epi(T.n, chain(N.psi, (N.dim, co.p)))
    x = compose(m_N, fc.i)
    if compose(x, alpha) != identity(N.dim):
        raise FactorizationError("x_N∘α_N is not the identity")
    if compose(alpha, x) != identity(fc.dim):
        raise FactorizationError("α_N∘x_N is not the identity")
    if chain(fc.phi_co, (alpha, co.dim)) != compose(alpha, N.psi):
        raise FactorizationError("α_N is not a module morphism")
    return alpha, x


def counit_beta(M: StrongHopfModule) -> Mat:
    return M.omega_pair[0]


def triangle_one(N: RightModule) -> Check:
    """β_{F(N)}∘F(α_N) = id."""
    alpha, _ = unit_alpha(N)
    FN = N.induced.module
    b = N.anchor.target.dim
    F_alpha = _F_map(alpha, N.induced.n, FN.tensor.n, b)
    return compare("triangle 1", compose(counit_beta(FN), F_alpha), identity(FN.dim))


def triangle_two(M: StrongHopfModule) -> Check:
    """G(β_M)∘α_{G(M)} = id."""
    GM = functor_G(M)
    alpha, _ = unit_alpha(GM)
    FGM = GM.induced.module
    G_beta = G_on_morphisms(counit_beta(M), FGM, M)
    return compare("triangle 2", compose(G_beta, alpha), identity(GM.dim))


def module_morphism_basis(N: RightModule, P: RightModule) -> list[Mat]:
    """Basis of Hom(N, P) in right B^coH-modules, as the kernel of f ↦ ψ_P∘(f⊗1) − f∘ψ_N."""
    c = N.over.dim
    cols = []
    for r in range(P.dim):
        for s in range(N.dim):
            e = np.zeros((P.dim, N.dim), dtype=np.int64)
            e[r, s] = 1
            E = Mat(e)
            d = chain(P.psi, (E, c)) - compose(E, N.psi)
            cols.append(d)
    den = 1
    for d in cols:
        den = den * d.den // np.gcd(den, d.den)
    system = np.stack([(d.num.astype(object) * (den // d.den)).ravel() for d in cols], axis=1)
    K = kernel_basis(Mat(system))
    return [Mat(K.num[:, j].reshape(P.dim, N.dim), K.den) for j in range(K.cols)]


def random_module_morphism(N: RightModule, P: RightModule, rng: random.Random) -> Mat:
    """A random integer combination of a Hom basis; nonzero whenever Hom(N, P) is."""
    basis = module_morphism_basis(N, P)
    out = Mat(np.zeros((P.dim, N.dim), dtype=np.int64))
    while basis and out.is_zero():
        for f in basis:
            out = out + f.scale(rng.randint(-3, 3))
    return out


@dataclass
class EquivalenceExample:
    name: str
    anchor: AnchorMorphism
    modules: list[StrongHopfModule]
    right_modules: list[RightModule] = field(default_factory=list)


@dataclass
class EquivalenceReport:
    records: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r["pass"] for r in self.records)

    def to_dict(self) -> dict:
        return {"pass": self.passed, "records": self.records}

    def summary(self) -> str:
        lines = []
        for r in self.records:
            status = "PASS" if r["pass"] else "FAIL"
            extra = ", ".join(f"{k}={v}" for k, v in r.items() if k not in ("pass", "example", "object", "kind"))
            lines.append(f"{status}  [{r['example']}] {r['kind']} {r['object']}: {extra}")
        return "\n".join(lines)


def _record(example: str, kind: str, obj: str, fn) -> dict:
    try:
        out = fn()
    except (ArithmeticError, ValueError, AssertionError) as exc:
        return {"example": example, "kind": kind, "object": obj, "pass": False,
                "error": f"{type(exc).__name__}: {exc}"}
    out.update({"example": example, "kind": kind, "object": obj})
    out["pass"] = all(v for k, v in out.items() if isinstance(v, bool))
    return out


def equivalence_report(examples: list[EquivalenceExample], seed: int = 0,
                       samples: int = 2) -> EquivalenceReport:
    """Unit/counit invertibility, both triangles and sampled naturality squares."""
    rng = random.Random(seed)
    rep = EquivalenceReport()
    for ex in examples:
        A = ex.anchor
        cls = corollary_class(A.source)
        B = A.target
        b = B.dim
        co = A.coinvariants
        rep.records.append({
            "example": ex.name, "kind": "class", "object": A.source.name, "pass": True,
            "corollary": cls, "class_name": CLASS_NAMES[cls], "B=H": A.is_identity(),
            "dim H": A.source.dim, "dim H_L": rank(A.source.pi_L), "dim B": b, "dim B^coH": co.dim,
        })
        if ex.right_modules:
            rights = list(ex.right_modules)
        else:
            reg = RightModule.regular(A)
            rights = [reg, reg.direct_sum(reg)]
        rights += [functor_G(M) for M in ex.modules]
        for N in rights:
            def unit_record(N=N):
                alpha, x = unit_alpha(N)
                t1 = triangle_one(N)
                return {"dim N": N.dim, "dim F(N)": N.induced.dim,
                        "alpha invertible": rank(alpha) == N.dim == alpha.rows,
                        "triangle 1": t1.passed,
                        "F(N) fixed by deformation": functor_F(N).phi_omega == functor_F(N).phi}
            rep.records.append(_record(ex.name, "unit", N.name, unit_record))
        for M in ex.modules:
            def counit_record(M=M):
                beta = counit_beta(M)
                t2 = triangle_two(M)
                return {"dim M": M.dim, "dim M^coH": M.coinvariants.dim,
                        "beta invertible": rank(beta) == M.dim == beta.rows,
                        "triangle 2": t2.passed}
            rep.records.append(_record(ex.name, "counit", M.name, counit_record))
        for N in rights:
            for P in rights:
                hom = len(module_morphism_basis(N, P))
                back = len(module_morphism_basis(P, N))
                for k in range(samples if hom else 0):
                    f = random_module_morphism(N, P, rng)
                    g = random_module_morphism(P, N, rng) if back else None
                    label = f"{N.name} -> {P.name} #{k}"
                    rep.records.append(_record(
                        ex.name, "naturality", label,
                        lambda f=f, g=g, N=N, P=P, hom=hom: {"dim Hom": hom, **_naturality(f, g, N, P, b)}))
    return rep


def _naturality(f: Mat, g: Mat | None, N: RightModule, P: RightModule, b: int) -> dict:
    """α square for f, β square for F(f), functoriality on f and on g∘f when a return map g exists."""
    Ff = functor_F_on_morphisms(f, N, P)
    FN, FP = N.induced.module, P.induced.module
    aN, _ = unit_alpha(N)
    aP, _ = unit_alpha(P)
    GFf = G_on_morphisms(Ff, FN, FP)
    alpha_square = compose(GFf, aN) == compose(aP, f)
    # β square for the Hopf module morphism g = F(f): F(N) → F(P)
    FGf = _F_map(GFf, FN.tensor.n, FP.tensor.n, b)
    beta_square = compose(counit_beta(FP), FGf) == compose(Ff, counit_beta(FN))
    out = {
        "alpha natural": alpha_square,
        "beta natural": beta_square,
        "F(f) in SM": check_morphism(FN, FP, Ff, threads=1).passed,
        "F(id) = id": functor_F_on_morphisms(identity(N.dim), N, N) == identity(FN.dim),
        "G(id) = id": G_on_morphisms(identity(FN.dim), FN, FN) == identity(FN.coinvariants.dim),
    }
    if g is not None:
        Fg = functor_F_on_morphisms(g, P, N)
        out["F(g∘f) = F(g)∘F(f)"] = functor_F_on_morphisms(compose(g, f), N, N) == compose(Fg, Ff)
        out["G(F(g)∘F(f)) = G(F(g))∘G(F(f))"] = (
            G_on_morphisms(compose(Fg, Ff), FN, FN) == compose(G_on_morphisms(Fg, FP, FN), GFf))
    return out

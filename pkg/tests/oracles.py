"""Independent reference computations on nested lists of Fractions.

Nothing here touches the numpy-backed implementation, so agreement between the
two routes is meaningful.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product


def rows_of(m) -> list[list[Fraction]]:
    return [list(r) for r in m.tolist()]


def matmul(a, b, cols: int | None = None):
    """``cols`` is needed when b has no rows and so cannot carry its width."""
    n = len(b)
    if cols is None:
        cols = len(b[0]) if b else 0
    return [[sum((a[i][k] * b[k][j] for k in range(n)), Fraction(0)) for j in range(cols)] for i in range(len(a))]


def kron(a, b):
    """Row-major Kronecker product by its defining formula."""
    ra, ca, rb, cb = len(a), len(a[0]), len(b), len(b[0])
    out = [[Fraction(0)] * (ca * cb) for _ in range(ra * rb)]
    for i, j, k, l in product(range(ra), range(ca), range(rb), range(cb)):
        out[i * rb + k][j * cb + l] = a[i][j] * b[k][l]
    return out


def swap_perm(m: int, n: int):
    out = [[Fraction(0)] * (m * n) for _ in range(m * n)]
    for i, j in product(range(m), range(n)):
        out[j * m + i][i * n + j] = Fraction(1)
    return out


def rank(a) -> int:
    """Gaussian elimination with largest-magnitude pivoting (a different strategy from the library)."""
    m = [list(r) for r in a]
    if not m:
        return 0
    r, cols = 0, len(m[0])
    for c in range(cols):
        best = max(range(r, len(m)), key=lambda i: abs(m[i][c]), default=None)
        if best is None or m[best][c] == 0:
            continue
        m[r], m[best] = m[best], m[r]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c] / m[r][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def is_zero(a) -> bool:
    return all(x == 0 for r in a for x in r)


def transpose(a):
    return [list(c) for c in zip(*a)] if a else []


def nullspace(a, cols: int) -> list[list[Fraction]]:
    """Column vectors spanning {x : a x = 0}, by reduction to row echelon form and back-substitution."""
    m = [list(r) for r in a]
    pivots = []
    r = 0
    for c in range(cols):
        best = max(range(r, len(m)), key=lambda i: abs(m[i][c]), default=None)
        if best is None or m[best][c] == 0:
            continue
        m[r], m[best] = m[best], m[r]
        m[r] = [x / m[r][c] for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    basis = []
    for free in (c for c in range(cols) if c not in pivots):
        v = [Fraction(0)] * cols
        v[free] = Fraction(1)
        for row, p in enumerate(pivots):
            v[p] = -m[row][free]
        basis.append(v)
    return basis


def same_span(u, v) -> bool:
    """Spans of two lists of vectors agree: equal ranks, each contained in the other."""
    return rank(u) == rank(v) == rank(list(u) + list(v))


def id_tensor_apply(p, rho, m: int):
    """(id_m ⊗ P)∘ρ computed block by block, without forming the Kronecker product."""
    n = len(p[0])
    out = []
    for i in range(m):
        out.extend(matmul(p, rho[i * n:(i + 1) * n], len(rho[0])))
    return out


def coinvariant_oracle(rho, pi_l, m: int):
    """Basis of {x : ρ x = (id⊗Π^L) ρ x} as a list of vectors."""
    d = [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(rho, id_tensor_apply(pi_l, rho, m))]
    return nullspace(d, m)

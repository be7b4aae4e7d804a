"""Exact rational dense linear algebra over based finite-dimensional spaces.

A :class:`Mat` stores an integer numerator array together with one positive
common denominator, always reduced so that the representation is canonical.
Integer kernels run in float64 whenever a magnitude bound proves every
partial sum is an exactly representable integer, fall back to int64 when the
bound allows it, and otherwise to Python integers (numpy ``object`` arrays).
No floating point value ever leaves this module.

Composites of tensored maps are evaluated by :func:`chain`, which contracts
one tensor factor at a time instead of building Kronecker products.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence, Union

import numpy as np

_FLOAT_EXACT = 2**53
_INT64_SAFE = 2**62


class DimensionError(ValueError):
    """Raised when morphisms are not composable or shapes are inconsistent."""


class NotIdempotentError(ValueError):
    pass


class FactorizationError(ArithmeticError):
    """Raised when a requested factorization has no exact solution."""


def _maxabs(arr: np.ndarray) -> int:
    if arr.size == 0:
        return 0
    return int(np.abs(arr).max())


def _as_object(arr: np.ndarray) -> np.ndarray:
    if arr.dtype == object:
        return arr
    return arr.astype(object)


def _shrink(arr: np.ndarray) -> np.ndarray:
    """Return an int64 copy of ``arr`` when its entries fit comfortably."""
    if arr.dtype == object and _maxabs(arr) < _INT64_SAFE:
        return arr.astype(np.int64)
    return arr


def _parse_scalar(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x.strip().replace("−", "-"))
    if isinstance(x, float):
        raise TypeError("floating point entries are not accepted; use 'p/q' strings")
    return Fraction(x)


class Mat:
    """Exact rational matrix: a morphism from a ``cols``-dim to a ``rows``-dim space."""

    __slots__ = ("num", "den")

    def __init__(self, num: np.ndarray, den: int = 1):
        num = np.asarray(num)
        if num.ndim != 2:
            raise DimensionError(f"matrix data must be 2-D, got shape {num.shape}")
        if num.dtype != object and num.dtype != np.int64:
            num = num.astype(np.int64)
        den = int(den)
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            num, den = -num, -den
        if den != 1 and num.size:
            g = math.gcd(den, int(np.gcd.reduce(num.ravel())))
            if g > 1:
                num = num // g
                den //= g
        elif den != 1:
            den = 1
        self.num = _shrink(num)
        self.den = den

    # construction helpers
    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "Mat":
        rows = [list(r) for r in rows]
        if not rows:
            return zero(0, cols or 0)
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise DimensionError("ragged matrix rows")
        fr = [[_parse_scalar(x) for x in r] for r in rows]
        den = reduce(math.lcm, (x.denominator for r in fr for x in r), 1)
        num = np.array([[x.numerator * (den // x.denominator) for x in r] for r in fr], dtype=object)
        num = num.reshape(len(rows), width)
        return cls(num, den)

    @property
    def rows(self) -> int:
        return self.num.shape[0]

    @property
    def cols(self) -> int:
        return self.num.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.num.shape

    def __getitem__(self, idx) -> Fraction:
        r, c = idx
        return Fraction(int(self.num[r, c]), self.den)

    @property
    def entries(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(int(v), self.den) for v in self.num.ravel())

    def tolist(self) -> list[list[Fraction]]:
        return [[Fraction(int(v), self.den) for v in row] for row in self.num]

    def is_integral(self) -> bool:
        return self.den == 1

    def __repr__(self) -> str:
        if self.rows * self.cols <= 64:
            body = [[str(x) for x in r] for r in self.tolist()]
            return f"Mat({body})"
        return f"Mat(<{self.rows}x{self.cols}>, den={self.den})"

    # comparisons
    def __eq__(self, other) -> bool:
        if not isinstance(other, Mat):
            return NotImplemented
        return (
            self.shape == other.shape
            and self.den == other.den
            and bool(np.array_equal(self.num, other.num))
        )

    def __hash__(self) -> int:
        return hash((self.shape, self.den, tuple(int(v) for v in self.num.ravel())))

    def is_zero(self) -> bool:
        return not np.any(self.num)

    # arithmetic
    def _aligned(self, other: "Mat") -> tuple[np.ndarray, np.ndarray, int]:
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")
        den = math.lcm(self.den, other.den)
        a, b = self.num, other.num
        sa, sb = den // self.den, den // other.den
        if (_maxabs(a) * sa + _maxabs(b) * sb) >= _INT64_SAFE:
            a, b = _as_object(a), _as_object(b)
        return a * sa, b * sb, den

    def __add__(self, other: "Mat") -> "Mat":
        a, b, den = self._aligned(other)
        return Mat(a + b, den)

    def __sub__(self, other: "Mat") -> "Mat":
        a, b, den = self._aligned(other)
        return Mat(a - b, den)

    def __neg__(self) -> "Mat":
        return Mat(-self.num, self.den)

    def scale(self, s) -> "Mat":
        s = _parse_scalar(s)
        num = self.num
        if _maxabs(num) * abs(s.numerator) >= _INT64_SAFE:
            num = _as_object(num)
        return Mat(num * s.numerator, self.den * s.denominator)

    def __matmul__(self, other: "Mat") -> "Mat":
        return compose(self, other)

    @property
    def T(self) -> "Mat":
        return Mat(np.ascontiguousarray(self.num.T), self.den)


ScalarLike = Union[int, str, Fraction]


def identity(n: int) -> Mat:
    return Mat(np.eye(n, dtype=np.int64))


def zero(m: int, n: int | None = None) -> Mat:
    return Mat(np.zeros((m, m if n is None else n), dtype=np.int64))


def scalar(x: ScalarLike) -> Mat:
    return Mat.from_rows([[x]])


def basis_vector(n: int, i: int) -> Mat:
    v = np.zeros((n, 1), dtype=np.int64)
    v[i, 0] = 1
    return Mat(v)


def _int_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    bound = _maxabs(a) * _maxabs(b) * max(a.shape[1], 1)
    if a.dtype != object and b.dtype != object and bound < _FLOAT_EXACT:
        return (a.astype(np.float64) @ b.astype(np.float64)).astype(np.int64)
    if a.dtype != object and b.dtype != object and bound < _INT64_SAFE:
        return a @ b
    return _as_object(a).dot(_as_object(b))


def compose(f: Mat, g: Mat) -> Mat:
    """Categorical composite f∘g, i.e. the matrix product."""
    if f.cols != g.rows:
        raise DimensionError(f"cannot compose {f.shape} after {g.shape}")
    return Mat(_int_matmul(f.num, g.num), f.den * g.den)


def tensor(f: Mat, *more: Mat) -> Mat:
    """Kronecker product; the left factor is the major index."""
    out = f
    for g in more:
        a, b = out.num, g.num
        if _maxabs(a) * _maxabs(b) >= _INT64_SAFE:
            a, b = _as_object(a), _as_object(b)
        out = Mat(np.kron(a, b), out.den * g.den)
    return out


def swap(m: int, n: int) -> Mat:
    """Symmetry V_m⊗V_n → V_n⊗V_m sending flat index i·n+j to j·m+i."""
    size = m * n
    out = np.zeros((size, size), dtype=np.int64)
    i, j = np.divmod(np.arange(size), n) if n else (np.zeros(0, int), np.zeros(0, int))
    out[j * m + i, i * n + j] = 1
    return Mat(out)


def hstack(mats: Sequence[Mat]) -> Mat:
    den = reduce(math.lcm, (m.den for m in mats), 1)
    parts = [_as_object(m.num) * (den // m.den) for m in mats]
    return Mat(np.hstack(parts), den)


def vstack(mats: Sequence[Mat]) -> Mat:
    den = reduce(math.lcm, (m.den for m in mats), 1)
    parts = [_as_object(m.num) * (den // m.den) for m in mats]
    return Mat(np.vstack(parts), den)


def first_difference(f: Mat, g: Mat) -> int | None:
    """Index of the first domain basis vector on which f and g differ."""
    if f.shape != g.shape:
        raise DimensionError(f"shape mismatch {f.shape} vs {g.shape}")
    if f == g:
        return None
    d = (f - g).num
    cols = np.flatnonzero(np.any(d != 0, axis=0))
    return int(cols[0])


# lazily tensored composites ---------------------------------------------------


@dataclass(frozen=True)
class Swap:
    """Unmaterialized symmetry, usable as a factor inside :func:`chain`."""

    m: int
    n: int

    @property
    def shape(self) -> tuple[int, int]:
        return (self.m * self.n, self.m * self.n)

    def mat(self) -> Mat:
        return swap(self.m, self.n)


Factor = Union[Mat, int, Swap]
Layer = Union[Factor, Sequence[Factor]]


def _factor_shape(f: Factor) -> tuple[int, int]:
    if isinstance(f, Mat):
        return f.shape
    if isinstance(f, Swap):
        return f.shape
    if isinstance(f, (int, np.integer)):
        return (int(f), int(f))
    raise TypeError(f"unsupported factor {type(f).__name__}")


def _layer_factors(layer: Layer) -> list[Factor]:
    if isinstance(layer, (list, tuple)):
        return list(layer)
    return [layer]


def _transpose_factor(f: Factor) -> Factor:
    if isinstance(f, Mat):
        return f.T
    if isinstance(f, Swap):
        return Swap(f.n, f.m)
    return f


def _contract(state: np.ndarray, bound: int, axis: int, f: np.ndarray) -> tuple[np.ndarray, int]:
    # state[..., b, ...] against f[b, a] -> state[..., a, ...]; ``bound`` caps |state|
    fmax = _maxabs(f)
    out_bound = bound * fmax * max(f.shape[0], 1)
    if out_bound >= _FLOAT_EXACT and state.dtype != object:
        # the a-priori bound is loose; tighten it with the actual magnitude
        bound = _maxabs(state)
        out_bound = bound * fmax * max(f.shape[0], 1)
    if state.dtype != object and f.dtype != object and out_bound < _FLOAT_EXACT:
        out = np.tensordot(state.astype(np.float64, copy=False), f.astype(np.float64), axes=([axis], [0]))
    elif state.dtype != object and f.dtype != object and out_bound < _INT64_SAFE:
        out = np.tensordot(_as_int(state), f, axes=([axis], [0]))
    else:
        out = np.tensordot(_as_object(_as_int(state)), _as_object(f), axes=([axis], [0]))
    return np.moveaxis(out, -1, axis), out_bound


def _as_int(arr: np.ndarray) -> np.ndarray:
    return arr.astype(np.int64) if arr.dtype == np.float64 else arr


def _apply_layer(state: np.ndarray, bound: int, factors: list[Factor]) -> tuple[np.ndarray, int, int]:
    rows = state.shape[0]
    shapes = [_factor_shape(f) for f in factors]
    view = state.reshape((rows,) + tuple(b for b, _ in shapes))
    den = 1
    for k, (f, (b, a)) in enumerate(zip(factors, shapes)):
        axis = k + 1
        if isinstance(f, (int, np.integer)):
            continue
        if isinstance(f, Swap):
            # codomain V_n⊗V_m is indexed [j, i]; domain V_m⊗V_n is [i, j]
            lead, tail = view.shape[:axis], view.shape[axis + 1:]
            v = view.reshape(lead + (f.n, f.m) + tail)
            v = np.swapaxes(v, axis, axis + 1)
            view = v.reshape(lead + (f.m * f.n,) + tail)
            continue
        view, bound = _contract(view, bound, axis, f.num)
        den *= f.den
    total = int(np.prod([a for _, a in shapes], dtype=object))
    return view.reshape(rows, total), bound, den


def chain(*layers: Layer) -> Mat:
    """Evaluate the composite layers[0] ∘ layers[1] ∘ … exactly.

    Each layer is a factor or a tuple of factors standing for their tensor
    product; an ``int`` factor ``n`` is the identity of dimension ``n`` and a
    :class:`Swap` is the symmetry.  Tensor products are never materialized.
    """
    if not layers:
        raise DimensionError("empty composite")
    flat = [_layer_factors(layer) for layer in layers]
    dims = []
    for fs in flat:
        shapes = [_factor_shape(f) for f in fs]
        dims.append((math.prod(b for b, _ in shapes), math.prod(a for _, a in shapes)))
    for k in range(len(dims) - 1):
        if dims[k][1] != dims[k + 1][0]:
            raise DimensionError(
                f"layer {k} has domain {dims[k][1]} but layer {k + 1} has codomain {dims[k + 1][0]}"
            )
    codomain, domain = dims[0][0], dims[-1][1]
    transposed = domain < codomain
    if transposed:
        flat = [[_transpose_factor(f) for f in fs] for fs in reversed(flat)]
        codomain = domain
    # float64 while every partial sum stays an exact integer
    state = np.eye(codomain, dtype=np.float64)
    bound, den = 1, 1
    for fs in flat:
        state, bound, d = _apply_layer(state, bound, fs)
        den *= d
    out = Mat(_as_int(state), den)
    return out.T if transposed else out


# elimination ----------------------------------------------------------------


def _rref_int(num: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Fraction-free Gauss-Jordan elimination.

    Returns an integer matrix whose nonzero rows, each divided by its pivot
    entry, form the reduced row echelon form, plus the pivot columns.  Pivots
    are the first nonzero entry in scan order.
    """
    a = num.copy()
    nrows, ncols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        col = a[r:, c]
        nz = np.flatnonzero(col)
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        pv = a[r, c]
        others = np.flatnonzero(a[:, c])
        others = others[others != r]
        if others.size:
            block = a[others]
            f = block[:, c]
            if a.dtype != object:
                bound = _maxabs(block) * abs(int(pv)) + _maxabs(f) * _maxabs(a[r])
                if bound >= _INT64_SAFE:
                    a = _as_object(a)
                    block, f, pv = a[others], a[others][:, c], a[r, c]
            block = block * pv - np.outer(f, a[r])
            g = np.gcd.reduce(block, axis=1)
            g[g == 0] = 1
            a[others] = block // g[:, None]
        row = a[r]
        g = np.gcd.reduce(row)
        if g > 1:
            a[r] = row // g
        if a[r, c] < 0:
            a[r] = -a[r]
        pivots.append(c)
        r += 1
    return a[: len(pivots)], pivots


def rref(f: Mat) -> tuple[Mat, list[int]]:
    """Reduced row echelon form (nonzero rows only) and pivot columns."""
    rows, pivots = _rref_int(f.num)
    if not pivots:
        return zero(0, f.cols), pivots
    pv = [int(rows[k, c]) for k, c in enumerate(pivots)]
    den = reduce(math.lcm, pv, 1)
    scale = np.array([den // p for p in pv], dtype=object)
    out = _as_object(rows) * scale[:, None]
    return Mat(out, den), pivots


def rank(f: Mat) -> int:
    return len(_rref_int(f.num)[1])


def kernel_basis(f: Mat) -> Mat:
    """Injective k with f∘k = 0 whose columns span the null space of f."""
    r, pivots = rref(f)
    n = f.cols
    free = [c for c in range(n) if c not in set(pivots)]
    if not free:
        return zero(n, 0)
    # column for free variable j: 1 at j, -R[k, j] at pivot column of row k
    k = np.zeros((n, len(free)), dtype=object)
    rn = r.num
    for col, j in enumerate(free):
        k[j, col] = r.den
        for row, pc in enumerate(pivots):
            k[pc, col] = -rn[row, j]
    return Mat(k)


def cokernel(f: Mat) -> Mat:
    """Surjective n with n∘f = 0 and rows(n) = rows(f) − rank(f)."""
    return kernel_basis(f.T).T


def right_inverse(n: Mat) -> Mat:
    """A section r with n∘r = id, for n surjective."""
    # invert the square block on the pivot columns
    _, pivots = rref(n)
    if len(pivots) != n.rows:
        raise FactorizationError(f"map with shape {n.shape} is not surjective (rank {len(pivots)})")
    block = Mat(n.num[:, pivots], n.den)
    inv = inverse(block)
    out = np.zeros((n.cols, n.rows), dtype=object)
    out[pivots, :] = inv.num
    return Mat(out, inv.den)


def inverse(f: Mat) -> Mat:
    if f.rows != f.cols:
        raise DimensionError(f"cannot invert non-square {f.shape}")
    n = f.rows
    aug = hstack([f, identity(n)])
    r, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise FactorizationError("matrix is singular")
    return Mat(r.num[:, n:], r.den)


def factor_through_epi(n: Mat, g: Mat) -> Mat:
    """The unique g' with g'∘n = g, for n surjective."""
    if n.cols != g.cols:
        raise DimensionError(f"cannot factor {g.shape} through {n.shape}")
    gp = compose(g, right_inverse(n))
    if compose(gp, n) != g:
        raise FactorizationError("morphism does not vanish on the kernel of the epimorphism")
    return gp


def factor_through_mono(i: Mat, g: Mat) -> Mat:
    """The unique g' with i∘g' = g, for i injective."""
    if i.rows != g.rows:
        raise DimensionError(f"cannot factor {g.shape} through {i.shape}")
    gp = compose(right_inverse(i.T).T, g)
    if compose(i, gp) != g:
        raise FactorizationError("morphism does not land in the image of the monomorphism")
    return gp


def same_image(a: Mat, b: Mat) -> bool:
    """Column spaces of a and b coincide: equal rank and two-way containment."""
    if a.rows != b.rows:
        return False
    ra, rb = rank(a), rank(b)
    if ra != rb:
        return False
    both = hstack([a, b])
    return rank(both) == ra


@dataclass(frozen=True)
class SplitIdempotent:
    nabla: Mat
    i: Mat
    p: Mat
    rank: int


def split_idempotent(nabla: Mat) -> SplitIdempotent:
    """Factor an idempotent as i∘p with p∘i = id.

    i consists of the pivot columns of nabla and p of the nonzero rows of its
    reduced row echelon form.
    """
    if nabla.rows != nabla.cols:
        raise NotIdempotentError(f"idempotent must be square, got {nabla.shape}")
    sq = compose(nabla, nabla)
    if sq != nabla:
        d = (sq - nabla)
        pos = np.argwhere(d.num != 0)[0]
        worst = Fraction(_maxabs(d.num), d.den)
        raise NotIdempotentError(
            f"not idempotent: max |nabla^2 - nabla| = {worst}, first nonzero at {tuple(int(x) for x in pos)}"
        )
    r, pivots = rref(nabla)
    n = nabla.rows
    if not pivots:
        return SplitIdempotent(nabla, zero(n, 0), zero(0, n), 0)
    i = Mat(nabla.num[:, pivots], nabla.den)
    return SplitIdempotent(nabla, i, r, len(pivots))


def direct_sum(f: Mat, g: Mat) -> Mat:
    """Block diagonal matrix f ⊕ g."""
    den = math.lcm(f.den, g.den)
    out = np.zeros((f.rows + g.rows, f.cols + g.cols), dtype=object)
    out[: f.rows, : f.cols] = _as_object(f.num) * (den // f.den)
    out[f.rows:, f.cols:] = _as_object(g.num) * (den // g.den)
    return Mat(out, den)


def mat(rows: Iterable[Iterable[ScalarLike]]) -> Mat:
    """Shorthand for :meth:`Mat.from_rows`."""
    return Mat.from_rows(list(rows))

"""Matrices over W/p^N, valuation-pivoted normal forms, semilinear maps.

A :class:`Matrix` stores reduced representatives together with ``prec``,
the number of p-adic digits of each entry that are actually known.  Every
routine that turns approximate data into an integer (a valuation, a lattice
index) certifies the answer against ``prec`` and raises
:class:`PrecisionError` when it cannot.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .padic_ring import PrecisionError, RingContext, valuation_of_coeffs


class Matrix:
    """Dense matrix of ring elements (rows of coefficient tuples)."""

    __slots__ = ("ctx", "rows", "prec")

    def __init__(self, ctx: RingContext, rows, prec=None):
        self.ctx = ctx
        self.rows = tuple(tuple(r) for r in rows)
        self.prec = ctx.N if prec is None else min(prec, ctx.N)
        if self.rows and len({len(r) for r in self.rows}) != 1:
            raise ValueError("ragged matrix")

    # ------------------------------------------------------------------
    # constructors

    @classmethod
    def from_ints(cls, ctx, rows, prec=None):
        return cls(ctx, [[ctx.element(x) for x in row] for row in rows], prec)

    @classmethod
    def zeros(cls, ctx, nrows, ncols):
        z = ctx.zero
        return cls(ctx, [[z] * ncols for _ in range(nrows)])

    @classmethod
    def identity(cls, ctx, n):
        z, one = ctx.zero, ctx.one
        return cls(ctx, [[one if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, ctx, columns, prec=None):
        if not columns:
            raise ValueError("no columns")
        return cls(ctx, list(zip(*columns)), prec)

    @classmethod
    def block_diag(cls, a: "Matrix", b: "Matrix"):
        ctx = a.ctx
        z = ctx.zero
        rows = [list(r) + [z] * b.ncols for r in a.rows]
        rows += [[z] * a.ncols + list(r) for r in b.rows]
        return cls(ctx, rows, min(a.prec, b.prec))

    # ------------------------------------------------------------------
    # shape and access

    @property
    def nrows(self):
        return len(self.rows)

    @property
    def ncols(self):
        return len(self.rows[0]) if self.rows else 0

    @property
    def shape(self):
        return self.nrows, self.ncols

    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    def columns(self):
        return [list(c) for c in zip(*self.rows)]

    def column(self, j):
        return [r[j] for r in self.rows]

    def submatrix(self, row_idx, col_idx):
        return Matrix(self.ctx, [[self.rows[i][j] for j in col_idx] for i in row_idx], self.prec)

    def with_prec(self, prec):
        return Matrix(self.ctx, self.rows, prec)

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.ctx == other.ctx
                and self.rows == other.rows)

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"Matrix({self.nrows}x{self.ncols}, prec={self.prec})"

    # ------------------------------------------------------------------
    # arithmetic

    def _check_same_shape(self, other):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other):
        self._check_same_shape(other)
        add = self.ctx.add
        return Matrix(self.ctx, [[add(x, y) for x, y in zip(r, s)]
                                 for r, s in zip(self.rows, other.rows)],
                      min(self.prec, other.prec))

    def __sub__(self, other):
        self._check_same_shape(other)
        sub = self.ctx.sub
        return Matrix(self.ctx, [[sub(x, y) for x, y in zip(r, s)]
                                 for r, s in zip(self.rows, other.rows)],
                      min(self.prec, other.prec))

    def __neg__(self):
        neg = self.ctx.neg
        return Matrix(self.ctx, [[neg(x) for x in r] for r in self.rows], self.prec)

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise ValueError(f"dimension mismatch {self.shape} @ {other.shape}")
        ctx = self.ctx
        q = ctx.q
        m = ctx.m
        mul = ctx.mul_exact
        cols = list(zip(*other.rows))
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                acc = [0] * m
                for x, y in zip(r, c):
                    if any(x) and any(y):
                        prod = mul(x, y)
                        for t in range(m):
                            acc[t] += prod[t]
                row.append(tuple(a % q for a in acc))
            out.append(row)
        return Matrix(ctx, out, min(self.prec, other.prec))

    def scale(self, c):
        """Multiply by a ring element c."""
        mul = self.ctx.mul
        return Matrix(self.ctx, [[mul(c, x) for x in r] for r in self.rows], self.prec)

    def scale_p(self, k: int):
        """Multiply by p^k for k >= 0 (precision grows by k)."""
        if k < 0:
            raise ValueError("use divide_p for negative exponents")
        c = self.ctx.p ** k
        s = self.ctx.scale
        return Matrix(self.ctx, [[s(c, x) for x in r] for r in self.rows], self.prec + k)

    def divide_p(self, k: int):
        """Exact division by p^k; requires every entry to have valuation >= k."""
        if k == 0:
            return self
        if self.min_valuation() < k:
            raise ArithmeticError("matrix not divisible by p^%d" % k)
        pk = self.ctx.p ** k
        return Matrix(self.ctx, [[tuple(c // pk for c in x) for x in r] for r in self.rows],
                      self.prec - k)

    def frobenius(self, twist: int):
        fr = self.ctx.frobenius
        return Matrix(self.ctx, [[fr(x, twist) for x in r] for r in self.rows], self.prec)

    def transpose(self):
        return Matrix(self.ctx, list(zip(*self.rows)), self.prec)

    @property
    def T(self):
        return self.transpose()

    def apply(self, v):
        ctx = self.ctx
        out = []
        for r in self.rows:
            acc = ctx.zero
            for x, y in zip(r, v):
                acc = ctx.add(acc, ctx.mul(x, y))
            out.append(acc)
        return out

    def min_valuation(self) -> int:
        """Smallest entry valuation, capped at prec (prec means 'at least prec')."""
        p, cap = self.ctx.p, self.prec
        v = cap
        for r in self.rows:
            for x in r:
                if any(x):
                    v = min(v, valuation_of_coeffs(x, p, v))
                    if v == 0:
                        return 0
        return v

    def is_zero(self) -> bool:
        return self.min_valuation() >= self.prec

    def congruent(self, other, k: int) -> bool:
        """Entrywise congruence modulo p^k."""
        if self.shape != other.shape:
            return False
        if k > min(self.prec, other.prec):
            raise PrecisionError(f"cannot compare modulo p^{k} at precision "
                                 f"{min(self.prec, other.prec)}", recommended_precision=k)
        pk = self.ctx.p ** k
        return all((x - y) % pk == 0
                   for r, s in zip(self.rows, other.rows)
                   for a, b in zip(r, s) for x, y in zip(a, b))

    def equals_mod_prec(self, other) -> bool:
        return self.congruent(other, min(self.prec, other.prec))

    # ------------------------------------------------------------------
    # normal forms and inverses

    def hnf(self, transform=False):
        return column_hnf(self, transform=transform)

    def inverse(self):
        """Return (d, A') with self^{-1} = p^{-d} A'; A' carries its own precision."""
        res = column_hnf(self, transform=True)
        n = self.nrows
        if self.ncols != n:
            raise ValueError("inverse of a non-square matrix")
        d = sum(res.valuations)
        # p^d H^{-1} by exact forward substitution
        hinv = lower_triangular_solve_exact(self.ctx, res.normal_form, d)
        u = res.transform.submatrix(range(n), range(n))
        a = Matrix(self.ctx, u.rows, self.prec) @ Matrix(self.ctx, hinv)
        a = a.with_prec(self.prec - d)
        if a.prec <= 0:
            raise PrecisionError("inverse has no significant digits left",
                                 recommended_precision=self.ctx.N + d + 1)
        c = a.min_valuation()
        if c >= a.prec:
            raise PrecisionError("inverse lost all precision")
        return d - c, a.divide_p(c)

    def determinant_valuation(self) -> int:
        if self.nrows != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        return sum(column_hnf(self).valuations)

    def serialize(self):
        return [[self.ctx.element_to_json(x) for x in r] for r in self.rows]

    @classmethod
    def deserialize(cls, ctx, data, prec=None):
        return cls(ctx, [[ctx.element_from_json(x) for x in r] for r in data], prec)


@dataclass(frozen=True)
class HNFResult:
    """Column Hermite normal form over the DVR.

    ``normal_form`` is n x n lower triangular with diagonal p^{v_i} and the
    entries below the diagonal in row i reduced modulo p^{v_i}; it spans the
    same column lattice as the input.  ``transform`` (when requested) is the
    k x k unimodular U with input @ U = [normal_form | 0].
    """

    normal_form: Matrix
    valuations: tuple
    transform: Matrix | None = None

    @property
    def colength(self):
        return sum(self.valuations)


def column_hnf(mat: Matrix, transform=False) -> HNFResult:
    """Column-style HNF with minimal-valuation pivoting.

    Rows are processed top to bottom; in each row the pivot is the remaining
    column whose entry has least valuation (ties: lowest column index).  The
    computation is exact in the finite module (W/p^N)^n; the result is
    certified to describe the true column span when the colength is below
    the input precision.
    """
    ctx = mat.ctx
    n, k = mat.shape
    if k < n:
        raise PrecisionError("fewer columns than rows: lattice is not of full rank")
    p, N, q = ctx.p, ctx.N, ctx.q
    cols = [list(c) for c in zip(*mat.rows)]
    ident = [[ctx.one if i == j else ctx.zero for i in range(k)] for j in range(k)] if transform else None
    vals = []
    mul, sub = ctx.mul, ctx.sub

    def axpy(dst, src, coef, start):
        # dst[start:] -= coef * src[start:]
        for t in range(start, len(dst)):
            s = src[t]
            if any(s):
                dst[t] = sub(dst[t], mul(coef, s))

    for i in range(n):
        best, best_v = -1, N
        for j in range(i, k):
            x = cols[j][i]
            if any(x):
                v = valuation_of_coeffs(x, p, best_v)
                if v < best_v:
                    best, best_v = j, v
                    if v == 0:
                        break
        if best < 0 or best_v >= mat.prec:
            raise PrecisionError(f"row {i} has no pivot of valuation < {mat.prec}: "
                                 "lattice not of full rank at this precision",
                                 recommended_precision=2 * N)
        if best != i:
            cols[i], cols[best] = cols[best], cols[i]
            if transform:
                ident[i], ident[best] = ident[best], ident[i]
        piv = cols[i]
        v = best_v
        unit_inv = ctx.inverse(ctx.unit_part(piv[i], v))
        piv[:] = [mul(unit_inv, x) for x in piv]
        if transform:
            ident[i] = [mul(unit_inv, x) for x in ident[i]]
        for j in range(i + 1, k):
            x = cols[j][i]
            if any(x):
                coef = ctx.unit_part(x, v)
                axpy(cols[j], piv, coef, i)
                if transform:
                    axpy(ident[j], ident[i], coef, 0)
        vals.append(v)

    # reduce below-diagonal entries of column j modulo p^{v_i} using column i
    for j in range(n):
        col = cols[j]
        for i in range(j + 1, n):
            pv = p ** vals[i]
            coef = tuple(c // pv for c in col[i])
            if any(coef):
                axpy(col, cols[i], coef, i)
                if transform:
                    axpy(ident[j], ident[i], coef, 0)

    colength = sum(vals)
    if colength >= mat.prec:
        raise PrecisionError(f"colength {colength} not below precision {mat.prec}",
                             recommended_precision=N + colength - mat.prec + 1)
    # entries below the pivot rows are canonical residues; drop garbage digits
    hnf_cols = []
    for j in range(n):
        hnf_cols.append([tuple(c % q for c in x) for x in cols[j]])
    normal = Matrix.from_columns(ctx, hnf_cols)
    tr = Matrix.from_columns(ctx, ident, mat.prec) if transform else None
    return HNFResult(normal, tuple(vals), tr)


def lower_triangular_solve_exact(ctx: RingContext, h: Matrix, shift: int):
    """Rows of p^shift * h^{-1} for lower-triangular h with diagonal p^{v_i}.

    Uses exact arithmetic in Z[x]/(f) (no reduction mod p^N) so the division
    by p^{v_i} at each step is exact; raises if p^shift is too small.
    """
    n = h.nrows
    p = ctx.p
    vals = [valuation_of_coeffs(h.rows[i][i], p, ctx.N) for i in range(n)]
    mul = ctx.mul_exact
    cols = []
    for j in range(n):
        y = [None] * n
        for i in range(n):
            acc = [0] * ctx.m
            if i == j:
                acc[0] = p ** shift
            for t in range(j, i):
                a = h.rows[i][t]
                if any(a) and any(y[t]):
                    prod = mul(a, y[t])
                    for s in range(ctx.m):
                        acc[s] -= prod[s]
            pv = p ** vals[i]
            if any(c % pv for c in acc):
                raise ArithmeticError("p^shift * h^{-1} is not integral")
            y[i] = tuple(c // pv for c in acc)
        cols.append(y)
    q = ctx.q
    return [[tuple(c % q for c in cols[j][i]) for j in range(n)] for i in range(n)]


@dataclass(frozen=True)
class SemilinearMap:
    """v -> p^pexp * matrix * sigma^twist(v) on coordinate column vectors."""

    matrix: Matrix
    twist: int = 0
    pexp: int = 0

    @property
    def ctx(self):
        return self.matrix.ctx

    @property
    def dim(self):
        return self.matrix.nrows

    def apply(self, v: Sequence):
        """Image of an integral coordinate vector.

        With negative pexp the division must be exact, otherwise
        ArithmeticError is raised; use lattices for non-integral images.
        """
        if len(v) != self.matrix.ncols:
            raise ValueError("dimension mismatch")
        ctx = self.ctx
        w = self.matrix.apply([ctx.frobenius(x, self.twist) for x in v])
        if self.pexp >= 0:
            c = ctx.p ** self.pexp
            return [ctx.scale(c, x) for x in w]
        k = -self.pexp
        if any(ctx.valuation(x) < k for x in w):
            raise ArithmeticError("image is not integral")
        return [ctx.unit_part(x, k) for x in w]

    def compose(self, other: "SemilinearMap") -> "SemilinearMap":
        """self o other: matrix A sigma^t(B), twist t + s, exponents add."""
        if self.matrix.ncols != other.matrix.nrows:
            raise ValueError("dimension mismatch")
        mat = self.matrix @ other.matrix.frobenius(self.twist)
        return SemilinearMap(mat, self.twist + other.twist, self.pexp + other.pexp).normalized()

    def normalized(self) -> "SemilinearMap":
        """Move common p-power factors of the matrix into pexp."""
        c = self.matrix.min_valuation()
        if c == 0 or c >= self.matrix.prec:
            return self
        return SemilinearMap(self.matrix.divide_p(c), self.twist, self.pexp + c)

    def inverse(self) -> "SemilinearMap":
        d, a = self.matrix.inverse()
        return SemilinearMap(a.frobenius(-self.twist), -self.twist, -self.pexp - d)

    def block(self, rows, cols) -> "SemilinearMap":
        return SemilinearMap(self.matrix.submatrix(rows, cols), self.twist, self.pexp)

    def scaled(self, k: int) -> "SemilinearMap":
        return SemilinearMap(self.matrix, self.twist, self.pexp + k)

    def integral_matrix(self) -> Matrix:
        """Matrix of the map when pexp >= 0 (or the division is exact)."""
        if self.pexp >= 0:
            return self.matrix.scale_p(self.pexp)
        return self.matrix.divide_p(-self.pexp)

    def equals(self, other: "SemilinearMap") -> bool:
        """Equality as maps, compared at the available precision."""
        if self.dim != other.dim or (self.twist - other.twist) % self.ctx.m:
            return False
        a, b = self.normalized(), other.normalized()
        if a.matrix.is_zero() or b.matrix.is_zero():
            return a.matrix.is_zero() and b.matrix.is_zero()
        if a.pexp != b.pexp:
            return False
        return a.matrix.equals_mod_prec(b.matrix)


def identity_map(ctx, n) -> SemilinearMap:
    return SemilinearMap(Matrix.identity(ctx, n), 0, 0)


def scalar_map(ctx, n, k: int) -> SemilinearMap:
    """Multiplication by p^k."""
    return SemilinearMap(Matrix.identity(ctx, n), 0, k)


def apply(f: SemilinearMap, v):
    return f.apply(v)


def compose(f: SemilinearMap, g: SemilinearMap) -> SemilinearMap:
    return f.compose(g)


def semilinear_power(f: SemilinearMap, n: int) -> SemilinearMap:
    """n-fold composite f o ... o f by repeated composition."""
    if n < 1:
        raise ValueError("n must be positive")
    result = f
    for _ in range(n - 1):
        result = result.compose(f)
    return result

"""Full-rank W-lattices in K^n (K = W[1/p]) and their calculus.

A lattice is stored canonically as p^(-denom) times the column span of a
lower-triangular Hermite normal form H whose entries are not all divisible
by p.  Two lattices are equal exactly when (denom, H) agree, so equality
and hashing are structural.  ``denom`` may be negative (p^2 W^n has
denom -2 and H = I).

Once a lattice is in canonical form its entries are exact: the true lattice
is pinned down by H modulo p^N because its colength is certified below N.
Containment tests and duals therefore use exact integer arithmetic on the
stored representatives.
"""

from __future__ import annotations

from dataclasses import dataclass

from .padic_ring import PrecisionError, RingContext
from .semilinear import Matrix, SemilinearMap, column_hnf, lower_triangular_solve_exact


class NotContainedError(ValueError):
    """index(A, B) was requested but A is not a sublattice of B."""


class Lattice:
    __slots__ = ("ctx", "denom", "hnf", "valuations", "_hash")

    def __init__(self, ctx: RingContext, denom: int, hnf: Matrix, valuations):
        # use the constructors below; this one trusts its arguments
        self.ctx = ctx
        self.denom = denom
        self.hnf = hnf
        self.valuations = tuple(valuations)
        self._hash = None

    # ------------------------------------------------------------------
    # constructors

    @classmethod
    def from_generators(cls, gens: Matrix, denom: int = 0) -> "Lattice":
        """p^(-denom) times the column span of ``gens`` (any number of columns)."""
        c = gens.min_valuation()
        if c >= gens.prec:
            raise PrecisionError("generators vanish at working precision",
                                 recommended_precision=2 * gens.ctx.N)
        if c:
            gens = gens.divide_p(c)
        res = column_hnf(gens)
        return cls(gens.ctx, denom - c, res.normal_form, res.valuations)

    @classmethod
    def standard(cls, ctx: RingContext, n: int) -> "Lattice":
        """W^n."""
        return cls(ctx, 0, Matrix.identity(ctx, n), (0,) * n)

    @classmethod
    def from_columns(cls, ctx, columns, denom=0) -> "Lattice":
        return cls.from_generators(Matrix.from_columns(ctx, columns), denom)

    # ------------------------------------------------------------------
    # basic data

    @property
    def rank(self) -> int:
        return self.hnf.nrows

    @property
    def colength(self) -> int:
        """Length of W^n / p^denom L (sum of HNF diagonal valuations)."""
        return sum(self.valuations)

    def basis(self):
        """(denom, columns) with L = p^(-denom) span(columns)."""
        return self.denom, self.hnf.columns()

    def __eq__(self, other):
        return (isinstance(other, Lattice) and self.ctx == other.ctx
                and self.denom == other.denom and self.hnf.rows == other.hnf.rows)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.denom, self.hnf.rows))
        return self._hash

    def __repr__(self):
        return f"Lattice(rank={self.rank}, denom={self.denom}, valuations={self.valuations})"

    def _check_same_space(self, other):
        if self.ctx != other.ctx or self.rank != other.rank:
            raise ValueError("lattices live in different spaces")

    # ------------------------------------------------------------------
    # operations

    def scale(self, k: int) -> "Lattice":
        """p^k L."""
        return Lattice(self.ctx, self.denom - k, self.hnf, self.valuations)

    def sum(self, other: "Lattice") -> "Lattice":
        self._check_same_space(other)
        e = max(self.denom, other.denom)
        a = self.hnf.scale_p(e - self.denom)
        b = other.hnf.scale_p(e - other.denom)
        gens = Matrix(self.ctx, [ra + rb for ra, rb in zip(a.rows, b.rows)])
        return Lattice.from_generators(gens, e)

    __add__ = sum

    def neutral_dual(self) -> "Lattice":
        """{x : x^T y in W for all y in L}, for the standard dot product."""
        ell = self.colength
        rows = lower_triangular_solve_exact(self.ctx, self.hnf, ell)  # p^ell H^{-1}
        gens = Matrix(self.ctx, rows).transpose()
        return Lattice.from_generators(gens, ell - self.denom)

    def intersect(self, other: "Lattice") -> "Lattice":
        self._check_same_space(other)
        return self.neutral_dual().sum(other.neutral_dual()).neutral_dual()

    def map_image(self, f: SemilinearMap) -> "Lattice":
        """f(L) = p^(pexp - denom) span(A sigma^t(H))."""
        if f.matrix.ncols != self.rank:
            raise ValueError("dimension mismatch")
        gens = f.matrix @ self.hnf.frobenius(f.twist)
        return Lattice.from_generators(gens, self.denom - f.pexp)

    def preimage(self, f: SemilinearMap) -> "Lattice":
        return self.map_image(f.inverse())

    def is_subset(self, other: "Lattice") -> bool:
        """self <= other, decided exactly."""
        self._check_same_space(other)
        k = other.denom - self.denom
        for col in self.hnf.columns():
            if not _in_span(self.ctx, other.hnf, other.valuations, col, k):
                return False
        return True

    __le__ = is_subset

    def contains_vector(self, v, denom=0) -> bool:
        """Whether p^(-denom) v lies in L."""
        return _in_span(self.ctx, self.hnf, self.valuations,
                        [self.ctx.element(x) for x in v], self.denom - denom)

    def index_in(self, other: "Lattice") -> int:
        """Length of other / self; requires self <= other."""
        if not self.is_subset(other):
            raise NotContainedError("lattice is not contained in the target")
        return self.rank * (other.denom - self.denom) + self.colength - other.colength

    def exponent_in(self, other: "Lattice") -> int:
        """Least r >= 0 with p^r other <= self (requires self <= other)."""
        if not self.is_subset(other):
            raise NotContainedError("lattice is not contained in the target")
        r = max(0, self.denom - other.denom)
        while not other.scale(r).is_subset(self):
            r += 1
        return r

    def to_json(self):
        return {"denom": self.denom, "generators": self.hnf.serialize()}

    @classmethod
    def from_json(cls, ctx, data):
        return cls.from_generators(Matrix.deserialize(ctx, data["generators"]), int(data["denom"]))


def _in_span(ctx, h: Matrix, vals, col, k: int) -> bool:
    """Whether p^k col lies in span(h) for lower-triangular h with diagonal p^vals.

    Exact forward substitution in Z[x]/(f); no reduction modulo p^N.
    """
    p, m = ctx.p, ctx.m
    n = len(vals)
    lift = p ** k if k > 0 else 1          # multiplies the target
    hs = p ** (-k) if k < 0 else 1         # multiplies the basis
    mul = ctx.mul_exact
    y = []
    for i in range(n):
        acc = [c * lift for c in col[i]]
        for t in range(i):
            a = h.rows[i][t]
            if any(a) and any(y[t]):
                prod = mul(a, y[t])
                for s in range(m):
                    acc[s] -= hs * prod[s]
        d = hs * p ** vals[i]
        if any(c % d for c in acc):
            return False
        y.append(tuple(c // d for c in acc))
    return True


# ----------------------------------------------------------------------
# functional interface


def lattice_sum(a: Lattice, b: Lattice) -> Lattice:
    return a.sum(b)


def intersect(a: Lattice, b: Lattice) -> Lattice:
    return a.intersect(b)


def index(a: Lattice, b: Lattice) -> int:
    """Length of b / a; raises NotContainedError unless a <= b."""
    return a.index_in(b)


def scale(lat: Lattice, k: int) -> Lattice:
    return lat.scale(k)


def map_image(f: SemilinearMap, lat: Lattice) -> Lattice:
    return lat.map_image(f)


def is_adjacent(a: Lattice, b: Lattice) -> bool:
    """pB <= A <= B."""
    return a.is_subset(b) and b.scale(1).is_subset(a)


@dataclass(frozen=True)
class PairingContext:
    """The form <<x, y>> = x^T G sigma^twist(y) on a coordinate space."""

    gram: Matrix
    twist: int = 1

    def evaluate(self, x, y):
        ctx = self.gram.ctx
        gy = self.gram.apply([ctx.frobenius(c, self.twist) for c in y])
        acc = ctx.zero
        for a, b in zip(x, gy):
            acc = ctx.add(acc, ctx.mul(a, b))
        return acc

    def _dual_map(self) -> SemilinearMap:
        d, ginv = self.gram.inverse()            # G^{-1} = p^{-d} ginv
        return SemilinearMap(ginv.transpose(), self.twist, -d)

    def dual(self, lat: Lattice) -> Lattice:
        """{x : <<x, y>> in W for all y in L} = G^{-T} sigma^twist(L*)."""
        return lat.neutral_dual().map_image(self._dual_map())


def dual(lat: Lattice, pairing: PairingContext) -> Lattice:
    return pairing.dual(lat)

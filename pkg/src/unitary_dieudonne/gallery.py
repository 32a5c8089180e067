"""Explicit families of unitary Dieudonne modules.

All constructors work over W(F_{p^m}) with m even (the pairing needs a
unit delta with sigma(delta) = -delta).  Indices in the docstrings are
1-based as in the usual notation; ``e(i)`` and ``f(i)`` below convert to
0-based coordinates.

The basic module M_(a,b), g = a + b odd, r = (g - 1) / 2:

    F(e_i) = f_i          1 <= i <= a
    F(e_j) = p f_j        a < j <= g
    F(f_j) = p e_{j+1}    r < j <= r + a
    F(f_i) = e_{i+1}      otherwise, with e_{g+1} = e_1
    <e_i, f_{r+i}> = delta,  <f_{r+i}, e_i> = -delta   (f indices mod g)
"""

from __future__ import annotations

from dataclasses import dataclass

from .dieudonne_module import UnitaryDM, direct_sum, recommended_precision
from .padic_ring import RingContext, delta_element, make_context
from .semilinear import Matrix

FAMILIES = ("odd_direct", "even_product", "parallel_product", "deformed", "flip_10",
            "height_realization")


def default_context(p: int, a: int, b: int, N=None, m: int = 2) -> RingContext:
    """A ring with enough precision for every analysis of signature (a, b)."""
    return make_context(p, m, N if N is not None else recommended_precision(a, b))


class _Builder:
    def __init__(self, ctx, g):
        self.ctx = ctx
        self.g = g
        self.F = [[ctx.zero] * (2 * g) for _ in range(2 * g)]
        self.B = [[ctx.zero] * (2 * g) for _ in range(2 * g)]

    def e(self, i):
        return (i - 1) % self.g

    def f(self, i):
        return self.g + (i - 1) % self.g

    def set_F(self, src, terms):
        """F(src) = sum of coeff * target over (coeff, target) pairs."""
        for coeff, target in terms:
            self.F[target][src] = self.ctx.element(coeff)

    def set_pair(self, x, y, value):
        self.B[x][y] = value
        self.B[y][x] = self.ctx.neg(value)

    def matrices(self):
        return Matrix(self.ctx, self.F), Matrix(self.ctx, self.B)


def _odd_builder(a, b, ctx, wraparound=True, check=True):
    g = a + b
    if check:
        if a < 0 or b < 0 or g % 2 == 0:
            raise ValueError(f"odd construction needs a + b odd, got ({a},{b})")
        if a > b:
            raise ValueError("odd construction expects a <= b")
    if ctx.p == 2:
        raise ValueError("p = 2 is not supported")
    r = (g - 1) // 2
    bl = _Builder(ctx, g)
    p = ctx.p
    for i in range(1, g + 1):
        bl.set_F(bl.e(i), [(1 if i <= a else p, bl.f(i))])
    for j in range(1, g + 1):
        coeff = p if r < j <= r + a else 1
        if j == g and not wraparound:
            continue          # leaves F(f_g) = 0, so F is not invertible
        bl.set_F(bl.f(j), [(coeff, bl.e(j + 1))])
    delta = delta_element(ctx)
    for i in range(1, g + 1):
        bl.set_pair(bl.e(i), bl.f(r + i), delta)
    return bl


def build_odd(a: int, b: int, ctx: RingContext, wraparound: bool = True) -> UnitaryDM:
    """M_(a,b) for a + b odd, a <= b.

    ``wraparound=False`` drops the edge F(f_g) = e_1; the result then fails
    validation, which is how the cyclic reading of the indices is justified.
    """
    bl = _odd_builder(a, b, ctx, wraparound)
    A_F, B = bl.matrices()
    meta = {"family": "odd_direct", "k": None,
            "notes": "" if wraparound else "no wraparound"}
    return UnitaryDM(ctx, a, b, A_F, B, meta=meta)


def build_even_direct(a: int, b: int, ctx: RingContext) -> UnitaryDM:
    """The odd-case recipe applied verbatim with g even.

    F and the lengths are fine but the pairing cannot be compatible with F;
    validation fails on pairing compatibility.  Used as a negative example.
    """
    if (a + b) % 2:
        raise ValueError("expects a + b even")
    g = a + b
    # r = (g - 1) / 2 rounded down keeps the blocks disjoint
    bl = _odd_builder(a, b, ctx, check=False)
    A_F, B = bl.matrices()
    return UnitaryDM(ctx, a, b, A_F, B, meta={"family": "even_direct", "k": None,
                                              "notes": f"g = {g} is even"})


def build_flip_10(ctx: RingContext) -> UnitaryDM:
    """M_(1,0): M_(0,1) with the two graded pieces exchanged."""
    dm = build_odd(0, 1, ctx)
    swap = [1, 0]
    A_F = dm.A_F.submatrix(swap, swap)
    B = dm.B.submatrix(swap, swap)
    return UnitaryDM(ctx, 1, 0, A_F, B, labels=(["f1"], ["e1"]),
                     meta={"family": "flip_10", "k": None, "notes": ""})


def build_deformed(a: int, b: int, k: int, ctx: RingContext) -> UnitaryDM:
    """kM_(a,b): M_(a,b) with F_k(f_a) = e_{a+1} + p^k e_1 and
    F_k(e_{r+1}) = p f_{r+1} - p^(k+1) f_{r+a+1}.  V_k is derived.

    k = 0 is accepted (the a = b cutoff witness uses it); it needs a >= 1.
    """
    if a < 1:
        raise ValueError("deformation needs a >= 1")
    if k < 0:
        raise ValueError("deformation level must be nonnegative")
    if k + 1 >= ctx.N:
        raise ValueError("deformation level too large for the working precision")
    bl = _odd_builder(a, b, ctx)
    g = a + b
    r = (g - 1) // 2
    p = ctx.p
    bl.set_F(bl.f(a), [(1, bl.e(a + 1)), (p ** k, bl.e(1))])
    bl.set_F(bl.e(r + 1), [(p, bl.f(r + 1)), (-p ** (k + 1), bl.f(r + a + 1))])
    A_F, B = bl.matrices()
    return UnitaryDM(ctx, a, b, A_F, B, meta={"family": "deformed", "k": k, "notes": ""})


def build_even_product(a: int, b: int, ctx: RingContext) -> UnitaryDM:
    """M_(a,b) = M_(a,b-1) + M_(0,1) for a < b, a + b even."""
    if not (0 <= a < b and (a + b) % 2 == 0):
        raise ValueError(f"even product needs a < b and a + b even, got ({a},{b})")
    dm = direct_sum(build_odd(a, b - 1, ctx), build_odd(0, 1, ctx))
    dm.meta = {"family": "even_product", "k": None, "notes": ""}
    return dm


def build_parallel(a: int, ctx: RingContext) -> UnitaryDM:
    """M_(a,a) = M_(a-1,a) + M_(1,0) for a >= 1."""
    if a < 1:
        raise ValueError("parallel product needs a >= 1")
    dm = direct_sum(build_odd(a - 1, a, ctx), build_flip_10(ctx))
    dm.meta = {"family": "parallel_product", "k": None, "notes": ""}
    return dm


def build_standard(a: int, b: int, ctx: RingContext) -> UnitaryDM:
    """The maximal-height model X_(a,b) for any a <= b (odd, even or parallel)."""
    if a > b:
        raise ValueError("expects a <= b")
    if (a + b) % 2:
        return build_odd(a, b, ctx)
    if a == b:
        return build_parallel(a, ctx)
    return build_even_product(a, b, ctx)


def build_height_realization(q: int, a: int, b: int, ctx: RingContext) -> UnitaryDM:
    """X_(q,b) + (a - q) copies of X_(1,0): signature (a, b), minimal height q."""
    if not 0 <= q <= a <= b:
        raise ValueError(f"need 0 <= q <= a <= b, got q={q}, ({a},{b})")
    if a == b and q > a - 1:
        raise ValueError("for a = b the height is at most a - 1")
    dm = build_standard(q, b, ctx)
    flip = build_flip_10(ctx)
    for _ in range(a - q):
        dm = direct_sum(dm, flip)
    dm.meta = {"family": "height_realization", "k": None, "notes": f"q={q}"}
    return dm


@dataclass(frozen=True)
class FamilySpec:
    family: str
    a: int
    b: int
    p: int = 3
    N: int | None = None
    k: int | None = None
    q: int | None = None

    def check(self):
        a, b, g = self.a, self.b, self.a + self.b
        fam = self.family
        if fam not in FAMILIES:
            raise ValueError(f"unknown family {fam!r}")
        if fam == "odd_direct" and not (0 <= a <= b and g % 2):
            raise ValueError("odd_direct needs a <= b and a + b odd")
        if fam == "deformed" and not (1 <= a <= b and g % 2 and self.k is not None and self.k >= 0):
            raise ValueError("deformed needs 1 <= a <= b, a + b odd and k >= 0")
        if fam == "parallel_product" and not (a == b >= 1):
            raise ValueError("parallel_product needs a = b >= 1")
        if fam == "even_product" and not (0 <= a < b and g % 2 == 0):
            raise ValueError("even_product needs a < b and a + b even")
        if fam == "flip_10" and (a, b) != (1, 0):
            raise ValueError("flip_10 has signature (1,0)")
        if fam == "height_realization" and self.q is None:
            raise ValueError("height_realization needs q")

    def context(self):
        return default_context(self.p, self.a, self.b, self.N)


def build_family(spec: FamilySpec, ctx: RingContext | None = None) -> UnitaryDM:
    spec.check()
    ctx = ctx or spec.context()
    fam = spec.family
    if fam == "odd_direct":
        return build_odd(spec.a, spec.b, ctx)
    if fam == "even_product":
        return build_even_product(spec.a, spec.b, ctx)
    if fam == "parallel_product":
        return build_parallel(spec.a, ctx)
    if fam == "deformed":
        return build_deformed(spec.a, spec.b, spec.k, ctx)
    if fam == "flip_10":
        return build_flip_10(ctx)
    return build_height_realization(spec.q, spec.a, spec.b, ctx)


build_product_families = build_family

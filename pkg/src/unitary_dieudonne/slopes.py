"""Newton slope information from iterated Frobenius.

With M standard, the matrix of F^n is P_n = A_F sigma(A_F) ... sigma^(n-1)(A_F)
and F^n M = P_n M.  Writing l_n for the least entry valuation of P_n, the
sequence l_n is superadditive, so s_n = l_n / n increases to the first
Newton slope: every sample is a lower bound, and the limit is the slope.

Exact statements come from two certificates:

* an exact period, P_n = p^c U with U invertible, gives F^n M = p^c M and
  hence an isoclinic module of slope c / n;
* the Newton polygon of det(1 - T P_m), m the residue degree, whose segment
  slopes divided by m are the Newton slopes of F (P_m is the matrix of the
  linear map F^m).  It is certified when every vertex coefficient has
  valuation below the working precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .dieudonne_module import UnitaryDM, chain_analysis
from .padic_ring import PrecisionError
from .semilinear import Matrix, column_hnf


def _frac_json(x):
    return None if x is None else [x.numerator, x.denominator]


class FrobeniusPowers:
    """Cache of P_1, P_2, ... built by successive multiplication."""

    def __init__(self, dm: UnitaryDM):
        self.dm = dm
        self.powers = [dm.A_F]

    def __getitem__(self, n) -> Matrix:
        if n < 1:
            raise ValueError("n must be positive")
        A = self.dm.A_F
        while len(self.powers) < n:
            k = len(self.powers)
            self.powers.append(self.powers[-1] @ A.frobenius(k))
        return self.powers[n - 1]


def _certified_min_valuation(mat: Matrix, what="matrix") -> int:
    v = mat.min_valuation()
    if v >= mat.prec:
        raise PrecisionError(f"{what} vanishes modulo p^{mat.prec}",
                             recommended_precision=2 * mat.ctx.N)
    return v


@dataclass
class SlopeReport:
    samples: list                 # (n, s_n) with s_n a Fraction
    lower_bound: Fraction         # max s_n: the first slope is at least this
    period: tuple | None          # (n0, c) with F^n0 M = p^c M
    first_slope: Fraction | None  # exact, from a period or the Newton polygon
    isoclinic: bool | None
    newton_slopes: list | None    # all slopes of F with multiplicity, when certified

    def to_json(self):
        return {
            "samples": [[n, _frac_json(s)] for n, s in self.samples],
            "lower_bound": _frac_json(self.lower_bound),
            "period": list(self.period) if self.period else None,
            "first_slope": _frac_json(self.first_slope),
            "isoclinic": self.isoclinic,
            "newton_slopes": ([_frac_json(s) for s in self.newton_slopes]
                              if self.newton_slopes is not None else None),
        }


def sample(powers: FrobeniusPowers, n: int) -> Fraction:
    return Fraction(_certified_min_valuation(powers[n], f"matrix of F^{n}"), n)


def exact_period(powers: FrobeniusPowers, n: int):
    """c if P_n = p^c U with U invertible, else None."""
    mat = powers[n]
    c = _certified_min_valuation(mat)
    unit = mat.divide_p(c)
    try:
        res = column_hnf(unit)
    except PrecisionError:
        return None
    return c if res.colength == 0 else None


def slope_samples(dm: UnitaryDM, n_max=None, newton=True) -> SlopeReport:
    n_max = 4 * dm.g if n_max is None else n_max
    powers = FrobeniusPowers(dm)
    samples, period = [], None
    for n in range(1, n_max + 1):
        samples.append((n, sample(powers, n)))
        if period is None:
            c = exact_period(powers, n)
            if c is not None:
                period = (n, c)
    lower = max(s for _, s in samples)
    first, iso, slopes = None, None, None
    if period is not None:
        first, iso = Fraction(period[1], period[0]), True
    if newton:
        slopes = newton_slopes(dm, powers)
        if slopes is not None:
            if first is not None and slopes[0] != first:
                raise AssertionError("period and Newton polygon disagree")
            first = slopes[0]
            iso = slopes[0] == slopes[-1]
    return SlopeReport(samples, lower, period, first, iso, slopes)


# ----------------------------------------------------------------------
# Newton polygon


def charpoly(mat: Matrix):
    """Coefficients c_0..c_n of det(T I - mat), by Berkowitz's division-free method."""
    ctx = mat.ctx
    n = mat.nrows
    add, mul = ctx.add, ctx.mul
    a = mat.rows
    # vector of coefficients, highest degree first
    poly = [ctx.one, ctx.neg(a[0][0])] if n else [ctx.one]
    for r in range(1, n):
        # Toeplitz column for the leading (r+1) x (r+1) block
        R = [a[r][j] for j in range(r)]           # row r, first r columns
        C = [a[i][r] for i in range(r)]           # column r, first r rows
        Apr = [row[:r] for row in a[:r]]
        col = [ctx.one, ctx.neg(a[r][r])]
        vec = C
        for _ in range(r):
            s = ctx.zero
            for x, y in zip(R, vec):
                s = add(s, mul(x, y))
            col.append(ctx.neg(s))
            vec = [_dot(ctx, row, vec) for row in Apr]
        # multiply Toeplitz(col) (size (r+2) x (r+1)) by poly
        new = []
        for i in range(r + 2):
            s = ctx.zero
            for j in range(min(i + 1, len(poly))):
                s = add(s, mul(col[i - j], poly[j]))
            new.append(s)
        poly = new
    return list(reversed(poly))


def _dot(ctx, row, vec):
    s = ctx.zero
    for x, y in zip(row, vec):
        if any(x) and any(y):
            s = ctx.add(s, ctx.mul(x, y))
    return s


def _lower_hull(points):
    hull = []
    for pt in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def newton_polygon(mat: Matrix):
    """Slopes (valuations of reciprocal roots) of det(1 - T mat), or None if uncertified."""
    ctx = mat.ctx
    coeffs = charpoly(mat)            # c_0 .. c_n of det(T - mat)
    n = len(coeffs) - 1
    # det(1 - T mat) = sum_i (-1)^i c_{n-i} T^i, same valuations
    prec = mat.prec
    vals = [min(ctx.valuation(coeffs[n - i]), prec) for i in range(n + 1)]
    points = [(i, v) for i, v in enumerate(vals)]
    hull = _lower_hull(points)
    if any(v >= prec for _, v in hull):
        return None
    slopes = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        slopes += [Fraction(y2 - y1, x2 - x1)] * (x2 - x1)
    return slopes


def newton_slopes(dm: UnitaryDM, powers: FrobeniusPowers | None = None):
    """Newton slopes of F (ascending, with multiplicity), or None if not certified."""
    powers = powers or FrobeniusPowers(dm)
    m = dm.ctx.m
    slopes = newton_polygon(powers[m])
    if slopes is None:
        return None
    return [s / m for s in slopes]


# ----------------------------------------------------------------------
# certificates for the deformed family


def projection_coefficient(dm: UnitaryDM, reps: int, powers: FrobeniusPowers | None = None) -> int:
    """Valuation of the e_{a+1}-coefficient of F^(2 a reps)(e_1)."""
    a = dm.a
    if a < 1 or reps < 1:
        raise ValueError("needs a >= 1 and reps >= 1")
    powers = powers or FrobeniusPowers(dm)
    entry = powers[2 * a * reps][a, 0]
    v = dm.ctx.valuation(entry)
    if v >= powers[2 * a * reps].prec:
        raise PrecisionError("projection coefficient vanishes at working precision",
                             recommended_precision=2 * dm.ctx.N)
    return v


def deformation_bound_checks(dm: UnitaryDM, k: int, m_max=4):
    """For m = 1..m_max: (m, s_{2am}, k(m-1)/(2am), s_{2am} <= bound)."""
    powers = FrobeniusPowers(dm)
    a = dm.a
    out = []
    for m in range(1, m_max + 1):
        n = 2 * a * m
        s = sample(powers, n)
        bound = Fraction(k * (m - 1), n)
        out.append((m, s, bound, s <= bound))
    return out


def not_supersingular_certificate(dm: UnitaryDM, n_max=None, analyses=None):
    """Evidence that some Newton slope differs from 1/2, or None.

    Tried in order: an exact period of slope != 1/2; a tau-chain that left
    p^-min(a,b) M_i (a supersingular module keeps every T_i, S_i inside that
    lattice); a certified Newton polygon with first slope < 1/2.  The first
    Newton slope is attached whenever it can be certified.
    """
    powers = FrobeniusPowers(dm)
    first = None
    try:
        slopes = newton_slopes(dm, powers)
        first = slopes[0] if slopes else None
    except PrecisionError:
        slopes = None

    def with_slope(cert):
        if first is not None:
            cert["first_slope"] = _frac_json(first)
        return cert

    n_max = 4 * dm.g if n_max is None else n_max
    for n in range(1, n_max + 1):
        try:
            c = exact_period(powers, n)
        except PrecisionError:
            break
        if c is not None:
            if Fraction(c, n) != Fraction(1, 2):
                return with_slope({"kind": "exact_period", "n": n, "c": c,
                                   "slope": _frac_json(Fraction(c, n))})
            break
    if analyses is None:
        analyses = [chain_analysis(dm, s) for s in (0, 1)]
    for ca in analyses:
        if ca.status == "budget_exceeded":
            return with_slope({"kind": "chain_budget", "side": ca.side,
                               "step": len(ca.lattices) - 2,
                               "denominator": ca.final.denom, "budget": ca.budget})
    if first is not None and first < Fraction(1, 2):
        return with_slope({"kind": "newton_polygon",
                           "slopes": [_frac_json(s) for s in slopes]})
    return None

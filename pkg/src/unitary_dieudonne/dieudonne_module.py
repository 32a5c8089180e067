"""Unitary Dieudonne modules: axioms, tau, lattice chains and minimal height.

Coordinates: the basis is e_1..e_g (spanning M_0) followed by f_1..f_g
(spanning M_1).  Column j of ``A_F`` holds F(basis_j), so
F(v) = A_F sigma(v) and V = p F^{-1} has matrix p sigma^{-1}(A_F^{-1}).
``B[i][j]`` is <basis_i, basis_j>.

Everything in the chain analysis happens inside one graded piece at a
time, in g coordinates.  On M_0 the operator tau = p^{-1} F^2 has matrix
A_01 sigma(A_10) and twist 2, and the twisted form
<<x, y>> = <x, F y> has Gram matrix B_01 A_10 (sigma-semilinear in y).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .lattice import Lattice, NotContainedError, PairingContext, is_adjacent
from .padic_ring import PrecisionError, RingContext
from .semilinear import Matrix, SemilinearMap


class UnitaryDM:
    """(M, F, V, <,>, M_0 + M_1) of signature (a, b) with g = a + b.

    Nothing is checked on construction; call :func:`validate`.
    """

    def __init__(self, ctx: RingContext, a: int, b: int, A_F: Matrix, B: Matrix,
                 labels=None, meta=None):
        self.ctx = ctx
        self.a = a
        self.b = b
        self.A_F = A_F
        self.B = B
        g = a + b
        if labels is None:
            labels = ([f"e{i}" for i in range(1, g + 1)], [f"f{i}" for i in range(1, g + 1)])
        self.labels = (list(labels[0]), list(labels[1]))
        self.meta = dict(meta or {})

    @property
    def g(self):
        return self.a + self.b

    def __repr__(self):
        fam = self.meta.get("family", "custom")
        return f"UnitaryDM({fam}, a={self.a}, b={self.b}, p={self.ctx.p}, N={self.ctx.N})"

    # ------------------------------------------------------------------
    # blocks and derived operators

    def _idx(self, side):
        g = self.g
        return range(0, g) if side == 0 else range(g, 2 * g)

    def f_block(self, target, source) -> Matrix:
        """Block of A_F mapping M_source into M_target."""
        return self.A_F.submatrix(self._idx(target), self._idx(source))

    def b_block(self, left, right) -> Matrix:
        return self.B.submatrix(self._idx(left), self._idx(right))

    @cached_property
    def F(self) -> SemilinearMap:
        return SemilinearMap(self.A_F, 1, 0)

    @cached_property
    def V(self) -> SemilinearMap:
        """p F^{-1}; its pexp is negative exactly when V fails to be integral."""
        return self.F.inverse().scaled(1).normalized()

    @cached_property
    def A_V(self) -> Matrix:
        v = self.V
        if v.pexp < 0:
            raise ArithmeticError("V = p F^{-1} does not preserve M")
        return v.integral_matrix()

    def tau(self, side=0) -> SemilinearMap:
        """tau = p^{-1} F^2 restricted to (M_side)_Q, in g coordinates."""
        other = 1 - side
        mat = self.f_block(side, other) @ self.f_block(other, side).frobenius(1)
        return SemilinearMap(mat, 2, -1)

    def tau_full(self) -> SemilinearMap:
        return SemilinearMap(self.A_F @ self.A_F.frobenius(1), 2, -1)

    def pairing_context(self, side=0) -> PairingContext:
        """<<x, y>> = <x, F y> on M_side."""
        gram = self.b_block(side, 1 - side) @ self.f_block(1 - side, side)
        return PairingContext(gram, 1)

    def graded_lattice(self, side=0) -> Lattice:
        return Lattice.standard(self.ctx, self.g)

    def f_image(self, source) -> Lattice:
        """F(M_source) inside M_{1-source}, in g coordinates."""
        return Lattice.from_generators(self.f_block(1 - source, source))

    def dual(self, lat: Lattice, side=0) -> Lattice:
        return self.pairing_context(side).dual(lat)

    def recommended_precision(self) -> int:
        return recommended_precision(self.a, self.b)


def recommended_precision(a: int, b: int) -> int:
    """Working precision that covers every chain computation for signature (a, b).

    Chain lattices stay between p^(budget+2) M_i and p^-(budget+2) M_i with
    budget = min(a, b); generator matrices add at most g to the colength and
    the inverses of tau and of the Gram matrix cost at most g more digits.
    """
    g = a + b
    budget = min(a, b)
    return g * (2 * budget + 5) + 2 * g + 4


def check_precision(dm: UnitaryDM):
    need = recommended_precision(dm.a, dm.b)
    if dm.ctx.N < need:
        raise PrecisionError(f"precision {dm.ctx.N} is below the {need} digits the chain "
                             f"analysis may need for signature ({dm.a},{dm.b})",
                             recommended_precision=need)


# ----------------------------------------------------------------------
# validation


AXIOMS = ("shape", "frobenius_verschiebung", "perfect", "alternating", "pairing_compat",
          "isotropic", "homogeneous", "signature_lengths")


@dataclass
class ValidationReport:
    checks: dict
    messages: dict = field(default_factory=dict)
    # checks that failed only because the working precision ran out
    precision_limited: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    @property
    def failed(self):
        return [k for k in AXIOMS if k in self.checks and not self.checks[k]]

    def to_json(self):
        out = {"ok": self.ok, "checks": dict(self.checks), "failed": self.failed,
               "messages": dict(self.messages)}
        if self.precision_limited:
            out["precision_limited"] = dict(self.precision_limited)
        return out


def validate(dm: UnitaryDM) -> ValidationReport:
    """Check each axiom separately and report all of them.

    Precision trouble in a single check is recorded as that check failing
    with a message; this function itself does not raise on bad input.
    """
    checks, msgs, limited = {}, {}, {}
    g = dm.g
    n = 2 * g

    def run(name, fn):
        try:
            ok, msg = fn()
        except PrecisionError as exc:
            ok, msg = False, f"PrecisionError: {exc}"
            limited[name] = exc.recommended_precision or 2 * dm.ctx.N
        except (ArithmeticError, ValueError) as exc:
            ok, msg = False, f"{type(exc).__name__}: {exc}"
        checks[name] = bool(ok)
        if msg:
            msgs[name] = msg

    def shape():
        if dm.a < 0 or dm.b < 0 or g < 1:
            return False, "signature must be nonnegative with a + b >= 1"
        if dm.A_F.shape != (n, n) or dm.B.shape != (n, n):
            return False, f"expected {n}x{n} matrices"
        if len(dm.labels[0]) != g or len(dm.labels[1]) != g:
            return False, "basis labels do not match the rank"
        if dm.A_F.ctx != dm.ctx or dm.B.ctx != dm.ctx:
            return False, "matrices live over a different ring"
        return True, ""

    run("shape", shape)
    if not checks["shape"]:
        for name in AXIOMS[1:]:
            checks[name] = False
            msgs[name] = "skipped: malformed input"
        return ValidationReport(checks, msgs)

    p_id = Matrix.identity(dm.ctx, n).scale_p(1)

    def fv():
        v = dm.V
        if v.pexp < 0:
            return False, "p F^{-1} is not integral, so V does not preserve M"
        a_v = v.integral_matrix()
        fv_ = dm.A_F @ a_v.frobenius(1)
        vf_ = a_v @ dm.A_F.frobenius(-1)
        if not (fv_.equals_mod_prec(p_id) and vf_.equals_mod_prec(p_id)):
            return False, "F V or V F differs from p"
        return True, ""

    def perfect():
        d = dm.B.determinant_valuation()
        return d == 0, "" if d == 0 else f"determinant has valuation {d}"

    def alternating():
        neg_t = -dm.B.transpose()
        if not dm.B.equals_mod_prec(neg_t):
            return False, "B^T != -B"
        if any(any(dm.B[i, i]) for i in range(n)):
            return False, "nonzero diagonal"
        return True, ""

    def compat():
        # <Fx, Fy> = p sigma(<x, y>), i.e. <Fx, y> = sigma(<x, Vy>) with V = p F^{-1}
        lhs = dm.A_F.transpose() @ dm.B @ dm.A_F
        rhs = dm.B.frobenius(1).scale_p(1)
        ok = lhs.equals_mod_prec(rhs)
        return ok, "" if ok else "A_F^T B A_F != p sigma(B)"

    def isotropic():
        ok = dm.b_block(0, 0).is_zero() and dm.b_block(1, 1).is_zero()
        return ok, "" if ok else "M_0 or M_1 is not totally isotropic"

    def homogeneous():
        ok = dm.f_block(0, 0).is_zero() and dm.f_block(1, 1).is_zero()
        return ok, "" if ok else "F does not exchange M_0 and M_1"

    def lengths():
        a, b = dm.a, dm.b
        m0 = Lattice.standard(dm.ctx, g)
        fm1 = dm.f_image(1)   # inside M_0
        fm0 = dm.f_image(0)   # inside M_1
        got = {}
        for name, small, big in (("pM0 in FM1", m0.scale(1), fm1), ("FM1 in M0", fm1, m0),
                                 ("pM1 in FM0", m0.scale(1), fm0), ("FM0 in M1", fm0, m0)):
            try:
                got[name] = small.index_in(big)
            except NotContainedError:
                got[name] = None
        want = {"pM0 in FM1": b, "FM1 in M0": a, "pM1 in FM0": a, "FM0 in M1": b}
        bad = [f"{k}: expected {want[k]}, got {got[k]}" for k in want if got[k] != want[k]]
        return not bad, "; ".join(bad)

    run("frobenius_verschiebung", fv)
    run("perfect", perfect)
    run("alternating", alternating)
    run("pairing_compat", compat)
    run("isotropic", isotropic)
    run("homogeneous", homogeneous)
    run("signature_lengths", lengths)
    return ValidationReport(checks, msgs, limited)


# ----------------------------------------------------------------------
# duality chains


@dataclass
class ChainConditionReport:
    indices: dict          # chain name -> (lower index, upper index) or None
    expected: dict

    @property
    def ok(self):
        return all(self.indices[k] == self.expected[k] for k in self.expected)

    @property
    def failed(self):
        return [k for k in self.expected if self.indices[k] != self.expected[k]]

    def to_json(self):
        return {"ok": self.ok,
                "indices": {k: list(v) if v else None for k, v in self.indices.items()},
                "expected": {k: list(v) for k, v in self.expected.items()},
                "failed": self.failed}


def _chain_indices(low, mid, high):
    try:
        return (low.index_in(mid), mid.index_in(high))
    except NotContainedError:
        return None


def chain_conditions(dm: UnitaryDM) -> ChainConditionReport:
    """pM_i^v <= M_i <= M_i^v and pM_i^v <= tau(M_i) <= M_i^v with their indices."""
    indices, expected = {}, {}
    for side in (0, 1):
        m = Lattice.standard(dm.ctx, dm.g)
        dual = dm.dual(m, side)
        tm = m.map_image(dm.tau(side))
        want = (dm.a, dm.b) if side == 0 else (dm.b, dm.a)
        indices[f"M{side}"] = _chain_indices(dual.scale(1), m, dual)
        indices[f"tau(M{side})"] = _chain_indices(dual.scale(1), tm, dual)
        expected[f"M{side}"] = want
        expected[f"tau(M{side})"] = want
    return ChainConditionReport(indices, expected)


# ----------------------------------------------------------------------
# tau-orbit chains


@dataclass
class ChainAnalysis:
    """T_{-1}, T_0 = M_side, T_{i+1} = T_i + tau(T_i) and the index bookkeeping.

    ``status`` is "stable" (``lattices[i + 1]`` is T_i, stabilised at index
    ``stabilization``), "budget_exceeded" (some T_i left p^-budget M_side,
    impossible for supersingular modules) or "max_iter".
    ``c[i]`` = index(T_{i-1}, T_i) for i = 0..m+1 and
    ``d[i]`` = index(tau(T_{i-1}), T_i cap tau(T_i)) for i = 0..m.
    """

    side: int
    status: str
    stabilization: int | None
    lattices: list
    c: list
    d: list
    budget: int
    iterations: int

    @property
    def stable(self):
        return self.status == "stable"

    def T(self, i) -> Lattice:
        return self.lattices[i + 1]

    @property
    def final(self) -> Lattice:
        return self.lattices[-1]

    def to_json(self):
        name_c, name_d = ("c", "d") if self.side == 0 else ("g", "h")
        return {
            "side": self.side,
            "status": self.status,
            "stabilization": self.stabilization,
            name_c: list(self.c),
            name_d: list(self.d),
            "denominators": [lat.denom for lat in self.lattices],
            "budget": self.budget,
            "iterations": self.iterations,
        }


def default_max_iter(dm: UnitaryDM) -> int:
    return 4 * dm.g * dm.ctx.m


def chain_analysis(dm: UnitaryDM, side=0, max_iter=None) -> ChainAnalysis:
    check_precision(dm)
    max_iter = default_max_iter(dm) if max_iter is None else max_iter
    tau = dm.tau(side)
    m0 = Lattice.standard(dm.ctx, dm.g)
    budget = min(dm.a, dm.b)
    t_minus = dm.dual(m0, side).scale(1).preimage(tau)
    lattices = [t_minus, m0]
    images = [t_minus.map_image(tau), m0.map_image(tau)]
    status, stab = "max_iter", None
    it = 0
    while it < max_iter:
        cur, cur_img = lattices[-1], images[-1]
        if cur.denom > budget:
            status = "budget_exceeded"
            break
        nxt = cur.sum(cur_img)
        it += 1
        if nxt == cur:
            status, stab = "stable", len(lattices) - 2
            lattices.append(nxt)
            images.append(cur_img)
            break
        lattices.append(nxt)
        images.append(nxt.map_image(tau))

    # c_i for every recorded step, d_i where T_i and tau(T_i) are both recorded
    c = [lattices[i].index_in(lattices[i + 1]) for i in range(len(lattices) - 1)]
    top = len(lattices) - 2 if status == "stable" else len(lattices) - 1
    d = []
    for i in range(top):
        inter = lattices[i + 1].intersect(images[i + 1])
        d.append(images[i].index_in(inter))
    return ChainAnalysis(side, status, stab, lattices, c, d, budget, it)


def chain_invariants(dm: UnitaryDM, ca: ChainAnalysis) -> dict:
    """The accounting identities that hold on a stabilised chain."""
    start = dm.a if ca.side == 0 else dm.b
    out = {
        "c0": ca.c[0] == start,
        "recursion": all(ca.c[i + 1] == ca.c[i] - ca.d[i] for i in range(len(ca.d))),
        "adjacent": all(is_adjacent(ca.lattices[i], ca.lattices[i + 1])
                        for i in range(len(ca.lattices) - 1)),
    }
    if ca.stable:
        out["terminal_zero"] = ca.c[-1] == 0
        out["sum_d"] = sum(ca.d) == start
    return out


def lemma_chain(dm: UnitaryDM, ca: ChainAnalysis) -> dict:
    """p^a T <= p T^v <= p M^v <=_a M <= T <= p^{1-a} T^v on a stabilised side-0 chain.

    Returns the index of every link (None where containment fails).
    """
    if not ca.stable:
        raise ValueError("chain did not stabilise")
    a = dm.a if ca.side == 0 else dm.b
    t = ca.final
    m = Lattice.standard(dm.ctx, dm.g)
    t_dual = dm.dual(t, ca.side)
    m_dual = dm.dual(m, ca.side)
    terms = [t.scale(a), t_dual.scale(1), m_dual.scale(1), m, t, t_dual.scale(1 - a)]
    names = ["p^a T", "p T^v", "p M^v", "M", "T", "p^(1-a) T^v"]
    links = {}
    for i in range(len(terms) - 1):
        key = f"{names[i]} <= {names[i + 1]}"
        try:
            links[key] = terms[i].index_in(terms[i + 1])
        except NotContainedError:
            links[key] = None
    return links


# ----------------------------------------------------------------------
# Lambda and minimal height


@dataclass
class MinimalHeightReport:
    lambda_sides: tuple          # (T_m, S_n) as lattices in g coordinates
    height: int
    side_heights: tuple
    iterations: tuple            # (m, n)
    bound: int

    @property
    def lambda_lattice(self) -> Lattice:
        """Lambda = T_m + S_n as a lattice in all 2g coordinates."""
        t, s = self.lambda_sides
        e = max(t.denom, s.denom)
        gens = Matrix.block_diag(t.hnf.scale_p(e - t.denom), s.hnf.scale_p(e - s.denom))
        return Lattice.from_generators(gens, e)

    def to_json(self):
        return {"height": self.height, "side_heights": list(self.side_heights),
                "m": self.iterations[0], "n": self.iterations[1], "bound": self.bound,
                "lambda": [lat.to_json() for lat in self.lambda_sides]}


class NotStabilizedError(RuntimeError):
    def __init__(self, message, analyses):
        super().__init__(message)
        self.analyses = analyses


class InternalConsistencyError(AssertionError):
    pass


def height_bound(a: int, b: int) -> int:
    """Largest minimal height a supersingular module of signature (a, b) can have."""
    lo, hi = min(a, b), max(a, b)
    return lo - 1 if lo == hi and lo >= 1 else lo


def lambda_and_height(dm: UnitaryDM, max_iter=None) -> MinimalHeightReport:
    sides = [chain_analysis(dm, s, max_iter) for s in (0, 1)]
    if not all(ca.stable for ca in sides):
        raise NotStabilizedError("tau-orbit did not stabilise: "
                                 + ", ".join(ca.status for ca in sides), sides)
    t, s = sides[0].final, sides[1].final
    m = Lattice.standard(dm.ctx, dm.g)
    # M_i is standard and contained in Lambda_i, so the exponent is the denominator
    side_heights = tuple(max(0, lat.denom) for lat in (t, s))
    for lat, r in zip((t, s), side_heights):
        assert m.is_subset(lat) and lat.scale(r).is_subset(m)
    height = max(side_heights)
    bound = height_bound(dm.a, dm.b)
    if height > bound:
        raise InternalConsistencyError(
            f"minimal height {height} exceeds the bound {bound} for signature ({dm.a},{dm.b})")
    return MinimalHeightReport((t, s), height, side_heights,
                               (sides[0].stabilization, sides[1].stabilization), bound)


def is_superspecial(dm: UnitaryDM) -> bool:
    """tau(M) = M on both graded pieces (equivalently F M = V M)."""
    m = Lattice.standard(dm.ctx, dm.g)
    return all(m.map_image(dm.tau(side)) == m for side in (0, 1))


@dataclass
class SupersingularVerdict:
    status: str                  # "yes" | "no" | "inconclusive"
    report: MinimalHeightReport | None = None
    certificate: dict | None = None

    def to_json(self):
        out = {"status": self.status}
        if self.report is not None:
            out["height"] = self.report.height
        if self.certificate is not None:
            out["certificate"] = self.certificate
        return out


def is_supersingular(dm: UnitaryDM, max_iter=None) -> SupersingularVerdict:
    """yes when both tau-chains stabilise; no with a certificate; else inconclusive."""
    sides = [chain_analysis(dm, s, max_iter) for s in (0, 1)]
    if all(ca.stable for ca in sides):
        return SupersingularVerdict("yes", lambda_and_height(dm, max_iter))
    from .slopes import not_supersingular_certificate
    cert = not_supersingular_certificate(dm, analyses=sides)
    if cert is not None:
        return SupersingularVerdict("no", certificate=cert)
    return SupersingularVerdict("inconclusive")


# ----------------------------------------------------------------------
# constructions on modules


def direct_sum(dm1: UnitaryDM, dm2: UnitaryDM) -> UnitaryDM:
    """Block sum; basis order e(dm1), e(dm2), f(dm1), f(dm2)."""
    if dm1.ctx != dm2.ctx:
        raise ValueError("modules are defined over different rings")
    g1, g2 = dm1.g, dm2.g
    g = g1 + g2
    # position of each old coordinate in the new basis
    pos1 = list(range(g1)) + list(range(g, g + g1))
    pos2 = list(range(g1, g)) + list(range(g + g1, 2 * g))
    z = dm1.ctx.zero

    def combine(m1, m2):
        rows = [[z] * (2 * g) for _ in range(2 * g)]
        for mat, pos in ((m1, pos1), (m2, pos2)):
            for i, pi in enumerate(pos):
                for j, pj in enumerate(pos):
                    rows[pi][pj] = mat[i, j]
        return Matrix(dm1.ctx, rows, min(m1.prec, m2.prec))

    labels = (_relabel(dm1.labels[0], dm2.labels[0]), _relabel(dm1.labels[1], dm2.labels[1]))
    meta = {"family": "direct_sum",
            "summands": [dm1.meta.get("family", "custom"), dm2.meta.get("family", "custom")]}
    return UnitaryDM(dm1.ctx, dm1.a + dm2.a, dm1.b + dm2.b,
                     combine(dm1.A_F, dm2.A_F), combine(dm1.B, dm2.B), labels, meta)


def _relabel(first, second):
    if set(first).isdisjoint(second):
        return list(first) + list(second)
    return [f"{x}.1" for x in first] + [f"{x}.2" for x in second]


def truncation_congruent(dm1: UnitaryDM, dm2: UnitaryDM, k: int) -> bool:
    """Presentations agree modulo p^k: same splitting, F and pairing congruent.

    A sufficient witness that the p^k-torsion groups are isomorphic with
    their action and polarization; it is not an isomorphism search.
    """
    if dm1.ctx != dm2.ctx:
        raise ValueError("modules are defined over different rings")
    if (dm1.a, dm1.b) != (dm2.a, dm2.b) or dm1.A_F.shape != dm2.A_F.shape:
        raise ValueError("modules have different shapes or signatures")
    if k <= 0:
        return True
    return dm1.A_F.congruent(dm2.A_F, k) and dm1.B.congruent(dm2.B, k)

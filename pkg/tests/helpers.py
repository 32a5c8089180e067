"""Random lattice generators shared by the lattice and acceptance tests."""

from __future__ import annotations

from oracles import QuotientOracle
from unitary_dieudonne.lattice import Lattice
from unitary_dieudonne.padic_ring import make_context

WINDOW = 3


def random_window_lattice(ctx, n, rng, max_len, w=WINDOW):
    """A random L with p^w W^n <= L <= p^-w W^n and length(L / p^w W^n) <= max_len."""
    p, K = ctx.p, ctx.p ** (2 * w)
    base = Lattice.standard(ctx, n).scale(w)
    while True:
        cols = []
        for i in range(n):
            col = [[0] * ctx.m for _ in range(n)]
            col[i][0] = K
            cols.append(col)
        for _ in range(rng.randint(1, n + 1)):
            t = min(rng.choice([1, 2, 3, 3, 4, 4, 5, 5, 6]), 2 * w)
            cols.append([[rng.randrange(p ** (2 * w - t)) * p ** t for _ in range(ctx.m)]
                         for _ in range(n)])
        lat = Lattice.from_columns(ctx, cols, w)
        if base.index_in(lat) <= max_len:
            return lat


def lattice_columns(lat):
    return [lat.hnf.column(j) for j in range(lat.rank)], lat.denom


def oracle_instances(count, rng, grid=((3, 1), (3, 2), (5, 1), (5, 2)), ranks=(1, 2, 3)):
    """Yield (oracle, A, B) triples cycling through the grid until ``count`` are produced."""
    made = 0
    while made < count:
        for p, m in grid:
            ctx = make_context(p, m, 4 * WINDOW)
            for n in ranks:
                # |A + B / p^w W^n| = p^(m len) stays below about 2 * 10^4
                max_len = (9 if p == 3 else 6) // (2 * m)
                oracle = QuotientOracle(p, m, n, WINDOW, ctx.modulus)
                a = random_window_lattice(ctx, n, rng, max_len)
                b = random_window_lattice(ctx, n, rng, max_len)
                yield oracle, a, b
                made += 1
                if made >= count:
                    return


def check_against_oracle(oracle, a, b):
    """Compare sum, intersection and indices with the enumeration; returns a list of failures."""
    ga = oracle.generators(*lattice_columns(a))
    gb = oracle.generators(*lattice_columns(b))
    sa, sb = oracle.span(ga), oracle.span(gb)
    s, i = a + b, a.intersect(b)
    true_sum = oracle.sum(ga, gb)
    true_int = oracle.intersect(sa, sb)
    bad = []
    if not oracle.same(true_sum, oracle.lattice(*lattice_columns(s))):
        bad.append("sum")
    if not oracle.same(true_int, oracle.lattice(*lattice_columns(i))):
        bad.append("intersect")
    if i.index_in(a) != oracle.length(len(sa), len(true_int)):
        bad.append("index(A cap B, A)")
    if b.index_in(s) != oracle.length(len(true_sum), len(sb)):
        bad.append("index(B, A + B)")
    if a.index_in(Lattice.standard(a.ctx, a.rank).scale(-WINDOW)) != \
            oracle.length(oracle.p ** (2 * WINDOW * oracle.n * oracle.m), len(sa)):
        bad.append("index(A, p^-w W^n)")
    return bad

"""Independent reference computations used by the tests.

Nothing here calls the library's arithmetic: each oracle re-derives its
answer from first principles (exhaustive enumeration, integer word
expansion, polynomial arithmetic in sympy) so that agreement is evidence.
"""

from __future__ import annotations

import itertools

import numpy as np
import sympy


# ----------------------------------------------------------------------
# finite-quotient lattice oracle


class QuotientOracle:
    """Lattices L with p^w W^n <= L <= p^-w W^n, enumerated inside
    p^-w W^n / p^w W^n.

    An element x is stored as the integer vector of p^w x modulo p^(2w),
    coordinates flattened as (vector index, power of the generator).
    Multiplication by the generator uses the modulus directly.
    """

    def __init__(self, p, m, n, w, modulus):
        self.p, self.m, self.n, self.w = p, m, n, w
        self.K = p ** (2 * w)
        self.modulus = [int(c) for c in modulus]     # low to high, monic

    def times_x(self, coeffs):
        m, f = self.m, self.modulus
        if m == 1:
            return [(-f[0] * coeffs[0]) % self.K]
        top = coeffs[-1]
        shifted = [0] + list(coeffs[:-1])
        return [(shifted[i] - top * f[i]) % self.K for i in range(m)]

    def generators(self, columns, denom):
        """Z_p-module generators of p^-denom span(columns), as window vectors."""
        shift = self.w - denom
        if shift < 0:
            raise ValueError("lattice leaves the window")
        scale = self.p ** shift
        gens = []
        for col in columns:
            elems = [[(int(c) * scale) % self.K for c in entry] for entry in col]
            for _ in range(self.m):
                gens.append([c for entry in elems for c in entry])
                elems = [self.times_x(entry) for entry in elems]
        return gens

    def span(self, gens):
        """All Z-combinations of the generators modulo p^(2w), as a sorted array."""
        D = self.n * self.m
        S = np.zeros((1, D), dtype=np.int64)
        for g in gens:
            g = np.array(g, dtype=np.int64) % self.K
            if not g.any():
                continue
            # order of g in (Z/K)^D
            v = min(_val(int(c), self.p, 2 * self.w) for c in g)
            order = self.p ** (2 * self.w - v)
            if _contains(S, g):
                continue
            t = np.arange(order, dtype=np.int64)[:, None, None]
            S = ((S[None, :, :] + t * g[None, None, :]) % self.K).reshape(-1, D)
            S = np.unique(S, axis=0)
        return S

    def lattice(self, columns, denom):
        return self.span(self.generators(columns, denom))

    def sum(self, gens_a, gens_b):
        return self.span(list(gens_a) + list(gens_b))

    @staticmethod
    def intersect(sa, sb):
        return sa[np.isin(_void(sa), _void(sb))]

    @staticmethod
    def same(sa, sb):
        return len(sa) == len(sb) and np.array_equal(np.sort(_void(sa)), np.sort(_void(sb)))

    def length(self, size_big, size_small):
        """W-length of a quotient from the two group orders."""
        ratio = size_big // size_small
        assert ratio * size_small == size_big
        k = 0
        while ratio > 1:
            assert ratio % self.p == 0
            ratio //= self.p
            k += 1
        assert k % self.m == 0
        return k // self.m


def _val(c, p, cap):
    if c == 0:
        return cap
    k = 0
    while c % p == 0:
        c //= p
        k += 1
    return k


def _void(arr):
    arr = np.ascontiguousarray(arr)
    return arr.view(np.dtype((np.void, arr.dtype.itemsize * arr.shape[1]))).ravel()


def _contains(S, g):
    return bool(np.any(np.all(S == g[None, :], axis=1)))


# ----------------------------------------------------------------------
# residue-field search for delta


def brute_force_delta_residues(p, modulus):
    """All nonzero d in F_p[x]/(f) with d^p = -d, by direct polynomial arithmetic."""
    x = sympy.Symbol("x")
    f = sympy.Poly(list(reversed([int(c) for c in modulus])), x, modulus=p)
    m = f.degree()
    found = []
    for coeffs in itertools.product(range(p), repeat=m):
        if not any(coeffs):
            continue
        d = sympy.Poly(list(reversed(coeffs)), x, modulus=p)
        lhs = d ** p % f
        rhs = (-d) % f
        if lhs == rhs:
            found.append(tuple(coeffs))
    return found


# ----------------------------------------------------------------------
# operator tables straight from the defining formulas (1-based labels)


def odd_operator_table(a, b, p, k=None):
    """F (and D for the deformation) as dicts label -> [(int coeff, label)]."""
    g = a + b
    r = (g - 1) // 2
    F = {}
    for i in range(1, g + 1):
        F[("e", i)] = [(1, ("f", i))] if i <= a else [(p, ("f", i))]
    for j in range(1, g + 1):
        target = ("e", j % g + 1)
        F[("f", j)] = [(p, target)] if r + 1 <= j <= r + a else [(1, target)]
    D = {}
    if k is not None:
        D[("f", a)] = [(p ** k, ("e", 1))]
        D[("e", r + 1)] = [(-p ** (k + 1), ("f", r + a + 1))]
    return F, D


def word_expansion_coefficient(a, b, p, k, length, source=("e", 1), target=None):
    """Coefficient of ``target`` in (F + D)^length (source), summed over all words.

    The coefficients are plain integers so sigma acts trivially on them;
    every word is followed along its unique path.
    """
    F, D = odd_operator_table(a, b, p, k)
    target = target or ("e", a + 1)
    total = 0
    for word in itertools.product((F, D), repeat=length):
        coeff, vec = 1, source
        for op in reversed(word):          # rightmost letter acts first
            image = op.get(vec)
            if not image:
                coeff = 0
                break
            c, vec = image[0]
            coeff *= c
        if coeff and vec == target:
            total += coeff
    return total


def twisted_gram_odd(a, b, p):
    """<<e_i, e_j>> = <e_i, F e_j> for M_(a,b), as {(i, j): (int power of p, 'delta')}."""
    F, _ = odd_operator_table(a, b, p)
    g = a + b
    r = (g - 1) // 2
    gram = {}
    for i in range(1, g + 1):
        for j in range(1, g + 1):
            for c, (kind, idx) in F[("e", j)]:
                # <e_i, f_idx> = delta iff idx = r + i mod g
                if kind == "f" and (idx - 1) % g == (r + i - 1) % g:
                    gram[(i, j)] = c
    return gram


def valuation(n, p):
    if n == 0:
        return None
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k

"""Truncated unramified Witt vectors W(F_q)/p^N with their Frobenius.

W(F_q), q = p^m, is realised as Z_p[x]/(f) for a monic integer polynomial
f of degree m that is irreducible modulo p.  An element is a tuple of m
residues modulo p^N, the coefficients of 1, x, ..., x^(m-1).  Tuples are
used directly (no wrapper class) because every lattice computation in the
package runs through these functions in tight loops.

The Frobenius sigma fixes Z_p and sends x to the unique root of f that is
congruent to x^p modulo p; that root is Hensel-lifted to full precision.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Sequence

import sympy

RingElement = tuple


class PrecisionError(ArithmeticError):
    """Raised when a result cannot be certified at the working precision."""

    def __init__(self, message, recommended_precision=None):
        super().__init__(message)
        self.recommended_precision = recommended_precision


def _irreducible_mod_p(coeffs, p):
    # coeffs low-to-high, monic
    x = sympy.Symbol("x")
    poly = sympy.Poly(list(reversed(coeffs)), x, modulus=p)
    return poly.degree() == len(coeffs) - 1 and poly.is_irreducible


def _lex_residues(p, m):
    """All residue tuples (c_0, ..., c_{m-1}) ordered by (c_{m-1}, ..., c_0)."""
    for digits in itertools.product(range(p), repeat=m):
        yield tuple(reversed(digits))


def default_modulus(p, m):
    """Lexicographically least monic irreducible of degree m over F_p.

    Candidates x^m + c_{m-1} x^{m-1} + ... + c_0 are ordered by the tuple
    (c_{m-1}, ..., c_0).  Returns coefficients low-to-high, leading 1 included.
    """
    for low in _lex_residues(p, m):
        coeffs = low + (1,)
        if _irreducible_mod_p(coeffs, p):
            return coeffs
    raise ValueError(f"no irreducible polynomial of degree {m} over F_{p}")


@dataclass(frozen=True)
class RingContext:
    """The coefficient ring W(F_{p^m}) / p^N together with sigma."""

    p: int
    m: int
    N: int
    modulus: tuple
    frobenius_image: tuple = field(compare=False)
    q: int = field(compare=False)

    # ------------------------------------------------------------------
    # construction helpers

    def element(self, value) -> RingElement:
        """Coerce an int or a coefficient sequence into a reduced element."""
        if isinstance(value, int):
            return (value % self.q,) + (0,) * (self.m - 1)
        coeffs = tuple(int(c) % self.q for c in value)
        if len(coeffs) != self.m:
            raise ValueError(f"expected {self.m} coefficients, got {len(coeffs)}")
        return coeffs

    @property
    def zero(self) -> RingElement:
        return (0,) * self.m

    @property
    def one(self) -> RingElement:
        return (1,) + (0,) * (self.m - 1)

    @property
    def generator(self) -> RingElement:
        """The residue class of x (equal to the constant -f(0) when m = 1)."""
        if self.m == 1:
            return ((-self.modulus[0]) % self.q,)
        return (0, 1) + (0,) * (self.m - 2)

    def p_power(self, k) -> RingElement:
        return self.element(self.p ** k) if k < self.N else self.zero

    def random_element(self, rng: random.Random, bound=None) -> RingElement:
        bound = self.q if bound is None else bound
        return tuple(rng.randrange(bound) for _ in range(self.m))

    # ------------------------------------------------------------------
    # arithmetic

    def add(self, a, b):
        q = self.q
        return tuple((x + y) % q for x, y in zip(a, b))

    def sub(self, a, b):
        q = self.q
        return tuple((x - y) % q for x, y in zip(a, b))

    def neg(self, a):
        q = self.q
        return tuple((-x) % q for x in a)

    def scale(self, c: int, a):
        q = self.q
        return tuple((c * x) % q for x in a)

    def mul(self, a, b):
        return tuple(c % self.q for c in self.mul_exact(a, b))

    def mul_exact(self, a, b):
        """Product in Z[x]/(f) without reducing the coefficients mod p^N."""
        m = self.m
        if m == 1:
            return (a[0] * b[0],)
        if m == 2:
            c0, c1 = self.modulus[0], self.modulus[1]
            t = a[1] * b[1]
            return (a[0] * b[0] - c0 * t, a[0] * b[1] + a[1] * b[0] - c1 * t)
        prod = [0] * (2 * m - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        f = self.modulus
        for d in range(2 * m - 2, m - 1, -1):
            c = prod[d]
            if c:
                for i in range(m):
                    prod[d - m + i] -= c * f[i]
        return tuple(prod[:m])

    def power(self, a, e: int):
        result = self.one
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def is_zero(self, a) -> bool:
        return not any(a)

    def valuation(self, a) -> int:
        """Largest k with a in p^k W; the zero residue returns N (meaning >= N)."""
        return valuation_of_coeffs(a, self.p, self.N)

    def is_unit(self, a) -> bool:
        return any(c % self.p for c in a)

    def unit_part(self, a, v):
        """a / p^v, exact division of the representative (requires val(a) >= v)."""
        pv = self.p ** v
        return tuple(c // pv for c in a)

    def inverse(self, a):
        """Inverse of a unit, by inversion in F_q followed by Newton lifting."""
        if not self.is_unit(a):
            raise ZeroDivisionError("element is not a unit")
        # a^(p^m - 2) inverts a modulo p
        y = self.power(a, self.p ** self.m - 2)
        two = self.element(2)
        prec = 1
        while prec < self.N:
            y = self.mul(y, self.sub(two, self.mul(a, y)))
            prec *= 2
        return y

    def divide(self, a, b):
        """a / b where val(b) <= val(a); the quotient is known mod p^(N - val(b))."""
        vb = self.valuation(b)
        if vb >= self.N:
            raise ZeroDivisionError("division by zero residue")
        if self.valuation(a) < vb:
            raise ArithmeticError("quotient is not integral")
        return self.mul(self.unit_part(a, vb), self.inverse(self.unit_part(b, vb)))

    # ------------------------------------------------------------------
    # Frobenius

    def frobenius(self, a, twist: int = 1):
        """sigma^twist(a); twist may be negative since sigma has order m."""
        t = twist % self.m
        if t == 0 or self.m == 1:
            return a
        images = _frobenius_power_images(self, t)
        q = self.q
        out = [a[0]] + [0] * (self.m - 1)
        for i in range(1, self.m):
            c = a[i]
            if c:
                img = images[i]
                for j in range(self.m):
                    out[j] += c * img[j]
        return tuple(c % q for c in out)

    # ------------------------------------------------------------------
    # serialisation

    def to_json(self):
        return {
            "p": self.p,
            "m": self.m,
            "N": self.N,
            "modulus": [str(c) for c in self.modulus],
        }

    def element_to_json(self, a):
        return [str(c) for c in a]

    def element_from_json(self, data):
        return self.element([int(c) for c in data])


def valuation_of_coeffs(coeffs: Sequence[int], p: int, cap: int) -> int:
    v = cap
    for c in coeffs:
        if c:
            k = 0
            while c % p == 0 and k < v:
                c //= p
                k += 1
            if k < v:
                v = k
                if v == 0:
                    return 0
    return v


_FROB_CACHE: dict = {}


def _frobenius_power_images(ctx: RingContext, t: int):
    """Coordinates of sigma^t(x^i) for i = 0..m-1."""
    key = (ctx.p, ctx.m, ctx.N, ctx.modulus, t)
    cached = _FROB_CACHE.get(key)
    if cached is not None:
        return cached
    y = ctx.generator
    for _ in range(t):
        y = _eval_poly_basis(ctx, ctx.frobenius_image, y)
    images = [ctx.one]
    for _ in range(1, ctx.m):
        images.append(ctx.mul(images[-1], y))
    _FROB_CACHE[key] = images
    return images


def _eval_poly_basis(ctx, image_of_x, a):
    # a(image_of_x) for a in power-basis coordinates
    result = ctx.zero
    for c in reversed(a):
        result = ctx.add(ctx.mul(result, image_of_x), ctx.element(c))
    return result


def _eval_modulus(ctx, y):
    result = ctx.zero
    for c in reversed(ctx.modulus):
        result = ctx.add(ctx.mul(result, y), ctx.element(c))
    return result


def _eval_modulus_derivative(ctx, y):
    f = ctx.modulus
    result = ctx.zero
    for i in range(len(f) - 1, 0, -1):
        result = ctx.add(ctx.mul(result, y), ctx.element(i * f[i]))
    return result


def make_context(p: int, m: int, N: int, modulus: Sequence[int] | None = None) -> RingContext:
    """Build W(F_{p^m}) / p^N.

    The modulus defaults to :func:`default_modulus`; a user-supplied one must
    be monic of degree m and irreducible modulo p.  sigma(x) is the Hensel
    lift of x^p to a root of the modulus.
    """
    if not isinstance(p, int) or not sympy.isprime(p):
        raise ValueError(f"p must be prime, got {p!r}")
    if p == 2:
        raise ValueError("p = 2 is not supported")
    if m < 1 or N < 1:
        raise ValueError("need m >= 1 and N >= 1")
    q = p ** N
    if modulus is None:
        modulus = default_modulus(p, m)
    modulus = tuple(int(c) for c in modulus)
    if len(modulus) != m + 1 or modulus[-1] != 1:
        raise ValueError("modulus must be monic of degree m")
    if not _irreducible_mod_p(tuple(c % p for c in modulus), p):
        raise ValueError("modulus is not irreducible modulo p")

    proto = RingContext(p, m, N, modulus, frobenius_image=(0,) * m, q=q)
    if m == 1:
        return RingContext(p, m, N, modulus, frobenius_image=proto.generator, q=q)
    x = proto.generator
    y = proto.power(x, p)
    # Newton iteration y <- y - f(y)/f'(y); f'(y) is a unit because f is separable mod p
    for _ in range(N.bit_length() + 2):
        y = proto.sub(y, proto.mul(_eval_modulus(proto, y),
                                   proto.inverse(_eval_modulus_derivative(proto, y))))
    if any(_eval_modulus(proto, y)):
        raise PrecisionError("Hensel lifting of the Frobenius image did not converge")
    return RingContext(p, m, N, modulus, frobenius_image=y, q=q)


def context_from_json(data) -> RingContext:
    return make_context(int(data["p"]), int(data["m"]), int(data.get("N", data.get("precision"))),
                        [int(c) for c in data["modulus"]])


def teichmuller(ctx: RingContext, residue) -> RingElement:
    """Teichmuller lift of a residue class mod p, by iterating a -> a^(p^m)."""
    a = ctx.element(residue)
    for _ in range(ctx.N + 1):
        nxt = ctx.power(a, ctx.p ** ctx.m)
        if nxt == a:
            return a
        a = nxt
    raise PrecisionError("Teichmuller iteration did not stabilise")


def delta_element(ctx: RingContext) -> RingElement:
    """A unit delta with sigma(delta) = -delta.

    Takes the lexicographically least nonzero residue d with d^p = -d in F_q
    (same ordering as :func:`default_modulus`) and returns its Teichmuller
    lift.  Such a unit exists only for even m.
    """
    if ctx.m % 2:
        raise ValueError("no unit with sigma(delta) = -delta exists when m is odd")
    p = ctx.p
    residue_ctx = make_context(p, ctx.m, 1, ctx.modulus)
    for d in _lex_residues(p, ctx.m):
        if not any(d):
            continue
        if residue_ctx.frobenius(d) == residue_ctx.neg(d):
            delta = teichmuller(ctx, d)
            assert ctx.frobenius(delta) == ctx.neg(delta)
            return delta
    raise ValueError("no residue with d^p = -d found")  # unreachable for even m

"""Coefficient rings for all congruence checks.

Everything downstream computes over one of three coefficient rings:

* ``ZModRing``    -- integers mod p^s, elements are plain ints in [0, p^s)
* ``QuadExtRing`` -- the free rank-2 extension (Z/p^s)[u]/(u^2 - 3),
                     elements are pairs (c0, c1) meaning c0 + c1*u
* ``RationalRing`` -- exact rationals (fractions.Fraction), the
                     pre-reduction stage: series are generated exactly and
                     reduced mod p^s afterwards, never the other way round

The ring objects hold the modulus bookkeeping so elements can stay plain
ints/tuples/Fractions; that keeps the dense-series convolutions cheap.
Python ints are arbitrary precision, so moduli beyond one machine word
degrade gracefully instead of overflowing.
"""

from fractions import Fraction
from math import gcd, isqrt


class NotPIntegral(ArithmeticError):
    """A rational with p in the denominator was pushed into Z/p^s.

    This is a meaningful signal, not just an error: the series under test
    are claimed to be p-integral, so reduction must never raise this for
    the primes the statements quantify over.
    """

    def __init__(self, value, p):
        self.value = value
        self.p = p
        super().__init__(f"{value} is not p-integral at p={p}")


class NotInvertible(ArithmeticError):
    """Inversion of a non-unit (constant term divisible by p)."""


class PrecisionError(ValueError):
    """An operation was asked to produce coefficients beyond the stored cap."""


def is_prime(n):
    """Trial division; the moduli here are desk scale (p <= a few hundred)."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    for d in range(3, isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


def legendre_eps(p):
    """Return +1 if 3 is a square mod p, else -1 (Euler's criterion).

    p must be an odd prime different from 3.
    """
    if not is_prime(p) or p == 2:
        raise ValueError(f"p={p} is not an odd prime")
    if p == 3:
        raise ValueError("eps_p is undefined at p=3")
    e = pow(3, (p - 1) // 2, p)
    return 1 if e == 1 else -1


class ModulusContext:
    """The pair (p, s) with modulus p^s and the quadratic character of 3.

    ``denominators`` lists denominators that must be invertible mod p
    (the hypergeometric parameter denominators of whatever family the
    context will feed); construction fails if p divides any of them.
    """

    def __init__(self, p, s, denominators=()):
        if not is_prime(p) or p == 2:
            raise ValueError(f"p={p} is not an odd prime")
        if s < 1:
            raise ValueError(f"precision exponent s={s} must be >= 1")
        for d in denominators:
            if d % p == 0:
                raise ValueError(
                    f"p={p} divides declared denominator {d}; "
                    "the family is not p-integral at this prime")
        self.p = p
        self.s = s
        self.modulus = p ** s
        self.eps = legendre_eps(p) if p != 3 else 0

    def __repr__(self):
        return f"ModulusContext(p={self.p}, s={self.s})"

    def __eq__(self, other):
        return (isinstance(other, ModulusContext)
                and (self.p, self.s) == (other.p, other.s))

    def __hash__(self):
        return hash((self.p, self.s))

    def elevated(self, extra=1):
        """Same prime at precision s+extra (for exact division by p^extra)."""
        return ModulusContext(self.p, self.s + extra)


class ZModRing:
    """Arithmetic adapter for Z/p^s.  Elements are reduced plain ints."""

    kind = "zmod"

    def __init__(self, ctx):
        self.ctx = ctx
        self.modulus = ctx.modulus
        self.zero = 0
        self.one = 1

    def __repr__(self):
        return f"ZModRing({self.ctx.p}^{self.ctx.s})"

    def __eq__(self, other):
        return isinstance(other, ZModRing) and other.ctx == self.ctx

    def __hash__(self):
        return hash(("zmod", self.ctx))

    def of_int(self, n):
        return n % self.modulus

    def add(self, a, b):
        return (a + b) % self.modulus

    def sub(self, a, b):
        return (a - b) % self.modulus

    def mul(self, a, b):
        return (a * b) % self.modulus

    def neg(self, a):
        return (-a) % self.modulus

    def smul(self, n, a):
        return (n * a) % self.modulus

    def is_unit(self, a):
        return a % self.ctx.p != 0

    def inv(self, a):
        if a % self.ctx.p == 0:
            raise NotInvertible(f"{a} is divisible by {self.ctx.p}")
        return pow(a, -1, self.modulus)

    def from_fraction(self, q):
        return reduce_rational(q, self.ctx)

    def frob(self, a):
        # sigma is the identity on Z/p^s constants
        return a

    def div_exact_p(self, a):
        """a/p for a computed at this precision; caller tracks the lost digit."""
        if a % self.ctx.p != 0:
            raise ArithmeticError(f"inexact division of {a} by p={self.ctx.p}")
        return a // self.ctx.p

    def fmt(self, a):
        return str(a)


class QuadExtRing:
    """(Z/p^s)[u]/(u^2 - 3); elements are pairs (c0, c1) = c0 + c1*u.

    The ring is kept free of rank 2 even when 3 is a square mod p (the ring
    then splits, but every formula below stays valid).  Frobenius acts on
    constants by u -> eps_p * u, which satisfies sigma(r) = r^p mod p in
    both the split and the inert case.
    """

    kind = "quadext"

    def __init__(self, ctx):
        self.ctx = ctx
        self.modulus = ctx.modulus
        self.eps = ctx.eps
        self.zero = (0, 0)
        self.one = (1, 0)
        self.u = (0, 1)

    def __repr__(self):
        return f"QuadExtRing({self.ctx.p}^{self.ctx.s})[u]/(u^2-3)"

    def __eq__(self, other):
        return isinstance(other, QuadExtRing) and other.ctx == self.ctx

    def __hash__(self):
        return hash(("quadext", self.ctx))

    def of_int(self, n):
        return (n % self.modulus, 0)

    def embed(self, a):
        """Lift a plain Z/p^s element into the extension."""
        return (a % self.modulus, 0)

    def add(self, a, b):
        m = self.modulus
        return ((a[0] + b[0]) % m, (a[1] + b[1]) % m)

    def sub(self, a, b):
        m = self.modulus
        return ((a[0] - b[0]) % m, (a[1] - b[1]) % m)

    def mul(self, a, b):
        m = self.modulus
        a0, a1 = a
        b0, b1 = b
        return ((a0 * b0 + 3 * a1 * b1) % m, (a0 * b1 + a1 * b0) % m)

    def neg(self, a):
        m = self.modulus
        return ((-a[0]) % m, (-a[1]) % m)

    def smul(self, n, a):
        m = self.modulus
        return ((n * a[0]) % m, (n * a[1]) % m)

    def norm(self, a):
        # N(c0 + c1 u) = c0^2 - 3 c1^2, multiplicative into Z/p^s
        return (a[0] * a[0] - 3 * a[1] * a[1]) % self.modulus

    def is_unit(self, a):
        return self.norm(a) % self.ctx.p != 0

    def inv(self, a):
        n = self.norm(a)
        if n % self.ctx.p == 0:
            raise NotInvertible(f"{a} has norm divisible by {self.ctx.p}")
        ninv = pow(n, -1, self.modulus)
        m = self.modulus
        return ((a[0] * ninv) % m, (-a[1] * ninv) % m)

    def from_fraction(self, q):
        return (reduce_rational(q, self.ctx), 0)

    def frob(self, a):
        return (a[0], (self.eps * a[1]) % self.modulus)

    def div_exact_p(self, a):
        p = self.ctx.p
        if a[0] % p != 0 or a[1] % p != 0:
            raise ArithmeticError(f"inexact division of {a} by p={p}")
        return (a[0] // p, a[1] // p)

    def fmt(self, a):
        if a[1] == 0:
            return str(a[0])
        return f"{a[0]} + {a[1]}*u"


class RationalRing:
    """Exact-rational coefficients; the char-0 side of every computation."""

    kind = "rational"
    zero = Fraction(0)
    one = Fraction(1)

    def __repr__(self):
        return "RationalRing()"

    def __eq__(self, other):
        return isinstance(other, RationalRing)

    def __hash__(self):
        return hash("rational")

    def of_int(self, n):
        return Fraction(n)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def smul(self, n, a):
        return n * a

    def is_unit(self, a):
        return a != 0

    def inv(self, a):
        if a == 0:
            raise NotInvertible("0 is not invertible")
        return 1 / Fraction(a)

    def from_fraction(self, q):
        return Fraction(q)

    def frob(self, a):
        return a

    def fmt(self, a):
        return str(a)


QQ = RationalRing()


def reduce_rational(q, ctx):
    """Reduce an exact rational into Z/p^s.

    Raises NotPIntegral when p divides the denominator; for the series
    this toolkit generates that must never happen when p is coprime to
    the declared parameter denominators, so the exception doubles as a
    live p-integrality assertion.
    """
    q = Fraction(q)
    den = q.denominator
    if den % ctx.p == 0:
        raise NotPIntegral(q, ctx.p)
    return q.numerator * pow(den, -1, ctx.modulus) % ctx.modulus


def frobenius_const(x, ring):
    """sigma on a constant of the quadratic extension: c0 + c1 u -> c0 + eps c1 u."""
    return ring.frob(x)


def squares_mod(p):
    """The set {x^2 mod p}; brute-force oracle for quadratic residuosity."""
    return {x * x % p for x in range(p)}


def lcm(a, b):
    return a * b // gcd(a, b)

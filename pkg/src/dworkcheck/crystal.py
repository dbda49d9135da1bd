"""The one-variable Dwork-crystal engine for f = x^3 - x - c(t).

This module computes the Cartier matrix of the family from first
principles, with no hypergeometric input:

* split f^p = F_a + p*G_a with F_a = f^sigma(a + (x-a)^p), a in {0, 1, -1}
  (computed at precision p^(s+1) so the division by p is exact mod p^s);
* expand 1/f = f^(p-1) * sum_k (-p)^k G_a^k / F_a^(k+1) and push each term
  through the Cartier coefficient extraction, which turns denominators
  F_a^(k+1) into f^sigma(x)^(k+1);
* reduce the resulting differential form to the basis dx/f, x dx/f by the
  one-variable Griffiths pole-order reduction, using a Bezout
  decomposition Q = A f' + B f solved over the local ring (Z/p^s)[t]/(t^N).

It also provides the side channels the verification layer cross-checks
against: formal 1/x-expansions with the Katz exactness criterion, exact
local residues at x = 0 and x = +-1, period maps assembled from termwise
residues, and the Hasse-Witt matrix of the family.

Differential forms are stored level-wise: ``levels[l]`` is the polynomial
Q_l in the form sum_l l! * Q_l(x) * dx / f^(l+1), with the degree window
deg Q_l <= d(l+1) - 2.  The l! convention keeps the Griffiths recurrence
integral: l! Q dx/f^(l+1) == (l-1)! (lB - A') dx/f^l modulo exact forms.
"""

from fractions import Fraction
from math import comb, factorial

from .padic import (NotInvertible, QuadExtRing, RationalRing, ZModRing)
from .series import SeriesMatrix, TruncatedSeries

F = Fraction


class UnsupportedPrecision(ValueError):
    """s >= p would make the k! in the level expansion non-invertible."""


class MalformedForm(ValueError):
    """A differential form violated its pole-order degree window."""


class DiscriminantNotUnit(ArithmeticError):
    """Bezout elimination found no unit pivot; disc(f) is not a unit."""


# ---------------------------------------------------------------------------
# Polynomials in x over a truncated-series coefficient ring
# ---------------------------------------------------------------------------

class XPoly:
    """Dense polynomial in x whose coefficients are truncated t-series."""

    __slots__ = ("ring", "cap", "coeffs")

    def __init__(self, ring, cap, coeffs):
        self.ring = ring
        self.cap = cap
        self.coeffs = list(coeffs)
        self._trim()

    def _trim(self):
        while self.coeffs and self.coeffs[-1].is_zero():
            self.coeffs.pop()

    @classmethod
    def zero(cls, ring, cap):
        return cls(ring, cap, [])

    @classmethod
    def from_int_coeffs(cls, ring, cap, ints):
        return cls(ring, cap, [
            TruncatedSeries.constant(ring, ring.of_int(n), cap) for n in ints])

    @classmethod
    def x_power(cls, ring, cap, k):
        return cls.from_int_coeffs(ring, cap, [0] * k + [1])

    def copy(self):
        return XPoly(self.ring, self.cap, [c.copy() for c in self.coeffs])

    def degree(self):
        return len(self.coeffs) - 1

    def coeff(self, i):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return TruncatedSeries.zero(self.ring, self.cap)

    def is_zero(self):
        return not self.coeffs

    def __eq__(self, other):
        return (isinstance(other, XPoly) and self.ring == other.ring
                and self.cap == other.cap and self.coeffs == other.coeffs)

    def __repr__(self):
        return f"XPoly(deg={self.degree()}, cap={self.cap})"

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        return XPoly(self.ring, self.cap,
                     [self.coeff(i) + other.coeff(i) for i in range(n)])

    def __sub__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        return XPoly(self.ring, self.cap,
                     [self.coeff(i) - other.coeff(i) for i in range(n)])

    def __neg__(self):
        return XPoly(self.ring, self.cap, [-c for c in self.coeffs])

    def __mul__(self, other):
        if self.is_zero() or other.is_zero():
            return XPoly.zero(self.ring, self.cap)
        out = [TruncatedSeries.zero(self.ring, self.cap)
               for _ in range(len(self.coeffs) + len(other.coeffs) - 1)]
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return XPoly(self.ring, self.cap, out)

    def mul_series(self, s):
        return XPoly(self.ring, self.cap, [c * s for c in self.coeffs])

    def scale_int(self, n):
        return XPoly(self.ring, self.cap, [c.scale_int(n) for c in self.coeffs])

    def mul_xpow(self, k):
        z = TruncatedSeries.zero(self.ring, self.cap)
        return XPoly(self.ring, self.cap, [z.copy() for _ in range(k)] + self.coeffs)

    def pow(self, n):
        result = XPoly.from_int_coeffs(self.ring, self.cap, [1])
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def derivative(self):
        return XPoly(self.ring, self.cap,
                     [self.coeffs[i].scale_int(i) for i in range(1, len(self.coeffs))])

    def compose_shift(self, b):
        """P(x + b) for an integer b, by Horner's scheme."""
        if b == 0 or self.is_zero():
            return self.copy()
        ring, cap = self.ring, self.cap
        result = XPoly.zero(ring, cap)
        for c in reversed(self.coeffs):
            # result = result * (x + b) + c
            shifted = result.mul_xpow(1) + result.scale_int(b)
            result = shifted + XPoly(ring, cap, [c])
        return result

    def map_coeffs(self, ring, fn):
        return XPoly(ring, self.cap, [c.map_to(ring, fn) for c in self.coeffs])

    def substitute_tp(self, p):
        return XPoly(self.ring, self.cap, [c.substitute_tp(p) for c in self.coeffs])


# ---------------------------------------------------------------------------
# The curve family f = x^3 - x - c(t)
# ---------------------------------------------------------------------------

class CurveFamily:
    """f = x^3 - x - c(t), with c constructible exactly at any precision.

    ``extension`` selects the coefficient ring: plain Z/p^s for c = t,
    the quadratic extension with u = sqrt(3) for the twisted family
    c = 2t/(3 sqrt 3) = (2u/9) t.
    """

    def __init__(self, name, extension, c_builder):
        self.name = name
        self.extension = extension
        self._c_builder = c_builder

    def __repr__(self):
        return f"CurveFamily({self.name})"

    def make_ring(self, ctx):
        return QuadExtRing(ctx) if self.extension else ZModRing(ctx)

    def c_series(self, ring, cap):
        return self._c_builder(ring, cap)


def _c_untwisted(ring, cap):
    return TruncatedSeries.t_power(ring, 1, cap)


def _c_twisted(ring, cap):
    # 2/(3 sqrt 3) = 2 sqrt3 / 9 = (2/9) u
    coeff = ring.mul(ring.from_fraction(F(2, 9)), ring.u)
    return TruncatedSeries.t_power(ring, 1, cap, coeff)


UNTWISTED = CurveFamily("x^3-x-t", False, _c_untwisted)
TWISTED = CurveFamily("x^3-x-(2u/9)t", True, _c_twisted)


def cubic_poly(ring, cap, c):
    """x^3 - x - c as an XPoly for a given t-series c."""
    zero = TruncatedSeries.zero(ring, cap)
    one = TruncatedSeries.one(ring, cap)
    return XPoly(ring, cap, [-c, -one, zero, one.copy()])


def family_cubic(family, ctx, cap):
    ring = family.make_ring(ctx)
    return cubic_poly(ring, cap, family.c_series(ring, cap))


def discriminant(f):
    """disc of a monic cubic x^3 + q x + r: -4 q^3 - 27 r^2."""
    if f.degree() != 3 or not f.coeff(2).is_zero():
        raise ValueError("expected a depressed monic cubic")
    q, r = f.coeff(1), f.coeff(0)
    return (q * q * q).scale_int(-4) - (r * r).scale_int(27)


# ---------------------------------------------------------------------------
# Frobenius splitting and Cartier extraction
# ---------------------------------------------------------------------------

def frobenius_split(family, ctx, cap, a):
    """(F_a, G_a) over Z/p^s with f^p = F_a + p G_a, F_a = f^sigma(a+(x-a)^p).

    Computed at precision p^(s+1): dividing a mod-p^s quantity by p would
    lose the top digit, so the subtraction f^p - F_a happens one level up
    and the quotient is exact mod p^s.
    """
    if a not in (0, 1, -1):
        raise ValueError(f"lift point a={a} must satisfy a^p = a, use 0 or +-1")
    p = ctx.p
    ctx_hi = ctx.elevated()
    ring_hi = family.make_ring(ctx_hi)
    ring_lo = family.make_ring(ctx)
    f_hi = cubic_poly(ring_hi, cap, family.c_series(ring_hi, cap))
    fp = f_hi.pow(p)
    # h = a + (x-a)^p
    h = XPoly.from_int_coeffs(
        ring_hi, cap, [comb(p, i) * (-a) ** (p - i) for i in range(p + 1)])
    if a:
        h = h + XPoly.from_int_coeffs(ring_hi, cap, [a])
    c_sig_hi = family.c_series(ring_hi, cap).substitute_tp(p)
    f_sig_at_h = h * h * h - h - XPoly(ring_hi, cap, [c_sig_hi])
    diff = fp - f_sig_at_h
    modulus = ring_lo.modulus

    def reduce_lo(v):
        if isinstance(ring_lo, QuadExtRing):
            return (v[0] % modulus, v[1] % modulus)
        return v % modulus

    g_a = diff.map_coeffs(ring_lo, ring_hi.div_exact_p)
    f_a = f_sig_at_h.map_coeffs(ring_lo, reduce_lo)
    return f_a, g_a


def cartier_extract(P, a, p):
    """Cartier extraction in the dx/x convention: sum c_{pi} (x-a)^i.

    Writes P in powers of (x-a), keeps exponents divisible by p, divides
    the exponent by p, and re-expands around the same point.
    """
    shifted = P.compose_shift(a)
    picked = [shifted.coeff(p * i) for i in range(shifted.degree() // p + 1)]
    return XPoly(P.ring, P.cap, picked).compose_shift(-a)


def _extract_dx(P, a, p):
    """Extraction for dx-numerators: sum_{i>=1} c_{pi-1} (x-a)^(i-1).

    This realizes Cartier-of-a-lift on forms P(x) dx: the monomial
    (x-a)^(k-1) dx survives iff p | k and maps to (x-a)^(k/p - 1) dx.
    """
    shifted = P.compose_shift(a)
    picked = [shifted.coeff(p * i - 1)
              for i in range(1, (shifted.degree() + 1) // p + 1)]
    return XPoly(P.ring, P.cap, picked).compose_shift(-a)


# ---------------------------------------------------------------------------
# Differential forms and Griffiths reduction
# ---------------------------------------------------------------------------

class DiffForm:
    """sum_l l! * levels[l] * dx / f^(l+1) over the cubic f."""

    __slots__ = ("f", "levels", "ring", "cap")

    def __init__(self, f, levels, validate=True):
        self.f = f
        self.ring = f.ring
        self.cap = f.cap
        self.levels = {l: q for l, q in levels.items() if not q.is_zero()}
        if validate:
            d = f.degree()
            for l, q in self.levels.items():
                if q.degree() > d * (l + 1) - 2:
                    raise MalformedForm(
                        f"level {l} numerator degree {q.degree()} exceeds "
                        f"window {d * (l + 1) - 2}")

    @classmethod
    def basis(cls, f, u):
        """x^(u-1) dx / f."""
        return cls(f, {0: XPoly.x_power(f.ring, f.cap, u - 1)})

    def __add__(self, other):
        levels = dict(self.levels)
        for l, q in other.levels.items():
            levels[l] = levels[l] + q if l in levels else q
        return DiffForm(self.f, levels)

    def scale_int(self, n):
        return DiffForm(self.f, {l: q.scale_int(n) for l, q in self.levels.items()})

    def max_level(self):
        return max(self.levels, default=0)


def exact_differential(f, numerators):
    """d of G = sum_l l! * numerators[l] / f^(l+1), as a DiffForm.

    deg numerators[l] may go up to d(l+1) - 1 (one more than form
    numerators).  Level l of dG picks up P_l', level l+1 picks up
    -P_l * f'; both stay integral thanks to the l! convention.
    """
    fprime = f.derivative()
    levels = {}

    def bump(l, q):
        levels[l] = levels[l] + q if l in levels else q

    for l, P in numerators.items():
        dP = P.derivative()
        if not dP.is_zero():
            bump(l, dP)
        bump(l + 1, -(P * fprime))
    return DiffForm(f, levels)


def bezout_solve(Q, f, window=None):
    """The unique (A, B) with Q = A f' + B f, deg A <= d-1, deg B <= max(d-2, W-d).

    Solved as a square linear system over the series ring by Gauss-Jordan
    elimination; pivots must have unit constant term, which the theory
    guarantees whenever disc(f) is a unit (the system determinant is
    disc(f) times a unit).
    """
    d = f.degree()
    if window is None:
        window = max(Q.degree(), 0)
    if Q.degree() > window:
        raise ValueError("Q exceeds the requested degree window")
    deg_b = max(d - 2, window - d)
    ncols = d + deg_b + 1
    nrows = max(2 * d - 2, window) + 1
    if nrows != ncols:
        raise AssertionError("Bezout system is not square")
    ring, cap = f.ring, f.cap
    fprime = f.derivative()
    zero = TruncatedSeries.zero(ring, cap)

    def fp_c(i):
        return fprime.coeff(i) if 0 <= i <= fprime.degree() else zero

    def f_c(i):
        return f.coeff(i) if 0 <= i <= d else zero

    rows = []
    for r in range(nrows):
        row = [fp_c(r - j) for j in range(d)]
        row += [f_c(r - j) for j in range(deg_b + 1)]
        row.append(Q.coeff(r))
        rows.append(row)

    col_of_row = [None] * nrows
    used = [False] * nrows
    for col in range(ncols):
        pivot = None
        for r in range(nrows):
            if not used[r] and ring.is_unit(rows[r][col].coeffs[0]):
                pivot = r
                break
        if pivot is None:
            raise DiscriminantNotUnit(
                "no unit pivot; discriminant of f is not invertible here")
        used[pivot] = True
        col_of_row[pivot] = col
        inv = rows[pivot][col].invert()
        rows[pivot] = [e * inv for e in rows[pivot]]
        for r in range(nrows):
            if r != pivot and not rows[r][col].is_zero():
                factor = rows[r][col]
                rows[r] = [e - factor * pe for e, pe in zip(rows[r], rows[pivot])]

    sol = [zero] * ncols
    for r in range(nrows):
        sol[col_of_row[r]] = rows[r][-1]
    A = XPoly(ring, cap, sol[:d])
    B = XPoly(ring, cap, sol[d:])
    return A, B


def griffiths_reduce(form):
    """Reduce a form to c0 * dx/f + c1 * x dx/f modulo exact forms.

    Repeatedly rewrites the top level l via Q = A f' + B f and the
    integration-by-parts identity l! Q dx/f^(l+1) == (l-1)! (lB - A') dx/f^l,
    then reads the coefficient pair off the final degree <= d-2 numerator.
    """
    f = form.f
    d = f.degree()
    levels = {l: q for l, q in form.levels.items()}
    while levels and max(levels) > 0:
        l = max(levels)
        Q = levels.pop(l)
        window = d * (l + 1) - 2
        if Q.degree() > window:
            raise MalformedForm(f"level {l} numerator out of window")
        A, B = bezout_solve(Q, f, window)
        contrib = B.scale_int(l) - A.derivative()
        levels[l - 1] = levels[l - 1] + contrib if l - 1 in levels else contrib
        if levels[l - 1].is_zero():
            del levels[l - 1]
    Q0 = levels.get(0, XPoly.zero(form.ring, form.cap))
    if Q0.degree() > d - 2:
        raise MalformedForm("reduced numerator exceeds degree d-2")
    return [Q0.coeff(i) for i in range(d - 1)]


# ---------------------------------------------------------------------------
# The Cartier operator on forms, and the Cartier matrix
# ---------------------------------------------------------------------------

def cartier_form(family, u, ctx, cap, a=0):
    """Cartier image of x^(u-1) dx/f as a DiffForm over f^sigma, exact mod p^s.

    Expands 1/f = f^(p-1) sum_{k<s} (-p)^k G_a^k / F_a^(k+1) (terms with
    k >= s vanish mod p^s), extracts each numerator, and turns the
    denominators F_a^(k+1) into f^sigma(x)^(k+1).  Needs s < p so the k!
    of the level convention stays invertible.
    """
    p, s = ctx.p, ctx.s
    if s >= p:
        raise UnsupportedPrecision(f"s={s} >= p={p} is not supported")
    ring = family.make_ring(ctx)
    f = cubic_poly(ring, cap, family.c_series(ring, cap))
    f_sig = cubic_poly(ring, cap, family.c_series(ring, cap).substitute_tp(p))
    _, G = frobenius_split(family, ctx, cap, a)
    P = f.pow(p - 1).mul_xpow(u - 1)
    levels = {}
    for k in range(s):
        if k:
            P = P * G
        E = _extract_dx(P, a, p)
        if E.is_zero():
            continue
        # (-p)^k / k!, a unit multiple of p^k since k < p
        scalar = (-p) ** k * pow(factorial(k), -1, ctx.modulus) % ctx.modulus
        levels[k] = E.scale_int(scalar)
    return DiffForm(f_sig, levels)


def cartier_matrix(ctx, cap, a=0, family=UNTWISTED):
    """The Cartier matrix on the plain basis (dx/f, x dx/f).

    Row u holds the coefficients of the reduction of Cartier(x^(u-1) dx/f)
    on the basis (dx/f^sigma, x dx/f^sigma).
    """
    rows = []
    for u in (1, 2):
        form = cartier_form(family, u, ctx, cap, a)
        rows.append(griffiths_reduce(form))
    return SeriesMatrix(rows)


def twisted_cartier_matrix(ctx, cap, a=0):
    """The Cartier matrix of the twisted family on the basis (dx/f, u x dx/f).

    The sigma-side basis carries sigma(u) = eps*u on its second vector,
    matching the Frobenius semilinearity of the basis transport; with
    that convention the matrix is u-free (checked by the caller).
    """
    ring = QuadExtRing(ctx)
    mu = cartier_matrix(ctx, cap, a=a, family=TWISTED)
    w = ring.u
    w_inv = ring.inv(w)
    sig_w_inv = ring.inv(ring.frob(w))  # 1/sigma(u) = eps/u
    lam = [[mu.entries[0][0], mu.entries[0][1].scale(sig_w_inv)],
           [mu.entries[1][0].scale(w), mu.entries[1][1].scale(ring.mul(w, sig_w_inv))]]
    return SeriesMatrix(lam)


# ---------------------------------------------------------------------------
# Hasse-Witt matrix of the cubic family
# ---------------------------------------------------------------------------

def hasse_witt_cubic(ctx, cap, family=UNTWISTED):
    """beta_p of f = x^3 - x - c(t): entry (u, v) is the coefficient of
    x^(p*u - v) in f^(p-1), with u, v in the interior {1, 2}."""
    p = ctx.p
    ring = family.make_ring(ctx)
    f = cubic_poly(ring, cap, family.c_series(ring, cap))
    fp1 = f.pow(p - 1)
    return SeriesMatrix([
        [fp1.coeff(p * u - v) for v in (1, 2)] for u in (1, 2)])


# ---------------------------------------------------------------------------
# Formal 1/x-expansions and the Katz exactness criterion
# ---------------------------------------------------------------------------

class FormalExpansion:
    """Laurent expansion sum_{n>=1} a_n x^(-n) dx/x of a form at infinity."""

    __slots__ = ("ring", "depth", "coeffs")

    def __init__(self, ring, depth, coeffs):
        self.ring = ring
        self.depth = depth
        self.coeffs = coeffs  # index n-1 holds a_n, n = 1..depth

    def a(self, n):
        return self.coeffs[n - 1]

    def cartier(self, p):
        """Coefficient extraction a_n -> a_{p n}; depth shrinks by p."""
        new_depth = self.depth // p
        return FormalExpansion(
            self.ring, new_depth, [self.coeffs[p * n - 1] for n in range(1, new_depth + 1)])

    def is_zero_mod(self, power):
        """All stored t-coefficients divisible by p^power (power <= s)."""
        viol = self._first_nonzero_mod(power)
        return viol is None

    def _first_nonzero_mod(self, power):
        for n in range(1, self.depth + 1):
            series = self.coeffs[n - 1]
            for i, v in enumerate(series.coeffs):
                vals = v if isinstance(v, tuple) else (v,)
                if any(x % power for x in vals):
                    return (n, i)
        return None


def formal_expand(form, depth):
    """Expand a DiffForm in powers of 1/x to the given depth.

    The expansion of 1/f in w = 1/x is w^3 / (1 - w^2 - c w^3); its
    coefficients are series in t, so a depth-M expansion carries every
    t-coefficient the stored cap knows about.
    """
    ring, cap = form.ring, form.cap
    c = -form.f.coeff(0)
    D = depth + 1
    zero = TruncatedSeries.zero(ring, cap)
    # v = 1 / (1 - w^2 - c w^3): v_j = v_{j-2} + c * v_{j-3}
    v = [zero.copy() for _ in range(D + 1)]
    v[0] = TruncatedSeries.one(ring, cap)
    for j in range(1, D + 1):
        acc = zero.copy()
        if j >= 2:
            acc = acc + v[j - 2]
        if j >= 3:
            acc = acc + c * v[j - 3]
        v[j] = acc

    def wmul(A, B):
        out = [zero.copy() for _ in range(D + 1)]
        for i, ai in enumerate(A):
            if not ai.is_zero():
                for j in range(D + 1 - i):
                    if not B[j].is_zero():
                        out[i + j] = out[i + j] + ai * B[j]
        return out

    # w-series of 1/f is w^3 * v; higher powers are built as needed
    inv_f = [zero.copy() for _ in range(D + 1)]
    for j in range(3, D + 1):
        inv_f[j] = v[j - 3]
    total = [zero.copy() for _ in range(D + 1)]
    power = inv_f
    cur_l = 0
    for l in sorted(form.levels):
        while cur_l < l:
            power = wmul(power, inv_f)
            cur_l += 1
        Q = form.levels[l].scale_int(factorial(l))
        for i in range(Q.degree() + 1):
            qi = Q.coeff(i)
            if qi.is_zero():
                continue
            # x^i shifts the w-support down by i
            for j in range(i, D + 1):
                if not power[j].is_zero():
                    total[j - i] = total[j - i] + qi * power[j]
    # S(w) dx = sum_j s_j w^(j-1) dx/x, so a_n = s_(n+1)
    return FormalExpansion(ring, depth, [total[n + 1] for n in range(depth)])


def padic_ord(n, p):
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def katz_exact_violation(expansion, ctx):
    """First (n, t-degree) violating a_n == 0 mod p^min(ord_p(n), s), or None.

    A formal Laurent differential is exact iff its n-th coefficient is
    divisible by p^(ord_p(n)) for every n; at working precision p^s the
    test is necessarily capped at s.
    """
    p, s = ctx.p, ctx.s
    for n in range(1, expansion.depth + 1):
        v = min(padic_ord(n, p), s)
        if v == 0:
            continue
        power = p ** v
        series = expansion.a(n)
        for i, val in enumerate(series.coeffs):
            vals = val if isinstance(val, tuple) else (val,)
            if any(x % power for x in vals):
                return (n, i)
    return None


# ---------------------------------------------------------------------------
# Exact local residues at x = 0 and x = +-1
# ---------------------------------------------------------------------------

def _series_inverse(poly, order):
    """Inverse of an integer polynomial (nonzero constant term) as a
    rational power series, to the given order inclusive."""
    a0 = F(poly[0])
    inv = [1 / a0]
    for n in range(1, order + 1):
        acc = F(0)
        for i in range(1, min(n, len(poly) - 1) + 1):
            acc += poly[i] * inv[n - i]
        inv.append(-acc / a0)
    return inv


def _int_poly_pow(poly, m):
    out = [1]
    for _ in range(m):
        new = [0] * (len(out) + len(poly) - 1)
        for i, a in enumerate(out):
            if a:
                for j, b in enumerate(poly):
                    new[i + j] += a * b
        out = new
    return out


_residue_cache = {}


def residue_at_zero(j, m):
    """res_{x=0} of x^j dx / (x^3 - x)^m, by brute-force local expansion."""
    key = ("zero", j, m)
    if key in _residue_cache:
        return _residue_cache[key]
    # x^j / (x^m (x^2-1)^m): need coefficient of x^(m-1-j) in (x^2-1)^(-m)
    target = m - 1 - j
    if target < 0:
        val = F(0)
    else:
        denom = _int_poly_pow([-1, 0, 1], m)  # (x^2 - 1)^m
        val = _series_inverse(denom, target)[target]
    _residue_cache[key] = val
    return val


def residue_at_one(j, m, e=1):
    """res_{x=e} of x^j dx / (x^3 - x)^m for e = +-1, by local expansion."""
    key = (e, j, m)
    if key in _residue_cache:
        return _residue_cache[key]
    # x = e + eps: (x^3 - x) = eps * (2 + 3 e eps + eps^2) since e^2 = 1
    h = [2, 3 * e, 1]
    hm = _int_poly_pow(h, m)
    inv = _series_inverse(hm, m - 1)
    # multiply by (e + eps)^j and take the coefficient of eps^(m-1)
    val = F(0)
    for i in range(min(j, m - 1) + 1):
        val += comb(j, i) * e ** (j - i) * inv[m - 1 - i]
    _residue_cache[key] = val
    return val


def residue_pm(j, m):
    """res_{x=1} - res_{x=-1} of x^j dx/(x^3-x)^m."""
    return residue_at_one(j, m, 1) - residue_at_one(j, m, -1)


def residue(kind, u, r):
    """Residue of x^(u-1) dx/(x^3-x)^(r+1): kind 'at0' or 'pm'."""
    if kind == "at0":
        return residue_at_zero(u - 1, r + 1)
    if kind == "pm":
        return residue_pm(u - 1, r + 1)
    raise ValueError(f"unknown residue kind {kind!r}")


# ---------------------------------------------------------------------------
# Period maps: t-series assembled from termwise residues
# ---------------------------------------------------------------------------

def period_form(form, kind, mtrunc=None):
    """Apply a period map to a DiffForm over x^3 - x - c(t).

    rho0 is minus the residue at 0 of the expansion in R[[x, c/x]];
    rhopm is res_{x=1} - res_{x=-1}.  Termwise: 1/f^(l+1) expands as
    sum_r binom(r+l, l) c^r / (x^3-x)^(l+1+r).  ``mtrunc`` keeps only the
    terms r < mtrunc, realizing the mod-t^m truncated period maps.
    """
    if kind not in ("rho0", "rhopm"):
        raise ValueError(f"unknown period kind {kind!r}")
    ring, cap = form.ring, form.cap
    c = -form.f.coeff(0)
    cval = next((i for i, v in enumerate(c.coeffs) if v != ring.zero), None)
    if cval == 0:
        raise ValueError("termwise periods need c(0) = 0")
    out = TruncatedSeries.zero(ring, cap)
    sign = -1 if kind == "rho0" else 1
    local = residue_at_zero if kind == "rho0" else residue_pm
    for l, Q in form.levels.items():
        lfact = factorial(l)
        rmax = 0 if cval is None else (cap - 1) // max(cval, 1)
        if mtrunc is not None:
            rmax = min(rmax, mtrunc - 1)
        cpow = TruncatedSeries.one(ring, cap)
        for r in range(rmax + 1):
            m = l + 1 + r
            weight = sign * lfact * comb(r + l, l)
            loc = TruncatedSeries.zero(ring, cap)
            nonzero = False
            for i in range(Q.degree() + 1):
                qi = Q.coeff(i)
                if qi.is_zero():
                    continue
                res = local(i, m)
                if res:
                    loc = loc + qi.scale(ring.from_fraction(res))
                    nonzero = True
            if nonzero:
                out = out + (loc * cpow).scale_int(weight)
            if r < rmax:
                cpow = cpow * c
    return out


def period_basis(kind, u, ring, cap, family=UNTWISTED, mtrunc=None):
    """Period of the basis form x^(u-1) dx/f for the given family."""
    f = cubic_poly(ring, cap, family.c_series(ring, cap))
    return period_form(DiffForm.basis(f, u), kind, mtrunc=mtrunc)

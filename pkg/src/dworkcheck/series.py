"""Dense truncated power series in t, and 2x2 matrices of them.

A series holds exactly ``cap`` coefficients (degrees 0..cap-1) over one of
the coefficient rings from :mod:`dworkcheck.padic`.  Operations never read
or fabricate coefficients beyond the cap: products truncate, and anything
that would need unknown coefficients raises PrecisionError instead of
zero-padding.  Silent padding would manufacture fake congruence verdicts.

Congruence comparison is localized: it reports the first failing degree
(and matrix entry) rather than a bare boolean, because the verification
reports downstream need to point at the offending coefficient.
"""

from .padic import NotInvertible, PrecisionError, QuadExtRing, RationalRing, ZModRing


class TruncatedSeries:
    __slots__ = ("ring", "cap", "coeffs")

    def __init__(self, ring, coeffs, cap=None):
        if cap is None:
            cap = len(coeffs)
        if len(coeffs) > cap:
            raise ValueError("more coefficients than the cap allows")
        self.ring = ring
        self.cap = cap
        self.coeffs = list(coeffs) + [ring.zero] * (cap - len(coeffs))

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, ring, cap):
        return cls(ring, [], cap)

    @classmethod
    def one(cls, ring, cap):
        return cls(ring, [ring.one], cap)

    @classmethod
    def constant(cls, ring, c, cap):
        return cls(ring, [c], cap)

    @classmethod
    def t_power(cls, ring, k, cap, c=None):
        s = cls(ring, [], cap)
        if k < cap:
            s.coeffs[k] = ring.one if c is None else c
        return s

    @classmethod
    def from_fractions(cls, ring, fracs, cap=None):
        return cls(ring, [ring.from_fraction(q) for q in fracs], cap)

    def copy(self):
        return TruncatedSeries(self.ring, list(self.coeffs), self.cap)

    # -- bookkeeping ---------------------------------------------------

    def _check_compatible(self, other):
        if self.ring != other.ring or self.cap != other.cap:
            raise ValueError(
                f"incompatible series: ring/cap ({self.ring}, {self.cap}) "
                f"vs ({other.ring}, {other.cap})")

    def is_zero(self):
        z = self.ring.zero
        return all(c == z for c in self.coeffs)

    def __eq__(self, other):
        return (isinstance(other, TruncatedSeries)
                and self.ring == other.ring and self.cap == other.cap
                and self.coeffs == other.coeffs)

    def __repr__(self):
        shown = {i: c for i, c in enumerate(self.coeffs[:12]) if c != self.ring.zero}
        return f"TruncatedSeries(cap={self.cap}, {shown}{'...' if self.cap > 12 else ''})"

    # -- ring operations -----------------------------------------------

    def __add__(self, other):
        self._check_compatible(other)
        add = self.ring.add
        return TruncatedSeries(
            self.ring, [add(a, b) for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        self._check_compatible(other)
        sub = self.ring.sub
        return TruncatedSeries(
            self.ring, [sub(a, b) for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        neg = self.ring.neg
        return TruncatedSeries(self.ring, [neg(a) for a in self.coeffs])

    def __mul__(self, other):
        self._check_compatible(other)
        ring = self.ring
        n = self.cap
        a, b = self.coeffs, other.coeffs
        if isinstance(ring, ZModRing):
            m = ring.modulus
            out = [0] * n
            for i, ai in enumerate(a):
                if ai:
                    for j in range(n - i):
                        out[i + j] += ai * b[j]
            return TruncatedSeries(ring, [c % m for c in out])
        if isinstance(ring, QuadExtRing):
            m = ring.modulus
            out0 = [0] * n
            out1 = [0] * n
            for i, (a0, a1) in enumerate(a):
                if a0 or a1:
                    for j in range(n - i):
                        b0, b1 = b[j]
                        out0[i + j] += a0 * b0 + 3 * a1 * b1
                        out1[i + j] += a0 * b1 + a1 * b0
            return TruncatedSeries(
                ring, [(c0 % m, c1 % m) for c0, c1 in zip(out0, out1)])
        out = [ring.zero] * n
        for i, ai in enumerate(a):
            if ai != ring.zero:
                for j in range(n - i):
                    out[i + j] = ring.add(out[i + j], ring.mul(ai, b[j]))
        return TruncatedSeries(ring, out)

    def scale(self, c):
        """Multiply by a ring constant."""
        mul = self.ring.mul
        return TruncatedSeries(self.ring, [mul(c, a) for a in self.coeffs])

    def scale_int(self, n):
        smul = self.ring.smul
        return TruncatedSeries(self.ring, [smul(n, a) for a in self.coeffs])

    def invert(self):
        """Multiplicative inverse up to the cap; needs a unit constant term."""
        ring = self.ring
        a = self.coeffs
        if not ring.is_unit(a[0]):
            raise NotInvertible(
                f"constant term {a[0]} is not a unit in {ring}")
        inv0 = ring.inv(a[0])
        n = self.cap
        if isinstance(ring, ZModRing):
            m = ring.modulus
            out = [inv0]
            for k in range(1, n):
                acc = 0
                for i in range(1, k + 1):
                    if a[i]:
                        acc += a[i] * out[k - i]
                out.append((-inv0 * acc) % m)
            return TruncatedSeries(ring, out)
        out = [inv0]
        for k in range(1, n):
            acc = ring.zero
            for i in range(1, k + 1):
                acc = ring.add(acc, ring.mul(a[i], out[k - i]))
            out.append(ring.neg(ring.mul(inv0, acc)))
        return TruncatedSeries(ring, out)

    def substitute_tp(self, p):
        """t -> t^p with the Frobenius applied to every coefficient.

        Coefficient i lands at degree p*i (dropped past the cap); degrees
        that are not multiples of p become 0.  On Z/p^s coefficients the
        Frobenius is the identity; on the quadratic extension it twists
        u by eps_p.
        """
        ring = self.ring
        out = [ring.zero] * self.cap
        for i, c in enumerate(self.coeffs):
            k = i * p
            if k >= self.cap:
                break
            if c != ring.zero:
                out[k] = ring.frob(c)
        return TruncatedSeries(ring, out)

    def truncate_at(self, m):
        """Zero all coefficients of degree >= m, keeping the cap.

        Refuses m > cap: the discarded coefficients are unknown, so the
        result would silently disagree with the true truncation.
        """
        if m > self.cap:
            raise PrecisionError(
                f"truncation at {m} exceeds stored cap {self.cap}")
        out = self.copy()
        z = self.ring.zero
        for i in range(m, self.cap):
            out.coeffs[i] = z
        return out

    def derivative(self):
        """d/dt; degree cap-1 of the result is unknown and left zero.

        Callers comparing derivatives must stay below degree cap-1.
        """
        ring = self.ring
        out = [ring.smul(i, self.coeffs[i]) for i in range(1, self.cap)]
        out.append(ring.zero)
        return TruncatedSeries(ring, out)

    def map_to(self, ring, f):
        """Map coefficients into another ring via f."""
        return TruncatedSeries(ring, [f(c) for c in self.coeffs])

    # -- comparison and output ------------------------------------------

    def first_mismatch(self, other):
        """First degree where the two series differ, or None if congruent."""
        self._check_compatible(other)
        for i, (a, b) in enumerate(zip(self.coeffs, other.coeffs)):
            if a != b:
                return i
        return None

    def dump_lines(self):
        """One ``t^i: value`` line per nonzero coefficient, ascending degree."""
        fmt = self.ring.fmt
        z = self.ring.zero
        return [f"t^{i}: {fmt(c)}" for i, c in enumerate(self.coeffs) if c != z]


class SeriesMatrix:
    """A 2x2 matrix of truncated series sharing one ring and cap."""

    __slots__ = ("ring", "cap", "entries")

    def __init__(self, entries):
        e00 = entries[0][0]
        self.ring = e00.ring
        self.cap = e00.cap
        self.entries = [list(entries[0]), list(entries[1])]
        for row in self.entries:
            for e in row:
                e00._check_compatible(e)

    @classmethod
    def identity(cls, ring, cap):
        one = TruncatedSeries.one(ring, cap)
        zero = TruncatedSeries.zero(ring, cap)
        return cls([[one, zero.copy()], [zero.copy(), one.copy()]])

    @classmethod
    def diagonal(cls, ring, cap, d0, d1):
        zero = TruncatedSeries.zero(ring, cap)
        return cls([
            [TruncatedSeries.constant(ring, d0, cap), zero.copy()],
            [zero.copy(), TruncatedSeries.constant(ring, d1, cap)]])

    def __getitem__(self, ij):
        return self.entries[ij[0]][ij[1]]

    def __eq__(self, other):
        return isinstance(other, SeriesMatrix) and self.entries == other.entries

    def __add__(self, other):
        return SeriesMatrix([
            [self.entries[i][j] + other.entries[i][j] for j in range(2)]
            for i in range(2)])

    def __sub__(self, other):
        return SeriesMatrix([
            [self.entries[i][j] - other.entries[i][j] for j in range(2)]
            for i in range(2)])

    def __mul__(self, other):
        a, b = self.entries, other.entries
        return SeriesMatrix([
            [a[i][0] * b[0][j] + a[i][1] * b[1][j] for j in range(2)]
            for i in range(2)])

    def scale(self, c):
        return SeriesMatrix([[e.scale(c) for e in row] for row in self.entries])

    def scale_series(self, s):
        return SeriesMatrix([[e * s for e in row] for row in self.entries])

    def det(self):
        a = self.entries
        return a[0][0] * a[1][1] - a[0][1] * a[1][0]

    def adjugate(self):
        a = self.entries
        return SeriesMatrix([[a[1][1], -a[0][1]], [-a[1][0], a[0][0]]])

    def invert(self):
        """Adjugate over determinant; the determinant's constant term must be a unit."""
        dinv = self.det().invert()
        return self.adjugate().scale_series(dinv)

    def substitute_tp(self, p):
        return SeriesMatrix([[e.substitute_tp(p) for e in row] for row in self.entries])

    def truncate_at(self, m):
        return SeriesMatrix([[e.truncate_at(m) for e in row] for row in self.entries])

    def derivative(self):
        return SeriesMatrix([[e.derivative() for e in row] for row in self.entries])

    def map_to(self, ring, f):
        return SeriesMatrix([[e.map_to(ring, f) for e in row] for row in self.entries])

    def first_mismatch(self, other, max_degree=None):
        """Lowest-degree disagreement as (degree, (i, j), lhs, rhs), or None.

        Scans degree-major so the report points at the earliest failing
        t-power; ``max_degree`` bounds the scan (exclusive).
        """
        n = self.cap if max_degree is None else min(self.cap, max_degree)
        for d in range(n):
            for i in range(2):
                for j in range(2):
                    a = self.entries[i][j].coeffs[d]
                    b = other.entries[i][j].coeffs[d]
                    if a != b:
                        return (d, (i, j), a, b)
        return None

    def dump_lines(self, name=""):
        lines = []
        for i in range(2):
            for j in range(2):
                lines.append(f"entry ({i + 1},{j + 1}):")
                lines.extend("  " + ln for ln in self.entries[i][j].dump_lines())
        if name:
            lines.insert(0, f"matrix {name} (cap {self.cap}, ring {self.ring})")
        return lines

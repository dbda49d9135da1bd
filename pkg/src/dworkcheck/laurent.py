"""Exact multivariate Laurent polynomials, constant terms and Newton polytopes.

The constant-term engine produces the sequence f_r = ct(g^r) for a Laurent
polynomial g whose Newton polytope has the origin as its unique interior
lattice point; those sequences feed the truncation-ratio congruence checks.
Everything here is exact rational arithmetic; reduction mod p^s happens at
the verification layer.

The convex hull is brute force (all n-subsets of the support spanning a
hyperplane with the whole support on one side).  The generators in use
have at most ~10 support points in dimension <= 4, where this is instant
and dependency-free.
"""

from fractions import Fraction
from itertools import combinations, product
from math import gcd

from .padic import lcm

F = Fraction


class LaurentPoly:
    """Map from integer exponent vectors to nonzero rational coefficients."""

    __slots__ = ("dim", "terms")

    def __init__(self, dim, terms=None):
        self.dim = dim
        self.terms = {}
        if terms:
            for e, c in terms.items():
                c = F(c)
                if c != 0:
                    self.terms[tuple(e)] = c

    @classmethod
    def constant(cls, dim, c):
        return cls(dim, {(0,) * dim: F(c)})

    def __eq__(self, other):
        return (isinstance(other, LaurentPoly)
                and self.dim == other.dim and self.terms == other.terms)

    def __repr__(self):
        return f"LaurentPoly(dim={self.dim}, {len(self.terms)} terms)"

    def __add__(self, other):
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, F(0)) + c
        return LaurentPoly(self.dim, out)

    def __mul__(self, other):
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, F(0)) + c1 * c2
        return LaurentPoly(self.dim, out)

    def scale(self, c):
        return LaurentPoly(self.dim, {e: v * F(c) for e, v in self.terms.items()})

    def pow(self, r):
        result = LaurentPoly.constant(self.dim, 1)
        for _ in range(r):
            result = result * self
        return result

    def constant_term(self):
        return self.terms.get((0,) * self.dim, F(0))

    def support(self):
        return sorted(self.terms)

    def coefficient_denominator_lcm(self):
        out = 1
        for c in self.terms.values():
            out = lcm(out, c.denominator)
        return out


def parse_laurent(text, dim=None):
    """Parse ``c * x1^a1 x2^a2 ... + ...`` into a LaurentPoly.

    Each term is a rational coefficient, an optional ``*``, then variable
    powers ``xN^e`` (bare ``xN`` means exponent 1, exponents may be
    negative).  The dimension defaults to the largest variable index seen.
    """
    term_texts = [t.strip() for t in text.split("+") if t.strip()]
    raw_terms = []
    maxvar = 0
    for term in term_texts:
        parts = term.replace("*", " ").split()
        coeff = F(1)
        powers = {}
        for part in parts:
            if part.startswith("x"):
                var, _, expo = part.partition("^")
                idx = int(var[1:])
                powers[idx] = powers.get(idx, 0) + (int(expo) if expo else 1)
                maxvar = max(maxvar, idx)
            else:
                coeff *= F(part)
        raw_terms.append((coeff, powers))
    if dim is None:
        dim = maxvar if maxvar else 1
    terms = {}
    for coeff, powers in raw_terms:
        e = tuple(powers.get(i + 1, 0) for i in range(dim))
        terms[e] = terms.get(e, F(0)) + coeff
    return LaurentPoly(dim, terms)


# ---------------------------------------------------------------------------
# Constant-term sequences
# ---------------------------------------------------------------------------

def constant_terms(g, rmax):
    """[ct(g^0), ..., ct(g^rmax)] exactly.

    Internally runs over the integer polynomial D*g (D the coefficient
    denominator lcm) and divides by D^r at the end; the incremental power
    g^(r+1) = g^r * g reuses the full previous product.
    """
    day = g.coefficient_denominator_lcm()
    gint = {e: int(c * day) for e, c in g.terms.items()}
    zero = (0,) * g.dim
    out = [F(1)]
    cur = {zero: 1}
    dpow = 1
    for _ in range(rmax):
        nxt = {}
        for e1, c1 in cur.items():
            for e2, c2 in gint.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = nxt.get(e)
                nxt[e] = c1 * c2 if v is None else v + c1 * c2
        cur = {e: c for e, c in nxt.items() if c}
        dpow *= day
        out.append(F(cur.get(zero, 0), dpow))
    return out


def constant_terms_oracle(g, rmax):
    """Same sequence, recomputing g^r from scratch each r over Fractions.

    Deliberately shares no state or shortcuts with ``constant_terms``;
    used to cross-check the incremental engine.
    """
    out = []
    for r in range(rmax + 1):
        out.append(g.pow(r).constant_term())
    return out


# ---------------------------------------------------------------------------
# Newton polytope, brute-force hull, interior lattice points
# ---------------------------------------------------------------------------

def _det(rows):
    """Integer determinant by Laplace expansion (sizes <= 4 here)."""
    n = len(rows)
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    total = 0
    for j in range(n):
        if rows[0][j]:
            minor = [r[:j] + r[j + 1:] for r in rows[1:]]
            total += (-1) ** j * rows[0][j] * _det(minor)
    return total


def _int_rank(vectors):
    """Rank of a list of integer vectors via fraction-free elimination."""
    rows = [list(v) for v in vectors if any(v)]
    rank = 0
    cols = len(rows[0]) if rows else 0
    for col in range(cols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pr = rows[rank]
        for i in range(rank + 1, len(rows)):
            if rows[i][col]:
                a, b = pr[col], rows[i][col]
                rows[i] = [a * x - b * y for x, y in zip(rows[i], pr)]
        rank += 1
        if rank == len(rows):
            break
    return rank


def _cross(vectors, n):
    """Integer normal orthogonal to n-1 vectors in Z^n (Laplace minors)."""
    out = []
    for i in range(n):
        minor = [[v[j] for j in range(n) if j != i] for v in vectors]
        out.append((-1) ** i * _det(minor))
    return tuple(out)


class NewtonPolytope:
    """conv(support) with facet half-spaces and interior lattice points."""

    def __init__(self, support, dim):
        self.dim = dim
        self.support = [tuple(p) for p in support]
        if not self.support:
            raise ValueError("empty support")
        base = self.support[0]
        diffs = [tuple(a - b for a, b in zip(p, base)) for p in self.support[1:]]
        if _int_rank(diffs) < dim:
            raise ValueError(
                f"support does not affinely span R^{dim}: polytope is degenerate")
        self.facets = self._facets()
        self.interior_points = self._interior_lattice_points()

    def _facets(self):
        """Half-spaces (normal, c) with normal . x <= c on the polytope."""
        n = self.dim
        seen = set()
        facets = []
        for subset in combinations(self.support, n):
            base = subset[0]
            vecs = [tuple(a - b for a, b in zip(p, base)) for p in subset[1:]]
            normal = _cross(vecs, n)
            if not any(normal):
                continue
            c = sum(a * b for a, b in zip(normal, base))
            values = [sum(a * b for a, b in zip(normal, p)) for p in self.support]
            if all(v <= c for v in values):
                pass
            elif all(v >= c for v in values):
                normal = tuple(-a for a in normal)
                c = -c
            else:
                continue
            d = 0
            for a in normal:
                d = gcd(d, abs(a))
            d = d or 1
            key = (tuple(a // d for a in normal), F(c, d))
            if key not in seen:
                seen.add(key)
                facets.append((normal, c))
        return facets

    def contains_strictly(self, point):
        return all(
            sum(a * b for a, b in zip(normal, point)) < c
            for normal, c in self.facets)

    def _interior_lattice_points(self):
        lo = [min(p[i] for p in self.support) for i in range(self.dim)]
        hi = [max(p[i] for p in self.support) for i in range(self.dim)]
        ranges = [range(lo[i] + 1, hi[i]) for i in range(self.dim)]
        return [pt for pt in product(*ranges) if self.contains_strictly(pt)]

    @property
    def h(self):
        return len(self.interior_points)


def interior_check(g):
    """(ok, message, interior_points): ok iff the strict interior of the
    Newton polytope meets Z^n exactly in the origin."""
    poly = NewtonPolytope(g.support(), g.dim)
    pts = poly.interior_points
    origin = (0,) * g.dim
    if pts == [origin]:
        return True, "origin is the unique interior lattice point", pts
    return (False,
            f"interior lattice points are {pts}, expected [{origin}]",
            pts)


def hasse_witt(g, p, interior=None):
    """Hasse-Witt matrix of a constant-coefficient Laurent polynomial.

    Entry (u, v) is the coefficient of x^(p*u - v) in g^(p-1), with u, v
    running over the interior lattice points of the Newton polytope.
    """
    if interior is None:
        poly = NewtonPolytope(g.support(), g.dim)
        interior = poly.interior_points
    if not interior:
        raise ValueError("Newton polytope has no interior lattice points")
    gp = g.pow(p - 1)
    matrix = []
    for u in interior:
        row = []
        for v in interior:
            e = tuple(p * a - b for a, b in zip(u, v))
            row.append(gp.terms.get(e, F(0)))
        matrix.append(row)
    return interior, matrix


# ---------------------------------------------------------------------------
# Generator registry
# ---------------------------------------------------------------------------

def corollary1_generator(k):
    """(x1 + ... + x_{k-1} + 1/(x1...x_{k-1})) / k in k-1 variables.

    The 1/k scaling makes ct(g^{kl}) equal the Pochhammer product
    prod_i (i/k)_l / (l!)^{k-1} exactly.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    n = k - 1
    terms = {}
    for i in range(n):
        e = tuple(1 if j == i else 0 for j in range(n))
        terms[e] = F(1, k)
    terms[(-1,) * n] = F(1, k)
    return LaurentPoly(n, terms)


def corollary2_generator(k):
    """prod_i (x_i + 1/x_i) / 2^k in k variables; ct(g^{2l}) = ((1/2)_l/l!)^k."""
    if k < 1:
        raise ValueError("k must be >= 1")
    g = LaurentPoly.constant(k, F(1, 2 ** k))
    for i in range(k):
        e_plus = tuple(1 if j == i else 0 for j in range(k))
        e_minus = tuple(-1 if j == i else 0 for j in range(k))
        g = g * LaurentPoly(k, {e_plus: 1, e_minus: 1})
    return g


def mixed_generator():
    """(x + 1/x)(y1 + y2 + 1/(y1 y2)) in three variables, unscaled."""
    gx = LaurentPoly(3, {(1, 0, 0): 1, (-1, 0, 0): 1})
    gy = LaurentPoly(3, {(0, 1, 0): 1, (0, 0, 1): 1, (0, -1, -1): 1})
    return gx * gy


def lookup_generator(name):
    """Resolve a generator registry name or inline polynomial text."""
    if name == "mixed":
        return mixed_generator()
    if ":" in name:
        base, _, arg = name.partition(":")
        if base == "corollary1":
            return corollary1_generator(int(arg))
        if base == "corollary2":
            return corollary2_generator(int(arg))
    if "x" in name and ("^" in name or "*" in name or " " in name):
        return parse_laurent(name)
    raise KeyError(f"unknown generator name: {name!r}")


GENERATOR_NAMES = ("corollary1:k", "corollary2:k", "mixed")

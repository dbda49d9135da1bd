"""Generalized hypergeometric series with exact rational coefficients.

A ``HypSpec`` pins down one series completely: upper and lower parameters
(the lower list stores the n!-slot explicitly, so a classical F(a,b,c|z)
is upper=(a,b), lower=(c,1)), an argument substitution z = arg_scale *
t^arg_power, and a rational prefactor pre_scale * t^pre_tpower.

Coefficients are produced by the Pochhammer ratio recurrence over exact
rationals and reduced mod p^s afterwards.  Running the recurrence
directly mod p^s would divide by n+1, which is periodically non-invertible;
exactness first, reduction second.
"""

from dataclasses import dataclass
from fractions import Fraction

from .padic import lcm
from .series import SeriesMatrix, TruncatedSeries

F = Fraction


@dataclass(frozen=True)
class HypSpec:
    upper: tuple
    lower: tuple          # includes the n! slot as an explicit 1
    arg_scale: Fraction = F(1)
    arg_power: int = 1
    pre_scale: Fraction = F(1)
    pre_tpower: int = 0

    def __post_init__(self):
        for b in self.lower:
            if b <= 0 and F(b).denominator == 1:
                raise ValueError(f"lower parameter {b} is a non-positive integer")
        if self.arg_power < 1:
            raise ValueError("argument power must be >= 1")

    def denominator_set(self):
        """Denominators that must stay invertible mod p for p-integrality."""
        dens = {F(a).denominator for a in self.upper}
        dens |= {F(b).denominator for b in self.lower}
        dens |= {self.arg_scale.denominator, self.pre_scale.denominator}
        return sorted(d for d in dens if d > 1)

    def denominator_lcm(self):
        out = 1
        for d in self.denominator_set():
            out = lcm(out, d)
        return out

    def pullback(self, k):
        """Substitute t -> t^k (argument and prefactor powers scale by k)."""
        return HypSpec(self.upper, self.lower,
                       self.arg_scale, self.arg_power * k,
                       self.pre_scale, self.pre_tpower * k)


def pochhammer_ratios(spec, nmax):
    """c_0..c_nmax with c_n = prod (a_i)_n / prod (b_j)_n, exact."""
    upper = [F(a) for a in spec.upper]
    lower = [F(b) for b in spec.lower]
    c = F(1)
    out = [c]
    for n in range(nmax):
        num = F(1)
        for a in upper:
            num *= a + n
        den = F(1)
        for b in lower:
            den *= b + n
        c = c * num / den
        out.append(c)
    return out


_coeff_cache = {}


def hyp_coeffs(spec, N):
    """Exact coefficients of t^0..t^(N-1) of the fully transformed series."""
    key = (spec, N)
    if key in _coeff_cache:
        return _coeff_cache[key]
    coeffs = [F(0)] * N
    j, k = spec.pre_tpower, spec.arg_power
    if j < N:
        nmax = (N - 1 - j) // k
        cs = pochhammer_ratios(spec, nmax)
        zpow = F(1)
        for n in range(nmax + 1):
            coeffs[j + k * n] = spec.pre_scale * zpow * cs[n]
            zpow *= spec.arg_scale
    _coeff_cache[key] = coeffs
    return coeffs


def hyp_series(spec, ring, N):
    """The transformed series reduced into the given coefficient ring."""
    return TruncatedSeries.from_fractions(ring, hyp_coeffs(spec, N))


# ---------------------------------------------------------------------------
# The six 2F1's behind the two period matrices of x^3 - x - t.
#
# Row u of each matrix is the pair of period values of x^(u-1) dx / f:
# column 1 the residue at 0, column 2 the signed residue pair at x = +-1.
# ---------------------------------------------------------------------------

def _f(upper, lower, arg_scale, arg_power, pre_scale=F(1), pre_tpower=0):
    return HypSpec(tuple(F(x) for x in upper), tuple(F(x) for x in lower),
                   F(arg_scale), arg_power, F(pre_scale), pre_tpower)


#: Entries of Y(t): argument 27 t^2 / 4.
Y_SPECS = [
    [_f(("1/3", "2/3"), ("1/2", 1), "27/4", 2),
     _f(("7/6", "5/6"), ("3/2", 1), "27/4", 2, "-3/2", 1)],
    [_f(("2/3", "4/3"), ("3/2", 1), "27/4", 2, -1, 1),
     _f(("1/6", "5/6"), ("1/2", 1), "27/4", 2)],
]

#: Entries of the rescaled matrix scrY(t): argument t^2.
SCRY_SPECS = [
    [_f(("1/3", "2/3"), ("1/2", 1), 1, 2),
     _f(("7/6", "5/6"), ("3/2", 1), 1, 2, "-1/3", 1)],
    [_f(("2/3", "4/3"), ("3/2", 1), 1, 2, "-2/3", 1),
     _f(("1/6", "5/6"), ("1/2", 1), 1, 2)],
]


def _build_matrix(specs, ring, N):
    return SeriesMatrix([[hyp_series(s, ring, N) for s in row] for row in specs])


def build_Y(ring, N):
    """The period matrix Y(t) of x^3-x-t reduced into ``ring``, cap N."""
    _require_odd_gt3(ring)
    return _build_matrix(Y_SPECS, ring, N)


def build_scrY(ring, N):
    """The rescaled period matrix scrY(t) (argument t^2) reduced into ``ring``."""
    _require_odd_gt3(ring)
    return _build_matrix(SCRY_SPECS, ring, N)


def _require_odd_gt3(ring):
    ctx = getattr(ring, "ctx", None)
    if ctx is not None and ctx.p <= 3:
        raise ValueError(f"period matrices need p > 3, got p={ctx.p}")


# ---------------------------------------------------------------------------
# Named series registry (CLI entry points).
# ---------------------------------------------------------------------------

def dwork_spec():
    """F(1/2,1/2,1|t), the classical rank-one example."""
    return _f(("1/2", "1/2"), (1, 1), 1, 1)


def corollary1_spec(k):
    """(k-1)F(k-2) with upper 1/k..(k-1)/k and all-ones lower, argument t."""
    if k < 2:
        raise ValueError("k must be >= 2")
    return _f(tuple(F(i, k) for i in range(1, k)), (1,) * (k - 1), 1, 1)


def corollary2_spec(k):
    """The k-fold product family: upper (1/2,...,1/2), all-ones lower.

    Its coefficient is ((1/2)_n / n!)^k, which needs k upper halves over
    k lower ones; k=2 is the classical F(1/2,1/2,1|t).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    return _f((F(1, 2),) * k, (1,) * k, 1, 1)


def mixed_spec():
    """3F2(1/2,1/3,2/3;1,1|t)."""
    return _f((F(1, 2), F(1, 3), F(2, 3)), (1, 1, 1), 1, 1)


def lookup_series(name):
    """Resolve a registry name like ``dwork`` or ``corollary1:3`` to a HypSpec."""
    if name == "dwork":
        return dwork_spec()
    if name == "mixed":
        return mixed_spec()
    if ":" in name:
        base, _, arg = name.partition(":")
        k = int(arg)
        if base == "corollary1":
            return corollary1_spec(k)
        if base == "corollary2":
            return corollary2_spec(k)
    raise KeyError(f"unknown series name: {name!r}")


SERIES_NAMES = ("dwork", "corollary1:k", "corollary2:k", "mixed")

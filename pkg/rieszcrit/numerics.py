"""
numerics -- extended precision contract and the special functions
------------------------------------------------------------------

Everything above this module works with mpmath numbers.  A PrecisionContext
says how many decimal digits to carry and what absolute error a truncated
series may leave behind; a SeriesResult packages a value together with a
rigorous bound on that error.

Special functions provided here:

- zeta_even(m): zeta(2m) from exact Bernoulli numbers for 2m <= 300, from
  the truncated Dirichlet series above that;
- zeta_real(s): zeta at a real argument, through the alternating (eta)
  series with Borwein's acceleration for s >= 1/2 and through the
  functional equation below;
- gamma_real(z): Gamma at a positive argument, by Stirling's series after
  raising the argument;
- j_ab(a, b): the integral of t^-b exp(-1/t^a) over (0, oo), which equals
  Gamma((b-1)/a)/a.
"""

import enum
import logging
import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb

import mpmath
from mpmath import mp, mpf

from rieszcrit.errors import DomainError, PoleError

log = logging.getLogger(__name__)

# largest 2m for which zeta(2m) comes from the Bernoulli closed form
BERNOULLI_CROSSOVER = 300

# max of 1/Gamma on the positive axis (attained near s = 1.4616)
RECIPROCAL_GAMMA_MAX = mpf('1.13')

DEFAULT_DIGITS = 50
DEFAULT_TOL = '1e-30'
DEFAULT_MAX_DIGITS = 700


def as_mpf(x):
    """Convert ints, floats, strings, Fractions and mpf to mpf."""
    if isinstance(x, Fraction):
        return mpf(x.numerator) / x.denominator
    return mpf(x)


################################################################################
## Precision contract.
################################################################################

@dataclass(frozen=True)
class PrecisionContext:
    """
    Working decimal precision and absolute truncation tolerance.

    max_digits is the ceiling any derived working precision may reach;
    operations that would need more raise PrecisionBudgetError.
    """
    digits: int = DEFAULT_DIGITS
    tol: mpf = field(default_factory=lambda: mpf(DEFAULT_TOL))
    max_digits: int = DEFAULT_MAX_DIGITS

    def __post_init__(self):
        if int(self.digits) != self.digits or self.digits < 30:
            raise DomainError("digits must be an integer >= 30, got %r"
                              % (self.digits,))
        with mp.workdps(self.digits + 10):
            tol = as_mpf(self.tol)
            if not tol > 0:
                raise DomainError("tol must be positive, got %s" % (tol,))
            floor = mpf(10) ** (10 - self.digits)
            if tol * (1 + mpf('1e-9')) < floor:
                raise DomainError(
                    "tol %s is not achievable with %d digits (need >= %s)"
                    % (mpmath.nstr(tol, 5), self.digits, mpmath.nstr(floor, 5)))
        object.__setattr__(self, 'digits', int(self.digits))
        object.__setattr__(self, 'tol', tol)

    def raised(self, extra_digits):
        """Context with extra digits and a tolerance scaled down to match."""
        extra = max(0, int(math.ceil(extra_digits)))
        with mp.workdps(self.digits + extra + 10):
            return PrecisionContext(self.digits + extra,
                                    self.tol * mpf(10) ** (-extra),
                                    self.max_digits)

    def with_tol(self, tol):
        """Same digits, different tolerance (clamped to what digits allow)."""
        with mp.workdps(self.digits + 10):
            tol = max(as_mpf(tol), mpf(10) ** (10 - self.digits))
        return PrecisionContext(self.digits, tol, self.max_digits)

    def workdps(self, extra=10):
        return mp.workdps(self.digits + extra)


class Method(enum.Enum):
    NAIVE = 'naive'
    KUMMER = 'kummer'
    MOEBIUS = 'moebius'
    FORWARD_DIFF = 'diff'
    ASYMPTOTIC = 'asymptotic'
    DIFFERENCE = 'difference'
    DIRECT = 'direct'
    RESUMMED = 'resummed'


@dataclass(frozen=True)
class SeriesResult:
    """
    A computed value with a bound on |true value - value|.

    rigorous is False when the series is only conditionally convergent and
    error_bound is an estimate rather than a proof.
    """
    value: mpf
    error_bound: mpf
    terms_used: int
    method: Method
    rigorous: bool = True

    def __float__(self):
        return float(self.value)

    def agrees_with(self, other, slack=0):
        """True if the two enclosures overlap (within 'slack')."""
        if isinstance(other, SeriesResult):
            return (abs(self.value - other.value)
                    <= self.error_bound + other.error_bound + slack)
        return abs(self.value - other) <= self.error_bound + slack

    def scaled(self, factor):
        factor = as_mpf(factor)
        return SeriesResult(self.value * factor,
                            self.error_bound * abs(factor),
                            self.terms_used, self.method, self.rigorous)


################################################################################
## Bernoulli numbers and zeta(2m).
################################################################################

_bernoulli_even = [Fraction(1)]
_bernoulli_lock = threading.Lock()


def bernoulli_even(m):
    """
    B_{2m} as an exact fraction, from the binomial recurrence.

    >>> bernoulli_even(1)
    Fraction(1, 6)
    >>> bernoulli_even(2)
    Fraction(-1, 30)
    """
    if m < 0:
        raise DomainError("Bernoulli index must be >= 0, got %r" % (m,))

    if m < len(_bernoulli_even):
        return _bernoulli_even[m]

    with _bernoulli_lock:
        table = _bernoulli_even
        while len(table) <= m:
            i = len(table)
            n = 2 * i
            # the B_1 = -1/2 term of sum_{r<n} C(n+1, r) B_r
            s = Fraction(-(n + 1), 2)
            for j in range(i):
                s += comb(n + 1, 2 * j) * table[j]
            table.append(-s / (n + 1))

    return _bernoulli_even[m]


def _zeta_even_bernoulli(m, digits):
    b = bernoulli_even(m)
    with mp.workdps(digits + 10):
        return ((2 * mp.pi) ** (2 * m) * abs(b.numerator)
                / (2 * b.denominator * mp.factorial(2 * m)))


def _zeta_even_dirichlet(m, ctx):
    s = 2 * m
    with mp.workdps(ctx.digits + 10):
        target = ctx.tol / 10
        n_terms = 1
        # sum_{n>N} n^-s <= N^(1-s)/(s-1)
        while mpf(n_terms) ** (1 - s) / (s - 1) > target:
            n_terms += 1
        return mp.fsum(mpf(n) ** (-s) for n in range(1, n_terms + 1))


@lru_cache(maxsize=8192)
def zeta_even(m, ctx):
    """zeta(2m) to ctx.digits digits."""
    if m != int(m) or m < 1:
        raise DomainError("zeta_even needs an integer m >= 1, got %r" % (m,))
    m = int(m)

    if 2 * m <= BERNOULLI_CROSSOVER:
        return _zeta_even_bernoulli(m, ctx.digits)
    return _zeta_even_dirichlet(m, ctx)


################################################################################
## zeta and Gamma at real arguments.
################################################################################

def _borwein_weights(n):
    """d_0 .. d_n of Borwein's eta acceleration, as exact integers."""
    u = Fraction(1)
    d = [u]
    for i in range(n):
        u = u * 4 * (n + i) * (n - i) / ((2 * i + 1) * (2 * i + 2))
        d.append(d[-1] + u)
    return [int(x) for x in d]


def _zeta_eta(s, tol, digits):
    """zeta(s) for real s >= 1/2, s != 1, from the accelerated eta series."""
    denominator = 1 - mpf(2) ** (1 - s)
    # |error| <= 3 / ((3 + sqrt 8)^n Gamma(s) |1 - 2^(1-s)|)
    ratio = 3 + mp.sqrt(8)
    n = int(mp.ceil(mp.log(12 * RECIPROCAL_GAMMA_MAX / (tol * abs(denominator)))
                    / mp.log(ratio)))
    n = max(n, 1)

    d = _borwein_weights(n)
    d_n = d[n]
    with mp.workdps(digits + 15 + len(str(n))):
        total = mp.fsum((-1) ** k * (d[k] - d_n) / mpf(k + 1) ** s
                        for k in range(n))
        value = -total / (d_n * denominator)

    log.debug('zeta_eta(%s): %d accelerated terms', mpmath.nstr(s, 8), n)
    return value


def zeta_real(s, ctx):
    """
    zeta(s) for real s != 1, absolute error below ctx.tol.

    For s >= 1/2 the accelerated alternating series is used directly;
    below that the functional equation
        zeta(s) = 2^s pi^(s-1) sin(pi s/2) Gamma(1-s) zeta(1-s)
    maps the argument into that range.
    """
    with mp.workdps(ctx.digits + 10):
        s = as_mpf(s)
        if s == 1:
            raise PoleError("zeta has a pole at s = 1")
        if s >= mpf(1) / 2:
            return _zeta_eta(s, ctx.tol, ctx.digits)
        return _zeta_reflected(s, ctx)


def _zeta_reflected(s, ctx):
    with mp.workdps(ctx.digits + 10):
        factor = 2 ** s * mp.pi ** (s - 1) * gamma_real(1 - s, ctx)
        if s == 0:
            # sin(pi s/2) zeta(1-s) -> -pi/2 as s -> 0
            return factor * (-mp.pi / 2)

        sine = mp.sinpi(s / 2)
        if sine == 0:
            return mpf(0)

        scale = abs(factor * sine)
        inner_ctx = ctx.raised(max(0, mp.log10(scale))) if scale > 1 else ctx
        return factor * sine * zeta_real(1 - s, inner_ctx)


def reciprocal_zeta(s, ctx):
    """1/zeta(s), with the value 0 at the pole s = 1."""
    with mp.workdps(ctx.digits + 10):
        s = as_mpf(s)
        if s == 1:
            return mpf(0)
        if s > 0 and s % 2 == 0:
            return 1 / zeta_even(int(s) // 2, ctx)
        value = zeta_real(s, ctx)
        if value == 0:
            raise DomainError("1/zeta has a pole at the trivial zero s = %s"
                              % (mpmath.nstr(s, 10),))
        return 1 / value


def _log_gamma_stirling(z, dps):
    """
    log Gamma(z) for z > 0, with the argument raised until Stirling's
    series reaches 10^-dps before it starts to diverge.
    """
    w_min = dps * math.log(10) / (2 * math.pi) + 2
    shift = max(0, int(math.ceil(w_min - float(z))))
    w = z + shift

    eps = mpf(10) ** (-dps)
    total = (w - mpf(1) / 2) * mp.log(w) - w + mp.log(2 * mp.pi) / 2
    w_power = w
    w_square = w * w
    j = 1
    while j <= 4 * dps:
        b = bernoulli_even(j)
        term = (mpf(b.numerator) / b.denominator) / (2 * j * (2 * j - 1) * w_power)
        if abs(term) < eps:
            break
        total += term
        w_power *= w_square
        j += 1

    if shift:
        total -= mp.fsum(mp.log(z + i) for i in range(shift))
    return total


def gamma_real(z, ctx):
    """Gamma(z) for real z > 0, absolute error below ctx.tol."""
    with mp.workdps(ctx.digits + 10):
        z = as_mpf(z)
        if not z > 0:
            raise DomainError("gamma_real needs z > 0, got %s" % (mpmath.nstr(z, 10),))

        # digits in front of the decimal point of Gamma(z)
        if z >= 1:
            magnitude = math.lgamma(float(z)) / math.log(10)
        else:
            magnitude = -float(mp.log10(z))
        dps = ctx.digits + 10 + max(0, int(math.ceil(magnitude)))

    with mp.workdps(dps):
        return mp.exp(_log_gamma_stirling(z, dps))


def j_ab(a, b, ctx):
    """
    J_ab = int_0^oo t^-b exp(-1/t^a) dt = Gamma((b-1)/a)/a.
    """
    with mp.workdps(ctx.digits + 10):
        a = as_mpf(a)
        b = as_mpf(b)
        if not a > 0:
            raise DomainError("J_ab needs a > 0, got a = %s" % (mpmath.nstr(a, 10),))
        if not b > 1:
            raise DomainError("J_ab diverges for b <= 1, got b = %s"
                              % (mpmath.nstr(b, 10),))
        return gamma_real((b - 1) / a, ctx) / a

"""
The Baez-Duarte sequence

    c_k = sum_{j=0}^{k} (-1)^j C(k,j) / zeta(2j+2)
        = sum_{n>=1} mu(n)/n^2 (1 - 1/n^2)^k

and its two-parameter version c_ab(k) (zeta(aj+b), n^-b, n^-a).

c_k is computed three ways: by the forward difference itself (exact
binomials, precision raised by k log10 2 digits to survive the
cancellation), by the Moebius sum through rieszcrit.series, and by the
asymptotic expansion over the nontrivial zeros of zeta,

    c_{k-1} ~ 2 k^(-3/4) sum_i (A_i cos(gamma_i ln k / 2) - B_i sin(gamma_i ln k / 2)),

with A_i + i B_i = Gamma(1 - rho_i/2) / (2 zeta'(rho_i)).  Each row of a zero
table stands for a zero and its conjugate, so its sinusoid is counted
twice.  The trivial zeros -2m add terms of order k^-(m+1); the first of
them, -(2 pi)^2 / (2 zeta(3) k (k+1)), outweighs the zero sum near k ~ 10^4
and is included by default.  Note the shift: the expansion
evaluated at k approximates c_{k-1}.
"""

import functools
import logging
import math
from dataclasses import dataclass
from math import comb

import mpmath
from mpmath import mp, mpf

from rieszcrit import series
from rieszcrit.errors import DomainError, PrecisionBudgetError
from rieszcrit.numerics import Method, PrecisionContext, SeriesResult, \
     as_mpf, reciprocal_zeta, zeta_real
from rieszcrit.riesz import DEFAULT_PARAMS, riesz_naive
from rieszcrit.sweep import integer_grid, parallel_map

log = logging.getLogger(__name__)

LOG10_2 = math.log10(2)

# |c_ab(k)| <= sum n^-2 = zeta(2) for (a,b) = (2,2)
CK_ABS_MAX = mpf('1.645')

# trivial-zero terms in ck_asymptotic unless told otherwise
TRIVIAL_TERMS = 1


@dataclass(frozen=True)
class ZetaZeroTerm:
    """One nontrivial zero 1/2 + i gamma with its residue data A + iB."""
    gamma: mpf
    A: mpf
    B: mpf

    def __post_init__(self):
        if not self.gamma > 0:
            raise DomainError("zero ordinate must be positive, got %s" % (self.gamma,))

    @property
    def amplitude(self):
        """Amplitude of the sinusoid the zero and its conjugate contribute."""
        return 2 * mp.sqrt(self.A ** 2 + self.B ** 2)

    @property
    def phase(self):
        """phi with 2 (A cos t - B sin t) = amplitude * cos(t + phi)."""
        return mp.atan2(self.B, self.A)


FIRST_ZERO = ZetaZeroTerm(mpf('14.134725141734693790'),
                          mpf('2.0291739e-5'),
                          mpf('-3.315924e-5'))

DEFAULT_ZEROS = (FIRST_ZERO,)


def load_zeros(path):
    """
    Read a zero table: one zero per line, 'gamma A B' separated by
    whitespace; blank lines and lines starting with '#' are skipped.
    """
    zeros = []
    with open(path) as fp:
        for lineno, line in enumerate(fp, 1):

            # skip empty lines or lines with comments ('#')
            line = line.strip()
            if not line or line.startswith('#'):
                continue

            fields = line.split()
            if len(fields) != 3:
                raise DomainError("%s:%d: expected 'gamma A B', got %r"
                                  % (path, lineno, line))
            try:
                with mp.workdps(30):
                    gamma, a, b = [mpf(f) for f in fields]
            except ValueError:
                raise DomainError("%s:%d: not a number in %r" % (path, lineno, line))
            zeros.append(ZetaZeroTerm(gamma, a, b))

    log.info('loaded %d zeros from %s', len(zeros), path)
    return zeros


def zero_decay_is_monotone(zeros):
    """True if |A + iB| does not increase with gamma across the table."""
    ordered = sorted(zeros, key=lambda z: z.gamma)
    amplitudes = [z.amplitude for z in ordered]
    return all(x >= y for x, y in zip(amplitudes, amplitudes[1:]))


################################################################################
## Evaluation.
################################################################################

def _check_k(k):
    if k != int(k) or k < 0:
        raise DomainError("k must be a nonnegative integer, got %r" % (k,))
    return int(k)


def forward_diff_digits(k, ctx):
    return int(math.ceil(k * LOG10_2)) + ctx.digits + 10


def ck_forward_diff(k, ctx, params=DEFAULT_PARAMS):
    """
    c_ab(k) as the alternating binomial sum, exact binomials, at
    ceil(k log10 2) + digits + 10 working digits.
    """
    k = _check_k(k)
    dps = forward_diff_digits(k, ctx)
    if dps > ctx.max_digits:
        raise PrecisionBudgetError(
            "forward differences at k = %d need %d digits (ceiling %d); "
            "use ck_moebius" % (k, dps, ctx.max_digits))

    a = as_mpf(params.a)
    b = as_mpf(params.b)
    with mp.workdps(dps):
        zctx = PrecisionContext(dps, mpf(10) ** (10 - dps), max(dps, ctx.max_digits))
        value = mp.fsum((-1) ** j * comb(k, j) * reciprocal_zeta(a * j + b, zctx)
                        for j in range(k + 1))
        error = mpf(2) ** k * 3 * mpf(10) ** (10 - dps)
    return SeriesResult(value, error, k + 1, Method.FORWARD_DIFF)


def ck_moebius(k, params, table, ctx):
    """
    c_ab(k) = sum mu(n)/n^b (1 - 1/n^a)^k through the tail expansion; with
    a single tail term this is the accelerated identity
    c_k = 1/zeta(b) - sum_{n<=N} mu(n)/n^b (1 - (1 - 1/n^a)^k) + O(k N^(1-a-b)).
    """
    k = _check_k(k)
    kernel = series.BinomialKernel(params.a, params.b, k)
    return series.expand(kernel, table, ctx.tol, ctx, Method.MOEBIUS,
                         rigorous=params.rigorous)


def trivial_zero_terms(k, count=TRIVIAL_TERMS, ctx=None):
    """
    sum_{m=1}^{count} (-1)^m m! (2 pi)^(2m) / ((2m)! zeta(2m+1) k (k+1) ... (k+m)),
    the residues at the trivial zeros in the same convention as
    ck_asymptotic.

    >>> from mpmath import nstr
    >>> nstr(trivial_zero_terms(10 ** 4) * 10 ** 8, 6)
    '-16.4196'
    """
    ctx = ctx or PrecisionContext()
    k = mpf(k)
    total = mpf(0)
    rising = k
    for m in range(1, count + 1):
        rising *= k + m
        total += _trivial_coefficient(m, ctx) / rising
    return total


def _trivial_coefficient(m, ctx):
    return ((-1) ** m * mp.factorial(m) * (2 * mp.pi) ** (2 * m)
            / (mp.factorial(2 * m) * zeta_real(2 * m + 1, ctx)))


def trivial_zero_tail(k, count=TRIVIAL_TERMS, ctx=None):
    """
    sum_{j>=k} trivial_zero_terms(j + 1), in closed form: the m-th term
    telescopes to its coefficient over m (k+1) (k+2) ... (k+m).

    >>> from mpmath import nstr
    >>> nstr(trivial_zero_tail(10 ** 5) * 10 ** 5, 6)
    '-16.421'
    """
    ctx = ctx or PrecisionContext()
    k = mpf(k)
    total = mpf(0)
    rising = mpf(1)
    for m in range(1, count + 1):
        rising *= k + m
        total += _trivial_coefficient(m, ctx) / (m * rising)
    return total


def ck_asymptotic(k, zeros=DEFAULT_ZEROS, trivial=TRIVIAL_TERMS):
    """
    The zero expansion at k, i.e. the asymptotic value of c_{k-1}, with
    'trivial' terms from the trivial zeros.

    Each ZetaZeroTerm stands for a zero and its conjugate, hence the
    factor 2 on the sum.  The trivial zeros add -(2 pi)^2 / (2 zeta(3) k^2)
    at leading order, which is not small next to the k^(-3/4) part until
    k is well past 10^4; pass trivial=0 for the nontrivial zeros alone.
    """
    if not zeros:
        raise DomainError("the asymptotic formula needs at least one zero")
    if k < 2:
        raise DomainError("the asymptotic formula needs k >= 2, got %r" % (k,))
    k = mpf(k)
    t = mp.log(k) / 2
    total = 2 * mp.fsum(z.A * mp.cos(z.gamma * t) - z.B * mp.sin(z.gamma * t)
                        for z in zeros)
    return k ** (-mpf(3) / 4) * total + trivial_zero_terms(k, trivial)


def asymptotic_envelope(k, zeros=DEFAULT_ZEROS):
    """k^(-3/4) sum of amplitudes: bounds the zero part of ck_asymptotic(k)."""
    return mpf(k) ** (-mpf(3) / 4) * mp.fsum(z.amplitude for z in zeros)


def model_sign_changes(k_lo, k_hi, zero=FIRST_ZERO):
    """
    The k in [k_lo, k_hi] where the single-zero model changes sign:
    gamma ln k / 2 + phi = pi/2 + m pi.  Consecutive points are a factor
    exp(2 pi / gamma) apart.
    """
    log_lo = mp.log(k_lo)
    log_hi = mp.log(k_hi)
    points = []
    m = int(mp.floor((zero.gamma * log_lo / 2 + zero.phase - mp.pi / 2) / mp.pi))
    while True:
        log_k = 2 * (mp.pi / 2 + m * mp.pi - zero.phase) / zero.gamma
        if log_k > log_hi:
            break
        if log_k >= log_lo:
            points.append(mp.exp(log_k))
        m += 1
    return points


def near_sign_change(k, changes, fraction=0.02):
    """True if k is within 'fraction' (relative) of one of 'changes'."""
    return any(abs(k - c) <= fraction * c for c in changes)


def riesz_ck_gap(k, params, table, ctx, tol=None):
    """R_ab(k)/k - c_ab(k) summed as one absolutely convergent series."""
    k = _check_k(k)
    if k == 0:
        raise DomainError("R(k)/k is undefined at k = 0")
    return series.gap_sum(params.a, params.b, k, table,
                          ctx.tol if tol is None else tol, ctx)


def exponential_generating_sum(x, terms, ctx):
    """
    sum_{k<=K} c_k x^k / k!, which tends to e^x R(x)/x.  The dropped part
    is bounded with |c_k| <= zeta(2).
    """
    x = as_mpf(x)
    if x < 0:
        raise DomainError("x must be >= 0")
    values = [ck_forward_diff(k, ctx) for k in range(terms + 1)]
    with mp.workdps(ctx.digits + 10):
        total = mp.fsum(c.value * x ** k / mp.factorial(k)
                        for k, c in enumerate(values))
        rounding = mp.fsum(c.error_bound * x ** k / mp.factorial(k)
                           for k, c in enumerate(values))
        first_dropped = x ** (terms + 1) / mp.factorial(terms + 1)
        if x < terms + 2:
            remainder = CK_ABS_MAX * first_dropped / (1 - x / (terms + 2))
        else:
            remainder = mp.inf
    return SeriesResult(total, remainder + rounding, terms + 1, Method.DIRECT)


def generating_target(x, ctx):
    """e^x R(x)/x, the closed form of exponential_generating_sum."""
    r = riesz_naive(x, ctx)
    with mp.workdps(ctx.digits + 10):
        factor = mp.exp(x) / x
        return SeriesResult(r.value * factor, r.error_bound * factor,
                            r.terms_used, Method.NAIVE)


def ck_eval(k, method, ctx, table=None, params=DEFAULT_PARAMS,
            zeros=DEFAULT_ZEROS):
    """Dispatch on a method name: 'diff', 'moebius' or 'asymptotic'."""
    method = Method(method)
    if method is Method.FORWARD_DIFF:
        return ck_forward_diff(k, ctx, params)
    if method is Method.MOEBIUS:
        return ck_moebius(k, params, table, ctx)
    if method is Method.ASYMPTOTIC:
        if not params.is_riesz:
            raise DomainError("the zero expansion is for (a,b) = (2,2) only")
        # the expansion at k+1 approximates c_k
        value = ck_asymptotic(k + 1, zeros)
        return SeriesResult(value, mpf(0), len(zeros), Method.ASYMPTOTIC,
                            rigorous=False)
    raise DomainError("method %r does not evaluate c_k" % (method.value,))


def _ck_point(k, table, method, ctx, params, zeros):
    return k, ck_eval(k, method, ctx, table, params, zeros)


def ck_sweep(k_lo, k_hi, samples, method, ctx, table=None,
             params=DEFAULT_PARAMS, log_spacing=True, workers=1,
             zeros=DEFAULT_ZEROS):
    """[(k, c_ab(k))] over an integer grid, logarithmic by default."""
    ks = integer_grid(k_lo, k_hi, samples, log_spacing)
    func = functools.partial(_ck_point, method=Method(method).value, ctx=ctx,
                             params=params, zeros=tuple(zeros))
    return parallel_map(func, ks, workers, table)


def fit_envelope(points, exponent=mpf(-3) / 4):
    """
    Smallest A with |c_k| <= A k^exponent over the sampled (k, value)
    points.
    """
    if not points:
        raise DomainError("no points to fit an envelope to")
    return max(abs(as_mpf(v)) * mpf(k) ** (-exponent) for k, v in points)

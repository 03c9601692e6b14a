"""
Sums built from the Baez-Duarte sequence.

- the generating function sum_k c_k t^k, which equals
  (1/(1-t)) sum_k (-t/(1-t))^k / zeta(2k+2) on -1 <= t < 1/2;
- its value at t = -1, the constant sum_{k>=1} 2^-k / zeta(2k)
  = 0.7825279853...;
- alternating partial sums sum_{j<k} (-1)^j c_j, which approach that
  constant like const - (-1)^k c_k / 2;
- partial sums S_{k-1} = sum_{j<k} c_j = sum_n mu(n) (1 - (1 - 1/n^2)^k),
  which oscillate around 1/zeta(0) = -2 with amplitude O(k^(1/4)), and
  their two-parameter versions centred at 1/zeta(b-a).
"""

import functools
import logging
import math
from dataclasses import dataclass

import mpmath
from mpmath import mp, mpf

from rieszcrit import series
from rieszcrit.baezduarte import DEFAULT_ZEROS, TRIVIAL_TERMS, ck_moebius, \
     trivial_zero_tail
from rieszcrit.bounds import fit_power_law
from rieszcrit.errors import DomainError
from rieszcrit.numerics import Method, PrecisionContext, SeriesResult, \
     as_mpf, zeta_even, zeta_real
from rieszcrit.riesz import DEFAULT_PARAMS, RieszParams
from rieszcrit.sweep import integer_grid, parallel_map

log = logging.getLogger(__name__)

# |c_k| <= zeta(2) - 1 for k >= 1 (the n = 1 term vanishes)
CK_TAIL_MAX = mpf('0.645')


@dataclass(frozen=True)
class SumSweepPoint:
    k: int
    partial_sum: mpf
    deviation: mpf      # partial_sum - center
    error_bound: mpf
    center: mpf


def _check_t(t):
    t = as_mpf(t)
    if not -1 <= t < mpf(1) / 2:
        raise DomainError("t must lie in [-1, 1/2), got %s" % (mpmath.nstr(t, 10),))
    return t


################################################################################
## Generating function.
################################################################################

def generating_function_lhs(t, K, table, ctx):
    """
    sum_{k<=K} c_k t^k.  With K=None the order is chosen from the tail
    bound 0.645 |t|^(K+1) / (1 - |t|); at t = -1, where the series only
    converges conditionally, the sum is resummed over n as
    sum_n mu(n) / (t + (1-t) n^2).
    """
    with mp.workdps(ctx.digits + 10):
        t = _check_t(t)
        if abs(t) == 1 or (K is None and abs(t) > mpf('0.9')):
            kernel = series.GeometricKernel(t)
            return series.expand(kernel, table, ctx.tol, ctx, Method.RESUMMED)

        if t == 0:
            c0 = ck_moebius(0, DEFAULT_PARAMS, table, ctx)
            return SeriesResult(c0.value, c0.error_bound, 1, Method.DIRECT)

        at = abs(t)
        if K is None:
            K = 0
            while CK_TAIL_MAX * at ** (K + 1) / (1 - at) > ctx.tol / 2:
                K += 1
        remainder = CK_TAIL_MAX * at ** (K + 1) / (1 - at)

    term_ctx = ctx.with_tol(ctx.tol / (4 * (K + 1)))
    cs = [ck_moebius(k, DEFAULT_PARAMS, table, term_ctx) for k in range(K + 1)]
    with mp.workdps(ctx.digits + 10):
        value = mp.fsum(c.value * t ** k for k, c in enumerate(cs))
        error = remainder + mp.fsum(c.error_bound * at ** k for k, c in enumerate(cs))
    return SeriesResult(value, error, K + 1, Method.DIRECT)


def generating_function_rhs(t, J, ctx):
    """
    (1/(1-t)) sum_{k<=J} q^k / zeta(2k+2), q = -t/(1-t); remainder
    |q|^(J+1) / ((1-|q|) |1-t|) since 0 < 1/zeta(s) < 1.
    """
    with mp.workdps(ctx.digits + 10):
        t = _check_t(t)
        q = -t / (1 - t)
        aq = abs(q)

        def remainder(order):
            return aq ** (order + 1) / ((1 - aq) * abs(1 - t))

        if J is None:
            J = 0
            while remainder(J) > ctx.tol / 2:
                J += 1

        value = mp.fsum(q ** k / zeta_even(k + 1, ctx) for k in range(J + 1)) / (1 - t)
        error = remainder(J) + (J + 1) * mpf(10) ** (-ctx.digits)
    return SeriesResult(value, error, J + 1, Method.DIRECT)


################################################################################
## The alternating constant.
################################################################################

def _constant_ctx(digits):
    return PrecisionContext(max(30, digits + 15), mpf(10) ** (-(digits + 5)))


def alternating_sum_constant(digits):
    """
    sum_{k>=1} 2^-k / zeta(2k) to 'digits' digits, with
    K = ceil((digits + 2) log2 10) terms (the rest is below 2^-K).
    """
    ctx = _constant_ctx(digits)
    K = int(math.ceil((digits + 2) * math.log2(10)))
    with mp.workdps(ctx.digits + 10):
        value = mp.fsum(mpf(2) ** -k / zeta_even(k, ctx) for k in range(1, K + 1))
        error = mpf(2) ** -K + K * mpf(10) ** (-ctx.digits)
    return SeriesResult(value, error, K, Method.DIRECT)


def alternating_sum_abel(digits):
    """
    The same constant from Abel summation:
    1 + sum_{k>=1} (1 - 2^-k) (1/zeta(2k) - 1/zeta(2k+2)); the dropped
    part after K terms is at most 1 - 1/zeta(2K+2) <= zeta(2K+2) - 1.
    """
    ctx = _constant_ctx(digits)
    with mp.workdps(ctx.digits + 10):
        target = mpf(10) ** -(digits + 2)
        K = 1
        while zeta_even(K + 1, ctx) - 1 > target:
            K += 1
        reciprocal = [1 / zeta_even(k, ctx) for k in range(1, K + 2)]
        value = 1 + mp.fsum((1 - mpf(2) ** -k) * (reciprocal[k - 1] - reciprocal[k])
                            for k in range(1, K + 1))
        error = zeta_even(K + 1, ctx) - 1 + K * mpf(10) ** (-ctx.digits)
    return SeriesResult(value, error, K, Method.DIRECT)


def alternating_partial_sums(k_max, table, ctx):
    """[sum_{j<k} (-1)^j c_j for k = 1 .. k_max] with their error bounds."""
    partial = []
    total = mpf(0)
    error = mpf(0)
    with mp.workdps(ctx.digits + 10):
        for j in range(k_max):
            c = ck_moebius(j, DEFAULT_PARAMS, table, ctx)
            total += (-1) ** j * c.value
            error += c.error_bound
            partial.append(SeriesResult(total, error, j + 1, Method.MOEBIUS))
    return partial


def alternating_partial_sum(k, table, ctx):
    """sum_{j<k} (-1)^j c_j."""
    if k < 1:
        raise DomainError("k must be >= 1, got %r" % (k,))
    return alternating_partial_sums(k, table, ctx)[-1]


def alternating_model(k, ck, constant):
    """const - (-1)^k c_k / 2, the prediction for sum_{j<k} (-1)^j c_j."""
    return constant - (-1) ** k * ck / 2


################################################################################
## Partial sums and their oscillation.
################################################################################

def partial_sum_center(params=DEFAULT_PARAMS, ctx=None):
    """1/zeta(b-a); raises PoleError when b - a = 1."""
    ctx = ctx or PrecisionContext()
    with mp.workdps(ctx.digits + 10):
        return 1 / zeta_real(as_mpf(params.b) - as_mpf(params.a), ctx)


def partial_sum_sk(k, table, ctx, params=DEFAULT_PARAMS, center=None):
    """
    S_{k-1} = sum_{j<k} c_ab(j) = sum_n mu(n) n^(a-b) (1 - (1 - n^-a)^k),
    and its deviation from the center 1/zeta(b-a).
    """
    if k != int(k) or k < 1:
        raise DomainError("k must be a positive integer, got %r" % (k,))
    k = int(k)
    if center is None:
        center = partial_sum_center(params, ctx)

    base = as_mpf(params.b) - as_mpf(params.a)
    kernel = series.ComplementKernel(params.a, base, k)
    result = series.expand(kernel, table, ctx.tol, ctx, Method.MOEBIUS,
                           rigorous=params.rigorous)
    with mp.workdps(ctx.digits + 10):
        deviation = result.value - center
    return SumSweepPoint(k, result.value, deviation, result.error_bound, center)


def _sk_point(k, table, ctx, params, center):
    return partial_sum_sk(k, table, ctx, params, center)


def partial_sum_sweep(k_lo, k_hi, samples, ctx, table, params=DEFAULT_PARAMS,
                      log_spacing=True, workers=1, ks=None):
    """[SumSweepPoint] over an integer grid (or the given ks)."""
    if ks is None:
        ks = integer_grid(k_lo, k_hi, samples, log_spacing)
    center = partial_sum_center(params, ctx)
    func = functools.partial(_sk_point, ctx=ctx, params=params, center=center)
    return parallel_map(func, ks, workers, table)


def _deviation_sign(point):
    if abs(point.deviation) <= point.error_bound:
        return 0
    return 1 if point.deviation > 0 else -1


def find_center_crossings(k_lo, k_hi, table, ctx, params=DEFAULT_PARAMS,
                          samples=200, workers=1):
    """
    The k in [k_lo, k_hi] where S_{k-1} - center changes sign: a scan on a
    geometric grid, then integer bisection between sign changes.  Each
    crossing is the first k whose sign differs from the point before it.
    """
    scan = partial_sum_sweep(k_lo, k_hi, samples, ctx, table, params,
                             workers=workers)
    center = scan[0].center
    crossings = []
    for left, right in zip(scan, scan[1:]):
        s_left, s_right = _deviation_sign(left), _deviation_sign(right)
        if s_left == 0 or s_right == 0 or s_left == s_right:
            continue
        lo, hi = left.k, right.k
        while hi - lo > 1:
            mid = (lo + hi) // 2
            s_mid = _deviation_sign(partial_sum_sk(mid, table, ctx, params, center))
            if s_mid == s_left:
                lo = mid
            else:
                hi = mid
        log.info('partial sums cross the center between k = %d and %d', lo, hi)
        crossings.append(hi)
    return crossings


def _oscillation_coefficients(zero):
    # the zero and its conjugate
    scale = (mpf(1) / 4 + zero.gamma ** 2) / 2
    p = (zero.A + 2 * zero.B * zero.gamma) / scale
    q = (zero.B - 2 * zero.A * zero.gamma) / scale
    return p, q


def oscillation_model(k, zeros=DEFAULT_ZEROS, trivial=TRIVIAL_TERMS):
    """
    The model of S_{k-1} + 2 from integrating the zero expansion of c_k:
    k^(1/4) sum_i (P_i cos(gamma_i ln k / 2) - Q_i sin(gamma_i ln k / 2))
    plus the drift of the trivial zeros, about 16.42 / (k + 1).  The
    drift outweighs the oscillation near its sign changes up to k ~ 10^6;
    trivial=0 leaves the oscillation alone.
    """
    if not zeros:
        raise DomainError("the oscillation model needs at least one zero")
    if k < 2:
        raise DomainError("the oscillation model needs k >= 2, got %r" % (k,))
    k = mpf(k)
    t = mp.log(k) / 2
    total = mpf(0)
    for zero in zeros:
        p, q = _oscillation_coefficients(zero)
        total += p * mp.cos(zero.gamma * t) - q * mp.sin(zero.gamma * t)
    return k ** (mpf(1) / 4) * total - trivial_zero_tail(k, trivial)


def oscillation_amplitude(k, zeros=DEFAULT_ZEROS):
    """k^(1/4) sum_i sqrt(P_i^2 + Q_i^2), bounding oscillation_model(k, trivial=0)."""
    if not zeros:
        raise DomainError("the oscillation model needs at least one zero")
    total = mp.fsum(mp.sqrt(p ** 2 + q ** 2)
                    for p, q in map(_oscillation_coefficients, zeros))
    return mpf(k) ** (mpf(1) / 4) * total


################################################################################
## Generalised partial sums.
################################################################################

def conjecture_exponents(a, b):
    """
    (exponent expected under RH, unconditional exponent) for the growth
    of the deviations: ((a - b + 1/2)/a, (1 - b + 2a)/(2a)).

    >>> conjecture_exponents(2, 2)
    (0.25, 0.75)
    """
    a = float(a)
    b = float(b)
    return (a - b + 0.5) / a, (1 - b + 2 * a) / (2 * a)


def conjecture_explorer(a, b, k_list, table, ctx, workers=1):
    """
    [(k, sum mu(n)/n^(b-a) (1 - (1 - 1/n^a)^k), center)] for the given k,
    the center being 1/zeta(b-a).
    """
    params = RieszParams(a, b)
    if not as_mpf(b) >= as_mpf(a):
        raise DomainError("the explorer needs b >= a, got a=%s b=%s" % (a, b))
    points = partial_sum_sweep(None, None, None, ctx, table, params,
                               workers=workers, ks=list(k_list))
    return [(p.k, p.partial_sum, p.center) for p in points]


def fit_deviation_exponent(points):
    """Power-law fit of |deviation| against k over SumSweepPoints."""
    usable = [(p.k, abs(p.deviation)) for p in points if p.deviation != 0]
    return fit_power_law([k for k, _ in usable], [d for _, d in usable])

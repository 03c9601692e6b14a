"""
riesz -- the Riesz function and its two-parameter generalisation
-----------------------------------------------------------------

    R(x) = x sum_{k>=0} (-x)^k / (k! zeta(2k+2))
         = x sum_{n>=1} mu(n)/n^2 exp(-x/n^2)

and, for a > 0,

    R_ab(x) = x sum_{k>=0} (-x)^k / (k! zeta(ak+b))
            = x sum_{n>=1} mu(n)/n^b exp(-x/n^a),

so that R = R_22.  Three evaluation methods are offered:

- riesz_naive: the power series, at a working precision raised to absorb
  the cancellation between terms of size e^x;
- riesz_kummer: the Moebius form with the first J Taylor terms of the
  exponential subtracted and summed in closed form through zeta(2j+2);
  J = 1 is  R(x) = x (6/pi^2 + sum mu(n)/n^2 (exp(-x/n^2) - 1));
- riesz_moebius: the Moebius form with the tail expansion of
  rieszcrit.series.
"""

import functools
import logging
import math
from dataclasses import dataclass

import mpmath
import numpy
from mpmath import mp, mpf

from rieszcrit import series
from rieszcrit.errors import BracketError, DomainError, PrecisionBudgetError, \
     ResourceError
from rieszcrit.numerics import Method, PrecisionContext, SeriesResult, \
     as_mpf, reciprocal_zeta, zeta_even
from rieszcrit.sweep import linear_grid, log_grid, parallel_map

log = logging.getLogger(__name__)

LOG10_E = math.log10(math.e)

# bisection hands over to secant steps once the bracket is this narrow
SECANT_WIDTH = mpf('1e-6')


@dataclass(frozen=True)
class RieszParams:
    """
    Exponents of R_ab and c_ab.  (2, 2) is the Riesz/Baez-Duarte case,
    (2, 1) the Hardy-Littlewood case.
    """
    a: object = 2
    b: object = 2

    def __post_init__(self):
        if not as_mpf(self.a) > 0:
            raise DomainError("a must be positive, got %r" % (self.a,))

    @property
    def rigorous(self):
        """Moebius sums converge absolutely (and are bounded) only for b > 1."""
        return as_mpf(self.b) > 1

    @property
    def is_riesz(self):
        return as_mpf(self.a) == 2 and as_mpf(self.b) == 2

    def __str__(self):
        return '(%s,%s)' % (self.a, self.b)


DEFAULT_PARAMS = RieszParams()


def _check_x(x, allow_negative=False):
    x = as_mpf(x)
    if x < 0 and not allow_negative:
        raise DomainError("x must be >= 0, got %s" % (mpmath.nstr(x, 10),))
    return x


def _zero(method):
    return SeriesResult(mpf(0), mpf(0), 0, method)


################################################################################
## Power series.
################################################################################

def naive_digits(x, ctx):
    """
    Working digits for the power series at x: ctx.digits + |x| log10 e + 5,
    plus guard digits for the rounding of up to 4|x| + ctx.digits + 10
    terms of size up to |x| e^|x|.
    """
    ax = abs(float(x))
    guard = int(math.ceil(math.log10((ax + 1) * (4 * ax + ctx.digits + 10))))
    return ctx.digits + int(math.ceil(ax * LOG10_E)) + 5 + guard


def riesz_naive(x, ctx, params=DEFAULT_PARAMS):
    """
    R_ab(x) from its power series.  Negative x is accepted here (and only
    here); R(x) ~ x e^-x as x -> -oo.
    """
    with mp.workdps(ctx.digits + 10):
        x = _check_x(x, allow_negative=True)
    if x == 0:
        return _zero(Method.NAIVE)

    dps = naive_digits(x, ctx)
    if dps > ctx.max_digits:
        raise PrecisionBudgetError(
            "the power series at x = %s needs %d digits (ceiling %d); "
            "use riesz_kummer or riesz_moebius"
            % (mpmath.nstr(x, 8), dps, ctx.max_digits))

    a = as_mpf(params.a)
    b = as_mpf(params.b)
    ax = abs(x)
    with mp.workdps(dps):
        zctx = PrecisionContext(dps, mpf(10) ** (10 - dps),
                                max(dps, ctx.max_digits))
        terms = []
        power = mpf(1)
        k = 0
        while True:
            terms.append(power * reciprocal_zeta(a * k + b, zctx))
            k += 1
            power *= -x / k
            # |1/zeta(s)| <= 1 for s > 1: geometric bound on x sum_{j>=k}
            if k >= 2 * ax + 2 and a * k + b > 1:
                remainder = ax * abs(power) / (1 - ax / (k + 1))
                if remainder <= ctx.tol / 2:
                    break

        value = x * mp.fsum(terms)
        rounding = ax * mp.exp(ax) * (k + 1) * mpf(10) ** (10 - dps)

    log.debug('riesz_naive(%s): %d terms at %d digits', mpmath.nstr(x, 8), k, dps)
    return SeriesResult(value, remainder + rounding, k, Method.NAIVE)


################################################################################
## Kummer-accelerated Moebius form.
################################################################################

@dataclass(frozen=True)
class KummerPlan:
    order: int
    n: int
    digits: int         # 0 for a float64 head
    truncation: mpf


def kummer_n(x, order, tol):
    """
    Smallest N with x^(J+1) / (J! (2J+1) N^(2J+1)) <= tol.

    >>> kummer_n(100, 1, mpf('1e-12'))
    149381
    """
    x = as_mpf(x)
    bound = x ** (order + 1) / (mp.factorial(order) * (2 * order + 1) * tol)
    return max(1, int(mp.ceil(bound ** (mpf(1) / (2 * order + 1)))))


def _kummer_truncation(x, order, n):
    return (x ** (order + 1)
            / (mp.factorial(order) * (2 * order + 1) * mpf(n) ** (2 * order + 1)))


def _kummer_guard(x, order):
    """log10 of the largest subtracted term x^j/j!, j < J."""
    fx = float(x)
    sizes = [j * math.log10(fx) - math.lgamma(j + 1) / math.log(10)
             for j in range(order)] if fx > 0 else [0]
    return max([0.0] + sizes)


def _plan_kummer(x, ctx, table, order=None):
    tol = ctx.tol
    float_ok = 16 * series.EPS * float(x) <= float(tol) / 4

    if order is not None:
        n = kummer_n(x, order, tol)
        table.require(n)
        digits = 0
        if order > 1 or not float_ok:
            digits = _kummer_digits(x, order, n, ctx)
        return KummerPlan(order, n, digits, _kummer_truncation(x, order, n))

    best = None
    best_cost = None
    smallest = None
    for order in range(1, series.MAX_ORDER + 1):
        n = kummer_n(x, order, tol / 2)
        smallest = n if smallest is None else min(smallest, n)
        if n > table.n_max:
            continue
        if order == 1 and float_ok:
            digits, cost = 0, n
        elif n <= series.MP_HEAD_LIMIT:
            try:
                digits = _kummer_digits(x, order, n, ctx)
            except PrecisionBudgetError:
                continue
            cost = 40 * n * (1 + digits // 50) + order
        else:
            continue
        if best is None or cost < best_cost:
            best = KummerPlan(order, n, digits, _kummer_truncation(x, order, n))
            best_cost = cost

    if best is None:
        if smallest is not None and smallest > table.n_max:
            raise ResourceError("Moebius table too small for the Kummer form: "
                                "N = %d needed" % (smallest,), needed=smallest)
        raise PrecisionBudgetError("no Kummer order meets tol %s at x = %s"
                                   % (mpmath.nstr(tol, 3), mpmath.nstr(x, 8)))
    return best


def _kummer_digits(x, order, n, ctx):
    digits = (ctx.digits + 10 + int(math.ceil(_kummer_guard(x, order)))
              + int(math.ceil(math.log10(n + 1))))
    if digits > ctx.max_digits:
        raise PrecisionBudgetError("Kummer order %d at x = %s needs %d digits"
                                   % (order, mpmath.nstr(x, 8), digits))
    return digits


def riesz_kummer(x, table, ctx, order=None):
    """
    R(x) with the first 'order' Taylor terms of exp(-x/n^2) subtracted:

        R(x) = x [ sum_{j<J} (-x)^j / (j! zeta(2j+2))
                   + sum_n mu(n)/n^2 (exp(-x/n^2) - P_J(x/n^2)) ],

    P_J being the degree J-1 Taylor polynomial of exp(-v).  The dropped
    tail is at most x^(J+1) / (J! (2J+1) N^(2J+1)).  order=None chooses
    J (and N) for the least work.
    """
    with mp.workdps(ctx.digits + 10):
        x = _check_x(x)
    if x == 0:
        return _zero(Method.KUMMER)

    plan = _plan_kummer(x, ctx, table, order)
    n_values, signs = table.support(plan.n)

    if plan.digits == 0:
        nf = n_values.astype(numpy.float64)
        w = numpy.expm1(-float(x) / (nf * nf)) / (nf * nf)
        head, head_err = series.float_sum(signs * w,
                                          8 * series.EPS * numpy.abs(w))
        with mp.workdps(ctx.digits + 10):
            closed = 1 / zeta_even(1, ctx)
            value = x * (closed + head)
            error = plan.truncation + x * head_err
        return SeriesResult(value, error, plan.n, Method.KUMMER)

    dps = plan.digits
    with mp.workdps(dps):
        zctx = PrecisionContext(dps, mpf(10) ** (10 - dps), max(dps, ctx.max_digits))
        closed = mp.fsum((-x) ** j / (mp.factorial(j) * zeta_even(j + 1, zctx))
                         for j in range(plan.order))

        def weight(n):
            v = x / mpf(n) ** 2
            taylor = mp.fsum((-v) ** j / mp.factorial(j) for j in range(plan.order))
            return (mp.exp(-v) - taylor) / mpf(n) ** 2

        head = mp.fsum(sign * weight(n)
                       for n, sign in zip(n_values.tolist(), signs.tolist()))
        value = x * (closed + head)
        error = (plan.truncation
                 + x * (len(n_values) + plan.order + 1) * mpf(10) ** (10 - dps))

    log.debug('riesz_kummer(%s): J=%d N=%d at %d digits',
              mpmath.nstr(x, 8), plan.order, plan.n, dps)
    return SeriesResult(value, error, plan.n, Method.KUMMER)


################################################################################
## Moebius form with tail expansion.
################################################################################

def riesz_moebius(x, params, table, ctx):
    """
    R_ab(x) = x sum mu(n)/n^b exp(-x/n^a).

    The result is flagged non-rigorous for b <= 1, where the Moebius sum
    converges only conditionally.
    """
    with mp.workdps(ctx.digits + 10):
        x = _check_x(x)
    if x == 0:
        return _zero(Method.MOEBIUS)

    kernel = series.ExponentialKernel(params.a, params.b, x)
    with mp.workdps(ctx.digits + 10):
        tol = ctx.tol / x
    result = series.expand(kernel, table, tol, ctx, Method.MOEBIUS,
                           rigorous=params.rigorous)
    with mp.workdps(ctx.digits + 10):
        return result.scaled(x)


def riesz_eval(x, method, ctx, table=None, params=DEFAULT_PARAMS, order=None):
    """Dispatch on a method name: 'naive', 'kummer' or 'moebius'."""
    method = Method(method)
    if method is Method.NAIVE:
        return riesz_naive(x, ctx, params)
    if method is Method.KUMMER:
        if not params.is_riesz:
            raise DomainError("the Kummer form is implemented for (a,b) = (2,2) only")
        return riesz_kummer(x, table, ctx, order)
    if method is Method.MOEBIUS:
        return riesz_moebius(x, params, table, ctx)
    raise DomainError("method %r does not evaluate R(x)" % (method.value,))


################################################################################
## First zero.
################################################################################

def _sign(result):
    """+1 / -1, or 0 when the enclosure contains zero."""
    if abs(result.value) <= result.error_bound:
        return 0
    return 1 if result.value > 0 else -1


def find_first_zero(bracket_lo, bracket_hi, ctx, params=DEFAULT_PARAMS,
                    refine=True):
    """
    Root of R_ab in [bracket_lo, bracket_hi] by bisection on certified
    signs, switching to secant steps (kept inside the bracket) once the
    bracket is narrow.
    """
    def f(t):
        return riesz_naive(t, ctx, params)

    with mp.workdps(ctx.digits + 10):
        lo = as_mpf(bracket_lo)
        hi = as_mpf(bracket_hi)
        tol = ctx.tol
    if not lo < hi:
        raise DomainError("empty bracket [%s, %s]" % (lo, hi))

    r_lo, r_hi = f(lo), f(hi)
    s_lo, s_hi = _sign(r_lo), _sign(r_hi)
    if s_lo == 0:
        return lo
    if s_hi == 0:
        return hi
    if s_lo == s_hi:
        raise BracketError("R has the same sign at %s and %s"
                           % (mpmath.nstr(lo, 10), mpmath.nstr(hi, 10)))

    with mp.workdps(ctx.digits + 10):
        prev, f_prev = lo, r_lo.value
        cur, f_cur = hi, r_hi.value
        steps = 0
        while hi - lo > tol:
            steps += 1
            guess = (lo + hi) / 2
            secant = False
            if refine and hi - lo < SECANT_WIDTH and f_cur != f_prev:
                candidate = cur - f_cur * (cur - prev) / (f_cur - f_prev)
                if lo < candidate < hi:
                    guess, secant = candidate, True

            r = f(guess)
            s = _sign(r)
            if s == 0:
                return guess
            step = abs(guess - cur)
            prev, f_prev, cur, f_cur = cur, f_cur, guess, r.value
            if s == s_lo:
                lo = guess
            else:
                hi = guess

            if secant:
                # step just past the estimate to close the bracket on it
                delta = max(2 * step, tol / 4)
                trial = guess + delta if s == s_lo else guess - delta
                if lo < trial < hi:
                    rp = f(trial)
                    sp = _sign(rp)
                    if sp == 0:
                        return trial
                    prev, f_prev, cur, f_cur = cur, f_cur, trial, rp.value
                    if sp == s_lo:
                        lo = trial
                    else:
                        hi = trial

        root = (lo + hi) / 2
    log.debug('find_first_zero: %d steps, root %s', steps, mpmath.nstr(root, 20))
    return root


################################################################################
## Sweeps.
################################################################################

def _riesz_point(x, table, method, ctx, params):
    return x, riesz_eval(x, method, ctx, table, params)


def riesz_sweep(x_lo, x_hi, samples, method, ctx, table=None,
                params=DEFAULT_PARAMS, log_spacing=False, workers=1):
    """
    [(x, R_ab(x))] over a linear (or logarithmic) grid, in order of x.
    """
    if log_spacing:
        xs = log_grid(x_lo, x_hi, samples)
    else:
        xs = linear_grid(x_lo, x_hi, samples)
    func = functools.partial(_riesz_point, method=Method(method).value,
                             ctx=ctx, params=params)
    return parallel_map(func, xs, workers, table)

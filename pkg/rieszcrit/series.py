"""
series -- Moebius-weighted sums with rigorous truncation
---------------------------------------------------------

Every absolutely convergent sum the package evaluates has the shape

    F = sum_{n>=1} mu(n) n^-base g(n^-a)

with g analytic at 0, g(u) = sum_j c_j u^j.  F is split at N:

- the head sum_{n<=N} mu(n) n^-base g(n^-a) is summed term by term, in
  float64 with a bound on the rounding error when that bound is small
  enough, in extended precision otherwise;
- the tail is expanded in powers of n^-a, and each power contributes
  c_j T(base + a j, N), where T(s, N) = 1/zeta(s) - sum_{n<=N} mu(n) n^-s
  is the exact Moebius tail;
- the terms j >= J are dropped; if |sum_{j>=J} c_j u^j| <= R_J u^J on
  0 < u <= N^-a the dropped part is at most R_J N^(1-s_J)/(s_J - 1).

J = 0 is plain truncation; J = 1 for g(u) = (1-u)^k is the accelerated
identity c_k = 1/zeta(b) - sum mu(n) n^-b (1 - (1-u)^k).  The planner picks
J and N (a power of two, so tails are shared between nearby arguments)
to minimise the work subject to the tolerance.

The same machinery with the Moebius weights replaced by 1 and T by the
Hurwitz zeta function evaluates the plain sums of the Corollary 1 bound.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from math import comb

import mpmath
import numpy
from mpmath import mp, mpf

from rieszcrit.errors import DomainError, PrecisionBudgetError, ResourceError
from rieszcrit.numerics import Method, PrecisionContext, SeriesResult, \
     as_mpf, reciprocal_zeta

log = logging.getLogger(__name__)

EPS = numpy.finfo(numpy.float64).eps

# extended precision heads longer than this are refused
MP_HEAD_LIMIT = 1 << 17

MAX_ORDER = 64


def next_power_of_two(n):
    """
    >>> next_power_of_two(1), next_power_of_two(17), next_power_of_two(64)
    (1, 32, 64)
    """
    n = max(1, int(n))
    return 1 << (n - 1).bit_length()


def _log10(x):
    x = abs(x)
    if x == 0:
        return -math.inf
    return float(mp.log10(x))


def _as_exponent(s):
    """Return s as an int when it is integral (faster powers), else as mpf."""
    if s == int(s):
        return int(s)
    return s


################################################################################
## Exact tails.
################################################################################

def _power_sum(n_values, signs, s):
    exponent = _as_exponent(s)
    return mp.fsum(sign * mpf(int(n)) ** -exponent
                   for n, sign in zip(n_values.tolist(), signs.tolist()))


# (s, N, digits) -> T(s, N); mu(1..N) does not depend on the table size,
# so no table is kept here
_moebius_tails = {}
TAIL_CACHE_SIZE = 1024


def moebius_tail(table, s, n, digits):
    """
    T(s, N) = sum_{m>N} mu(m) m^-s, computed as 1/zeta(s) minus the head.

    The absolute error is below 10^-(digits-10) + (N+1) 10^-digits.
    """
    table.require(n)
    key = (s, n, digits)
    try:
        return _moebius_tails[key]
    except KeyError:
        pass
    with mp.workdps(digits):
        ctx = PrecisionContext(digits, mpf(10) ** (10 - digits), max(digits, 700))
        n_values, signs = table.support(n)
        tail = reciprocal_zeta(s, ctx) - _power_sum(n_values, signs, s)
    if len(_moebius_tails) >= TAIL_CACHE_SIZE:
        # dicts keep insertion order: drop the oldest
        del _moebius_tails[next(iter(_moebius_tails))]
    _moebius_tails[key] = tail
    return tail


@lru_cache(maxsize=1024)
def hurwitz_tail(s, n, digits):
    """sum_{m>N} m^-s = zeta(s, N+1)."""
    with mp.workdps(digits):
        return mpmath.zeta(s, n + 1)


################################################################################
## Kernels.
################################################################################

class Kernel(object):
    """
    A weight n^-base g(n^-a) together with everything the expansion needs.

    Subclasses provide the Taylor coefficients of g, the remainder factor
    R_J, a float64 evaluation with a per-term rounding bound, and an
    extended precision evaluation of single terms.
    """
    first = 0

    def __init__(self, a, base, scale):
        self.a = as_mpf(a)
        self.base = as_mpf(base)
        self.scale = as_mpf(scale)

    def exponent(self, j):
        return self.base + self.a * j

    def coefficient(self, j):
        raise NotImplementedError

    def remainder(self, order):
        raise NotImplementedError

    def weights(self, n):
        """(w, err) for float64 n: w(n) and a bound on |fl(w) - w|."""
        raise NotImplementedError

    def weight_mp(self, n):
        raise NotImplementedError

    def n_floor(self):
        """Smallest split point; beyond it scale * n^-a <= 1/2."""
        a = float(self.a)
        return max(16, int(math.ceil((2 * float(self.scale) + 1) ** (1 / a))))

    def _powers(self, n):
        u = numpy.power(n, -float(self.a))
        if self.base == 0:
            return u, numpy.ones_like(n)
        return u, numpy.power(n, -float(self.base))


class ExponentialKernel(Kernel):
    """n^-b exp(-x n^-a); the Moebius sum is R_ab(x)/x."""

    def coefficient(self, j):
        return (-self.scale) ** j / mp.factorial(j)

    def remainder(self, order):
        return self.scale ** order / mp.factorial(order)

    def weights(self, n):
        u, head = self._powers(n)
        y = float(self.scale) * u
        w = head * numpy.exp(-y)
        return w, EPS * numpy.abs(w) * (4 + 3 * y)

    def weight_mp(self, n):
        n = mpf(n)
        return n ** -self.base * mp.exp(-self.scale / n ** self.a)


class BinomialKernel(Kernel):
    """n^-b (1 - n^-a)^k; the Moebius sum is c_ab(k)."""

    def __init__(self, a, base, k):
        Kernel.__init__(self, a, base, k)
        self.k = int(k)

    def coefficient(self, j):
        return mpf((-1) ** j * comb(self.k, j))

    def remainder(self, order):
        return mpf(comb(self.k, order))

    def weights(self, n):
        u, head = self._powers(n)
        if self.k == 0:
            return head, EPS * 4 * head
        with numpy.errstate(divide='ignore'):
            z = self.k * numpy.log1p(-u)
        w = head * numpy.exp(z)
        z_size = numpy.where(numpy.isfinite(z), numpy.abs(z), 0.0)
        return w, EPS * numpy.abs(w) * (4 + 3 * z_size)

    def weight_mp(self, n):
        n = mpf(n)
        return n ** -self.base * (1 - n ** -self.a) ** self.k


class ComplementKernel(BinomialKernel):
    """
    n^-(b-a) (1 - (1 - n^-a)^k); the Moebius sum is the partial sum
    sum_{j<k} c_ab(j).
    """
    first = 1

    def coefficient(self, j):
        return -BinomialKernel.coefficient(self, j)

    def weights(self, n):
        u, head = self._powers(n)
        if self.k == 0:
            return numpy.zeros_like(n), numpy.zeros_like(n)
        with numpy.errstate(divide='ignore'):
            z = self.k * numpy.log1p(-u)
        w = -head * numpy.expm1(z)
        # an error dz in z moves expm1(z) by e^z dz
        z_size = numpy.where(numpy.isfinite(z), numpy.abs(z), 0.0)
        return w, EPS * (4 * numpy.abs(w) + 3 * head * z_size * numpy.exp(z))

    def weight_mp(self, n):
        n = mpf(n)
        return n ** -self.base * (1 - (1 - n ** -self.a) ** self.k)


class GeometricKernel(Kernel):
    """
    1/(t + (1-t) n^2) = n^-2 / ((1-t)(1 + q u)),  u = n^-2, q = t/(1-t);
    the Moebius sum is sum_k c_k t^k resummed, for -1 <= t < 1/2.
    """

    def __init__(self, t):
        self.t = as_mpf(t)
        self.q = self.t / (1 - self.t)
        Kernel.__init__(self, 2, 2, abs(self.q))

    def coefficient(self, j):
        return (-self.q) ** j / (1 - self.t)

    def remainder(self, order):
        # valid for u <= 1/256, i.e. beyond the smallest split point 16
        return abs(self.q) ** order / ((1 - self.t) * (1 - abs(self.q) / 256))

    def weights(self, n):
        w = 1.0 / (float(self.t) + (1 - float(self.t)) * n * n)
        return w, EPS * 4 * numpy.abs(w)

    def weight_mp(self, n):
        return 1 / (self.t + (1 - self.t) * mpf(n) ** 2)


################################################################################
## Planner and evaluation.
################################################################################

@dataclass(frozen=True)
class Plan:
    order: int          # J: number of tail terms kept (first .. J-1)
    n: int              # split point N
    truncation: mpf     # bound on the dropped terms j >= J
    cost: int


def _required_n(kernel, order, budget):
    """Smallest N with R_J N^(1-s_J)/(s_J - 1) <= budget, or None."""
    s = kernel.exponent(order)
    if s <= 1:
        return None
    r = kernel.remainder(order)
    if r == 0:
        return 1
    n = (r / ((s - 1) * budget)) ** (1 / (s - 1))
    if n > 1e18:
        return None
    return max(1, int(mp.ceil(n)))


def plan_expansion(kernel, tol, n_limit, max_order=MAX_ORDER, small_n=False):
    """
    Pick (J, N) meeting 'tol' for the truncation with N <= n_limit.

    With small_n the smallest N wins instead of the smallest cost (used
    when the head has to be summed in extended precision).  Raises
    ResourceError carrying the smallest N that would have worked.
    """
    budget = tol / 2
    floor = next_power_of_two(kernel.n_floor())
    best = None
    smallest = None

    for order in range(kernel.first, max_order + 1):
        n = _required_n(kernel, order, budget)
        if n is None:
            continue
        n = next_power_of_two(max(n, floor))
        if smallest is None or n < smallest:
            smallest = n
        if n > n_limit:
            continue

        s = kernel.exponent(order)
        truncation = kernel.remainder(order) * mpf(n) ** (1 - s) / (s - 1)
        plan = Plan(order, n, truncation, n * (4 + order - kernel.first))
        key = (plan.n, plan.cost) if small_n else (plan.cost, plan.n)
        if best is None or key < ((best.n, best.cost) if small_n
                                  else (best.cost, best.n)):
            best = plan
        if n == floor and not small_n:
            break

    if best is None:
        if smallest is None:
            raise PrecisionBudgetError(
                "no expansion order up to %d meets tol %s"
                % (max_order, mpmath.nstr(tol, 3)))
        raise ResourceError("Moebius table too small: N = %d needed, %d available"
                            % (smallest, n_limit), needed=smallest)

    log.debug('expansion plan: J=%d N=%d truncation=%s', best.order, best.n,
              mpmath.nstr(best.truncation, 3))
    return best


CHUNK = 1 << 20


def float_sum(terms, errors):
    """
    Correctly rounded chunk sums of 'terms' added exactly; returns the
    total and a bound on its distance from the exact sum of the exact
    terms, given per-term bounds 'errors'.
    """
    partial = []
    bound = 0.0
    for start in range(0, len(terms), CHUNK):
        chunk = math.fsum(terms[start:start + CHUNK].tolist())
        partial.append(chunk)
        bound += float(errors[start:start + CHUNK].sum()) + EPS * abs(chunk)
    total = math.fsum(partial)
    bound += EPS * abs(total)
    return mpf(total), 2 * mpf(bound)


def _head_float(kernel, n_values, signs):
    w, err = kernel.weights(n_values.astype(numpy.float64))
    return float_sum(signs * w, err)


def _head_mp(weight, n_values, signs, digits):
    with mp.workdps(digits):
        total = mp.fsum(sign * weight(n)
                        for n, sign in zip(n_values.tolist(), signs.tolist()))
    return total, mpf(len(n_values) + 1) * mpf(10) ** (-digits + 2)


def expand(kernel, table, tol, ctx, method=Method.MOEBIUS, rigorous=True):
    """
    Evaluate sum mu(n) w(n) (or sum w(n) when table is None) to absolute
    error 'tol'.
    """
    tol = as_mpf(tol)
    n_limit = table.n_max if table is not None else MP_HEAD_LIMIT
    plan = plan_expansion(kernel, tol, n_limit)

    n_values, signs = _support(table, plan.n)
    head, head_err = _head_float(kernel, n_values, signs)

    if head_err > tol / 4:
        if plan.n > MP_HEAD_LIMIT:
            plan = plan_expansion(kernel, tol, min(n_limit, MP_HEAD_LIMIT),
                                  small_n=True)
            n_values, signs = _support(table, plan.n)
        digits = max(15, int(math.ceil(-_log10(tol) + math.log10(plan.n + 1))) + 10)
        log.debug('float head rejected (%s > tol/4); summing %d terms at %d digits',
                  mpmath.nstr(head_err, 3), len(n_values), digits)
        head, head_err = _head_mp(kernel.weight_mp, n_values, signs, digits)

    tail, tail_err = _tail(kernel, table, plan, tol, ctx)

    with mp.workdps(ctx.digits + 10):
        value = head + tail
        error = head_err + tail_err + plan.truncation
    return SeriesResult(value, error, plan.n, method, rigorous)


def _support(table, n):
    if table is None:
        n_values = numpy.arange(1, n + 1, dtype=numpy.int64)
        return n_values, numpy.ones(n, dtype=numpy.float64)
    return table.support(n)


def tail_digits(coefficients, tol, n, ctx):
    """Working digits for the tail terms c_j T(s_j, N)."""
    size = max([_log10(c) for c in coefficients] + [0])
    digits = (-_log10(tol) + size + math.log10(len(coefficients) + 1)
              + math.log10(n + 1) + 12)
    digits = max(ctx.digits, int(math.ceil(digits / 10.0)) * 10)
    if digits > ctx.max_digits:
        raise PrecisionBudgetError(
            "tail expansion needs %d digits, the ceiling is %d"
            % (digits, ctx.max_digits))
    return digits


def _tail(kernel, table, plan, tol, ctx):
    orders = range(kernel.first, plan.order)
    if not orders:
        return mpf(0), mpf(0)

    with mp.workdps(ctx.digits + 10):
        coefficients = [kernel.coefficient(j) for j in orders]
    digits = tail_digits(coefficients, tol, plan.n, ctx)

    with mp.workdps(digits):
        coefficients = [kernel.coefficient(j) for j in orders]
        terms = []
        for j, c in zip(orders, coefficients):
            s = kernel.exponent(j)
            if table is None:
                t = hurwitz_tail(s, plan.n, digits)
            else:
                t = moebius_tail(table, s, plan.n, digits)
            terms.append(c * t)
        total = mp.fsum(terms)
        unit = mpf(10) ** (10 - digits) + (plan.n + 1) * mpf(10) ** (-digits)
        error = mp.fsum(abs(c) for c in coefficients) * unit
    return total, error


################################################################################
## Gap between R_ab(k)/k and c_ab(k).
################################################################################

def _log1p_plus(u, terms):
    """log(1 - u) + u = -sum_{m>=2} u^m/m by Horner, for u <= 1/4."""
    acc = numpy.zeros_like(u)
    for m in range(terms, 1, -1):
        acc = acc * u + 1.0 / m
    return -acc * u * u


def _horner_terms(umax):
    """Number of terms after which the dropped part is below EPS/4 relative."""
    terms = 2
    while (terms < 80 and 2 * umax ** (terms - 1)
           > EPS / 4 * (terms + 1) * (1 - umax)):
        terms += 1
    return terms


def gap_weight_mp(a, b, k, n):
    n = mpf(n)
    u = n ** -a
    return n ** -b * (mp.exp(-k * u) - (1 - u) ** k)


def gap_weights(a, b, k, n):
    """
    n^-b (exp(-ku) - (1-u)^k) with u = n^-a, for float n with u <= 1/4,
    written as -n^-b e^-ku expm1(k (log(1-u) + u)) to avoid cancellation.
    """
    u = numpy.power(n, -a)
    terms = _horner_terms(float(u.max()) if len(u) else 0.0)
    z = k * _log1p_plus(u, terms)
    w = -numpy.power(n, -b) * numpy.exp(-k * u) * numpy.expm1(z)
    err = EPS * numpy.abs(w) * (8 + 3 * k * u + 3 * numpy.abs(z) + terms)
    return w, err


def gap_tail_bound(a, b, k, n):
    """
    Bound on sum_{m>N} m^-b |exp(-ku) - (1-u)^k| from
    |exp(-ku) - (1-u)^k| <= (k/2)(u^2 + u^3) for u <= 1/3.
    """
    a = as_mpf(a)
    b = as_mpf(b)
    n = mpf(n)
    return (mpf(k) / 2) * (n ** (1 - b - 2 * a) / (b + 2 * a - 1)
                           + n ** (1 - b - 3 * a) / (b + 3 * a - 1))


def gap_sum(a, b, k, table, tol, ctx):
    """
    sum_n mu(n) n^-b (exp(-k n^-a) - (1 - n^-a)^k) = R_ab(k)/k - c_ab(k).

    Terms with n^-a > 1/4 are summed in extended precision, the rest in
    float64; the tail is dropped under gap_tail_bound.
    """
    a = as_mpf(a)
    b = as_mpf(b)
    if not a > 0 or not b + 2 * a > 1:
        raise DomainError("gap series needs a > 0 and b + 2a > 1")
    tol = as_mpf(tol)
    k = int(k)

    small_n = max(16, int(math.ceil(4 ** (1 / float(a)))))
    n = next_power_of_two(small_n)
    while gap_tail_bound(a, b, k, n) > tol / 2:
        n *= 2
    table.require(n)

    n_values, signs = table.support(n)
    small = n_values <= small_n
    digits = max(ctx.digits, int(math.ceil(-_log10(tol))) + 10)
    head_small, err_small = _head_mp(
        lambda m: gap_weight_mp(a, b, k, m), n_values[small], signs[small], digits)

    w, err = gap_weights(float(a), float(b), k,
                         n_values[~small].astype(numpy.float64))
    head_large, err_large = float_sum(signs[~small] * w, err)

    with mp.workdps(ctx.digits + 10):
        value = head_small + head_large
        error = err_small + err_large + gap_tail_bound(a, b, k, n)
    log.debug('gap sum k=%d: N=%d error=%s', k, n, mpmath.nstr(error, 3))
    return SeriesResult(value, error, n, Method.DIFFERENCE)

"""
rieszcrit command line.

  rieszcrit riesz eval --x 100 [--method naive|kummer|moebius]
  rieszcrit riesz zero
  rieszcrit riesz sweep --x-min 0 --x-max 800000 --samples 801 --out r.csv
  rieszcrit ck eval --k 1000 [--method diff|moebius|asymptotic]
  rieszcrit ck sweep --k-min 1 --k-max 400000 --samples 400
  rieszcrit ck asymptotic --k 100000
  rieszcrit sums alternating --digits 24
  rieszcrit sums generating --t -0.5
  rieszcrit sums partial --k 91000
  rieszcrit sums crossing --k-min 1000 --k-max 200000
  rieszcrit sums conjecture --a 2 --b 3 --k-min 100 --k-max 100000
  rieszcrit verify all [--quick]
  rieszcrit figure fig4 --k-max 500000 --out fig4.csv

Exit codes: 0 success, 1 a check failed, 2 usage or domain error (also a
corrupt cache file), 3 resource error (Moebius table or precision
ceiling exceeded).  Commands that sum over the Moebius table load it
from the cache file, and regrow it once a request reports the size it
needs.
"""

import argparse
import logging
import math
import os
import sys
from dataclasses import dataclass
from typing import Optional

import mpmath
from mpmath import mp, mpf

import rieszcrit
from rieszcrit import bounds, figures, report
from rieszcrit.baezduarte import DEFAULT_ZEROS, asymptotic_envelope, ck_eval, \
     load_zeros
from rieszcrit.errors import DomainError, ResourceError, RieszError
from rieszcrit.mobius import MobiusCache
from rieszcrit.numerics import DEFAULT_DIGITS, DEFAULT_MAX_DIGITS, DEFAULT_TOL, \
     Method, PrecisionContext
from rieszcrit.riesz import RieszParams, find_first_zero, riesz_eval
from rieszcrit.sums import alternating_model, alternating_partial_sum, \
     alternating_sum_abel, alternating_sum_constant, conjecture_exponents, \
     find_center_crossings, fit_deviation_exponent, generating_function_lhs, \
     generating_function_rhs, partial_sum_sk, partial_sum_sweep
from rieszcrit.sweep import default_workers, integer_grid

err = sys.stderr

log = logging.getLogger(__name__)

SWEEP_TOL = '1e-12'
MIN_DIGITS = 30
CACHE_NAME = 'mobius.bin'
RETRIES = 4

TABLE_METHODS = (Method.KUMMER, Method.MOEBIUS)

FIGURE_SAMPLES = dict(fig1=801, fig2=800, fig3=200, fig4=500)


def default_cache_path(env=os.environ):
    cache_dir = env.get('RIESZCRIT_CACHE_DIR',
                        os.path.join('~', '.cache', 'rieszcrit'))
    return os.path.join(os.path.expanduser(cache_dir), CACHE_NAME)


################################################################################
## Configuration.
################################################################################

@dataclass(frozen=True)
class RunConfig:
    """
    Everything a command needs besides its own arguments.  'digits' is
    the number of digits printed; the working precision is raised as far
    as 'tol' requires.
    """
    command: str
    action: Optional[str] = None
    digits: int = DEFAULT_DIGITS
    tol: Optional[mpf] = None
    max_digits: int = DEFAULT_MAX_DIGITS
    cache_path: Optional[str] = None
    allow_large: bool = False
    out: Optional[str] = None
    method: Optional[str] = None
    a: mpf = mpf(2)
    b: mpf = mpf(2)
    workers: int = 1
    color: bool = False
    zeros_path: Optional[str] = None

    def __post_init__(self):
        if self.digits < 1:
            raise DomainError("--digits must be positive, got %d" % (self.digits,))
        if self.workers < 1:
            raise DomainError("--workers must be positive, got %d" % (self.workers,))
        if self.method is not None:
            Method(self.method)
        self.context(DEFAULT_TOL)

    @classmethod
    def from_args(cls, args):
        with mp.workdps(DEFAULT_DIGITS):
            tol = mpf(args.tol) if args.tol is not None else None
            a = mpf(args.a)
            b = mpf(args.b)
        return cls(command=args.command,
                   action=getattr(args, 'action', None),
                   digits=args.digits,
                   tol=tol,
                   max_digits=args.max_digits,
                   cache_path=args.mobius_cache,
                   allow_large=args.allow_large_table,
                   out=args.out,
                   method=args.method,
                   a=a,
                   b=b,
                   workers=args.workers,
                   color=bool(args.color),
                   zeros_path=args.zeros)

    @property
    def params(self):
        return RieszParams(self.a, self.b)

    def context(self, default_tol):
        """PrecisionContext for this run; default_tol applies without --tol."""
        tol = self.tol if self.tol is not None else mpf(default_tol)
        if not tol > 0:
            raise DomainError("--tol must be positive")
        needed = int(math.ceil(-float(mp.log10(tol)))) + 10
        digits = max(MIN_DIGITS, self.digits, needed)
        return PrecisionContext(digits, tol, max(self.max_digits, digits))

    def method_or(self, default):
        return Method(self.method) if self.method is not None else default

    def zeros(self):
        if self.zeros_path is None:
            return DEFAULT_ZEROS
        return tuple(load_zeros(self.zeros_path))

    def cache(self):
        return MobiusCache(self.cache_path, allow_large=self.allow_large)


def configure_logging(verbosity, stream=err):
    """Attach a stderr handler to the package logger; -v INFO, -vv DEBUG."""
    logger = logging.getLogger('rieszcrit')
    logger.propagate = 0

    for handler in list(logger.handlers):
        if getattr(handler, '_rieszcrit', False):
            logger.removeHandler(handler)
    handler = logging.StreamHandler(stream)
    handler._rieszcrit = True
    handler.setFormatter(logging.Formatter('%(name)s: %(message)s'))
    logger.addHandler(handler)

    lvl = logging.WARNING
    if verbosity >= 2:
        lvl = logging.DEBUG
    elif verbosity >= 1:
        lvl = logging.INFO
    logger.setLevel(lvl)


def with_table(cache, func):
    """
    func(table), regrowing the cached table whenever a call reports the
    table size it needs.
    """
    for attempt in range(RETRIES):
        table = cache.table
        try:
            return func(table)
        except ResourceError as e:
            if e.needed is None or e.needed <= table.n_max:
                raise
            log.warning('%s; retrying with %d entries', e, e.needed)
            cache.ensure(e.needed)
    return func(cache.table)


def _table_for(config, method, func):
    if method in TABLE_METHODS:
        return with_table(config.cache(), func)
    return func(None)


################################################################################
## Output helpers.
################################################################################

def show(value, digits):
    return mpmath.nstr(value, digits)


def print_result(result, config, label=None, show_error=False):
    text = show(result.value, config.digits)
    if show_error:
        text = '%s %s' % (text, show(result.error_bound, 5))
    if label:
        text = '%s %s' % (label, text)
    print(text)
    log.info('error bound %s, %d terms, method %s%s',
             show(result.error_bound, 5), result.terms_used, result.method.value,
             '' if result.rigorous else ' (not rigorous)')


def spacing(args):
    """The grid keyword for a sweep; without a flag each figure keeps its own default."""
    if args.log_spacing is None:
        return {}
    return {'log_spacing': args.log_spacing}


################################################################################
## Commands.
################################################################################

def cmd_riesz(args, config):
    """evaluate, sweep or find the first zero of R(x)"""
    params = config.params
    if config.action == 'eval':
        if args.x is None:
            raise DomainError("riesz eval needs --x")
        ctx = config.context(DEFAULT_TOL)
        method = config.method_or(Method.MOEBIUS)
        result = _table_for(config, method, lambda table: riesz_eval(
            args.x, method, ctx, table, params, args.order))
        print_result(result, config, show_error=args.with_error)
        return 0

    if config.action == 'zero':
        ctx = config.context(DEFAULT_TOL)
        lo = args.x_min if args.x_min is not None else '1'
        hi = args.x_max if args.x_max is not None else '1.5'
        root = find_first_zero(lo, hi, ctx, params)
        print(show(root, config.digits))
        return 0

    if config.action == 'sweep':
        ctx = config.context(SWEEP_TOL)
        method = config.method_or(Method.MOEBIUS)
        x_range = (args.x_min if args.x_min is not None else figures.FIG1_RANGE[0],
                   args.x_max if args.x_max is not None else figures.FIG1_RANGE[1])
        rows = _table_for(config, method, lambda table: figures.fig1_rows(
            args.samples or FIGURE_SAMPLES['fig1'], ctx, table,
            x_range=x_range, method=method, workers=config.workers,
            params=params, **spacing(args)))
        figures.write_csv('fig1', rows, config.out)
        return 0

    raise DomainError("unknown riesz action %r" % (config.action,))


def cmd_ck(args, config):
    """evaluate or sweep the Baez-Duarte sequence c_k"""
    params = config.params
    zeros = config.zeros()
    if config.action == 'eval':
        if args.k is None:
            raise DomainError("ck eval needs --k")
        ctx = config.context(DEFAULT_TOL)
        method = config.method_or(Method.MOEBIUS)
        result = _table_for(config, method, lambda table: ck_eval(
            args.k, method, ctx, table, params, zeros))
        print_result(result, config, show_error=args.with_error)
        return 0

    if config.action == 'asymptotic':
        if args.k is None:
            raise DomainError("ck asymptotic needs --k")
        ctx = config.context(DEFAULT_TOL)
        result = ck_eval(args.k, Method.ASYMPTOTIC, ctx, None, params, zeros)
        print(show(result.value, config.digits))
        print('envelope %s' % (show(asymptotic_envelope(args.k + 1, zeros),
                                    config.digits),))
        return 0

    if config.action == 'sweep':
        ctx = config.context(SWEEP_TOL)
        method = config.method_or(Method.MOEBIUS)
        k_range = (args.k_min if args.k_min is not None else figures.FIG2_RANGE[0],
                   args.k_max if args.k_max is not None else figures.FIG2_RANGE[1])
        rows = _table_for(config, method, lambda table: figures.fig2_rows(
            args.samples or FIGURE_SAMPLES['fig2'], ctx, table,
            k_range=k_range, method=method, workers=config.workers,
            params=params, zeros=zeros, **spacing(args)))
        figures.write_csv('fig2', rows, config.out)
        return 0

    raise DomainError("unknown ck action %r" % (config.action,))


def cmd_sums(args, config):
    """alternating constant, generating function and partial sums of c_k"""
    params = config.params
    cache = config.cache()

    if config.action == 'alternating':
        if args.abel:
            constant = alternating_sum_abel(config.digits)
        else:
            constant = alternating_sum_constant(config.digits)
        print(show(constant.value, config.digits))
        if args.k is not None:
            ctx = config.context(SWEEP_TOL)
            partial = with_table(cache, lambda table: alternating_partial_sum(
                args.k, table, ctx))
            ck = with_table(cache, lambda table: ck_eval(
                args.k, Method.MOEBIUS, ctx, table))
            model = alternating_model(args.k, ck.value, constant.value)
            print('partial %s' % (show(partial.value, config.digits),))
            print('model %s' % (show(model, config.digits),))
        return 0

    if config.action == 'generating':
        if args.t is None:
            raise DomainError("sums generating needs --t")
        ctx = config.context(DEFAULT_TOL)
        lhs = with_table(cache, lambda table: generating_function_lhs(
            args.t, args.terms, table, ctx))
        rhs = generating_function_rhs(args.t, None, ctx)
        print('lhs %s' % (show(lhs.value, config.digits),))
        print('rhs %s' % (show(rhs.value, config.digits),))
        with mp.workdps(ctx.digits):
            agree = lhs.agrees_with(rhs)
        log.info('lhs and rhs %s within %s', 'agree' if agree else 'differ',
                 show(lhs.error_bound + rhs.error_bound, 5))
        return 0 if agree else 1

    if config.action == 'partial':
        if args.k is None:
            raise DomainError("sums partial needs --k")
        ctx = config.context(SWEEP_TOL)
        point = with_table(cache, lambda table: partial_sum_sk(
            args.k + 1, table, ctx, params))
        print('s_k %s' % (show(point.partial_sum, config.digits),))
        print('deviation %s' % (show(point.deviation, config.digits),))
        return 0

    if config.action == 'crossing':
        ctx = config.context(SWEEP_TOL)
        lo = args.k_min if args.k_min is not None else 10 ** 3
        hi = args.k_max if args.k_max is not None else figures.FIG4_RANGE[1]
        # partial_sum_sk(k) is the sum up to c_{k-1}
        crossings = with_table(cache, lambda table: find_center_crossings(
            lo + 1, hi + 1, table, ctx, params, args.samples or 200,
            config.workers))
        for k in crossings:
            print(k - 1)
        return 0

    if config.action == 'conjecture':
        ctx = config.context(SWEEP_TOL)
        lo = args.k_min if args.k_min is not None else 10 ** 2
        hi = args.k_max if args.k_max is not None else 10 ** 5
        ks = integer_grid(lo + 1, hi + 1, args.samples or 100)
        points = with_table(cache, lambda table: partial_sum_sweep(
            None, None, None, ctx, table, params, workers=config.workers, ks=ks))
        figures.write_csv('fig4', [(p.k - 1, p.partial_sum, p.deviation)
                                   for p in points], config.out)
        fit = fit_deviation_exponent(points)
        rh, unconditional = conjecture_exponents(params.a, params.b)
        err.write('center %s, fitted exponent %.4f (RH %.4f, unconditional %.4f)\n'
                  % (show(points[0].center, 12), fit.exponent, rh, unconditional))
        return 0

    raise DomainError("unknown sums action %r" % (config.action,))


def cmd_verify(args, config):
    """check the inequalities on R and c_k"""
    ctx = config.context(SWEEP_TOL)
    if config.action == 'all':
        reports = with_table(config.cache(), lambda table: bounds.verify_all(
            table, ctx, args.quick))
    else:
        reports = with_table(config.cache(), lambda table: bounds.verify_suite(
            config.action, table, ctx, args.quick))
    passed = report.print_reports(reports, sys.stdout, config.color)
    return 0 if passed else 1


def cmd_figure(args, config):
    """write the CSV data behind a figure"""
    name = config.action
    ctx = config.context(SWEEP_TOL)
    samples = args.samples or FIGURE_SAMPLES[name]

    def k_range(default):
        return (args.k_min if args.k_min is not None else default[0],
                args.k_max if args.k_max is not None else default[1])

    def rows(table):
        if name == 'fig1':
            x_range = None
            if args.x_min is not None or args.x_max is not None:
                lo, hi = (figures.FIG1_INSET_RANGE if args.inset
                          else figures.FIG1_RANGE)
                x_range = (args.x_min if args.x_min is not None else lo,
                           args.x_max if args.x_max is not None else hi)
            return figures.fig1_rows(samples, ctx, table, inset=args.inset,
                                     x_range=x_range, workers=config.workers,
                                     **spacing(args))
        if name == 'fig2':
            return figures.fig2_rows(samples, ctx, table,
                                     k_range(figures.FIG2_RANGE),
                                     workers=config.workers,
                                     **spacing(args))
        if name == 'fig3':
            return figures.fig3_rows(samples, ctx, table,
                                     k_range(figures.FIG3_RANGE))
        return figures.fig4_rows(samples, ctx, table, k_range(figures.FIG4_RANGE),
                                 workers=config.workers, **spacing(args))

    figures.write_csv(name, with_table(config.cache(), rows), config.out)
    return 0


COMMANDS = {
    'riesz': cmd_riesz,
    'ck': cmd_ck,
    'sums': cmd_sums,
    'verify': cmd_verify,
    'figure': cmd_figure,
}


################################################################################
## Argument parsing.
################################################################################

def common_options(env=os.environ):
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        dest='verbosity',
                        help="log progress (-v) or truncation plans (-vv) to stderr")
    parser.add_argument('--digits', type=int, default=DEFAULT_DIGITS,
                        help="decimal digits printed (working precision is "
                        "raised to match --tol) [default %(default)s]")
    parser.add_argument('--tol', default=None,
                        help="absolute error tolerance [1e-30 for single "
                        "values, 1e-12 for sweeps and figures]")
    parser.add_argument('--max-digits', type=int, default=DEFAULT_MAX_DIGITS,
                        help="ceiling on any working precision [default %(default)s]")
    parser.add_argument('--method', default=None,
                        choices=[m.value for m in (Method.NAIVE, Method.KUMMER,
                                                   Method.MOEBIUS, Method.FORWARD_DIFF,
                                                   Method.ASYMPTOTIC)],
                        help="evaluation method")
    parser.add_argument('--a', default='2', help="exponent a of n^-a [2]")
    parser.add_argument('--b', default='2', help="exponent b of n^-b [2]")
    parser.add_argument('--x', default=None, help="argument of R")
    parser.add_argument('--k', type=int, default=None, help="index k")
    parser.add_argument('--t', default=None, help="generating function argument")
    parser.add_argument('--x-min', default=None)
    parser.add_argument('--x-max', default=None)
    parser.add_argument('--k-min', type=int, default=None)
    parser.add_argument('--k-max', type=int, default=None)
    parser.add_argument('--samples', type=int, default=None)
    parser.add_argument('--log-spacing', dest='log_spacing', action='store_const',
                        const=True, default=None,
                        help="geometric sweep grid [default for ck and fig2]")
    parser.add_argument('--linear-spacing', dest='log_spacing', action='store_const',
                        const=False,
                        help="linear sweep grid [default for riesz, fig1 and fig4]")
    parser.add_argument('--order', type=int, default=None,
                        help="Kummer subtraction order (default: chosen per x)")
    parser.add_argument('--terms', type=int, default=None,
                        help="terms of the generating function (default: from tol)")
    parser.add_argument('--with-error', action='store_true',
                        help="print the error bound after the value")
    parser.add_argument('--mobius-cache', default=default_cache_path(env),
                        help="Moebius table cache file "
                        "[RIESZCRIT_CACHE_DIR/%s]" % (CACHE_NAME,))
    parser.add_argument('--allow-large-table', action='store_true',
                        help="let the Moebius table grow past 10^8 entries")
    parser.add_argument('--zeros', default=None,
                        help="zero table: lines of 'gamma A B' (default: first zero)")
    parser.add_argument('--out', default=None, help="CSV output file (default stdout)")
    parser.add_argument('--workers', type=int, default=default_workers(env),
                        help="worker processes for sweeps [RIESZCRIT_WORKERS]")
    parser.add_argument('--color', action='store_true',
                        default=bool(env.get('RIESZCRIT_COLOR')),
                        help="Show coloured (red/green) check results "
                        "[RIESZCRIT_COLOR]")
    parser.add_argument('--quick', action='store_true',
                        help="verify on reduced grids")
    parser.add_argument('--abel', action='store_true',
                        help="alternating constant from Abel summation")
    parser.add_argument('--inset', action='store_true',
                        help="fig1 over (0, 10^7] instead of (0, 8*10^5]")
    return parser


def build_parser(env=os.environ):
    common = common_options(env)
    parser = argparse.ArgumentParser(
        prog='rieszcrit',
        description="Riesz function, Baez-Duarte sequence and their bounds.")
    parser.add_argument('--version', action='version',
                        version='%(prog)s ' + rieszcrit.__version__)
    commands = parser.add_subparsers(dest='command', metavar='command')
    commands.required = True

    actions = {
        'riesz': ['eval', 'zero', 'sweep'],
        'ck': ['eval', 'sweep', 'asymptotic'],
        'sums': ['alternating', 'generating', 'partial', 'crossing', 'conjecture'],
        'verify': ['all'] + sorted(bounds.SUITES),
        'figure': sorted(figures.FIGURES),
    }
    for name, choices in actions.items():
        sub = commands.add_parser(name, parents=[common],
                                  help=COMMANDS[name].__doc__)
        sub.add_argument('action', choices=choices)
    return parser


def main(argv=None, env=os.environ):
    parser = build_parser(env)
    args = parser.parse_args(argv)
    configure_logging(args.verbosity)

    try:
        config = RunConfig.from_args(args)
        with mp.workdps(config.context(DEFAULT_TOL).digits + 10):
            return COMMANDS[config.command](args, config)
    except RieszError as e:
        log.error('%s', e)
        return e.exit_code
    except (ValueError, ArithmeticError) as e:
        log.error('%s', e)
        return DomainError.exit_code


if __name__ == '__main__':
    sys.exit(main())

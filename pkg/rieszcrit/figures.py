"""
CSV data behind the four figures:

  fig1   R(x) over (0, 8e5], or (0, 1e7] with inset=True   x,r_value,error_bound
  fig2   c_k over [1, 4e5] with a fitted k^-3/4 envelope  k,c_k,error_bound,envelope
  fig3   |R(k)/k - c_k| over log-spaced k with a fit line  k,abs_diff,fit_value
  fig4   partial sums sum_{j<=k} c_j and their distance
         from the center -2                             k,s_k,deviation

Values are written with mpmath.nstr at a fixed number of significant
digits, so identical runs give byte-identical files whatever the number
of workers.
"""

import csv
import logging
import os
import sys

import mpmath
from mpmath import mp, mpf

from rieszcrit import bounds
from rieszcrit.baezduarte import DEFAULT_ZEROS, ck_sweep, fit_envelope
from rieszcrit.errors import DomainError, FitError
from rieszcrit.numerics import Method
from rieszcrit.riesz import DEFAULT_PARAMS, riesz_sweep
from rieszcrit.sums import partial_sum_sweep
from rieszcrit.sweep import integer_grid

log = logging.getLogger(__name__)

CSV_DIGITS = 20

FIG1_RANGE = (0, 800000)
FIG1_INSET_RANGE = (0, 10 ** 7)
FIG2_RANGE = (1, 400000)
FIG3_RANGE = (1, 10 ** 6)
FIG3_FIT_FROM = 10 ** 4
FIG4_RANGE = (1, 500000)

HEADERS = {
    'fig1': ('x', 'r_value', 'error_bound'),
    'fig2': ('k', 'c_k', 'error_bound', 'envelope'),
    'fig3': ('k', 'abs_diff', 'fit_value'),
    'fig4': ('k', 's_k', 'deviation'),
}


def format_value(value, digits=CSV_DIGITS):
    """
    >>> format_value(7)
    '7'
    >>> format_value(mpf(1) / 3, 5)
    '0.33333'
    """
    if isinstance(value, int):
        return str(value)
    return mpmath.nstr(value, digits)


def open_output(path):
    """stdout for None or '-'; otherwise the file, creating its directory."""
    if path in (None, '-'):
        return sys.stdout, False
    dirname = os.path.dirname(os.path.abspath(path))
    try:
        os.makedirs(dirname)
    except OSError:
        pass
    return open(path, 'w', newline=''), True


def write_csv(name, rows, path=None, digits=CSV_DIGITS):
    """Write rows (tuples of ints and mpfs) under the header of 'name'."""
    header = HEADERS[name]
    fp, close = open_output(path)
    try:
        writer = csv.writer(fp, lineterminator='\n')
        writer.writerow(header)
        count = 0
        for row in rows:
            writer.writerow([format_value(v, digits) for v in row])
            count += 1
    finally:
        if close:
            fp.close()
    log.info('%s: wrote %d rows to %s', name, count, path or 'stdout')
    return count


################################################################################
## Rows.
################################################################################

def fig1_rows(samples, ctx, table, inset=False, x_range=None,
              method=Method.MOEBIUS, workers=1, params=DEFAULT_PARAMS,
              log_spacing=False):
    lo, hi = x_range or (FIG1_INSET_RANGE if inset else FIG1_RANGE)
    points = riesz_sweep(lo, hi, samples, method, ctx, table, params,
                         log_spacing=log_spacing, workers=workers)
    return [(x, r.value, r.error_bound) for x, r in points]


def fig2_rows(samples, ctx, table, k_range=FIG2_RANGE, method=Method.MOEBIUS,
              workers=1, params=DEFAULT_PARAMS, log_spacing=True,
              zeros=DEFAULT_ZEROS):
    """
    c_k on an integer grid, geometric unless log_spacing=False; the
    envelope is the smallest A k^-3/4 above them.
    """
    lo, hi = k_range
    points = ck_sweep(lo, hi, samples, method, ctx, table, params,
                      log_spacing=log_spacing, workers=workers, zeros=zeros)
    scale = fit_envelope([(k, c.value) for k, c in points if k >= 1])
    log.info('fitted envelope %s k^-3/4', mpmath.nstr(scale, 6))
    return [(k, c.value, c.error_bound,
             scale * mpf(k) ** (-mpf(3) / 4) if k else mp.inf)
            for k, c in points]


def fig3_rows(samples, ctx, table, k_range=FIG3_RANGE, fit_from=FIG3_FIT_FROM):
    """
    |R(k)/k - c_k| on a logarithmic grid and the power law fitted to the
    samples with k > fit_from.
    """
    lo, hi = k_range
    points = bounds.difference_samples(lo, hi, samples, table, ctx)
    tail = [(k, d) for k, d in points if k > fit_from]
    if len(tail) < 3:
        raise FitError("fig3 needs at least 3 samples above k = %d; raise "
                       "--k-max or --samples" % (fit_from,))
    fit = bounds.fit_power_law([k for k, _ in tail], [d for _, d in tail])
    log.info('fig3 fit: %.5g k^%.4f', fit.prefactor, fit.exponent)
    with mp.workdps(ctx.digits):
        prefactor = mpf(fit.prefactor)
        exponent = mpf(fit.exponent)
        return [(k, d, prefactor * mpf(k) ** exponent) for k, d in points]


def fig4_rows(samples, ctx, table, k_range=FIG4_RANGE, workers=1,
              params=DEFAULT_PARAMS, log_spacing=False):
    """
    (k, sum_{j<=k} c_j, that sum minus the center).  partial_sum_sk(k)
    sums up to c_{k-1}, so row k is computed at k + 1.
    """
    lo, hi = k_range
    if lo < 0:
        raise DomainError("partial sums start at k = 0")
    ks = integer_grid(lo + 1, hi + 1, samples, log_spacing)
    points = partial_sum_sweep(None, None, None, ctx, table, params,
                               workers=workers, ks=ks)
    return [(p.k - 1, p.partial_sum, p.deviation) for p in points]


FIGURES = {
    'fig1': fig1_rows,
    'fig2': fig2_rows,
    'fig3': fig3_rows,
    'fig4': fig4_rows,
}

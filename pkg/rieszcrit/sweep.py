"""
Evaluation grids and an order-preserving parallel map.

mpmath keeps its working precision in a process-global context, so sweeps
run in worker processes rather than threads.  Each worker receives the
Moebius table once, through the pool initializer.
"""

import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor

from mpmath import mp, mpf

from rieszcrit.errors import DomainError
from rieszcrit.numerics import as_mpf

log = logging.getLogger(__name__)

DEFAULT_PER_DECADE = 25

_worker_table = None


################################################################################
## Grids.
################################################################################

def linear_grid(lo, hi, samples):
    """
    'samples' evenly spaced points from lo to hi inclusive.

    >>> [float(x) for x in linear_grid(0, 10, 6)]
    [0.0, 2.0, 4.0, 6.0, 8.0, 10.0]
    """
    lo, hi = _check_range(lo, hi, samples)
    step = (hi - lo) / (samples - 1)
    return [lo + i * step for i in range(samples - 1)] + [hi]


def log_grid(lo, hi, samples):
    """'samples' geometrically spaced points from lo to hi inclusive."""
    lo, hi = _check_range(lo, hi, samples)
    if not lo > 0:
        raise DomainError("logarithmic spacing needs a positive lower end")
    ratio = (hi / lo) ** (mpf(1) / (samples - 1))
    return [lo * ratio ** i for i in range(samples - 1)] + [hi]


def decade_grid(lo, hi, per_decade=DEFAULT_PER_DECADE):
    """Geometric grid with 'per_decade' points per factor of ten."""
    lo = as_mpf(lo)
    hi = as_mpf(hi)
    if not 0 < lo < hi:
        raise DomainError("decade grid needs 0 < lo < hi")
    decades = float(mp.log10(hi / lo))
    samples = max(2, int(math.ceil(decades * per_decade)) + 1)
    return log_grid(lo, hi, samples)


def integer_grid(lo, hi, samples, log_spacing=True):
    """
    Sorted distinct integers from lo to hi, about 'samples' of them.

    >>> integer_grid(1, 10, 10, log_spacing=False)
    [1, 2, 3, 4, 5, 6, 7, 8, 9, 10]
    """
    lo = int(lo)
    hi = int(hi)
    if log_spacing:
        points = log_grid(max(lo, 1), hi, samples)
    else:
        points = linear_grid(lo, hi, samples)
    ints = set(int(mp.nint(p)) for p in points)
    ints.add(lo)
    ints.add(hi)
    return sorted(k for k in ints if lo <= k <= hi)


def _check_range(lo, hi, samples):
    with mp.workdps(30):
        lo = as_mpf(lo)
        hi = as_mpf(hi)
    if not lo < hi:
        raise DomainError("empty range: %s .. %s" % (lo, hi))
    if samples < 2:
        raise DomainError("a sweep needs at least 2 samples, got %d" % (samples,))
    return lo, hi


################################################################################
## Parallel map.
################################################################################

def default_workers(env=os.environ):
    try:
        return max(1, int(env.get('RIESZCRIT_WORKERS', 1)))
    except ValueError:
        log.warning('ignoring RIESZCRIT_WORKERS=%r', env.get('RIESZCRIT_WORKERS'))
        return 1


def _install_table(table, digits):
    global _worker_table
    _worker_table = table
    mp.dps = digits


def _call(job):
    func, item = job
    return func(item, _worker_table)


def parallel_map(func, items, workers=1, table=None):
    """
    [func(item, table) for item in items], evaluated by up to 'workers'
    processes.  Results come back in the order of 'items'.
    """
    items = list(items)
    with Stopwatch('%d points' % (len(items),)):
        if workers <= 1 or len(items) <= 1:
            return [func(item, table) for item in items]

        chunksize = max(1, len(items) // (4 * workers))
        with ProcessPoolExecutor(max_workers=workers,
                                 initializer=_install_table,
                                 initargs=(table, mp.dps)) as pool:
            return list(pool.map(_call, [(func, item) for item in items],
                                 chunksize=chunksize))


class Stopwatch(object):
    """Log the wall time of a block at INFO."""

    def __init__(self, label):
        self.label = label
        self.elapsed = None

    def __enter__(self):
        self._started = time.time()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.time() - self._started
        log.info('%s: %.2f s', self.label, self.elapsed)
        return False

"""
Moebius function table: sieve, cache file, and the cache manager that
grows the table on demand.

values[n-1] = mu(n) for 1 <= n <= n_max, stored as int8.
"""

import logging
import math
import os
import struct
from functools import cached_property

import numpy

from rieszcrit.errors import CacheFormatError, DomainError, ResourceError

log = logging.getLogger(__name__)

MAGIC = b'MOBIUS01'
HEADER = struct.Struct('<8sQ')

# one byte per entry; 10^8 entries is about 100 MB
DEFAULT_LIMIT = 10 ** 8

SEGMENT_SIZE = 1 << 22


def base_primes(limit):
    """
    Primes <= limit by a plain numpy Eratosthenes sieve.

    >>> base_primes(20).tolist()
    [2, 3, 5, 7, 11, 13, 17, 19]
    """
    if limit < 2:
        return numpy.array([], dtype=numpy.int64)

    is_prime = numpy.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p::p] = False
    return numpy.flatnonzero(is_prime).astype(numpy.int64)


def _sieve_segment(lo, hi, primes):
    """mu(n) for lo <= n < hi, given every prime up to sqrt(hi - 1)."""
    size = hi - lo
    sign = numpy.ones(size, dtype=numpy.int8)
    prod = numpy.ones(size, dtype=numpy.int64)

    for p in primes:
        p = int(p)
        start = -(-lo // p) * p
        if start >= hi:
            continue
        sign[start - lo::p] *= -1
        prod[start - lo::p] *= p

        p2 = p * p
        start = -(-lo // p2) * p2
        if start < hi:
            sign[start - lo::p2] = 0

    # squarefree part left over is a single prime above sqrt(n_max)
    n = numpy.arange(lo, hi, dtype=numpy.int64)
    sign[prod < n] *= -1
    return sign


class MobiusTable(object):
    """
    Immutable table of mu(1) .. mu(n_max).

    Readers may share one table between threads; 'values' is read-only.
    """

    def __init__(self, values):
        values = numpy.asarray(values, dtype=numpy.int8)
        if values.ndim != 1 or len(values) < 1:
            raise DomainError("a Moebius table needs at least one entry")
        if values.flags.writeable:
            values = values.copy()
            values.flags.writeable = False
        self.values = values

    @property
    def n_max(self):
        return len(self.values)

    def __len__(self):
        return len(self.values)

    def __eq__(self, other):
        if not isinstance(other, MobiusTable):
            return NotImplemented
        return numpy.array_equal(self.values, other.values)

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    __hash__ = object.__hash__

    def __repr__(self):
        return '<MobiusTable n_max=%d>' % (self.n_max,)

    def mu(self, n):
        if not 1 <= n <= self.n_max:
            raise ResourceError("mu(%d) is outside the table (n_max = %d)"
                                % (n, self.n_max), needed=n)
        return int(self.values[n - 1])

    def require(self, n):
        """Raise ResourceError unless the table covers 1..n."""
        if n > self.n_max:
            raise ResourceError("Moebius table holds %d entries, %d needed"
                                % (self.n_max, n), needed=n)

    def mertens(self, n):
        """M(n) = sum of mu(m) for m <= n."""
        self.require(n)
        return int(self.values[:n].sum(dtype=numpy.int64))

    @cached_property
    def _squarefree(self):
        index = numpy.flatnonzero(self.values)
        return index + 1, self.values[index].astype(numpy.float64)

    def support(self, n):
        """
        (n_values, mu_values) over squarefree n <= N, as int64 and float64
        arrays; the zero entries of the table are skipped.
        """
        self.require(n)
        indices, signs = self._squarefree
        stop = int(numpy.searchsorted(indices, n, side='right'))
        return indices[:stop], signs[:stop]


def sieve(n_max, allow_large=False):
    """
    Build the table of mu(1) .. mu(n_max) with a segmented sieve over the
    primes up to sqrt(n_max).
    """
    if n_max != int(n_max) or n_max < 1:
        raise DomainError("sieve bound must be a positive integer, got %r"
                          % (n_max,))
    n_max = int(n_max)
    if n_max > DEFAULT_LIMIT and not allow_large:
        raise ResourceError(
            "a Moebius table of %d entries needs about %d MB; the limit is "
            "%d entries unless large tables are allowed explicitly"
            % (n_max, n_max >> 20, DEFAULT_LIMIT), needed=n_max)

    primes = base_primes(math.isqrt(n_max))
    values = numpy.empty(n_max, dtype=numpy.int8)
    lo = 1
    while lo <= n_max:
        hi = min(lo + SEGMENT_SIZE, n_max + 1)
        values[lo - 1:hi - 1] = _sieve_segment(lo, hi, primes)
        lo = hi

    log.debug('sieved mu up to %d (%d base primes)', n_max, len(primes))
    return MobiusTable(values)


################################################################################
## Cache file.
################################################################################

def save_cache(table, path):
    """
    Write 'MOBIUS01', n_max as <Q, then one byte per entry (0xFF for -1).

    The file is written next to its destination and renamed into place.
    """
    path = os.fspath(path)
    dirname = os.path.dirname(os.path.abspath(path))
    os.makedirs(dirname, exist_ok=True)

    tmp = '%s.tmp%d' % (path, os.getpid())
    with open(tmp, 'wb') as fp:
        fp.write(HEADER.pack(MAGIC, table.n_max))
        fp.write(table.values.tobytes())
    os.replace(tmp, path)


def load_cache(path):
    with open(path, 'rb') as fp:
        data = fp.read()

    if len(data) < HEADER.size:
        raise CacheFormatError("%s: truncated header" % (path,))

    magic, n_max = HEADER.unpack_from(data)
    if magic != MAGIC:
        raise CacheFormatError("%s: bad magic %r" % (path, magic))
    if n_max < 1:
        raise CacheFormatError("%s: empty table" % (path,))
    if len(data) != HEADER.size + n_max:
        raise CacheFormatError("%s: header says %d entries, file holds %d"
                               % (path, n_max, len(data) - HEADER.size))

    raw = numpy.frombuffer(data, dtype=numpy.uint8, offset=HEADER.size)
    bad = (raw > 1) & (raw != 0xFF)
    if bad.any():
        where = int(numpy.flatnonzero(bad)[0])
        raise CacheFormatError("%s: byte 0x%02x at entry n = %d"
                               % (path, raw[where], where + 1))

    return MobiusTable(raw.view(numpy.int8))


class MobiusCache(object):
    """
    A table backed by a cache file, regrown (and rewritten) when a request
    needs more entries than it holds.
    """

    def __init__(self, path, initial=1 << 20, allow_large=False):
        self.path = path
        self.initial = initial
        self.allow_large = allow_large
        self._table = None

    @property
    def table(self):
        if self._table is None:
            if self.path and os.path.exists(self.path):
                self._table = load_cache(self.path)
                log.info('loaded Moebius table of %d entries from %s',
                         self._table.n_max, self.path)
            else:
                self._build(self.initial)
        return self._table

    def ensure(self, n):
        """Return a table with at least n entries."""
        table = self.table
        if table.n_max >= n:
            return table

        size = max(n, 2 * table.n_max)
        if not self.allow_large:
            size = max(n, min(size, DEFAULT_LIMIT))
        log.warning('growing Moebius table from %d to %d entries',
                    table.n_max, size)
        self._build(size)
        return self._table

    def _build(self, size):
        self._table = sieve(size, allow_large=self.allow_large)
        log.info('built Moebius table of %d entries', size)
        if self.path:
            save_cache(self._table, self.path)
            log.info('saved Moebius table to %s', self.path)

"""Unit tests for the Moebius sieve, table and cache file.
"""

import math
import os
import unittest

import numpy
import pytest

from rieszcrit import mobius
from rieszcrit.errors import CacheFormatError, DomainError, ResourceError
from rieszcrit.mobius import MobiusCache, MobiusTable, base_primes, \
     load_cache, save_cache, sieve

FIRST_THIRTY = [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0, -1, 1, 1, 0, -1, 0,
                -1, 0, 1, 1, -1, 0, 0, 1, 0, 0, -1, -1]


def mu_by_factoring(n_max):
    values = []
    for n in range(1, n_max + 1):
        sign, p = 1, 2
        while p * p <= n:
            if n % p == 0:
                n //= p
                if n % p == 0:
                    sign = 0
                    break
                sign = -sign
            p += 1
        if sign and n > 1:
            sign = -sign
        values.append(sign)
    return values


class TestSieve(object):
    def test_gives_the_first_thirty_values(self):
        assert sieve(30).values.tolist() == FIRST_THIRTY

    def test_satisfies_the_divisor_sum_identity(self):
        n_max = 10 ** 4
        mu = sieve(n_max).values.astype(numpy.int64)
        totals = numpy.zeros(n_max, dtype=numpy.int64)
        for d in range(1, n_max + 1):
            totals[d - 1::d] += mu[d - 1]
        assert totals[0] == 1
        assert not totals[1:].any()

    def test_gives_the_same_table_with_small_segments(self, monkeypatch):
        whole = sieve(5000)
        monkeypatch.setattr(mobius, 'SEGMENT_SIZE', 97)
        assert sieve(5000) == whole

    def test_is_multiplicative_on_coprime_pairs(self):
        table = sieve(40000)
        for m in range(1, 200):
            for n in range(m, 200):
                if math.gcd(m, n) == 1:
                    assert table.mu(m * n) == table.mu(m) * table.mu(n), (m, n)

    @pytest.mark.parametrize('n_max', [10 ** 3, 10 ** 4, 10 ** 5])
    def test_partial_sums_of_mu_over_n_squared(self, n_max, table):
        n = numpy.arange(1, n_max + 1, dtype=numpy.float64)
        total = numpy.sum(table.values[:n_max] / n ** 2)
        assert abs(total - 6 / math.pi ** 2) <= 1.0 / n_max

    def test_refuses_an_empty_bound(self):
        with pytest.raises(DomainError):
            sieve(0)

    def test_refuses_tables_past_the_limit(self):
        with pytest.raises(ResourceError) as e:
            sieve(mobius.DEFAULT_LIMIT + 1)
        assert e.value.needed == mobius.DEFAULT_LIMIT + 1

    def test_base_primes_of_one_is_empty(self):
        assert len(base_primes(1)) == 0


class TestMobiusTable(object):
    def setup_method(self):
        self.table = sieve(1000)

    def test_mertens_values(self):
        assert self.table.mertens(10) == -1
        assert self.table.mertens(100) == 1
        assert self.table.mertens(1000) == 2

    def test_support_skips_nonsquarefree_entries(self):
        n, mu = self.table.support(10)
        assert n.tolist() == [1, 2, 3, 5, 6, 7, 10]
        assert mu.tolist() == [1, -1, -1, -1, 1, -1, 1]

    def test_mu_reads_single_entries(self):
        assert self.table.mu(30) == -1
        assert self.table.mu(1000) == 0

    def test_mu_outside_the_table_raises_resource_error(self):
        with pytest.raises(ResourceError):
            self.table.mu(1001)
        with pytest.raises(ResourceError):
            self.table.mu(0)

    def test_require_reports_the_size_needed(self):
        with pytest.raises(ResourceError) as e:
            self.table.require(5000)
        assert e.value.needed == 5000

    def test_values_are_read_only(self):
        with pytest.raises(ValueError):
            self.table.values[0] = 0

    def test_tables_compare_by_content(self):
        assert self.table == MobiusTable(sieve(1000).values)
        assert self.table != sieve(999)


class TestCacheFile(unittest.TestCase):
    def setUp(self):
        import tempfile
        self.tempdir = tempfile.mkdtemp()
        self.path = os.path.join(self.tempdir, 'sub', 'mobius.bin')

    def tearDown(self):
        import shutil
        shutil.rmtree(self.tempdir)

    def write(self, data):
        os.makedirs(os.path.dirname(self.path), exist_ok=True)
        with open(self.path, 'wb') as fp:
            fp.write(data)

    def test_round_trip_is_bit_exact(self):
        table = sieve(4096)
        save_cache(table, self.path)
        assert os.path.getsize(self.path) == mobius.HEADER.size + 4096
        assert load_cache(self.path) == table

    def test_round_trip_matches_a_fresh_sieve(self):
        save_cache(MobiusTable(mu_by_factoring(5000)), self.path)
        assert load_cache(self.path) == sieve(5000)

    def test_rejects_bad_magic(self):
        self.write(mobius.HEADER.pack(b'MOBIUS02', 1) + b'\x01')
        self.assertRaises(CacheFormatError, load_cache, self.path)

    def test_rejects_truncated_header(self):
        self.write(b'MOBI')
        self.assertRaises(CacheFormatError, load_cache, self.path)

    def test_rejects_length_mismatch(self):
        self.write(mobius.HEADER.pack(mobius.MAGIC, 3) + b'\x01\xff')
        self.assertRaises(CacheFormatError, load_cache, self.path)

    def test_rejects_bytes_outside_minus_one_to_one(self):
        self.write(mobius.HEADER.pack(mobius.MAGIC, 2) + b'\x01\x02')
        self.assertRaises(CacheFormatError, load_cache, self.path)

    def test_cache_builds_saves_and_grows(self):
        cache = MobiusCache(self.path, initial=1000)
        assert cache.table.n_max == 1000
        assert os.path.exists(self.path)

        grown = cache.ensure(5000)
        assert grown.n_max == 5000
        assert MobiusCache(self.path).table.n_max == 5000

    def test_cache_grows_at_least_geometrically(self):
        cache = MobiusCache(self.path, initial=1000)
        assert cache.ensure(1200).n_max == 2000

    def test_cache_keeps_a_table_that_is_large_enough(self):
        cache = MobiusCache(self.path, initial=1000)
        table = cache.table
        assert cache.ensure(500) is table

import time

import numpy as np
import pytest

from cdiff_toolkit.cderiv import DerivativeSpec
from cdiff_toolkit.errors import PreconditionViolated, ReductionUnavailable, SizeExceeded
from cdiff_toolkit.field_function import from_lut, from_monomial, max_preimage
from cdiff_toolkit.finite_field import build_field
from cdiff_toolkit.search_worker import SearchPool
from cdiff_toolkit.spectrum import (
    c_ddt,
    count_solutions,
    independent_rows,
    scaled_representative,
    solution_counts,
    uniformity,
    uniformity_profile,
    uniformity_sweep,
    verify_monotonicity,
)


class TestCounts:
    def test_counts_cover_the_field(self, inverse16, rng):
        for _ in range(20):
            spec = DerivativeSpec(int(rng.integers(0, 16)), tuple(int(a) for a in rng.integers(0, 16, 2)))
            assert solution_counts(inverse16, spec).sum() == 16

    def test_c_zero_unique_solution(self, inverse16):
        for a1 in range(16):
            for a2 in range(16):
                assert count_solutions(inverse16, DerivativeSpec(0, (a1, a2)), 0) == 1

    @pytest.mark.parametrize('p, n, d', [(2, 4, 14), (3, 2, 4)])
    def test_scaling_preserves_counts(self, p, n, d):
        F = build_field(p, n)
        f = from_monomial(F, d)
        for c in range(F.order):
            for a1 in range(1, F.order):
                for a2 in range(F.order):
                    spec = DerivativeSpec(c, (a1, a2))
                    counts = solution_counts(f, spec)
                    representative, _ = scaled_representative(F, d, spec, 0)
                    assert representative.shifts[0] == 1
                    scaled_counts = solution_counts(f, representative)
                    for b in range(F.order):
                        _, scaled_b = scaled_representative(F, d, spec, b)
                        assert counts[b] == scaled_counts[scaled_b]

    def test_scaling_needs_nonzero_first_shift(self, gf16):
        with pytest.raises(PreconditionViolated):
            scaled_representative(gf16, 14, DerivativeSpec(2, (0, 1)), 0)


class TestUniformity:
    def test_apn_cube(self, gf8):
        report = uniformity(from_monomial(gf8, 3), 1, 1, threads=1)
        assert report.max_count == 2

    def test_inverse_differential_uniformity(self, inverse16):
        assert uniformity(inverse16, 1, 1, threads=1).max_count == 4

    def test_order_zero_is_max_preimage(self, gf9):
        f = from_monomial(gf9, 4)
        report = uniformity(f, 0, 2)
        assert report.max_count == max_preimage(f)[0] == 4
        assert report.witnesses[0] == ((), 1)

    def test_histogram_accounts_for_every_pair(self, inverse16):
        report = uniformity(inverse16, 2, 3, threads=2)
        pairs = report.search_domain['shift_tuples'] * 16
        assert sum(report.histogram.values()) == pairs
        assert sum(k * v for k, v in report.histogram.items()) == pairs
        assert report.search_domain['shift_tuples'] == 256

    def test_classical_search_uses_independent_shifts(self, inverse16):
        full = uniformity(inverse16, 2, 1, threads=1)
        reduced = uniformity(inverse16, 2, 1, reduce_power=True, threads=1)
        assert full.search_domain['shift_tuples'] == 15 * 14
        assert reduced.search_domain['shift_tuples'] == 14
        assert set(full.support()) <= {0, 4, 8}

    def test_reduced_domain_keeps_zero_tuple(self, inverse16):
        reduced = uniformity(inverse16, 2, 5, reduce_power=True, threads=1)
        assert reduced.search_domain['shift_tuples'] == 16 + 1
        assert reduced.search_domain['includes_zero_tuple']

    @pytest.mark.parametrize('c', [0, 1, 2, 7, 15])
    def test_reduction_matches_full_search(self, inverse16, c):
        full = uniformity(inverse16, 2, c, threads=1)
        reduced = uniformity(inverse16, 2, c, reduce_power=True, threads=1)
        assert full.max_count == reduced.max_count
        assert full.support() == reduced.support()

    def test_reduction_needs_monomial(self, gf16, random_lut):
        with pytest.raises(ReductionUnavailable):
            uniformity(random_lut(gf16), 2, 2, reduce_power=True)

    def test_odd_characteristic_classical_domain(self, gf9):
        f = from_monomial(gf9, 5)
        full = uniformity(f, 2, 1, threads=1)
        domain = full.search_domain
        assert domain['shift_tuples'] == 81 - 1
        assert not domain['independent_shifts_only']
        assert not domain['includes_zero_tuple']
        assert sum(full.histogram.values()) == 80 * 9
        # (1, 2) is dependent over GF(3) but its derivative does not vanish
        assert solution_counts(f, DerivativeSpec(1, (1, 2))).max() < 9

        reduced = uniformity(f, 2, 1, reduce_power=True, threads=1)
        assert reduced.search_domain['shift_tuples'] == 9
        assert reduced.max_count == full.max_count

    def test_sweep_skips_empty_classical_domain(self):
        F = build_field(2, 2)
        sweep = uniformity_sweep(from_monomial(F, 3), 3, range(4), threads=1)
        assert list(sweep) == [0, 2, 3]

    def test_no_independent_tuples(self):
        F = build_field(2, 2)
        with pytest.raises(PreconditionViolated):
            uniformity(from_monomial(F, 2), 3, 1)

    def test_witnesses_attain_the_maximum(self, inverse16):
        report = uniformity(inverse16, 2, 6, threads=3, witness_cap=5)
        assert 0 < len(report.witnesses) <= 5
        assert report.witnesses == sorted(report.witnesses)
        for shifts, b in report.witnesses:
            assert count_solutions(inverse16, DerivativeSpec(6, shifts), b) == report.max_count

    def test_thread_count_does_not_change_reports(self, gf27, random_lut):
        f = random_lut(gf27)
        for c in (0, 1, 5):
            serial = uniformity(f, 2, c, threads=1).to_dict(include_meta=False)
            parallel = uniformity(f, 2, c, threads=4).to_dict(include_meta=False)
            assert serial == parallel

    def test_small_blocks_do_not_change_reports(self, inverse16, fresh_config):
        baseline = uniformity(inverse16, 2, 9, threads=2).to_dict(include_meta=False)
        fresh_config.search['block_entries'] = 16 * 4 * 3
        assert uniformity(inverse16, 2, 9, threads=2).to_dict(include_meta=False) == baseline

    def test_report_serialization(self, inverse16):
        report = uniformity(inverse16, 2, 0, reduce_power=True, threads=1)
        data = report.to_dict()
        assert data['max_count'] == 1
        assert 'elapsed' in data['meta']
        assert 'meta' not in report.to_dict(include_meta=False)
        # each of the 17 tuples gives a permutation
        assert report.histogram_text() == "1:272"

    def test_sweep_is_ordered(self, gf9):
        f = from_monomial(gf9, 4)
        sweep = uniformity_sweep(f, 1, [5, 0, 2], threads=1)
        assert list(sweep) == [0, 2, 5]


class TestMonotonicity:
    @pytest.mark.parametrize('c', [0, 2, 11])
    def test_inverse_profile(self, inverse16, c):
        assert verify_monotonicity(inverse16, 3, c, reduce_power=True, threads=2)

    def test_random_functions(self, gf9, random_lut, rng):
        for _ in range(5):
            f = random_lut(gf9)
            c = int(rng.choice([0, 2, 3, 4, 5, 6, 7, 8]))
            profile = uniformity_profile(f, 3, c, threads=1)
            assert profile == sorted(profile)

    @pytest.mark.parametrize('p, n', [(2, 4), (3, 3)])
    def test_random_batch(self, p, n, rng):
        F = build_field(p, n)
        multipliers = [c for c in range(F.order) if c != 1]
        for _ in range(200):
            f = from_lut(F, rng.integers(0, F.order, F.order))
            c = int(rng.choice(multipliers))
            assert verify_monotonicity(f, 2, c, threads=1)

    def test_classical_case_rejected(self, inverse16):
        with pytest.raises(PreconditionViolated):
            verify_monotonicity(inverse16, 2, 1)


class TestDDT:
    def test_classical_ddt_of_apn(self, gf8):
        table = c_ddt(from_monomial(gf8, 3), 1)
        assert table.shape == (8, 8)
        assert list(table[0]) == [8] + [0] * 7
        assert set(np.unique(table[1:])) <= {0, 2}
        assert all(table.sum(axis=1) == 8)

    def test_zero_multiplier_on_permutation(self, inverse16):
        table = c_ddt(inverse16, 0)
        assert np.all(table == 1)

    def test_matches_counts(self, gf9):
        f = from_monomial(gf9, 4)
        table = c_ddt(f, 2)
        for a in range(9):
            assert np.array_equal(table[a], solution_counts(f, DerivativeSpec(2, (a,))))

    def test_size_cap(self, fresh_config, gf16):
        fresh_config.field['interpolation_max_order'] = 8
        with pytest.raises(SizeExceeded):
            c_ddt(from_monomial(gf16, 3), 1)


class TestIndependence:
    def test_rows(self, gf16, gf9):
        mask = independent_rows(gf16, [[1, 2], [3, 3], [0, 5], [1, 3]])
        assert list(mask) == [True, False, False, True]
        mask = independent_rows(gf9, [[1, 2], [1, 3], [3, 6]])
        assert list(mask) == [False, True, False]


class TestSearchPool:
    def test_results_keep_job_order(self):
        pool = SearchPool(threads=3)
        assert pool.map(lambda job: job * job, range(10)) == [j * j for j in range(10)]
        assert pool.get_stats()['chunks'] == 10

    def test_worker_errors_propagate(self):
        def task(job):
            if job == 4:
                raise ValueError("bad chunk")
            return job

        with pytest.raises(ValueError):
            SearchPool(threads=2).map(task, range(8))

    def test_failure_stops_other_workers(self):
        calls = []

        def task(job):
            calls.append(job)
            if job == 0:
                raise ValueError("bad chunk")
            time.sleep(0.01)
            return job

        with pytest.raises(ValueError):
            SearchPool(threads=2).map(task, range(200))
        assert len(calls) < 50

    def test_progress_bar(self, fresh_config):
        pool = SearchPool(threads=2, progress=True)
        assert pool.map(lambda job: -job, range(6)) == [0, -1, -2, -3, -4, -5]
        fresh_config.search['progress'] = True
        pool = SearchPool(threads=1)
        assert pool.progress
        assert pool.map(str, range(3)) == ['0', '1', '2']

    def test_env_thread_override(self, monkeypatch):
        monkeypatch.setenv('CDIFF_THREADS', '3')
        assert SearchPool().threads == 3

import math

import numpy as np
import pytest

from cdiff_toolkit.case_studies import (
    InverseCaseReport,
    check_table1,
    coincidence_multipliers,
    gold_batch,
    gold_antipodal_max,
    gold_gcd,
    gold_second_order_max,
    gold_shift_identity,
    gold_subfield_uniformity,
    inverse_case_i_count,
    inverse_function,
    inverse_quartic_count,
    inverse_second_order_table,
    inverse_special_point_values,
    quadratic_shift_form,
    quadratic_subfield_uniformity,
    quartic_cross_check,
    random_quadratic_batch,
)
from cdiff_toolkit.cderiv import DerivativeSpec, higher_c_derivative_closed
from cdiff_toolkit.config import CASE_STUDY_CONFIG
from cdiff_toolkit.errors import NotQuadraticForm, PreconditionViolated
from cdiff_toolkit.field_function import from_monomial
from cdiff_toolkit.finite_field import build_field, power, subfield_elements
from cdiff_toolkit.spectrum import count_solutions

TABLE1 = CASE_STUDY_CONFIG['table1_expected']


@pytest.fixture(scope='module')
def inverse_table():
    return {report.n: report for report in inverse_second_order_table(range(4, 9))}


class TestInverseTable:
    @pytest.mark.parametrize('n', [4, 5, 6, 7, 8])
    def test_rows(self, inverse_table, n):
        assert inverse_table[n].row() == TABLE1[n]

    def test_expected_rows(self):
        assert TABLE1[4] == (4, 5, 1)
        assert TABLE1[6] == (8, 5, 1)
        assert TABLE1[8] == (8, 6, 1)

    @pytest.mark.parametrize('n', [4, 5, 6, 7, 8])
    def test_bound_of_six(self, inverse_table, n):
        report = inverse_table[n]
        assert report.bound_satisfied
        assert report.c_generic <= 6

    @pytest.mark.parametrize('n', [4, 5, 6, 7, 8])
    def test_classical_counts(self, inverse_table, n):
        assert set(inverse_table[n].classical_support) <= set(CASE_STUDY_CONFIG['classical_counts'])

    def test_cross_checks_and_witnesses(self, inverse_table):
        for report in inverse_table.values():
            assert report.quartic_cross_check
            assert report.witnesses['c_not_0_1']['c'] == report.c_generic_argmax
        assert inverse_table[8].six_attained
        assert check_table1(inverse_table.values()) == []

    def test_check_flags_classical_counts(self, inverse_table):
        report = inverse_table[4]
        odd = InverseCaseReport(**{**report.__dict__, 'classical_support': [0, 2, 4]})
        problems = check_table1([odd])
        assert len(problems) == 1 and 'classical' in problems[0]

    def test_check_reports_mismatch(self):
        fake = InverseCaseReport(n=4, c_one=4, c_generic=6, c_zero=1, c_generic_argmax=2,
                                 bound_satisfied=True, quartic_cross_check=True,
                                 classical_support=[0, 4], six_attained=True)
        assert len(check_table1([fake])) == 1

    def test_table_starts_at_three(self):
        with pytest.raises(PreconditionViolated):
            inverse_second_order_table([2])

    @pytest.mark.slow
    def test_n9_row(self):
        report = inverse_second_order_table([9])[0]
        assert report.row() == TABLE1[9]


class TestInverseStructure:
    @pytest.mark.parametrize('n', [4, 5])
    def test_quartic_count_matches_search_exhaustively(self, n):
        assert quartic_cross_check(build_field(2, n))

    def test_quartic_count_sampled(self):
        assert quartic_cross_check(build_field(2, 7), samples=100, seed=3)

    def test_special_points(self, gf16, rng):
        f = inverse_function(gf16)
        for _ in range(30):
            a1, a2 = (int(v) for v in rng.choice(np.arange(1, 16), 2, replace=False))
            c = int(rng.integers(0, 16))
            table = higher_c_derivative_closed(f, DerivativeSpec(c, (a1, a2))).table
            for x, value in inverse_special_point_values(gf16, a1, a2, c).items():
                assert table[x] == value

    def test_equal_shifts(self, inverse16):
        F = inverse16.field
        for a in range(16):
            for c in range(16):
                for b in range(16):
                    assert inverse_case_i_count(F, a, c, b) == count_solutions(
                        inverse16, DerivativeSpec(c, (a, a)), b)

    def test_c_zero_single_solution(self, gf16):
        assert inverse_quartic_count(gf16, 3, 5, 0, 0) == 1

    def test_preconditions(self, gf16, gf9):
        with pytest.raises(PreconditionViolated):
            inverse_quartic_count(gf16, 3, 3, 2, 0)
        with pytest.raises(PreconditionViolated):
            inverse_quartic_count(gf16, 0, 3, 2, 0)
        with pytest.raises(PreconditionViolated):
            inverse_quartic_count(gf9, 1, 2, 2, 0)
        with pytest.raises(PreconditionViolated):
            inverse_case_i_count(gf9, 1, 2, 0)


class TestCoincidence:
    def test_multipliers_merge_special_points(self, gf16, rng):
        for _ in range(30):
            a1, a2 = (int(v) for v in rng.choice(np.arange(1, 16), 2, replace=False))
            coincidence = coincidence_multipliers(gf16, a1, a2)
            assert coincidence.verify(gf16)

    def test_cube_root_of_unity_gives_one(self, gf16):
        omega = power(gf16, gf16.generator, 5)
        assert power(gf16, omega, 3) == 1 and omega != 1
        coincidence = coincidence_multipliers(gf16, 1, omega)
        assert coincidence.c_values == (1, 1, 1, 1)
        assert not any(coincidence.valid)

    def test_multipliers_are_nonzero(self, gf16):
        coincidence = coincidence_multipliers(gf16, 2, 9)
        assert 0 not in coincidence.c_values


GOLD_GRID = CASE_STUDY_CONFIG['gold_grid']
SUBFIELD_GRID = CASE_STUDY_CONFIG['subfield_grid']
SUBFIELD_ORDERS = CASE_STUDY_CONFIG['subfield_orders']


class TestGold:
    @pytest.mark.parametrize('p, n, k', GOLD_GRID)
    def test_bound_attained(self, p, n, k):
        result = gold_second_order_max(build_field(p, n), k)
        assert result.bound == p ** math.gcd(k, n) + 1
        assert result.max_count == result.bound
        assert result.attained

    def test_examples(self):
        result = gold_second_order_max(build_field(3, 4), 1)
        assert (result.bound, result.attained) == (4, True)
        assert gold_second_order_max(build_field(2, 4), 2).bound == 5

    def test_batch_follows_config(self, fresh_config):
        fresh_config.case_study['gold_grid'] = [(3, 2, 1), (2, 4, 2)]
        fresh_config.case_study['subfield_grid'] = [(3, 2, 1)]
        fresh_config.case_study['subfield_orders'] = [1, 2]
        results = gold_batch()
        assert [(r.p, r.n, r.k) for r in results] == [(3, 2, 1), (2, 4, 2), (3, 2, 1), (3, 2, 1)]
        assert [r.t for r in results[2:]] == [1, 2]
        assert all(r.attained for r in results[:2])
        assert all(r.holds for r in results[2:])

    def test_exponent_range(self, gf16):
        with pytest.raises(PreconditionViolated):
            gold_second_order_max(gf16, 4)

    @pytest.mark.parametrize('p, n, k', SUBFIELD_GRID)
    @pytest.mark.parametrize('t', SUBFIELD_ORDERS)
    def test_subfield_multipliers(self, p, n, k, t):
        F = build_field(p, n)
        check = gold_subfield_uniformity(F, k, t)
        assert check.to_dict(include_meta=False)['k'] == k
        assert check.expected == math.gcd(p ** k + 1, p ** n - 1)
        assert len(check.per_c) == p ** math.gcd(k, n) - 1
        assert check.holds

    @pytest.mark.parametrize('p, n, k', [(3, 3, 1), (2, 4, 2), (5, 2, 1)])
    def test_shift_identity(self, p, n, k, rng):
        F = build_field(p, n)
        for _ in range(30):
            a1, a2, c = (int(v) for v in rng.integers(0, F.order, 3))
            assert gold_shift_identity(F, k, a1, a2, c)

    @pytest.mark.parametrize('p, n, k', [(3, 4, 1), (2, 4, 2), (3, 2, 1)])
    def test_antipodal_shifts(self, p, n, k):
        F = build_field(p, n)
        for c in F.elements:
            if c != 1:
                assert gold_antipodal_max(F, k, 1, int(c)) == gold_gcd(F, k)


class TestQuadratic:
    @pytest.mark.parametrize('p, n, h', [(2, 4, 2), (3, 4, 2)])
    @pytest.mark.parametrize('t', [1, 2])
    def test_subfield_uniformity_is_max_preimage(self, p, n, h, t):
        F = build_field(p, n)
        for f in random_quadratic_batch(F, h, 5, seed=p * 100 + t):
            check = quadratic_subfield_uniformity(f, t)
            assert check.subfield_degree == 2
            assert check.holds

    @pytest.mark.parametrize('p, n, h', [(2, 4, 2), (3, 4, 2), (3, 3, 3)])
    def test_shift_form(self, p, n, h, rng):
        F = build_field(p, n)
        multipliers = [int(c) for c in subfield_elements(F, math.gcd(n, h)) if c != 1]
        for f in random_quadratic_batch(F, h, 3, seed=7):
            for _ in range(10):
                t = int(rng.integers(0, 4))
                c = int(rng.choice(multipliers))
                spec = DerivativeSpec(c, tuple(int(a) for a in rng.integers(0, F.order, t)))
                assert quadratic_shift_form(f, spec)

    def test_needs_quadratic_origin(self, gf16):
        with pytest.raises(NotQuadraticForm):
            quadratic_subfield_uniformity(from_monomial(gf16, 3), 1)
        with pytest.raises(NotQuadraticForm):
            quadratic_shift_form(from_monomial(gf16, 3), DerivativeSpec(0, (1,)))

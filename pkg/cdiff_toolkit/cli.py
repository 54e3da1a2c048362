#!/usr/bin/env python3
"""
CLI Module
Command-line front end: derivatives, spectrum searches, case-study drivers
and report emission

Exit status: 0 on success, 2 on an invalid run configuration, 3 when a
verified identity or bound does not hold.
"""
import argparse
import logging
import math
import os
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

from cdiff_toolkit import case_studies, report
from cdiff_toolkit.cderiv import (
    DerivativeSpec,
    higher_c_derivative_closed,
    higher_c_derivative_recursive,
    linearized_c_derivative,
    verify_dependent_shifts_vanish,
    verify_product_rule,
    verify_reconstruction,
    verify_sum_rule,
    verify_zero_shift_embedding,
)
from cdiff_toolkit.config import get_config, load_user_config, save_user_config
from cdiff_toolkit.errors import CDiffError, ConfigError, PreconditionViolated, VerificationFailed
from cdiff_toolkit.field_function import (
    Monomial,
    algebraic_degree,
    from_lut,
    load_function,
)
from cdiff_toolkit.finite_field import build_field, parse_modulus, subfield_elements
from cdiff_toolkit.spectrum import c_ddt, uniformity_sweep, verify_monotonicity

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_VERIFICATION = 3

OPERATIONS = ('derive', 'spectrum', 'table1', 'gold', 'quadratic', 'verify', 'ddt')


@dataclass
class RunConfig:
    """One run of the command-line tool"""
    op: str
    p: Optional[int] = None
    n: Optional[int] = None
    modulus: Optional[str] = None
    fn: Optional[str] = None
    t: Optional[int] = None
    c: str = '1'
    shifts: Optional[str] = None
    k: Optional[int] = None
    h: Optional[int] = None
    out_json: Optional[str] = None
    out_csv: Optional[str] = None
    threads: Optional[int] = None
    reduce: Optional[bool] = None
    witness_cap: Optional[int] = None
    seed: int = 0
    include_n9: bool = False
    config_file: Optional[str] = None
    save_config: Optional[str] = None
    progress: Optional[bool] = None

    def validate(self):
        """Raise ConfigError on anything the selected operation cannot run with"""
        if self.op not in OPERATIONS:
            raise ConfigError(f"unknown operation '{self.op}'")
        needs_field = self.op not in ('table1', 'gold') or self.n is not None
        if needs_field and (self.p is None or self.n is None):
            raise ConfigError(f"--op {self.op} needs --p and --n")
        if self.op in ('derive', 'spectrum', 'ddt') and not self.fn:
            raise ConfigError(f"--op {self.op} needs --fn")
        if self.t is not None and self.t < 0:
            raise ConfigError("--t must be >= 0")
        if self.threads is not None and self.threads < 1:
            raise ConfigError("--threads must be >= 1")
        if self.witness_cap is not None and self.witness_cap < 1:
            raise ConfigError("--witness-cap must be >= 1")
        if self.op == 'quadratic' and self.h is None:
            raise ConfigError("--op quadratic needs --h")
        return self


class CDiffApp:
    """Runs one RunConfig and collects the report documents"""

    def __init__(self, run_config):
        self.run_config = run_config
        self.field = None
        self.document = None
        self.csv_rows = None
        self.failures = []

    # --- setup ---

    def _build_field(self, n=None):
        rc = self.run_config
        modulus = parse_modulus(rc.modulus) if rc.modulus else None
        return build_field(rc.p, n or rc.n, modulus)

    def _function(self):
        return load_function(self.field, self.run_config.fn)

    def _multipliers(self, degree=1):
        """Resolve the --c selection against the field"""
        choice = self.run_config.c.strip().lower()
        elements = self.field.elements
        if choice == 'all':
            return [int(c) for c in elements]
        if choice == 'nonone':
            return [int(c) for c in elements if c != 1]
        if choice == 'subfield':
            return [int(c) for c in subfield_elements(self.field, degree) if c != 1]
        try:
            return [self.field.check(int(choice))]
        except ValueError:
            raise ConfigError(f"--c must be an index, 'all', 'subfield' or 'nonone', got '{choice}'")

    def _single_multiplier(self):
        multipliers = self._multipliers()
        if len(multipliers) != 1:
            raise ConfigError(f"--op {self.run_config.op} needs a single --c index")
        return multipliers[0]

    def _shifts(self):
        rc = self.run_config
        if not rc.shifts:
            return ()
        try:
            return tuple(self.field.check(int(a)) for a in rc.shifts.split(','))
        except ValueError:
            raise ConfigError(f"cannot parse --a '{rc.shifts}'")

    # --- operations ---

    def run(self):
        rc = self.run_config
        if rc.n is not None:
            self.field = self._build_field()
            report.print_field(self.field)
        getattr(self, f"_op_{rc.op}")()

    def _op_derive(self):
        f = self._function()
        shifts = self._shifts()
        t = len(shifts) if self.run_config.t is None else self.run_config.t
        if t != len(shifts):
            raise ConfigError(f"--t {t} but {len(shifts)} shifts given in --a")
        spec = DerivativeSpec(self._single_multiplier(), shifts).validate(self.field)
        derivative = higher_c_derivative_recursive(f, spec)
        table = [int(v) for v in derivative.table]
        print(f"D^({t}) of {f.describe()} at c={spec.c}, shifts {list(shifts)}")
        print(' '.join(str(v) for v in table))
        self.document = report.report_header(self.field)
        self.document.update({
            'op': 'derive',
            'function': f.describe(),
            'c': spec.c,
            'shifts': list(shifts),
            'table': table,
        })
        self.csv_rows = [{'x': x, 'value': v} for x, v in enumerate(table)]

    def _op_spectrum(self):
        rc = self.run_config
        f = self._function()
        t = 1 if rc.t is None else rc.t
        degree = math.gcd(self.field.n, rc.k or rc.h or 1)
        reduce_power = get_config().search['reduce_power'] if rc.reduce is None else rc.reduce
        reduce_power = reduce_power and isinstance(f.origin, Monomial)
        reports = list(uniformity_sweep(
            f, t, self._multipliers(degree), reduce_power=reduce_power,
            threads=rc.threads, witness_cap=rc.witness_cap).values())
        if not reports:
            raise PreconditionViolated(f"no admissible {t}-tuples of shifts for --c {rc.c}")
        report.print_spectrum(reports)
        self.document = report.build_document(self.field, 'spectrum', reports, t=t)
        self.csv_rows = report.spectrum_rows(reports)

    def _op_table1(self):
        rc = self.run_config
        settings = get_config().case_study
        if rc.n is not None:
            if rc.p != 2:
                raise ConfigError("--op table1 is over GF(2^n)")
            if rc.fn and rc.fn != f"monomial:{2 ** rc.n - 2}":
                raise ConfigError(f"--op table1 studies monomial:{2 ** rc.n - 2}, got {rc.fn}")
            degrees = [rc.n]
        else:
            degrees = list(settings['table1_degrees'])
            if rc.include_n9 or settings['table1_include_n9']:
                degrees.append(9)

        reports = case_studies.inverse_second_order_table(degrees, threads=rc.threads)
        report.print_inverse_table(reports)
        self.failures.extend(case_studies.check_table1(reports))

        if self.field is None:
            # header names the smallest field of the table
            self.field = build_field(2, degrees[0])
        self.document = report.build_document(self.field, 'table1', reports, degrees=degrees)
        self.csv_rows = report.inverse_rows(reports)

    def _gold_exponent(self):
        rc = self.run_config
        if rc.k is not None:
            return rc.k
        if rc.fn and rc.fn.startswith('monomial:'):
            d = int(rc.fn.partition(':')[2])
            for k in range(1, self.field.n):
                if self.field.p ** k + 1 == d:
                    return k
            raise ConfigError(f"{rc.fn} is not x^(p^k+1) with 1 <= k < n")
        raise ConfigError("--op gold needs --k or --fn monomial:p^k+1")

    def _op_gold(self):
        if self.field is None:
            return self._gold_batch()
        rc = self.run_config
        k = self._gold_exponent()
        t = 2 if rc.t is None else rc.t
        if t == 2:
            result = case_studies.gold_second_order_max(self.field, k, threads=rc.threads)
            print(f"Gold k={k}: max count {result.max_count}, bound {result.bound}, "
                  f"attained {result.attained}")
            if result.max_count > result.bound:
                self.failures.append(
                    f"gold k={k}: max count {result.max_count} exceeds bound {result.bound}")
        else:
            result = case_studies.gold_subfield_uniformity(self.field, k, t, threads=rc.threads)
            print(f"Gold k={k}, t={t}, subfield c: {result.per_c} expected {result.expected}")
            if not result.holds:
                self.failures.append(f"gold k={k} t={t}: subfield uniformity differs from {result.expected}")
        self.document = report.build_document(self.field, 'gold', [result], k=k, t=t)
        self.csv_rows = [{key: value for key, value in result.to_dict(include_meta=False).items()
                          if not isinstance(value, dict)}]

    def _gold_batch(self):
        rc = self.run_config
        results = case_studies.gold_batch(threads=rc.threads)
        rows = report.gold_rows(results)
        report.print_gold_rows(rows)
        self.failures.extend(
            f"gold p={row['p']} n={row['n']} k={row['k']} t={row['t']}: "
            f"observed {row['observed']}, expected {row['expected']}"
            for row in rows if not row['holds']
        )
        # header names the first field of the grid
        self.field = build_field(rows[0]['p'], rows[0]['n'])
        self.document = report.build_document(self.field, 'gold', results)
        self.csv_rows = rows

    def _op_quadratic(self):
        rc = self.run_config
        t = 1 if rc.t is None else rc.t
        settings = get_config().case_study
        if rc.fn:
            raise ConfigError("--op quadratic draws its own functions; drop --fn")
        functions = case_studies.random_quadratic_batch(
            self.field, rc.h, settings['quadratic_trials'], seed=rc.seed)

        results = []
        for index, f in enumerate(functions):
            result = case_studies.quadratic_subfield_uniformity(f, t, threads=rc.threads)
            print(f"trial {index}: delta {result.expected}, per c {result.per_c}")
            if not result.holds:
                self.failures.append(f"quadratic trial {index}: {result.per_c} != {result.expected}")
            results.append(result)
        self.document = report.build_document(self.field, 'quadratic', results, h=rc.h, seed=rc.seed)
        self.csv_rows = [
            {'trial': i, 't': r.t, 'expected': r.expected, 'holds': r.holds}
            for i, r in enumerate(results)
        ]

    def _op_ddt(self):
        f = self._function()
        c = self._single_multiplier()
        table = c_ddt(f, c)
        print(f"c-DDT of {f.describe()} at c={c}: max entry {int(table.max())}")
        self.document = report.report_header(self.field)
        self.document.update({
            'op': 'ddt',
            'function': f.describe(),
            'c': c,
            'table': table.tolist(),
        })
        self.csv_rows = [
            {'a': a, 'counts': ' '.join(str(v) for v in row)} for a, row in enumerate(table.tolist())
        ]

    def _op_verify(self):
        rc = self.run_config
        rng = np.random.default_rng(rc.seed)
        field = self.field
        f = self._function() if rc.fn else from_lut(field, rng.integers(0, field.order, field.order))
        g = from_lut(field, rng.integers(0, field.order, field.order))

        checks = identity_suite(f, g, rng, t_max=3 if rc.t is None else max(1, rc.t))
        report.print_checks(checks)
        self.failures.extend(name for name, passed in checks if not passed)
        self.document = report.report_header(field)
        self.document.update({
            'op': 'verify',
            'function': f.describe(),
            'seed': rc.seed,
            'checks': {name: passed for name, passed in checks},
        })
        self.csv_rows = [{'check': name, 'passed': passed} for name, passed in checks]

    # --- output ---

    def emit(self):
        rc = self.run_config
        report.write_reports(self.field, json_path=rc.out_json, document=self.document,
                             csv_path=rc.out_csv, rows=self.csv_rows)


def identity_suite(f, g, rng, t_max=3, samples=4):
    """(name, passed) for every structural identity on random parameters"""
    field = f.field
    draw = lambda: int(rng.integers(0, field.order))
    checks = []

    def record(name, passed):
        checks.append((name, bool(passed)))

    for trial in range(samples):
        c = draw()
        t = int(rng.integers(1, t_max + 1))
        spec = DerivativeSpec(c, tuple(draw() for _ in range(t)))
        recursive = higher_c_derivative_recursive(f, spec)
        record(f"closed form matches recursion [{trial}]",
               higher_c_derivative_closed(f, spec) == recursive)
        order = rng.permutation(t).tolist()
        record(f"shift order does not matter [{trial}]",
               higher_c_derivative_recursive(f, spec.permuted(order)) == recursive)
        record(f"reconstruction [{trial}]", verify_reconstruction(f, spec))
        record(f"zero shift embedding [{trial}]", verify_zero_shift_embedding(f, spec))
        record(f"sum rule [{trial}]", verify_sum_rule(f, g, spec.shifts[0], c))
        record(f"product rule [{trial}]", verify_product_rule(f, g, spec.shifts[0], c))

    a = draw()
    if field.p == 2:
        b = draw()
        record("dependent shifts vanish", verify_dependent_shifts_vanish(f, (a, b, int(field.vadd(a, b)))))

    c = next(v for v in (draw(), 0) if v != 1)
    if field.order <= 64:
        record("monotone in t", verify_monotonicity(f, 2, c))
    linear = linearized_c_derivative(field, 1, a, c)
    record("linearized derivative keeps degree 1", algebraic_degree(linear) == 1)
    return checks


def build_parser():
    parser = argparse.ArgumentParser(
        prog='cdiff_toolkit',
        description='Higher-order c-differentials over finite fields')
    parser.add_argument('--p', type=int, help='field characteristic')
    parser.add_argument('--n', type=int, help='extension degree')
    parser.add_argument('--modulus', help="irreducible modulus, constant term first ('1,1,0,1')")
    parser.add_argument('--fn', help="monomial:d | poly:<file> | lut:<file>")
    parser.add_argument('--op', required=True, choices=OPERATIONS)
    parser.add_argument('--t', type=int, help='derivative order')
    parser.add_argument('--c', default='1', help="multiplier index, 'all', 'subfield' or 'nonone'")
    parser.add_argument('--a', dest='shifts', help='comma-separated shifts for --op derive')
    parser.add_argument('--k', type=int, help='Gold exponent parameter')
    parser.add_argument('--h', type=int, help='quadratic form parameter, q = p^h')
    parser.add_argument('--out-json', help='write the JSON report here')
    parser.add_argument('--out-csv', help='write the CSV report here')
    parser.add_argument('--threads', type=int, help='worker threads (default: all CPUs)')
    parser.add_argument('--reduce', action=argparse.BooleanOptionalAction, default=None,
                        help='use the a1 = 1 reduction for monomials')
    parser.add_argument('--witness-cap', type=int, help='witnesses kept per report')
    parser.add_argument('--seed', type=int, default=0, help='seed for randomized batches')
    parser.add_argument('--include-n9', action='store_true', help='add n = 9 to the inverse table')
    parser.add_argument('--config', dest='config_file', help='JSON configuration file')
    parser.add_argument('--save-config', help='write the effective configuration to this JSON file')
    parser.add_argument('--progress', action=argparse.BooleanOptionalAction, default=None,
                        help='show search progress bars on a terminal')
    return parser


def configure_logging():
    settings = get_config()
    logging.basicConfig(level=settings.log_level(), format=settings.log['format'])


def run(run_config):
    """Execute one run and return its exit status"""
    settings = get_config()
    try:
        if run_config.config_file:
            if not os.path.isfile(run_config.config_file):
                raise ConfigError(f"config file not found: {run_config.config_file}")
            load_user_config(run_config.config_file)
        if run_config.progress is not None:
            settings.search['progress'] = run_config.progress
        problems = settings.validate_config()
        if problems:
            raise ConfigError('; '.join(problems))
        run_config.validate()

        app = CDiffApp(run_config)
        app.run()
        app.emit()
        if run_config.save_config:
            save_user_config(run_config.save_config)
        if app.failures:
            raise VerificationFailed('; '.join(app.failures))
    except VerificationFailed as e:
        print(f"verification failed [{e.invariant}]: {e}", file=sys.stderr)
        return EXIT_VERIFICATION
    except CDiffError as e:
        print(f"invalid run [{e.invariant}]: {e}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as e:
        print(f"cannot write output: {e}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


def main(argv=None):
    """Main function to run the command-line tool"""
    args = build_parser().parse_args(argv)
    configure_logging()
    run_config = RunConfig(**vars(args))
    return run(run_config)


if __name__ == "__main__":
    sys.exit(main())

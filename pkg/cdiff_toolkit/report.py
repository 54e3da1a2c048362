#!/usr/bin/env python3
"""
Report Module
JSON and CSV output for spectrum and case-study results, plus console tables
"""
import csv
import json
import logging
import os
import tempfile

from cdiff_toolkit.config import get_config
from cdiff_toolkit.errors import ConfigError

logger = logging.getLogger(__name__)


def report_header(field):
    """Field, modulus, encoding and schema echoed at the top of every output"""
    settings = get_config().report
    return {
        'schema': settings['schema'],
        'field': field.describe(),
        'element_encoding': settings['element_encoding'],
    }


def build_document(field, op, results, **extra):
    """Deterministic document; timings go to the separate meta block"""
    document = report_header(field)
    document['op'] = op
    document.update(extra)
    document['results'] = [result.to_dict(include_meta=False) for result in results]
    document['meta'] = {
        'elapsed': [round(getattr(result, 'elapsed', 0.0), 6) for result in results],
        'threads': get_config().thread_count(),
    }
    return document


def _ensure_parent(path):
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)


def write_json(path, document):
    _ensure_parent(path)
    with open(path, 'w') as handle:
        json.dump(document, handle, indent=get_config().report['json_indent'])
        handle.write('\n')
    logger.info("wrote %s", path)


def _first_witness_text(report):
    if not report.witnesses:
        return ''
    shifts, b = report.witnesses[0]
    return f"({' '.join(str(a) for a in shifts)}; {b})"


def spectrum_rows(reports):
    """One CSV row per (c, t) report"""
    return [
        {
            'c_index': report.c,
            't': report.t,
            'max_count': report.max_count,
            'histogram': report.histogram_text(),
            'first_witness': _first_witness_text(report),
        }
        for report in reports
    ]


def inverse_rows(reports):
    return [
        {
            'n': report.n,
            'c_equals_1': report.c_one,
            'c_not_0_1': report.c_generic,
            'c_equals_0': report.c_zero,
            'bound_satisfied': report.bound_satisfied,
            'quartic_cross_check': report.quartic_cross_check,
        }
        for report in reports
    ]


def gold_rows(results):
    """Bound reports and subfield checks flattened to one (p, n, k, t) row each"""
    rows = []
    for result in results:
        if hasattr(result, 'bound'):
            observed, expected = result.max_count, result.bound
            holds = result.max_count <= result.bound
        else:
            observed, expected = max(result.per_c.values(), default=0), result.expected
            holds = result.holds
        rows.append({
            'p': result.p, 'n': result.n, 'k': result.k,
            't': getattr(result, 't', 2),
            'observed': observed,
            'expected': expected,
            'holds': holds,
        })
    return rows


def write_csv(path, field, rows):
    """CSV with '#'-prefixed header lines naming the field and encoding"""
    if not rows:
        raise ConfigError("nothing to write to the CSV report")
    _ensure_parent(path)
    header = report_header(field)
    info = header['field']
    with open(path, 'w', newline='') as handle:
        handle.write(f"# schema={header['schema']} p={info['p']} n={info['n']} "
                     f"modulus={info['modulus_poly']}\n")
        handle.write(f"# {header['element_encoding']}\n")
        writer = csv.DictWriter(handle, fieldnames=list(rows[0]),
                                delimiter=get_config().report['csv_delimiter'])
        writer.writeheader()
        writer.writerows(rows)
    logger.info("wrote %s (%d rows)", path, len(rows))


def _staging_path(path):
    _ensure_parent(path)
    handle, temp = tempfile.mkstemp(dir=os.path.dirname(path) or '.',
                                    prefix=f".{os.path.basename(path)}.", suffix='.tmp')
    os.close(handle)
    return temp


def write_reports(field, json_path=None, document=None, csv_path=None, rows=None):
    """Write the JSON and CSV reports together

    Both go to temporary files next to their targets first and are moved
    into place only once every write has succeeded, so a failed run leaves
    neither file behind.
    """
    if csv_path and not rows:
        raise ConfigError("nothing to write to the CSV report")
    targets = [path for path in (json_path, csv_path) if path]
    for path in targets:
        if os.path.isdir(path):
            raise IsADirectoryError(f"output path is a directory: {path}")

    staged = {}
    try:
        if json_path:
            staged[json_path] = _staging_path(json_path)
            write_json(staged[json_path], document)
        if csv_path:
            staged[csv_path] = _staging_path(csv_path)
            write_csv(staged[csv_path], field, rows)
        for path, temp in staged.items():
            os.replace(temp, path)
            logger.info("published %s", path)
    finally:
        for temp in staged.values():
            if os.path.exists(temp):
                os.remove(temp)


# --- console output ---

def print_field(field):
    print(f"\nField {field!r}")
    print("=" * 50)


def print_spectrum(reports):
    print(f"{'c':>6} {'t':>3} {'max':>6}  histogram")
    for report in reports:
        print(f"{report.c:>6} {report.t:>3} {report.max_count:>6}  {report.histogram_text()}")


def print_inverse_table(reports):
    print("\nInverse function, second order")
    print("=" * 50)
    print(f"{'n':>3} {'c=1':>5} {'c!=0,1':>7} {'c=0':>5}  bound  quartic")
    for report in reports:
        print(f"{report.n:>3} {report.c_one:>5} {report.c_generic:>7} {report.c_zero:>5}  "
              f"{'ok' if report.bound_satisfied else 'FAIL':>5}  "
              f"{'ok' if report.quartic_cross_check else 'FAIL'}")


def print_checks(results):
    """One pass/fail line per named check"""
    for name, passed in results:
        print(f"{name}: {'passed' if passed else 'FAILED'}")


def print_gold_rows(rows):
    print("\nGold functions")
    print("=" * 50)
    print(f"{'p':>3} {'n':>3} {'k':>3} {'t':>3} {'seen':>6} {'want':>6}")
    for row in rows:
        print(f"{row['p']:>3} {row['n']:>3} {row['k']:>3} {row['t']:>3} "
              f"{row['observed']:>6} {row['expected']:>6}  {'ok' if row['holds'] else 'FAIL'}")

#!/usr/bin/env python3
"""
Case Studies Module
Second-order behaviour of the inverse function over GF(2^n), the Gold
function x^(p^k+1) and quadratic functions, checked by exhaustive search
"""
import logging
import math
import time
from dataclasses import dataclass, field as dataclass_field
from typing import Optional

import numpy as np

from cdiff_toolkit.cderiv import DerivativeSpec, higher_c_derivative_closed
from cdiff_toolkit.config import get_config
from cdiff_toolkit.errors import NotQuadraticForm, PreconditionViolated
from cdiff_toolkit.field_function import (
    Quadratic,
    from_monomial,
    max_preimage,
    random_quadratic,
)
from cdiff_toolkit.finite_field import build_field, subfield_elements
from cdiff_toolkit.spectrum import solution_counts, uniformity

logger = logging.getLogger(__name__)


# --- inverse function x^(2^n - 2) ---

@dataclass
class InverseCaseReport:
    """Maximum second-order counts of the inverse function in three regimes"""
    n: int
    c_one: int
    c_generic: int
    c_zero: int
    c_generic_argmax: int
    bound_satisfied: bool
    quartic_cross_check: bool
    classical_support: list
    six_attained: bool
    witnesses: dict = dataclass_field(default_factory=dict)
    elapsed: float = 0.0

    def row(self):
        return (self.c_one, self.c_generic, self.c_zero)

    def to_dict(self, include_meta=True):
        data = {
            'p': 2,
            'n': self.n,
            'k': None,
            't': 2,
            'c_equals_1': self.c_one,
            'c_not_0_1': self.c_generic,
            'c_equals_0': self.c_zero,
            'c_not_0_1_argmax': self.c_generic_argmax,
            'bound_satisfied': self.bound_satisfied,
            'quartic_cross_check': self.quartic_cross_check,
            'classical_support': self.classical_support,
            'six_attained': self.six_attained,
            'witnesses': self.witnesses,
        }
        if include_meta:
            data['meta'] = {'elapsed': self.elapsed}
        return data


def _require_char2_pair(field, a1, a2):
    if field.p != 2:
        raise PreconditionViolated("the inverse-function analysis is for characteristic 2")
    field.check(a1)
    field.check(a2)
    if a1 == a2 or a1 == 0 or a2 == 0:
        raise PreconditionViolated("needs distinct nonzero a1, a2")


def inverse_function(field):
    return from_monomial(field, field.order - 2)


def inverse_special_point_values(field, a1, a2, c):
    """Second derivative of 1/x at x = 0, a1, a2, a1+a2 (char 2, 1/0 = 0)"""
    _require_char2_pair(field, a1, a2)
    inv = lambda v: int(field.vpow(v, field.order - 2))
    mul = lambda *vs: _product(field, vs)
    s = int(field.vadd(a1, a2))
    c2 = mul(c, c)
    return {
        0: int(field.vadd(field.vadd(inv(s), mul(c, inv(a2))), mul(c, inv(a1)))),
        a1: int(field.vadd(field.vadd(inv(a2), mul(c, inv(s))), mul(c2, inv(a1)))),
        a2: int(field.vadd(field.vadd(inv(a1), mul(c, inv(s))), mul(c2, inv(a2)))),
        s: int(field.vadd(field.vadd(mul(c, inv(a2)), mul(c, inv(a1))), mul(c2, inv(s)))),
    }


def _product(field, values):
    result = 1
    for value in values:
        result = int(field.vmul(result, value))
    return result


def inverse_quartic_count(field, a1, a2, c, b):
    """Solutions of D^(2)_{a1,a2} x^(2^n-2) = b, counted structurally

    Roots of the quartic outside {0, a1, a2, a1+a2} plus the special points
    whose value equals b.
    """
    _require_char2_pair(field, a1, a2)
    field.check(c)
    field.check(b)
    mul = lambda *vs: _product(field, vs)
    add = lambda *vs: int(field.vsum(np.array(vs, dtype=np.int64)))

    s = add(a1, a2)
    c2 = mul(c, c)
    p12 = mul(a1, a2)
    s2 = mul(s, s)
    coeffs = [
        mul(c2, s, p12),                                        # x^0
        add(p12, mul(c, s2), mul(c2, p12), mul(c2, s2), mul(b, s, p12)),
        add(s, mul(c, s), mul(b, add(p12, s2))),                # x^2
        add(1, c2),                                             # x^3
        b,                                                      # x^4
    ]

    x = field.elements
    value = np.zeros(field.order, dtype=np.int64)
    for coeff in reversed(coeffs):
        value = field.vadd(field.vmul(value, x), coeff)

    special = {0, a1, a2, s}
    mask = np.ones(field.order, dtype=bool)
    mask[list(special)] = False
    quartic_roots = int(np.count_nonzero((value == 0) & mask))

    special_hits = sum(1 for v in inverse_special_point_values(field, a1, a2, c).values() if v == b)
    return quartic_roots + special_hits


def inverse_case_i_count(field, a, c, b):
    """a1 = a2 = a: the equation collapses to (1 + c^2) x^(2^n-2) = b"""
    if field.p != 2:
        raise PreconditionViolated("the inverse-function analysis is for characteristic 2")
    field.check(a)
    scale = int(field.vadd(1, field.vmul(c, c)))
    if scale == 0:
        return field.order if b == 0 else 0
    # x -> scale / x is a bijection of the field
    return 1


def quartic_cross_check(field, a1=1, samples=None, seed=0):
    """Structural count agrees with the lookup-table count

    Exhaustive over (a2, c, b) when samples is None, else a seeded sample.
    """
    f = inverse_function(field)
    candidates = [int(a) for a in field.elements if a not in (0, a1)]
    if samples is None:
        pairs = [(a2, int(c)) for a2 in candidates for c in field.elements]
        outputs = lambda: field.elements
    else:
        rng = np.random.default_rng(seed)
        pairs = list(zip(rng.choice(candidates, samples).tolist(),
                         rng.integers(0, field.order, samples).tolist()))
        outputs = lambda: rng.integers(0, field.order, 4)

    for a2, c in pairs:
        counts = solution_counts(f, DerivativeSpec(c, (a1, a2)))
        for b in outputs():
            b = int(b)
            if inverse_quartic_count(field, a1, a2, c, b) != counts[b]:
                logger.warning("quartic count mismatch at a1=%d a2=%d c=%d b=%d", a1, a2, c, b)
                return False
    return True


def inverse_second_order_table(n_range, threads=None, quartic_samples=256):
    """Table of maximum second-order counts for c = 1, c not in {0, 1}, c = 0"""
    reports = []
    bound = get_config().case_study['inverse_bound']
    for n in n_range:
        if n < 3:
            raise PreconditionViolated(f"the table starts at n = 3, got {n}")
        start = time.perf_counter()
        field = build_field(2, n)
        f = inverse_function(field)

        classical = uniformity(f, 2, 1, reduce_power=True, threads=threads)
        zero = uniformity(f, 2, 0, reduce_power=True, threads=threads)
        generic = max(
            (uniformity(f, 2, c, reduce_power=True, threads=threads)
             for c in field.elements[2:]),
            key=lambda report: report.max_count,
        )

        exhaustive = field.order <= 16
        cross_check = quartic_cross_check(
            field, samples=None if exhaustive else quartic_samples, seed=n)

        report = InverseCaseReport(
            n=n,
            c_one=classical.max_count,
            c_generic=generic.max_count,
            c_zero=zero.max_count,
            c_generic_argmax=generic.c,
            bound_satisfied=(n < 4) or max(generic.max_count, zero.max_count) <= bound,
            quartic_cross_check=cross_check,
            classical_support=classical.support(),
            six_attained=generic.max_count == bound,
            witnesses={
                'c_equals_1': _first_witness(classical),
                'c_not_0_1': _first_witness(generic),
                'c_equals_0': _first_witness(zero),
            },
            elapsed=time.perf_counter() - start,
        )
        logger.info("inverse n=%d: row %s", n, report.row())
        reports.append(report)
    return reports


def _first_witness(report):
    if not report.witnesses:
        return None
    shifts, b = report.witnesses[0]
    return {'c': report.c, 'shifts': list(shifts), 'b': b}


def check_table1(reports, expected=None):
    """Mismatches between computed rows and the expected table"""
    expected = expected or get_config().case_study['table1_expected']
    problems = []
    for report in reports:
        want = expected.get(report.n)
        if want is not None and tuple(want) != report.row():
            problems.append(f"n={report.n}: computed {report.row()}, expected {tuple(want)}")
        if not report.bound_satisfied:
            problems.append(f"n={report.n}: second-order count exceeds 6 for some c != 1")
        if not report.quartic_cross_check:
            problems.append(f"n={report.n}: quartic count disagrees with table count")
        allowed = set(get_config().case_study['classical_counts'])
        if not set(report.classical_support) <= allowed:
            problems.append(f"n={report.n}: classical counts {report.classical_support} "
                            f"outside {sorted(allowed)}")
    return problems


# --- coincidence multipliers ---

@dataclass
class CoincidenceSet:
    """Multipliers making two special points of the second derivative collide"""
    a1: int
    a2: int
    c_values: tuple
    valid: tuple

    def pairs(self, field):
        """Special-point pair that c_i merges, in c_0..c_3 order"""
        s = int(field.vadd(self.a1, self.a2))
        return ((0, self.a1), (0, self.a2), (s, self.a1), (s, self.a2))

    def verify(self, field):
        """Each valid c_i gives equal derivative values on its pair"""
        for c, ok, (x, y) in zip(self.c_values, self.valid, self.pairs(field)):
            if not ok:
                continue
            values = inverse_special_point_values(field, self.a1, self.a2, c)
            if values[x] != values[y]:
                return False
        return True


def coincidence_multipliers(field, a1, a2):
    """c_0..c_3 in unnormalized form; c in {0, 1} is flagged invalid"""
    _require_char2_pair(field, a1, a2)
    mul = lambda *vs: _product(field, vs)
    inv = lambda v: int(field.vpow(v, -1))
    s = int(field.vadd(a1, a2))
    c_values = (
        mul(a1, a1, inv(mul(s, a2))),
        mul(a2, a2, inv(mul(s, a1))),
        mul(a1, s, inv(mul(a2, a2))),
        mul(a2, s, inv(mul(a1, a1))),
    )
    return CoincidenceSet(
        a1=int(a1),
        a2=int(a2),
        c_values=c_values,
        valid=tuple(c not in (0, 1) for c in c_values),
    )


# --- Gold function x^(p^k + 1) ---

@dataclass
class GoldSecondOrderReport:
    p: int
    n: int
    k: int
    max_count: int
    bound: int
    attained: bool
    argmax_c: int
    gcd_value: int
    witness: dict = dataclass_field(default_factory=dict)
    elapsed: float = 0.0

    def to_dict(self, include_meta=True):
        data = {
            'p': self.p, 'n': self.n, 'k': self.k, 't': 2,
            'max_count': self.max_count,
            'bound': self.bound,
            'attained': self.attained,
            'argmax_c': self.argmax_c,
            'gcd_pk1_pn1': self.gcd_value,
            'witness': self.witness,
        }
        if include_meta:
            data['meta'] = {'elapsed': self.elapsed}
        return data


def gold_function(field, k):
    if not (1 <= k < field.n):
        raise PreconditionViolated(f"need 1 <= k < n, got k={k}, n={field.n}")
    return from_monomial(field, field.p ** k + 1)


def gold_gcd(field, k):
    """gcd(p^k + 1, p^n - 1)"""
    return math.gcd(field.p ** k + 1, field.order - 1)


def gold_second_order_max(field, k, threads=None):
    """Max second-order count over c != 1 against the bound p^gcd(k,n) + 1"""
    start = time.perf_counter()
    f = gold_function(field, k)
    best = max(
        (uniformity(f, 2, c, reduce_power=True, threads=threads)
         for c in field.elements if c != 1),
        key=lambda report: report.max_count,
    )
    bound = field.p ** math.gcd(k, field.n) + 1
    return GoldSecondOrderReport(
        p=field.p, n=field.n, k=k,
        max_count=best.max_count,
        bound=bound,
        attained=best.max_count == bound,
        argmax_c=best.c,
        gcd_value=gold_gcd(field, k),
        witness=_first_witness(best),
        elapsed=time.perf_counter() - start,
    )


def gold_antipodal_max(field, k, a1, c):
    """a2 = -a1: the equation becomes x^(p^k+1) = b'/(1-c)^2"""
    if field.check(c) == 1:
        raise PreconditionViolated("needs c != 1")
    f = gold_function(field, k)
    spec = DerivativeSpec(c, (a1, int(field.vneg(a1))))
    table = higher_c_derivative_closed(f, spec).table
    return int(np.bincount(table, minlength=field.order).max())


def gold_shift_identity(field, k, a1, a2, c):
    """Second derivative of x^(p^k+1) against its expanded form"""
    f = gold_function(field, k)
    pk = field.p ** k
    d = pk + 1
    x = field.elements
    s = int(field.vadd(a1, a2))
    one_minus_c = int(field.vsub(1, c))

    expanded = field.vscale(field.vpow(x, d), int(field.vmul(one_minus_c, one_minus_c)))
    expanded = field.vadd(expanded, field.vscale(field.vpow(x, pk), int(field.vmul(s, one_minus_c))))
    expanded = field.vadd(expanded, field.vscale(x, int(field.vmul(field.vpow(s, pk), one_minus_c))))
    constant = field.vsub(field.vpow(s, d),
                          field.vmul(c, field.vadd(field.vpow(a1, d), field.vpow(a2, d))))
    expanded = field.vadd(expanded, int(constant))

    derivative = higher_c_derivative_closed(f, DerivativeSpec(c, (a1, a2))).table
    return bool(np.array_equal(derivative, expanded))


@dataclass
class SubfieldCheck:
    """Uniformity for every multiplier c != 1 of a subfield"""
    t: int
    subfield_degree: int
    per_c: dict
    expected: int
    p: Optional[int] = None
    n: Optional[int] = None
    k: Optional[int] = None
    h: Optional[int] = None
    elapsed: float = 0.0

    @property
    def holds(self):
        return all(value == self.expected for value in self.per_c.values())

    def to_dict(self, include_meta=True):
        keys = (('p', self.p), ('n', self.n), ('k', self.k), ('h', self.h))
        data = {key: value for key, value in keys if value is not None}
        data.update({
            't': self.t,
            'subfield_degree': self.subfield_degree,
            'per_c': {str(c): v for c, v in sorted(self.per_c.items())},
            'expected': self.expected,
            'holds': self.holds,
        })
        if include_meta:
            data['meta'] = {'elapsed': self.elapsed}
        return data


def _subfield_multipliers(field, degree):
    return [int(c) for c in subfield_elements(field, degree) if c != 1]


def gold_subfield_uniformity(field, k, t, threads=None):
    """c in GF(p^gcd(k,n)) minus 1 gives uniformity gcd(p^k+1, p^n-1) at every t"""
    start = time.perf_counter()
    f = gold_function(field, k)
    degree = math.gcd(k, field.n)
    per_c = {
        c: uniformity(f, t, c, reduce_power=True, threads=threads).max_count
        for c in _subfield_multipliers(field, degree)
    }
    return SubfieldCheck(t=t, subfield_degree=degree, per_c=per_c, expected=gold_gcd(field, k),
                         p=field.p, n=field.n, k=k, elapsed=time.perf_counter() - start)


def gold_batch(grid=None, subfield_grid=None, orders=None, threads=None):
    """Bound checks over a (p, n, k) grid, then subfield checks for every order in orders

    Defaults come from the case_study section of the configuration.
    """
    settings = get_config().case_study
    grid = settings['gold_grid'] if grid is None else grid
    subfield_grid = settings['subfield_grid'] if subfield_grid is None else subfield_grid
    orders = settings['subfield_orders'] if orders is None else orders

    results = [gold_second_order_max(build_field(p, n), k, threads) for p, n, k in grid]
    for p, n, k in subfield_grid:
        field = build_field(p, n)
        results.extend(gold_subfield_uniformity(field, k, t, threads) for t in orders)
    return results


def quadratic_subfield_uniformity(f, t, threads=None):
    """c in GF(p^gcd(n,h)) minus 1 gives uniformity max_b |F^{-1}(b)|"""
    if not isinstance(f.origin, Quadratic):
        raise NotQuadraticForm("the function was not built in quadratic form")
    start = time.perf_counter()
    field = f.field
    degree = math.gcd(field.n, f.origin.h)
    per_c = {
        c: uniformity(f, t, c, threads=threads).max_count
        for c in _subfield_multipliers(field, degree)
    }
    delta, _ = max_preimage(f)
    return SubfieldCheck(t=t, subfield_degree=degree, per_c=per_c, expected=delta,
                         p=field.p, n=field.n, h=f.origin.h, elapsed=time.perf_counter() - start)


def quadratic_shift_form(f, spec):
    """For subfield c, D^(t) F(x) - (1-c)^t F(x + sum a/(1-c)) is constant"""
    if not isinstance(f.origin, Quadratic):
        raise NotQuadraticForm("the function was not built in quadratic form")
    field = f.field
    if spec.c == 1:
        raise PreconditionViolated("needs c != 1")
    one_minus_c = int(field.vsub(1, spec.c))
    total = int(field.vsum(np.array(spec.shifts, dtype=np.int64))) if spec.t else 0
    offset = int(field.vmul(total, field.vpow(one_minus_c, -1)))
    shifted = f.table[field.vadd(field.elements, offset)]
    model = field.vscale(shifted, int(field.vpow(one_minus_c, spec.t)))
    derivative = higher_c_derivative_closed(f, spec).table
    difference = field.vsub(derivative, model)
    return bool(np.all(difference == difference[0]))


def random_quadratic_batch(field, h, count, seed=0, terms=None):
    """Seeded random quadratic functions over q = p^h"""
    rng = np.random.default_rng(seed)
    terms = terms or get_config().case_study['quadratic_terms']
    return [random_quadratic(field, h, rng, terms) for _ in range(count)]

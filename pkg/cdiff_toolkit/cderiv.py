#!/usr/bin/env python3
"""
C-Derivative Module
First and higher-order multiplicative c-derivatives of field functions

Two evaluation paths are kept side by side: the recursive definition
D^(t) = D_{a_t}(D^(t-1)) and the inclusion-exclusion closed form
sum_{I subset [t]} (-c)^(t-|I|) F(x + sum_{i in I} a_i).
"""
import logging
from dataclasses import dataclass

import numpy as np

from cdiff_toolkit.config import get_config
from cdiff_toolkit.errors import FieldMismatch, OrderTooHigh, PreconditionViolated
from cdiff_toolkit.field_function import FieldFunction, UnivariatePoly

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DerivativeSpec:
    """(c, [a_1, ..., a_t]); t = 0 is F itself"""
    c: int
    shifts: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, 'c', int(self.c))
        object.__setattr__(self, 'shifts', tuple(int(a) for a in self.shifts))

    @property
    def t(self):
        return len(self.shifts)

    def permuted(self, order):
        return DerivativeSpec(self.c, tuple(self.shifts[i] for i in order))

    def validate(self, field):
        field.check(self.c)
        for a in self.shifts:
            field.check(a)
        return self


def _check_closed_order(t):
    limit = get_config().derivative['max_closed_order']
    if t > limit:
        raise OrderTooHigh(f"order {t} exceeds the subset-enumeration cap {limit}")


def c_derivative(f, a, c):
    """x -> F(x + a) - c F(x)"""
    field = f.field
    shifted = f.table[field.vadd(field.elements, field.check(a))]
    return FieldFunction(field, field.vsub(shifted, field.vscale(f.table, c)))


def classical_derivative(f, a):
    return c_derivative(f, a, 1)


def higher_c_derivative_recursive(f, spec):
    """t-fold application of c_derivative in the given shift order"""
    spec.validate(f.field)
    result = f
    for a in spec.shifts:
        result = c_derivative(result, a, spec.c)
    return result


def _signed_powers(field, c, t):
    """(-c)^(t - w) for every subset weight w"""
    minus_c = int(field.vneg(c))
    return [int(field.vpow(minus_c, t - w)) for w in range(t + 1)]


def closed_form_batch(f, c, shift_tuples):
    """Closed-form derivative tables for many shift tuples at once

    shift_tuples has shape (K, t); the result has shape (K, order) with
    row k holding the t-th c-derivative for shifts shift_tuples[k].
    """
    field = f.field
    shift_tuples = np.asarray(shift_tuples, dtype=np.int64)
    rows, t = shift_tuples.shape
    _check_closed_order(t)

    subset_sums = np.zeros((1 << t, rows), dtype=np.int64)
    for mask in range(1, 1 << t):
        low = mask & -mask
        subset_sums[mask] = field.vadd(subset_sums[mask ^ low], shift_tuples[:, low.bit_length() - 1])

    scale_rows = [field.scale_table(coeff) for coeff in _signed_powers(field, c, t)]
    x = field.elements[None, :]
    result = np.zeros((rows, field.order), dtype=np.int64)
    for mask in range(1 << t):
        scale = scale_rows[bin(mask).count('1')]
        term = scale[f.table[field.vadd(x, subset_sums[mask][:, None])]]
        result = field.vadd(result, term)
    return result


def higher_c_derivative_closed(f, spec):
    """Inclusion-exclusion sum over all subsets of the shifts"""
    spec.validate(f.field)
    _check_closed_order(spec.t)
    table = closed_form_batch(f, spec.c, [list(spec.shifts)])[0]
    return FieldFunction(f.field, table)


def _subset_specs(spec):
    """Every sub-derivative D^(|J|)_{a_J} with its subset weight"""
    for mask in range(1 << spec.t):
        chosen = tuple(a for i, a in enumerate(spec.shifts) if mask >> i & 1)
        yield len(chosen), DerivativeSpec(spec.c, chosen)


def verify_reconstruction(f, spec):
    """F(x + sum a_i) == sum_J c^(t-|J|) D^(|J|)_{a_J} F(x) pointwise"""
    field = f.field
    spec.validate(field)
    _check_closed_order(spec.t)

    total_shift = int(field.vsum(np.array(spec.shifts, dtype=np.int64))) if spec.t else 0
    lhs = f.table[field.vadd(field.elements, total_shift)]

    rhs = np.zeros(field.order, dtype=np.int64)
    for weight, sub_spec in _subset_specs(spec):
        derivative = higher_c_derivative_recursive(f, sub_spec)
        factor = int(field.vpow(spec.c, spec.t - weight))
        rhs = field.vadd(rhs, field.vscale(derivative.table, factor))
    return bool(np.array_equal(lhs, rhs))


def _same_field(f, g):
    if f.field != g.field:
        raise FieldMismatch(f"{f.field!r} differs from {g.field!r}")
    return f.field


def verify_sum_rule(f, g, a, c):
    """D_a(F + G) == D_a F + D_a G"""
    field = _same_field(f, g)
    total = FieldFunction(field, field.vadd(f.table, g.table))
    lhs = c_derivative(total, a, c).table
    rhs = field.vadd(c_derivative(f, a, c).table, c_derivative(g, a, c).table)
    return bool(np.array_equal(lhs, rhs))


def verify_product_rule(f, g, a, c):
    """D_a(FG)(x) == F(x+a) D_a G(x) + (F(x+a) - F(x)) c G(x)

    The second term carries the classical difference of F; replacing it by
    the c-derivative only balances when c^2 = c.
    """
    field = _same_field(f, g)
    product = FieldFunction(field, field.vmul(f.table, g.table))
    lhs = c_derivative(product, a, c).table

    f_shifted = f.table[field.vadd(field.elements, field.check(a))]
    first = field.vmul(f_shifted, c_derivative(g, a, c).table)
    second = field.vscale(field.vmul(classical_derivative(f, a).table, g.table), c)
    return bool(np.array_equal(lhs, field.vadd(first, second)))


def verify_zero_shift_embedding(f, spec):
    """D^(t)_{a_1..a_{t-1}, 0} == (1 - c) D^(t-1)_{a_1..a_{t-1}}"""
    field = f.field
    spec.validate(field)
    extended = DerivativeSpec(spec.c, spec.shifts + (0,))
    lhs = higher_c_derivative_recursive(f, extended).table
    one_minus_c = int(field.vsub(1, spec.c))
    rhs = field.vscale(higher_c_derivative_recursive(f, spec).table, one_minus_c)
    return bool(np.array_equal(lhs, rhs))


def shifts_rank(field, shifts):
    """Rank over GF(p) of the shifts viewed as coefficient vectors"""
    p = field.p
    matrix = [field.to_digits(a) for a in shifts]
    rank = 0
    for col in range(field.n):
        pivot = next((r for r in range(rank, len(matrix)) if matrix[r][col] % p), None)
        if pivot is None:
            continue
        matrix[rank], matrix[pivot] = matrix[pivot], matrix[rank]
        inv_lead = pow(matrix[rank][col], p - 2, p)
        matrix[rank] = [(v * inv_lead) % p for v in matrix[rank]]
        for r in range(len(matrix)):
            if r != rank and matrix[r][col] % p:
                factor = matrix[r][col]
                matrix[r] = [(v - factor * w) % p for v, w in zip(matrix[r], matrix[rank])]
        rank += 1
    return rank


def verify_dependent_shifts_vanish(f, shifts):
    """In characteristic 2, GF(2)-dependent shifts kill the classical derivative

    Returns True when the shifts are independent (nothing to check) or when
    the classical higher derivative is identically zero.
    """
    field = f.field
    if field.p != 2:
        raise PreconditionViolated("the vanishing rule is stated for characteristic 2")
    if shifts_rank(field, shifts) == len(shifts):
        return True
    derivative = higher_c_derivative_recursive(f, DerivativeSpec(1, tuple(shifts)))
    return not np.any(derivative.table)


def linearized_c_derivative(field, k, a, c):
    """Symbolic c-derivative of x^(p^k): (1 - c) x^(p^k) + a^(p^k)"""
    exponent = field.p ** (k % field.n)
    coeffs = [0] * (exponent + 1)
    coeffs[0] = int(field.vpow(field.check(a), exponent))
    coeffs[exponent] = int(field.vsub(1, field.check(c)))
    table = field.vadd(field.vscale(field.vpow(field.elements, exponent), coeffs[exponent]),
                       coeffs[0])
    return FieldFunction(field, table, UnivariatePoly(tuple(coeffs)))

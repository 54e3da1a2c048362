#!/usr/bin/env python3
"""
Field Function Module
(n,n,p)-functions as full lookup tables with optional symbolic origin
"""
import logging
from dataclasses import dataclass

import numpy as np

from cdiff_toolkit.config import get_config
from cdiff_toolkit.errors import (
    ConfigError,
    ExponentOutOfRange,
    FieldMismatch,
    InvalidTable,
    NoSymbolicForm,
    NotQuadraticForm,
    TooManyCoefficients,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Monomial:
    d: int


@dataclass(frozen=True)
class UnivariatePoly:
    coeffs: tuple


@dataclass(frozen=True)
class Quadratic:
    """sum c_ij x^(q^i + q^j) + sum c_l x^(p^l) with q = p^h"""
    h: int
    quadratic_terms: tuple
    linear_terms: tuple
    coeffs: tuple


@dataclass(frozen=True)
class Raw:
    pass


def p_weight(exponent, p):
    """Sum of the base-p digits of an exponent"""
    weight = 0
    while exponent:
        exponent, digit = divmod(exponent, p)
        weight += digit
    return weight


class FieldFunction:
    """Immutable lookup table F with table[x] = F(x)"""

    def __init__(self, field, table, origin=None):
        table = np.array(table, dtype=np.int64)
        if table.shape != (field.order,):
            raise InvalidTable(
                f"table has shape {table.shape}, expected ({field.order},)")
        if table.size and (table.min() < 0 or table.max() >= field.order):
            raise InvalidTable(f"table entries must lie in [0, {field.order})")

        origin = Raw() if origin is None else origin
        if isinstance(origin, Monomial):
            if not np.array_equal(table, field.vpow(field.elements, origin.d)):
                raise InvalidTable(f"table does not match x^{origin.d}")

        table.setflags(write=False)
        self.field = field
        self.table = table
        self.origin = origin

    def __call__(self, x):
        return self.table[x]

    def __len__(self):
        return len(self.table)

    def __eq__(self, other):
        return (isinstance(other, FieldFunction)
                and self.field == other.field
                and np.array_equal(self.table, other.table))

    __hash__ = None

    def __repr__(self):
        return f"FieldFunction({self.describe()} over {self.field!r})"

    def describe(self):
        """Short text naming the symbolic origin"""
        if isinstance(self.origin, Monomial):
            return f"x^{self.origin.d}"
        if isinstance(self.origin, Quadratic):
            return f"quadratic(h={self.origin.h})"
        if isinstance(self.origin, UnivariatePoly):
            terms = [i for i, c in enumerate(self.origin.coeffs) if c]
            return f"poly(degree {max(terms) if terms else 0})"
        return "lut"

    def coefficients(self):
        """Univariate coefficients when the origin is symbolic, else None"""
        if isinstance(self.origin, Monomial):
            coeffs = [0] * (self.origin.d + 1)
            coeffs[self.origin.d] = 1
            return tuple(coeffs)
        if isinstance(self.origin, (UnivariatePoly, Quadratic)):
            return tuple(self.origin.coeffs)
        return None

    def preimage_histogram(self):
        """counts[b] = |F^{-1}(b)|"""
        return np.bincount(self.table, minlength=self.field.order)

    def max_preimage(self):
        """(delta, smallest b attaining it)"""
        counts = self.preimage_histogram()
        witness = int(np.argmax(counts))
        return int(counts[witness]), witness

    def is_permutation(self):
        return self.max_preimage()[0] == 1

    def get_stats(self):
        """Summary statistics for reports"""
        delta, witness = self.max_preimage()
        return {
            'function': self.describe(),
            'order': self.field.order,
            'delta': delta,
            'delta_witness': witness,
            'image_size': int(np.count_nonzero(self.preimage_histogram())),
            'permutation': delta == 1,
        }


# --- constructors ---

def _evaluate(field, coeffs):
    """Evaluate sum coeffs[i] x^i at every field element"""
    values = np.zeros(field.order, dtype=np.int64)
    for exponent, coeff in enumerate(coeffs):
        if coeff:
            term = field.vscale(field.vpow(field.elements, exponent), coeff)
            values = field.vadd(values, term)
    return values


def from_monomial(field, d):
    """x^d, with 0^0 = 1"""
    if not (0 <= d <= field.order - 1):
        raise ExponentOutOfRange(f"exponent {d} outside [0, {field.order - 1}]")
    return FieldFunction(field, field.vpow(field.elements, d), Monomial(d))


def from_univariate(field, coeffs):
    """sum coeffs[i] x^i, coefficient list degree-ascending"""
    coeffs = [field.check(c) for c in coeffs]
    if len(coeffs) > field.order:
        raise TooManyCoefficients(
            f"{len(coeffs)} coefficients, at most {field.order} allowed")
    return FieldFunction(field, _evaluate(field, coeffs), UnivariatePoly(tuple(coeffs)))


def from_lut(field, values):
    """Raw lookup table"""
    return FieldFunction(field, values, Raw())


def identity(field):
    return from_monomial(field, 1)


def constant(field, c):
    return from_univariate(field, [c])


def _frobenius_exponent(field, h, i):
    # x^(q^i) = x^(p^(h*i mod n)) on GF(p^n)
    return field.p ** ((h * i) % field.n)


def from_quadratic(field, h, quadratic_terms, linear_terms=None):
    """sum c_ij x^(q^i+q^j) + sum c_l x^(p^l) with q = p^h"""
    if h < 1:
        raise NotQuadraticForm(f"q = p^h needs h >= 1, got {h}")
    linear_terms = dict(linear_terms or {})
    coeffs = [0] * field.order

    for (i, j), coeff in sorted(quadratic_terms.items()):
        if i < 0 or j < 0:
            raise NotQuadraticForm(f"negative index in term ({i}, {j})")
        exponent = _frobenius_exponent(field, h, i) + _frobenius_exponent(field, h, j)
        if exponent > field.order - 1:
            # only x^(2^(n-1) + 2^(n-1)) = x^(2^n) = x
            exponent -= field.order - 1
        coeffs[exponent] = int(field.vadd(coeffs[exponent], field.check(coeff)))

    for l, coeff in sorted(linear_terms.items()):
        if l < 0:
            raise NotQuadraticForm(f"negative index in linear term {l}")
        exponent = field.p ** (l % field.n)
        coeffs[exponent] = int(field.vadd(coeffs[exponent], field.check(coeff)))

    origin = Quadratic(
        h=h,
        quadratic_terms=tuple(sorted((i, j, int(c)) for (i, j), c in quadratic_terms.items())),
        linear_terms=tuple(sorted((l, int(c)) for l, c in linear_terms.items())),
        coeffs=tuple(coeffs),
    )
    return FieldFunction(field, _evaluate(field, coeffs), origin)


def random_quadratic(field, h, rng, terms=3):
    """Random function in quadratic form over q = p^h with nonzero coefficients"""
    steps = field.n
    pairs = [(i, j) for i in range(steps) for j in range(i, steps)]
    chosen = rng.choice(len(pairs), size=min(terms, len(pairs)), replace=False)
    quadratic_terms = {
        pairs[k]: int(rng.integers(1, field.order)) for k in sorted(chosen)
    }
    linear_terms = {int(rng.integers(0, field.n)): int(rng.integers(1, field.order))}
    return from_quadratic(field, h, quadratic_terms, linear_terms)


# --- structure ---

def interpolate(f):
    """Univariate coefficients of a lookup table (Lagrange over the field)"""
    field = f.field
    limit = get_config().field['interpolation_max_order']
    if field.order > limit:
        raise NoSymbolicForm(
            f"interpolation is limited to order {limit}, field has {field.order}")

    q1 = field.order - 1
    coeffs = np.zeros(field.order, dtype=np.int64)
    coeffs[0] = f.table[0]
    # a_{q-1} = -sum_x F(x)
    coeffs[q1] = field.vneg(field.vsum(f.table))

    nonzero = field.elements[1:]
    logs = field.log_table[nonzero]
    values = f.table[nonzero]
    rows = max(1, get_config().search['block_entries'] // max(1, q1))
    # a_i = -sum_{x != 0} F(x) x^(-i) for 1 <= i <= q-2
    for start in range(1, q1, rows):
        exponents = np.arange(start, min(q1, start + rows), dtype=np.int64)
        powers = field.antilog_table[(-exponents[:, None] * logs[None, :]) % q1]
        sums = field.vsum(field.vmul(values[None, :], powers), axis=1)
        coeffs[start:start + len(exponents)] = field.vneg(sums)
    return tuple(int(c) for c in coeffs)


def algebraic_degree(f):
    """Largest p-weight of an exponent with nonzero coefficient; -1 for zero"""
    if isinstance(f.origin, Monomial):
        return p_weight(f.origin.d, f.field.p)
    coeffs = f.coefficients()
    if coeffs is None:
        coeffs = interpolate(f)
    weights = [p_weight(i, f.field.p) for i, c in enumerate(coeffs) if c]
    return max(weights) if weights else -1


def is_permutation(f):
    return f.is_permutation()


def max_preimage(f):
    return f.max_preimage()


def preimage_histogram(f):
    return f.preimage_histogram()


# --- pointwise arithmetic ---

def _same_field(f, g):
    if f.field != g.field:
        raise FieldMismatch(f"{f.field!r} differs from {g.field!r}")
    return f.field


def _combine_coeffs(field, f, g, op):
    cf, cg = f.coefficients(), g.coefficients()
    if cf is None or cg is None:
        return Raw()
    size = max(len(cf), len(cg))
    cf = np.array(cf + (0,) * (size - len(cf)), dtype=np.int64)
    cg = np.array(cg + (0,) * (size - len(cg)), dtype=np.int64)
    return UnivariatePoly(tuple(int(c) for c in op(cf, cg)))


def function_add(f, g):
    field = _same_field(f, g)
    return FieldFunction(field, field.vadd(f.table, g.table),
                         _combine_coeffs(field, f, g, field.vadd))


def function_sub(f, g):
    field = _same_field(f, g)
    return FieldFunction(field, field.vsub(f.table, g.table),
                         _combine_coeffs(field, f, g, field.vsub))


def function_mul(f, g):
    field = _same_field(f, g)
    return FieldFunction(field, field.vmul(f.table, g.table))


def function_scale(f, c):
    field = f.field
    coeffs = f.coefficients()
    origin = Raw() if coeffs is None else UnivariatePoly(
        tuple(int(v) for v in field.vscale(np.array(coeffs), c)))
    return FieldFunction(field, field.vscale(f.table, c), origin)


def compose(f, g):
    """(f o g)(x) = f(g(x))"""
    _same_field(f, g)
    return FieldFunction(f.field, f.table[g.table])


# --- ingestion ---

def _read_indices(path):
    with open(path, 'r') as handle:
        return [int(line.split('#')[0]) for line in handle if line.split('#')[0].strip()]


def load_function(field, descriptor):
    """Parse 'monomial:d', 'poly:<file>' or 'lut:<file>'"""
    kind, _, argument = descriptor.partition(':')
    if not argument:
        raise ConfigError(f"function descriptor '{descriptor}' has no argument")
    try:
        if kind == 'monomial':
            return from_monomial(field, int(argument))
        if kind == 'poly':
            return from_univariate(field, _read_indices(argument))
        if kind == 'lut':
            return from_lut(field, _read_indices(argument))
    except (OSError, ValueError) as e:
        raise ConfigError(f"cannot load function '{descriptor}': {e}")
    raise ConfigError(f"unknown function kind '{kind}' (monomial, poly, lut)")

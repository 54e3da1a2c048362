#!/usr/bin/env python3
"""
Finite Field Module
Exact GF(p^n) arithmetic on integer-encoded elements with discrete-log tables

An element is the integer whose base-p digits are the coefficients of its
polynomial representative, constant term first: in GF(8) the index 6 = 110b
stands for x^2 + x.  Index 0 is zero and index 1 is one.
"""
import itertools
import logging

import numpy as np

from cdiff_toolkit.config import get_config
from cdiff_toolkit.errors import (
    DivisionByZero,
    InvalidElement,
    NotIrreducible,
    NotPrime,
    PreconditionViolated,
    SizeExceeded,
)

logger = logging.getLogger(__name__)

# Below this order a full addition table is cheaper than digit arithmetic
_ADD_TABLE_MAX_ORDER = 1024


def is_prime(value):
    """Trial-division primality test for small integers"""
    if value < 2:
        return False
    if value % 2 == 0:
        return value == 2
    divisor = 3
    while divisor * divisor <= value:
        if value % divisor == 0:
            return False
        divisor += 2
    return True


def _prime_factors(value):
    factors = []
    divisor = 2
    while divisor * divisor <= value:
        if value % divisor == 0:
            factors.append(divisor)
            while value % divisor == 0:
                value //= divisor
        divisor += 1
    if value > 1:
        factors.append(value)
    return factors


# --- polynomials over GF(p), coefficient lists constant term first ---

def _poly_trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _poly_rem(numerator, divisor, p):
    """Remainder of numerator modulo a monic divisor"""
    rem = [c % p for c in numerator]
    deg = len(divisor) - 1
    for top in range(len(rem) - 1, deg - 1, -1):
        lead = rem[top]
        if lead:
            shift = top - deg
            for i, d in enumerate(divisor):
                rem[shift + i] = (rem[shift + i] - lead * d) % p
    return _poly_trim(rem[:deg])


def is_irreducible(modulus, p):
    """Trial division by every monic polynomial of degree <= deg/2"""
    modulus = [c % p for c in modulus]
    degree = len(modulus) - 1
    if degree < 1:
        return False
    for divisor_degree in range(1, degree // 2 + 1):
        for low in itertools.product(range(p), repeat=divisor_degree):
            if not _poly_rem(modulus, list(low) + [1], p):
                return False
    return True


def smallest_irreducible(p, n):
    """Lexicographically smallest monic irreducible of degree n

    Coefficient lists are compared constant term first, so over GF(2)
    degree 3 gives x^3+x^2+1 = [1, 0, 1, 1].
    """
    for low in itertools.product(range(p), repeat=n):
        candidate = list(low) + [1]
        if is_irreducible(candidate, p):
            return candidate
    raise NotIrreducible(f"no irreducible polynomial of degree {n} over GF({p})")


def parse_modulus(text):
    """Parse comma-separated coefficients, constant term first ('1,1,0,1')"""
    parts = [part.strip() for part in text.replace('\n', ',').split(',')]
    try:
        return [int(part) for part in parts if part]
    except ValueError:
        raise PreconditionViolated(f"cannot parse modulus '{text.strip()}'")


def poly_string(coeffs, var='x'):
    """Human-readable polynomial, highest degree first"""
    terms = []
    for power in range(len(coeffs) - 1, -1, -1):
        coeff = coeffs[power]
        if not coeff:
            continue
        if power == 0:
            terms.append(str(coeff))
            continue
        monomial = var if power == 1 else f"{var}^{power}"
        terms.append(monomial if coeff == 1 else f"{coeff}{monomial}")
    return '+'.join(terms) if terms else '0'


class FieldSpec:
    """The field GF(p^n): modulus, generator and log/antilog tables"""

    def __init__(self, p, n, modulus=None):
        if not is_prime(p):
            raise NotPrime(f"characteristic {p} is not prime")
        if n < 1:
            raise PreconditionViolated(f"extension degree must be >= 1, got {n}")

        max_order = get_config().field['max_order']
        order = p ** n
        if order > max_order:
            raise SizeExceeded(f"GF({p}^{n}) has {order} elements, limit is {max_order}")

        if modulus is None:
            modulus = smallest_irreducible(p, n)
        else:
            modulus = list(modulus)
            if len(modulus) != n + 1:
                raise PreconditionViolated(
                    f"modulus needs {n + 1} coefficients, got {len(modulus)}")
            if any(not (0 <= c < p) for c in modulus):
                raise PreconditionViolated(f"modulus coefficients must lie in [0, {p})")
            if modulus[-1] != 1:
                raise PreconditionViolated("modulus must be monic")
            if not is_irreducible(modulus, p):
                raise NotIrreducible(f"{poly_string(modulus)} is reducible over GF({p})")

        self.p = p
        self.n = n
        self.order = order
        self.modulus = tuple(modulus)
        self._weights = p ** np.arange(n, dtype=np.int64)

        self.generator = self._find_generator()
        self._build_tables()
        logger.debug("built %r with generator %d", self, self.generator)

    # --- construction helpers ---

    def to_digits(self, x):
        """Base-p digits of an index, constant term first"""
        return [(x // p_i) % self.p for p_i in (self.p ** i for i in range(self.n))]

    def from_digits(self, digits):
        """Index of the element with the given coefficients"""
        return sum(int(d) % self.p * self.p ** i for i, d in enumerate(digits))

    def schoolbook_mul(self, x, y):
        """Polynomial product of two elements reduced by the modulus"""
        dx, dy = self.to_digits(x), self.to_digits(y)
        product = [0] * (2 * self.n - 1)
        for i, a in enumerate(dx):
            if a:
                for j, b in enumerate(dy):
                    product[i + j] += a * b
        rem = _poly_rem(product, list(self.modulus), self.p)
        return self.from_digits(rem)

    def _schoolbook_pow(self, x, e):
        result, base = 1, x
        while e:
            if e & 1:
                result = self.schoolbook_mul(result, base)
            base = self.schoolbook_mul(base, base)
            e >>= 1
        return result

    def _find_generator(self):
        group_order = self.order - 1
        if group_order == 1:
            return 1
        cofactors = [group_order // r for r in _prime_factors(group_order)]
        for candidate in range(2, self.order):
            if all(self._schoolbook_pow(candidate, k) != 1 for k in cofactors):
                return candidate
        raise NotIrreducible(f"no primitive element found modulo {poly_string(self.modulus)}")

    def _mul_array_by(self, values, factor):
        """Vectorized schoolbook multiplication used while the tables are built"""
        digits = (values[:, None] // self._weights) % self.p
        factor_digits = self.to_digits(factor)
        product = np.zeros((len(values), 2 * self.n - 1), dtype=np.int64)
        for j, b in enumerate(factor_digits):
            if b:
                product[:, j:j + self.n] += digits * b
        product %= self.p
        modulus = np.array(self.modulus[:-1], dtype=np.int64)
        for top in range(2 * self.n - 2, self.n - 1, -1):
            lead = product[:, top].copy()
            product[:, top - self.n:top] = (product[:, top - self.n:top] - lead[:, None] * modulus) % self.p
        return product[:, :self.n] @ self._weights

    def _build_tables(self):
        group_order = self.order - 1
        powers = np.ones(1, dtype=np.int64)
        while len(powers) < group_order:
            step = self._schoolbook_pow(self.generator, len(powers))
            powers = np.concatenate([powers, self._mul_array_by(powers, step)])
        powers = powers[:group_order]

        if len(np.unique(powers)) != group_order:
            raise NotIrreducible(f"{poly_string(self.modulus)} does not give a field")

        log_table = np.full(self.order, -1, dtype=np.int64)
        log_table[powers] = np.arange(group_order, dtype=np.int64)
        # antilog[i + order - 1] == antilog[i], so log sums need no reduction
        antilog_table = np.concatenate([powers, powers])

        log_table.setflags(write=False)
        antilog_table.setflags(write=False)
        self.log_table = log_table
        self.antilog_table = antilog_table

        elements = np.arange(self.order, dtype=np.int64)
        digits = (elements[:, None] // self._weights) % self.p
        neg_table = ((-digits) % self.p) @ self._weights
        neg_table.setflags(write=False)
        self._neg_table = neg_table

        self._add_table = None
        if self.p != 2 and self.order <= _ADD_TABLE_MAX_ORDER:
            summed = (digits[:, None, :] + digits[None, :, :]) % self.p
            add_table = summed @ self._weights
            add_table.setflags(write=False)
            self._add_table = add_table

        elements.setflags(write=False)
        self.elements = elements

    # --- identity ---

    def __eq__(self, other):
        return (isinstance(other, FieldSpec)
                and (self.p, self.n, self.modulus) == (other.p, other.n, other.modulus))

    def __hash__(self):
        return hash((self.p, self.n, self.modulus))

    def __repr__(self):
        return f"GF({self.p}^{self.n}) mod {poly_string(self.modulus)}"

    def describe(self):
        """Field header echoed into every report"""
        return {
            'p': self.p,
            'n': self.n,
            'order': self.order,
            'modulus': list(self.modulus),
            'modulus_poly': poly_string(self.modulus),
            'generator': int(self.generator),
        }

    def check(self, x):
        """Validate a scalar element index"""
        if not (0 <= int(x) < self.order):
            raise InvalidElement(f"{x} is not an element of {self!r}")
        return int(x)

    def poly(self, x):
        """Polynomial notation of an element"""
        return poly_string(self.to_digits(self.check(x)))

    # --- vectorized arithmetic on index arrays ---

    def vadd(self, x, y):
        x, y = np.asarray(x, dtype=np.int64), np.asarray(y, dtype=np.int64)
        if self.p == 2:
            return x ^ y
        if self._add_table is not None:
            return self._add_table[x, y]
        dx = (x[..., None] // self._weights) % self.p
        dy = (y[..., None] // self._weights) % self.p
        return ((dx + dy) % self.p) @ self._weights

    def vneg(self, x):
        return self._neg_table[np.asarray(x, dtype=np.int64)]

    def vsub(self, x, y):
        if self.p == 2:
            return self.vadd(x, y)
        return self.vadd(x, self.vneg(y))

    def vmul(self, x, y):
        x, y = np.asarray(x, dtype=np.int64), np.asarray(y, dtype=np.int64)
        zero = (x == 0) | (y == 0)
        logs = np.where(zero, 0, self.log_table[x] + self.log_table[y])
        return np.where(zero, 0, self.antilog_table[logs])

    def scale_table(self, c):
        """Lookup row r with r[y] = c*y, so scaling an array is one gather"""
        c = self.check(c)
        if c == 0:
            return np.zeros(self.order, dtype=np.int64)
        return self.vmul(self.elements, c)

    def vscale(self, x, c):
        return self.scale_table(c)[np.asarray(x, dtype=np.int64)]

    def vpow(self, x, e):
        x = np.asarray(x, dtype=np.int64)
        e = int(e)
        zero = x == 0
        if e < 0 and np.any(zero):
            raise DivisionByZero("0 has no negative powers")
        exponent = e % (self.order - 1)
        logs = np.where(zero, 0, (self.log_table[x] * exponent) % (self.order - 1))
        zero_value = 1 if e == 0 else 0
        return np.where(zero, zero_value, self.antilog_table[logs])

    def vinv(self, x):
        return self.vpow(x, -1)

    def vsum(self, x, axis=-1):
        """Field sum of an index array along an axis"""
        x = np.asarray(x, dtype=np.int64)
        if self.p == 2:
            return np.bitwise_xor.reduce(x, axis=axis)
        digits = (x[..., None] // self._weights) % self.p
        summed = digits.sum(axis=axis if axis >= 0 else axis - 1) % self.p
        return summed @ self._weights


def build_field(p, n, modulus=None):
    """Build GF(p^n); the default modulus is the smallest monic irreducible"""
    return FieldSpec(p, n, modulus)


# --- scalar operations ---

def add(F, x, y):
    return int(F.vadd(F.check(x), F.check(y)))


def sub(F, x, y):
    return int(F.vsub(F.check(x), F.check(y)))


def neg(F, x):
    return int(F.vneg(F.check(x)))


def mul(F, x, y):
    return int(F.vmul(F.check(x), F.check(y)))


def inv(F, x):
    if F.check(x) == 0:
        raise DivisionByZero("0 has no multiplicative inverse")
    return int(F.vpow(x, -1))


def div(F, x, y):
    return mul(F, x, inv(F, y))


def power(F, x, e):
    """x^e with pow(0, 0) = 1 and pow(0, e > 0) = 0"""
    return int(F.vpow(F.check(x), e))


def frobenius(F, x, k=1):
    """x^(p^k)"""
    return power(F, x, F.p ** (k % F.n))


def all_elements(F):
    """Indices 0 .. p^n - 1 in ascending order"""
    return F.elements


def subfield_elements(F, m):
    """Elements of the subfield GF(p^m), i.e. the roots of x^(p^m) = x"""
    if m < 1 or F.n % m:
        raise PreconditionViolated(f"GF({F.p}^{m}) is not a subfield of {F!r}")
    elements = F.elements
    return elements[F.vpow(elements, F.p ** m) == elements]


# module-level alias; callers import power() to keep the builtin visible
pow = power  # noqa: A001

#!/usr/bin/env python3
"""
Spectrum Module
Solution counts of D^(t)_{a_1..a_t} F(x) = b and t-order c-differential uniformity

The uniformity of F at c is the maximum over shift tuples (a_1..a_t) and
outputs b of #{x : D^(t) F(x) = b}.  When c = 1 the all-zero shift tuple is
left out; in characteristic 2 every GF(2)-dependent tuple is left out as well,
since the classical derivative vanishes identically on those.
"""
import itertools
import logging
import time
from dataclasses import dataclass, field as dataclass_field

import numpy as np

from cdiff_toolkit.cderiv import (
    DerivativeSpec,
    closed_form_batch,
    higher_c_derivative_closed,
    higher_c_derivative_recursive,
)
from cdiff_toolkit.config import get_config
from cdiff_toolkit.errors import PreconditionViolated, ReductionUnavailable, SizeExceeded
from cdiff_toolkit.field_function import Monomial
from cdiff_toolkit.search_worker import SearchPool

logger = logging.getLogger(__name__)

# chunks per worker thread; more chunks even out uneven blocks
_CHUNKS_PER_THREAD = 4


@dataclass
class SpectrumReport:
    """Histogram of solution counts over every enumerated (a-tuple, b)"""
    t: int
    c: int
    histogram: dict
    max_count: int
    witnesses: list
    search_domain: dict
    field: dict = dataclass_field(default_factory=dict)
    function: str = ''
    elapsed: float = 0.0

    def to_dict(self, include_meta=True):
        data = {
            'field': self.field,
            'function': self.function,
            't': self.t,
            'c': self.c,
            'max_count': self.max_count,
            'histogram': {str(k): v for k, v in sorted(self.histogram.items())},
            'witnesses': [
                {'shifts': list(shifts), 'b': b} for shifts, b in self.witnesses
            ],
            'search_domain': self.search_domain,
        }
        if include_meta:
            data['meta'] = {'elapsed': self.elapsed}
        return data

    def histogram_text(self):
        """'k:mult;...' in ascending k"""
        return ';'.join(f"{k}:{v}" for k, v in sorted(self.histogram.items()))

    def support(self):
        """Solution counts attained by at least one (a-tuple, b)"""
        return sorted(k for k, v in self.histogram.items() if v)


@dataclass(frozen=True)
class _Chunk:
    """A contiguous range of enumeration indices, or the lone all-zero tuple"""
    start: int
    stop: int
    zero_tuple: bool = False


class _SearchDomain:
    """Shift tuples in lexicographic order, one enumeration index each

    For c = 1 the all-zero tuple is skipped.  Over GF(2^n) only GF(2)-linearly
    independent tuples are admitted, since dependent shifts make the classical
    derivative vanish identically there.
    """

    def __init__(self, field, t, c, reduced):
        self.field = field
        self.t = t
        self.reduced = reduced and t >= 1
        self.free = t - 1 if self.reduced else t
        self.size = field.order ** self.free
        self.independent_only = t >= 1 and c == 1 and field.p == 2
        # enumeration index 0 is the all-zero tuple
        self.skip_zero = t >= 1 and c == 1 and not self.reduced and not self.independent_only
        self.first = int(self.skip_zero)
        # the a_1 = 1 representatives miss the all-zero tuple
        self.extra_zero = self.reduced and c != 1

    def tuple_count(self):
        if not self.independent_only:
            return self.size - self.first + int(self.extra_zero)
        q, p = self.field.order, self.field.p
        count = 1
        for i in range(1 if self.reduced else 0, self.t):
            count *= max(0, q - p ** i)
        return count

    def chunks(self, pieces):
        span = self.size - self.first
        pieces = max(1, min(pieces, span))
        bounds = [self.first + (span * i) // pieces for i in range(pieces + 1)]
        chunks = [_Chunk(lo, hi) for lo, hi in zip(bounds, bounds[1:]) if hi > lo]
        if self.extra_zero:
            chunks.insert(0, _Chunk(0, 1, zero_tuple=True))
        return chunks

    def tuples(self, start, stop):
        index = np.arange(start, stop, dtype=np.int64)
        columns = [
            (index // self.field.order ** (self.free - 1 - j)) % self.field.order
            for j in range(self.free)
        ]
        if self.reduced:
            columns.insert(0, np.ones_like(index))
        if not columns:
            return np.zeros((len(index), 0), dtype=np.int64)
        tuples = np.stack(columns, axis=1)
        if self.independent_only:
            tuples = tuples[independent_rows(self.field, tuples)]
        return tuples

    def describe(self):
        return {
            'shift_tuples': self.tuple_count(),
            'reduced_a1_equals_1': self.reduced,
            'includes_zero_tuple': (not self.independent_only and not self.skip_zero
                                    and (self.extra_zero or not self.reduced)),
            'independent_shifts_only': self.independent_only,
        }


def independent_rows(field, tuples):
    """Mask of shift tuples that are linearly independent over GF(p)"""
    tuples = np.asarray(tuples, dtype=np.int64)
    rows, t = tuples.shape
    mask = np.ones(rows, dtype=bool)
    # every nonzero combination whose leading coefficient is 1
    for lead in range(t):
        for tail in itertools.product(range(field.p), repeat=t - lead - 1):
            combination = tuples[:, lead].copy()
            for offset, coeff in enumerate(tail, start=lead + 1):
                if coeff:
                    combination = field.vadd(combination, field.vscale(tuples[:, offset], coeff))
            mask &= combination != 0
    return mask


def _count_block(f, c, tuples):
    """Solution counts per (tuple, b) for a block of tuples"""
    order = f.field.order
    tables = closed_form_batch(f, c, tuples)
    rows = len(tuples)
    flat = (np.arange(rows, dtype=np.int64)[:, None] * order + tables).ravel()
    return np.bincount(flat, minlength=rows * order).reshape(rows, order)


def _search_chunk(f, c, domain, chunk, witness_cap, block_rows):
    order = f.field.order
    histogram = np.zeros(order + 1, dtype=np.int64)
    best = -1
    witnesses = []

    if chunk.zero_tuple:
        ranges = [(np.zeros((1, domain.t), dtype=np.int64))]
    else:
        ranges = (domain.tuples(lo, min(chunk.stop, lo + block_rows))
                  for lo in range(chunk.start, chunk.stop, block_rows))

    for tuples in ranges:
        if not len(tuples):
            continue
        counts = _count_block(f, c, tuples)
        histogram += np.bincount(counts.ravel(), minlength=order + 1)
        block_max = int(counts.max())
        if block_max > best:
            best, witnesses = block_max, []
        if block_max == best and len(witnesses) < witness_cap:
            # argwhere is row-major: tuple order, then b
            for row, b in np.argwhere(counts == best)[:witness_cap - len(witnesses)]:
                witnesses.append((tuple(int(a) for a in tuples[row]), int(b)))
    return histogram, best, witnesses


def _merge(partials, witness_cap):
    histogram = sum(partial[0] for partial in partials)
    best = max(partial[1] for partial in partials)
    witnesses = []
    for _, chunk_best, chunk_witnesses in partials:
        if chunk_best == best:
            witnesses.extend(chunk_witnesses)
    return histogram, best, sorted(witnesses)[:witness_cap]


def count_solutions(f, spec, b):
    """#{x : D^(t) F(x) = b}"""
    return int(solution_counts(f, spec)[f.field.check(b)])


def solution_counts(f, spec):
    """counts[b] for every b at a fixed shift tuple"""
    limit = get_config().derivative['max_closed_order']
    derive = higher_c_derivative_closed if spec.t <= limit else higher_c_derivative_recursive
    return np.bincount(derive(f, spec).table, minlength=f.field.order)


def scaled_representative(field, d, spec, b):
    """(1, a_2/a_1, ..., a_t/a_1; b/a_1^d), the a_1 = 1 representative for x^d"""
    a1 = spec.shifts[0]
    if a1 == 0:
        raise PreconditionViolated("the scaling needs a_1 != 0")
    inverse = int(field.vpow(a1, -1))
    shifts = tuple(int(field.vmul(a, inverse)) for a in spec.shifts)
    scaled_b = int(field.vmul(b, field.vpow(inverse, d)))
    return DerivativeSpec(spec.c, shifts), scaled_b


def _preimage_report(f, c, witness_cap):
    counts = f.preimage_histogram()
    histogram = np.bincount(counts, minlength=f.field.order + 1)
    best = int(counts.max())
    witnesses = [((), int(b)) for b in np.flatnonzero(counts == best)[:witness_cap]]
    return histogram, best, witnesses


def uniformity(f, t, c, reduce_power=False, threads=None, witness_cap=None):
    """t-order c-differential uniformity with its full count histogram"""
    field = f.field
    c = field.check(c)
    if t < 0:
        raise PreconditionViolated(f"order must be >= 0, got {t}")
    if reduce_power and not isinstance(f.origin, Monomial):
        raise ReductionUnavailable("the a_1 = 1 reduction needs a monomial x^d")

    settings = get_config().search
    witness_cap = witness_cap or settings['witness_cap']
    start = time.perf_counter()

    domain = _SearchDomain(field, t, c, reduce_power)
    if domain.tuple_count() == 0:
        raise PreconditionViolated(f"no linearly independent {t}-tuples of shifts in {field!r}")
    if t == 0:
        histogram, best, witnesses = _preimage_report(f, c, witness_cap)
    else:
        pool = SearchPool(threads, label=f"t={t} c={c}")
        block_rows = max(1, settings['block_entries'] // (field.order * (1 << t)))
        chunks = domain.chunks(pool.threads * _CHUNKS_PER_THREAD)
        partials = pool.map(
            lambda chunk: _search_chunk(f, c, domain, chunk, witness_cap, block_rows),
            chunks)
        histogram, best, witnesses = _merge(partials, witness_cap)

    report = SpectrumReport(
        t=t,
        c=c,
        histogram={int(k): int(v) for k, v in enumerate(histogram) if v},
        max_count=int(best),
        witnesses=witnesses,
        search_domain=domain.describe(),
        field=field.describe(),
        function=f.describe(),
        elapsed=time.perf_counter() - start,
    )
    logger.info("%s t=%d c=%d: max count %d over %d tuples",
                f.describe(), t, c, report.max_count, domain.tuple_count())
    return report


def uniformity_sweep(f, t, c_set, reduce_power=False, threads=None, witness_cap=None):
    """One report per multiplier, keyed and ordered by c

    A multiplier without admissible shift tuples (c = 1 with t > n over
    GF(2^n)) is left out of the result instead of failing the whole sweep.
    """
    reports = {}
    for c in sorted(int(c) for c in c_set):
        if _SearchDomain(f.field, t, f.field.check(c), reduce_power).tuple_count() == 0:
            logger.warning("skipping c=%d: no independent %d-tuples of shifts in %r", c, t, f.field)
            continue
        reports[c] = uniformity(f, t, c, reduce_power, threads, witness_cap)
    return reports


def uniformity_profile(f, t_max, c, reduce_power=False, threads=None):
    """[delta^(0), delta^(1), ..., delta^(t_max)] at a fixed c"""
    return [
        uniformity(f, t, c, reduce_power and t >= 1, threads).max_count
        for t in range(t_max + 1)
    ]


def verify_monotonicity(f, t_max, c, reduce_power=False, threads=None):
    """delta^(t) >= delta^(t-1) for 1 <= t <= t_max, for c != 1"""
    if f.field.check(c) == 1:
        raise PreconditionViolated("monotonicity in t is stated for c != 1")
    profile = uniformity_profile(f, t_max, c, reduce_power, threads)
    return all(later >= earlier for earlier, later in zip(profile, profile[1:]))


def c_ddt(f, c):
    """Delta[a, b] = #{x : F(x + a) - c F(x) = b}; the classical DDT at c = 1"""
    field = f.field
    limit = get_config().field['interpolation_max_order']
    if field.order > limit:
        raise SizeExceeded(f"a full table needs order <= {limit}, field has {field.order}")
    shifts = field.elements[:, None]
    block = max(1, get_config().search['block_entries'] // (2 * field.order))
    rows = [_count_block(f, field.check(c), shifts[lo:lo + block])
            for lo in range(0, field.order, block)]
    return np.vstack(rows)

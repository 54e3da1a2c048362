#!/usr/bin/env python3
"""
C-Differential Toolkit Package
Higher-order multiplicative c-derivatives over finite fields: exact field
arithmetic, derivative evaluation, exhaustive uniformity searches and the
inverse, Gold and quadratic case studies.
"""

from cdiff_toolkit.cderiv import (
    DerivativeSpec,
    c_derivative,
    higher_c_derivative_closed,
    higher_c_derivative_recursive,
)
from cdiff_toolkit.field_function import (
    FieldFunction,
    from_lut,
    from_monomial,
    from_quadratic,
    from_univariate,
)
from cdiff_toolkit.finite_field import FieldSpec, build_field
from cdiff_toolkit.spectrum import SpectrumReport, count_solutions, uniformity

__version__ = "1.0.0"
__author__ = "C-Differential Toolkit Team"

__all__ = [
    'FieldSpec',
    'build_field',
    'FieldFunction',
    'from_monomial',
    'from_univariate',
    'from_lut',
    'from_quadratic',
    'DerivativeSpec',
    'c_derivative',
    'higher_c_derivative_recursive',
    'higher_c_derivative_closed',
    'SpectrumReport',
    'count_solutions',
    'uniformity',
]

# Package metadata
PACKAGE_INFO = {
    'name': 'cdiff-toolkit',
    'version': __version__,
    'description': 'Higher-order c-differential uniformity over finite fields',
    'author': __author__,
    'requires': [
        'numpy>=1.21.0',
        'tqdm>=4.60.0',
    ],
    'python_requires': '>=3.9'
}

#!/usr/bin/env python3
"""
Usage Examples for the C-Differential Toolkit
Demonstrates the field, derivative, search and case-study layers on small fields
"""

from cdiff_toolkit import (
    DerivativeSpec,
    build_field,
    count_solutions,
    from_monomial,
    higher_c_derivative_closed,
    higher_c_derivative_recursive,
    uniformity,
)
from cdiff_toolkit.case_studies import (
    coincidence_multipliers,
    gold_second_order_max,
    inverse_second_order_table,
)
from cdiff_toolkit.finite_field import mul, power


def example_1_field_arithmetic():
    """Example 1: Arithmetic in GF(2^3)"""
    print("Example 1: Field Arithmetic")
    print("-" * 30)

    F = build_field(2, 3)
    print(f"Field: {F!r}, generator {F.generator}")
    print(f"x * (x + 1) = {F.poly(mul(F, 2, 3))}")
    print(f"x^7 = {power(F, 2, 7)}")
    return F


def example_2_second_derivative():
    """Example 2: Second c-derivative by both evaluation paths"""
    print("\nExample 2: Second c-Derivative")
    print("-" * 30)

    F = build_field(2, 4)
    f = from_monomial(F, 14)
    spec = DerivativeSpec(c=5, shifts=(1, 7))

    recursive = higher_c_derivative_recursive(f, spec)
    closed = higher_c_derivative_closed(f, spec)
    print(f"Paths agree: {recursive == closed}")
    print(f"Solutions of D = 0: {count_solutions(f, spec, 0)}")
    return recursive


def example_3_uniformity_search():
    """Example 3: Second-order uniformity of the inverse function"""
    print("\nExample 3: Uniformity Search")
    print("-" * 30)

    F = build_field(2, 4)
    f = from_monomial(F, 14)
    for c in (0, 1, 2):
        report = uniformity(f, 2, c, reduce_power=True, threads=1)
        print(f"c={c}: max {report.max_count}, histogram {report.histogram_text()}")
    return report


def example_4_case_studies():
    """Example 4: Inverse table row, coincidence multipliers and the Gold bound"""
    print("\nExample 4: Case Studies")
    print("-" * 30)

    row = inverse_second_order_table([4], threads=1)[0]
    print(f"n=4 row: {row.row()}")

    F = build_field(2, 4)
    coincidence = coincidence_multipliers(F, 1, 2)
    print(f"c0..c3 for (1, 2): {coincidence.c_values}, verified {coincidence.verify(F)}")

    gold = gold_second_order_max(build_field(3, 2), 1, threads=1)
    print(f"Gold over GF(9), k=1: max {gold.max_count}, bound {gold.bound}")
    return row


def main():
    """Run all examples"""
    print("C-Differential Toolkit Examples")
    print("=" * 50)

    example_1_field_arithmetic()
    example_2_second_derivative()
    example_3_uniformity_search()
    example_4_case_studies()


if __name__ == "__main__":
    main()

"""Class groups of imaginary quadratic fields with an element of prescribed order."""

from ._cldiv import (
    BudgetError,
    DomainError,
    SearchExhausted,
    census,
    census_exact,
    class_group,
    construct_case1,
    construct_case2,
    fit_exponent,
    has_element_of_order,
    is_special,
    lift_progression,
    run,
    screen,
    triple_witness,
)

__all__ = [
    "BudgetError",
    "DomainError",
    "SearchExhausted",
    "census",
    "census_exact",
    "class_group",
    "construct_case1",
    "construct_case2",
    "fit_exponent",
    "has_element_of_order",
    "is_special",
    "lift_progression",
    "run",
    "screen",
    "triple_witness",
]

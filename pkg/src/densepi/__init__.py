"""Exact verification toolkit for a nonnegative, everywhere-discontinuous
extreme function of the single-row Gomory-Johnson infinite group model."""

from .exact_numbers import (
    B,
    BASE,
    DEFAULT_REGISTRY,
    AtomRegistry,
    HamelNumber,
    Interval,
    RefinementBudgetError,
    approx,
    compare_to_rational,
    floor_real,
    hnum_from_rational,
    lambda_b,
)
from .group_functions import (
    Additive,
    DensePi,
    FiniteGroupFunction,
    Gmi,
    PiecewiseLinear,
    Sum,
    additive_eval,
    evaluate,
    fn_sum,
    gmi,
    pi_dense,
    restrict_to_grid,
)

__version__ = "0.1.0"

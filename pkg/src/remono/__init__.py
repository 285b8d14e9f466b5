"""Ordered commutative monoids of resources: conversions, rates and monotones."""
from .core import (Budget, BudgetExhausted, GuardExceeded, MalformedInput, MonoidInstance,
                   RateInterval, Slice, TriState, Window, annihilator, catalytic_leq,
                   generating_pair_check, manycopy_leq, nfold, rate_bounds,
                   regularized_leq_witness, slice_points)

__all__ = [
    "Budget", "BudgetExhausted", "GuardExceeded", "MalformedInput", "MonoidInstance",
    "RateInterval", "Slice", "TriState", "Window", "annihilator", "catalytic_leq",
    "generating_pair_check", "manycopy_leq", "nfold", "rate_bounds", "regularized_leq_witness",
    "slice_points",
]

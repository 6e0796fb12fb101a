"""Adjudication operators for N-version (diverse) computation over bags of values."""

from .adjudicators import (
    Adjudicator,
    average,
    average_outliers_removed,
    fptp,
    glb,
    make,
    median,
    mv,
    mv_err,
    plubf,
    tolerance_intersection,
)
from .bag import Bag
from .errors import AdjudicationError, ConfigurationError, InputError
from .generalized import Distribution, OutcomeDistribution, amplify, mix, nondet_choice, prob_choice
from .order import FlatDomain, OrderRelation
from .outcome import BOTTOM, UNDEFINED, Bottom, Defined, Interval, Outcome, Undefined

__version__ = "0.1.0"

__all__ = [
    "AdjudicationError",
    "Adjudicator",
    "amplify",
    "average",
    "average_outliers_removed",
    "Bag",
    "BOTTOM",
    "Bottom",
    "ConfigurationError",
    "Defined",
    "Distribution",
    "FlatDomain",
    "fptp",
    "glb",
    "InputError",
    "Interval",
    "make",
    "median",
    "mix",
    "mv",
    "mv_err",
    "nondet_choice",
    "OrderRelation",
    "Outcome",
    "OutcomeDistribution",
    "plubf",
    "prob_choice",
    "tolerance_intersection",
    "UNDEFINED",
    "Undefined",
]

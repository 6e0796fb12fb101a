"""Single-valued adjudication operators from bags to outcomes.

Every operator here is pure and partial in the sense of returning
``Undefined`` outside its domain. :func:`mv_err` is the one totalization,
turning the missing majority into the explicit ``Bottom`` error.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Mapping, Sequence

from .bag import Bag
from .errors import ConfigurationError, InputError
from .order import FlatDomain, OrderRelation, flat_from_json, lower_bounds, order_from_json
from .outcome import BOTTOM, UNDEFINED, Defined, Interval, Outcome
from .values import Value, as_fraction, rational_from_json

DEFAULT_OUTLIER_K = Fraction(3)


def mv(b: Bag) -> Outcome:
    """Strict majority vote: the value held by more than half of the bag."""
    n = b.size()
    for v, c in b.counts():
        if 2 * c > n:
            return Defined(v)
    return UNDEFINED


def mv_err(b: Bag) -> Outcome:
    """Majority vote that reports a missing majority as ``Bottom``."""
    result = mv(b)
    return result if isinstance(result, Defined) else BOTTOM


def fptp(b: Bag) -> Outcome:
    """First past the post: the unique value with the highest count."""
    ranked = sorted((c for _, c in b.counts()), reverse=True)
    top = ranked[0]
    if len(ranked) > 1 and ranked[1] == top:
        return UNDEFINED
    return Defined(next(v for v, c in b.counts() if c == top))


def glb(o: OrderRelation, b: Bag) -> Outcome:
    lbs = lower_bounds(o, b.elements())
    greatest = [z for z in lbs if all(o.le(l, z) for l in lbs)]
    # antisymmetry makes the greatest element unique when it exists
    return Defined(greatest[0]) if greatest else UNDEFINED


def plubf(d: FlatDomain, b: Bag) -> Outcome:
    """Partial least upper bound on a flat domain.

    Failures (``omega``) are ignored unless every version failed; two
    distinct proper values leave the result undefined whatever their counts.
    """
    proper = [v for v in b.elements() if v != d.omega]
    if not proper:
        return Defined(d.omega)
    if len(proper) == 1:
        return Defined(proper[0])
    return UNDEFINED


def median(o: OrderRelation, b: Bag) -> Outcome:
    """Order-theoretic median, restricted to elements of the bag.

    A candidate ``x`` needs at least half the versions at or below it and at
    least half at or above it. The result is defined only for a unique
    candidate, so even-sized splits and incomparable values give Undefined.
    """
    o.require(b.elements())
    n = b.size()
    counts = b.counts()
    candidates = [
        x
        for x, _ in counts
        if 2 * sum(c for y, c in counts if o.le(y, x)) >= n
        and 2 * sum(c for y, c in counts if o.le(x, y)) >= n
    ]
    return Defined(candidates[0]) if len(candidates) == 1 else UNDEFINED


def _numeric_counts(b: Bag) -> list[tuple[Fraction, int]]:
    return [(as_fraction(v), c) for v, c in b.counts()]


def average(b: Bag) -> Outcome:
    total = sum(v * c for v, c in _numeric_counts(b))
    return Defined(Fraction(total) / b.size())


def average_outliers_removed(b: Bag, k: Fraction | int = DEFAULT_OUTLIER_K) -> Outcome:
    from .generalized import remove_outliers

    return average(remove_outliers(b, k))


def tolerance_intersection(b: Bag, tol: Fraction | int) -> Outcome:
    """Intersect the intervals ``[v - tol, v + tol]`` of all reported values."""
    tol = as_fraction(tol)
    if tol < 0:
        raise InputError(f"tolerance must be non-negative, got {tol}")
    values = [v for v, _ in _numeric_counts(b)]
    lo, hi = max(values) - tol, min(values) + tol
    return Defined(Interval(lo, hi)) if lo <= hi else UNDEFINED


@dataclass(frozen=True)
class Adjudicator:
    """A named, pure operator from bags to outcomes.

    ``sequence_fn`` lets a test plug in an operator that looks at the raw
    item order; every real adjudicator leaves it unset and therefore cannot
    depend on that order.
    """

    name: str
    fn: Callable[[Bag], Outcome] = field(compare=False)
    sequence_fn: Callable[[Sequence[Value]], Outcome] | None = field(default=None, compare=False)

    def __call__(self, b: Bag) -> Outcome:
        return self.fn(b)

    def apply_items(self, items: Sequence[Value]) -> Outcome:
        if self.sequence_fn is not None:
            return self.sequence_fn(items)
        return self.fn(Bag.from_items(items))


REGISTRY_NAMES = ("mv", "mv_err", "fptp", "glb", "plubf", "median", "avg", "avg_robust", "tol_intersect")


def _config_order(config: Mapping[str, Any], name: str) -> OrderRelation:
    order = config.get("order")
    if order is None:
        raise ConfigurationError(f"operator {name!r} needs an 'order' in its configuration")
    return order if isinstance(order, OrderRelation) else order_from_json(order)


def _config_flat(config: Mapping[str, Any]) -> FlatDomain:
    flat = config.get("flat", config.get("omega"))
    if flat is None:
        return FlatDomain()
    return flat if isinstance(flat, FlatDomain) else flat_from_json(flat)


def make(name: str, config: Mapping[str, Any] | str | None = None) -> Adjudicator:
    """Build a registered adjudicator, pulling parameters from ``config``.

    Recognized keys: ``order`` (an OrderRelation or its JSON), ``flat`` or
    ``omega`` (the failure value), ``tol`` and ``k`` (rationals).
    """
    if isinstance(config, str):
        config = json.loads(config)
    config = dict(config or {})
    if name == "mv":
        return Adjudicator(name, mv)
    if name == "mv_err":
        return Adjudicator(name, mv_err)
    if name == "fptp":
        return Adjudicator(name, fptp)
    if name == "avg":
        return Adjudicator(name, average)
    if name == "glb":
        o = _config_order(config, name)
        return Adjudicator(name, lambda b: glb(o, b))
    if name == "median":
        o = _config_order(config, name)
        return Adjudicator(name, lambda b: median(o, b))
    if name == "plubf":
        d = _config_flat(config)
        return Adjudicator(name, lambda b: plubf(d, b))
    if name == "avg_robust":
        k = rational_from_json(config.get("k", 3))
        if k <= 0:
            raise ConfigurationError(f"outlier factor k must be positive, got {k}")
        return Adjudicator(name, lambda b: average_outliers_removed(b, k))
    if name == "tol_intersect":
        if "tol" not in config:
            raise ConfigurationError("operator 'tol_intersect' needs a 'tol' in its configuration")
        tol = rational_from_json(config["tol"])
        if tol < 0:
            raise ConfigurationError(f"tolerance must be non-negative, got {tol}")
        return Adjudicator(name, lambda b: tolerance_intersection(b, tol))
    raise ConfigurationError(f"unknown adjudicator {name!r}; known: {', '.join(REGISTRY_NAMES)}")


def omega_of(config: Mapping[str, Any] | None) -> Value:
    return _config_flat(dict(config or {})).omega


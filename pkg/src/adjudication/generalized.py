"""Adjudication beyond single values.

Bag-to-bag preprocessing (failure and outlier removal), set-valued and
distribution-valued adjudication, mixing of distributions, and exact
amplification of an adjudicator over independent samples.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Any, Callable, Hashable, Iterable, Mapping, Sequence

from .adjudicators import Adjudicator
from .bag import Bag
from .errors import InputError
from .order import FlatDomain
from .outcome import Outcome, outcome_from_json, outcome_key, outcome_to_json
from .values import (
    Value,
    as_fraction,
    canonical_key,
    decimal_string,
    normalize,
    rational_from_json,
    rational_to_json,
    value_from_json,
    value_to_json,
)


def remove_failures(d: FlatDomain, b: Bag) -> Bag:
    """Drop every ``omega``; an all-failure bag is returned unchanged."""
    kept = b.filter(lambda v: v != d.omega)
    return kept if kept is not None else b


def _median(xs: Sequence[Fraction]) -> Fraction:
    xs = sorted(xs)
    mid = len(xs) // 2
    if len(xs) % 2:
        return xs[mid]
    return (xs[mid - 1] + xs[mid]) / 2


def median_absolute_deviation(b: Bag) -> tuple[Fraction, Fraction]:
    """``(median, MAD)`` of the bag's item list, exactly."""
    xs = [as_fraction(v) for v in b.items()]
    centre = _median(xs)
    return centre, _median([abs(x - centre) for x in xs])


def remove_outliers(b: Bag, k: Fraction | int = 3) -> Bag:
    """Drop values further than ``k`` MADs from the median.

    Nothing is removed when the MAD is zero, and the bag is never emptied.
    """
    k = as_fraction(k)
    if k <= 0:
        raise InputError(f"outlier factor k must be positive, got {k}")
    centre, mad = median_absolute_deviation(b)
    if mad == 0:
        return b
    kept = b.filter(lambda v: abs(Fraction(v) - centre) <= k * mad)
    return kept if kept is not None else b


def compose(pre: Callable[[Bag], Bag], adj: Adjudicator, name: str | None = None) -> Adjudicator:
    """The adjudicator ``b -> adj(pre(b))``."""
    label = name or f"{getattr(pre, '__name__', 'pre')}>{adj.name}"
    return Adjudicator(label, lambda b: adj(pre(b)))


def nondet_choice(b: Bag) -> frozenset:
    """Set of all reported values; multiplicities are forgotten."""
    return b.elements()


class Distribution:
    """Finitely supported probability distribution with exact weights.

    Zero weights are dropped so equal distributions compare equal. Keys are
    arbitrary hashable values (see :class:`OutcomeDistribution` for outcomes).
    """

    __slots__ = ("_weights",)

    def __init__(self, weights: Mapping[Hashable, Fraction | int]):
        clean: dict = {}
        for k, w in weights.items():
            w = Fraction(w)
            if w < 0:
                raise InputError(f"negative probability {w} for {k!r}")
            if w:
                k = self._normalize_key(k)
                clean[k] = clean.get(k, Fraction(0)) + w
        if not clean:
            raise InputError("a distribution needs non-empty support")
        total = sum(clean.values())
        if total != 1:
            raise InputError(f"weights must sum to exactly 1, got {total}")
        self._weights = dict(sorted(clean.items(), key=lambda kw: self._sort_key(kw[0])))

    @staticmethod
    def _normalize_key(k: Hashable) -> Hashable:
        return normalize(k)

    @staticmethod
    def _sort_key(k: Hashable) -> tuple:
        return canonical_key(k)

    @classmethod
    def point(cls, v: Hashable) -> "Distribution":
        return cls({v: 1})

    @classmethod
    def two_point(cls, p_wrong: Fraction | int, right: Value = "right", wrong: Value = "wrong") -> "Distribution":
        p = Fraction(p_wrong)
        if not 0 <= p <= 1:
            raise InputError(f"probability must lie in [0, 1], got {p}")
        return cls({right: 1 - p, wrong: p})

    def weight(self, k: Hashable) -> Fraction:
        return self._weights.get(self._normalize_key(k), Fraction(0))

    def support(self) -> list:
        return list(self._weights)

    def items(self) -> list[tuple[Hashable, Fraction]]:
        return list(self._weights.items())

    def mode(self) -> Hashable | None:
        """The unique heaviest key, or None on a tie."""
        ranked = sorted(self._weights.values(), reverse=True)
        if len(ranked) > 1 and ranked[0] == ranked[1]:
            return None
        return next(k for k, w in self._weights.items() if w == ranked[0])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Distribution):
            return NotImplemented
        return self._weights == other._weights

    def __hash__(self) -> int:
        return hash(tuple(self._weights.items()))

    def __repr__(self) -> str:
        inner = ", ".join(f"{k!r}: {w}" for k, w in self._weights.items())
        return f"{type(self).__name__}({{{inner}}})"

    def _key_to_json(self, k: Hashable) -> Any:
        return value_to_json(k)

    def to_json(self) -> dict:
        return {
            "weights": [
                {"value": self._key_to_json(k), **rational_to_json(w), "decimal": decimal_string(w)}
                for k, w in self._weights.items()
            ]
        }

    @classmethod
    def from_json(cls, obj: Any) -> "Distribution":
        if isinstance(obj, str):
            try:
                obj = json.loads(obj)
            except json.JSONDecodeError as exc:
                raise InputError(f"distribution is not valid JSON: {exc}") from exc
        try:
            entries = obj["weights"]
            weights: Counter = Counter()
            for entry in entries:
                weights[cls._key_from_json(entry["value"])] += rational_from_json(
                    {"num": entry["num"], "den": entry["den"]}
                )
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed distribution JSON: {exc}") from exc
        return cls(weights)

    @staticmethod
    def _key_from_json(obj: Any) -> Hashable:
        return value_from_json(obj)


class OutcomeDistribution(Distribution):
    """Distribution over adjudication outcomes, Undefined and Bottom included."""

    __slots__ = ()

    @staticmethod
    def _normalize_key(k: Hashable) -> Hashable:
        return k

    @staticmethod
    def _sort_key(k: Hashable) -> tuple:
        return outcome_key(k)  # type: ignore[arg-type]

    def _key_to_json(self, k: Hashable) -> Any:
        return outcome_to_json(k)  # type: ignore[arg-type]

    @staticmethod
    def _key_from_json(obj: Any) -> Hashable:
        return outcome_from_json(obj)

    def to_json(self) -> dict:
        return {
            "weights": [
                {"outcome": outcome_to_json(k), **rational_to_json(w), "decimal": decimal_string(w)}  # type: ignore[arg-type]
                for k, w in self.items()
            ]
        }

    @classmethod
    def from_json(cls, obj: Any) -> "OutcomeDistribution":
        if isinstance(obj, str):
            obj = json.loads(obj)
        try:
            weights: Counter = Counter()
            for entry in obj["weights"]:
                weights[outcome_from_json(entry["outcome"])] += Fraction(entry["num"], entry["den"])
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed outcome distribution JSON: {exc}") from exc
        return cls(weights)


def prob_choice(b: Bag) -> Distribution:
    n = b.size()
    return Distribution({v: Fraction(c, n) for v, c in b.counts()})


def mix(ds: Iterable[Distribution]) -> Distribution:
    """Equal-weight mixture of distributions."""
    ds = list(ds)
    if not ds:
        raise InputError("cannot mix an empty sequence of distributions")
    total: Counter = Counter()
    for d in ds:
        for k, w in d.items():
            total[k] += w
    return Distribution({k: w / len(ds) for k, w in total.items()})


def _multinomial(n: int, counts: Iterable[int]) -> int:
    out = math.factorial(n)
    for c in counts:
        out //= math.factorial(c)
    return out


def sample_bags(d: Distribution, n: int) -> list[tuple[Bag, Fraction]]:
    """All bags of ``n`` independent draws from ``d`` with their exact probability."""
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise InputError(f"number of versions must be a positive integer, got {n!r}")
    support = d.support()
    out = []
    for combo in combinations_with_replacement(range(len(support)), n):
        counts = Counter(combo)
        p = Fraction(_multinomial(n, counts.values()))
        for i, c in counts.items():
            p *= d.weight(support[i]) ** c
        out.append((Bag({support[i]: c for i, c in counts.items()}), p))
    return out


def amplify(d: Distribution, n: int, adj: Adjudicator | Callable[[Bag], Outcome]) -> OutcomeDistribution:
    """Exact outcome distribution of ``adj`` over ``n`` i.i.d. draws from ``d``.

    Computed by enumerating every multiset of size ``n`` over the support
    with its multinomial weight. No-majority mass stays on ``Undefined``.
    """
    mass: Counter = Counter()
    for b, p in sample_bags(d, n):
        mass[adj(b)] += p
    return OutcomeDistribution(mass)

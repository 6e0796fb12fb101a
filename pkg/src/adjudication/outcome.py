"""Codomain of adjudication: a defined value, no value, or the explicit error.

``Undefined`` means the partial operator has nothing to say about the bag.
``Bottom`` is an error *result* that a totalized operator deliberately
returns. Keeping them apart lets callers tell a silent disagreement from a
raised exception.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Union

from .errors import InputError
from .values import Value, canonical_key, normalize, rational_from_json, value_from_json, value_to_json


@dataclass(frozen=True)
class Interval:
    """Closed interval ``[lo, hi]`` over exact rationals."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = Fraction(self.lo), Fraction(self.hi)
        if lo > hi:
            raise InputError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def intersect(self, other: "Interval") -> "Interval | None":
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        return Interval(lo, hi) if lo <= hi else None

    def __contains__(self, x: object) -> bool:
        return self.lo <= x <= self.hi  # type: ignore[operator]

    def canonical_key(self) -> tuple:
        return (self.lo, self.hi)

    def to_json(self) -> dict:
        return {"interval": [value_to_json(self.lo), value_to_json(self.hi)]}

    @classmethod
    def from_json(cls, obj: Any) -> "Interval":
        lo, hi = obj["interval"]
        return cls(rational_from_json(lo), rational_from_json(hi))

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


@dataclass(frozen=True)
class Defined:
    value: Value

    def __post_init__(self):
        object.__setattr__(self, "value", normalize(self.value))

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class Undefined:
    def __str__(self) -> str:
        return "undefined"


@dataclass(frozen=True)
class Bottom:
    def __str__(self) -> str:
        return "bottom"


Outcome = Union[Defined, Undefined, Bottom]

UNDEFINED = Undefined()
BOTTOM = Bottom()


def is_defined(o: Outcome) -> bool:
    return isinstance(o, Defined)


def outcome_key(o: Outcome) -> tuple:
    if isinstance(o, Defined):
        return (0, canonical_key(o.value))
    if isinstance(o, Undefined):
        return (1,)
    return (2,)


def outcome_to_json(o: Outcome) -> Any:
    if isinstance(o, Defined):
        return {"defined": value_to_json(o.value)}
    return "undefined" if isinstance(o, Undefined) else "bottom"


def outcome_from_json(obj: Any) -> Outcome:
    if obj == "undefined":
        return UNDEFINED
    if obj == "bottom":
        return BOTTOM
    if isinstance(obj, dict) and "defined" in obj:
        return Defined(value_from_json(obj["defined"]))
    raise InputError(f"cannot decode outcome {obj!r}")

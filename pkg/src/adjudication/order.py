"""Explicit finite partial orders and flat domains.

Orders are stored as relations (sets of pairs), never as predicates, so the
law engine can enumerate them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable

from .errors import InputError
from .values import Value, canonical_key, normalize, value_from_json, value_to_json


def _is_valid(universe: frozenset, leq: frozenset) -> bool:
    if any(x not in universe or y not in universe for x, y in leq):
        return False
    if any((x, x) not in leq for x in universe):
        return False
    for x, y in leq:
        if x != y and (y, x) in leq:
            return False
    successors: dict = {x: set() for x in universe}
    for x, y in leq:
        successors[x].add(y)
    for x, y in leq:
        for z in successors[y]:
            if (x, z) not in leq:
                return False
    return True


@dataclass(frozen=True)
class OrderRelation:
    """A partial order over a finite universe, given extensionally."""

    universe: frozenset
    leq: frozenset = field(repr=False)

    def __post_init__(self):
        universe = frozenset(normalize(v) for v in self.universe)
        leq = frozenset((normalize(x), normalize(y)) for x, y in self.leq)
        object.__setattr__(self, "universe", universe)
        object.__setattr__(self, "leq", leq)
        if not universe:
            raise InputError("an order needs a non-empty universe")
        if not _is_valid(universe, leq):
            raise InputError("relation is not a partial order (reflexive, antisymmetric, transitive)")

    @classmethod
    def from_predicate(cls, universe: Iterable[Value], le: Callable[[Value, Value], bool]) -> "OrderRelation":
        universe = frozenset(universe)
        return cls(universe, frozenset((x, y) for x in universe for y in universe if le(x, y)))

    @classmethod
    def chain(cls, values: Iterable[Value]) -> "OrderRelation":
        """Linear order following the sequence order of ``values``."""
        values = list(dict.fromkeys(normalize(v) for v in values))
        rank = {v: i for i, v in enumerate(values)}
        return cls.from_predicate(values, lambda x, y: rank[x] <= rank[y])

    @classmethod
    def numeric(cls, values: Iterable[Value]) -> "OrderRelation":
        return cls.from_predicate(values, lambda x, y: x <= y)

    @classmethod
    def divisibility(cls, values: Iterable[int]) -> "OrderRelation":
        return cls.from_predicate(values, lambda x, y: y % x == 0)

    @classmethod
    def discrete(cls, values: Iterable[Value]) -> "OrderRelation":
        """The antichain: only reflexive pairs."""
        return cls.from_predicate(values, lambda x, y: x == y)

    def le(self, x: Value, y: Value) -> bool:
        return (normalize(x), normalize(y)) in self.leq

    def sorted_universe(self) -> list:
        return sorted(self.universe, key=canonical_key)

    def require(self, values: Iterable[Value]) -> None:
        missing = [v for v in values if normalize(v) not in self.universe]
        if missing:
            raise InputError(f"values outside the order's universe: {missing!r}")

    def to_json(self) -> dict:
        pairs = sorted(self.leq, key=lambda p: (canonical_key(p[0]), canonical_key(p[1])))
        return {
            "universe": [value_to_json(v) for v in self.sorted_universe()],
            "leq": [[value_to_json(x), value_to_json(y)] for x, y in pairs],
        }


@dataclass(frozen=True)
class FlatDomain:
    """Flat domain with failure element ``omega``: x <= y iff x == y or x == omega."""

    omega: Value = "omega"

    def __post_init__(self):
        object.__setattr__(self, "omega", normalize(self.omega))

    def le(self, x: Value, y: Value) -> bool:
        return x == y or x == self.omega

    def order(self, universe: Iterable[Value]) -> OrderRelation:
        """The implied order materialized over ``universe`` (omega is added)."""
        universe = set(universe) | {self.omega}
        return OrderRelation.from_predicate(universe, self.le)

    def to_json(self, universe: Iterable[Value] = ()) -> dict:
        values = sorted(set(universe) | {self.omega}, key=canonical_key)
        return {"flat": {"omega": value_to_json(self.omega), "universe": [value_to_json(v) for v in values]}}


def validate(o: OrderRelation | tuple) -> bool:
    """Check the partial-order axioms for an order or a raw ``(universe, leq)`` pair."""
    if isinstance(o, OrderRelation):
        universe, leq = o.universe, o.leq
    else:
        universe, leq = o
    universe = frozenset(normalize(v) for v in universe)
    leq = frozenset((normalize(x), normalize(y)) for x, y in leq)
    return bool(universe) and _is_valid(universe, leq)


def is_linear(o: OrderRelation) -> bool:
    u = list(o.universe)
    return all(o.le(x, y) or o.le(y, x) for i, x in enumerate(u) for y in u[i + 1:])


def lower_bounds(o: OrderRelation, s: Iterable[Value]) -> frozenset:
    s = [normalize(v) for v in s]
    o.require(s)
    return frozenset(x for x in o.universe if all(o.le(x, y) for y in s))


def order_from_json(obj: Any) -> OrderRelation:
    """Decode ``{"universe": [...], "leq": [[x, y], ...]}`` or the flat shorthand."""
    if isinstance(obj, str):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as exc:
            raise InputError(f"order is not valid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise InputError("an order must be a JSON object")
    if "flat" in obj:
        flat = obj["flat"]
        domain = FlatDomain(value_from_json(flat["omega"]))
        return domain.order(value_from_json(v) for v in flat.get("universe", []))
    try:
        universe = [value_from_json(v) for v in obj["universe"]]
        leq = [(value_from_json(x), value_from_json(y)) for x, y in obj["leq"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed order JSON: {exc}") from exc
    return OrderRelation(frozenset(universe), frozenset(leq))


def flat_from_json(obj: Any) -> FlatDomain:
    if isinstance(obj, dict) and "flat" in obj:
        obj = obj["flat"]
    if isinstance(obj, dict) and "omega" in obj:
        return FlatDomain(value_from_json(obj["omega"]))
    return FlatDomain(value_from_json(obj))

"""Finite non-empty multisets, the input domain of every adjudicator."""

from __future__ import annotations

import json
from collections import Counter
from typing import Any, Callable, Iterable, Iterator, Mapping

from .errors import InputError
from .values import Value, canonical_key, normalize, value_from_json, value_to_json


class Bag:
    """Immutable non-empty multiset of values.

    Only positive multiplicities are stored; :meth:`count` reports 0 for any
    absent value, so the bag also behaves as a total counting function.
    Because only counts are kept, the order in which items were supplied can
    never influence an adjudication.
    """

    __slots__ = ("_counts", "_key", "_size")

    def __init__(self, counts: Mapping[Value, int]):
        clean: dict[Value, int] = {}
        for v, n in counts.items():
            if isinstance(n, bool) or not isinstance(n, int) or n < 0:
                raise InputError(f"multiplicity of {v!r} must be a natural number, got {n!r}")
            if n:
                v = normalize(v)
                clean[v] = clean.get(v, 0) + n
        if not clean:
            raise InputError("a bag must contain at least one value")
        ordered = sorted(clean.items(), key=lambda kv: canonical_key(kv[0]))
        self._counts = dict(ordered)
        self._key = tuple(ordered)
        self._size = sum(clean.values())

    @classmethod
    def from_items(cls, items: Iterable[Value]) -> "Bag":
        items = list(items)
        if not items:
            raise InputError("cannot build a bag from an empty sequence")
        return cls(Counter(normalize(v) for v in items))

    def count(self, v: Value) -> int:
        return self._counts.get(normalize(v), 0)

    def elements(self) -> frozenset:
        return frozenset(self._counts)

    def size(self) -> int:
        return self._size

    def items(self) -> list:
        """The bag as a sorted item list, each value repeated by its multiplicity."""
        return [v for v, n in self._counts.items() for _ in range(n)]

    def counts(self) -> tuple:
        """``(value, multiplicity)`` pairs in canonical order."""
        return self._key

    def union(self, other: "Bag") -> "Bag":
        merged = Counter(self._counts)
        merged.update(other._counts)
        return Bag(merged)

    def map_values(self, f: Callable[[Value], Value]) -> "Bag":
        out: Counter = Counter()
        for v, n in self._counts.items():
            out[normalize(f(v))] += n
        return Bag(out)

    def filter(self, keep: Callable[[Value], bool]) -> "Bag | None":
        """Sub-bag of values satisfying ``keep``, or None if nothing survives."""
        kept = {v: n for v, n in self._counts.items() if keep(v)}
        return Bag(kept) if kept else None

    def is_unanimous(self) -> bool:
        return len(self._counts) == 1

    def __iter__(self) -> Iterator[Value]:
        return iter(self.items())

    def __len__(self) -> int:
        return self._size

    def __contains__(self, v: object) -> bool:
        return self.count(v) > 0

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Bag):
            return NotImplemented
        return self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __or__(self, other: "Bag") -> "Bag":
        return self.union(other)

    def __repr__(self) -> str:
        inner = ", ".join(f"{v!r}: {n}" for v, n in self._key)
        return f"Bag({{{inner}}})"

    def to_json(self) -> list:
        return [{"value": value_to_json(v), "count": n} for v, n in self._key]

    @classmethod
    def from_json(cls, obj: Any) -> "Bag":
        """Accept the counted form ``[{"value": v, "count": n}, ...]`` or a flat item list."""
        if isinstance(obj, str):
            try:
                obj = json.loads(obj)
            except json.JSONDecodeError as exc:
                raise InputError(f"bag is not valid JSON: {exc}") from exc
        if not isinstance(obj, list):
            raise InputError("a bag must be a JSON array")
        if obj and all(isinstance(x, dict) and "count" in x and "value" in x for x in obj):
            counts: Counter = Counter()
            for entry in obj:
                n = entry["count"]
                if isinstance(n, bool) or not isinstance(n, int) or n < 1:
                    raise InputError(f"bag counts must be positive integers, got {n!r}")
                counts[value_from_json(entry["value"])] += n
            return cls(counts)
        return cls.from_items(value_from_json(x) for x in obj)


def from_items(items: Iterable[Value]) -> Bag:
    return Bag.from_items(items)


def count(b: Bag, v: Value) -> int:
    return b.count(v)


def elements(b: Bag) -> frozenset:
    return b.elements()


def size(b: Bag) -> int:
    return b.size()


def union(b1: Bag, b2: Bag) -> Bag:
    return b1.union(b2)


def map_values(b: Bag, f: Callable[[Value], Value]) -> Bag:
    return b.map_values(f)

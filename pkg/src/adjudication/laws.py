"""Candidate adjudication axioms and an exhaustive checker for them.

A law is a relation between bags and values. An operator satisfies a law
when every value it actually returns is related to its input bag; results
that are not ``Defined`` are skipped, and totality is reported on its own.
All checks enumerate every bag over a small universe, so a reported
counterexample is always the first one in canonical order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from itertools import combinations_with_replacement, permutations
from typing import Any, Callable, Iterable, Iterator, Mapping, Sequence

from . import adjudicators
from .adjudicators import Adjudicator
from .bag import Bag
from .errors import ConfigurationError, InputError
from .generalized import prob_choice
from .order import FlatDomain, OrderRelation
from .outcome import Defined, Outcome, outcome_to_json
from .values import Value, canonical_key, is_numeric, normalize, value_to_json


@dataclass(frozen=True)
class LawRelation:
    name: str
    relates: Callable[[Bag, Value], bool] = field(compare=False)

    def __call__(self, b: Bag, x: Value) -> bool:
        return self.relates(b, x)


def _unanimity(b: Bag, x: Value) -> bool:
    return all(y == x for y, c in b.counts() if c == b.size())


def _wkchoice(b: Bag, x: Value) -> bool:
    return b.count(x) > 0


def _maj(b: Bag, x: Value) -> bool:
    winner = adjudicators.mv(b)
    return not isinstance(winner, Defined) or winner.value == x


UNANIMITY = LawRelation("UNANIMITY", _unanimity)
WKCHOICE = LawRelation("WKCHOICE", _wkchoice)
MAJ = LawRelation("MAJ", _maj)
LAWS = {"unanimity": UNANIMITY, "majority": MAJ, "weak_choice": WKCHOICE}


def enumerate_bags(universe: Iterable[Value], max_size: int) -> list[Bag]:
    """Every bag over ``universe`` with 1 to ``max_size`` items, smallest first."""
    values = sorted({normalize(v) for v in universe}, key=canonical_key)
    if not values:
        raise InputError("universe must be non-empty")
    if max_size < 1:
        raise InputError("max_size must be at least 1")
    return [
        Bag.from_items(combo)
        for n in range(1, max_size + 1)
        for combo in combinations_with_replacement(values, n)
    ]


@dataclass(frozen=True)
class Check:
    """Result of one exhaustive check; failures carry the offending bag."""

    holds: bool
    counterexample: Bag | None = None
    outcome: Outcome | None = None
    detail: Any = None

    def __bool__(self) -> bool:
        return self.holds

    def to_json(self) -> dict:
        out: dict = {"holds": self.holds}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample.to_json()
        if self.outcome is not None:
            out["outcome"] = outcome_to_json(self.outcome)
        if self.detail is not None:
            out["detail"] = self.detail
        return out


def violations(adj: Adjudicator, law: LawRelation, universe: Iterable[Value], max_size: int) -> Iterator[tuple[Bag, Outcome]]:
    for b in enumerate_bags(universe, max_size):
        result = adj(b)
        if isinstance(result, Defined) and not law(b, result.value):
            yield b, result


def check_law(adj: Adjudicator, law: LawRelation, universe: Iterable[Value], max_size: int) -> Check:
    for b, result in violations(adj, law, universe, max_size):
        return Check(False, b, result)
    return Check(True)


def check_totality(
    adj: Adjudicator,
    universe: Iterable[Value],
    max_size: int,
    sizes: Callable[[int], bool] | None = None,
) -> Check:
    """Is ``adj`` Defined on every bag (optionally only bags whose size passes ``sizes``)?"""
    for b in enumerate_bags(universe, max_size):
        if sizes is not None and not sizes(b.size()):
            continue
        result = adj(b)
        if not isinstance(result, Defined):
            return Check(False, b, result)
    return Check(True)


def check_permutation(adj: Adjudicator, universe: Iterable[Value], max_size: int) -> Check:
    """Feed every ordering of every bag's item list through ``adj.apply_items``."""
    for b in enumerate_bags(universe, max_size):
        items = b.items()
        reference = adj.apply_items(items)
        for perm in dict.fromkeys(permutations(items)):
            result = adj.apply_items(list(perm))
            if result != reference:
                detail = {
                    "orders": [[value_to_json(v) for v in items], [value_to_json(v) for v in perm]],
                    "outcomes": [outcome_to_json(reference), outcome_to_json(result)],
                }
                return Check(False, b, result, detail)
    return Check(True)


def check_prob_choice_readings(universe: Iterable[Value], max_size: int) -> dict[str, Check]:
    """Two candidate readings of choice and majority for probabilistic choice.

    ``choice``: the support lies inside the bag's elements.
    ``majority``: whenever a strict majority exists it is the unique mode.
    """
    universe = list(universe)
    choice, majority = Check(True), Check(True)
    for b in enumerate_bags(universe, max_size):
        d = prob_choice(b)
        if choice and not set(d.support()) <= b.elements():
            choice = Check(False, b)
        winner = adjudicators.mv(b)
        if majority and isinstance(winner, Defined) and d.mode() != winner.value:
            majority = Check(False, b, winner)
    return {"choice": choice, "majority": majority}


# -- conformance matrix -----------------------------------------------------

COLUMNS = ("unanimity", "majority", "weak_choice", "permutation", "total", "total_odd", "choice")


@dataclass(frozen=True)
class Row:
    """One matrix row: a labelled operator and the universe it is tested on."""

    label: str
    adj: Adjudicator
    universe: tuple


@dataclass(frozen=True)
class UniverseConfig:
    values: tuple = (1, 2, 3)
    omega: Value = "omega"
    max_size: int = 5
    tol: Any = 1
    k: Any = 3


def default_rows(config: UniverseConfig = UniverseConfig()) -> list[Row]:
    """Standard operator catalogue over ``config.values``.

    Ordered operators use the chain given by canonical value order. Numeric
    operators and the divisibility order only appear when the universe
    allows them.
    """
    values = tuple(sorted({normalize(v) for v in config.values}, key=canonical_key))
    if config.omega in values:
        raise ConfigurationError("omega must not be one of the ordinary universe values")
    flat = FlatDomain(config.omega)
    with_omega = values + (flat.omega,)
    chain = OrderRelation.chain(values)
    rows = [
        Row("mv", adjudicators.make("mv"), values),
        Row("mv_err", adjudicators.make("mv_err"), values),
        Row("fptp", adjudicators.make("fptp"), values),
        Row("plubf", adjudicators.make("plubf", {"flat": flat}), with_omega),
        Row("median[chain]", adjudicators.make("median", {"order": chain}), values),
        Row("glb[chain]", adjudicators.make("glb", {"order": chain}), values),
        Row("glb[antichain]", adjudicators.make("glb", {"order": OrderRelation.discrete(values)}), values),
        Row("glb[flat]", adjudicators.make("glb", {"order": flat.order(values)}), with_omega),
    ]
    if all(isinstance(v, int) and v > 0 for v in values):
        rows.append(Row("glb[divides]", adjudicators.make("glb", {"order": OrderRelation.divisibility(values)}), values))
    if all(is_numeric(v) for v in values):
        rows += [
            Row("avg", adjudicators.make("avg"), values),
            Row("avg_robust", adjudicators.make("avg_robust", {"k": config.k}), values),
            Row("tol_intersect", adjudicators.make("tol_intersect", {"tol": config.tol}), values),
        ]
    return rows


def _odd(n: int) -> bool:
    return n % 2 == 1


def check_row(row: Row, max_size: int) -> dict[str, Check]:
    cells = {col: check_law(row.adj, law, row.universe, max_size) for col, law in LAWS.items()}
    cells["permutation"] = check_permutation(row.adj, row.universe, max_size)
    cells["total"] = check_totality(row.adj, row.universe, max_size)
    cells["total_odd"] = check_totality(row.adj, row.universe, max_size, sizes=_odd)
    wk, tot = cells["weak_choice"], cells["total"]
    cells["choice"] = wk if not wk else tot
    return cells


@dataclass
class ConformanceReport:
    max_size: int
    rows: dict[str, dict[str, Check]]
    universes: dict[str, tuple]
    probabilistic: dict[str, Check] = field(default_factory=dict)

    def cell(self, row: str, col: str) -> Check:
        return self.rows[row][col]

    def meta_majority_implies_unanimity(self) -> Check:
        """Rows satisfying the majority law must also satisfy unanimity."""
        for label, cells in self.rows.items():
            if cells["majority"] and not cells["unanimity"]:
                return Check(False, cells["unanimity"].counterexample, detail={"row": label})
        return Check(True)

    def to_json(self) -> dict:
        return {
            "max_size": self.max_size,
            "columns": list(COLUMNS),
            "rows": {
                label: {
                    "universe": [value_to_json(v) for v in self.universes[label]],
                    "cells": {col: cells[col].to_json() for col in COLUMNS},
                }
                for label, cells in self.rows.items()
            },
            "probabilistic_choice": {k: v.to_json() for k, v in self.probabilistic.items()},
            "meta": {"majority_implies_unanimity": self.meta_majority_implies_unanimity().to_json()},
        }

    def table(self) -> str:
        width = max(len(label) for label in self.rows) + 2
        lines = ["operator".ljust(width) + " ".join(col.rjust(11) for col in COLUMNS)]
        for label, cells in self.rows.items():
            marks = " ".join(("yes" if cells[col] else "NO").rjust(11) for col in COLUMNS)
            lines.append(label.ljust(width) + marks)
        for label, cells in self.rows.items():
            for col in COLUMNS:
                c = cells[col]
                if not c and c.counterexample is not None and col != "choice":
                    got = outcome_to_json(c.outcome) if c.outcome is not None else None
                    lines.append(f"  {label} / {col}: counterexample {c.counterexample!r} -> {json.dumps(got)}")
        for name, c in self.probabilistic.items():
            lines.append(f"prob_choice {name}: {'holds' if c else 'fails'}")
        return "\n".join(lines)


def conformance_matrix(rows: Sequence[Row] | None = None, max_size: int = 5, probabilistic_universe: Sequence[Value] | None = None) -> ConformanceReport:
    rows = list(rows) if rows is not None else default_rows()
    if not rows:
        raise ConfigurationError("no operators to check")
    report = ConformanceReport(
        max_size=max_size,
        rows={row.label: check_row(row, max_size) for row in rows},
        universes={row.label: row.universe for row in rows},
    )
    prob_universe = probabilistic_universe if probabilistic_universe is not None else rows[0].universe
    report.probabilistic = check_prob_choice_readings(prob_universe, max_size)
    return report


def rows_from_config(names: Sequence[str], config: Mapping[str, Any], universe: Sequence[Value]) -> list[Row]:
    """Rows for explicitly named operators; parameterized ones need their structure in ``config``."""
    return [Row(name, adjudicators.make(name, config), tuple(universe)) for name in names]


# -- claims -------------------------------------------------------------------


def load_claims(path: str | None = None) -> dict[str, dict[str, bool]]:
    if path is None:
        text = resources.files("adjudication").joinpath("claims.json").read_text(encoding="utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    data = json.loads(text)
    return data["rows"] if "rows" in data else data


def compare_claims(report: ConformanceReport, claims: Mapping[str, Mapping[str, bool]]) -> list[dict]:
    """Cells whose computed value differs from the claim; rows absent from the report are skipped."""
    mismatches = []
    for label, cells in claims.items():
        if label not in report.rows:
            continue
        for col, claimed in cells.items():
            if col.startswith("_"):
                continue
            if col not in report.rows[label]:
                raise ConfigurationError(f"claim refers to unknown column {col!r}")
            actual = report.rows[label][col].holds
            if actual != claimed:
                mismatches.append({"row": label, "column": col, "claimed": claimed, "actual": actual})
    return mismatches

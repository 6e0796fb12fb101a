"""Versioned terms: nesting adjudications and distributing operators over versions.

Terms are small trees of literals, adjudicated version groups, binary
operators and unary functions. Two semantics are offered:

* :func:`evaluate` is deterministic. By default an adjudicator that has no
  answer is totalized to ``Bottom`` and ``Bottom`` propagates strictly. With
  ``partial="undefined"`` the missing answer is kept as ``Undefined`` instead
  (the irreducible-term reading).
* :func:`evaluate_nondet` follows the choice property: where the adjudicator
  has no answer, any reported value may be chosen, and operators range over
  all combinations of their arguments' possibilities.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product
from typing import Any, Callable, Iterable, Mapping, Sequence, Union

from . import adjudicators
from .adjudicators import Adjudicator
from .bag import Bag
from .errors import ConfigurationError, InputError
from .outcome import BOTTOM, UNDEFINED, Bottom, Defined, Outcome, Undefined, outcome_key, outcome_to_json
from .values import Value, canonical_key, normalize, value_from_json, value_to_json


@dataclass(frozen=True)
class Lit:
    value: Value

    def __post_init__(self):
        object.__setattr__(self, "value", normalize(self.value))


@dataclass(frozen=True)
class Adj:
    op: str
    args: tuple

    def __post_init__(self):
        args = tuple(a if isinstance(a, (Lit, Adj, BinOp, Fun)) else Lit(a) for a in self.args)
        if not args:
            raise InputError("an adjudication node needs at least one version")
        object.__setattr__(self, "args", args)


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Fun:
    name: str
    arg: "Term"


Term = Union[Lit, Adj, BinOp, Fun]


@dataclass(frozen=True)
class BinaryOperator:
    """A binary operator on values.

    Strict operators see only defined values. A ``lifted`` operator receives
    the two outcomes themselves and may ignore an erroneous argument.
    """

    name: str
    fn: Callable[[Any, Any], Any] = field(compare=False)
    lifted: bool = False


@dataclass(frozen=True)
class Function:
    name: str
    fn: Callable[[Any], Any] = field(compare=False)


def _first(left: Outcome, right: Outcome) -> Outcome:
    return left


def _second(left: Outcome, right: Outcome) -> Outcome:
    return right


OPERATORS: dict[str, BinaryOperator] = {
    op.name: op
    for op in (
        BinaryOperator("+", lambda x, y: x + y),
        BinaryOperator("-", lambda x, y: x - y),
        BinaryOperator("*", lambda x, y: x * y),
        BinaryOperator("max", max),
        BinaryOperator("min", min),
        BinaryOperator("first", _first, lifted=True),
        BinaryOperator("second", _second, lifted=True),
    )
}

FUNCTIONS: dict[str, Function] = {
    f.name: f
    for f in (
        Function("identity", lambda x: x),
        Function("square", lambda x: x * x),
        Function("neg", lambda x: -x),
        Function("inc", lambda x: x + 1),
        Function("abs", abs),
    )
}


def _choice(b: Bag) -> Outcome:
    # only unanimity pins the value down; otherwise any element may be picked
    return Defined(b.counts()[0][0]) if b.is_unanimous() else UNDEFINED


def default_adjudicators(config: Mapping[str, Any] | None = None) -> dict[str, Adjudicator]:
    """Every registry operator buildable from ``config``, plus the pure ``choice``."""
    available = {"choice": Adjudicator("choice", _choice)}
    for name in adjudicators.REGISTRY_NAMES:
        try:
            available[name] = adjudicators.make(name, config)
        except ConfigurationError:
            continue
    return available


@dataclass
class Registries:
    adjudicators: Mapping[str, Adjudicator] = field(default_factory=default_adjudicators)
    operators: Mapping[str, BinaryOperator] = field(default_factory=lambda: dict(OPERATORS))
    functions: Mapping[str, Function] = field(default_factory=lambda: dict(FUNCTIONS))

    def adjudicator(self, name: str) -> Adjudicator:
        try:
            return self.adjudicators[name]
        except KeyError:
            raise ConfigurationError(f"unknown adjudicator {name!r} in term") from None

    def operator(self, name: str) -> BinaryOperator:
        try:
            return self.operators[name]
        except KeyError:
            raise ConfigurationError(f"unknown operator {name!r} in term") from None

    def function(self, name: str) -> Function:
        try:
            return self.functions[name]
        except KeyError:
            raise ConfigurationError(f"unknown function {name!r} in term") from None


def _failure(outcomes: Iterable[Outcome]) -> Outcome | None:
    """The outcome to propagate if any argument failed; Bottom dominates."""
    failed = [o for o in outcomes if not isinstance(o, Defined)]
    if not failed:
        return None
    return BOTTOM if any(isinstance(o, Bottom) for o in failed) else UNDEFINED


def _apply(fn: Callable, *args: Value) -> Outcome:
    try:
        return Defined(fn(*args))
    except (TypeError, ArithmeticError) as exc:
        raise InputError(f"operator failed on {args!r}: {exc}") from exc


def _apply_binop(op: BinaryOperator, left: Outcome, right: Outcome) -> Outcome:
    if op.lifted:
        return op.fn(left, right)
    failed = _failure((left, right))
    if failed is not None:
        return failed
    return _apply(op.fn, left.value, right.value)  # type: ignore[union-attr]


def _apply_fun(fn: Function, arg: Outcome) -> Outcome:
    if not isinstance(arg, Defined):
        return arg
    return _apply(fn.fn, arg.value)


def evaluate(t: Term, registries: Registries | None = None, partial: str = "bottom") -> Outcome:
    if partial not in ("bottom", "undefined"):
        raise ConfigurationError(f"partial must be 'bottom' or 'undefined', got {partial!r}")
    reg = registries or Registries()

    def go(t: Term) -> Outcome:
        if isinstance(t, Lit):
            return Defined(t.value)
        if isinstance(t, Adj):
            adj = reg.adjudicator(t.op)
            children = [go(c) for c in t.args]
            failed = _failure(children)
            if failed is not None:
                return BOTTOM if partial == "bottom" else failed
            result = adj(Bag.from_items(c.value for c in children))  # type: ignore[union-attr]
            if isinstance(result, Undefined) and partial == "bottom":
                return BOTTOM
            return result
        if isinstance(t, BinOp):
            op = reg.operator(t.op)
            return _apply_binop(op, go(t.left), go(t.right))
        if isinstance(t, Fun):
            return _apply_fun(reg.function(t.name), go(t.arg))
        raise InputError(f"not a term: {t!r}")

    return go(t)


def evaluate_nondet(t: Term, registries: Registries | None = None) -> frozenset:
    """All outcomes the term may produce under the choice reading."""
    reg = registries or Registries()

    def go(t: Term) -> frozenset:
        if isinstance(t, Lit):
            return frozenset({Defined(t.value)})
        if isinstance(t, Adj):
            adj = reg.adjudicator(t.op)
            out: set = set()
            for combo in product(*(sorted(go(c), key=outcome_key) for c in t.args)):
                failed = _failure(combo)
                if failed is not None:
                    out.add(failed)
                    continue
                b = Bag.from_items(c.value for c in combo)
                result = adj(b)
                if isinstance(result, Undefined):
                    out.update(Defined(v) for v in b.elements())
                else:
                    out.add(result)
            return frozenset(out)
        if isinstance(t, BinOp):
            op = reg.operator(t.op)
            return frozenset(_apply_binop(op, l, r) for l, r in product(go(t.left), go(t.right)))
        if isinstance(t, Fun):
            fn = reg.function(t.name)
            return frozenset(_apply_fun(fn, o) for o in go(t.arg))
        raise InputError(f"not a term: {t!r}")

    return go(t)


def sorted_outcomes(outcomes: Iterable[Outcome]) -> list[Outcome]:
    return sorted(outcomes, key=outcome_key)


# -- distribution laws ----------------------------------------------------------


@dataclass(frozen=True)
class LawCheck:
    """Both sides of a distribution law and how they compare.

    ``relation`` is ``equal``, ``lhs_less_defined``, ``rhs_less_defined`` or
    ``different`` (both defined, unequal). Under the choice semantics the
    sides are outcome sets and only ``equal`` / ``different`` occur.
    """

    lhs_term: Term
    rhs_term: Term
    lhs: Any
    rhs: Any
    relation: str

    @property
    def holds(self) -> bool:
        return self.relation == "equal"

    def __bool__(self) -> bool:
        return self.holds

    def to_json(self) -> dict:
        def render(side: Any) -> Any:
            if isinstance(side, frozenset):
                return [outcome_to_json(o) for o in sorted_outcomes(side)]
            return outcome_to_json(side)

        return {
            "holds": self.holds,
            "relation": self.relation,
            "lhs_term": term_to_json(self.lhs_term),
            "rhs_term": term_to_json(self.rhs_term),
            "lhs": render(self.lhs),
            "rhs": render(self.rhs),
        }


def _relation(lhs: Any, rhs: Any) -> str:
    if lhs == rhs:
        return "equal"
    if isinstance(lhs, frozenset):
        return "different"
    lhs_ok, rhs_ok = isinstance(lhs, Defined), isinstance(rhs, Defined)
    if rhs_ok and not lhs_ok:
        return "lhs_less_defined"
    if lhs_ok and not rhs_ok:
        return "rhs_less_defined"
    return "different"


def _compare(lhs_term: Term, rhs_term: Term, semantics: str, registries: Registries | None, partial: str) -> LawCheck:
    if semantics == "det":
        lhs, rhs = evaluate(lhs_term, registries, partial), evaluate(rhs_term, registries, partial)
    elif semantics == "choice":
        lhs, rhs = evaluate_nondet(lhs_term, registries), evaluate_nondet(rhs_term, registries)
    else:
        raise ConfigurationError(f"semantics must be 'det' or 'choice', got {semantics!r}")
    return LawCheck(lhs_term, rhs_term, lhs, rhs, _relation(lhs, rhs))


def check_left_distribution(
    op: str,
    a: Value,
    b: Bag,
    adj: str,
    semantics: str = "det",
    registries: Registries | None = None,
    partial: str = "bottom",
) -> LawCheck:
    """``a op adj(b)`` against ``adj(a op v for v in b)``."""
    items = b.items()
    lhs = BinOp(op, Lit(a), Adj(adj, tuple(Lit(v) for v in items)))
    rhs = Adj(adj, tuple(BinOp(op, Lit(a), Lit(v)) for v in items))
    return _compare(lhs, rhs, semantics, registries, partial)


def check_right_distribution(
    op: str,
    b: Bag,
    a: Value,
    adj: str,
    semantics: str = "det",
    registries: Registries | None = None,
    partial: str = "bottom",
) -> LawCheck:
    """``adj(b) op a`` against ``adj(v op a for v in b)``."""
    items = b.items()
    lhs = BinOp(op, Adj(adj, tuple(Lit(v) for v in items)), Lit(a))
    rhs = Adj(adj, tuple(BinOp(op, Lit(v), Lit(a)) for v in items))
    return _compare(lhs, rhs, semantics, registries, partial)


def check_fun_distribution(fn: str, b: Bag, adj: str, registries: Registries | None = None) -> LawCheck:
    """``fn(adj(b))`` against ``adj(map fn over b)``, keeping partiality visible."""
    items = b.items()
    lhs = Fun(fn, Adj(adj, tuple(Lit(v) for v in items)))
    rhs = Adj(adj, tuple(Fun(fn, Lit(v)) for v in items))
    return _compare(lhs, rhs, "det", registries, partial="undefined")


def search_distribution(
    op: str,
    universe: Sequence[Value],
    versions: int,
    adj: str,
    side: str = "left",
    semantics: str = "det",
    registries: Registries | None = None,
) -> list[LawCheck]:
    """Failures of the left or right distribution law over every ``a`` and bag of ``versions`` values."""
    from .laws import enumerate_bags

    universe = sorted({normalize(v) for v in universe}, key=canonical_key)
    failures = []
    for a in universe:
        for b in enumerate_bags(universe, versions):
            if b.size() != versions:
                continue
            if side == "left":
                result = check_left_distribution(op, a, b, adj, semantics, registries)
            else:
                result = check_right_distribution(op, b, a, adj, semantics, registries)
            if not result:
                failures.append(result)
    return failures


# -- gerrymandering -------------------------------------------------------------


@dataclass(frozen=True)
class Gerrymander:
    leaves: tuple
    term: Adj
    nested: Outcome
    flat: Outcome

    def to_json(self) -> dict:
        return {
            "leaves": [value_to_json(v) for v in self.leaves],
            "term": term_to_json(self.term),
            "nested": outcome_to_json(self.nested),
            "flat": outcome_to_json(self.flat),
        }


def nested_term(leaves: Sequence[Value], district_size: int, adj: str = "mv") -> Adj:
    districts = [leaves[i:i + district_size] for i in range(0, len(leaves), district_size)]
    return Adj(adj, tuple(Adj(adj, tuple(Lit(v) for v in d)) for d in districts))


def gerrymander_search(
    universe: Iterable[Value],
    district_count: int,
    district_size: int,
    adj: str = "mv",
    registries: Registries | None = None,
) -> list[Gerrymander]:
    """Leaf assignments where staged adjudication disagrees with the flat vote."""
    if district_count < 1 or district_size < 1:
        raise InputError("district count and size must be positive")
    values = sorted({normalize(v) for v in universe}, key=canonical_key)
    found = []
    for leaves in product(values, repeat=district_count * district_size):
        term = nested_term(leaves, district_size, adj)
        nested = evaluate(term, registries)
        flat = evaluate(Adj(adj, tuple(Lit(v) for v in leaves)), registries)
        if nested != flat:
            found.append(Gerrymander(tuple(leaves), term, nested, flat))
    return found


# -- JSON -------------------------------------------------------------------------


def term_to_json(t: Term) -> dict:
    if isinstance(t, Lit):
        return {"lit": value_to_json(t.value)}
    if isinstance(t, Adj):
        return {"adj": {"op": t.op, "args": [term_to_json(a) for a in t.args]}}
    if isinstance(t, BinOp):
        return {"binop": {"op": t.op, "l": term_to_json(t.left), "r": term_to_json(t.right)}}
    if isinstance(t, Fun):
        return {"fun": {"name": t.name, "arg": term_to_json(t.arg)}}
    raise InputError(f"not a term: {t!r}")


def term_from_json(obj: Any) -> Term:
    if isinstance(obj, str):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as exc:
            raise InputError(f"term is not valid JSON: {exc}") from exc
    if not isinstance(obj, dict) or len(obj) != 1:
        raise InputError(f"a term is a single-key JSON object, got {obj!r}")
    try:
        if "lit" in obj:
            return Lit(value_from_json(obj["lit"]))
        if "adj" in obj:
            node = obj["adj"]
            return Adj(node["op"], tuple(term_from_json(a) for a in node["args"]))
        if "binop" in obj:
            node = obj["binop"]
            return BinOp(node["op"], term_from_json(node["l"]), term_from_json(node["r"]))
        if "fun" in obj:
            node = obj["fun"]
            return Fun(node["name"], term_from_json(node["arg"]))
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed term JSON: {exc}") from exc
    raise InputError(f"unknown term kind {next(iter(obj))!r}")

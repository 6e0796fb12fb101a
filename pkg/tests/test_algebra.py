from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from adjudication import adjudicators as A
from adjudication.algebra import (
    Adj,
    BinOp,
    Fun,
    Lit,
    Registries,
    check_fun_distribution,
    check_left_distribution,
    check_right_distribution,
    evaluate,
    evaluate_nondet,
    gerrymander_search,
    nested_term,
    search_distribution,
    term_from_json,
    term_to_json,
)
from adjudication.bag import Bag
from adjudication.errors import ConfigurationError, InputError
from adjudication.laws import enumerate_bags
from adjudication.outcome import BOTTOM, UNDEFINED, Defined

GERRYMANDER = Adj(
    "mv",
    (
        Adj("mv", (Lit(1), Lit(1), Lit(1))),
        Adj("mv", (Lit(1), Lit(2), Lit(2))),
        Adj("mv", (Lit(1), Lit(2), Lit(2))),
    ),
)


def lits(*values):
    return tuple(Lit(v) for v in values)


terms = st.recursive(
    st.integers(1, 3).map(Lit),
    lambda children: st.one_of(
        st.lists(children, min_size=1, max_size=3).map(lambda cs: Adj("mv", tuple(cs))),
        st.tuples(st.sampled_from(["+", "max", "min"]), children, children).map(lambda t: BinOp(*t)),
        st.tuples(st.sampled_from(["square", "inc", "neg"]), children).map(lambda t: Fun(*t)),
    ),
    max_leaves=8,
)

# nesting shapes only: None is a leaf, a list is an adjudicated group
unanimous_trees = st.recursive(
    st.none(), lambda children: st.lists(children, min_size=1, max_size=3), max_leaves=10
)


class TestEvaluate:
    def test_gerrymander(self):
        assert evaluate(GERRYMANDER) == Defined(2)

    def test_flat_nine(self):
        leaves = (1, 1, 1, 1, 2, 2, 1, 2, 2)
        assert leaves.count(1) == 5 and 2 * 5 > 9
        assert evaluate(Adj("mv", lits(*leaves))) == Defined(1)

    def test_literal(self):
        assert evaluate(Lit("a")) == Defined("a")

    def test_bottom_propagates_through_max(self):
        assert evaluate(BinOp("max", Lit(5), Adj("mv_err", lits(1, 2, 3)))) is BOTTOM

    def test_missing_majority_is_bottom_by_default(self):
        assert evaluate(Adj("mv", lits(1, 2, 3))) is BOTTOM
        assert evaluate(Adj("mv", lits(1, 2, 3)), partial="undefined") is UNDEFINED

    def test_undefined_propagates_in_irreducible_mode(self):
        t = Fun("square", Adj("mv", lits(1, 2, 3)))
        assert evaluate(t, partial="undefined") is UNDEFINED
        nested = Adj("mv", (Adj("mv", lits(1, 2, 3)), Lit(1), Lit(1)))
        assert evaluate(nested, partial="undefined") is UNDEFINED

    def test_non_strict_operator_absorbs_bottom(self):
        assert evaluate(BinOp("first", Lit(7), Adj("mv_err", lits(1, 2, 3)))) == Defined(7)
        assert evaluate(BinOp("second", Lit(7), Adj("mv_err", lits(1, 2, 3)))) is BOTTOM

    def test_unknown_names(self):
        with pytest.raises(ConfigurationError):
            evaluate(Adj("borda", lits(1)))
        with pytest.raises(ConfigurationError):
            evaluate(BinOp("pow", Lit(1), Lit(2)))
        with pytest.raises(ConfigurationError):
            evaluate(Fun("sqrt", Lit(4)))

    def test_empty_adjudication(self):
        with pytest.raises(InputError):
            Adj("mv", ())

    def test_parameterized_registry(self):
        reg = Registries(adjudicators={"plubf": A.make("plubf", {"omega": "w"})})
        assert evaluate(Adj("plubf", lits("w", "w", 3)), reg) == Defined(3)

    @given(unanimous_trees, st.sampled_from(["mv", "mv_err", "fptp", "choice", "avg"]))
    def test_unanimous_leaves_are_transparent(self, shape, op):
        def build(node):
            return Lit(7) if node is None else Adj(op, tuple(build(c) for c in node))

        assert evaluate(build(shape)) == Defined(7)


class TestEvaluateNondet:
    def test_nine_combinations(self):
        t = BinOp("+", Adj("choice", lits(0, 1, 2)), Adj("choice", lits(0, 10, 20)))
        expected = {Defined(x + y) for x, y in product((0, 1, 2), (0, 10, 20))}
        assert len(expected) == 9
        assert evaluate_nondet(t) == expected

    def test_unanimity_collapses(self):
        assert evaluate_nondet(Adj("choice", lits("a", "a", "a"))) == {Defined("a")}

    def test_identity_element(self):
        assert evaluate_nondet(BinOp("+", Adj("choice", lits(1, 2, 3)), Lit(0))) == {Defined(1), Defined(2), Defined(3)}

    def test_majority_when_present(self):
        assert evaluate_nondet(Adj("mv", lits(1, 1, 3))) == {Defined(1)}
        assert evaluate_nondet(Adj("mv", lits(1, 2, 3))) == {Defined(1), Defined(2), Defined(3)}

    def test_bottom_is_a_result(self):
        assert evaluate_nondet(Adj("mv_err", lits(1, 2, 3))) == {BOTTOM}

    def test_nested_choice(self):
        t = Adj("mv", (Adj("choice", lits(1, 2)), Lit(1), Lit(2)))
        assert evaluate_nondet(t) == {Defined(1), Defined(2)}

    @given(terms)
    def test_without_adjudication_matches_eval(self, t):
        def has_adj(t):
            if isinstance(t, Adj):
                return True
            if isinstance(t, BinOp):
                return has_adj(t.left) or has_adj(t.right)
            if isinstance(t, Fun):
                return has_adj(t.arg)
            return False

        if not has_adj(t):
            assert evaluate_nondet(t) == {evaluate(t)}

    @given(terms)
    def test_mv_is_always_inside_choice_set(self, t):
        det = evaluate(t)
        if isinstance(det, Defined):
            assert det in evaluate_nondet(t)


class TestLeftDistribution:
    def test_plus(self):
        result = check_left_distribution("+", 1, Bag({2: 2, 4: 1}), "mv")
        assert result and result.lhs == Defined(3)

    def test_max_under_error(self):
        result = check_left_distribution("max", 4, Bag.from_items([1, 2, 3]), "mv_err")
        assert not result
        assert result.lhs is BOTTOM and result.rhs == Defined(4)
        assert result.relation == "lhs_less_defined"

    def test_max_under_choice(self):
        result = check_left_distribution("max", 4, Bag.from_items([1, 2, 3]), "mv", semantics="choice")
        assert result and result.lhs == {Defined(4)}

    def test_unknown_semantics(self):
        with pytest.raises(ConfigurationError):
            check_left_distribution("+", 1, Bag({1: 1}), "mv", semantics="lazy")


class TestRightDistribution:
    def test_plus(self):
        assert check_right_distribution("+", Bag({2: 2, 4: 1}), 1, "mv")

    def test_minus(self):
        result = check_right_distribution("-", Bag({5: 2, 9: 1}), 1, "mv")
        assert result and result.lhs == Defined(4)

    def test_max_under_error(self):
        result = check_right_distribution("max", Bag.from_items([1, 2, 3]), 4, "mv_err")
        assert result.lhs is BOTTOM and result.rhs == Defined(4)

    def test_mirror_for_commutative_op(self):
        for b in enumerate_bags([1, 2, 3], 3):
            for a in (1, 2, 3):
                left = check_left_distribution("+", a, b, "mv_err")
                right = check_right_distribution("+", b, a, "mv_err")
                assert (left.lhs, left.rhs) == (right.lhs, right.rhs)


class TestFunDistribution:
    def test_square(self):
        result = check_fun_distribution("square", Bag.from_items([-2, 2, 3]), "mv")
        assert result.lhs is UNDEFINED and result.rhs == Defined(4)
        assert result.relation == "lhs_less_defined"

    def test_identity(self):
        assert all(check_fun_distribution("identity", b, "mv") for b in enumerate_bags([1, 2, 3], 4))

    def test_increment(self):
        result = check_fun_distribution("inc", Bag({1: 2, 2: 1}), "mv")
        assert result and result.lhs == Defined(2)

    @pytest.mark.parametrize("fn", ["inc", "neg", "identity"])
    def test_injective_functions_hold(self, fn):
        assert all(check_fun_distribution(fn, b, "mv") for b in enumerate_bags([-2, 0, 1, 3], 5))

    def test_definedness_ordering(self):
        for fn in ("square", "abs", "inc"):
            for b in enumerate_bags([-2, -1, 1, 2], 4):
                result = check_fun_distribution(fn, b, "mv")
                if isinstance(result.lhs, Defined):
                    assert result.rhs == result.lhs
        assert any(not check_fun_distribution("square", b, "mv") for b in enumerate_bags([-2, 2, 3], 3))


class TestDistributionSearch:
    def test_max_error_counterexamples_need_a_largest_value(self):
        failures = search_distribution("max", [1, 2, 3, 4], 3, "mv_err")
        assert failures
        for f in failures:
            assert f.lhs is BOTTOM and isinstance(f.rhs, Defined)

    def test_pure_choice_distributes_max(self):
        assert search_distribution("max", [1, 2, 3, 4], 3, "choice", semantics="choice") == []
        assert search_distribution("max", [1, 2, 3, 4], 3, "choice", side="right", semantics="choice") == []

    def test_majority_choice_fails_only_below_the_top(self):
        # e.g. a=3 over {1,2,4}: LHS may pick 3 or 4, RHS bag {3,3,4} has majority 3
        failures = search_distribution("max", [1, 2, 3, 4], 3, "mv", semantics="choice")
        assert failures
        for f in failures:
            a = f.lhs_term.left.value
            versions = [c.value for c in f.lhs_term.right.args]
            assert not all(a > v for v in versions)


class TestGerrymander:
    def test_rediscovers_example(self):
        found = gerrymander_search([1, 2], 3, 3, "mv")
        match = [g for g in found if g.leaves == (1, 1, 1, 1, 2, 2, 1, 2, 2)]
        assert match and match[0].nested == Defined(2) and match[0].flat == Defined(1)
        assert match[0].term == GERRYMANDER

    def test_unanimous_universe(self):
        assert gerrymander_search(["a"], 3, 3, "mv") == []

    def test_singleton_districts(self):
        assert gerrymander_search([1, 2], 3, 1, "mv") == []

    def test_brute_force_count(self):
        expected = 0
        for leaves in product([1, 2], repeat=9):
            winners = [max(set(d), key=d.count) for d in (leaves[0:3], leaves[3:6], leaves[6:9])]
            nested = max(set(winners), key=winners.count)
            flat = max(set(leaves), key=leaves.count)
            expected += nested != flat
        assert len(gerrymander_search([1, 2], 3, 3, "mv")) == expected


class TestJson:
    def test_round_trip(self):
        t = BinOp("max", Lit(5), Fun("square", Adj("mv_err", lits(1, 2, 3))))
        assert term_from_json(term_to_json(t)) == t

    def test_spec_shape(self):
        t = term_from_json('{"adj": {"op": "mv", "args": [{"lit": 2}, {"lit": 4}, {"lit": 2}]}}')
        assert evaluate(t) == Defined(2)

    @pytest.mark.parametrize("bad", ['{"lit": 1, "fun": 2}', '{"adj": {"op": "mv"}}', "[1]", '{"loop": 1}'])
    def test_rejects(self, bad):
        with pytest.raises(InputError):
            term_from_json(bad)

    @given(terms)
    def test_round_trip_property(self, t):
        assert term_from_json(term_to_json(t)) == t


def test_nested_term_shape():
    assert nested_term((1, 1, 1, 1, 2, 2, 1, 2, 2), 3) == GERRYMANDER

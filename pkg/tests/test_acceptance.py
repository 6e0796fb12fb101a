"""Acceptance criteria, one test per criterion.

Each test also prints its own PASS line (visible with ``-s``); the conftest
hook prints a PASS/FAIL summary line per criterion after every run.
"""

import json
import time
from fractions import Fraction
from itertools import permutations
from math import comb, sqrt

from adjudication import adjudicators as A
from adjudication.algebra import Adj, Lit, check_fun_distribution, check_left_distribution, check_right_distribution, evaluate
from adjudication.bag import Bag
from adjudication.generalized import Distribution, amplify, prob_choice
from adjudication.laws import (
    MAJ,
    UNANIMITY,
    WKCHOICE,
    UniverseConfig,
    check_law,
    check_permutation,
    compare_claims,
    conformance_matrix,
    default_rows,
    enumerate_bags,
    load_claims,
    violations,
)
from adjudication.order import OrderRelation
from adjudication.outcome import BOTTOM, UNDEFINED, Defined
from adjudication.sim import SimConfig, count_vectors, run_sim

W = "omega"
WRONG, RIGHT = Defined("wrong"), Defined("right")


def report(number, message):
    print(f"PASS  criterion {number}: {message}")


def binomial_error_mass(p, n):
    return sum(comb(n, k) * p**k * (1 - p) ** (n - k) for k in range(n // 2 + 1, n + 1))


def test_criterion_1_exact_amplification():
    start = time.perf_counter()
    od = amplify(Distribution({"right": Fraction(9, 10), "wrong": Fraction(1, 10)}), 3, A.make("mv"))
    elapsed = time.perf_counter() - start
    assert od.weight(WRONG) == Fraction(28, 1000)
    assert od.weight(RIGHT) == Fraction(972, 1000)
    assert all(isinstance(p, Fraction) for _, p in od.items())
    assert elapsed < 1
    report(1, f"wrong = {od.weight(WRONG)}, right = {od.weight(RIGHT)} in {elapsed:.3f}s")


def test_criterion_2_gerrymandering():
    start = time.perf_counter()
    nested = Adj("mv", (Adj("mv", (Lit(1), Lit(1), Lit(1))), Adj("mv", (Lit(1), Lit(2), Lit(2))), Adj("mv", (Lit(1), Lit(2), Lit(2)))))
    flat = Adj("mv", tuple(Lit(v) for v in (1, 1, 1, 1, 2, 2, 1, 2, 2)))
    assert evaluate(nested) == Defined(2)
    assert evaluate(flat) == Defined(1)
    assert time.perf_counter() - start < 1
    report(2, "nested = 2, flat = 1")


def test_criterion_3_conformance_matrix():
    start = time.perf_counter()
    values = (1, 2, 3)
    rows = default_rows(UniverseConfig(values=values, omega=W))
    matrix = conformance_matrix(rows, max_size=5)
    cell = matrix.rows

    for label in ("mv", "fptp", "median[chain]"):
        for law in ("unanimity", "majority", "weak_choice"):
            assert cell[label][law], (label, law)
    assert not cell["fptp"]["total"]
    tie = cell["fptp"]["total"].counterexample
    top = sorted((c for _, c in tie.counts()), reverse=True)
    assert top[0] == top[1]

    assert cell["plubf"]["unanimity"] and cell["plubf"]["weak_choice"]
    assert not cell["plubf"]["majority"]
    plubf = next(r.adj for r in rows if r.label == "plubf")
    failing = dict(violations(plubf, MAJ, values + (W,), 5))
    shape = [b for b in failing if b.count(W) == 3 and b.size() == 4]
    assert shape, "no counterexample of shape {omega: 3, a: 1}"
    assert all(failing[b] == Defined(next(iter(b.elements() - {W}))) for b in shape)

    assert not cell["avg"]["weak_choice"]
    cx = cell["avg"]["weak_choice"].counterexample
    assert A.average(cx).value not in cx.elements()
    assert cell["avg"]["unanimity"]

    glb_rows = [r for r in rows if r.label.startswith("glb")]
    assert len(glb_rows) >= 4
    for r in glb_rows:
        assert check_law(r.adj, UNANIMITY, r.universe, 5), r.label

    assert check_law(A.make("mv"), WKCHOICE, values, 5)
    assert compare_claims(matrix, load_claims()) == []
    elapsed = time.perf_counter() - start
    assert elapsed < 30
    report(3, f"{len(rows)} rows match their claims in {elapsed:.2f}s")


def test_criterion_4_function_distribution():
    result = check_fun_distribution("square", Bag.from_items([-2, 2, 3]), "mv")
    assert result.lhs is UNDEFINED
    assert result.rhs == Defined(4)
    report(4, "square after mv is Undefined, mv after square is 4")


def test_criterion_5_max_counterexample():
    chain = [1, 2, 3, 4]
    checked = 0
    for a in chain:
        below = [v for v in chain if v < a]
        for triple in permutations(below, 3):
            b = Bag.from_items(triple)
            for side in ("left", "right"):
                if side == "left":
                    det = check_left_distribution("max", a, b, "mv_err")
                    nondet = check_left_distribution("max", a, b, "mv", semantics="choice")
                else:
                    det = check_right_distribution("max", b, a, "mv_err")
                    nondet = check_right_distribution("max", b, a, "mv", semantics="choice")
                assert det.lhs is BOTTOM and det.rhs == Defined(a)
                assert nondet.lhs == nondet.rhs == {Defined(a)}
                checked += 1
    assert checked == 12
    report(5, f"{checked} orientations: Bottom vs {chain[-1]} under mv_err, agreement under choice")


def test_criterion_6_monte_carlo():
    cfg = SimConfig(Distribution.two_point(Fraction(1, 10)), 3, trials=10**6, seed=20240611)
    start = time.perf_counter()
    first = run_sim(cfg)
    elapsed = time.perf_counter() - start
    wrong = next(s for s in first.stats() if s.outcome == WRONG)
    sigma = sqrt(0.028 * 0.972 / 10**6)
    assert abs(wrong.sigma - sigma) < 1e-12
    assert abs(float(wrong.empirical) - 0.028) <= 4 * sigma
    assert elapsed < 30
    second = run_sim(cfg)
    assert json.dumps(first.to_json()) == json.dumps(second.to_json())
    assert count_vectors(cfg, workers=4) == count_vectors(cfg, workers=1)
    report(6, f"wrong = {float(wrong.empirical):.6f}, |dev| = {abs(float(wrong.empirical) - 0.028) / sigma:.2f} sigma, {elapsed:.2f}s")


def test_criterion_7_monotone_amplification():
    mv = A.make("mv")
    low = [amplify(Distribution.two_point(Fraction(1, 10)), n, mv).weight(WRONG) for n in (1, 3, 5, 7)]
    high = [amplify(Distribution.two_point(Fraction(6, 10)), n, mv).weight(WRONG) for n in (1, 3, 5, 7)]
    assert all(a > b for a, b in zip(low, low[1:]))
    assert all(a < b for a, b in zip(high, high[1:]))
    assert high[1] == Fraction(81, 125) == Fraction(648, 1000)
    for n, mass in zip((1, 3, 5, 7), high):
        assert mass == binomial_error_mass(Fraction(6, 10), n)
    report(7, f"p=1/10 falls {[str(m) for m in low]}, p=6/10 rises, n=3 gives {high[1]}")


def test_criterion_8_permutation_adapter():
    config = {"order": OrderRelation.numeric([1, 2, 3]), "omega": W, "tol": 1, "k": 3}
    for name in A.REGISTRY_NAMES:
        assert check_permutation(A.make(name, config), [1, 2, 3], 4), name
    report(8, f"{len(A.REGISTRY_NAMES)} adjudicators order-independent on every bag of size <= 4")


def test_criterion_9_probabilistic_choice():
    assert prob_choice(Bag({2: 2, 4: 1})) == Distribution({2: Fraction(2, 3), 4: Fraction(1, 3)})
    unanimous = [b for b in enumerate_bags([1, 2, 3, "a"], 6) if b.is_unanimous()]
    assert len(unanimous) == 24
    for b in unanimous:
        assert prob_choice(b) == Distribution.point(next(iter(b.elements())))
    report(9, "{2: 2/3, 4: 1/3}; unanimous bags up to size 6 give point masses")

from fractions import Fraction
from itertools import product

import pytest
from hypothesis import strategies as st

from adjudication.bag import Bag

small_values = st.integers(min_value=-3, max_value=3)
item_lists = st.lists(small_values, min_size=1, max_size=8)
bags = item_lists.map(Bag.from_items)


def brute_force_distribution(weights, n, adjudicate):
    """Outcome probabilities from every ordered n-tuple of draws (no multiset shortcuts)."""
    out = {}
    for draw in product(list(weights), repeat=n):
        p = Fraction(1)
        for v in draw:
            p *= weights[v]
        o = adjudicate(Bag.from_items(draw))
        out[o] = out.get(o, 0) + p
    return {o: p for o, p in out.items() if p}


@pytest.fixture
def divisibility_1_to_12():
    from adjudication.order import OrderRelation

    return OrderRelation.divisibility(range(1, 13))


# one summary line per acceptance criterion, printed after the run
_acceptance = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    if report.when == "call" or report.failed:
        name = report.nodeid.split("::")[-1]
        _acceptance[name] = _acceptance.get(name, True) and report.passed


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_acceptance, key=lambda n: int(n.split("_")[2])):
        number, label = name.split("_", 3)[2:]
        status = "PASS" if _acceptance[name] else "FAIL"
        terminalreporter.write_line(f"{status}  criterion {number}: {label.replace('_', ' ')}")

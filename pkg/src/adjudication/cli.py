"""Command-line interface.

Exit codes: 0 success, 2 bad input, 3 undefined adjudication, 4 bottom,
5 conformance mismatch against the claims fixture, 6 simulation outside
four sigma of the exact distribution.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from . import adjudicators, algebra, laws
from .bag import Bag
from .errors import AdjudicationError
from .generalized import Distribution, amplify
from .outcome import Bottom, Defined, Undefined, outcome_to_json
from .sim import SimConfig, run_sim
from .values import decimal_string, parse_scalar, rational_from_json, rational_to_json, value_to_json

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_UNDEFINED = 3
EXIT_BOTTOM = 4
EXIT_MISMATCH = 5
EXIT_DEVIATION = 6


class UsageError(AdjudicationError):
    pass


def load_json_arg(text: str) -> Any:
    """Inline JSON, ``@path``, or a path to an existing file."""
    if text.startswith("@"):
        text = Path(text[1:]).read_text(encoding="utf-8")
    elif not text.lstrip().startswith(("[", "{", '"')) and Path(text).is_file():
        text = Path(text).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid JSON: {exc}") from exc


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=False, ensure_ascii=False)


def _emit(args: argparse.Namespace, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


def _operator_config(args: argparse.Namespace) -> dict:
    config = dict(load_json_arg(args.config)) if getattr(args, "config", None) else {}
    if getattr(args, "order", None):
        config["order"] = load_json_arg(args.order)
    if getattr(args, "omega", None) is not None:
        config["omega"] = value_to_json(parse_scalar(args.omega))
    if getattr(args, "tol", None) is not None:
        config["tol"] = args.tol
    if getattr(args, "k", None) is not None:
        config["k"] = args.k
    return config


def _csv_values(text: str) -> list:
    return [parse_scalar(tok) for tok in text.split(",") if tok.strip()]


# -- adjudicate -----------------------------------------------------------------


def cmd_adjudicate(args: argparse.Namespace) -> int:
    if args.bag is None and args.input is None:
        raise UsageError("give --bag or --input")
    bag = Bag.from_json(load_json_arg(args.bag if args.bag is not None else "@" + args.input))
    adj = adjudicators.make(args.op, _operator_config(args))
    result = adj(bag)
    majority = adjudicators.mv(bag)
    plurality = adjudicators.fptp(bag)
    diagnostics = {
        "size": bag.size(),
        "distinct": len(bag.elements()),
        "unanimous": bag.is_unanimous(),
        "majority": outcome_to_json(majority),
        "plurality": outcome_to_json(plurality),
        "weak_choice": isinstance(result, Defined) and result.value in bag,
    }
    if args.format == "json":
        _emit(args, dumps({"op": adj.name, "bag": bag.to_json(), "outcome": outcome_to_json(result), "diagnostics": diagnostics}))
    else:
        lines = [str(result)]
        lines += [f"{k}: {json.dumps(v)}" for k, v in diagnostics.items()]
        _emit(args, "\n".join(lines))
    if isinstance(result, Undefined):
        return EXIT_UNDEFINED
    if isinstance(result, Bottom):
        return EXIT_BOTTOM
    return EXIT_OK


# -- laws -------------------------------------------------------------------------


def cmd_laws(args: argparse.Namespace) -> int:
    values = tuple(_csv_values(args.universe))
    config = laws.UniverseConfig(
        values=values,
        omega=parse_scalar(args.omega),
        max_size=args.max_size,
        tol=args.tol if args.tol is not None else 1,
        k=args.k if args.k is not None else 3,
    )
    rows = laws.default_rows(config)
    if args.ops:
        wanted = [s.strip() for s in args.ops.split(",") if s.strip()]
        unknown = set(wanted) - {r.label for r in rows}
        if unknown:
            raise UsageError(f"unknown operator rows: {sorted(unknown)}")
        rows = [r for r in rows if r.label in wanted]
    report = laws.conformance_matrix(rows, args.max_size, probabilistic_universe=values)
    claims = laws.load_claims(args.claims)
    mismatches = laws.compare_claims(report, claims)
    payload = report.to_json()
    payload["claims_mismatches"] = mismatches
    if args.format == "json":
        _emit(args, dumps(payload))
    else:
        text = report.table()
        if args.out:
            Path(args.out).write_text(dumps(payload) + "\n", encoding="utf-8")
        print(text)
    if mismatches:
        for m in mismatches:
            print(f"claim mismatch: {m['row']} / {m['column']}: claimed {m['claimed']}, got {m['actual']}", file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


# -- amplify ------------------------------------------------------------------------


def _distribution(args: argparse.Namespace) -> Distribution:
    if args.dist:
        return Distribution.from_json(load_json_arg(args.dist))
    if args.p_wrong is not None:
        return Distribution.two_point(rational_from_json(args.p_wrong))
    raise UsageError("give --dist or --p-wrong")


def _odd_list(text: str) -> list[int]:
    try:
        ns = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise UsageError(f"--n expects comma-separated integers: {exc}") from exc
    if not ns or any(n < 1 for n in ns):
        raise UsageError("--n values must be positive integers")
    return ns


def cmd_amplify(args: argparse.Namespace) -> int:
    d = _distribution(args)
    adj = adjudicators.make(args.op, _operator_config(args))
    rows = []
    for n in _odd_list(args.n):
        for outcome, p in amplify(d, n, adj).items():
            rows.append({"n": n, "outcome": outcome_to_json(outcome), **rational_to_json(p), "decimal": decimal_string(p)})
    if args.format == "json":
        _emit(args, dumps({"op": adj.name, "distribution": d.to_json(), "rows": rows}))
    else:
        lines = [f"{'n':>3}  {'outcome':<28}{'exact':>16}{'decimal':>18}"]
        for r in rows:
            lines.append(
                f"{r['n']:>3}  {json.dumps(r['outcome']):<28}{str(Fraction(r['num'], r['den'])):>16}{r['decimal']:>18}"
            )
        _emit(args, "\n".join(lines))
    return EXIT_OK


# -- simulate -------------------------------------------------------------------------


def _default_seed() -> int:
    raw = os.environ.get("ADJ_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError as exc:
        raise UsageError(f"ADJ_SEED must be an integer, got {raw!r}") from exc


def cmd_simulate(args: argparse.Namespace) -> int:
    if args.sim_config:
        cfg = SimConfig.from_json(load_json_arg(args.sim_config))
    else:
        cfg = SimConfig(
            distribution=_distribution(args),
            n_versions=args.n,
            adjudicator=args.op,
            trials=args.trials,
            seed=args.seed if args.seed is not None else _default_seed(),
            adjudicator_config=_operator_config(args),
        )
    report = run_sim(cfg, workers=args.workers)
    _emit(args, dumps(report.to_json()) if args.format == "json" else report.table())
    return EXIT_OK if report.within(4.0) else EXIT_DEVIATION


# -- algebra ----------------------------------------------------------------------------


def _demo_gerrymander() -> dict:
    leaves = (1, 1, 1, 1, 2, 2, 1, 2, 2)
    term = algebra.nested_term(leaves, 3, "mv")
    nested = algebra.evaluate(term)
    flat = algebra.evaluate(algebra.Adj("mv", leaves))
    found = algebra.gerrymander_search((1, 2), 3, 3, "mv")
    return {
        "term": algebra.term_to_json(term),
        "nested": outcome_to_json(nested),
        "flat": outcome_to_json(flat),
        "assignments_searched": 2 ** 9,
        "disagreements_found": len(found),
        "example_found": any(g.leaves == leaves for g in found),
    }


def _demo_square() -> dict:
    return algebra.check_fun_distribution("square", Bag.from_items([-2, 2, 3]), "mv").to_json()


def _demo_identity() -> dict:
    bags = laws.enumerate_bags((1, 2, 3), 4)
    results = [algebra.check_fun_distribution("identity", b, "mv") for b in bags]
    return {"bags_checked": len(results), "all_hold": all(results)}


def _demo_max() -> dict:
    b = Bag.from_items([1, 2, 3])
    return {
        "mv_err": algebra.check_left_distribution("max", 4, b, "mv_err").to_json(),
        "choice": algebra.check_left_distribution("max", 4, b, "mv", semantics="choice").to_json(),
    }


DEMOS = {"gerrymander": _demo_gerrymander, "square": _demo_square, "identity": _demo_identity, "max": _demo_max}


def _demo_lines(name: str, result: dict) -> list[str]:
    if name == "gerrymander":
        return [
            f"gerrymander: nested {json.dumps(result['nested'])} vs flat {json.dumps(result['flat'])}",
            f"  search over {result['assignments_searched']} assignments: {result['disagreements_found']} disagreements",
        ]
    if name == "square":
        return [f"square/mv: LHS {_render(result['lhs'])}, RHS {_render(result['rhs'])} ({result['relation']})"]
    if name == "identity":
        return [f"identity/mv over {result['bags_checked']} bags: {'all hold' if result['all_hold'] else 'FAILURES'}"]
    if name == "max":
        return [
            f"max/mv_err: LHS {_render(result['mv_err']['lhs'])}, RHS {_render(result['mv_err']['rhs'])}",
            f"max/choice: LHS {_render(result['choice']['lhs'])}, RHS {_render(result['choice']['rhs'])}",
        ]
    return [json.dumps(result)]


def _render(o: Any) -> str:
    if isinstance(o, list):
        return "{" + ", ".join(_render(x) for x in o) + "}"
    if isinstance(o, dict) and "defined" in o:
        return json.dumps(o["defined"])
    return str(o)


def cmd_algebra(args: argparse.Namespace) -> int:
    payload: dict = {}
    if args.term:
        term = algebra.term_from_json(load_json_arg(args.term))
        reg = algebra.Registries(adjudicators=algebra.default_adjudicators(_operator_config(args)))
        payload["term"] = {
            "term": algebra.term_to_json(term),
            "det": outcome_to_json(algebra.evaluate(term, reg, partial=args.partial)),
            "nondet": [outcome_to_json(o) for o in algebra.sorted_outcomes(algebra.evaluate_nondet(term, reg))],
        }
    demos = [args.demo] if args.demo and args.demo != "all" else (list(DEMOS) if args.demo == "all" or not args.term else [])
    for name in demos:
        payload[name] = DEMOS[name]()
    if args.format == "json":
        _emit(args, dumps(payload))
    else:
        lines = []
        if "term" in payload:
            t = payload["term"]
            lines.append(f"term: det {_render(t['det'])}, nondet {_render(t['nondet'])}")
        for name in demos:
            lines += _demo_lines(name, payload[name])
        _emit(args, "\n".join(lines))
    return EXIT_OK


# -- parser -------------------------------------------------------------------------------


def _add_operator_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="operator configuration JSON (inline, @file or path)")
    p.add_argument("--order", help="order relation JSON for glb/median")
    p.add_argument("--omega", help="failure value for plubf")
    p.add_argument("--tol", help="tolerance for tol_intersect")
    p.add_argument("--k", help="outlier factor for avg_robust")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), default=argparse.SUPPRESS)
    common.add_argument("--out", default=argparse.SUPPRESS, help="write output to this path")

    parser = argparse.ArgumentParser(prog="adjudicate", description="Adjudication operators for N-version computation.")
    parser.add_argument("--format", choices=("json", "table"), default="table")
    parser.add_argument("--out", default=None, help="write output to this path")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("adjudicate", parents=[common], help="adjudicate one bag")
    p.add_argument("--op", required=True, choices=adjudicators.REGISTRY_NAMES)
    p.add_argument("--bag", help="bag JSON: item list or [{value, count}]")
    p.add_argument("--input", help="file containing the bag JSON")
    _add_operator_flags(p)
    p.set_defaults(func=cmd_adjudicate)

    p = sub.add_parser("laws", parents=[common], help="conformance matrix against the claims fixture")
    p.add_argument("--universe", default="1,2,3")
    p.add_argument("--max-size", type=int, default=5)
    p.add_argument("--omega", default="omega")
    p.add_argument("--claims", help="claims fixture JSON (defaults to the bundled one)")
    p.add_argument("--ops", help="comma-separated row labels to restrict the matrix")
    p.add_argument("--tol")
    p.add_argument("--k")
    p.set_defaults(func=cmd_laws)

    p = sub.add_parser("amplify", parents=[common], help="exact amplification table")
    p.add_argument("--dist", help="distribution JSON")
    p.add_argument("--p-wrong", help="two-point distribution right/wrong with this error probability")
    p.add_argument("--n", default="1,3,5,7", help="comma-separated version counts")
    p.add_argument("--op", default="mv", choices=adjudicators.REGISTRY_NAMES)
    _add_operator_flags(p)
    p.set_defaults(func=cmd_amplify)

    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo check of amplification")
    p.add_argument("--sim-config", help="SimConfig JSON")
    p.add_argument("--dist")
    p.add_argument("--p-wrong")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--op", default="mv", choices=adjudicators.REGISTRY_NAMES)
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=None, help="defaults to $ADJ_SEED, else 0")
    p.add_argument("--workers", type=int, default=1)
    _add_operator_flags(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("algebra", parents=[common], help="evaluate terms and run algebra demos")
    p.add_argument("--term", help="term JSON")
    p.add_argument("--demo", choices=(*DEMOS, "all"))
    p.add_argument("--partial", choices=("bottom", "undefined"), default="bottom")
    _add_operator_flags(p)
    p.set_defaults(func=cmd_algebra)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (AdjudicationError, OSError, KeyError, TypeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

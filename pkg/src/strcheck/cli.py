"""Command-line interface: ``strcheck check|compare|validate``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path

from .gcl import GclError, parse_expr, parse_file
from .model import Model, ModelError
from .oracle.random_models import random_model
from .oracle.suite import default_oracle, run_suite
from .reference import REFERENCE_NAMES, is_reference_name, reference_model
from .result import ExplorationResult, Limits, ResourceBoundExceeded
from .strategies import STRATEGIES, run_strategy
from .tr import all_movers_oracle

EXIT_HOLDS, EXIT_VIOLATION, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def load_model(spec: str, prop: str | None = None) -> Model:
    """A ``.gcl`` path or a built-in name such as ``lockpair`` or ``indep(3,4)``."""
    path = Path(spec)
    if path.exists():
        model = parse_file(path)
    elif is_reference_name(spec):
        model = reference_model(spec)
    else:
        raise UsageError(f"{spec}: no such file or built-in model")
    if prop is not None:
        model = model.with_property(parse_expr(prop, model))
    return model


def _limits(args) -> Limits:
    return Limits(args.max_states, args.timeout_ms)


def _run(model: Model, strategy: str, args) -> ExplorationResult:
    return run_strategy(
        model,
        strategy,
        _limits(args),
        subsumption=not args.no_subsumption,
        exhaustive_nes=args.exhaustive_nes,
    )


def percent(part: int, whole: int) -> str:
    if whole == 0:
        return "0.0"
    value = Decimal(part) * 100 / Decimal(whole)
    return str(value.quantize(Decimal("0.1"), rounding=ROUND_HALF_UP))


def _format_trace(model: Model, trace) -> list[str]:
    lines = []
    for a, q in trace:
        step = "init" if a is None else str(model.action(a))
        lines.append(f"  {step:<32} {model.describe(q)}")
    return lines


def cmd_check(args) -> int:
    model = load_model(args.model, args.property)
    res = _run(model, args.strategy, args)
    if args.format == "json":
        print(json.dumps(res.summary()))
    elif args.format == "csv":
        _write_csv([res.summary()])
    else:
        verdict = "invariant violated" if res.violated else "invariant holds"
        print(f"model {model.name}, strategy {res.strategy}: {verdict}")
        print(
            f"states {res.states_visited}, transitions {res.transitions}, "
            f"external states {res.external_states}, deadlocks {res.deadlock_count}, "
            f"time {res.wall_time * 1000:.1f} ms"
        )
        for note in res.notes:
            print(f"note: {note}")
        if res.violated:
            print("trace:")
            print("\n".join(_format_trace(model, res.violation)))
    return EXIT_VIOLATION if res.violated else EXIT_HOLDS


def _write_csv(rows: list[dict]) -> None:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    sys.stdout.write(buf.getvalue())


def compare_rows(model: Model, strategies: list[str], args) -> list[dict]:
    baseline = _run(model, "none", args)
    rows = []
    for strategy in ["none"] + [s for s in strategies if s != "none"]:
        res = baseline if strategy == "none" else _run(model, strategy, args)
        row = res.summary()
        row["states_pct"] = percent(res.external_states, baseline.states_visited)
        row["transitions_pct"] = percent(res.transitions, baseline.transitions)
        rows.append(row)
    return rows


def cmd_compare(args) -> int:
    strategies = _strategy_list(args.strategies)
    model = load_model(args.model, args.property)
    rows = compare_rows(model, strategies, args)
    if args.format == "json":
        print(json.dumps(rows, indent=2))
    elif args.format == "csv":
        _write_csv(rows)
    else:
        header = ("strategy", "states", "external", "states%", "transitions", "trans%",
                  "deadlocks", "violated", "time_ms")
        table = [header] + [
            (r["strategy"], r["states"], r["external_states"], r["states_pct"], r["transitions"],
             r["transitions_pct"], r["deadlocks"], r["violated"], f"{r['time_ms']:.1f}")
            for r in rows
        ]
        widths = [max(len(str(row[k])) for row in table) for k in range(len(header))]
        print(f"model {model.name}")
        for row in table:
            print("  ".join(str(c).rjust(w) for c, w in zip(row, widths)))
    return EXIT_VIOLATION if any(r["violated"] for r in rows) else EXIT_HOLDS


def _strategy_list(text: str) -> list[str]:
    if text == "all":
        return list(STRATEGIES)
    out = [s.strip() for s in text.split(",") if s.strip()]
    bad = [s for s in out if s not in STRATEGIES]
    if bad or not out:
        raise UsageError(f"unknown strategies: {', '.join(bad) or text!r}")
    return out


def parse_seeds(text: str) -> list[int]:
    """``0..99`` (inclusive), ``5`` or ``1,4,9``."""
    seeds: list[int] = []
    try:
        for part in text.split(","):
            if ".." in part:
                lo, hi = part.split("..")
                seeds.extend(range(int(lo), int(hi) + 1))
            else:
                seeds.append(int(part))
    except ValueError:
        raise UsageError(f"bad seed range {text!r}") from None
    return seeds


def cmd_validate(args) -> int:
    models: list[Model] = []
    if args.reference or args.seeds is None:
        models += [reference_model(n) for n in REFERENCE_NAMES]
    if args.seeds is not None or not args.reference:
        models += [random_model(s) for s in parse_seeds(args.seeds or "0..99")]
    factory = default_oracle
    if args.broken_movers:
        factory = lambda m, strategy: all_movers_oracle(m)  # noqa: E731
    strategies = tuple(_strategy_list(args.strategies))
    suite = run_suite(models, strategies, factory)
    for name, report in suite.failures:
        print(f"{name}: {report}")
    total = len(suite.reports)
    print(f"{total - len(suite.failures)}/{total} checks passed over {len(models)} models")
    return EXIT_HOLDS if suite.passed else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="strcheck", description="Explicit-state invariant checking with state-space reduction."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("model", help="path to a .gcl file or a built-in name")
        p.add_argument("--property", help="boolean expression replacing the model's property")
        p.add_argument("--max-states", type=int, default=None)
        p.add_argument("--timeout-ms", type=int, default=None)
        p.add_argument("--exhaustive-nes", action="store_true",
                       help="try every enabling-set choice when closing stubborn sets")
        p.add_argument("--no-subsumption", action="store_true",
                       help="disable phase subsumption in the transaction search (debug)")
        p.add_argument("--format", choices=("text", "csv", "json"), default="text")

    check = sub.add_parser("check", help="explore one model with one strategy")
    common(check)
    check.add_argument("--strategy", choices=STRATEGIES, default="str")
    check.set_defaults(func=cmd_check)

    compare = sub.add_parser("compare", help="compare strategies against full exploration")
    common(compare)
    compare.add_argument("--strategies", default="all",
                         help="comma-separated subset of none,tr,str,spor (default: all)")
    compare.set_defaults(func=cmd_compare)

    validate = sub.add_parser("validate", help="run the differential validation suite")
    validate.add_argument("--seeds", help="random model seeds, e.g. 0..99")
    validate.add_argument("--reference", action="store_true", help="include the built-in models")
    validate.add_argument("--strategies", default="tr,str,spor")
    validate.add_argument("--broken-movers", action="store_true", help=argparse.SUPPRESS)
    validate.set_defaults(func=cmd_validate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_HOLDS
    try:
        return args.func(args)
    except GclError as err:
        print(str(err), file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, ModelError, OSError) as err:
        print(f"strcheck: {err}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceBoundExceeded as err:
        print(f"strcheck: resource bound exceeded: {err}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())

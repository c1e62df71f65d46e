"""Command-line interface.

Exit codes: 0 all evaluated criteria pass, 1 at least one fails, 2 usage or
input error, 3 a criterion could not be evaluated (zero-probability stratum).
Code 3 takes precedence over 1. Reports go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import CausalAuditError
from .fairness import CRITERIA, DEFAULT_TOLERANCE, AuditReport, audit, monte_carlo_audit
from .model_io import (
    ModelDocument,
    parse_model,
    report_to_json,
    report_to_text,
    roles_from_spec,
    serialize_model,
)
from .paths import classify_paths
from .scenarios import SCENARIOS, get_scenario

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_NOT_EVALUABLE = 3


class _UsageError(Exception):
    pass


def _criteria(text: str) -> list[str]:
    names = [c.strip() for c in text.split(",") if c.strip()]
    for name in names:
        if name != "all" and name not in CRITERIA:
            raise argparse.ArgumentTypeError(
                f"unknown criterion {name!r}; choose from {', '.join(CRITERIA)}, all"
            )
    return names


def _add_report_options(p: argparse.ArgumentParser):
    p.add_argument("--tolerance", type=float, default=None,
                   help=f"gap tolerance for quantitative criteria (default {DEFAULT_TOLERANCE:g})")
    p.add_argument("--criteria", type=_criteria, default=["all"],
                   help="comma-separated subset of parity,cep,diagnostic or 'all'")
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--mc-samples", type=int, default=None, metavar="N",
                   help="audit from N seeded samples instead of exact enumeration")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--timestamps", action="store_true", help="add generated_at to JSON output")
    p.add_argument("--figures", type=Path, default=None, metavar="DIR",
                   help="also write one PNG bar chart per verdict into DIR")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="causal-audit",
        description="Audit a classification in a discrete causal model against fairness criteria.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("audit", help="audit a model file")
    p.add_argument("file", type=Path)
    p.add_argument("--protected")
    p.add_argument("--outcome")
    p.add_argument("--classification")
    p.add_argument("--positive-class")
    p.add_argument("--negative-outcome")
    _add_report_options(p)

    p = sub.add_parser("scenario", help="built-in example scenarios")
    ssub = p.add_subparsers(dest="action", required=True)
    ssub.add_parser("list", help="list scenario names")
    e = ssub.add_parser("emit", help="print a scenario in the model file format")
    e.add_argument("name")
    a = ssub.add_parser("audit", help="audit a scenario")
    a.add_argument("name")
    _add_report_options(a)

    p = sub.add_parser("paths", help="list directed paths and their mediation status")
    p.add_argument("file", type=Path)
    p.add_argument("--from", dest="source", required=True)
    p.add_argument("--to", dest="sink", required=True)
    p.add_argument("--mediator", required=True)
    p.add_argument("--format", choices=("json", "text"), default="text")
    return parser


def _load(path: Path) -> ModelDocument:
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise _UsageError(f"{path}: file not found") from None
    except (OSError, UnicodeDecodeError) as exc:
        raise _UsageError(f"{path}: cannot read: {exc}") from None
    try:
        return parse_model(text)
    except CausalAuditError as exc:
        raise _UsageError(f"{path}: {exc}") from None


def _emit_report(report: AuditReport, args, stem: str) -> int:
    if args.format == "json":
        sys.stdout.write(report_to_json(report, timestamps=args.timestamps))
    else:
        sys.stdout.write(report_to_text(report))
    if args.figures is not None:
        from .plotting import plot_report

        for path in plot_report(report, args.figures, stem=stem):
            print(f"wrote {path}", file=sys.stderr)
    for item in report.not_evaluable:
        print(f"not evaluable: {item.criterion}: {item.reason}", file=sys.stderr)
    if report.not_evaluable:
        return EXIT_NOT_EVALUABLE
    return EXIT_PASS if report.all_passed else EXIT_FAIL


def _run_audit(doc: ModelDocument, spec_overrides: dict, args, stem: str) -> int:
    if args.tolerance is not None:
        spec_overrides["tolerance"] = args.tolerance
    try:
        spec = doc.audit_spec(**spec_overrides)
    except ValueError as exc:
        raise _UsageError(str(exc)) from None
    if args.mc_samples is not None:
        if args.mc_samples < 1:
            raise _UsageError("--mc-samples must be positive")
        report = monte_carlo_audit(doc.model, spec, args.mc_samples, args.seed, args.criteria)
    else:
        report = audit(doc.model, spec, args.criteria)
    return _emit_report(report, args, stem)


def _cmd_audit(args) -> int:
    doc = _load(args.file)
    overrides = {
        "protected": args.protected,
        "outcome": args.outcome,
        "classification": args.classification,
        "positive_class": args.positive_class,
        "outcome_negative": args.negative_outcome,
    }
    return _run_audit(doc, overrides, args, stem=args.file.stem)


def _cmd_scenario(args) -> int:
    if args.action == "list":
        for name in SCENARIOS:
            print(f"{name}\t{get_scenario(name).description}")
        return EXIT_PASS
    try:
        scenario = get_scenario(args.name)
    except KeyError as exc:
        raise _UsageError(f"{exc.args[0]}; see 'scenario list'") from None
    doc = ModelDocument(scenario.model, roles_from_spec(scenario.spec))
    if args.action == "emit":
        sys.stdout.write(serialize_model(doc))
        return EXIT_PASS
    overrides = {"tolerance": scenario.spec.tolerance}
    return _run_audit(doc, overrides, args, stem=scenario.name)


def _cmd_paths(args) -> int:
    doc = _load(args.file)
    report = classify_paths(doc.model, args.source, args.sink, args.mediator)
    if args.format == "json":
        sys.stdout.write(json.dumps(report.to_dict(), indent=2) + "\n")
    else:
        for kind, paths in (("mediated", report.mediated), ("unmediated", report.unmediated)):
            for p in paths:
                print(f"{kind}\t{p}")
    return EXIT_PASS


_COMMANDS = {"audit": _cmd_audit, "scenario": _cmd_scenario, "paths": _cmd_paths}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_PASS
    try:
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"causal-audit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CausalAuditError, ValueError) as exc:
        print(f"causal-audit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def run():
    sys.exit(main())

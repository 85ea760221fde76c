"""Command-line front end.

Subcommands: ``validate``, ``check``, ``classify``, ``explain``, ``graph``,
``ingest``, ``axioms``.  Exit code 2 always means an error (bad input, bad
file, invalid model); ``check`` exits 0/1 for true/false, ``validate`` exits
1 when violations were found, ``axioms`` exits 1 when an instance failed.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Optional, Sequence

from . import precedent
from .checker import EvalSession
from .formula import ExpansionContext, ExpansionSizeError, ParseError, dec, bestbinding, parse
from .ingest import ModelBuildError, build_model
from .model import (
    BINARY_OUTCOMES,
    CaseModel,
    UnknownStateError,
    validate_jurisdiction,
    validate_model,
)
from .modelio import ModelFormatError, load_cases, load_jurisdiction, load_model, write_model
from .harness import axiom_suite


class CliError(Exception):
    pass


def _load_validated(path: str) -> CaseModel:
    model = load_model(path)
    problems = validate_jurisdiction(model.jurisdiction) + validate_model(model)
    if problems:
        details = "\n".join(f"  {p}" for p in problems)
        raise CliError(f"model {path} is invalid:\n{details}")
    return model


def _warn_unknown(session: EvalSession) -> None:
    for token in sorted(session.unknown_tokens):
        print(f"warning: token {token!r} names nothing in the model; it evaluates to false", file=sys.stderr)


def cmd_validate(args: argparse.Namespace) -> int:
    model = load_model(args.model)
    problems = validate_jurisdiction(model.jurisdiction) + validate_model(model)
    for problem in problems:
        print(str(problem))
    if problems:
        return 1
    print("ok")
    return 0


def cmd_check(args: argparse.Namespace) -> int:
    model = _load_validated(args.model)
    ctx = ExpansionContext.for_model(model)
    phi = parse(args.formula, ctx)
    session = EvalSession(model)
    result = session.holds(phi, args.state)
    _warn_unknown(session)
    print("true" if result else "false")
    return 0 if result else 1


def _formula_outcomes(model: CaseModel, state_name: str) -> set:
    ctx = ExpansionContext.for_model(model)
    session = EvalSession(model)
    name = model.state(state_name).name
    return {o for o in BINARY_OUTCOMES if session.holds(bestbinding(name, dec(o), ctx), name)}


def _classify_one(model: CaseModel, state_name: str, cross_check: bool) -> str:
    outcome = precedent.decide(model, state_name)
    if cross_check and not model.state(state_name).decided:
        from_formulas = _formula_outcomes(model, state_name)
        if from_formulas != outcome.outcomes:
            raise CliError(
                f"engine disagreement at {state_name}: semantic engine says {outcome}, "
                f"formula engine says {sorted(o.symbol for o in from_formulas)}"
            )
    return str(outcome)


def cmd_classify(args: argparse.Namespace) -> int:
    model = _load_validated(args.model)
    if args.batch:
        for state in model.undecided_states:
            print(f"{state.name}: {_classify_one(model, state.name, args.cross_check)}")
        return 0
    if not args.state:
        raise CliError("classify needs --state or --batch")
    print(_classify_one(model, args.state, args.cross_check))
    return 0


def cmd_explain(args: argparse.Namespace) -> int:
    model = _load_validated(args.model)
    print(precedent.explain(model, args.state).format())
    return 0


def cmd_graph(args: argparse.Namespace) -> int:
    model = _load_validated(args.model)
    graph = precedent.precedent_graph(model, args.state)
    with open(args.dot, "w", encoding="utf-8") as handle:
        handle.write(precedent.to_dot(graph))
    return 0


def cmd_ingest(args: argparse.Namespace) -> int:
    cases = load_cases(args.cases)
    jurisdiction = load_jurisdiction(args.jurisdiction)
    decided = [c for c in cases if c.outcome.decided]
    pending = [c for c in cases if not c.outcome.decided]
    model = build_model(decided, jurisdiction, pending)
    write_model(model, args.out)
    return 0


def cmd_axioms(args: argparse.Namespace) -> int:
    model = _load_validated(args.model)
    seed = int(os.environ.get("PRECEDENT_ENGINE_SEED", "0"))
    report = axiom_suite(model, seed=seed)
    for line in report.lines():
        print(line)
    return 0 if report.ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="caselogic",
        description="Precedent reasoning over court hierarchies and case timelines",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a model file against every invariant")
    p.add_argument("--model", required=True)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("check", help="evaluate a formula at a state")
    p.add_argument("--model", required=True)
    p.add_argument("--state", required=True)
    p.add_argument("--formula", required=True)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("classify", help="decide a pending case from its precedents")
    p.add_argument("--model", required=True)
    p.add_argument("--state")
    p.add_argument("--batch", action="store_true", help="classify every pending case")
    p.add_argument(
        "--cross-check",
        action="store_true",
        help="also run the formula engine and fail on disagreement",
    )
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("explain", help="per-precedent status chain for a case")
    p.add_argument("--model", required=True)
    p.add_argument("--state", required=True)
    p.set_defaults(func=cmd_explain)

    p = sub.add_parser("graph", help="export the binding/overruling graph as DOT")
    p.add_argument("--model", required=True)
    p.add_argument("--state", required=True)
    p.add_argument("--dot", required=True)
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("ingest", help="build a model file from factor-annotated cases")
    p.add_argument("--cases", required=True)
    p.add_argument("--jurisdiction", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("axioms", help="instantiate and check every axiom schema")
    p.add_argument("--model", required=True)
    p.set_defaults(func=cmd_axioms)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (
        CliError,
        ParseError,
        ExpansionSizeError,
        ModelFormatError,
        ModelBuildError,
        UnknownStateError,
        precedent.UndecidedStateError,
        precedent.CycleError,
        OSError,
        ValueError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

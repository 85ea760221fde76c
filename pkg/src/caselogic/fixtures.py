"""Shipped example data: the seven-case court fixture and the trade-secret batch."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .ingest import FactorCase
from .model import CaseModel, Jurisdiction
from .modelio import load_jurisdiction, load_model, parse_cases_json


def _data(name: str) -> Path:
    return Path(str(resources.files("caselogic.data").joinpath(name)))


def running_example_path() -> Path:
    return _data("running_example.json")


def running_example() -> CaseModel:
    """Seven cases across a five-court hierarchy, with one pending case ``n*``."""
    return load_model(running_example_path())


def trade_secret_cases_path(fmt: str = "json") -> Path:
    return _data(f"trade_secret_cases.{fmt}")


def trade_secret_cases() -> tuple[list[FactorCase], list[FactorCase]]:
    """The two conflicting decided cases and the pending third, as (decided, new)."""
    cases = parse_cases_json(json.loads(trade_secret_cases_path().read_text(encoding="utf-8")))
    return [c for c in cases if c.outcome.decided], [c for c in cases if not c.outcome.decided]


def single_court_path() -> Path:
    return _data("single_court.json")


def single_court() -> Jurisdiction:
    """One self-bound court; the smallest jurisdiction with binding force."""
    return load_jurisdiction(single_court_path())

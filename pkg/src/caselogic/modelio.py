"""Reading and writing model files, case files, and jurisdiction files.

Model files are JSON; see the README for the schema.  Case batches come as
JSON arrays or as CSV with a mandatory header row, where factor lists inside
a column are semicolon-separated.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Any, Union

from .ingest import FactorCase
from .model import CaseModel, CaseState, Jurisdiction, Outcome, transitive_closure

Source = Union[str, Path, dict, list]


class ModelFormatError(ValueError):
    """The input file is structurally not a model/case/jurisdiction description."""


def _load_json(source: Source) -> Any:
    if isinstance(source, (dict, list)):
        return source
    try:
        text = Path(source).read_text(encoding="utf-8")
    except OSError as exc:
        raise ModelFormatError(f"cannot read {source}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"{source} is not valid JSON: {exc}") from exc


def _require(data: dict, key: str, where: str) -> Any:
    if key not in data:
        raise ModelFormatError(f"{where} is missing the {key!r} field")
    return data[key]


def _pairs(raw: Any, where: str) -> frozenset[tuple[str, str]]:
    pairs = set()
    for entry in raw:
        if not isinstance(entry, (list, tuple)) or len(entry) != 2:
            raise ModelFormatError(f"{where} entries must be two-element pairs, got {entry!r}")
        pairs.add((str(entry[0]), str(entry[1])))
    return frozenset(pairs)


def load_jurisdiction(source: Source) -> Jurisdiction:
    data = _load_json(source)
    if not isinstance(data, dict):
        raise ModelFormatError("a jurisdiction description must be a JSON object")
    courts = tuple(str(c) for c in _require(data, "courts", "jurisdiction"))
    hierarchy = _pairs(data.get("hierarchy", []), "hierarchy")
    if data.get("transitive_closure"):
        hierarchy = transitive_closure(hierarchy)
    binding = _pairs(data.get("binding", []), "binding")
    return Jurisdiction(courts=courts, hierarchy=hierarchy, binding=binding)


def _outcome(raw: Any, where: str) -> Outcome:
    try:
        return Outcome(str(raw))
    except ValueError:
        raise ModelFormatError(f"{where}: decision must be \"0\", \"1\" or \"?\", got {raw!r}") from None


def load_model(source: Source) -> CaseModel:
    """Build a model from a file path or an already-parsed JSON object.

    Structural problems (missing fields, bad symbols) raise
    :class:`ModelFormatError`; semantic invariants are left to
    :func:`caselogic.model.validate_model` so violations can be reported as
    data.
    """
    data = _load_json(source)
    if not isinstance(data, dict):
        raise ModelFormatError("a model description must be a JSON object")
    jurisdiction = load_jurisdiction(data)
    states = []
    for i, raw in enumerate(_require(data, "states", "model")):
        where = f"state #{i}"
        names = tuple(str(n) for n in _require(raw, "names", where))
        if not names:
            raise ModelFormatError(f"{where} has an empty name list")
        try:
            rank = int(raw["time"])
        except (KeyError, TypeError, ValueError):
            raise ModelFormatError(f"{where} needs an integer \"time\" rank") from None
        states.append(
            CaseState(
                names=names,
                court=str(_require(raw, "court", where)),
                facts=frozenset(str(f) for f in raw.get("facts", [])),
                decision=_outcome(_require(raw, "decision", where), where),
                time_rank=rank,
            )
        )
    by_alias = {}
    for state in states:
        for name in state.names:
            by_alias.setdefault(name, state.name)
    relevance = tuple(
        (by_alias.get(str(a), str(a)), by_alias.get(str(b), str(b)))
        for a, b in data.get("relevance", [])
    )
    if "decided_names" in data:
        decided_names = tuple(str(n) for n in data["decided_names"])
    else:
        decided_names = tuple(n for s in states if s.decision.decided for n in s.names)
    return CaseModel(
        states=tuple(states),
        jurisdiction=jurisdiction,
        relevance=relevance,
        decided_names=decided_names,
        strict=bool(data.get("strict", True)),
    )


def model_to_dict(model: CaseModel) -> dict:
    return {
        "courts": list(model.jurisdiction.courts),
        "hierarchy": sorted(list(p) for p in model.jurisdiction.hierarchy),
        "binding": sorted(list(p) for p in model.jurisdiction.binding),
        "states": [
            {
                "names": list(s.names),
                "court": s.court,
                "facts": sorted(s.facts),
                "decision": s.decision.symbol,
                "time": s.time_rank,
            }
            for s in model.states
        ],
        "relevance": [list(p) for p in model.relevance],
        "decided_names": list(model.decided_names),
        "strict": model.strict,
    }


def write_model(model: CaseModel, path: Union[str, Path]) -> None:
    Path(path).write_text(json.dumps(model_to_dict(model), indent=2) + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------
# case batches


def _case_from_fields(name, court, time, pro_p, pro_d, outcome, where: str) -> FactorCase:
    try:
        rank = int(time)
    except (TypeError, ValueError):
        raise ModelFormatError(f"{where}: time must be an integer, got {time!r}") from None
    return FactorCase(
        name=str(name),
        court=str(court),
        time=rank,
        pro_plaintiff=frozenset(pro_p),
        pro_defendant=frozenset(pro_d),
        outcome=_outcome(outcome, where),
    )


def parse_cases_json(data: Any) -> list[FactorCase]:
    if not isinstance(data, list):
        raise ModelFormatError("a case batch must be a JSON array")
    cases = []
    for i, raw in enumerate(data):
        where = f"case #{i}"
        cases.append(
            _case_from_fields(
                _require(raw, "name", where),
                _require(raw, "court", where),
                _require(raw, "time", where),
                [str(f) for f in raw.get("pro_plaintiff", [])],
                [str(f) for f in raw.get("pro_defendant", [])],
                _require(raw, "outcome", where),
                where,
            )
        )
    return cases


_CSV_COLUMNS = ("name", "court", "time", "pro_plaintiff", "pro_defendant", "outcome")


def parse_cases_csv(text: str) -> list[FactorCase]:
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None:
        raise ModelFormatError("case CSV is empty; a header row is mandatory")
    missing = [c for c in _CSV_COLUMNS if c not in reader.fieldnames]
    if missing:
        raise ModelFormatError(f"case CSV header is missing columns {missing}")

    def split(raw: str) -> list[str]:
        return [f.strip() for f in (raw or "").split(";") if f.strip()]

    cases = []
    for i, row in enumerate(reader):
        where = f"case row {i + 2}"
        cases.append(
            _case_from_fields(
                row["name"],
                row["court"],
                row["time"],
                split(row["pro_plaintiff"]),
                split(row["pro_defendant"]),
                row["outcome"],
                where,
            )
        )
    return cases


def load_cases(source: Union[str, Path]) -> list[FactorCase]:
    """Load a case batch from a ``.json`` or ``.csv`` file."""
    path = Path(source)
    if path.suffix.lower() == ".csv":
        try:
            return parse_cases_csv(path.read_text(encoding="utf-8"))
        except OSError as exc:
            raise ModelFormatError(f"cannot read {source}: {exc}") from exc
    return parse_cases_json(_load_json(path))

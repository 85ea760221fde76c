"""Building a case-base model from factor-annotated raw cases.

Cases are described by the factual factors favoring each side.  A decided
case is relevant, a fortiori, to a query case when the query carries at
least all the factors supporting the precedent's outcome and no opposing
factors beyond the precedent's own: the query is then at least as strong a
case for that outcome as the precedent was.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .model import CaseModel, CaseState, Jurisdiction, Outcome, validate_jurisdiction, validate_model


class ModelBuildError(ValueError):
    """The raw cases cannot form a well-formed model."""


@dataclass(frozen=True)
class FactorCase:
    """One raw case: factors for each side, the forum, the time, the ruling."""

    name: str
    court: str
    time: int
    pro_plaintiff: frozenset[str]
    pro_defendant: frozenset[str]
    outcome: Outcome

    def favoring(self, outcome: Outcome) -> frozenset[str]:
        if outcome is Outcome.PLAINTIFF:
            return self.pro_plaintiff
        if outcome is Outcome.DEFENDANT:
            return self.pro_defendant
        raise ValueError("no factors favor an absent decision")


def afortiori_relevant(precedent: FactorCase, case: FactorCase) -> bool:
    """Does the precedent's a-fortiori constraint reach ``case``?

    With ``o`` the precedent's outcome: every factor that supported ``o`` in
    the precedent must be present in ``case``, and ``case`` may carry no
    factor against ``o`` that the precedent did not already carry.
    """
    o = precedent.outcome
    if not o.decided:
        raise ModelBuildError(f"precedent {precedent.name!r} has no outcome to argue from")
    return precedent.favoring(o) <= case.favoring(o) and case.favoring(o.opposite()) <= precedent.favoring(o.opposite())


def build_model(
    decided: Sequence[FactorCase],
    jurisdiction: Jurisdiction,
    new_cases: Sequence[FactorCase],
) -> CaseModel:
    """Assemble a strict-class model, deriving relevance a fortiori.

    Relevance edges run from each decided case to each query case whose
    factor pattern it reaches; relevance between decided cases is not
    derived here and can be supplied through an explicit model file instead.
    Query cases must be ranked strictly after every decided case.
    """
    problems = validate_jurisdiction(jurisdiction)
    if problems:
        raise ModelBuildError("invalid jurisdiction: " + "; ".join(str(p) for p in problems))

    seen: set[str] = set()
    for case in (*decided, *new_cases):
        if case.name in seen:
            raise ModelBuildError(f"duplicate case name {case.name!r}")
        seen.add(case.name)
        if case.pro_plaintiff & case.pro_defendant:
            overlap = sorted(case.pro_plaintiff & case.pro_defendant)
            raise ModelBuildError(f"case {case.name!r} lists factors {overlap} on both sides")
    for case in decided:
        if not case.outcome.decided:
            raise ModelBuildError(f"case {case.name!r} is listed as decided but has no outcome")
    for case in new_cases:
        if case.outcome.decided:
            raise ModelBuildError(f"query case {case.name!r} already has an outcome")

    if decided and new_cases:
        latest = max(c.time for c in decided)
        earliest = min(c.time for c in new_cases)
        if latest >= earliest:
            raise ModelBuildError(
                f"query cases must come strictly after decided ones "
                f"(decided up to rank {latest}, query from rank {earliest})"
            )

    def to_state(case: FactorCase) -> CaseState:
        return CaseState(
            names=(case.name,),
            court=case.court,
            facts=case.pro_plaintiff | case.pro_defendant,
            decision=case.outcome,
            time_rank=case.time,
        )

    relevance = tuple(
        (p.name, c.name)
        for p in decided
        for c in new_cases
        if p.name != c.name and afortiori_relevant(p, c)
    )
    model = CaseModel(
        states=tuple(to_state(c) for c in (*decided, *new_cases)),
        jurisdiction=jurisdiction,
        relevance=relevance,
        decided_names=tuple(c.name for c in decided),
        strict=True,
    )
    problems = validate_model(model)
    if problems:
        raise ModelBuildError("ingested cases violate model invariants: " + "; ".join(str(p) for p in problems))
    return model

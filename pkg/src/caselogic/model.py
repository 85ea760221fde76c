"""Core case-base model: jurisdictions, case states, and validation.

A :class:`CaseModel` couples a finite set of decided and pending cases with
the court hierarchy they belong to, a total temporal preorder (encoded as an
integer rank per case), and a relevance relation between cases.  Models are
treated as immutable once validated; every query in this package is a pure
function of the model and its arguments.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Optional


class UnknownStateError(KeyError):
    """A state name does not address any state of the model."""

    def __str__(self) -> str:  # KeyError quotes its payload by default
        return self.args[0] if self.args else ""


class Outcome(enum.Enum):
    """Decision value of a case.

    ``PLAINTIFF`` and ``DEFENDANT`` are the two concrete rulings; ``UNDECIDED``
    marks a case that has not been ruled on yet.
    """

    PLAINTIFF = "1"
    DEFENDANT = "0"
    UNDECIDED = "?"

    @property
    def symbol(self) -> str:
        return self.value

    @property
    def decided(self) -> bool:
        return self is not Outcome.UNDECIDED

    def opposite(self) -> "Outcome":
        if self is Outcome.PLAINTIFF:
            return Outcome.DEFENDANT
        if self is Outcome.DEFENDANT:
            return Outcome.PLAINTIFF
        raise ValueError("an absent decision has no opposite")


#: The two concrete rulings, in the order expansions iterate over them.
BINARY_OUTCOMES = (Outcome.DEFENDANT, Outcome.PLAINTIFF)


@dataclass(frozen=True)
class Jurisdiction:
    """A court system: court identifiers plus hierarchy and binding relations.

    ``hierarchy`` holds ordered pairs ``(a, b)`` meaning "court ``a`` sits
    above court ``b``"; it must be transitive and irreflexive.  ``binding``
    holds pairs ``(a, b)`` meaning "decisions of ``a`` bind ``b``".
    """

    courts: tuple[str, ...]
    hierarchy: frozenset[tuple[str, str]]
    binding: frozenset[tuple[str, str]]

    def is_higher(self, a: str, b: str) -> bool:
        return (a, b) in self.hierarchy

    def binds(self, a: str, b: str) -> bool:
        return (a, b) in self.binding


@dataclass(frozen=True)
class CaseState:
    """One case: its names, deciding court, facts, ruling, and time rank.

    The first name is canonical and is how the case is addressed; any further
    names are aliases.  Equal time ranks mean the cases count as simultaneous.
    """

    names: tuple[str, ...]
    court: str
    facts: frozenset[str]
    decision: Outcome
    time_rank: int

    @property
    def name(self) -> str:
        return self.names[0]

    @property
    def decided(self) -> bool:
        return self.decision.decided

    def tokens(self) -> frozenset[str]:
        """All atomic tokens true at this case: names, facts, and the court."""
        return frozenset(self.names) | self.facts | {self.court}


@dataclass(eq=False)
class CaseModel:
    """A full case base.  Identity-compared; treat as immutable after validation.

    ``relevance`` holds ordered pairs of canonical names ``(a, b)`` meaning
    "case ``a`` is relevant for case ``b``".  ``decided_names`` lists every
    name carried by a decided case, in a fixed order that downstream macro
    expansions iterate deterministically.  ``strict`` marks models that claim
    the common-law conditions: binding sandwiched between hierarchy and
    hierarchy-plus-self-loops, and all decided cases strictly before all
    undecided ones.
    """

    states: tuple[CaseState, ...]
    jurisdiction: Jurisdiction
    relevance: tuple[tuple[str, str], ...]
    decided_names: tuple[str, ...]
    strict: bool = True
    _by_name: dict = field(init=False, repr=False, default_factory=dict)
    _relevant_to: dict = field(init=False, repr=False, default_factory=dict)

    def __post_init__(self) -> None:
        for state in self.states:
            for name in state.names:
                # first writer wins so duplicate names stay visible to validation
                self._by_name.setdefault(name, state)
        for state in self.states:
            self._relevant_to[state.name] = []
        for src, dst in self.relevance:
            source = self._by_name.get(src)
            target = self._by_name.get(dst)
            if source is None or target is None:
                continue  # left for validation to report
            bucket = self._relevant_to[target.name]
            if source not in bucket:
                bucket.append(source)

    def state(self, name: str) -> CaseState:
        try:
            return self._by_name[name]
        except KeyError:
            raise UnknownStateError(f"unknown state name: {name!r}") from None

    def has_state(self, name: str) -> bool:
        return name in self._by_name

    def relevant_to(self, name: str) -> tuple[CaseState, ...]:
        """The cases relevant *for* the named case, in model order."""
        return tuple(self._relevant_to[self.state(name).name])

    @property
    def decided_states(self) -> tuple[CaseState, ...]:
        return tuple(s for s in self.states if s.decided)

    @property
    def undecided_states(self) -> tuple[CaseState, ...]:
        return tuple(s for s in self.states if not s.decided)

    def names(self) -> tuple[str, ...]:
        """Every name of every state, in model order."""
        out: list[str] = []
        for state in self.states:
            out.extend(state.names)
        return tuple(out)


class TemporalOrder(enum.Enum):
    BEFORE = "before"
    SIMULTANEOUS = "simultaneous"
    AFTER = "after"


class CourtRelation(enum.Enum):
    LOWER = "lower"
    HIGHER = "higher"
    SAME_COURT = "same-court"
    UNRELATED = "unrelated"


def temporal_compare(model: CaseModel, a: str, b: str) -> TemporalOrder:
    """Order two cases by time rank."""
    ra = model.state(a).time_rank
    rb = model.state(b).time_rank
    if ra < rb:
        return TemporalOrder.BEFORE
    if ra == rb:
        return TemporalOrder.SIMULTANEOUS
    return TemporalOrder.AFTER


def court_compare(model: CaseModel, a: str, b: str) -> CourtRelation:
    """Relate two cases through their courts.

    ``LOWER`` means ``a``'s court sits strictly below ``b``'s.
    """
    ca = model.state(a).court
    cb = model.state(b).court
    if ca == cb:
        return CourtRelation.SAME_COURT
    jur = model.jurisdiction
    if jur.is_higher(cb, ca):
        return CourtRelation.LOWER
    if jur.is_higher(ca, cb):
        return CourtRelation.HIGHER
    return CourtRelation.UNRELATED


@dataclass(frozen=True)
class Violation:
    """One violated model invariant; validation returns these as data."""

    code: str
    message: str

    def __str__(self) -> str:
        return f"[{self.code}] {self.message}"


def transitive_closure(pairs: Iterable[tuple[str, str]]) -> frozenset[tuple[str, str]]:
    """Close a binary relation under transitivity (Floyd-Warshall style)."""
    closed = set(pairs)
    changed = True
    while changed:
        changed = False
        for a, b in list(closed):
            for c, d in list(closed):
                if b == c and (a, d) not in closed:
                    closed.add((a, d))
                    changed = True
    return frozenset(closed)


def validate_jurisdiction(jur: Jurisdiction) -> list[Violation]:
    """Check the jurisdiction invariants; an empty list means the data is sound."""
    problems: list[Violation] = []
    courts = set(jur.courts)
    for relation, label in ((jur.hierarchy, "hierarchy"), (jur.binding, "binding")):
        for a, b in sorted(relation):
            for c in (a, b):
                if c not in courts:
                    problems.append(
                        Violation("UNKNOWN_COURT", f"{label} pair ({a}, {b}) mentions unknown court {c!r}")
                    )
    for c in sorted(courts):
        if (c, c) in jur.hierarchy:
            problems.append(Violation("H_IRREFLEXIVE", f"hierarchy contains the reflexive pair ({c}, {c})"))
    for a, b in sorted(jur.hierarchy):
        for c, d in sorted(jur.hierarchy):
            if b == c and (a, d) not in jur.hierarchy:
                problems.append(
                    Violation("H_TRANSITIVE", f"hierarchy misses ({a}, {d}) implied by ({a}, {b}) and ({c}, {d})")
                )
    # implied by transitivity plus irreflexivity, asserted independently
    for a, b in sorted(jur.hierarchy):
        if (b, a) in jur.hierarchy and a != b:
            problems.append(Violation("H_ASYMMETRIC", f"hierarchy contains both ({a}, {b}) and ({b}, {a})"))
    return problems


def validate_model(model: CaseModel) -> list[Violation]:
    """Check every case-base invariant; assumes the jurisdiction already validated.

    Returns all violations rather than stopping at the first; strict-class
    conditions are only checked when ``model.strict`` is set.
    """
    problems: list[Violation] = []
    jur = model.jurisdiction
    courts = set(jur.courts)
    decided_names = set(model.decided_names)

    if not model.states:
        problems.append(Violation("EMPTY_MODEL", "a model needs at least one state"))

    seen: dict[str, str] = {}
    all_names: set[str] = set()
    all_facts: set[str] = set()
    for state in model.states:
        if not state.names:
            problems.append(Violation("NO_NAME", f"state at court {state.court!r} carries no name"))
            continue
        for name in state.names:
            if name in seen and seen[name] != state.name:
                problems.append(Violation("DUPLICATE_NAME", f"name {name!r} addresses two distinct states"))
            seen.setdefault(name, state.name)
        all_names.update(state.names)
        all_facts.update(state.facts)
        if state.court not in courts:
            problems.append(Violation("UNKNOWN_COURT", f"state {state.name!r} sits at unknown court {state.court!r}"))
        if state.time_rank < 0:
            problems.append(Violation("NEGATIVE_RANK", f"state {state.name!r} has negative time rank"))
        names_in_decided = [n for n in state.names if n in decided_names]
        if state.decided and len(names_in_decided) != len(state.names):
            missing = sorted(set(state.names) - decided_names)
            problems.append(
                Violation("DECIDED_NAME_MISMATCH", f"decided state {state.name!r} has names {missing} outside the decided-name set")
            )
        if not state.decided and names_in_decided:
            problems.append(
                Violation("DECIDED_NAME_MISMATCH", f"undecided state {state.name!r} carries decided names {sorted(names_in_decided)}")
            )

    for overlap, label in (
        (all_names & all_facts, "names and facts"),
        (all_names & courts, "names and courts"),
        (all_facts & courts, "facts and courts"),
    ):
        if overlap:
            problems.append(Violation("VOCAB_OVERLAP", f"{label} share tokens {sorted(overlap)}"))

    for src, dst in model.relevance:
        for name in (src, dst):
            if name not in seen:
                problems.append(Violation("UNKNOWN_RELEVANCE_NAME", f"relevance pair ({src}, {dst}) mentions unknown state {name!r}"))

    if len(model.decided_states) > len(model.decided_names):
        problems.append(Violation("DECIDED_COUNT", "more decided states than decided names"))

    if model.strict:
        identity = {(c, c) for c in courts}
        for a, b in sorted(jur.hierarchy - jur.binding):
            problems.append(Violation("SD_VIOLATION", f"hierarchy pair ({a}, {b}) missing from binding"))
        for a, b in sorted(jur.binding - jur.hierarchy - identity):
            problems.append(Violation("SD_VIOLATION", f"binding pair ({a}, {b}) is neither hierarchical nor a self-loop"))
        decided = model.decided_states
        undecided = model.undecided_states
        if decided and undecided:
            latest = max(decided, key=lambda s: s.time_rank)
            earliest = min(undecided, key=lambda s: s.time_rank)
            if latest.time_rank >= earliest.time_rank:
                problems.append(
                    Violation(
                        "O_VIOLATION",
                        f"decided state {latest.name!r} (rank {latest.time_rank}) is not strictly before "
                        f"undecided state {earliest.name!r} (rank {earliest.time_rank})",
                    )
                )
    return problems

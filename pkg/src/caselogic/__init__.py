"""caselogic: precedent reasoning over court hierarchies and case timelines."""

from .model import (
    BINARY_OUTCOMES,
    CaseModel,
    CaseState,
    CourtRelation,
    Jurisdiction,
    Outcome,
    TemporalOrder,
    UnknownStateError,
    Violation,
    court_compare,
    temporal_compare,
    transitive_closure,
    validate_jurisdiction,
    validate_model,
)
from .formula import ExpansionContext, Formula, ParseError, parse, to_text
from .checker import EvalSession, satisfies, valid_in_model
from .precedent import (
    CycleError,
    DecisionSet,
    ExplanationTrace,
    PrecedentGraph,
    UndecidedStateError,
    according,
    against,
    best_precedents,
    binding_precedents,
    decide,
    explain,
    forced,
    overrule_before,
    overruled,
    overruling_power,
    per_incuriam,
    potential_overrulers,
    potentially_binding,
    precedent_graph,
    precedents,
    to_dot,
)
from .ingest import FactorCase, ModelBuildError, afortiori_relevant, build_model
from .modelio import (
    ModelFormatError,
    load_cases,
    load_jurisdiction,
    load_model,
    model_to_dict,
    write_model,
)
from .harness import AxiomReport, GenConfig, axiom_suite, brute_incuriam, brute_satisfies, random_model

__version__ = "0.1.0"

"""Seeded random models and formulas, brute-force oracles, axiom soundness suite.

Everything here exists to check the production modules from the outside:
``random_model`` samples the model class (strict by default), the ``brute_*``
evaluators re-derive truth straight from the definitions with no sharing of
code or caches, and :func:`axiom_suite` instantiates every axiom schema of
the logic against a concrete model.

This module deliberately does not import :mod:`caselogic.precedent`:
``brute_incuriam`` is an independent transcription of the per-incuriam
recursion, kept apart so the two implementations can only agree by both
being right.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Optional

from . import formula as fm
from .checker import EvalSession
from .model import (
    BINARY_OUTCOMES,
    CaseModel,
    CaseState,
    Jurisdiction,
    Outcome,
    transitive_closure,
    validate_jurisdiction,
    validate_model,
)

__all__ = [
    "GenConfig",
    "random_model",
    "random_formula",
    "brute_satisfies",
    "brute_incuriam",
    "AxiomCheck",
    "AxiomReport",
    "axiom_suite",
]


@dataclass(frozen=True)
class GenConfig:
    """Knobs for the seeded model generator.

    Identical configurations always yield identical models.  Unless
    ``non_strict`` is set, every generated model passes validation as a
    strict-class model.
    """

    max_courts: int = 4
    max_states: int = 7
    max_decided: int = 5
    max_facts: int = 3
    self_bound_probability: float = 0.5
    relevance_density: float = 0.35
    simultaneity_probability: float = 0.2
    hierarchy_density: float = 0.4
    alias_probability: float = 0.0
    seed: int = 0
    non_strict: bool = False


def random_model(cfg: GenConfig) -> CaseModel:
    """Sample a case-base model; deterministic per configuration."""
    if cfg.max_decided > cfg.max_states:
        raise ValueError("max_decided cannot exceed max_states")
    rng = random.Random(cfg.seed)

    n_courts = rng.randint(1, max(1, cfg.max_courts))
    if cfg.non_strict:
        n_courts = max(2, n_courts)  # keeps a binding violation constructible
    courts = tuple(f"c{i + 1}" for i in range(n_courts))
    base = set()
    for i in range(n_courts):
        for j in range(i + 1, n_courts):
            if rng.random() < cfg.hierarchy_density:
                base.add((courts[i], courts[j]))
    hierarchy = transitive_closure(base)
    binding = set(hierarchy)
    for c in courts:
        if rng.random() < cfg.self_bound_probability:
            binding.add((c, c))

    n_states = rng.randint(1, max(1, cfg.max_states))
    n_decided = rng.randint(0, min(cfg.max_decided, n_states))

    violation: Optional[str] = None
    if cfg.non_strict:
        options = ["sd_extra"]
        if hierarchy:
            options.append("sd_missing")
        if 0 < n_decided < n_states:
            options.append("order")
        violation = rng.choice(options)
        if violation == "sd_extra":
            foreign = [
                (a, b)
                for a in courts
                for b in courts
                if a != b and (a, b) not in hierarchy
            ]
            binding.add(rng.choice(foreign))
        elif violation == "sd_missing":
            binding.discard(rng.choice(sorted(hierarchy)))

    jurisdiction = Jurisdiction(courts=courts, hierarchy=hierarchy, binding=frozenset(binding))

    facts_vocab = [f"f{i + 1}" for i in range(cfg.max_facts)]
    states = []
    rank = 0
    for i in range(n_states):
        if i > 0 and not (rng.random() < cfg.simultaneity_probability):
            rank += 1
        decided = i < n_decided
        if i == n_decided and n_decided > 0:
            rank += 1  # undecided cases start strictly later
        names = [f"n{i + 1}"]
        if rng.random() < cfg.alias_probability:
            names.append(f"a{i + 1}")
        states.append(
            CaseState(
                names=tuple(names),
                court=rng.choice(courts),
                facts=frozenset(f for f in facts_vocab if rng.random() < 0.5),
                decision=rng.choice(BINARY_OUTCOMES) if decided else Outcome.UNDECIDED,
                time_rank=rank,
            )
        )

    if violation == "order":
        target = rng.randrange(n_decided, n_states)
        earliest = min(s.time_rank for s in states[:n_decided])
        states[target] = replace(states[target], time_rank=earliest)

    relevance = tuple(
        (a.name, b.name)
        for a in states
        for b in states
        if a.name != b.name and rng.random() < cfg.relevance_density
    )
    model = CaseModel(
        states=tuple(states),
        jurisdiction=jurisdiction,
        relevance=relevance,
        decided_names=tuple(n for s in states if s.decided for n in s.names),
        strict=not cfg.non_strict,
    )
    if not cfg.non_strict:
        problems = validate_jurisdiction(jurisdiction) + validate_model(model)
        assert not problems, f"generator produced an invalid model: {problems}"
    return model


def random_formula(rng: random.Random, model: CaseModel, max_depth: int = 3) -> fm.Formula:
    """A random core-language formula over the model's vocabulary."""
    tokens = sorted({t for s in model.states for t in s.tokens()})
    courts = model.jurisdiction.courts

    def build(depth: int) -> fm.Formula:
        leafy = depth <= 0 or rng.random() < 0.3
        if leafy:
            kind = rng.randrange(3)
            if kind == 0 and tokens:
                return fm.atom(rng.choice(tokens))
            if kind == 1:
                return fm.dec(rng.choice(list(Outcome)))
            pair = (rng.choice(courts), rng.choice(courts))
            return fm.hrel(*pair) if rng.random() < 0.5 else fm.brel(*pair)
        op = rng.randrange(6)
        if op == 0:
            return fm.not_(build(depth - 1))
        if op == 1:
            return fm.and_(build(depth - 1), build(depth - 1))
        if op == 2:
            return fm.box(build(depth - 1))
        if op == 3:
            return fm.tbox(build(depth - 1))
        if op == 4:
            return fm.rbox(build(depth - 1))
        return fm.and_(fm.not_(build(depth - 1)), build(depth - 1))

    return build(max_depth)


# ---------------------------------------------------------------------------
# brute-force oracles


def brute_satisfies(model: CaseModel, state_name: str, phi: fm.Formula) -> bool:
    """Plain recursive evaluation with no memoization or sharing."""
    state = model.state(state_name)
    kind = phi.kind
    if kind == fm.ATOM:
        return phi.args[0] in state.tokens()
    if kind == fm.DEC:
        return state.decision is phi.args[0]
    if kind == fm.HREL:
        return model.jurisdiction.is_higher(*phi.args)
    if kind == fm.BREL:
        return model.jurisdiction.binds(*phi.args)
    if kind == fm.NOT:
        return not brute_satisfies(model, state_name, phi.args[0])
    if kind == fm.AND:
        return brute_satisfies(model, state_name, phi.args[0]) and brute_satisfies(
            model, state_name, phi.args[1]
        )
    if kind == fm.BOX:
        return all(brute_satisfies(model, s.name, phi.args[0]) for s in model.states)
    if kind == fm.TBOX:
        return all(
            brute_satisfies(model, s.name, phi.args[0])
            for s in model.states
            if state.time_rank <= s.time_rank
        )
    if kind == fm.RBOX:
        return all(
            brute_satisfies(model, s.name, phi.args[0])
            for s in model.relevant_to(state_name)
        )
    raise ValueError(f"cannot evaluate formula kind {kind!r}")


def brute_incuriam(model: CaseModel, state_name: str) -> bool:
    """Unmemoized transcription of the per-incuriam recursion.

    Exponential in the chain depth; meant for models with a handful of
    decided cases, as the independent oracle for the production engine.
    """
    jur = model.jurisdiction

    def binding_precs(x: CaseState) -> list[CaseState]:
        return [
            p
            for p in model.relevant_to(x.name)
            if p.decided and p.time_rank < x.time_rank and jur.binds(p.court, x.court)
        ]

    def overrulers(x: CaseState) -> list[CaseState]:
        out = []
        for y in model.states:
            if not y.decided or y.decision is not x.decision.opposite():
                continue
            if x not in model.relevant_to(y.name) or not x.time_rank < y.time_rank:
                continue
            if jur.is_higher(y.court, x.court) or (
                y.court == x.court and not jur.binds(x.court, x.court)
            ):
                out.append(y)
        return out

    def inc(x: CaseState) -> bool:
        ruled = x.decision
        agains = [p for p in binding_precs(x) if p.decision is ruled.opposite()]
        accords = [p for p in binding_precs(x) if p.decision is ruled]
        for w in agains:
            if inc(w) and not jur.is_higher(w.court, x.court):
                continue
            if not all(inc(t) for t in overrulers(w) if t.time_rank < x.time_rank):
                continue
            ok = True
            for v in accords:
                if inc(v) and not jur.is_higher(v.court, x.court):
                    continue
                if any(not inc(t) for t in overrulers(v) if t.time_rank < x.time_rank):
                    continue
                if (v.time_rank < w.time_rank and v.court == w.court) or jur.is_higher(
                    w.court, v.court
                ):
                    continue
                ok = False
                break
            if ok:
                return True
        return False

    state = model.state(state_name)
    if not state.decided:
        raise ValueError(f"{state_name} is not decided")
    return inc(state)


# ---------------------------------------------------------------------------
# axiom soundness


@dataclass(frozen=True)
class AxiomCheck:
    tag: str
    ok: bool
    witness: Optional[str]  # a state falsifying the instance, when not ok


@dataclass(frozen=True)
class AxiomReport:
    checks: tuple[AxiomCheck, ...]

    @property
    def ok(self) -> bool:
        return all(check.ok for check in self.checks)

    def failures(self) -> tuple[AxiomCheck, ...]:
        return tuple(check for check in self.checks if not check.ok)

    def lines(self) -> list[str]:
        """One OK line per sound schema, one FAIL line per falsified instance."""
        out = []
        seen: list[str] = []
        for check in self.checks:
            if check.tag not in seen:
                seen.append(check.tag)
        for tag in seen:
            group = [c for c in self.checks if c.tag == tag]
            bad = [c for c in group if not c.ok]
            if not bad:
                out.append(f"AXIOM {tag} OK")
            else:
                for check in bad:
                    out.append(f"AXIOM {check.tag} FAIL @state {check.witness}")
        return out


def axiom_suite(model: CaseModel, seed: int = 0, samples: int = 3) -> AxiomReport:
    """Instantiate every axiom schema on the model and check validity.

    Schematic formula slots are filled with ``samples`` seeded random
    formulas; name and court slots range over the model's own vocabulary.
    The two strict-class axioms (binding-matches-hierarchy and
    decided-before-undecided) are always included; on non-strict models they
    are allowed to fail and the report simply says so.
    """
    rng = random.Random(seed)
    phis = [random_formula(rng, model) for _ in range(max(1, samples))]
    psis = [random_formula(rng, model) for _ in range(max(1, samples))]
    names = list(model.names())
    courts = list(model.jurisdiction.courts)
    ctx = fm.ExpansionContext.for_model(model)

    instances: list[tuple[str, fm.Formula]] = []

    def add(tag: str, phi: fm.Formula) -> None:
        instances.append((tag, phi))

    for phi, psi in zip(phis, psis):
        add("K_box", fm.implies(fm.and_(fm.box(phi), fm.box(fm.implies(phi, psi))), fm.box(psi)))
        add("T_box", fm.implies(fm.box(phi), phi))
        add("4_box", fm.implies(fm.box(phi), fm.box(fm.box(phi))))
        add("B_box", fm.implies(phi, fm.box(fm.diamond(phi))))
        add("K_time", fm.implies(fm.and_(fm.tbox(phi), fm.tbox(fm.implies(phi, psi))), fm.tbox(psi)))
        add("T_time", fm.implies(fm.tbox(phi), phi))
        add("4_time", fm.implies(fm.tbox(phi), fm.tbox(fm.tbox(phi))))
        add("MIX_box_time", fm.implies(fm.box(phi), fm.tbox(phi)))
        add("K_rel", fm.implies(fm.and_(fm.rbox(phi), fm.rbox(fm.implies(phi, psi))), fm.rbox(psi)))
        add("MIX_box_rel", fm.implies(fm.box(phi), fm.rbox(phi)))

    add("AtLeastValue", fm.big_or(fm.dec(o) for o in Outcome))
    for o in Outcome:
        for o2 in Outcome:
            if o is not o2:
                add("AtMostValue", fm.implies(fm.dec(o), fm.not_(fm.dec(o2))))

    for n in names:
        for m in names:
            for phi in phis[:1]:
                add(
                    "Total_time",
                    fm.or_(
                        fm.at(n, fm.implies(fm.tbox(phi), fm.at(m, phi))),
                        fm.at(m, fm.implies(fm.tbox(phi), fm.at(n, phi))),
                    ),
                )

    add("AtLeastCourt", fm.big_or(fm.atom(c) for c in courts))
    for a in courts:
        for b in courts:
            if a != b:
                add("AtMostCourt", fm.implies(fm.atom(a), fm.not_(fm.atom(b))))
        add("IrrHierarchy", fm.not_(fm.hrel(a, a)))
    for a in courts:
        for b in courts:
            for c in courts:
                add("TrHierarchy", fm.implies(fm.and_(fm.hrel(a, b), fm.hrel(b, c)), fm.hrel(a, c)))
    for a in courts:
        for b in courts:
            add("GlobHier", fm.implies(fm.hrel(a, b), fm.box(fm.hrel(a, b))))
            add("GlobBind", fm.implies(fm.brel(a, b), fm.box(fm.brel(a, b))))

    for n in names:
        for phi in phis[:2]:
            add("nam1", fm.implies(fm.diamond(fm.and_(fm.atom(n), phi)), fm.at(n, phi)))
    add(
        "nam2",
        fm.iff(fm.not_(fm.dec(Outcome.UNDECIDED)), fm.big_or(fm.atom(n) for n in ctx.decided_names)),
    )

    add(
        "SL",
        fm.big_and(
            fm.and_(
                fm.implies(fm.hrel(a, b), fm.brel(a, b)),
                fm.implies(fm.not_(fm.hrel(a, b)), fm.not_(fm.brel(a, b))),
            )
            for a in courts
            for b in courts
            if a != b
        ),
    )
    add("OL", fm.box(fm.implies(fm.dec(Outcome.UNDECIDED), fm.tbox(fm.dec(Outcome.UNDECIDED)))))

    session = EvalSession(model)
    checks = []
    for tag, phi in instances:
        witness = session.first_failure(phi)
        checks.append(AxiomCheck(tag=tag, ok=witness is None, witness=witness))
    return AxiomReport(checks=tuple(checks))

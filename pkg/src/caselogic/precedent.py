"""Semantic precedent analysis: from supporting cases to forced decisions.

This module answers precedent questions directly on the model, without going
through formula expansion:

* which earlier relevant cases support a case, and in which direction;
* which of those are potentially binding (their court binds the deciding
  court), and which later cases could overrule a decision;
* the two exceptions that strip binding force: a precedent rendered *per
  incuriam* (it defied binding precedent without the authority to) and a
  precedent that was *overruled* by a legitimate later case;
* conflict resolution for a pending case: among the binding precedents that
  survive the exceptions, follow the most recent decision of the highest
  court.

The per-incuriam test is a recursion over the dependency graph of binding
and overruling links rooted at a decided case.  On models satisfying the
common-law conditions that graph is acyclic and the recursion terminates;
on arbitrary models a cycle is reported as a hard error.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass
from typing import Optional, Union

from .model import CaseModel, CaseState, Jurisdiction, Outcome


class UndecidedStateError(ValueError):
    """The operation needs a decided case but was given a pending one."""


class CycleError(RuntimeError):
    """The binding/overruling dependencies form a cycle (non-strict model)."""


@dataclass(frozen=True)
class GraphNode:
    name: str
    court: str
    decision: Outcome
    height: int


@dataclass(frozen=True)
class PrecedentGraph:
    """Dependency graph of binding and overruling links under one decided case.

    ``edges`` holds ``(source, target, kind)`` with kind ``"binding"`` or
    ``"overruling"``; node and edge tuples are sorted by canonical name so
    exports are deterministic.
    """

    root: str
    nodes: tuple[GraphNode, ...]
    edges: tuple[tuple[str, str, str], ...]

    def node_names(self) -> tuple[str, ...]:
        return tuple(node.name for node in self.nodes)

    def height(self, name: str) -> int:
        for node in self.nodes:
            if node.name == name:
                return node.height
        raise KeyError(name)


@dataclass(frozen=True)
class DecisionSet:
    """Outcome set produced by the decision function; empty means undetermined."""

    outcomes: frozenset[Outcome]

    def __str__(self) -> str:
        if not self.outcomes:
            return "undetermined"
        return "{%s}" % ",".join(sorted(o.symbol for o in self.outcomes))

    def __contains__(self, outcome: Outcome) -> bool:
        return outcome in self.outcomes


def overruling_power(jur: Jurisdiction, by_court: str, over_court: str) -> bool:
    """May ``by_court`` overrule a decision made by ``over_court``?

    Yes when it sits strictly higher, or when it is the same court and that
    court is not bound by its own decisions.
    """
    if jur.is_higher(by_court, over_court):
        return True
    return by_court == over_court and not jur.binds(over_court, over_court)


class _Engine:
    """Per-model caches for the recursive exception computations."""

    def __init__(self, model: CaseModel):
        self.model = model
        self.jur = model.jurisdiction
        states = model.states

        relevant_from: dict[str, list[CaseState]] = {s.name: [] for s in states}
        for target in states:
            for source in model.relevant_to(target.name):
                relevant_from[source.name].append(target)

        self.prec: dict[str, tuple[tuple[CaseState, Outcome], ...]] = {}
        self.beta: dict[str, tuple[tuple[CaseState, Outcome], ...]] = {}
        self.omega: dict[str, tuple[CaseState, ...]] = {}
        self.against: dict[str, tuple[CaseState, ...]] = {}
        self.according: dict[str, tuple[CaseState, ...]] = {}
        for s in states:
            pres = tuple(
                (p, p.decision)
                for p in model.relevant_to(s.name)
                if p.decided and p.time_rank < s.time_rank
            )
            self.prec[s.name] = pres
            bound = tuple((p, o) for p, o in pres if self.jur.binds(p.court, s.court))
            self.beta[s.name] = bound
            if s.decided:
                self.omega[s.name] = tuple(
                    later
                    for later in relevant_from[s.name]
                    if later.decided
                    and s.time_rank < later.time_rank
                    and later.decision is s.decision.opposite()
                    and overruling_power(self.jur, later.court, s.court)
                )
                ruling = s.decision
                self.against[s.name] = tuple(p for p, o in bound if o is ruling.opposite())
                self.according[s.name] = tuple(p for p, o in bound if o is ruling)
            else:
                self.omega[s.name] = ()
                self.against[s.name] = ()
                self.according[s.name] = ()

        self._incuriam_memo: dict[str, bool] = {}
        self._incuriam_stack: set[str] = set()
        self._height_memo: dict[str, int] = {}
        self._height_stack: set[str] = set()

    # -- helpers -----------------------------------------------------------

    def below(self, a: CaseState, b: CaseState) -> bool:
        """Is ``a``'s court strictly below ``b``'s?"""
        return self.jur.is_higher(b.court, a.court)

    def successors(self, state: CaseState) -> tuple[CaseState, ...]:
        seen = set()
        out = []
        for p, _ in self.beta[state.name]:
            if p.name not in seen:
                seen.add(p.name)
                out.append(p)
        for o in self.omega[state.name]:
            if o.name not in seen:
                seen.add(o.name)
                out.append(o)
        return tuple(out)

    def overrule_before(self, state: CaseState, limit: CaseState) -> tuple[CaseState, ...]:
        return tuple(t for t in self.omega[state.name] if t.time_rank < limit.time_rank)

    # -- per incuriam --------------------------------------------------------

    def incuriam(self, state: CaseState) -> bool:
        if not state.decided:
            raise UndecidedStateError(f"{state.name} is not decided, so it cannot be per incuriam")
        name = state.name
        memo = self._incuriam_memo
        if name in memo:
            return memo[name]
        if name in self._incuriam_stack:
            raise CycleError(f"binding/overruling dependencies cycle through {name}")
        self._incuriam_stack.add(name)
        try:
            result = self._incuriam_body(state)
        finally:
            self._incuriam_stack.discard(name)
        memo[name] = result
        return result

    def _incuriam_body(self, state: CaseState) -> bool:
        # A witness the state ruled against must still have been binding at
        # the time: not disregardable (per incuriam only excuses defiance of
        # a non-higher court) and not already legitimately overruled.  Every
        # precedent the state *followed* instead must have been ignorable for
        # one of the three reasons checked in _followed_excused.
        for witness in self.against[state.name]:
            if self.incuriam(witness) and not self.below(state, witness):
                continue
            if not all(self.incuriam(t) for t in self.overrule_before(witness, state)):
                continue
            if all(
                self._followed_excused(state, followed, witness)
                for followed in self.according[state.name]
            ):
                return True
        return False

    def _followed_excused(self, state: CaseState, followed: CaseState, witness: CaseState) -> bool:
        if self.incuriam(followed) and not self.below(state, followed):
            return True
        if any(not self.incuriam(t) for t in self.overrule_before(followed, state)):
            return True
        if followed.time_rank < witness.time_rank and followed.court == witness.court:
            return True
        return self.below(followed, witness)

    def overruled(self, state: CaseState) -> bool:
        return any(not self.incuriam(o) for o in self.omega[state.name])

    # -- graph ---------------------------------------------------------------

    def height(self, state: CaseState) -> int:
        name = state.name
        memo = self._height_memo
        if name in memo:
            return memo[name]
        if name in self._height_stack:
            raise CycleError(f"binding/overruling dependencies cycle through {name}")
        self._height_stack.add(name)
        try:
            succ = self.successors(state)
            value = 1 + max(self.height(t) for t in succ) if succ else 0
        finally:
            self._height_stack.discard(name)
        memo[name] = value
        return value

    def graph(self, root: CaseState) -> PrecedentGraph:
        if not root.decided:
            raise UndecidedStateError(f"{root.name} is not decided, so it roots no precedent graph")
        reached: dict[str, CaseState] = {root.name: root}
        edges: set[tuple[str, str, str]] = set()
        queue = [root]
        while queue:
            current = queue.pop()
            assert current.decided, "only decided cases can enter a precedent graph"
            for p, _ in self.beta[current.name]:
                edges.add((current.name, p.name, "binding"))
                if p.name not in reached:
                    reached[p.name] = p
                    queue.append(p)
            for o in self.omega[current.name]:
                edges.add((current.name, o.name, "overruling"))
                if o.name not in reached:
                    reached[o.name] = o
                    queue.append(o)
        nodes = tuple(
            GraphNode(s.name, s.court, s.decision, self.height(s))
            for s in sorted(reached.values(), key=lambda s: s.name)
        )
        return PrecedentGraph(root=root.name, nodes=nodes, edges=tuple(sorted(edges)))

    # -- decision ------------------------------------------------------------

    def binding_without_exception(self, state: CaseState) -> tuple[CaseState, ...]:
        survivors = []
        for p, _ in self.beta[state.name]:
            if self.incuriam(p) and p.court == state.court:
                continue
            if self.overruled(p):
                continue
            survivors.append(p)
        return tuple(survivors)

    def best(self, state: CaseState) -> tuple[CaseState, ...]:
        pool = self.binding_without_exception(state)
        return tuple(
            p
            for p in pool
            if not any(
                self.below(p, q) or (p.court == q.court and p.time_rank < q.time_rank)
                for q in pool
            )
        )

    def decide(self, state: CaseState) -> DecisionSet:
        if state.decided:
            return DecisionSet(frozenset({state.decision}))
        return DecisionSet(frozenset(p.decision for p in self.best(state)))


_ENGINES: "weakref.WeakKeyDictionary[CaseModel, _Engine]" = weakref.WeakKeyDictionary()


def _engine(model: CaseModel) -> _Engine:
    engine = _ENGINES.get(model)
    if engine is None:
        engine = _Engine(model)
        _ENGINES[model] = engine
    return engine


# ---------------------------------------------------------------------------
# public operations


def precedents(model: CaseModel, state_name: str) -> tuple[tuple[CaseState, Outcome], ...]:
    """Relevant, strictly earlier, decided cases with their directions."""
    return _engine(model).prec[model.state(state_name).name]


def potentially_binding(model: CaseModel, state_name: str) -> tuple[tuple[CaseState, Outcome], ...]:
    """Precedents whose court binds the court deciding this case."""
    return _engine(model).beta[model.state(state_name).name]


def potential_overrulers(model: CaseModel, state_name: str) -> tuple[CaseState, ...]:
    """Later oppositely-decided relevant cases with power to overrule this one."""
    return _engine(model).omega[model.state(state_name).name]


def overrule_before(model: CaseModel, state_name: str, limit_name: str) -> tuple[CaseState, ...]:
    """Potential overrulers decided strictly before the limit case."""
    engine = _engine(model)
    return engine.overrule_before(model.state(state_name), model.state(limit_name))


def against(model: CaseModel, state_name: str) -> tuple[CaseState, ...]:
    """Potentially binding precedents this decided case ruled against."""
    return _engine(model).against[model.state(state_name).name]


def according(model: CaseModel, state_name: str) -> tuple[CaseState, ...]:
    """Potentially binding precedents this decided case ruled along with."""
    return _engine(model).according[model.state(state_name).name]


def precedent_graph(model: CaseModel, state_name: str) -> PrecedentGraph:
    """Closure of binding/overruling dependencies under the named decided case."""
    return _engine(model).graph(model.state(state_name))


def per_incuriam(model: CaseModel, state_name: str) -> bool:
    """Was the named decided case rendered in defiance of binding precedent?"""
    return _engine(model).incuriam(model.state(state_name))


def overruled(model: CaseModel, state_name: str) -> bool:
    """Has a legitimate (non-per-incuriam) potential overruler appeared?"""
    return _engine(model).overruled(model.state(state_name))


def binding_precedents(model: CaseModel, state_name: str) -> tuple[CaseState, ...]:
    """Potentially binding precedents that survive both exceptions."""
    return _engine(model).binding_without_exception(model.state(state_name))


def best_precedents(model: CaseModel, state_name: str) -> tuple[CaseState, ...]:
    """Surviving precedents maximal under "higher court first, then later"."""
    return _engine(model).best(model.state(state_name))


def decide(model: CaseModel, state_name: str) -> DecisionSet:
    """Outcome set for the named case: its own ruling, or the best precedents'."""
    return _engine(model).decide(model.state(state_name))


def forced(model: CaseModel, state_name: str, outcome: Union[Outcome, str]) -> bool:
    """Is the decision forced to exactly the given outcome?"""
    if not isinstance(outcome, Outcome):
        outcome = Outcome(outcome)
    return decide(model, state_name).outcomes == {outcome}


# ---------------------------------------------------------------------------
# explanation and export


@dataclass(frozen=True)
class PrecedentReview:
    """Status chain of one precedent while classifying a case."""

    name: str
    court: str
    outcome: Outcome
    potentially_binding: bool
    obstacle: Optional[str]
    exception: Optional[str]
    best: bool
    dominated_by: Optional[str]

    def chain(self) -> str:
        parts = [f"{self.name} ({self.outcome.symbol} @ {self.court}): supporting"]
        if not self.potentially_binding:
            parts.append(f"not binding ({self.obstacle})")
            return " -> ".join(parts)
        parts.append("potentially binding")
        if self.exception is not None:
            parts.append(self.exception)
            return " -> ".join(parts)
        parts.append("no exception")
        parts.append("best" if self.best else f"dominated by {self.dominated_by}")
        return " -> ".join(parts)


@dataclass(frozen=True)
class ExplanationTrace:
    state: str
    decision: DecisionSet
    reviews: tuple[PrecedentReview, ...]

    def format(self) -> str:
        lines = [review.chain() for review in self.reviews]
        lines.append(f"decision for {self.state}: {self.decision}")
        return "\n".join(lines)


def explain(model: CaseModel, state_name: str) -> ExplanationTrace:
    """Per-precedent status chains leading to the decision for a case."""
    engine = _engine(model)
    state = model.state(state_name)
    surviving = set(engine.binding_without_exception(state))
    best = set(engine.best(state))
    reviews = []
    for p, o in engine.prec[state.name]:
        if not engine.jur.binds(p.court, state.court):
            reviews.append(
                PrecedentReview(
                    p.name, p.court, o, False,
                    f"court {p.court} does not bind {state.court}",
                    None, False, None,
                )
            )
            continue
        exception = None
        if p not in surviving:
            if engine.overruled(p):
                culprit = next(t.name for t in engine.omega[p.name] if not engine.incuriam(t))
                exception = f"overruled by {culprit}"
            else:
                exception = "per incuriam at the deciding court"
        dominated_by = None
        is_best = p in best
        if exception is None and not is_best:
            for q in surviving:
                if engine.below(p, q):
                    dominated_by = f"{q.name} (higher court)"
                    break
                if p.court == q.court and p.time_rank < q.time_rank:
                    dominated_by = f"{q.name} (same court, later)"
                    break
        reviews.append(
            PrecedentReview(p.name, p.court, o, True, None, exception, is_best, dominated_by)
        )
    return ExplanationTrace(state.name, engine.decide(state), tuple(reviews))


def to_dot(graph: PrecedentGraph) -> str:
    """Render a precedent graph in DOT, deterministically ordered."""
    lines = ["digraph precedents {"]
    for node in graph.nodes:
        label = f"{node.name}/{node.court}/{node.decision.symbol}/{node.height}"
        lines.append(f'  "{node.name}" [label="{label}"];')
    for source, target, kind in graph.edges:
        lines.append(f'  "{source}" -> "{target}" [kind={kind}];')
    lines.append("}")
    return "\n".join(lines) + "\n"

"""Formula evaluation against a case-base model.

Truth is defined clause by clause: an atomic token holds where the state
contains it; ``t(o)`` holds where the decision function returns ``o``;
``H``/``B`` are state-independent lookups in the jurisdiction; ``[]``
quantifies over all states, ``[T]`` over the simultaneous-or-later states,
and ``[R]`` over the states relevant for the current one.

An :class:`EvalSession` computes, for every formula node it visits, the full
truth bitmask over the model's states and memoizes it.  Heavily shared
formulas (the per-incuriam family in particular) therefore cost one pass per
distinct node rather than one per occurrence.  Sessions are single-threaded;
evaluating the same immutable model from several threads just takes one
session per thread.
"""

from __future__ import annotations

from typing import Iterable, Optional

from .formula import AND, ATOM, BOX, BREL, DEC, HREL, NOT, RBOX, TBOX, Formula, subformulas
from .model import CaseModel, Outcome

# Evaluation order per root formula, cached across sessions and models: the
# shared-DAG formulas are expensive to traverse, and their node order never
# changes once interned.
_TOPO_CACHE: dict[int, tuple[Formula, ...]] = {}


def _topo(root: Formula) -> tuple[Formula, ...]:
    order = _TOPO_CACHE.get(root.uid)
    if order is None:
        order = tuple(subformulas(root))
        _TOPO_CACHE[root.uid] = order
    return order


class EvalSession:
    """Reusable evaluator for one validated model.

    ``unknown_tokens`` collects atomic tokens that named nothing in the
    model; such atoms simply evaluate to false, but callers may want to warn.
    """

    def __init__(self, model: CaseModel):
        self.model = model
        states = model.states
        self._count = len(states)
        self._full = (1 << self._count) - 1
        self._index = {s.name: i for i, s in enumerate(states)}

        token_masks: dict[str, int] = {}
        for i, state in enumerate(states):
            for token in state.tokens():
                token_masks[token] = token_masks.get(token, 0) | (1 << i)
        self._token_masks = token_masks
        self._courts = set(model.jurisdiction.courts)

        self._dec_masks = {o: 0 for o in Outcome}
        for i, state in enumerate(states):
            self._dec_masks[state.decision] |= 1 << i

        by_rank: dict[int, int] = {}
        for i, state in enumerate(states):
            by_rank[state.time_rank] = by_rank.get(state.time_rank, 0) | (1 << i)
        # group masks in descending rank order, for the temporal modality
        self._rank_masks_desc = [by_rank[r] for r in sorted(by_rank, reverse=True)]

        self._relevance_masks = []
        for state in states:
            mask = 0
            for source in model.relevant_to(state.name):
                mask |= 1 << self._index[source.name]
            self._relevance_masks.append(mask)

        self._memo: dict[int, int] = {}
        self.unknown_tokens: set[str] = set()

    # -- queries ----------------------------------------------------------

    def holds(self, phi: Formula, state_name: str) -> bool:
        """Does ``phi`` hold at the named state?"""
        index = self._index.get(state_name)
        if index is None:
            index = self._index[self.model.state(state_name).name]
        return bool((self.mask(phi) >> index) & 1)

    def holds_everywhere(self, phi: Formula) -> bool:
        return self.mask(phi) == self._full

    def states_satisfying(self, phi: Formula) -> tuple[str, ...]:
        mask = self.mask(phi)
        return tuple(s.name for i, s in enumerate(self.model.states) if (mask >> i) & 1)

    def first_failure(self, phi: Formula) -> Optional[str]:
        """Canonical name of some state falsifying ``phi``, or ``None``."""
        mask = self.mask(phi)
        for i, state in enumerate(self.model.states):
            if not (mask >> i) & 1:
                return state.name
        return None

    # -- evaluation -------------------------------------------------------

    def mask(self, phi: Formula) -> int:
        """Truth bitmask of ``phi``: bit ``i`` is set iff it holds at state ``i``.

        One bottom-up pass over the shared DAG in interning order; already
        memoized nodes (from earlier queries on this session) are skipped, so
        overlapping formulas only pay for their new parts.
        """
        memo = self._memo
        cached = memo.get(phi.uid)
        if cached is not None:
            return cached
        full = self._full
        token_masks = self._token_masks
        dec_masks = self._dec_masks
        rank_masks = self._rank_masks_desc
        relevance_masks = self._relevance_masks
        hierarchy = self.model.jurisdiction.hierarchy
        binding = self.model.jurisdiction.binding
        for node in _topo(phi):
            uid = node.uid
            if uid in memo:
                continue
            kind = node.kind
            args = node.args
            if kind is AND:
                value = memo[args[0].uid] & memo[args[1].uid]
            elif kind is NOT:
                value = full ^ memo[args[0].uid]
            elif kind is ATOM:
                token = args[0]
                value = token_masks.get(token)
                if value is None:
                    if token not in self._courts:
                        self.unknown_tokens.add(token)
                    value = 0
            elif kind is BOX:
                value = full if memo[args[0].uid] == full else 0
            elif kind is DEC:
                value = dec_masks[args[0]]
            elif kind is TBOX:
                child = memo[args[0].uid]
                value = 0
                for group in rank_masks:
                    if child & group == group:
                        value |= group
                    else:
                        break
            elif kind is RBOX:
                child = memo[args[0].uid]
                value = 0
                for i, required in enumerate(relevance_masks):
                    if child & required == required:
                        value |= 1 << i
            elif kind is HREL:
                value = full if args in hierarchy else 0
                self._note_courts(*args)
            elif kind is BREL:
                value = full if args in binding else 0
                self._note_courts(*args)
            else:
                raise ValueError(f"cannot evaluate formula kind {kind!r}")
            memo[uid] = value
        return memo[phi.uid]

    def _note_courts(self, *courts: str) -> None:
        for court in courts:
            if court not in self._courts:
                self.unknown_tokens.add(court)


def satisfies(model: CaseModel, state_name: str, phi: Formula) -> bool:
    """One-shot satisfaction check; loops should reuse an :class:`EvalSession`."""
    return EvalSession(model).holds(phi, state_name)


def valid_in_model(model: CaseModel, phi: Formula) -> bool:
    """True iff ``phi`` holds at every state of the model."""
    return EvalSession(model).holds_everywhere(phi)

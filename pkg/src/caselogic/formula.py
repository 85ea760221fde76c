"""Modal formulas: hash-consed AST, derived-operator expansion, parser, printer.

The core language has nine constructors: atomic tokens, decision atoms
``t(o)``, the court relations ``H``/``B``, negation, conjunction, and the
three universal modalities (global ``[]``, temporal ``[T]``, relevance
``[R]``).  Everything else, from implication up to the per-incuriam and
forced-decision macros, is expanded into that core at construction time.

Formulas are interned: structurally equal formulas are the same object, so
equality is identity and shared subterms are stored once.  That sharing is
what keeps the recursive per-incuriam family polynomial; rendered as trees
those formulas would be exponential.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Optional, Union

from .model import BINARY_OUTCOMES, Outcome

__all__ = [
    "Formula",
    "ExpansionContext",
    "ParseError",
    "ExpansionSizeError",
    "DEFAULT_INCURIAM_CAP",
    "atom",
    "dec",
    "hrel",
    "brel",
    "not_",
    "and_",
    "box",
    "tbox",
    "rbox",
    "or_",
    "implies",
    "iff",
    "diamond",
    "tdiamond",
    "rdiamond",
    "big_or",
    "big_and",
    "falsum",
    "verum",
    "at",
    "fhat",
    "phat",
    "lower",
    "higher",
    "samecourt",
    "supporting",
    "pbinding",
    "pwover",
    "poverruling",
    "against",
    "according",
    "fhat_any",
    "phat_any",
    "against_any",
    "poverruling_any",
    "according_all",
    "poverruling_all",
    "iota",
    "incuriam",
    "overruled",
    "binding",
    "bestbinding",
    "cl",
    "parse",
    "to_text",
]

ATOM = "atom"
DEC = "dec"
HREL = "hrel"
BREL = "brel"
NOT = "not"
AND = "and"
BOX = "box"
TBOX = "tbox"
RBOX = "rbox"

CORE_KINDS = (ATOM, DEC, HREL, BREL, NOT, AND, BOX, TBOX, RBOX)


class Formula:
    """An interned formula node.  Compare with ``is`` or ``==`` (same thing)."""

    __slots__ = ("kind", "args", "uid")

    kind: str
    args: tuple
    uid: int

    def __repr__(self) -> str:
        return f"<Formula {to_text(self)}>"

    def __str__(self) -> str:
        return to_text(self)


_TABLE: dict = {}
_UIDS = itertools.count()


def _make(kind: str, args: tuple) -> Formula:
    # Interning relies on the GIL: dict get/setdefault are atomic, and a
    # racing duplicate loses the setdefault and is discarded.  A parent is
    # always numbered after its (already interned) children, so uid order
    # stays topological.
    key = (kind, args)
    node = _TABLE.get(key)
    if node is not None:
        return node
    node = Formula.__new__(Formula)
    node.kind = kind
    node.args = args
    node.uid = next(_UIDS)
    return _TABLE.setdefault(key, node)


def subformulas(root: Formula) -> list[Formula]:
    """All distinct subformulas of ``root``, children before parents."""
    seen: set[int] = set()
    out: list[Formula] = []
    stack = [root]
    while stack:
        node = stack.pop()
        if node.uid in seen:
            continue
        seen.add(node.uid)
        out.append(node)
        for arg in node.args:
            if isinstance(arg, Formula):
                stack.append(arg)
    out.sort(key=lambda n: n.uid)  # interning gives children smaller uids
    return out


# ---------------------------------------------------------------------------
# core constructors


def atom(token: str) -> Formula:
    return _make(ATOM, (token,))


def dec(value: Union[Outcome, str]) -> Formula:
    if not isinstance(value, Outcome):
        value = Outcome(value)
    return _make(DEC, (value,))


def hrel(higher_court: str, lower_court: str) -> Formula:
    return _make(HREL, (higher_court, lower_court))


def brel(binder: str, bound: str) -> Formula:
    return _make(BREL, (binder, bound))


def not_(phi: Formula) -> Formula:
    return _make(NOT, (phi,))


def and_(left: Formula, right: Formula) -> Formula:
    return _make(AND, (left, right))


def box(phi: Formula) -> Formula:
    return _make(BOX, (phi,))


def tbox(phi: Formula) -> Formula:
    return _make(TBOX, (phi,))


def rbox(phi: Formula) -> Formula:
    return _make(RBOX, (phi,))


# ---------------------------------------------------------------------------
# propositional and modal shorthands


def or_(left: Formula, right: Formula) -> Formula:
    return not_(and_(not_(left), not_(right)))


def implies(left: Formula, right: Formula) -> Formula:
    return not_(and_(left, not_(right)))


def iff(left: Formula, right: Formula) -> Formula:
    return and_(implies(left, right), implies(right, left))


def diamond(phi: Formula) -> Formula:
    return not_(box(not_(phi)))


def tdiamond(phi: Formula) -> Formula:
    return not_(tbox(not_(phi)))


def rdiamond(phi: Formula) -> Formula:
    return not_(rbox(not_(phi)))


def falsum() -> Formula:
    q = dec(Outcome.UNDECIDED)
    return and_(q, not_(q))


def verum() -> Formula:
    return not_(falsum())


def big_or(items: Iterable[Formula]) -> Formula:
    """Left-folded disjunction; empty input yields a contradiction."""
    result: Optional[Formula] = None
    for item in items:
        result = item if result is None else or_(result, item)
    return falsum() if result is None else result


def big_and(items: Iterable[Formula]) -> Formula:
    """Left-folded conjunction; empty input yields a tautology."""
    result: Optional[Formula] = None
    for item in items:
        result = item if result is None else and_(result, item)
    return verum() if result is None else result


# ---------------------------------------------------------------------------
# named-state and hierarchy operators

_NameLike = str


def at(name: _NameLike, phi: Formula) -> Formula:
    """Truth at the uniquely named state: box(name -> phi)."""
    return box(implies(atom(name), phi))


def fhat(name: _NameLike, phi: Formula) -> Formula:
    """Existential strict future for the state named ``name``.

    Holds at the named state exactly when some strictly later state
    satisfies ``phi``; the name pins down the evaluation point so the
    strictness of "later" is expressible with only the reflexive temporal
    modality.
    """
    n = atom(name)
    return and_(n, tdiamond(and_(not_(tdiamond(n)), phi)))


def phat(name: _NameLike, witness: _NameLike, phi: Formula) -> Formula:
    """Existential strict past: some earlier state named ``witness`` satisfies ``phi``."""
    return and_(atom(name), diamond(and_(phi, fhat(witness, atom(name)))))


@dataclass(frozen=True)
class ExpansionContext:
    """Finite vocabulary the quantified macros expand over.

    Expansions iterate ``decided_names`` and ``courts`` in the given order,
    so identical contexts always produce identical formulas.
    """

    decided_names: tuple[str, ...]
    courts: tuple[str, ...]

    @classmethod
    def for_model(cls, model) -> "ExpansionContext":
        return cls(tuple(model.decided_names), tuple(model.jurisdiction.courts))


def lower(phi: Formula, ctx: ExpansionContext) -> Formula:
    """Some state at a strictly lower court satisfies ``phi``."""
    return big_or(
        and_(and_(atom(c), hrel(c, c2)), diamond(and_(atom(c2), phi)))
        for c in ctx.courts
        for c2 in ctx.courts
    )


def higher(phi: Formula, ctx: ExpansionContext) -> Formula:
    """Some state at a strictly higher court satisfies ``phi``."""
    return big_or(
        and_(and_(atom(c), hrel(c2, c)), diamond(and_(atom(c2), phi)))
        for c in ctx.courts
        for c2 in ctx.courts
    )


def samecourt(phi: Formula, ctx: ExpansionContext) -> Formula:
    """Some state at the same court (possibly this one) satisfies ``phi``."""
    return big_or(and_(atom(c), diamond(and_(atom(c), phi))) for c in ctx.courts)


# ---------------------------------------------------------------------------
# precedent macros


def supporting(name: _NameLike, witness: _NameLike, phi: Formula) -> Formula:
    """A relevant, strictly earlier state named ``witness`` satisfies ``phi``."""
    return and_(phat(name, witness, phi), rdiamond(and_(phi, atom(witness))))


def pbinding(name: _NameLike, witness: _NameLike, phi: Formula, ctx: ExpansionContext) -> Formula:
    """A supporting state whose court binds the current state's court.

    The current court is pinned by the ``c2`` conjunct next to ``B(c, c2)``;
    without it the binding check would float free of the evaluation state.
    """
    return big_or(
        and_(and_(atom(c2), brel(c, c2)), supporting(name, witness, and_(atom(c), phi)))
        for c in ctx.courts
        for c2 in ctx.courts
    )


def pwover(court: str, ctx: ExpansionContext) -> Formula:
    """The current court may overrule decisions made by ``court``."""
    above = big_or(
        and_(atom(c2), hrel(c2, court)) for c2 in ctx.courts if c2 != court
    )
    return or_(above, and_(atom(court), not_(brel(court, court))))


def poverruling(name: _NameLike, witness: _NameLike, phi: Formula, ctx: ExpansionContext) -> Formula:
    """A later, oppositely decided, overruling-capable state named ``witness``."""
    return big_or(
        and_(
            and_(atom(name), atom(c)),
            diamond(
                and_(
                    and_(and_(phi, dec(o.opposite())), pwover(c, ctx)),
                    supporting(witness, name, dec(o)),
                )
            ),
        )
        for o in BINARY_OUTCOMES
        for c in ctx.courts
    )


def against(name: _NameLike, witness: _NameLike, phi: Formula, ctx: ExpansionContext) -> Formula:
    """The current state ruled against a potentially binding ``witness`` state."""
    return big_or(
        and_(dec(o), pbinding(name, witness, and_(phi, dec(o.opposite())), ctx))
        for o in BINARY_OUTCOMES
    )


def according(name: _NameLike, witness: _NameLike, phi: Formula, ctx: ExpansionContext) -> Formula:
    """The current state ruled along with a potentially binding ``witness`` state."""
    return big_or(
        and_(dec(o), pbinding(name, witness, and_(phi, dec(o)), ctx))
        for o in BINARY_OUTCOMES
    )


# ---------------------------------------------------------------------------
# quantified forms: close over the decided names of the context


def fhat_any(phi: Formula, ctx: ExpansionContext) -> Formula:
    return big_or(and_(atom(n), fhat(n, phi)) for n in ctx.decided_names)


def phat_any(phi: Formula, ctx: ExpansionContext) -> Formula:
    return big_or(
        and_(atom(n), phat(n, m, phi))
        for n in ctx.decided_names
        for m in ctx.decided_names
    )


def against_any(phi: Formula, ctx: ExpansionContext) -> Formula:
    return big_or(
        and_(atom(n), against(n, m, phi, ctx))
        for n in ctx.decided_names
        for m in ctx.decided_names
    )


def poverruling_any(phi: Formula, ctx: ExpansionContext) -> Formula:
    return big_or(
        and_(atom(n), poverruling(n, m, phi, ctx))
        for n in ctx.decided_names
        for m in ctx.decided_names
    )


def according_all(phi: Formula, ctx: ExpansionContext) -> Formula:
    """Every potentially binding state ruled along with satisfies ``phi``."""
    return big_or(
        and_(
            atom(n),
            big_and(not_(according(n, m, not_(phi), ctx)) for m in ctx.decided_names),
        )
        for n in ctx.decided_names
    )


def poverruling_all(phi: Formula, ctx: ExpansionContext) -> Formula:
    """Every potential overruler of the current state satisfies ``phi``."""
    return big_or(
        and_(
            atom(n),
            big_and(not_(poverruling(n, m, not_(phi), ctx)) for m in ctx.decided_names),
        )
        for n in ctx.decided_names
    )


# ---------------------------------------------------------------------------
# the per-incuriam family


class ExpansionSizeError(ValueError):
    """Expansion would exceed the configured size cap."""


DEFAULT_INCURIAM_CAP = 6

_iota_cache: dict = {}
_incuriam_cache: dict = {}


def iota(level: int, ctx: ExpansionContext) -> Formula:
    """Level-``level`` approximation of the per-incuriam condition.

    Level 1 only checks that the state ruled against some binding precedent
    while every precedent it followed was lower-or-earlier than that one.
    Each further level re-examines the witnesses one step deeper: whether
    they were themselves rendered per incuriam, and whether legitimate
    overrulings had already stripped them of binding force.
    """
    if level < 1:
        raise ValueError("iota levels start at 1")
    key = (level, ctx)
    cached = _iota_cache.get(key)
    if cached is not None:
        return cached
    names = ctx.decided_names
    if level == 1:
        result = big_or(
            and_(
                against_any(atom(m), ctx),
                according_all(
                    or_(
                        and_(fhat_any(atom(m), ctx), samecourt(atom(m), ctx)),
                        higher(atom(m), ctx),
                    ),
                    ctx,
                ),
            )
            for m in names
        )
    else:
        prev = iota(level - 1, ctx)
        disjuncts = []
        for n in names:
            for m in names:
                went_against = against_any(
                    and_(
                        and_(atom(m), or_(not_(prev), lower(atom(n), ctx))),
                        poverruling_all(implies(fhat_any(atom(n), ctx), prev), ctx),
                    ),
                    ctx,
                )
                followed_ok = according_all(
                    or_(
                        or_(
                            # the followed precedent is itself per incuriam and
                            # not above the current state; the anchor is the
                            # current state's name, matching the semantic rule
                            and_(prev, not_(lower(atom(n), ctx))),
                            poverruling_any(and_(fhat_any(atom(n), ctx), not_(prev)), ctx),
                        ),
                        or_(
                            and_(fhat_any(atom(m), ctx), samecourt(atom(m), ctx)),
                            higher(atom(m), ctx),
                        ),
                    ),
                    ctx,
                )
                disjuncts.append(and_(atom(n), and_(went_against, followed_ok)))
        result = big_or(disjuncts)
    _iota_cache[key] = result
    return result


def _check_cap(ctx: ExpansionContext, cap: int) -> None:
    if len(ctx.decided_names) > cap:
        raise ExpansionSizeError(
            f"{len(ctx.decided_names)} decided names exceed the expansion cap of {cap}; "
            "use the semantic engine for models this large"
        )


def incuriam(ctx: ExpansionContext, cap: int = DEFAULT_INCURIAM_CAP) -> Formula:
    """The state was rendered per incuriam: it defied binding precedent without authority."""
    _check_cap(ctx, cap)
    cached = _incuriam_cache.get(ctx)
    if cached is not None:
        return cached
    total = len(ctx.decided_names)
    result = big_or(
        big_and(iota(j, ctx) for j in range(k, total + 1)) for k in range(1, total + 1)
    )
    _incuriam_cache[ctx] = result
    return result


def overruled(ctx: ExpansionContext, cap: int = DEFAULT_INCURIAM_CAP) -> Formula:
    """Some potential overruler of the current state is not per incuriam."""
    return poverruling_any(not_(incuriam(ctx, cap)), ctx)


def binding(name: _NameLike, phi: Formula, ctx: ExpansionContext, cap: int = DEFAULT_INCURIAM_CAP) -> Formula:
    """A potentially binding precedent survives both exceptions and satisfies ``phi``."""
    exceptions = and_(
        not_(overruled(ctx, cap)),
        not_(and_(incuriam(ctx, cap), samecourt(atom(name), ctx))),
    )
    return big_or(
        pbinding(name, m, and_(phi, exceptions), ctx) for m in ctx.decided_names
    )


def bestbinding(name: _NameLike, phi: Formula, ctx: ExpansionContext, cap: int = DEFAULT_INCURIAM_CAP) -> Formula:
    """Some binding precedent maximal under "higher court, then later" satisfies ``phi``."""
    return big_or(
        and_(
            binding(name, and_(atom(m), phi), ctx, cap),
            not_(
                binding(
                    name,
                    or_(
                        lower(atom(m), ctx),
                        and_(samecourt(atom(m), ctx), phat_any(atom(m), ctx)),
                    ),
                    ctx,
                    cap,
                )
            ),
        )
        for m in ctx.decided_names
    )


def cl(name: _NameLike, outcome: Union[Outcome, str], ctx: ExpansionContext, cap: int = DEFAULT_INCURIAM_CAP) -> Formula:
    """The decision of the named state is forced to ``outcome``."""
    if not isinstance(outcome, Outcome):
        outcome = Outcome(outcome)
    if not outcome.decided:
        raise ValueError("a forced decision must be 0 or 1")
    return and_(
        bestbinding(name, dec(outcome), ctx, cap),
        not_(bestbinding(name, dec(outcome.opposite()), ctx, cap)),
    )


# ---------------------------------------------------------------------------
# printer

_PREFIX_TOKEN = {NOT: "~", BOX: "[] ", TBOX: "[T] ", RBOX: "[R] "}


def to_text(phi: Formula) -> str:
    """Render the tree form in the concrete syntax.

    The output reparses to the identical node.  Beware of rendering heavily
    shared formulas such as the per-incuriam family: their tree form is
    astronomically larger than the shared representation.
    """
    kind = phi.kind
    if kind == ATOM:
        return phi.args[0]
    if kind == DEC:
        return f"t({phi.args[0].symbol})"
    if kind == HREL:
        return f"H({phi.args[0]},{phi.args[1]})"
    if kind == BREL:
        return f"B({phi.args[0]},{phi.args[1]})"
    if kind in _PREFIX_TOKEN:
        child = phi.args[0]
        body = to_text(child)
        if child.kind == AND:
            body = f"({body})"
        return _PREFIX_TOKEN[kind] + body
    if kind == AND:
        left, right = phi.args
        left_text = to_text(left)
        right_text = to_text(right)
        if right.kind == AND:  # conjunction prints left-associated
            right_text = f"({right_text})"
        return f"{left_text} & {right_text}"
    raise ValueError(f"unprintable formula kind {kind!r}")


# ---------------------------------------------------------------------------
# parser

MACRO_NAMES = frozenset(
    {
        "Fhat",
        "Phat",
        "Lower",
        "Higher",
        "SameCourt",
        "Supporting",
        "PBinding",
        "PwOver",
        "POverruling",
        "Against",
        "According",
        "Incuriam",
        "Overruled",
        "Binding",
        "BestBinding",
        "Cl",
    }
)

_NEEDS_CONTEXT = frozenset(
    {
        "Lower",
        "Higher",
        "SameCourt",
        "PBinding",
        "PwOver",
        "POverruling",
        "Against",
        "According",
        "Incuriam",
        "Overruled",
        "Binding",
        "BestBinding",
        "Cl",
    }
)


class ParseError(ValueError):
    """Syntax error in the concrete formula syntax, with a character position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


_TOKEN_RE = re.compile(
    r"""(?P<ws>\s+)
      | (?P<box>\[\])
      | (?P<tbox>\[T\])
      | (?P<rbox>\[R\])
      | (?P<dia><>)
      | (?P<tdia><T>)
      | (?P<rdia><R>)
      | (?P<arrow>->)
      | (?P<ident>[A-Za-z_][A-Za-z0-9_*']*)
      | (?P<value>[01?])
      | (?P<punct>[()~&|@,])
    """,
    re.VERBOSE,
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens: list[tuple[str, str, int]] = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = match.lastgroup
        if kind != "ws":
            value = match.group()
            if kind == "punct":
                kind = value
            tokens.append((kind, value, pos))
        pos = match.end()
    tokens.append(("end", "", len(text)))
    return tokens


# accepted argument signatures per macro; slots are "name", "court",
# "formula", or "value"
_MACRO_SIGNATURES: dict[str, tuple[tuple[str, ...], ...]] = {
    "Fhat": (("name", "formula"), ("formula",)),
    "Phat": (("name", "name", "formula"), ("formula",)),
    "Lower": (("formula",),),
    "Higher": (("formula",),),
    "SameCourt": (("formula",),),
    "Supporting": (("name", "name", "formula"),),
    "PBinding": (("name", "name", "formula"),),
    "PwOver": (("court",),),
    "POverruling": (("name", "name", "formula"), ("formula",)),
    "Against": (("name", "name", "formula"), ("formula",)),
    "According": (("name", "name", "formula"),),
    "Incuriam": ((),),
    "Overruled": ((),),
    "Binding": (("name", "formula"),),
    "BestBinding": (("name", "formula"),),
    "Cl": (("name", "value"),),
}


class _Parser:
    def __init__(self, text: str, context: Optional[ExpansionContext]):
        self.tokens = _tokenize(text)
        self.index = 0
        self.context = context

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.index]

    def advance(self) -> tuple[str, str, int]:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def expect(self, kind: str) -> tuple[str, str, int]:
        token = self.advance()
        if token[0] != kind:
            raise ParseError(f"expected {kind!r}, found {token[1]!r}", token[2])
        return token

    def parse(self) -> Formula:
        phi = self.parse_implies()
        token = self.peek()
        if token[0] != "end":
            raise ParseError(f"unexpected trailing input {token[1]!r}", token[2])
        return phi

    def parse_implies(self) -> Formula:
        left = self.parse_or()
        if self.peek()[0] == "arrow":
            self.advance()
            return implies(left, self.parse_implies())
        return left

    def parse_or(self) -> Formula:
        phi = self.parse_and()
        while self.peek()[0] == "|":
            self.advance()
            phi = or_(phi, self.parse_and())
        return phi

    def parse_and(self) -> Formula:
        phi = self.parse_unary()
        while self.peek()[0] == "&":
            self.advance()
            phi = and_(phi, self.parse_unary())
        return phi

    def parse_unary(self) -> Formula:
        kind, value, pos = self.peek()
        if kind == "~":
            self.advance()
            return not_(self.parse_unary())
        if kind == "box":
            self.advance()
            return box(self.parse_unary())
        if kind == "dia":
            self.advance()
            return diamond(self.parse_unary())
        if kind == "tbox":
            self.advance()
            return tbox(self.parse_unary())
        if kind == "tdia":
            self.advance()
            return tdiamond(self.parse_unary())
        if kind == "rbox":
            self.advance()
            return rbox(self.parse_unary())
        if kind == "rdia":
            self.advance()
            return rdiamond(self.parse_unary())
        if kind == "@":
            self.advance()
            name = self.expect("ident")[1]
            return at(name, self.parse_unary())
        return self.parse_primary()

    def parse_primary(self) -> Formula:
        kind, value, pos = self.advance()
        if kind == "(":
            phi = self.parse_implies()
            self.expect(")")
            return phi
        if kind == "ident":
            if self.peek()[0] != "(":
                return atom(value)
            if value == "t":
                self.advance()
                token = self.advance()
                if token[0] != "value":
                    raise ParseError("decision atom needs 0, 1 or ?", token[2])
                self.expect(")")
                return dec(token[1])
            if value in ("H", "B"):
                self.advance()
                a = self.expect("ident")[1]
                self.expect(",")
                b = self.expect("ident")[1]
                self.expect(")")
                return hrel(a, b) if value == "H" else brel(a, b)
            if value in MACRO_NAMES:
                return self.parse_macro(value, pos)
            # any other identifier followed by "(" is malformed
            raise ParseError(f"unknown operator {value!r}", pos)
        raise ParseError(f"unexpected token {value!r}", pos)

    def parse_macro(self, name: str, pos: int) -> Formula:
        self.expect("(")
        args: list[tuple[str, object, int]] = []
        if self.peek()[0] != ")":
            while True:
                args.append(self.parse_macro_arg())
                if self.peek()[0] != ",":
                    break
                self.advance()
        self.expect(")")
        signatures = _MACRO_SIGNATURES[name]
        matching = [sig for sig in signatures if len(sig) == len(args)]
        if not matching:
            arities = sorted({len(sig) for sig in signatures})
            raise ParseError(
                f"{name} takes {' or '.join(str(a) for a in arities)} argument(s), got {len(args)}",
                pos,
            )
        sig = matching[0]
        values: list[object] = []
        for slot, (akind, avalue, apos) in zip(sig, args):
            if slot in ("name", "court"):
                if akind != "token":
                    raise ParseError(f"{name} expects an identifier here", apos)
                values.append(avalue)
            elif slot == "value":
                if akind != "value":
                    raise ParseError(f"{name} expects 0 or 1 here", apos)
                values.append(avalue)
            else:
                values.append(avalue if akind == "formula" else atom(avalue))
        if name in _NEEDS_CONTEXT and self.context is None:
            raise ParseError(f"{name} needs a model context to expand", pos)
        return self.build_macro(name, values)

    def parse_macro_arg(self) -> tuple[str, object, int]:
        kind, value, pos = self.peek()
        if kind == "value":
            self.advance()
            return ("value", value, pos)
        if kind == "ident" and self.tokens[self.index + 1][0] in (",", ")"):
            self.advance()
            return ("token", value, pos)
        return ("formula", self.parse_implies(), pos)

    def build_macro(self, name: str, args: list) -> Formula:
        ctx = self.context
        if name == "Fhat":
            return fhat(args[0], args[1]) if len(args) == 2 else fhat_any(args[0], ctx)
        if name == "Phat":
            return phat(args[0], args[1], args[2]) if len(args) == 3 else phat_any(args[0], ctx)
        if name == "Lower":
            return lower(args[0], ctx)
        if name == "Higher":
            return higher(args[0], ctx)
        if name == "SameCourt":
            return samecourt(args[0], ctx)
        if name == "Supporting":
            return supporting(args[0], args[1], args[2])
        if name == "PBinding":
            return pbinding(args[0], args[1], args[2], ctx)
        if name == "PwOver":
            return pwover(args[0], ctx)
        if name == "POverruling":
            return (
                poverruling(args[0], args[1], args[2], ctx)
                if len(args) == 3
                else poverruling_any(args[0], ctx)
            )
        if name == "Against":
            return (
                against(args[0], args[1], args[2], ctx)
                if len(args) == 3
                else against_any(args[0], ctx)
            )
        if name == "According":
            return according(args[0], args[1], args[2], ctx)
        if name == "Incuriam":
            return incuriam(ctx)
        if name == "Overruled":
            return overruled(ctx)
        if name == "Binding":
            return binding(args[0], args[1], ctx)
        if name == "BestBinding":
            return bestbinding(args[0], args[1], ctx)
        if name == "Cl":
            return cl(args[0], args[1], ctx)
        raise AssertionError(f"unhandled macro {name}")


def parse(text: str, context: Optional[ExpansionContext] = None) -> Formula:
    """Parse concrete syntax into a core formula, expanding macros eagerly.

    ``context`` supplies the decided-name and court vocabulary for the
    quantified macros; plain connective formulas parse without one.
    """
    return _Parser(text, context).parse()

"""Formula and reason-term data model for the language of reason-based belief.

The primitive language has propositional letters, negation, disjunction, a
support operator ``r:phi`` ("r is a reason that supports phi"), adequacy
atoms ``r`` ("r is an adequate reason"), a belief operator ``B``, equality
between reason symbols, and universal quantification over reasons.
Conjunction, implication, the biconditional, and the existential quantifier
are abbreviations; constructors expand them immediately, so structural
equality of formulas is syntactic identity of the expanded forms.

Reason terms are basic symbols, the distinguished master reason ``sigma``,
or application compounds ``s * r`` (available only in the App variant of the
theory family).  Quantifiers bind basic symbols only; ``sigma`` can never be
bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

SIGMA_NAME = "sigma"

#: Words with fixed roles in the concrete syntax; unusable as symbol names.
RESERVED_WORDS = frozenset({"A", "E", "B"})


class CaptureError(Exception):
    """Substitution would capture a free occurrence under a quantifier."""


# ---------------------------------------------------------------------------
# Reason terms


@dataclass(frozen=True)
class Basic:
    name: str

    def __post_init__(self) -> None:
        if self.name == SIGMA_NAME:
            raise ValueError("use Sigma() for the master reason, not Basic('sigma')")


@dataclass(frozen=True)
class Sigma:
    """The distinguished master reason."""


@dataclass(frozen=True)
class App:
    """Application compound ``left * right`` (App variant only)."""

    left: "Reason"
    right: "Reason"


Reason = Union[Basic, Sigma, App]
AtomicReason = Union[Basic, Sigma]

SIGMA = Sigma()


def atom_term(name: str) -> AtomicReason:
    """The atomic reason term written ``name`` (``sigma`` denotes the master reason)."""
    return SIGMA if name == SIGMA_NAME else Basic(name)


def term_name(term: AtomicReason) -> str:
    if isinstance(term, Sigma):
        return SIGMA_NAME
    return term.name


def term_symbols(term: Reason) -> frozenset[str]:
    """All reason symbols occurring in a term (App compounds are flattened)."""
    if isinstance(term, App):
        return term_symbols(term.left) | term_symbols(term.right)
    return frozenset({term_name(term)})


def contains_app(term: Reason) -> bool:
    return isinstance(term, App)


# ---------------------------------------------------------------------------
# Formulas


@dataclass(frozen=True)
class Letter:
    name: str


@dataclass(frozen=True)
class Not:
    sub: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Supports:
    reason: Reason
    sub: "Formula"


@dataclass(frozen=True)
class Adequate:
    reason: Reason


@dataclass(frozen=True)
class Believes:
    sub: "Formula"


@dataclass(frozen=True)
class Eq:
    left: AtomicReason
    right: AtomicReason


@dataclass(frozen=True)
class ForAll:
    var: str
    sub: "Formula"

    def __post_init__(self) -> None:
        if self.var == SIGMA_NAME:
            raise ValueError("the master reason sigma cannot be bound")
        if self.var in RESERVED_WORDS:
            raise ValueError(f"{self.var!r} is reserved and cannot be a binder")


Formula = Union[Letter, Not, Or, Supports, Adequate, Believes, Eq, ForAll]


# ---------------------------------------------------------------------------
# Derived connectives, expanded at construction


def impl(antecedent: Formula, consequent: Formula) -> Formula:
    return Or(Not(antecedent), consequent)


def conj(*parts: Formula) -> Formula:
    """Left-folded conjunction; requires at least one conjunct."""
    if not parts:
        raise ValueError("conj needs at least one formula")
    out = parts[0]
    for part in parts[1:]:
        out = Not(Or(Not(out), Not(part)))
    return out


def disj(*parts: Formula) -> Formula:
    if not parts:
        raise ValueError("disj needs at least one formula")
    out = parts[0]
    for part in parts[1:]:
        out = Or(out, part)
    return out


def iff(left: Formula, right: Formula) -> Formula:
    return conj(impl(left, right), impl(right, left))


def exists(var: str, body: Formula) -> Formula:
    return Not(ForAll(var, Not(body)))


def neq(left: AtomicReason, right: AtomicReason) -> Formula:
    return Not(Eq(left, right))


def forall_ne(var: str, other: AtomicReason, body: Formula) -> Formula:
    """``(A var != other) body``, i.e. A var. var != other -> body."""
    return ForAll(var, impl(neq(atom_term(var), other), body))


def exists_ne(var: str, other: AtomicReason, body: Formula) -> Formula:
    return exists(var, conj(neq(atom_term(var), other), body))


# ---------------------------------------------------------------------------
# Destructuring helpers for the expanded abbreviations


def as_implies(formula: Formula) -> tuple[Formula, Formula] | None:
    if isinstance(formula, Or) and isinstance(formula.left, Not):
        return formula.left.sub, formula.right
    return None


def as_and(formula: Formula) -> tuple[Formula, Formula] | None:
    if (
        isinstance(formula, Not)
        and isinstance(formula.sub, Or)
        and isinstance(formula.sub.left, Not)
        and isinstance(formula.sub.right, Not)
    ):
        return formula.sub.left.sub, formula.sub.right.sub
    return None


def as_iff(formula: Formula) -> tuple[Formula, Formula] | None:
    pair = as_and(formula)
    if pair is None:
        return None
    fwd, bwd = (as_implies(p) for p in pair)
    if fwd is None or bwd is None:
        return None
    if fwd[0] == bwd[1] and fwd[1] == bwd[0]:
        return fwd
    return None


def as_exists(formula: Formula) -> tuple[str, Formula] | None:
    if (
        isinstance(formula, Not)
        and isinstance(formula.sub, ForAll)
        and isinstance(formula.sub.sub, Not)
    ):
        return formula.sub.var, formula.sub.sub.sub
    return None


def as_neq(formula: Formula) -> tuple[AtomicReason, AtomicReason] | None:
    if isinstance(formula, Not) and isinstance(formula.sub, Eq):
        return formula.sub.left, formula.sub.right
    return None


# ---------------------------------------------------------------------------
# Occurrence analysis and substitution


def subformulas(formula: Formula) -> Iterator[Formula]:
    """Preorder traversal of all subformulas, the formula itself included."""
    yield formula
    if isinstance(formula, Not):
        yield from subformulas(formula.sub)
    elif isinstance(formula, Or):
        yield from subformulas(formula.left)
        yield from subformulas(formula.right)
    elif isinstance(formula, (Supports, Believes)):
        yield from subformulas(formula.sub)
    elif isinstance(formula, ForAll):
        yield from subformulas(formula.sub)


def formula_letters(formula: Formula) -> frozenset[str]:
    return frozenset(f.name for f in subformulas(formula) if isinstance(f, Letter))


def free_reasons(formula: Formula) -> frozenset[str]:
    """Reason symbols with at least one free occurrence.

    A symbol occurs in reason position as a support prefix, an adequacy atom,
    or an equality operand; occurrences under a matching quantifier are bound.
    Letters are never reason occurrences, even under a shared alphabet.
    """
    out: set[str] = set()

    def walk(f: Formula, bound: frozenset[str]) -> None:
        if isinstance(f, Letter):
            return
        if isinstance(f, Not):
            walk(f.sub, bound)
        elif isinstance(f, Or):
            walk(f.left, bound)
            walk(f.right, bound)
        elif isinstance(f, Supports):
            out.update(term_symbols(f.reason) - bound)
            walk(f.sub, bound)
        elif isinstance(f, Adequate):
            out.update(term_symbols(f.reason) - bound)
        elif isinstance(f, Believes):
            walk(f.sub, bound)
        elif isinstance(f, Eq):
            out.update(term_symbols(f.left) - bound)
            out.update(term_symbols(f.right) - bound)
        else:
            walk(f.sub, bound | {f.var})

    walk(formula, frozenset())
    return frozenset(out)


def bound_vars(formula: Formula) -> frozenset[str]:
    return frozenset(f.var for f in subformulas(formula) if isinstance(f, ForAll))


def is_free_for(s: str, r: str, formula: Formula) -> bool:
    """True when substituting ``s`` for free ``r`` in ``formula`` captures nothing.

    Equivalently: no free occurrence of ``r`` lies inside the scope of a
    quantifier binding ``s``.  Substituting a symbol for itself is always
    safe, and ``sigma`` is safe as a substituent because it cannot be bound.
    """
    if isinstance(formula, (Letter, Adequate, Eq)):
        return True
    if isinstance(formula, Not):
        return is_free_for(s, r, formula.sub)
    if isinstance(formula, Or):
        return is_free_for(s, r, formula.left) and is_free_for(s, r, formula.right)
    if isinstance(formula, (Supports, Believes)):
        return is_free_for(s, r, formula.sub)
    if formula.var == r:
        return True
    if formula.var == s:
        return r not in free_reasons(formula.sub)
    return is_free_for(s, r, formula.sub)


def _subst_term(term: Reason, r: str, repl: AtomicReason) -> Reason:
    if isinstance(term, App):
        return App(_subst_term(term.left, r, repl), _subst_term(term.right, r, repl))
    return repl if term_name(term) == r else term


def substitute(formula: Formula, r: str, s: str) -> Formula:
    """The formula with every free reason occurrence of ``r`` replaced by ``s``.

    Raises :class:`CaptureError` unless ``s`` is free for ``r``.  Letter
    occurrences are untouched: substitution rewrites reason positions only.
    """
    if not is_free_for(s, r, formula):
        raise CaptureError(f"{s!r} is not free for {r!r}")
    repl = atom_term(s)

    def walk(f: Formula) -> Formula:
        if isinstance(f, Letter):
            return f
        if isinstance(f, Not):
            return Not(walk(f.sub))
        if isinstance(f, Or):
            return Or(walk(f.left), walk(f.right))
        if isinstance(f, Supports):
            return Supports(_subst_term(f.reason, r, repl), walk(f.sub))
        if isinstance(f, Adequate):
            return Adequate(_subst_term(f.reason, r, repl))
        if isinstance(f, Believes):
            return Believes(walk(f.sub))
        if isinstance(f, Eq):
            left = _subst_term(f.left, r, repl)
            right = _subst_term(f.right, r, repl)
            return Eq(left, right)  # type: ignore[arg-type]
        if f.var == r:
            return f
        return ForAll(f.var, walk(f.sub))

    return walk(formula)

"""
Formula syntax tree for the query language.

Terms are linear: integer coefficients on variables plus a constant, with an
optional numeration system. Formulas are immutable dataclasses; every
transformation builds new nodes.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Dict, FrozenSet, Iterable, Mapping, Optional, Tuple

from numeration.digits import NumerationSystem
from relations.linear import Relop

NEGATED_RELOP = {
    Relop.EQ: Relop.NE,
    Relop.NE: Relop.EQ,
    Relop.LT: Relop.GE,
    Relop.GE: Relop.LT,
    Relop.LE: Relop.GT,
    Relop.GT: Relop.LE,
}


# -----------------------------
# Terms
# -----------------------------

@dataclass(frozen=True)
class Term:
    coefficients: Tuple[Tuple[str, int], ...] = ()
    constant: int = 0
    system: Optional[NumerationSystem] = None

    @staticmethod
    def of(coefficients: Mapping[str, int], constant: int = 0, system: Optional[NumerationSystem] = None) -> "Term":
        kept = tuple(sorted((v, int(a)) for v, a in coefficients.items() if a != 0))
        return Term(kept, int(constant), system)

    @staticmethod
    def variable(name: str, system: Optional[NumerationSystem] = None) -> "Term":
        return Term(((name, 1),), 0, system)

    @staticmethod
    def const(value: int, system: Optional[NumerationSystem] = None) -> "Term":
        return Term((), int(value), system)

    def as_dict(self) -> Dict[str, int]:
        return dict(self.coefficients)

    @property
    def variables(self) -> FrozenSet[str]:
        return frozenset(v for v, _ in self.coefficients)

    @property
    def is_variable(self) -> bool:
        return self.constant == 0 and len(self.coefficients) == 1 and self.coefficients[0][1] == 1

    @property
    def is_nonnegative_form(self) -> bool:
        """All coefficients and the constant are >= 0, so the value is >= 0 on natural numbers."""
        return self.constant >= 0 and all(a >= 0 for _, a in self.coefficients)

    def _merge_system(self, other: "Term") -> Optional[NumerationSystem]:
        return self.system if self.system is not None else other.system

    def plus(self, other: "Term") -> "Term":
        coeffs = self.as_dict()
        for v, a in other.coefficients:
            coeffs[v] = coeffs.get(v, 0) + a
        return Term.of(coeffs, self.constant + other.constant, self._merge_system(other))

    def minus(self, other: "Term") -> "Term":
        return self.plus(other.scaled(-1))

    def scaled(self, k: int) -> "Term":
        return Term.of({v: a * k for v, a in self.coefficients}, self.constant * k, self.system)

    def with_system(self, system: Optional[NumerationSystem]) -> "Term":
        return replace(self, system=system)

    def substitute(self, mapping: Mapping[str, "Term"]) -> "Term":
        out = Term.of({v: a for v, a in self.coefficients if v not in mapping}, self.constant, self.system)
        for v, a in self.coefficients:
            if v in mapping:
                out = out.plus(mapping[v].scaled(a).with_system(None))
        return out.with_system(self.system)

    def rename(self, mapping: Mapping[str, str]) -> "Term":
        return Term.of({mapping.get(v, v): a for v, a in self.coefficients}, self.constant, self.system)

    def evaluate(self, assignment: Mapping[str, int]) -> int:
        return self.constant + sum(a * assignment[v] for v, a in self.coefficients)

    def __str__(self) -> str:
        parts = []
        for v, a in self.coefficients:
            parts.append(v if a == 1 else f"_{v}" if a == -1 else f"{a}*{v}")
        if self.constant or not parts:
            parts.append(str(self.constant))
        return "+".join(parts)


# -----------------------------
# Formulas
# -----------------------------

@dataclass(frozen=True)
class Comparison:
    left: Term
    relop: Relop
    right: Term
    system: Optional[NumerationSystem] = None

    def linear(self) -> Tuple[Dict[str, int], int]:
        """(a, c) with sum(a[v] * v) relop c equivalent to this comparison."""
        diff = self.left.minus(self.right)
        return diff.as_dict(), -diff.constant

    def __str__(self) -> str:
        return f"{self.left}{self.relop.value}{self.right}"


@dataclass(frozen=True)
class Call:
    name: str
    args: Tuple[Term, ...]

    def __str__(self) -> str:
        return f"${self.name}({','.join(str(a) for a in self.args)})"


@dataclass(frozen=True)
class SeqIndex:
    name: str
    index: Term
    relop: Relop
    value: int

    def __str__(self) -> str:
        return f"{self.name}[{self.index}]{self.relop.value}@{self.value}"


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Exists:
    variables: Tuple[str, ...]
    body: "Formula"


@dataclass(frozen=True)
class Forall:
    variables: Tuple[str, ...]
    body: "Formula"


@dataclass(frozen=True)
class Annotated:
    """A ?msd_k annotation; it scopes over the unary formula that follows it."""

    system: NumerationSystem
    body: "Formula"


Atom = Comparison | Call | SeqIndex
Formula = Comparison | Call | SeqIndex | Not | And | Or | Implies | Iff | Exists | Forall | Annotated
BINARY = (And, Or, Implies, Iff)
QUANTIFIERS = (Exists, Forall)


def conjunction(parts: Iterable[Formula]) -> Formula:
    parts = list(parts)
    if not parts:
        return Comparison(Term.const(0), Relop.EQ, Term.const(0))
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def atom_terms(atom: Atom) -> Tuple[Term, ...]:
    if isinstance(atom, Comparison):
        return (atom.left, atom.right)
    if isinstance(atom, Call):
        return atom.args
    return (atom.index,)


def free_variables(f: Formula) -> FrozenSet[str]:
    if isinstance(f, (Comparison, Call, SeqIndex)):
        out: FrozenSet[str] = frozenset()
        for t in atom_terms(f):
            out |= t.variables
        return out
    if isinstance(f, (Not, Annotated)):
        return free_variables(f.body)
    if isinstance(f, BINARY):
        return free_variables(f.left) | free_variables(f.right)
    return free_variables(f.body) - set(f.variables)


def map_terms(f: Formula, fn) -> Formula:
    """Apply fn to every term of every atom."""
    if isinstance(f, Comparison):
        return replace(f, left=fn(f.left), right=fn(f.right))
    if isinstance(f, Call):
        return replace(f, args=tuple(fn(a) for a in f.args))
    if isinstance(f, SeqIndex):
        return replace(f, index=fn(f.index))
    if isinstance(f, (Not, Annotated, Exists, Forall)):
        return replace(f, body=map_terms(f.body, fn))
    return replace(f, left=map_terms(f.left, fn), right=map_terms(f.right, fn))


def atoms(f: Formula):
    if isinstance(f, (Comparison, Call, SeqIndex)):
        yield f
    elif isinstance(f, BINARY):
        yield from atoms(f.left)
        yield from atoms(f.right)
    else:
        yield from atoms(f.body)


def rename_bound(f: Formula, counter: Optional[Dict[str, int]] = None) -> Formula:
    """Give every quantified variable a name used nowhere else (v -> v#k)."""
    counter = {} if counter is None else counter

    def go(g: Formula, scope: Dict[str, str]) -> Formula:
        if isinstance(g, (Comparison, Call, SeqIndex)):
            return map_terms(g, lambda t: t.rename(scope))
        if isinstance(g, QUANTIFIERS):
            inner = dict(scope)
            fresh = []
            for v in g.variables:
                base = v.split("#")[0]
                counter[base] = counter.get(base, 0) + 1
                inner[v] = f"{base}#{counter[base]}"
                fresh.append(inner[v])
            return replace(g, variables=tuple(fresh), body=go(g.body, inner))
        if isinstance(g, (Not, Annotated)):
            return replace(g, body=go(g.body, scope))
        return replace(g, left=go(g.left, scope), right=go(g.right, scope))

    return go(f, {})


def display(f: Formula) -> str:
    if isinstance(f, (Comparison, Call, SeqIndex)):
        return str(f)
    if isinstance(f, Not):
        return f"~({display(f.body)})"
    if isinstance(f, Annotated):
        return f"?{f.system.label} ({display(f.body)})"
    if isinstance(f, QUANTIFIERS):
        q = "E" if isinstance(f, Exists) else "A"
        return f"{q}{','.join(f.variables)} ({display(f.body)})"
    op = {And: "&", Or: "|", Implies: "=>", Iff: "<=>"}[type(f)]
    return f"({display(f.left)} {op} {display(f.right)})"


__all__ = [
    "And",
    "Annotated",
    "Atom",
    "Call",
    "Comparison",
    "Exists",
    "Forall",
    "Formula",
    "Iff",
    "Implies",
    "NEGATED_RELOP",
    "Not",
    "Or",
    "SeqIndex",
    "Term",
    "atom_terms",
    "atoms",
    "conjunction",
    "display",
    "free_variables",
    "map_terms",
    "rename_bound",
]

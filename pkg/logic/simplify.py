"""
Formula rewrites applied before compilation.

All rewrites preserve the meaning of the formula over the variable domains
(natural numbers in a positive base, all integers in a negative base):

- normalize: Forall becomes Not-Exists-Not, double negations cancel, and a
  negated comparison becomes the comparison with the opposite relation.
- inline_linear: a call to a def that reduced to one linear equation is
  replaced by that equation over the argument terms.
- lower_arguments: a call or sequence index whose argument is not a plain
  variable gets a fresh variable z with z = argument.
- eliminate_equalities: inside an existential block, an equation that fixes a
  bound variable with coefficient +-1 is used to substitute it away.

The last two interact: lowered arguments are lifted into the surrounding
existential block, so one fused projection handles the whole block.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import replace
from typing import Dict, List, Optional, Tuple

from logic.ast import (
    And,
    Annotated,
    Call,
    Comparison,
    Exists,
    Forall,
    Formula,
    Implies,
    NEGATED_RELOP,
    Not,
    Or,
    SeqIndex,
    Term,
    atoms,
    conjunction,
    free_variables,
    map_terms,
)
from logic.environment import Environment, LinearDefinition
from numeration.digits import NumerationSystem
from relations.linear import Relop

logger = logging.getLogger(__name__)


# -----------------------------
# Normal form
# -----------------------------

def negated(f: Formula) -> Formula:
    if isinstance(f, Not):
        return f.body
    if isinstance(f, Comparison):
        return replace(f, relop=NEGATED_RELOP[f.relop])
    return Not(f)


def normalize(f: Formula) -> Formula:
    if isinstance(f, (Comparison, Call, SeqIndex)):
        return f
    if isinstance(f, Forall):
        return Not(Exists(f.variables, negated(normalize(f.body))))
    if isinstance(f, Not):
        return negated(normalize(f.body))
    if isinstance(f, (Exists, Annotated)):
        return replace(f, body=normalize(f.body))
    return replace(f, left=normalize(f.left), right=normalize(f.right))


def conjuncts(f: Formula) -> List[Formula]:
    """Split f into a list whose conjunction is f."""
    if isinstance(f, And):
        return conjuncts(f.left) + conjuncts(f.right)
    if isinstance(f, Not) and isinstance(f.body, Or):
        return conjuncts(negated(f.body.left)) + conjuncts(negated(f.body.right))
    if isinstance(f, Not) and isinstance(f.body, Implies):
        return conjuncts(f.body.left) + conjuncts(negated(f.body.right))
    return [f]


# -----------------------------
# Linear definitions
# -----------------------------

def _nonnegative_guard(term: Term, system: NumerationSystem) -> Optional[Comparison]:
    if system.is_negative or term.is_nonnegative_form:
        return None
    return Comparison(term.with_system(system), Relop.GE, Term.const(0, system), system)


def inline_linear(f: Formula, env: Environment) -> Formula:
    if isinstance(f, Call):
        linear = env.definition(f.name).linear
        if linear is None:
            return f
        mapping = {p: arg.with_system(None) for p, arg in zip(linear.params, f.args)}
        c = linear.comparison
        inlined = Comparison(c.left.substitute(mapping), c.relop, c.right.substitute(mapping), c.system)
        guards = [g for g in (_nonnegative_guard(a, c.system) for a in f.args) if g is not None]
        logger.debug(f"inlined {f} as {inlined}")
        return conjunction([inlined, *guards])
    if isinstance(f, (Comparison, SeqIndex)):
        return f
    if isinstance(f, (Not, Exists, Forall, Annotated)):
        return replace(f, body=inline_linear(f.body, env))
    return replace(f, left=inline_linear(f.left, env), right=inline_linear(f.right, env))


def linear_definition(f: Formula, params: Tuple[str, ...]) -> Optional[LinearDefinition]:
    """The LinearDefinition of a simplified def body, when it is one equation over all its parameters."""
    if not isinstance(f, Comparison) or f.relop is not Relop.EQ:
        return None
    if free_variables(f) != frozenset(params):
        return None
    return LinearDefinition(tuple(params), f)


# -----------------------------
# Argument lowering and equality elimination
# -----------------------------

class Simplifier:
    def __init__(self, env: Environment, systems: Dict[str, NumerationSystem]):
        self.env = env
        self.systems = systems
        self._fresh = itertools.count(1)

    def fresh(self, system: NumerationSystem) -> str:
        name = f"#{next(self._fresh)}"
        self.systems[name] = system
        return name

    def lower_arguments(self, f: Formula) -> Formula:
        if isinstance(f, Call):
            seen = set()
            args, bound, equations = [], [], []
            for arg in f.args:
                if arg.is_variable and arg.coefficients[0][0] not in seen:
                    seen.add(arg.coefficients[0][0])
                    args.append(arg)
                    continue
                z = self.fresh(arg.system)
                bound.append(z)
                args.append(Term.variable(z, arg.system))
                equations.append(Comparison(Term.variable(z, arg.system), Relop.EQ, arg, arg.system))
            if not bound:
                return f
            return Exists(tuple(bound), conjunction([*equations, replace(f, args=tuple(args))]))
        if isinstance(f, SeqIndex):
            if f.index.is_variable:
                return f
            system = f.index.system
            z = self.fresh(system)
            equation = Comparison(Term.variable(z, system), Relop.EQ, f.index, system)
            return Exists((z,), And(equation, replace(f, index=Term.variable(z, system))))
        if isinstance(f, Comparison):
            return f
        if isinstance(f, (Not, Exists, Annotated)):
            return replace(f, body=self.lower_arguments(f.body))
        return replace(f, left=self.lower_arguments(f.left), right=self.lower_arguments(f.right))

    def _candidate(self, parts: List[Formula], bound: List[str]):
        """(index, variable, value) of an equation usable to eliminate a bound variable, preferring nonnegative values."""
        blocked = set()
        for p in parts:
            for atom in atoms(p):
                if not isinstance(atom, Comparison):
                    blocked |= free_variables(atom)
        fallback = None
        for i, p in enumerate(parts):
            if not isinstance(p, Comparison) or p.relop is not Relop.EQ:
                continue
            coeffs, c = p.linear()
            for v in bound:
                a = coeffs.get(v)
                if a not in (1, -1) or v in blocked:
                    continue
                rest = Term.of({u: b for u, b in coeffs.items() if u != v}, -c)
                value = rest.scaled(-a)
                if value.is_nonnegative_form:
                    return i, v, value
                if fallback is None:
                    fallback = (i, v, value)
        return fallback

    def _eliminate_block(self, variables: Tuple[str, ...], body: Formula) -> Formula:
        bound = list(variables)
        parts: List[Formula] = []
        for p in conjuncts(body):
            if isinstance(p, Exists):
                bound.extend(p.variables)
                parts.extend(conjuncts(p.body))
            else:
                parts.append(p)
        while True:
            found = self._candidate(parts, bound)
            if found is None:
                break
            i, v, value = found
            system = self.systems[v]
            value = value.with_system(system)
            rest = parts[:i] + parts[i + 1:]

            def put(t: Term, v=v, value=value) -> Term:
                return t.substitute({v: value}) if v in t.variables else t

            parts = [map_terms(p, put) for p in rest]
            guard = _nonnegative_guard(value, system)
            if guard is not None:
                parts.append(guard)
            bound.remove(v)
            logger.debug(f"eliminated {v} = {value}")
        used = set()
        for p in parts:
            used |= free_variables(p)
        bound = [v for v in bound if v in used]
        if not bound:
            return conjunction(parts)
        return Exists(tuple(bound), conjunction(parts))

    def eliminate_equalities(self, f: Formula) -> Formula:
        if isinstance(f, (Comparison, Call, SeqIndex)):
            return f
        if isinstance(f, Exists):
            return self._eliminate_block(f.variables, self.eliminate_equalities(f.body))
        if isinstance(f, (Not, Annotated, Forall)):
            return replace(f, body=self.eliminate_equalities(f.body))
        return replace(f, left=self.eliminate_equalities(f.left), right=self.eliminate_equalities(f.right))

    def run(self, f: Formula) -> Formula:
        f = normalize(f)
        f = inline_linear(f, self.env)
        f = self.lower_arguments(f)
        return self.eliminate_equalities(f)


def simplify(f: Formula, env: Environment, systems: Dict[str, NumerationSystem]) -> Formula:
    """Simplify a system-resolved formula; fresh variables are added to `systems`."""
    return Simplifier(env, systems).run(f)


__all__ = [
    "Simplifier",
    "conjuncts",
    "inline_linear",
    "linear_definition",
    "negated",
    "normalize",
    "simplify",
]

"""
Bounded brute-force semantics for formulas.

Quantified variables range over 0..bound in a positive base and -bound..bound
in a negative base. Calls look the argument values up in the named automaton
and sequence indices in the named DFAO; a negative value on a positive-base
track makes the atom false. Within the bound the answers match the compiled
automata; quantifiers whose witnesses lie beyond the bound can differ, so
cross-checks pick formulas whose witnesses are small.

Usage:
  from logic.brute import evaluate, satisfying
  evaluate(parse_formula("An Ey $f30(n,y)"), env, bound=200)
  satisfying(parse_formula("Ex $f30(n,x) & $p34(x,n)"), env, bound=300)
"""
from __future__ import annotations

import itertools
import logging
from typing import Dict, Iterator, List, Mapping, Optional, Tuple

from automata.dfa import accepts
from logic.ast import (
    And,
    Call,
    Comparison,
    Exists,
    Forall,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    SeqIndex,
    free_variables,
    rename_bound,
)
from logic.environment import Environment
from logic.systems import resolve_systems
from numeration.digits import NumerationSystem

logger = logging.getLogger(__name__)


class BruteEvaluator:
    def __init__(self, env: Environment, systems: Mapping[str, NumerationSystem], bound: int):
        self.env = env
        self.systems = systems
        self.bound = bound
        self._calls: Dict[Tuple[str, Tuple[int, ...]], bool] = {}

    def domain(self, variable: str) -> range:
        system = self.systems.get(variable)
        low = -self.bound if system is not None and system.is_negative else 0
        return range(low, self.bound + 1)

    def _call(self, f: Call, values: Tuple[int, ...]) -> bool:
        key = (f.name, values)
        found = self._calls.get(key)
        if found is None:
            dfa = self.env.automaton(f.name)
            if any(v < 0 and not s.is_negative for v, s in zip(values, dfa.signature)):
                found = False
            else:
                found = accepts(dfa, values)
            self._calls[key] = found
        return found

    def holds(self, f: Formula, a: Dict[str, int]) -> bool:
        if isinstance(f, Comparison):
            return f.relop.holds(f.left.evaluate(a), f.right.evaluate(a))
        if isinstance(f, Call):
            return self._call(f, tuple(t.evaluate(a) for t in f.args))
        if isinstance(f, SeqIndex):
            dfao = self.env.dfao(f.name)
            n = f.index.evaluate(a)
            if n < 0 and not dfao.system.is_negative:
                return False
            return f.relop.holds(dfao.value(n), f.value)
        if isinstance(f, Not):
            return not self.holds(f.body, a)
        if isinstance(f, And):
            return self.holds(f.left, a) and self.holds(f.right, a)
        if isinstance(f, Or):
            return self.holds(f.left, a) or self.holds(f.right, a)
        if isinstance(f, Implies):
            return not self.holds(f.left, a) or self.holds(f.right, a)
        if isinstance(f, Iff):
            return self.holds(f.left, a) == self.holds(f.right, a)
        if isinstance(f, (Exists, Forall)):
            want = isinstance(f, Exists)
            for values in itertools.product(*(self.domain(v) for v in f.variables)):
                inner = {**a, **dict(zip(f.variables, values))}
                if self.holds(f.body, inner) == want:
                    return want
            return not want
        raise TypeError(f"unexpected formula node {type(f).__name__}")

    def assignments(self, variables: Tuple[str, ...]) -> Iterator[Dict[str, int]]:
        for values in itertools.product(*(self.domain(v) for v in variables)):
            yield dict(zip(variables, values))


def _prepared(f: Formula, env: Environment, bound: int) -> Tuple[Formula, BruteEvaluator]:
    resolved, systems = resolve_systems(rename_bound(f), env)
    return resolved, BruteEvaluator(env, systems, bound)


def evaluate(f: Formula, env: Environment, assignment: Optional[Mapping[str, int]] = None, bound: int = 100) -> bool:
    """Truth of f under `assignment` (free variables) with quantifiers cut off at `bound`."""
    resolved, evaluator = _prepared(f, env, bound)
    return evaluator.holds(resolved, dict(assignment or {}))


def satisfying(f: Formula, env: Environment, bound: int = 100) -> List[Tuple[int, ...]]:
    """All assignments to the sorted free variables, each within the bound, that satisfy f."""
    resolved, evaluator = _prepared(f, env, bound)
    variables = tuple(sorted(free_variables(resolved)))
    found = [tuple(a[v] for v in variables) for a in evaluator.assignments(variables) if evaluator.holds(resolved, a)]
    logger.debug(f"brute force: {len(found)} satisfying assignments over {variables} up to {bound}")
    return found

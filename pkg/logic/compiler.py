"""
Formula -> automaton compiler.

Pipeline for one formula: rename bound variables apart, resolve numeration
systems, simplify, then compile bottom-up into a LabeledDfa whose tracks are
the formula's free variables in sorted order.

Usage:
  from logic.compiler import Compiler
  compiler = Compiler(env)
  labeled = compiler.compile(parse_formula("Ex $f30(n,x) & $p34(x,n)"))
  truth = compiler.evaluate(parse_formula("An Ey $f30(n,y)"))
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from automata.dfa import DEFAULT_STATE_CAP, Connective, Dfa, minimize, universal
from automata.dfao import preimage
from automata.labeled import LabeledDfa, combine, conjoin, exists_all, negate
from logic.ast import (
    Call,
    Comparison,
    Exists,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    SeqIndex,
    display,
    free_variables,
    rename_bound,
)
from logic.environment import CompileError, Environment
from logic.simplify import Simplifier, conjuncts, normalize, simplify
from logic.systems import resolve_systems
from numeration.digits import NumerationSystem
from relations.linear import Relop, comparison_relation

logger = logging.getLogger(__name__)


@dataclass
class CompileOptions:
    state_cap: int = DEFAULT_STATE_CAP
    simplify: bool = True


@dataclass(frozen=True)
class Prepared:
    """A formula ready for compilation, with the systems of all its variables."""

    formula: Formula
    free: Tuple[str, ...]
    systems: Dict[str, NumerationSystem]


class Compiler:
    def __init__(self, env: Environment, options: Optional[CompileOptions] = None):
        self.env = env
        self.options = options or CompileOptions()

    # -----------------------------
    # Front end
    # -----------------------------

    def prepare(self, f: Formula) -> Prepared:
        renamed = rename_bound(f)
        resolved, systems = resolve_systems(renamed, self.env)
        free = tuple(sorted(free_variables(resolved)))
        if self.options.simplify:
            resolved = simplify(resolved, self.env, systems)
            logger.debug(f"simplified: {display(resolved)}")
        else:
            resolved = Simplifier(self.env, systems).lower_arguments(normalize(resolved))
        return Prepared(resolved, free, systems)

    def compile(self, f: Formula) -> LabeledDfa:
        return self.compile_prepared(self.prepare(f))

    def compile_prepared(self, prepared: Prepared) -> LabeledDfa:
        result = self._compile(prepared.formula)
        return result.widen(prepared.free, {v: prepared.systems[v] for v in prepared.free})

    def evaluate(self, f: Formula) -> bool:
        free = free_variables(f)
        if free:
            raise CompileError(f"eval needs a closed formula; free variables: {', '.join(sorted(free))}")
        result = self.compile(f)
        return bool(result.dfa.accepting[0])

    # -----------------------------
    # Back end
    # -----------------------------

    def _comparison(self, f: Comparison) -> LabeledDfa:
        coeffs, constant = f.linear()
        variables = tuple(sorted(coeffs))
        if not variables:
            return LabeledDfa(universal((), f.relop.holds(0, constant)), ())
        dfa = comparison_relation([coeffs[v] for v in variables], constant, f.system, f.relop, self.options.state_cap)
        return LabeledDfa(dfa, variables)

    def _call(self, f: Call) -> LabeledDfa:
        names = tuple(a.coefficients[0][0] for a in f.args)
        return LabeledDfa(self.env.automaton(f.name), names)

    def _index(self, f: SeqIndex) -> LabeledDfa:
        dfao = self.env.dfao(f.name)
        if f.relop in (Relop.EQ, Relop.NE):
            dfa = preimage(dfao, f.value, negate=f.relop is Relop.NE)
        else:
            accepting = np.array([f.relop.holds(int(o), f.value) for o in dfao.outputs], dtype=bool)
            dfa = minimize(Dfa(dfao.signature, dfao.table, accepting))
        return LabeledDfa(dfa, (f.index.coefficients[0][0],))

    def _compile(self, f: Formula) -> LabeledDfa:
        cap = self.options.state_cap
        if isinstance(f, Comparison):
            return self._comparison(f)
        if isinstance(f, Call):
            return self._call(f)
        if isinstance(f, SeqIndex):
            return self._index(f)
        if isinstance(f, Not):
            return negate(self._compile(f.body))
        if isinstance(f, Exists):
            parts = [self._compile(p) for p in conjuncts(f.body)]
            result = exists_all(parts, f.variables, cap)
            logger.debug(f"E{','.join(f.variables)}: {len(parts)} parts -> {result.num_states} states")
            return result
        if isinstance(f, Or):
            return combine(self._compile(f.left), self._compile(f.right), Connective.OR, cap)
        if isinstance(f, Implies):
            return combine(self._compile(f.left), self._compile(f.right), Connective.IMPLIES, cap)
        if isinstance(f, Iff):
            return combine(self._compile(f.left), self._compile(f.right), Connective.IFF, cap)
        parts = [self._compile(p) for p in conjuncts(f)]
        result = parts[0]
        for p in parts[1:]:
            result = conjoin(result, p, cap)
        return result


def compile_formula(f: Formula, env: Environment, options: Optional[CompileOptions] = None) -> LabeledDfa:
    return Compiler(env, options).compile(f)


def eval_closed(f: Formula, env: Environment, options: Optional[CompileOptions] = None) -> bool:
    return Compiler(env, options).evaluate(f)

"""
Automata whose tracks are named by variables.

Formulas are compiled bottom-up into LabeledDfa values. Variables are kept in
sorted order, so two sub-results are aligned by inserting "don't care" tracks
for the variables they lack; the table of the widened automaton just ignores
the new digit.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, Mapping, Sequence, Tuple

import numpy as np

from automata.dfa import (
    DEFAULT_STATE_CAP,
    AutomatonError,
    Connective,
    Dfa,
    NumerationSystem,
    complement,
    letter_digits,
    minimize,
    product,
    strides,
)
from automata.fused import exists_conjunction
from automata.nfa import project

logger = logging.getLogger(__name__)


def _remap_letters(old_sig, new_sig, source_of) -> np.ndarray:
    """For every letter of new_sig, the letter of old_sig whose track i carries new digit source_of[i]."""
    digits = letter_digits(new_sig)
    codes = np.zeros(digits.shape[0], dtype=np.int64)
    for i, stride in enumerate(strides(old_sig)):
        codes += digits[:, source_of[i]] * stride
    return codes


@dataclass(frozen=True, eq=False)
class LabeledDfa:
    dfa: Dfa
    variables: Tuple[str, ...]

    def __post_init__(self) -> None:
        variables = tuple(self.variables)
        if len(variables) != self.dfa.arity:
            raise AutomatonError(f"{len(variables)} variables for an automaton with {self.dfa.arity} tracks")
        if len(set(variables)) != len(variables):
            raise AutomatonError(f"repeated variable in {variables}")
        object.__setattr__(self, "variables", variables)

    @property
    def systems(self) -> Dict[str, NumerationSystem]:
        return dict(zip(self.variables, self.dfa.signature))

    @property
    def num_states(self) -> int:
        return self.dfa.num_states

    def reorder(self, variables: Sequence[str]) -> "LabeledDfa":
        variables = tuple(variables)
        if sorted(variables) != sorted(self.variables):
            raise AutomatonError(f"cannot reorder {self.variables} as {variables}")
        if variables == self.variables:
            return self
        pos = {v: i for i, v in enumerate(variables)}
        new_sig = tuple(self.dfa.signature[self.variables.index(v)] for v in variables)
        source = [pos[v] for v in self.variables]
        remap = _remap_letters(self.dfa.signature, new_sig, source)
        return LabeledDfa(minimize(Dfa(new_sig, self.dfa.table[:, remap], self.dfa.accepting)), variables)

    def widen(self, variables: Sequence[str], systems: Mapping[str, NumerationSystem]) -> "LabeledDfa":
        """Add unconstrained tracks so the tracks are exactly `variables`, in that order."""
        variables = tuple(variables)
        missing = [v for v in self.variables if v not in variables]
        if missing:
            raise AutomatonError(f"cannot drop constrained variables {missing}")
        mine = self.systems
        for v in self.variables:
            if systems.get(v, mine[v]) != mine[v]:
                raise AutomatonError(f"variable {v} used with two numeration systems: {mine[v]} and {systems[v]}")
        new_sig = tuple(mine.get(v) or systems[v] for v in variables)
        source = [variables.index(v) for v in self.variables]
        remap = _remap_letters(self.dfa.signature, new_sig, source)
        return LabeledDfa(Dfa(new_sig, self.dfa.table[:, remap], self.dfa.accepting), variables)

    def rename(self, mapping: Mapping[str, str]) -> "LabeledDfa":
        renamed = tuple(mapping.get(v, v) for v in self.variables)
        return LabeledDfa(self.dfa, renamed).reorder(sorted(renamed))


def canonical(x: LabeledDfa) -> LabeledDfa:
    return x.reorder(sorted(x.variables))


def align(x: LabeledDfa, y: LabeledDfa) -> Tuple[LabeledDfa, LabeledDfa]:
    systems = {**x.systems}
    for v, s in y.systems.items():
        if v in systems and systems[v] != s:
            raise AutomatonError(f"variable {v} used with two numeration systems: {systems[v]} and {s}")
        systems[v] = s
    variables = tuple(sorted(systems))
    return canonical(x).widen(variables, systems), canonical(y).widen(variables, systems)


def combine(x: LabeledDfa, y: LabeledDfa, op: Connective, state_cap: int = DEFAULT_STATE_CAP) -> LabeledDfa:
    a, b = align(x, y)
    return LabeledDfa(product(a.dfa, b.dfa, op, state_cap), a.variables)


def conjoin(x: LabeledDfa, y: LabeledDfa, state_cap: int = DEFAULT_STATE_CAP) -> LabeledDfa:
    return combine(x, y, Connective.AND, state_cap)


def disjoin(x: LabeledDfa, y: LabeledDfa, state_cap: int = DEFAULT_STATE_CAP) -> LabeledDfa:
    return combine(x, y, Connective.OR, state_cap)


def negate(x: LabeledDfa) -> LabeledDfa:
    return LabeledDfa(complement(x.dfa), x.variables)


def exists(x: LabeledDfa, variable: str, state_cap: int = DEFAULT_STATE_CAP) -> LabeledDfa:
    """Project `variable` away; a variable the automaton does not mention is a no-op."""
    if variable not in x.variables:
        return x
    track = x.variables.index(variable)
    rest = tuple(v for v in x.variables if v != variable)
    return LabeledDfa(project(x.dfa, track, state_cap), rest)


def align_all(parts: Sequence[LabeledDfa]) -> Tuple[Tuple[str, ...], list]:
    """Widen every part to the sorted union of their variables."""
    systems: Dict[str, NumerationSystem] = {}
    for p in parts:
        for v, s in p.systems.items():
            if v in systems and systems[v] != s:
                raise AutomatonError(f"variable {v} used with two numeration systems: {systems[v]} and {s}")
            systems[v] = s
    variables = tuple(sorted(systems))
    return variables, [canonical(p).widen(variables, systems) for p in parts]


def exists_all(
    parts: Sequence[LabeledDfa], variables: Iterable[str], state_cap: int = DEFAULT_STATE_CAP
) -> LabeledDfa:
    """Project `variables` out of the conjunction of `parts` without building the product first."""
    names, widened = align_all(parts)
    hidden = [i for i, v in enumerate(names) if v in set(variables)]
    if len(widened) == 1 and not hidden:
        return widened[0]
    dfa = exists_conjunction([p.dfa for p in widened], hidden, state_cap)
    return LabeledDfa(dfa, tuple(v for i, v in enumerate(names) if i not in hidden))

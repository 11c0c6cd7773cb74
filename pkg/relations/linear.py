"""
Linear constraints a1*x1 + ... + ak*xk (relop) c over one numeration system.

Reading msd-first, the automaton state is the value s of the linear form on
the prefixes read so far; a letter with digits d moves s to base*s + a.d.
With M = max(|c|, sum |ai|) no suffix can bring a state with |s| > M back to
the constant, so those states collapse into two sinks (s far above / far
below). In a negative base the sign of s flips on every letter and the two
sinks swap with it.

Usage:
  from relations.linear import Relop, comparison_relation
  dfa = comparison_relation([47, -176], -140, NumerationSystem(16), Relop.LE)
"""
from __future__ import annotations

import logging
from enum import Enum
from typing import Sequence

import numpy as np

from automata.dfa import (
    DEFAULT_STATE_CAP,
    Dfa,
    StateLimitError,
    _renumber,
    complement,
    letter_digits,
    minimize,
    universal,
)
from numeration.digits import NumerationSystem

logger = logging.getLogger(__name__)


class Relop(str, Enum):
    EQ = "="
    NE = "!="
    LT = "<"
    LE = "<="
    GT = ">"
    GE = ">="

    def holds(self, left: int, right: int) -> bool:
        return {
            Relop.EQ: left == right,
            Relop.NE: left != right,
            Relop.LT: left < right,
            Relop.LE: left <= right,
            Relop.GT: left > right,
            Relop.GE: left >= right,
        }[self]

    def flipped(self) -> "Relop":
        """The relop that holds for (right, left) whenever self holds for (left, right)."""
        return {Relop.LT: Relop.GT, Relop.LE: Relop.GE, Relop.GT: Relop.LT, Relop.GE: Relop.LE}.get(self, self)


def _remainder_automaton(
    coefficients: np.ndarray, constant: int, system: NumerationSystem, ordered: bool, state_cap: int
) -> Dfa:
    signature = (system,) * coefficients.size
    delta = letter_digits(signature) @ coefficients
    bound = max(abs(constant), int(np.abs(coefficients).sum()))
    if 2 * bound + 3 > state_cap:
        raise StateLimitError(f"linear constraint needs {2 * bound + 3} states (cap {state_cap})")

    values = np.arange(-bound, bound + 1, dtype=np.int64)
    above, below = values.size, values.size + 1
    nxt = system.base * values[:, None] + delta[None, :]
    table = np.where(nxt > bound, above, np.where(nxt < -bound, below, nxt + bound))
    if ordered and system.is_negative:
        sinks = np.array([[below], [above]])
    elif ordered:
        sinks = np.array([[above], [below]])
    else:
        sinks = np.array([[above], [above]])
    table = np.vstack([table, np.broadcast_to(sinks, (2, delta.size))])

    if ordered:
        accepting = np.concatenate([values <= constant, [False, True]])
    else:
        accepting = np.concatenate([values == constant, [False, False]])
    table, accepting = _renumber(table, accepting, start=bound)
    return minimize(Dfa(signature, table, accepting))


def comparison_relation(
    coefficients: Sequence[int],
    constant: int,
    system: NumerationSystem,
    relop: Relop | str,
    state_cap: int = DEFAULT_STATE_CAP,
) -> Dfa:
    """Automaton over len(coefficients) tracks of `system` accepting sum(a*x) relop constant."""
    relop = Relop(relop)
    coefficients = np.asarray(list(coefficients), dtype=np.int64)
    if coefficients.size == 0 or not coefficients.any():
        return universal((system,) * coefficients.size, relop.holds(0, constant))
    if relop is Relop.EQ:
        return _remainder_automaton(coefficients, constant, system, False, state_cap)
    if relop is Relop.NE:
        return complement(_remainder_automaton(coefficients, constant, system, False, state_cap))
    if relop is Relop.LE:
        return _remainder_automaton(coefficients, constant, system, True, state_cap)
    if relop is Relop.LT:
        return _remainder_automaton(coefficients, constant - 1, system, True, state_cap)
    if relop is Relop.GE:
        return _remainder_automaton(-coefficients, -constant, system, True, state_cap)
    return _remainder_automaton(-coefficients, -constant - 1, system, True, state_cap)


def eq_relation(system: NumerationSystem) -> Dfa:
    return comparison_relation([1, -1], 0, system, Relop.EQ)


def const_eq(constant: int, system: NumerationSystem) -> Dfa:
    return comparison_relation([1], constant, system, Relop.EQ)


def sign_relation(system: NumerationSystem, relop: Relop | str) -> Dfa:
    """x relop 0; in a positive base only x = 0 and x > 0 are informative."""
    return comparison_relation([1], 0, system, relop)
